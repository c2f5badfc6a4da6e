"""Command-line surface for the eigenvalue toolkit.

Subcommands tie classification, prediction, Newton refinement, scan
certification, winding counts, quadrature-vs-asymptotics checks, and
eigenfunction profiling into reproducible runs:

  classify     --k K --l L
  predict      --k K --l L --M M
  refine       --k K --l L --M M [--seed re,im]
  scan         --k K --l L --from A --to B --out PATH [--format csv|json]
  winding      --k K --l L --center re,im --radius R
  check-watson --alpha A --T T1,T2,...
  profile      --k K --l L --zeta re,im --out PATH

All numeric output is printed with 15 significant digits and a `.` decimal
point regardless of locale (the float formatting path never consults the
locale).  Exit status: 0 success, 1 validation error (bad flags or
parameter-domain violations), 2 numeric failure (integration breakdown,
unconverged quadrature, uncertifiable winding contour, refinement that did
not certify).

An optional `--config PATH` file (key=value lines, `#` comments) supplies
defaults for any long flag of the chosen subcommand; explicit flags always
override file values.  Files written by scan/profile start with a
`#schema=1` comment pinning the column order.
"""

from __future__ import annotations

import argparse
import math
import sys

from .asymptotics import (
    prediction_pair,
    predict_zeta,
    watson_I,
    watson_phi,
)
from .params import OperatorParams, classify_case, derive_params, stratify
from .quadrature import ToleranceNotReached, eval_I, eval_phi
from .rootfind import (
    CSV_COLUMNS,
    WindingError,
    _fmt,
    _record_cells,
    records_to_csv,
    records_to_json,
    refine,
    scan,
    winding_number,
)
from .shooting import (
    DEFAULT_ATOL,
    DEFAULT_RTOL,
    IntegrationError,
    NotAnEigenvalueError,
    eigenfunction_profile,
    make_config,
)

PROFILE_SCHEMA = 1
PROFILE_COLUMNS = ("x", "log10_abs_f", "arg_f")


class UsageError(Exception):
    """Flag-level problem (unknown flag, malformed value, bad config key)."""


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage problems as exit-1 validation
    errors instead of calling sys.exit(2)."""

    def error(self, message):
        raise UsageError(message)


def _complex_pair(text: str) -> complex:
    """Parse 're,im' into a complex number."""
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(
            f"expected 're,im' with exactly one comma, got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _float_list(text: str) -> tuple[float, ...]:
    """Parse a comma-separated float list such as '20,50,100,200'."""
    try:
        values = tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not values:
        raise argparse.ArgumentTypeError("empty value list")
    return values


def _fmt_complex(z: complex) -> str:
    re, im = _fmt(z.real), _fmt(z.imag)
    sign = "-" if im.startswith("-") else "+"
    return f"{re}{sign}{im.lstrip('-')}i"


def _build_parsers():
    """Build the top-level parser; return (parser, {name: subparser})."""
    top = _Parser(prog="hypoeig", description=(
        "Eigenvalue toolkit for -f'' + (x^l - zeta*x^k)^2 f = 0 on R: "
        "classify the (k,l) family, predict/refine/certify the complex "
        "eigenvalue array, and validate the supporting asymptotics."))
    subs = top.add_subparsers(dest="command", metavar="COMMAND")
    registry: dict[str, argparse.ArgumentParser] = {}

    def new(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = subs.add_parser(name, help=help_text)
        sub.add_argument("--config", type=str, default=None,
                         help="key=value defaults file; flags override")
        registry[name] = sub
        return sub

    def add_kl(sub):
        sub.add_argument("--k", type=int, required=True,
                         help="lower exponent k >= 0")
        sub.add_argument("--l", type=int, required=True,
                         help="upper exponent l > k")

    def add_shooting(sub):
        sub.add_argument("--rtol", type=float, default=DEFAULT_RTOL,
                         help="integrator relative tolerance")
        sub.add_argument("--atol", type=float, default=DEFAULT_ATOL,
                         help="integrator absolute tolerance")
        sub.add_argument("--x-match", type=float, default=0.0,
                         dest="x_match", help="matching station")

    sub = new("classify", "case class and characteristic-variety strata")
    add_kl(sub)

    sub = new("predict", "closed-form eigenvalue predictors at index M")
    add_kl(sub)
    sub.add_argument("--M", type=int, required=True, help="array index")

    sub = new("refine", "Newton-refine one eigenvalue from its seed")
    add_kl(sub)
    sub.add_argument("--M", type=int, required=True, help="array index")
    sub.add_argument("--seed", type=_complex_pair, default=None,
                     metavar="RE,IM", help="override the predictor seed")
    sub.add_argument("--tol", type=float, default=1e-12,
                     help="Newton relative step tolerance")
    add_shooting(sub)

    sub = new("scan", "refine and certify a range of indices to a file")
    add_kl(sub)
    sub.add_argument("--from", type=int, required=True, dest="M_from",
                     help="first index")
    sub.add_argument("--to", type=int, required=True, dest="M_to",
                     help="last index (inclusive)")
    sub.add_argument("--out", type=str, required=True, help="output path")
    sub.add_argument("--format", choices=("csv", "json"), default="csv",
                     help="output format (default csv)")
    sub.add_argument("--tol", type=float, default=1e-12,
                     help="Newton relative step tolerance")
    add_shooting(sub)

    sub = new("winding", "argument-principle zero count on a circle")
    add_kl(sub)
    sub.add_argument("--center", type=_complex_pair, required=True,
                     metavar="RE,IM", help="contour center")
    sub.add_argument("--radius", type=float, required=True,
                     help="contour radius")
    sub.add_argument("--samples", type=int, default=64,
                     help="initial contour sample count")

    sub = new("check-watson", "quadrature vs Watson-lemma error table")
    sub.add_argument("--alpha", type=float, required=True,
                     help="singularity exponent in (0,1)")
    sub.add_argument("--T", type=_float_list, required=True, metavar="T1,T2,...",
                     dest="T_values", help="evaluation points T > 0")
    sub.add_argument("--tol", type=float, default=1e-9,
                     help="quadrature tolerance")

    sub = new("profile", "sample a certified eigenfunction to CSV")
    add_kl(sub)
    sub.add_argument("--zeta", type=_complex_pair, required=True,
                     metavar="RE,IM", help="certified eigenvalue")
    sub.add_argument("--out", type=str, required=True, help="output path")
    sub.add_argument("--samples", type=int, default=201,
                     help="number of sample stations")
    add_shooting(sub)

    return top, registry


def _apply_config(argv: list[str], registry) -> None:
    """Inject key=value file entries as subcommand defaults.

    The file is located by pre-scanning argv (so it can be read before the
    real parse), keys are long-flag names with '-' or '_' spelling, and
    values run through the same type converters as the flags.  Explicit
    flags override because only parser *defaults* are rewritten; flags
    satisfied by the file are no longer required.
    """
    command = next((tok for tok in argv if tok in registry), None)
    if command is None:
        return
    path = None
    tokens = argv[argv.index(command) + 1:]
    for i, tok in enumerate(tokens):
        if tok == "--config":
            if i + 1 >= len(tokens):
                raise UsageError("--config requires a path")
            path = tokens[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    if path is None:
        return
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None

    sub = registry[command]
    actions = {a.dest: a for a in sub._actions if a.option_strings}
    option_map = {}
    for action in actions.values():
        for opt in action.option_strings:
            option_map[opt.lstrip("-").replace("-", "_")] = action

    overrides = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(
                f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        action = option_map.get(key)
        if action is None or key == "config":
            raise UsageError(
                f"{path}:{lineno}: unknown key {key!r} for {command}")
        convert = action.type if action.type is not None else str
        try:
            converted = convert(value)
        except (argparse.ArgumentTypeError, ValueError) as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {exc}") \
                from None
        if action.choices is not None and converted not in action.choices:
            raise UsageError(
                f"{path}:{lineno}: {key} must be one of "
                f"{sorted(action.choices)}")
        overrides[action.dest] = converted
        action.required = False
    sub.set_defaults(**overrides)


def _cmd_classify(args) -> int:
    p = OperatorParams(args.k, args.l)
    case = classify_case(p)
    report = stratify(p)
    variety = ("symplectic" if all(s.symplectic for s in report.strata)
               else "not symplectic")
    print(f"{case.value}; characteristic variety {variety}; "
          f"{report.verdict.replace('-', ' ')}")
    for s in report.strata:
        kind = "symplectic" if s.symplectic else "not symplectic"
        print(f"  {s.description}: codimension {s.codimension}, {kind}")
    return 0


def _cmd_predict(args) -> int:
    p = OperatorParams(args.k, args.l)
    pair = prediction_pair(p, args.M)
    print(f"M = {args.M}")
    print(f"xi_paper    = {_fmt_complex(pair.xi_paper)}")
    print(f"xi_solved   = {_fmt_complex(pair.xi_solved)}")
    print(f"zeta_paper  = {_fmt_complex(pair.zeta_paper)}")
    print(f"zeta_solved = {_fmt_complex(pair.zeta_solved)}")
    print(f"zeta_direct = {_fmt_complex(predict_zeta(p, args.M))}")
    return 0


def _print_record(record) -> None:
    width = max(len(c) for c in CSV_COLUMNS)
    for name, cell in zip(CSV_COLUMNS, _record_cells(record)):
        print(f"{name:<{width}} = {cell}")


def _cmd_refine(args) -> int:
    p = OperatorParams(args.k, args.l)
    seed = args.seed
    if seed is None:
        seed = prediction_pair(p, args.M).zeta_solved
    cfg = make_config(p, seed, rtol=args.rtol, atol=args.atol,
                      x_match=args.x_match)
    record = refine(seed, p, cfg, tol=args.tol, M=args.M)
    _print_record(record)
    return 0 if record.certified else 2


def _cmd_scan(args) -> int:
    p = OperatorParams(args.k, args.l)
    records = scan(p, args.M_from, args.M_to, tol=args.tol,
                   rtol=args.rtol, atol=args.atol, x_match=args.x_match)
    if args.format == "csv":
        text = records_to_csv(records)
    else:
        text = records_to_json(records)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    for r in records:
        status = "certified" if r.certified else f"FAILED ({r.failure})"
        print(f"M={r.M} zeta={_fmt_complex(r.zeta_refined)} "
              f"residual={_fmt(r.residual)} {status}")
    print(f"wrote {len(records)} records to {args.out}")
    return 0 if all(r.certified for r in records) else 2


def _cmd_winding(args) -> int:
    p = OperatorParams(args.k, args.l)
    report = winding_number(args.center, args.radius, p,
                            samples=args.samples)
    print(f"center             = {_fmt_complex(report.center)}")
    print(f"radius             = {_fmt(report.radius)}")
    print(f"samples            = {report.samples}")
    print(f"winding            = {report.winding}")
    print(f"min_abs_on_contour = {_fmt(report.min_abs_on_contour)}")
    return 0


def _cmd_check_watson(args) -> int:
    alpha = args.alpha
    print(f"alpha = {_fmt(alpha)}")
    print("T relerr_I relerr_phi_plus relerr_phi_minus")
    worst = {"I": 0.0, "phi_plus": 0.0, "phi_minus": 0.0}
    for T in args.T_values:
        rel_I = abs(eval_I(T, alpha, tol=args.tol).value
                    / watson_I(T, alpha) - 1.0)
        rel_p = abs(eval_phi(T, alpha, +1, tol=args.tol).value
                    / watson_phi(T, alpha, +1) - 1.0)
        rel_m = abs(eval_phi(T, alpha, -1, tol=args.tol).value
                    / watson_phi(T, alpha, -1) - 1.0)
        worst["I"] = max(worst["I"], T * rel_I)
        worst["phi_plus"] = max(worst["phi_plus"], T * rel_p)
        worst["phi_minus"] = max(worst["phi_minus"], T * rel_m)
        print(f"{_fmt(T)} {_fmt(rel_I)} {_fmt(rel_p)} {_fmt(rel_m)}")
    print(f"C_I         = {_fmt(worst['I'])}")
    print(f"C_phi_plus  = {_fmt(worst['phi_plus'])}")
    print(f"C_phi_minus = {_fmt(worst['phi_minus'])}")
    return 0


def profile_rows_to_csv(rows) -> str:
    """Serialize profile samples: `#schema=1`, header, then one
    (x, log10_abs_f, arg_f) row per station at 15 significant digits."""
    out = [f"#schema={PROFILE_SCHEMA}", ",".join(PROFILE_COLUMNS)]
    for x, log_abs, arg in rows:
        out.append(f"{_fmt(x)},{_fmt(log_abs)},{_fmt(arg)}")
    return "\n".join(out) + "\n"


def profile_rows_from_csv(text: str) -> list[tuple[float, float, float]]:
    """Parse profile CSV written by profile_rows_to_csv."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != f"#schema={PROFILE_SCHEMA}":
        raise ValueError(f"missing #schema={PROFILE_SCHEMA} header")
    if lines[1] != ",".join(PROFILE_COLUMNS):
        raise ValueError(f"unexpected column header {lines[1]!r}")
    rows = []
    for ln in lines[2:]:
        cells = ln.split(",")
        if len(cells) != 3:
            raise ValueError(f"expected 3 cells, got {ln!r}")
        rows.append(tuple(float(c) for c in cells))
    return rows


def _cmd_profile(args) -> int:
    p = OperatorParams(args.k, args.l)
    cfg = make_config(p, args.zeta, rtol=args.rtol, atol=args.atol,
                      x_match=args.x_match)
    rows = eigenfunction_profile(args.zeta, p, cfg, args.samples)
    rows10 = [(x, log_abs / math.log(10.0), arg) for x, log_abs, arg in rows]
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(profile_rows_to_csv(rows10))
    print(f"wrote {len(rows10)} samples to {args.out}")
    return 0


_COMMANDS = {
    "classify": _cmd_classify,
    "predict": _cmd_predict,
    "refine": _cmd_refine,
    "scan": _cmd_scan,
    "winding": _cmd_winding,
    "check-watson": _cmd_check_watson,
    "profile": _cmd_profile,
}


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    argv = list(argv)
    top, registry = _build_parsers()
    try:
        _apply_config(argv, registry)
        args = top.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required (see --help)")
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (NotAnEigenvalueError, IntegrationError, ToleranceNotReached,
            WindingError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
