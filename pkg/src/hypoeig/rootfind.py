"""Newton refinement and argument-principle certification of eigenvalues.

Seeds from the closed-form predictors are polished by complex Newton
iteration on the connection mismatch D^(zeta) (analytic in zeta at fixed
config, so Newton converges quadratically until the integration noise
floor).  A zero is *certified* by two independent facts:

  * residual:  |D^| <= CERTIFICATION_RESIDUAL at the refined point;
  * winding:   the total argument increment of D^ around a small circle
    equals 2*pi (exactly one zero enclosed), with each discrete increment
    kept below pi by adaptive sample doubling.

Records carry the distances of the refined xi to BOTH closed-form
predictors (the printed formula and the solved bracket root), because the
two disagree for even m and the numerics are the adjudicator; the scan
table is the deliverable either way.
"""

from __future__ import annotations

import cmath
import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .asymptotics import (predict_xi_paper, predict_xi_solved, prediction_pair,
                          zeta_to_xi)
from .params import OperatorParams, classify_case, derive_params, is_open_case
from .shooting import (CERTIFICATION_RESIDUAL, DEFAULT_ATOL, DEFAULT_RTOL,
                       IntegrationError, ShootingConfig, connection_mismatch,
                       make_config)

MAX_NEWTON_ITERS = 25
# Newton stops early once the residual is this small (below the target
# certification residual by a margin).
NEWTON_RESIDUAL_STOP = 1e-12
# Relative finite-difference step for the Newton derivative.
FD_STEP_REL = 1e-6
# A Newton step wandering this far (relative) from the seed has left the
# basin the asymptotic seed is valid for.
BASIN_RADIUS_REL = 0.5
MIN_CONTOUR_SAMPLES = 64
MAX_CONTOUR_SAMPLES = 8192
# Contour evaluations with |D^| at or below this are "passing through a zero".
CONTOUR_MIN_ABS = 1e-10


class WindingError(RuntimeError):
    """Winding count could not be validly computed on this contour."""


@dataclass(frozen=True)
class EigenvalueRecord:
    """One refined (and possibly certified) eigenvalue.

    `M` and the seed-gap fields are present when the record came from an
    indexed prediction; `winding` is attached by contour certification;
    `failure` carries the reason when refinement did not converge.
    """

    M: int | None
    zeta_seed: complex
    xi_seed: complex | None
    zeta_refined: complex
    xi_refined: complex | None
    residual: float
    newton_iters: int
    certified: bool
    winding: int | None = None
    seed_gap_paper: float | None = None
    seed_gap_solved: float | None = None
    failure: str | None = None


@dataclass(frozen=True)
class WindingReport:
    center: complex
    radius: float
    samples: int
    winding: int
    min_abs_on_contour: float


def refine(zeta_seed: complex, p: OperatorParams,
           cfg: ShootingConfig | None = None, tol: float = 1e-12,
           M: int | None = None) -> EigenvalueRecord:
    """Newton-refine a seed to an eigenvalue of the connection problem.

    Central finite-difference derivative with step FD_STEP_REL*|zeta|;
    stops when |dzeta| <= tol*|zeta| or |D^| <= NEWTON_RESIDUAL_STOP.  The
    returned point is the best (lowest-residual) iterate seen, and the
    record is marked certified only when the iteration converged and the
    final residual is at or below CERTIFICATION_RESIDUAL.  cfg is frozen
    across the entire iteration (required for D^ to stay analytic-like);
    None builds one from the seed.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if cfg is None:
        cfg = make_config(p, zeta_seed)
    d = derive_params(p)

    z = complex(zeta_seed)
    dhat = connection_mismatch(z, p, cfg)
    best_z, best_abs = z, abs(dhat)
    iters = 0
    failure: str | None = None
    converged = abs(dhat) <= NEWTON_RESIDUAL_STOP
    while not converged and iters < MAX_NEWTON_ITERS:
        iters += 1
        try:
            h = FD_STEP_REL * max(abs(z), 1e-6)
            d_plus = connection_mismatch(z + h, p, cfg)
            d_minus = connection_mismatch(z - h, p, cfg)
            deriv = (d_plus - d_minus) / (2.0 * h)
            if deriv == 0:
                failure = "vanishing finite-difference derivative"
                break
            step = -dhat / deriv
            z_new = z + step
            if abs(z_new - zeta_seed) > BASIN_RADIUS_REL * abs(zeta_seed):
                failure = ("Newton step left the seed's validity region "
                           f"(|z - seed| > {BASIN_RADIUS_REL:g}*|seed|)")
                break
            z = z_new
            dhat = connection_mismatch(z, p, cfg)
        except (ValueError, IntegrationError) as exc:
            failure = f"mismatch evaluation failed during iteration: {exc}"
            break
        if abs(dhat) < best_abs:
            best_z, best_abs = z, abs(dhat)
        if abs(step) <= tol * abs(z) or abs(dhat) <= NEWTON_RESIDUAL_STOP:
            converged = True
    if not converged and failure is None:
        failure = f"no convergence in {MAX_NEWTON_ITERS} iterations"

    xi_seed = xi_refined = None
    gap_paper = gap_solved = None
    if d.q is not None:
        xi_seed = zeta_to_xi(zeta_seed, d)
        xi_refined = zeta_to_xi(best_z, d)
        case = classify_case(p)
        if M is not None and is_open_case(case):
            gap_paper = abs(xi_refined - predict_xi_paper(d, case, M))
            gap_solved = abs(xi_refined - predict_xi_solved(d, case, M))
    return EigenvalueRecord(
        M=M, zeta_seed=complex(zeta_seed), xi_seed=xi_seed,
        zeta_refined=best_z, xi_refined=xi_refined, residual=best_abs,
        newton_iters=iters,
        certified=failure is None and best_abs <= CERTIFICATION_RESIDUAL,
        seed_gap_paper=gap_paper, seed_gap_solved=gap_solved,
        failure=failure)


def winding_number(center: complex, radius: float, p: OperatorParams,
                   cfg: ShootingConfig | None = None,
                   samples: int = MIN_CONTOUR_SAMPLES) -> WindingReport:
    """Winding of D^ around the circle |zeta - center| = radius.

    Accumulates argument increments between consecutive contour samples,
    doubling the sample count until every increment is below pi (up to
    MAX_CONTOUR_SAMPLES).  The count equals the number of eigenvalues
    enclosed: positive real renormalization factors leave arg D^ equal to
    the argument of an analytic function with the same zeros.
    """
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    if samples < MIN_CONTOUR_SAMPLES:
        raise ValueError(
            f"samples must be >= {MIN_CONTOUR_SAMPLES}, got {samples}")
    if cfg is None:
        cfg = make_config(p, center)

    cache: dict[Fraction, complex] = {}

    def at(frac: Fraction) -> complex:
        val = cache.get(frac)
        if val is None:
            theta = 2.0 * math.pi * float(frac)
            zeta = center + radius * cmath.exp(1j * theta)
            val = connection_mismatch(zeta, p, cfg)
            cache[frac] = val
        return val

    n = samples
    while True:
        values = [at(Fraction(j, n)) for j in range(n)]
        min_abs = min(abs(v) for v in values)
        if min_abs <= CONTOUR_MIN_ABS:
            raise WindingError(
                f"contour passes within {CONTOUR_MIN_ABS:g} of a zero "
                f"(min |D^| = {min_abs:.3e}); shrink or move the contour")
        increments = [cmath.phase(values[(j + 1) % n] / values[j])
                      for j in range(n)]
        if max(abs(a) for a in increments) < math.pi * 0.9:
            total = sum(increments)
            return WindingReport(center=center, radius=radius, samples=n,
                                 winding=round(total / (2.0 * math.pi)),
                                 min_abs_on_contour=min_abs)
        if 2 * n > MAX_CONTOUR_SAMPLES:
            raise WindingError(
                f"argument increments still reach pi at "
                f"{MAX_CONTOUR_SAMPLES} samples; contour too close to a zero")
        n *= 2


def zeta_spacing(p: OperatorParams, M: int) -> float:
    """Predicted |zeta_{M+1} - zeta_M|, the contour-radius scale."""
    pair_hi = prediction_pair(p, M + 1)
    pair_lo = prediction_pair(p, M)
    return abs(pair_hi.zeta_solved - pair_lo.zeta_solved)


def contour_radius(p: OperatorParams, M: int) -> float:
    """Certification contour radius min(0.1*spacing, 0.5) at index M."""
    return min(0.1 * zeta_spacing(p, M), 0.5)


def scan(p: OperatorParams, M_from: int, M_to: int,
         cfg: ShootingConfig | None = None,
         tol: float = 1e-12,
         rtol: float = DEFAULT_RTOL,
         atol: float = DEFAULT_ATOL,
         x_match: float = 0.0) -> list[EigenvalueRecord]:
    """Refine the predicted array for M in [M_from, M_to].

    Seeds come from the solved bracket roots (predict_xi_solved mapped to
    the zeta plane).  Per-M failures are recorded in-line and the scan
    continues.  cfg=None sizes a fresh config per M from (rtol, atol,
    x_match); an explicit cfg is used unchanged for every M.
    """
    case = classify_case(p)
    if not is_open_case(case):
        raise ValueError(
            f"scan requires an open case, got {case.value} for "
            f"(k,l)=({p.k},{p.l})")
    if M_from < 1:
        raise ValueError(f"M_from must be >= 1, got {M_from}")
    records: list[EigenvalueRecord] = []
    for M in range(M_from, M_to + 1):
        pair = prediction_pair(p, M)
        seed = pair.zeta_solved
        cfg_M = cfg if cfg is not None else make_config(
            p, seed, rtol=rtol, atol=atol, x_match=x_match)
        try:
            records.append(refine(seed, p, cfg_M, tol=tol, M=M))
        except Exception as exc:  # noqa: BLE001 - per-M failures are data
            d = derive_params(p)
            records.append(EigenvalueRecord(
                M=M, zeta_seed=seed, xi_seed=zeta_to_xi(seed, d),
                zeta_refined=seed, xi_refined=zeta_to_xi(seed, d),
                residual=math.inf, newton_iters=0, certified=False,
                failure=f"{type(exc).__name__}: {exc}"))
    return records


# ---------------------------------------------------------------------------
# Serialization (CSV and JSON); schema fixed and versioned.

CSV_SCHEMA = 1
CSV_COLUMNS = [
    "M", "zeta_seed_re", "zeta_seed_im", "xi_seed_re", "xi_seed_im",
    "zeta_re", "zeta_im", "xi_re", "xi_im", "residual", "newton_iters",
    "certified", "winding", "seed_gap_paper", "seed_gap_solved", "failure",
]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    return f"{value:.15g}"


def _record_cells(r: EigenvalueRecord) -> list[str]:
    return [
        _fmt(r.M),
        _fmt(r.zeta_seed.real), _fmt(r.zeta_seed.imag),
        _fmt(None if r.xi_seed is None else r.xi_seed.real),
        _fmt(None if r.xi_seed is None else r.xi_seed.imag),
        _fmt(r.zeta_refined.real), _fmt(r.zeta_refined.imag),
        _fmt(None if r.xi_refined is None else r.xi_refined.real),
        _fmt(None if r.xi_refined is None else r.xi_refined.imag),
        _fmt(r.residual), _fmt(r.newton_iters), _fmt(r.certified),
        _fmt(r.winding), _fmt(r.seed_gap_paper), _fmt(r.seed_gap_solved),
        r.failure or "",
    ]


def records_to_csv(records: list[EigenvalueRecord]) -> str:
    buf = io.StringIO()
    buf.write(f"#schema={CSV_SCHEMA}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(_record_cells(r))
    return buf.getvalue()


def _parse_opt_float(cell: str) -> float | None:
    return None if cell == "" else float(cell)


def records_from_csv(text: str) -> list[EigenvalueRecord]:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#schema="):
        raise ValueError("missing #schema header line")
    schema = int(lines[0].split("=", 1)[1])
    if schema != CSV_SCHEMA:
        raise ValueError(f"unsupported schema {schema}")
    reader = csv.reader(lines[1:])
    header = next(reader)
    if header != CSV_COLUMNS:
        raise ValueError(f"unexpected columns {header}")
    records = []
    for row in reader:
        cells = dict(zip(CSV_COLUMNS, row))
        xi_seed = (None if cells["xi_seed_re"] == "" else
                   complex(float(cells["xi_seed_re"]),
                           float(cells["xi_seed_im"])))
        xi_ref = (None if cells["xi_re"] == "" else
                  complex(float(cells["xi_re"]), float(cells["xi_im"])))
        records.append(EigenvalueRecord(
            M=None if cells["M"] == "" else int(cells["M"]),
            zeta_seed=complex(float(cells["zeta_seed_re"]),
                              float(cells["zeta_seed_im"])),
            xi_seed=xi_seed,
            zeta_refined=complex(float(cells["zeta_re"]),
                                 float(cells["zeta_im"])),
            xi_refined=xi_ref,
            residual=float(cells["residual"]),
            newton_iters=int(cells["newton_iters"]),
            certified=cells["certified"] == "1",
            winding=None if cells["winding"] == "" else int(cells["winding"]),
            seed_gap_paper=_parse_opt_float(cells["seed_gap_paper"]),
            seed_gap_solved=_parse_opt_float(cells["seed_gap_solved"]),
            failure=cells["failure"] or None,
        ))
    return records


def _complex_pair(z: complex | None):
    return None if z is None else [float(f"{z.real:.15g}"),
                                   float(f"{z.imag:.15g}")]


def _opt_15g(v: float | None):
    return None if v is None else float(f"{v:.15g}")


def records_to_json(records: list[EigenvalueRecord]) -> str:
    objs = []
    for r in records:
        objs.append({
            "M": r.M,
            "zeta_seed": _complex_pair(r.zeta_seed),
            "xi_seed": _complex_pair(r.xi_seed),
            "zeta_refined": _complex_pair(r.zeta_refined),
            "xi_refined": _complex_pair(r.xi_refined),
            "residual": _opt_15g(r.residual),
            "newton_iters": r.newton_iters,
            "certified": r.certified,
            "winding": r.winding,
            "seed_gap_paper": _opt_15g(r.seed_gap_paper),
            "seed_gap_solved": _opt_15g(r.seed_gap_solved),
            "failure": r.failure,
        })
    return json.dumps({"schema": CSV_SCHEMA, "records": objs},
                      indent=2, sort_keys=True) + "\n"


def records_from_json(text: str) -> list[EigenvalueRecord]:
    doc = json.loads(text)
    if doc.get("schema") != CSV_SCHEMA:
        raise ValueError(f"unsupported schema {doc.get('schema')}")

    def cx(pair):
        return None if pair is None else complex(pair[0], pair[1])

    records = []
    for o in doc["records"]:
        records.append(EigenvalueRecord(
            M=o["M"], zeta_seed=cx(o["zeta_seed"]), xi_seed=cx(o["xi_seed"]),
            zeta_refined=cx(o["zeta_refined"]), xi_refined=cx(o["xi_refined"]),
            residual=o["residual"], newton_iters=o["newton_iters"],
            certified=o["certified"], winding=o["winding"],
            seed_gap_paper=o["seed_gap_paper"],
            seed_gap_solved=o["seed_gap_solved"], failure=o["failure"]))
    return records
