"""Two-sided WKB shooting for f'' = (x^l - zeta*x^k)^2 f.

A complex zeta is an eigenvalue exactly when the solution recessive at
+inf continues to the solution recessive at -inf.  With

    W(x) = x^{l+1}/(l+1) - zeta x^{k+1}/(k+1),

the recessive branches are  f ~ x^{-l/2} e^{-W(x)}  as x -> +inf  and
f ~ x^{-l/2} e^{(-1)^l W(x)}  as x -> -inf (the sign makes Re(exponent)
-> -inf along each end).  Each branch is planted at the far end and
integrated inward toward the matching point, and the scale-invariant
connection mismatch

    D^(zeta) = (f+ f-' - f- f+') / (||(f+, f+')|| * ||(f-, f-')||)

vanishes iff the branches are linearly dependent, i.e. iff zeta is an
eigenvalue (of the x_inf-truncated problem; the truncation error is
~e^{-2*decay} and is bounded empirically by the x_inf+25% robustness
check).

Integration runs along straight rays x = e^{i beta} s through the origin
rather than along the real axis.  The reason is quantitative: the planted
branch's log-magnitude is mu = Re(sigma W), and for eigenvalue-sized
complex zeta (arg zeta near pi/(2(q+2))) mu is *not* monotone along the
real axis -- it rises inward, peaks near |x| ~ (Re zeta)^{1/m}, then falls
by about |zeta|^{(l+1)/m} * m cos(psi0)^{(l+1)/m}/((k+1)(l+1)) nats before
reaching the origin.  Over that falling stretch the planted branch is the
*sub*dominant one, so roundoff injected near the peak is amplified by
e^{2*bump}; by M ~ 8 the bump exceeds 17 nats and the mismatch floor
reaches O(1), independent of tolerances.  Solutions are entire in x, so
the same two branches can be transported along any path: rotating each
side's ray so the zeta-term of mu arrives at the origin going uphill
(cos(psi0 + (k+1)beta) <= 0), while keeping the far field contractive
(|beta| < pi/(2(l+1))), removes the bump up to a small clamped remainder
and restores a near-roundoff mismatch floor at every M.  The computed
D^ is the same analytic function of zeta (up to a constant unimodular
factor from d/ds = omega d/dx) with the same zeros.

All renormalization divisors are real and positive and cancel in D^, so
arg D^ equals the argument of an analytic function of zeta as long as the
config (x_inf, ray angles, tolerances) is held fixed -- that is what
makes contour winding counts of D^ trustworthy zero counts.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

from . import _kernels
from .params import OperatorParams

# |D^| at or below this value certifies an eigenvalue (shared with rootfind).
CERTIFICATION_RESIDUAL = 1e-10
# Decay exponent (in nats) required at both planted endpoints.
DECAY_TARGET = 40.0
DEFAULT_RTOL = 1e-12
DEFAULT_ATOL = 0.0
DEFAULT_RENORM_THRESHOLD = 1e100
DEFAULT_MAX_STEPS = 10 ** 7
# Ray selection: rotate until the zeta-term phase sits this far past pi/2
# (strictly uphill arrival at the origin) ...
ARRIVAL_MARGIN = 0.1
# ... but never leave the sector where the far field keeps the planted
# branch recessive: |beta| <= fraction * pi/(2(l+1)).
RAY_SECTOR_FRACTION = 0.9


class IntegrationError(RuntimeError):
    """Adaptive integration failed; carries the failure location."""

    def __init__(self, message: str, x_reached: float, status: int):
        super().__init__(message)
        self.x_reached = x_reached
        self.status = status


class NotAnEigenvalueError(ValueError):
    """Profile requested at a zeta whose residual is above certification."""

    def __init__(self, residual: float):
        super().__init__(
            f"zeta is not a certified eigenvalue: |D^| = {residual:.3e} "
            f"> {CERTIFICATION_RESIDUAL:g}")
        self.residual = residual


@dataclass(frozen=True)
class ShootingConfig:
    """Frozen per-run integration parameters.

    Freezing matters: refine and winding evaluate D^ at many nearby zeta
    with one config, keeping D^ an analytic function times a positive
    factor.  beta_plus/beta_minus are the integration-ray angles for the
    two sides (0 = real axis); build instances with make_config unless
    overriding for robustness studies.
    """

    x_inf: float
    x_match: float = 0.0
    rtol: float = DEFAULT_RTOL
    atol: float = DEFAULT_ATOL
    renorm_threshold: float = DEFAULT_RENORM_THRESHOLD
    max_steps: int = DEFAULT_MAX_STEPS
    beta_plus: float = 0.0
    beta_minus: float = 0.0

    def __post_init__(self):
        if self.x_inf <= 0:
            raise ValueError(f"x_inf must be positive, got {self.x_inf}")
        if not (abs(self.x_match) < self.x_inf):
            raise ValueError(
                f"x_match={self.x_match} must lie inside (-x_inf, x_inf)")
        if self.rtol <= 0 or self.atol < 0:
            raise ValueError(
                f"need rtol > 0 and atol >= 0, got rtol={self.rtol}, "
                f"atol={self.atol}")
        if self.renorm_threshold <= 1:
            raise ValueError("renorm_threshold must exceed 1")
        if self.max_steps < 1:
            raise ValueError("max_steps must be positive")
        if not (abs(self.beta_plus) < 0.5 * math.pi
                and abs(self.beta_minus) < 0.5 * math.pi):
            raise ValueError("ray angles must satisfy |beta| < pi/2")


@dataclass(frozen=True)
class SolutionState:
    """(f, df/ds) registers at path parameter s = x.

    The true solution is e^{log_scale} (f, fp).  On a rotated ray the
    physical point is omega*x and fp = omega * df/dx; with omega = 1 the
    fields are the plain real-axis values.
    """

    x: float
    f: complex
    fp: complex
    log_scale: float = 0.0


def wkb_phase(x: complex, zeta: complex, p: OperatorParams) -> complex:
    """W(x) = x^{l+1}/(l+1) - zeta x^{k+1}/(k+1) (x may be complex)."""
    return x ** (p.l + 1) / (p.l + 1) - zeta * x ** (p.k + 1) / (p.k + 1)


def turning_radius(zeta: complex, p: OperatorParams) -> float:
    """|zeta|^{1/m}: beyond this |x| the WKB branches separate cleanly."""
    m = p.l - p.k
    return abs(zeta) ** (1.0 / m)


def recessive_sign(end: int, p: OperatorParams) -> float:
    """Sign s in f ~ x^{-l/2} e^{s W(x)}: -1 at +inf, (-1)^l at -inf."""
    if end not in (+1, -1):
        raise ValueError(f"end must be +1 or -1, got {end!r}")
    return -1.0 if end == +1 else (-1.0) ** p.l


def _zeta_term_phase(end: int, zeta: complex, p: OperatorParams) -> float:
    """Phase psi0 of the zeta-term in the planted branch's log-magnitude.

    Near the origin mu = Re(sigma W) ~ |s|^{k+1} |zeta|
    cos(psi0 + (k+1)beta)/(k+1) on the ray of the given end; the arrival
    is downhill (a dominance bump exists) iff that cosine is positive.
    """
    s = recessive_sign(end, p)
    return cmath.phase(-s * zeta * float(end) ** (p.k + 1))


def ray_angles(zeta: complex, p: OperatorParams) -> tuple[float, float]:
    """Integration-ray angles (beta_plus, beta_minus) for this zeta.

    Per side: if the real-axis arrival at the origin is already uphill
    (cos psi0 <= 0) keep the real axis; otherwise rotate so
    psi0 + (k+1)beta = sign(psi0)(pi/2 + ARRIVAL_MARGIN), clamped to the
    recessive sector |beta| <= RAY_SECTOR_FRACTION * pi/(2(l+1)).
    """
    beta_max = RAY_SECTOR_FRACTION * 0.5 * math.pi / (p.l + 1)
    out = []
    for end in (+1, -1):
        psi0 = _zeta_term_phase(end, zeta, p)
        if math.cos(psi0) <= 0.0:
            out.append(0.0)
            continue
        target = math.copysign(0.5 * math.pi + ARRIVAL_MARGIN,
                               psi0 if psi0 != 0.0 else 1.0)
        beta = (target - psi0) / (p.k + 1)
        out.append(max(-beta_max, min(beta_max, beta)))
    return out[0], out[1]


def ray_bump_exponents(zeta: complex, p: OperatorParams, beta_plus: float,
                       beta_minus: float) -> tuple[float, float]:
    """Residual dominance-bump height (nats) along each side's ray.

    mu(|s|) = -|s|^{l+1} cL/(l+1) + |zeta| |s|^{k+1} cK/(k+1) with
    cL = cos((l+1)beta), cK = cos(psi0 + (k+1)beta); for cK > 0 the single
    interior maximum is m/((k+1)(l+1)) |zeta|^{(l+1)/m} cK^{(l+1)/m} /
    cL^{(k+1)/m}.  Roundoff injected at the peak reaches the origin
    amplified by e^{2*bump}, so this is the mismatch noise-floor exponent.
    """
    m = p.l - p.k
    out = []
    for end, beta in ((+1, beta_plus), (-1, beta_minus)):
        c_l = math.cos((p.l + 1) * beta)
        c_k = math.cos(_zeta_term_phase(end, zeta, p) + (p.k + 1) * beta)
        if c_k <= 0.0 or c_l <= 0.0:
            out.append(0.0)
            continue
        bump = (m / ((p.k + 1.0) * (p.l + 1.0))
                * abs(zeta) ** ((p.l + 1.0) / m)
                * c_k ** ((p.l + 1.0) / m) / c_l ** ((p.k + 1.0) / m))
        out.append(bump)
    return out[0], out[1]


def decay_exponents(x_inf: float, zeta: complex, p: OperatorParams,
                    beta_plus: float = 0.0, beta_minus: float = 0.0
                    ) -> tuple[float, float]:
    """Decay (in nats) of the planted branches at their ray endpoints."""
    plus = (recessive_sign(+1, p)
            * wkb_phase(x_inf * cmath.exp(1j * beta_plus), zeta, p)).real
    minus = (recessive_sign(-1, p)
             * wkb_phase(-x_inf * cmath.exp(1j * beta_minus), zeta, p)).real
    return -plus, -minus


def make_config(p: OperatorParams, zeta: complex,
                rtol: float = DEFAULT_RTOL,
                atol: float = DEFAULT_ATOL,
                x_match: float = 0.0,
                decay_target: float = DECAY_TARGET,
                renorm_threshold: float = DEFAULT_RENORM_THRESHOLD,
                max_steps: int = DEFAULT_MAX_STEPS) -> ShootingConfig:
    """Pick ray angles for zeta and x_inf = max(2.2|zeta|^{1/m}, decay radius).

    The 10% margin on top of the factor-2 turning-point bound keeps the
    config valid for the nearby zeta probed by Newton steps and winding
    contours that reuse it frozen.
    """
    beta_plus, beta_minus = ray_angles(zeta, p)
    x = max(2.2 * turning_radius(zeta, p), 1.0)
    while min(decay_exponents(x, zeta, p, beta_plus, beta_minus)
              ) < decay_target:
        x *= 1.25
    return ShootingConfig(x_inf=x, x_match=x_match, rtol=rtol, atol=atol,
                          renorm_threshold=renorm_threshold,
                          max_steps=max_steps, beta_plus=beta_plus,
                          beta_minus=beta_minus)


def widen_config(cfg: ShootingConfig, factor: float) -> ShootingConfig:
    """Copy of cfg with x_inf scaled by factor (robustness studies)."""
    return replace(cfg, x_inf=cfg.x_inf * factor)


def wkb_init(x: float, zeta: complex, p: OperatorParams, end: int,
             omega: complex = 1.0 + 0.0j) -> SolutionState:
    """Leading-order recessive WKB data at path parameter x near an end.

    The physical point is X = omega*x (omega = 1: the real axis).  f is
    normalized to 1 (the dropped canonical prefactor is an overall
    constant, irrelevant to the scale-invariant mismatch); the stored
    derivative is d/ds = omega d/dX with f'/f = s W'(X) - l/(2X) from the
    product rule on X^{-l/2} e^{s W}.
    """
    s = recessive_sign(end, p)
    if x * end <= 0:
        raise ValueError(f"x={x} is on the wrong side for end={end:+d}")
    r = turning_radius(zeta, p)
    if abs(x) < 2.0 * r:
        raise ValueError(
            f"|x|={abs(x)} is inside the turning-point region "
            f"(need >= 2|zeta|^(1/m) = {2.0 * r:.6g})")
    big_x = omega * x
    wp = big_x ** p.l - zeta * big_x ** p.k
    fp = omega * (s * wp - p.l / (2.0 * big_x))
    return SolutionState(x=float(x), f=1.0 + 0.0j, fp=fp, log_scale=0.0)


def integrate(state: SolutionState, to_x: float, zeta: complex,
              p: OperatorParams, cfg: ShootingConfig,
              omega: complex = 1.0 + 0.0j) -> SolutionState:
    """Integrate the state to path parameter to_x along the ray omega."""
    if to_x == state.x:
        return state
    a = complex(omega) ** (p.l + 1)
    b = complex(zeta) * complex(omega) ** (p.k + 1)
    f, fp, dls, x_reached, _n, _r, status = _kernels.rk45(
        p.k, p.l, a, b, float(state.x), complex(state.f),
        complex(state.fp), float(to_x), cfg.rtol, cfg.atol,
        cfg.renorm_threshold, cfg.max_steps)
    if status != _kernels.STATUS_OK:
        reason = {_kernels.STATUS_MAX_STEPS: "max_steps exhausted",
                  _kernels.STATUS_STEP_UNDERFLOW: "step size underflow"}
        raise IntegrationError(
            f"{reason.get(status, f'status {status}')} at s = {x_reached:.6g} "
            f"(integrating {state.x:.6g} -> {to_x:.6g}, zeta = {zeta})",
            x_reached, status)
    return SolutionState(x=float(to_x), f=f, fp=fp,
                         log_scale=state.log_scale + dls)


def _shoot_side(end: int, zeta: complex, p: OperatorParams,
                cfg: ShootingConfig) -> SolutionState:
    """Carry one planted branch to x_match; returns d/ds on the match ray.

    Each side travels its own ray to the origin; if x_match lies on the
    other side's ray the state crosses over at the origin, where switching
    rays multiplies df/ds by the exact constant omega_new/omega_old.
    """
    beta = cfg.beta_plus if end == +1 else cfg.beta_minus
    omega = cmath.exp(1j * beta)
    state = wkb_init(end * cfg.x_inf, zeta, p, end, omega)
    same_side = cfg.x_match == 0.0 or (cfg.x_match > 0) == (end == +1)
    if same_side:
        return integrate(state, cfg.x_match, zeta, p, cfg, omega)
    state = integrate(state, 0.0, zeta, p, cfg, omega)
    beta_other = cfg.beta_minus if end == +1 else cfg.beta_plus
    omega_other = cmath.exp(1j * beta_other)
    state = SolutionState(x=state.x, f=state.f,
                          fp=state.fp * (omega_other / omega),
                          log_scale=state.log_scale)
    return integrate(state, cfg.x_match, zeta, p, cfg, omega_other)


def _matched_states(zeta: complex, p: OperatorParams, cfg: ShootingConfig
                    ) -> tuple[SolutionState, SolutionState]:
    return (_shoot_side(+1, zeta, p, cfg), _shoot_side(-1, zeta, p, cfg))


def mismatch_from_states(sp: SolutionState, sm: SolutionState) -> complex:
    """D^ from the two matched states (log_scales cancel: real divisors)."""
    np_ = math.hypot(abs(sp.f), abs(sp.fp))
    nm_ = math.hypot(abs(sm.f), abs(sm.fp))
    return (sp.f * sm.fp - sm.f * sp.fp) / (np_ * nm_)


def connection_mismatch(zeta: complex, p: OperatorParams,
                        cfg: ShootingConfig) -> complex:
    """Scale-invariant connection mismatch D^(zeta); zero iff eigenvalue."""
    sp, sm = _matched_states(zeta, p, cfg)
    return mismatch_from_states(sp, sm)


def _real_dip_radius(end: int, zeta: complex, p: OperatorParams) -> float:
    """Radius of the real-axis dominance peak on one side (0 = none).

    Along the real axis mu(|s|) peaks at |s|^m = |zeta| cos(psi0) when
    cos(psi0) > 0; inside this radius the planted branch decays into the
    origin and inward real-axis integration loses accuracy, so the profile
    renderer integrates that stretch outward from the origin instead.
    """
    c_k = math.cos(_zeta_term_phase(end, zeta, p))
    if c_k <= 0.0:
        return 0.0
    m = p.l - p.k
    return (abs(zeta) * c_k) ** (1.0 / m)


def eigenfunction_profile(zeta: complex, p: OperatorParams,
                          cfg: ShootingConfig, n_samples: int
                          ) -> list[tuple[float, float, float]]:
    """Sample the matched global eigenfunction on real [-x_inf, x_inf].

    Returns n_samples rows (x, log|f|, arg f) with log-magnitude
    normalized so the peak is 0 (natural log).  Refuses (raising
    NotAnEigenvalueError) unless |D^(zeta)| <= CERTIFICATION_RESIDUAL,
    because away from an eigenvalue there is no global solution to sample.

    Rendering stays accurate at all M by anchoring each side at the origin
    with the ray-transported branch state and integrating the real-axis
    stretch inside the dominance peak *outward* (where the true branch is
    the locally growing solution); the outer stretch integrates inward
    from fresh WKB data and is rescaled to the anchored branch where the
    two sweeps meet.
    """
    if n_samples < 3:
        raise ValueError(f"n_samples must be >= 3, got {n_samples}")
    sp, sm = _matched_states(zeta, p, cfg)
    dhat = mismatch_from_states(sp, sm)
    if abs(dhat) > CERTIFICATION_RESIDUAL:
        raise NotAnEigenvalueError(abs(dhat))

    # Branch states at the origin with real-axis derivatives (d/ds -> d/dx).
    zero_cfg = replace(cfg, x_match=0.0)
    anchors: dict[int, SolutionState] = {}
    for end, beta in ((+1, cfg.beta_plus), (-1, cfg.beta_minus)):
        omega = cmath.exp(1j * beta)
        st = integrate(wkb_init(end * cfg.x_inf, zeta, p, end, omega),
                       0.0, zeta, p, zero_cfg, omega)
        anchors[end] = SolutionState(x=0.0, f=st.f, fp=st.fp / omega,
                                     log_scale=st.log_scale)

    # Relative scale carrying the minus branch onto the plus branch, from
    # whichever origin register is better conditioned.
    ap, am = anchors[+1], anchors[-1]
    if max(abs(ap.f), abs(am.f)) >= max(abs(ap.fp), abs(am.fp)):
        ratio = ap.f / am.f
    else:
        ratio = ap.fp / am.fp
    log_c = (ap.log_scale - am.log_scale) + math.log(abs(ratio))
    arg_c = cmath.phase(ratio)

    def log_abs(value: complex) -> float:
        return math.log(abs(value)) if value != 0 else -math.inf

    xs = [-cfg.x_inf + i * (2.0 * cfg.x_inf) / (n_samples - 1)
          for i in range(n_samples)]
    rows: dict[float, tuple[float, float, float]] = {}

    for end in (+1, -1):
        offset_lg = 0.0 if end == +1 else log_c
        offset_ar = 0.0 if end == +1 else arg_c
        stations = sorted((x for x in xs if x * end > 0), key=abs)
        x_dip = _real_dip_radius(end, zeta, p)
        inner = [x for x in stations if abs(x) <= x_dip]
        outer = [x for x in stations if abs(x) > x_dip]

        state = anchors[end]
        for x in inner:
            state = integrate(state, x, zeta, p, zero_cfg)
            rows[x] = (x, state.log_scale + log_abs(state.f) + offset_lg,
                       cmath.phase(state.f) + offset_ar)
        if outer:
            # Land the anchored branch on the handover point so the outer
            # sweep (fresh normalization) can be rescaled onto it.
            handover = end * x_dip
            state = integrate(state, handover, zeta, p, zero_cfg)
            out_state = wkb_init(end * cfg.x_inf, zeta, p, end)
            out_rows = []
            for x in sorted(outer, key=abs, reverse=True):
                out_state = integrate(out_state, x, zeta, p, zero_cfg)
                out_rows.append((x, out_state))
            out_state = integrate(out_state, handover, zeta, p, zero_cfg)
            if max(abs(out_state.f), abs(state.f)) >= max(abs(out_state.fp),
                                                          abs(state.fp)):
                rr = state.f / out_state.f
            else:
                rr = state.fp / out_state.fp
            lg_shift = ((state.log_scale - out_state.log_scale)
                        + math.log(abs(rr)) + offset_lg)
            ar_shift = cmath.phase(rr) + offset_ar
            for x, st in out_rows:
                rows[x] = (x, st.log_scale + log_abs(st.f) + lg_shift,
                           cmath.phase(st.f) + ar_shift)

    if 0.0 in xs:
        rows[0.0] = (0.0, ap.log_scale + log_abs(ap.f), cmath.phase(ap.f))

    ordered = [rows[x] for x in xs]
    peak = max(r[1] for r in ordered)
    return [(x, lg - peak, math.remainder(ar, 2.0 * math.pi))
            for (x, lg, ar) in ordered]
