"""Hot integration kernel: Dormand-Prince RK45 for f'' = (a s^l - b s^k)^2 f.

The solver integrates, in a real path parameter s, the second-order ODE

    f''(s) = g(s)^2 f(s),      g(s) = a s^l - b s^k,   a, b complex.

With a = 1, b = zeta this is the physical equation
f'' = (x^l - zeta x^k)^2 f on the real axis.  With a = omega^{l+1},
b = zeta*omega^{k+1} (|omega| = 1) it is the same equation transported to
the ray x = omega*s, where f' denotes df/ds = omega*df/dx; solutions are
entire in x, so ray integration evaluates the same analytic objects while
keeping the planted solution dominant (the real axis is not dominance-
monotone for complex zeta).  The state is y = (f, f') with an embedded
5(4) Dormand-Prince pair (FSAL).  Two properties matter more than raw
speed:

* **Renormalization.**  Solutions grow like exp(x^{l+1}/(l+1)), far beyond
  float range, so whenever max(|f|, |f'|) leaves [1/thresh, thresh] the
  state is divided by that max and log(max) is accumulated separately.
  The divisor is real and positive, so the *phase* of (f, f') is exact;
  linearity of the ODE makes the rescaling exact as well (the FSAL stage
  is rescaled with the state).

* **Frequency-weighted error control.**  In oscillatory regions f passes
  through zeros while |f'| ~ w|f_envelope| with w = sqrt(|Q|).  Per-step
  error is therefore measured against the envelope amplitude

      A  = max(|f0|, |f1|, |f0'|/w, |f1'|/w),   w = max(sqrt(|Q(x)|), 1),
      err = max(|e_f|, |e_f'|/w) / (atol + rtol*A),

  which keeps the accepted-step sequence (and hence the tiny connection
  mismatch built from these solutions) smooth in zeta instead of jittering
  each time f crosses zero.

The same source function `_rk45_py` is compiled with numba when available;
set the environment variable HYPOEIG_NO_NUMBA=1 before import to force the
pure-Python path (used by the fallback tests and the benchmark).
"""

from __future__ import annotations

import math
import os

# Dormand-Prince 5(4) tableau.  E* are (5th-order minus 4th-order) weights;
# the error estimate is h * sum(E_i * k_i) including the FSAL stage (E7).
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = (19372.0 / 6561.0, -25360.0 / 2187.0,
                          64448.0 / 6561.0, -212.0 / 729.0)
_A61, _A62, _A63, _A64, _A65 = (9017.0 / 3168.0, -355.0 / 33.0,
                                46732.0 / 5247.0, 49.0 / 176.0,
                                -5103.0 / 18656.0)
_B1, _B3, _B4, _B5, _B6 = (35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0,
                           -2187.0 / 6784.0, 11.0 / 84.0)
_E1 = 35.0 / 384.0 - 5179.0 / 57600.0
_E3 = 500.0 / 1113.0 - 7571.0 / 16695.0
_E4 = 125.0 / 192.0 - 393.0 / 640.0
_E5 = -2187.0 / 6784.0 + 92097.0 / 339200.0
_E6 = 11.0 / 84.0 - 187.0 / 2100.0
_E7 = -1.0 / 40.0

# Integration status codes returned by the kernel.
STATUS_OK = 0
STATUS_MAX_STEPS = 1
STATUS_STEP_UNDERFLOW = 2


def _rk45_py(k, l, a, b, s0, f0, fp0, s1, rtol, atol, thresh, max_steps):
    """Integrate f'' = (a s^l - b s^k)^2 f from s0 to s1 (real s).

    Returns (f, fp, log_scale, s_reached, n_steps, n_renorm, status);
    the true solution at s_reached is (f, fp) * exp(log_scale).
    """
    x = s0
    f = f0
    fp = fp0
    log_scale = 0.0
    direction = 1.0 if s1 > s0 else -1.0
    n_steps = 0
    n_renorm = 0
    status = STATUS_OK

    # First stage (FSAL slot) and initial step from the local frequency.
    g = a * x ** l - b * x ** k
    k1f = fp
    k1p = g * g * f
    w0 = math.sqrt(abs(g * g))
    h = direction * min(0.1, 0.1 / max(w0, 1e-3))

    while (s1 - x) * direction > 0.0:
        if n_steps >= max_steps:
            status = STATUS_MAX_STEPS
            break
        if x + h == x:
            status = STATUS_STEP_UNDERFLOW
            break
        if (x + h - s1) * direction > 0.0:
            h = s1 - x

        g = a * x ** l - b * x ** k
        w = math.sqrt(abs(g * g))
        if w < 1.0:
            w = 1.0

        y2f = f + h * (_A21 * k1f)
        y2p = fp + h * (_A21 * k1p)
        xs = x + _C2 * h
        g2 = a * xs ** l - b * xs ** k
        k2f = y2p
        k2p = g2 * g2 * y2f

        y3f = f + h * (_A31 * k1f + _A32 * k2f)
        y3p = fp + h * (_A31 * k1p + _A32 * k2p)
        xs = x + _C3 * h
        g3 = a * xs ** l - b * xs ** k
        k3f = y3p
        k3p = g3 * g3 * y3f

        y4f = f + h * (_A41 * k1f + _A42 * k2f + _A43 * k3f)
        y4p = fp + h * (_A41 * k1p + _A42 * k2p + _A43 * k3p)
        xs = x + _C4 * h
        g4 = a * xs ** l - b * xs ** k
        k4f = y4p
        k4p = g4 * g4 * y4f

        y5f = f + h * (_A51 * k1f + _A52 * k2f + _A53 * k3f + _A54 * k4f)
        y5p = fp + h * (_A51 * k1p + _A52 * k2p + _A53 * k3p + _A54 * k4p)
        xs = x + _C5 * h
        g5 = a * xs ** l - b * xs ** k
        k5f = y5p
        k5p = g5 * g5 * y5f

        y6f = f + h * (_A61 * k1f + _A62 * k2f + _A63 * k3f + _A64 * k4f
                       + _A65 * k5f)
        y6p = fp + h * (_A61 * k1p + _A62 * k2p + _A63 * k3p + _A64 * k4p
                        + _A65 * k5p)
        xs = x + h
        g6 = a * xs ** l - b * xs ** k
        k6f = y6p
        k6p = g6 * g6 * y6f

        yf = f + h * (_B1 * k1f + _B3 * k3f + _B4 * k4f + _B5 * k5f
                      + _B6 * k6f)
        yp = fp + h * (_B1 * k1p + _B3 * k3p + _B4 * k4p + _B5 * k5p
                       + _B6 * k6p)
        k7f = yp
        k7p = g6 * g6 * yf

        errf = h * (_E1 * k1f + _E3 * k3f + _E4 * k4f + _E5 * k5f
                    + _E6 * k6f + _E7 * k7f)
        errp = h * (_E1 * k1p + _E3 * k3p + _E4 * k4p + _E5 * k5p
                    + _E6 * k6p + _E7 * k7p)

        amp = max(abs(f), abs(yf), abs(fp) / w, abs(yp) / w)
        err = max(abs(errf), abs(errp) / w) / (atol + rtol * amp)

        n_steps += 1
        if err <= 1.0:
            x = x + h
            f = yf
            fp = yp
            k1f = k7f
            k1p = k7p
            mag = max(abs(f), abs(fp))
            if mag > thresh or mag < 1.0 / thresh:
                f = f / mag
                fp = fp / mag
                k1f = k1f / mag
                k1p = k1p / mag
                log_scale += math.log(mag)
                n_renorm += 1
            if err > 0.0:
                fac = 0.9 * err ** -0.2
                if fac > 5.0:
                    fac = 5.0
            else:
                fac = 5.0
            h = h * fac
        else:
            fac = 0.9 * err ** -0.2
            if fac < 0.2:
                fac = 0.2
            if fac > 1.0:
                fac = 1.0
            h = h * fac

    return f, fp, log_scale, x, n_steps, n_renorm, status


def _numba_disabled() -> bool:
    return os.environ.get("HYPOEIG_NO_NUMBA", "").strip() not in ("", "0")


HAVE_NUMBA = False
if not _numba_disabled():
    try:
        import numba

        rk45 = numba.njit(cache=True, nogil=True)(_rk45_py)
        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        rk45 = _rk45_py
else:
    rk45 = _rk45_py


def jitted_kernel():
    """Return a numba-compiled kernel regardless of the env flag.

    Used by the benchmark so both paths can be timed in one process; raises
    ImportError if numba is genuinely unavailable.
    """
    if HAVE_NUMBA:
        return rk45
    import numba

    return numba.njit(cache=True, nogil=True)(_rk45_py)
