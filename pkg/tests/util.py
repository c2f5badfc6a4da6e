"""Shared helpers for the test suite.

`certified` caches Newton-refined eigenvalues per (k, l, M) so the many
tests that need a genuine eigenvalue don't re-run the solver.

`wronskian_drift` transports both boundary branches to common stations on
the plus-side ray and measures how far their Wronskian strays from
constancy.  For f'' = Q f the Wronskian of any two solutions is exactly
constant along a fixed path, so the drift is a direct global-accuracy
probe of the integrator.  Evaluate it at generic (non-eigenvalue) zeta:
at an eigenvalue the two branches are proportional, the true Wronskian is
zero, and the register difference is pure cancellation noise.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

import numpy as np

from hypoeig.asymptotics import prediction_pair
from hypoeig.params import OperatorParams
from hypoeig.rootfind import refine
from hypoeig.shooting import SolutionState, integrate, make_config, wkb_init


@lru_cache(maxsize=None)
def certified(k: int, l: int, M: int):
    """Refine index M of family (k, l) from its solved-bracket seed and
    assert certification; cached across the whole test session."""
    p = OperatorParams(k, l)
    record = refine(prediction_pair(p, M).zeta_solved, p, M=M)
    assert record.certified, f"(k,l,M)=({k},{l},{M}): {record.failure}"
    return record


@lru_cache(maxsize=None)
def midpoint_zeta(k: int, l: int, M: int) -> complex:
    """A generic non-eigenvalue point: midway between predicted array
    entries M and M+1 (the connection mismatch is O(1) there)."""
    p = OperatorParams(k, l)
    return 0.5 * (prediction_pair(p, M).zeta_solved
                  + prediction_pair(p, M + 1).zeta_solved)


def wronskian_drift(zeta: complex, p: OperatorParams, rtol: float,
                    n_stations: int = 12) -> float:
    """Max relative drift of the two-branch Wronskian over n_stations
    stations spanning [0, x_inf] on the plus-side ray.

    The plus branch sweeps inward from x_inf, the minus branch travels its
    own ray to the origin, crosses over (df/ds picks up the exact ray
    ratio), and sweeps outward; both directions follow local growth, so
    the sweeps are dominance-stable.  Renormalization exponents are folded
    in through logs.
    """
    cfg = make_config(p, zeta, rtol=rtol)
    om_p = cmath.exp(1j * cfg.beta_plus)
    om_m = cmath.exp(1j * cfg.beta_minus)
    stations = np.linspace(cfg.x_inf, 0.0, n_stations)

    plus = [wkb_init(cfg.x_inf, zeta, p, +1, om_p)]
    for s in stations[1:]:
        plus.append(integrate(plus[-1], float(s), zeta, p, cfg, om_p))

    state = wkb_init(-cfg.x_inf, zeta, p, -1, om_m)
    state = integrate(state, 0.0, zeta, p, cfg, om_m)
    state = SolutionState(x=0.0, f=state.f, fp=state.fp * (om_p / om_m),
                          log_scale=state.log_scale)
    minus = [state]
    for s in reversed(stations[:-1]):
        minus.append(integrate(minus[-1], float(s), zeta, p, cfg, om_p))
    minus.reverse()

    logs, phases = [], []
    for u, v in zip(plus, minus):
        w = u.f * v.fp - v.f * u.fp
        logs.append(math.log(abs(w)) + u.log_scale + v.log_scale)
        phases.append(cmath.phase(w))
    return max(abs(cmath.exp((lg - logs[0]) + 1j * (ph - phases[0])) - 1.0)
               for lg, ph in zip(logs, phases))
