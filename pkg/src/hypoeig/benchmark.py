"""Timing harness: compiled RK45 kernel vs. the pure-Python fallback.

The package runs the same Dormand-Prince kernel either numba-compiled
(default) or as plain Python (HYPOEIG_NO_NUMBA=1).  This module times both
variants in one process on a realistic workload -- the two half-line
shooting sweeps behind one connection-mismatch evaluation -- and checks
that the register outputs agree to roundoff.

Run as `python3 -m hypoeig.benchmark [--k K --l L --M M --repeats N]`.
"""

from __future__ import annotations

import argparse
import cmath
import math
import sys
import time

from . import _kernels
from .asymptotics import prediction_pair
from .params import OperatorParams
from .rootfind import refine
from .shooting import ShootingConfig, make_config, wkb_init


def sweep_args(p: OperatorParams, zeta: complex,
               cfg: ShootingConfig) -> list[tuple]:
    """Raw kernel argument tuples for the two boundary-to-origin sweeps."""
    sweeps = []
    for end, beta in ((+1, cfg.beta_plus), (-1, cfg.beta_minus)):
        omega = cmath.exp(1j * beta)
        state = wkb_init(end * cfg.x_inf, zeta, p, end, omega)
        a = omega ** (p.l + 1)
        b = zeta * omega ** (p.k + 1)
        sweeps.append((p.k, p.l, a, b, state.x, state.f, state.fp, 0.0,
                       cfg.rtol, cfg.atol, cfg.renorm_threshold,
                       cfg.max_steps))
    return sweeps


def time_kernel(kernel, sweeps, repeats: int):
    """Best wall time over `repeats` passes; returns (seconds, outputs)."""
    outputs = [kernel(*args) for args in sweeps]  # warm-up / compile
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        outputs = [kernel(*args) for args in sweeps]
        best = min(best, time.perf_counter() - t0)
    return best, outputs


def relative_register_gap(out_a, out_b) -> float:
    """Max relative disagreement of (f, fp, log_scale) between variants."""
    worst = 0.0
    for (fa, fpa, lsa), (fb, fpb, lsb) in zip(
            [o[:3] for o in out_a], [o[:3] for o in out_b]):
        scale = max(abs(fa), abs(fpa), 1e-300)
        worst = max(worst,
                    abs(fa - fb) / scale,
                    abs(fpa - fpb) / scale,
                    abs(lsa - lsb) / max(abs(lsa), 1.0))
    return worst


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--l", type=int, default=3)
    ap.add_argument("--M", type=int, default=8, help="eigenvalue index")
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args(argv)

    p = OperatorParams(args.k, args.l)
    seed = prediction_pair(p, args.M).zeta_solved
    record = refine(seed, p, M=args.M)
    zeta = record.zeta_refined
    cfg = make_config(p, zeta)
    sweeps = sweep_args(p, zeta, cfg)

    t_py, out_py = time_kernel(_kernels._rk45_py, sweeps, args.repeats)
    try:
        jitted = _kernels.jitted_kernel()
    except ImportError:
        print(f"pure python : {t_py * 1e3:9.3f} ms per mismatch")
        print("numba       : unavailable in this environment")
        return 0
    t_nb, out_nb = time_kernel(jitted, sweeps, args.repeats)

    steps = sum(o[4] for o in out_py)
    gap = relative_register_gap(out_py, out_nb)
    print(f"workload    : (k,l)=({args.k},{args.l}) M={args.M} "
          f"zeta={zeta:.12g} ({steps} RK45 steps per mismatch)")
    print(f"pure python : {t_py * 1e3:9.3f} ms per mismatch")
    print(f"numba       : {t_nb * 1e3:9.3f} ms per mismatch")
    print(f"speedup     : {t_py / t_nb:9.1f}x")
    print(f"agreement   : max relative register gap {gap:.3g}")
    return 0 if gap < 1e-12 else 2


if __name__ == "__main__":
    sys.exit(main())
