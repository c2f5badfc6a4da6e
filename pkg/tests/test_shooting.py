"""Shooting layer: config/ray geometry, invariances, parity, profiles."""

import cmath
import math
from dataclasses import replace

import pytest

from hypoeig.params import OperatorParams
from hypoeig.shooting import (
    CERTIFICATION_RESIDUAL,
    DECAY_TARGET,
    RAY_SECTOR_FRACTION,
    IntegrationError,
    NotAnEigenvalueError,
    ShootingConfig,
    SolutionState,
    _matched_states,
    _shoot_side,
    connection_mismatch,
    decay_exponents,
    eigenfunction_profile,
    integrate,
    make_config,
    mismatch_from_states,
    ray_angles,
    ray_bump_exponents,
    turning_radius,
    widen_config,
    wkb_init,
    wkb_phase,
)

from .util import certified, midpoint_zeta, wronskian_drift

P13 = OperatorParams(1, 3)
P25 = OperatorParams(2, 5)


# ---------------------------------------------------------------- config

@pytest.mark.parametrize("p,M", [(P13, 4), (P13, 10), (P25, 6)])
def test_make_config_geometry(p, M):
    zeta = certified(p.k, p.l, M).zeta_refined
    cfg = make_config(p, zeta)
    assert cfg.x_inf >= 2.2 * turning_radius(zeta, p)
    decays = decay_exponents(cfg.x_inf, zeta, p, cfg.beta_plus,
                             cfg.beta_minus)
    assert min(decays) >= DECAY_TARGET
    beta_max = RAY_SECTOR_FRACTION * 0.5 * math.pi / (p.l + 1)
    assert abs(cfg.beta_plus) <= beta_max + 1e-15
    assert abs(cfg.beta_minus) <= beta_max + 1e-15


def test_ray_angles_remove_the_dominance_bump():
    """For eigenvalue-sized zeta the real axis has a large dominance bump
    and the chosen rays cut it to a small clamped remainder."""
    zeta = certified(1, 3, 12).zeta_refined
    bp, bm = ray_angles(zeta, P13)
    flat = ray_bump_exponents(zeta, P13, 0.0, 0.0)
    rayed = ray_bump_exponents(zeta, P13, bp, bm)
    assert max(flat) > 15.0          # real axis: hopeless in doubles
    assert max(rayed) < 3.0          # rays: residual bump is benign
    assert max(rayed) <= max(flat)


def test_ray_angles_keep_real_axis_when_arrival_is_uphill():
    """zeta on the negative real axis makes the origin arrival uphill on
    both sides (cos psi0 <= 0), so no rotation is wanted."""
    bp, bm = ray_angles(-4.0 + 0.0j, P13)
    assert bp == 0.0 and bm == 0.0


def test_config_validation():
    with pytest.raises(ValueError, match="x_inf"):
        ShootingConfig(x_inf=-1.0)
    with pytest.raises(ValueError, match="x_match"):
        ShootingConfig(x_inf=5.0, x_match=7.0)
    with pytest.raises(ValueError, match="rtol"):
        ShootingConfig(x_inf=5.0, rtol=0.0)
    with pytest.raises(ValueError, match="renorm"):
        ShootingConfig(x_inf=5.0, renorm_threshold=0.5)
    with pytest.raises(ValueError, match="beta"):
        ShootingConfig(x_inf=5.0, beta_plus=2.0)


def test_widen_config_scales_only_x_inf():
    cfg = make_config(P13, 5 + 5j)
    wide = widen_config(cfg, 1.25)
    assert wide.x_inf == pytest.approx(1.25 * cfg.x_inf)
    assert (wide.rtol, wide.beta_plus, wide.beta_minus) == \
        (cfg.rtol, cfg.beta_plus, cfg.beta_minus)


# ------------------------------------------------------------- wkb_init

def test_wkb_init_rejects_invalid_stations():
    zeta = 5 + 5j
    with pytest.raises(ValueError, match="wrong side"):
        wkb_init(-3.0, zeta, P13, +1)
    with pytest.raises(ValueError, match="turning-point"):
        wkb_init(1.0, zeta, P13, +1)   # |zeta|^{1/2} ~ 2.66, need >= 5.3


def test_wkb_init_matches_logarithmic_derivative():
    """f'/f of the WKB seed must equal sigma W'(X) - l/(2X) transported to
    the ray parameter (d/ds = omega d/dX)."""
    zeta = 5 + 5j
    x = 8.0
    for end, beta in ((+1, 0.21), (-1, -0.13)):
        omega = cmath.exp(1j * beta)
        st = wkb_init(end * x, zeta, P13, end, omega)
        X = omega * end * x
        sigma = -1.0 if end == +1 else (-1.0) ** P13.l
        expect = omega * (sigma * (X ** 3 - zeta * X) - 3 / (2 * X))
        assert st.f == 1.0
        assert abs(st.fp - expect) <= 1e-14 * abs(expect)


def test_wkb_phase_value():
    z = 2.0 + 1.0j
    x = 1.5 + 0.5j
    expect = x ** 4 / 4 - z * x ** 2 / 2
    assert abs(wkb_phase(x, z, P13) - expect) <= 1e-15 * abs(expect)


# ---------------------------------------------------- integration layer

def test_integrate_noop_and_failure():
    zeta = 5 + 5j
    cfg = make_config(P13, zeta)
    st = wkb_init(cfg.x_inf, zeta, P13, +1, cmath.exp(1j * cfg.beta_plus))
    assert integrate(st, st.x, zeta, P13, cfg) is st
    starved = replace(cfg, max_steps=5)
    with pytest.raises(IntegrationError, match="max_steps"):
        integrate(st, 0.0, zeta, P13, starved,
                  cmath.exp(1j * cfg.beta_plus))


@pytest.mark.parametrize("p,M", [(P13, 5), (P25, 7)])
@pytest.mark.parametrize("rtol", [1e-8, 1e-9, 1e-10])
def test_wronskian_constancy_at_generic_zeta(p, M, rtol):
    """Along a fixed ray the Wronskian of the two transported branches is
    exactly constant; the measured drift over 12 stations is the global
    integration error and must stay within 10*rtol."""
    drift = wronskian_drift(midpoint_zeta(p.k, p.l, M), p, rtol)
    assert drift <= 10 * rtol


def test_wronskian_drift_floors_in_double_precision():
    """Below rtol ~ 1e-11 the station-sweep drift is roundoff-dominated
    and stops tracking rtol; document the floor instead of pretending the
    proportional bound extends downward."""
    drift = wronskian_drift(midpoint_zeta(1, 3, 8), P13, 1e-13)
    assert drift <= 1e-9   # absolute floor, not 10*rtol


# ----------------------------------------------------- scale invariance

def _scaled_mismatch(zeta, p, cfg, c_plus):
    sp, sm = _matched_states(zeta, p, cfg)
    scaled = SolutionState(x=sp.x, f=c_plus * sp.f, fp=c_plus * sp.fp,
                           log_scale=sp.log_scale)
    return mismatch_from_states(sp, sm), mismatch_from_states(scaled, sm)


def test_mismatch_scale_invariance_positive_real():
    zeta = midpoint_zeta(1, 3, 6)
    cfg = make_config(P13, zeta)
    base, scaled = _scaled_mismatch(zeta, P13, cfg, 137.5)
    assert abs(scaled - base) <= 1e-14 * abs(base)


def test_mismatch_modulus_invariance_complex_scale():
    """Complex rescaling of one branch rotates D^ by exactly c/|c| and
    leaves |D^| untouched -- the modulus is what certification uses."""
    zeta = midpoint_zeta(1, 3, 6)
    cfg = make_config(P13, zeta)
    c = 3.0 * cmath.exp(1j * 1.234)
    base, scaled = _scaled_mismatch(zeta, P13, cfg, c)
    assert abs(abs(scaled) - abs(base)) <= 1e-14 * abs(base)
    assert abs(scaled - (c / abs(c)) * base) <= 1e-14 * abs(base)


def test_mismatch_zero_iff_eigenvalue():
    rec = certified(1, 3, 5)
    cfg = make_config(P13, rec.zeta_refined)
    at = abs(connection_mismatch(rec.zeta_refined, P13, cfg))
    off = abs(connection_mismatch(rec.zeta_refined * 1.01, P13, cfg))
    assert at <= CERTIFICATION_RESIDUAL
    assert off > 1e3 * at


def test_mismatch_independent_of_match_station():
    """D^ depends on the matching station only through roundoff: the
    Wronskian numerator is station-constant and the normalization is
    positive real."""
    zeta = certified(1, 3, 7).zeta_refined
    vals = []
    for x_match in (0.0, 0.4, -0.7):
        cfg = make_config(P13, zeta, x_match=x_match)
        vals.append(abs(connection_mismatch(zeta, P13, cfg)))
    assert max(vals) <= 5e-11


# ------------------------------------------------------------- parity

@pytest.mark.parametrize("M", [3, 8, 12])
def test_even_m_eigenfunctions_have_definite_parity(M):
    """m even makes the potential even, so eigenfunctions split into
    even/odd classes: at the origin one register of (f, f') must vanish
    relative to the other."""
    rec = certified(1, 3, M)
    cfg = make_config(P13, rec.zeta_refined)
    st = _shoot_side(+1, rec.zeta_refined, P13, cfg)
    lo = min(abs(st.f), abs(st.fp))
    hi = max(abs(st.f), abs(st.fp))
    assert lo <= 1e-6 * hi


def test_odd_m_has_no_parity_constraint():
    """(2,5) has m = 3: the potential is not even and generically neither
    origin register vanishes."""
    rec = certified(2, 5, 6)
    cfg = make_config(P25, rec.zeta_refined)
    st = _shoot_side(+1, rec.zeta_refined, P25, cfg)
    assert min(abs(st.f), abs(st.fp)) > 1e-3 * max(abs(st.f), abs(st.fp))


# ------------------------------------------------------------- profile

def test_profile_requires_an_eigenvalue():
    cfg = make_config(P13, 5 + 5j)
    with pytest.raises(NotAnEigenvalueError, match="certified"):
        eigenfunction_profile(5 + 5j, P13, cfg, 31)


def test_profile_shape_and_decay():
    rec = certified(1, 3, 6)
    cfg = make_config(P13, rec.zeta_refined)
    rows = eigenfunction_profile(rec.zeta_refined, P13, cfg, 41)
    assert len(rows) == 41
    xs = [r[0] for r in rows]
    assert xs[0] == -cfg.x_inf and xs[-1] == cfg.x_inf
    assert xs == sorted(xs)
    peaks = [r[1] for r in rows]
    assert max(peaks) == pytest.approx(0.0, abs=1e-12)  # peak-normalized
    assert peaks[0] < -30.0 and peaks[-1] < -30.0       # decayed ends
    assert all(-math.pi <= r[2] <= math.pi for r in rows)


def test_profile_even_m_mirror_symmetry():
    """|f| is even for definite-parity eigenfunctions; compare mirrored
    stations (an odd sample count places a station at x = 0)."""
    rec = certified(1, 3, 9)
    cfg = make_config(P13, rec.zeta_refined)
    rows = eigenfunction_profile(rec.zeta_refined, P13, cfg, 81)
    for (xl, ll, _), (xr, lr, _) in zip(rows, reversed(rows)):
        assert xl == pytest.approx(-xr, abs=1e-12)
        if max(ll, lr) > -60:   # below that, values sit in truncation mud
            assert ll == pytest.approx(lr, abs=1e-4)


def test_profile_rejects_tiny_sample_count():
    rec = certified(1, 3, 6)
    cfg = make_config(P13, rec.zeta_refined)
    with pytest.raises(ValueError):
        eigenfunction_profile(rec.zeta_refined, P13, cfg, 2)
