"""Closed-form eigenvalue predictors and Watson-lemma asymptotic formulas.

Eigenvalues of -f'' + (x^l - zeta*x^k)^2 f = 0 (bounded f on R) lie, for
large index M, near explicit arrays.  In the xi variable
(xi = -(i/m) zeta^{q+2}, with m = l-k and q = (l+1)/m - 2) the arrays come
from zeros of leading-order connection brackets:

  m even:  Cs(xi) = e^{i P0 xi} - (i/sqrt2) e^{i pi (1+A)} e^{-i P0 xi}
  m odd :  Dp(xi) = -2 + (i/sqrt2)(e^{i pi (1+A)} + e^{i pi (1+B)}) e^{-2 i xi P0}

Two m-even predictors are provided on purpose.  `predict_xi_paper` is the
verbatim printed formula

    xi_M = (pi/P0)(M + 1/(2m(q+1))) - (i/(4 P0)) ln 2,

while `predict_xi_solved` is the exact complex-log root of the bracket,

    xi_M = (pi/P0)(M + 1/2 - 1/(4m(q+1))) + (i/(4 P0)) ln 2,

and the two disagree (offset and the sign of Im).  Only the solved root
annihilates the bracket; the shooting/rootfind stages report distances to
both so the numerics can adjudicate.  For m odd the two coincide exactly.

The zeta-plane predictor is the direct formula

    zeta_M = e^{i pi (l-k)/(2(l+1))} [M pi (l+1)(k+1)/(l-k)]^{(l-k)/(l+1)},

and xi <-> zeta conversion uses the principal branch with
arg zeta in (0, pi/(q+2)).

The watson_* functions are the leading Laplace/Watson asymptotics of the
singular oscillatory integrals evaluated numerically in `quadrature`:

    int_0^inf e^{-Tq} q^-a (2 +- iq)^-a dq  ~  2^-a Gamma(1-a) T^(a-1),
    Phi_+-(T) = int_1^inf e^{+-ipT}(p^2-1)^-a dp
              ~ e^{+-i pi (1-a)/2} 2^-a Gamma(1-a) e^{+-iT} T^(a-1),
    I(T) = int_{-1}^1 e^{-ipT}(1-p^2)^-a dp
         ~ [e^{iT - i pi (1-a)/2} + e^{-iT + i pi (1-a)/2}] 2^-a Gamma(1-a) T^(a-1).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

from .params import CaseClass, DerivedParams, OperatorParams, derive_params, \
    classify_case, is_open_case

# Below this index the leading-order arrays are not yet trustworthy; the
# predictors still evaluate but emit a warning.
SMALL_M_THRESHOLD = 3


@dataclass(frozen=True)
class PredictionPair:
    """Both eigenvalue predictors for one index M (see module docstring)."""

    M: int
    xi_paper: complex
    xi_solved: complex
    zeta_paper: complex
    zeta_solved: complex


def _require_open(case: CaseClass, d: DerivedParams) -> None:
    if not is_open_case(case):
        raise ValueError(
            f"no eigenvalue-array formula for (k,l)=({d.k},{d.l}): "
            f"case {case.value}"
        )


def _check_M(M: int) -> None:
    if not isinstance(M, int) or M < 1:
        raise ValueError(f"M must be a positive integer, got {M!r}")
    if M < SMALL_M_THRESHOLD:
        warnings.warn(
            f"M={M} is below the asymptotic-validity threshold "
            f"{SMALL_M_THRESHOLD}; predictions may be poor",
            stacklevel=3,
        )


def predict_xi_paper(d: DerivedParams, case: CaseClass, M: int) -> complex:
    """Printed array formula in the xi plane (verbatim evaluation)."""
    _require_open(case, d)
    _check_M(M)
    q = d.require_integer_q()
    P0 = float(d.P0)
    mq1 = d.m * (q + 1)
    if d.m % 2 == 0:
        return (math.pi / P0) * (M + 1.0 / (2 * mq1)) \
            - 1j * math.log(2.0) / (4 * P0)
    theta = math.pi / (2 * mq1)
    return (-1j / (2 * P0)) * math.log(math.cos(theta) / math.sqrt(2.0)) \
        + (math.pi / (2 * P0)) * (2 * M + 1)


def predict_xi_solved(d: DerivedParams, case: CaseClass, M: int) -> complex:
    """Exact complex-log root of the leading connection bracket.

    m even: solves e^{2i P0 xi} = (i/sqrt2) e^{i pi (1+A)} on branch M, so
    leading_Cs vanishes there to machine precision.  m odd: solves
    e^{-2i xi P0} = -sqrt2 / cos(pi/(2m(q+1))), which reproduces the
    printed m-odd formula identically.
    """
    _require_open(case, d)
    _check_M(M)
    q = d.require_integer_q()
    P0 = float(d.P0)
    mq1 = d.m * (q + 1)
    if d.m % 2 == 0:
        # 2i P0 xi = -ln(sqrt2) + i pi (3/2 + A) + 2 pi i M
        A = float(d.A)
        return (math.pi / (2 * P0)) * (2 * M + 1.5 + A) \
            + 1j * math.log(2.0) / (4 * P0)
    theta = math.pi / (2 * mq1)
    return (math.pi / (2 * P0)) * (2 * M + 1) \
        + 1j * math.log(math.sqrt(2.0) / math.cos(theta)) / (2 * P0)


def leading_Cs(xi: complex, d: DerivedParams) -> complex:
    """m-even connection bracket e^{iP0 xi} - (i/sqrt2)e^{i pi (1+A)}e^{-iP0 xi}.

    The unknown nonzero prefactor multiplying the bracket is dropped: only
    the zero set is meaningful.
    """
    d.require_integer_q()
    P0 = float(d.P0)
    A = float(d.A)
    return cmath.exp(1j * P0 * xi) \
        - (1j / math.sqrt(2.0)) * cmath.exp(1j * math.pi * (1 + A)) \
        * cmath.exp(-1j * P0 * xi)


def leading_Dplus(xi: complex, d: DerivedParams) -> complex:
    """m-odd bracket -2 + (i/sqrt2)(e^{i pi (1+A)} + e^{i pi (1+B)})e^{-2 i xi P0}."""
    d.require_integer_q()
    P0 = float(d.P0)
    A = float(d.A)
    B = float(d.B)
    coef = (1j / math.sqrt(2.0)) * (cmath.exp(1j * math.pi * (1 + A))
                                    + cmath.exp(1j * math.pi * (1 + B)))
    return -2.0 + coef * cmath.exp(-2j * xi * P0)


def xi_to_zeta(xi: complex, d: DerivedParams) -> complex:
    """Branch map zeta = (i m xi)^{1/(q+2)} with arg zeta in (0, pi/(q+2)).

    For Re xi > 0 the principal power lands on that branch directly; the
    exact inverse is zeta_to_xi.
    """
    q = d.require_integer_q()
    if xi == 0:
        raise ValueError("xi = 0 has no branch assignment")
    return (1j * d.m * xi) ** (1.0 / (q + 2))


def zeta_to_xi(zeta: complex, d: DerivedParams) -> complex:
    """Inverse of xi_to_zeta: xi = -(i/m) zeta^{q+2}."""
    q = d.require_integer_q()
    return -1j / d.m * zeta ** (q + 2)


def predict_zeta(p: OperatorParams, M: int) -> complex:
    """Direct zeta-plane predictor
    e^{i pi (l-k)/(2(l+1))} [M pi (l+1)(k+1)/(l-k)]^{(l-k)/(l+1)}."""
    d = derive_params(p)
    _require_open(classify_case(p), d)
    _check_M(M)
    k, l = p.k, p.l
    modulus = (M * math.pi * (l + 1) * (k + 1) / (l - k)) ** ((l - k) / (l + 1))
    return cmath.exp(1j * math.pi * (l - k) / (2 * (l + 1))) * modulus


def prediction_pair(p: OperatorParams, M: int) -> PredictionPair:
    """Evaluate both predictors and their zeta images for index M."""
    d = derive_params(p)
    case = classify_case(p)
    xp = predict_xi_paper(d, case, M)
    xs = predict_xi_solved(d, case, M)
    return PredictionPair(M=M, xi_paper=xp, xi_solved=xs,
                          zeta_paper=xi_to_zeta(xp, d),
                          zeta_solved=xi_to_zeta(xs, d))


def s_of_v(v: complex, xi: complex, d: DerivedParams) -> complex:
    """Phase map s(v) = i xi (v^{q+2}/(q+2) - v^{q+1}/(q+1) + P0)."""
    q = d.require_integer_q()
    if q < 0:
        raise ValueError(f"s_of_v requires q >= 0, got q={q}")
    P0 = float(d.P0)
    return 1j * xi * (v ** (q + 2) / (q + 2) - v ** (q + 1) / (q + 1) + P0)


def s_of_v_factored(v: complex, xi: complex, d: DerivedParams) -> complex:
    """Same map in factored form i xi (v-1)^2 P(v),
    P(v) = (q+1)^-1 (q+2)^-1 sum_{j=0}^q (j+1) v^j."""
    q = d.require_integer_q()
    if q < 0:
        raise ValueError(f"s_of_v requires q >= 0, got q={q}")
    poly = 0.0 + 0.0j
    for j in range(q, -1, -1):
        poly = poly * v + (j + 1)
    poly /= (q + 1) * (q + 2)
    return 1j * xi * (v - 1) ** 2 * poly


def _check_alpha(alpha: float) -> None:
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie in (0,1), got {alpha}")


def watson_halfline(T: float, alpha: float, sign: int = +1) -> float:
    """Leading term 2^-a Gamma(1-a) T^(a-1) of
    int_0^inf e^{-Tq} q^-a (2 + sign*iq)^-a dq; sign-independent."""
    _check_alpha(alpha)
    if T <= 0:
        raise ValueError(f"T must be positive, got {T}")
    return 2.0 ** (-alpha) * math.gamma(1.0 - alpha) * T ** (alpha - 1.0)


def watson_phi(T: float, alpha: float, sign: int) -> complex:
    """Leading asymptotics e^{+-i pi (1-a)/2} 2^-a Gamma(1-a) e^{+-iT} T^(a-1)
    of Phi_+-(T) = int_1^inf e^{+-ipT}(p^2-1)^-a dp."""
    s = 1.0 if sign >= 0 else -1.0
    env = watson_halfline(T, alpha)
    return cmath.exp(s * 1j * math.pi * (1 - alpha) / 2) \
        * cmath.exp(s * 1j * T) * env


def watson_I(T: complex, alpha: float) -> complex:
    """Leading asymptotics of I(T) = int_{-1}^1 e^{-ipT}(1-p^2)^-a dp:

        [e^{iT - i pi (1-a)/2} + e^{-iT + i pi (1-a)/2}] 2^-a Gamma(1-a) T^(a-1).

    T may be complex with Re T > 0 (shifted arguments T + K + o(1) appear
    in downstream estimates); powers use the principal branch.
    """
    _check_alpha(alpha)
    Tc = complex(T)
    if Tc.real <= 0:
        raise ValueError(f"Re T must be positive, got T={T}")
    rot = cmath.exp(1j * math.pi * (1 - alpha) / 2)
    env = 2.0 ** (-alpha) * math.gamma(1.0 - alpha) * Tc ** (alpha - 1.0)
    return (cmath.exp(1j * Tc) / rot + cmath.exp(-1j * Tc) * rot) * env
