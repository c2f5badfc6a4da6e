"""Operator family parameters and derived constants.

The family under study is

    P_zeta = -d^2/dx^2 + (x^l - zeta*x^k)^2,   0 <= k < l integers,

and every other module consumes the constants derived from (k, l):

    m  = l - k
    q  = (l+1)/(l-k) - 2          (integer exactly when (l+1)/(l-k) is)
    P0 = 1/((q+1)(q+2))
    A  = -(1 + 1/(m(q+1)))/2,  B = -(1 - 1/(m(q+1)))/2
    q1 = -(q+1)/2 + 1/(2m)
    r  = 1 - 1/(m(q+1))

All of these are kept as exact `Fraction`s so the structural identities
m(q+1) = k+1, m(q+2) = l+1 and A + B = -1 are testable exactly; callers
convert to float at use sites.

Case classification separates the parameter regimes:

  * CaseI        -- (l+1)/(l-k) is not a positive integer,
  * CaseII       -- both l-k and (l+1)/(l-k) are odd integers,
  * Exceptional01-- (k,l) = (0,1), the only pair with A = -1, B = 0,
  * OpenEvenM    -- remaining pairs with m even,
  * OpenOddMEvenQ-- remaining pairs with m odd (q is then even).

The eigenvalue machinery (asymptotics, shooting seeds) applies to the two
Open* cases; CaseI/CaseII are accepted by classification and stratification
only.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction


class CaseClass(Enum):
    CASE_I = "CaseI"
    CASE_II = "CaseII"
    OPEN_EVEN_M = "OpenEvenM"
    OPEN_ODD_M_EVEN_Q = "OpenOddMEvenQ"
    EXCEPTIONAL_01 = "Exceptional01"


OPEN_CASES = (CaseClass.OPEN_EVEN_M, CaseClass.OPEN_ODD_M_EVEN_Q)


@dataclass(frozen=True)
class OperatorParams:
    """Exponent pair (k, l) of the operator family; requires 0 <= k < l."""

    k: int
    l: int

    def __post_init__(self):
        if not (isinstance(self.k, int) and isinstance(self.l, int)):
            raise ValueError("k and l must be integers")
        if self.k < 0:
            raise ValueError(f"k must be non-negative, got k={self.k}")
        if self.k >= self.l:
            raise ValueError(f"need k < l, got k={self.k}, l={self.l}")


@dataclass(frozen=True)
class DerivedParams:
    """Constants derived from (k, l).

    `q` is None when (l+1)/(l-k) is not an integer; the fields that only
    make sense for integer q (P0, A, B, q1, r) are then None as well.
    """

    k: int
    l: int
    m: int
    q: int | None
    P0: Fraction | None
    A: Fraction | None
    B: Fraction | None
    q1: Fraction | None
    r: Fraction | None

    @property
    def mq1(self) -> int | None:
        """m*(q+1), equal to k+1 whenever q is an integer."""
        return self.m * (self.q + 1) if self.q is not None else None

    def require_integer_q(self) -> int:
        if self.q is None:
            raise ValueError(
                f"(l+1)/(l-k) is not an integer for (k,l)=({self.k},{self.l}) "
                "(CaseI); integer-q constants are undefined"
            )
        return self.q


@dataclass(frozen=True)
class Stratum:
    description: str
    codimension: int
    symplectic: bool


VERDICT_AH = "analytic-hypoelliptic"
VERDICT_NOT_AH = "not-analytic-hypoelliptic"


@dataclass(frozen=True)
class StratumReport:
    strata: tuple[Stratum, ...]
    verdict: str


def derive_params(p: OperatorParams) -> DerivedParams:
    """Compute all derived constants for (k, l), exactly.

    Fields requiring integer q are None when (l+1)/(l-k) is not an integer.
    """
    m = p.l - p.k
    ratio = Fraction(p.l + 1, m)
    if ratio.denominator != 1:
        return DerivedParams(k=p.k, l=p.l, m=m, q=None,
                             P0=None, A=None, B=None, q1=None, r=None)
    q = int(ratio) - 2
    mq1 = Fraction(m * (q + 1))
    return DerivedParams(
        k=p.k,
        l=p.l,
        m=m,
        q=q,
        P0=Fraction(1, (q + 1) * (q + 2)),
        A=-(1 + 1 / mq1) / 2,
        B=-(1 - 1 / mq1) / 2,
        q1=-Fraction(q + 1, 2) + Fraction(1, 2 * m),
        r=1 - 1 / mq1,
    )


def classify_case(p: OperatorParams) -> CaseClass:
    """Place (k, l) into exactly one parameter regime."""
    m = p.l - p.k
    if (p.l + 1) % m != 0:
        return CaseClass.CASE_I
    ratio = (p.l + 1) // m
    if m % 2 == 1 and ratio % 2 == 1:
        return CaseClass.CASE_II
    if (p.k, p.l) == (0, 1):
        return CaseClass.EXCEPTIONAL_01
    if m % 2 == 0:
        return CaseClass.OPEN_EVEN_M
    return CaseClass.OPEN_ODD_M_EVEN_Q


def is_open_case(case: CaseClass) -> bool:
    return case in OPEN_CASES


def stratify(p: OperatorParams) -> StratumReport:
    """Stratify the characteristic variety {xi = x^k eta - x^l tau = 0}.

    The answers are hard-coded as formulas in (k, l) for this family only:
    a stratum of odd codimension cannot be symplectic, and its presence
    decides the verdict.
    """
    k, l = p.k, p.l
    if k >= 1:
        strata = (
            Stratum(f"Sigma0 = {{xi = x^{k} eta - x^{l} tau = 0, x != 0}}", 2, True),
            Stratum("Sigma1 = {x = xi = 0, eta != 0}", 2, True),
            Stratum("Sigma2 = {x = xi = eta = 0, tau != 0}", 3, False),
        )
    elif l >= 2:
        strata = (
            Stratum(f"Sigma0 = {{xi = eta - x^{l} tau = 0, x != 0}}", 2, True),
            Stratum("Sigma1 = {x = xi = eta = 0, tau != 0}", 3, False),
        )
    else:
        strata = (
            Stratum("characteristic variety {xi = eta - x tau = 0}", 2, True),
        )
    odd = any(s.codimension % 2 == 1 for s in strata)
    return StratumReport(strata=strata,
                         verdict=VERDICT_NOT_AH if odd else VERDICT_AH)
