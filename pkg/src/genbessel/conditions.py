"""Sufficient conditions for Janowski membership, convexity and starlikeness.

Each predicate returns a :class:`ConditionReport` whose slacks are
``bound - value`` (or ``value - bound``) so that a nonnegative slack means the
sub-inequality holds.  Every threshold depends on c only through |c|.

The admissibility profiles G, H (subordination, B = -1) and Q (convexity,
B > -1) are the real-variable functions whose nonpositivity over all real rho
makes the corresponding differential-subordination argument go through.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidParams, PoleHit
from .janowski import JanowskiPair

SMALL_A_LIMIT = 3.0 - 2.0 * math.sqrt(2.0)


class Theorem(enum.Enum):
    T21 = "t21"
    T22 = "t22"
    T31 = "t31"
    T32 = "t32"
    COR = "cor"


class CaseId(enum.Enum):
    B_EQ_M1_SMALL_A = "B_eq_m1_smallA"
    B_EQ_M1_LARGE_A = "B_eq_m1_largeA"
    B_IN_M1_0 = "B_in_m1_0"
    B_GE_0 = "B_ge_0"
    B_EQ_M1_CONV = "B_eq_m1_conv"
    B_GT_M1_CONV = "B_gt_m1_conv"
    COROLLARY = "Corollary"


class Mode(enum.Enum):
    PROOF_FAITHFUL = "proof"
    AS_STATED = "stated"


class Slack(NamedTuple):
    name: str
    value: float
    strict: bool = False

    @property
    def ok(self) -> bool:
        return self.value > 0 if self.strict else self.value >= 0


@dataclass(frozen=True)
class ConditionReport:
    theorem: Theorem
    holds: bool
    case_id: CaseId
    slacks: tuple[Slack, ...]
    mode: Mode = Mode.PROOF_FAITHFUL

    @property
    def min_slack(self) -> float:
        return min(s.value for s in self.slacks)

    def slack(self, name: str) -> float:
        for s in self.slacks:
            if s.name == name:
                return s.value
        raise KeyError(name)


def _report(theorem, case_id, slacks, mode=Mode.PROOF_FAITHFUL):
    slacks = tuple(slacks)
    return ConditionReport(theorem, all(s.ok for s in slacks), case_id, slacks, mode)


def subordination_case(pair: JanowskiPair) -> CaseId:
    if pair.B == -1.0:
        return CaseId.B_EQ_M1_SMALL_A if pair.A <= SMALL_A_LIMIT else CaseId.B_EQ_M1_LARGE_A
    if pair.B < 0.0:
        return CaseId.B_IN_M1_0
    return CaseId.B_GE_0


def _subordination_slacks(pair, x, c_abs, upper_den):
    """Slacks for ``x >= threshold`` (x = Re(kappa-1) or Re kappa).

    ``upper_den`` is the denominator coefficient of the large-A upper bound
    x <= |c|(1+A)/(upper_den (1-A)).
    """
    A, B = pair.A, pair.B
    case = subordination_case(pair)
    if case is CaseId.B_EQ_M1_SMALL_A:
        thr = c_abs / (4 * (1 + A)) * (math.sqrt(2 * (1 + A * A)) + (1 - A))
        return case, [Slack("lower", x - thr)]
    if case is CaseId.B_EQ_M1_LARGE_A:
        lower = c_abs * (1 + A) / (8 * math.sqrt(A))
        if A == 1.0:
            upper = math.inf
        else:
            upper = c_abs * (1 + A) / (upper_den * (1 - A)) - x
        return case, [Slack("lower", x - lower), Slack("upper", upper)]
    if case is CaseId.B_IN_M1_0:
        thr = c_abs * (1 + A) * (1 - B) ** 2 / (4 * (A - B) * (1 + B)) - (1 + B) / (1 - B)
        return case, [Slack("lower", x - thr)]
    thr = c_abs * (1 + A) * (1 + B) / (4 * (A - B)) - (1 - B) / (1 + B)
    return case, [Slack("lower", x - thr)]


def thm21_condition(pair: JanowskiPair, kappa: complex, c: complex,
                    mode: Mode = Mode.PROOF_FAITHFUL) -> ConditionReport:
    """Condition on Re(kappa - 1) guaranteeing u in P[A, B].

    In the large-A half-plane case the upper bound on Re(kappa-1) has
    denominator 4(1-A) in ProofFaithful mode and 2(1-A) in AsStated mode.
    """
    mode = Mode(mode)
    upper_den = 4.0 if mode is Mode.PROOF_FAITHFUL else 2.0
    case, slacks = _subordination_slacks(pair, complex(kappa).real - 1.0, abs(c), upper_den)
    return _report(Theorem.T21, case, slacks, mode)


def thm22_condition(pair: JanowskiPair, kappa: complex, c: complex,
                    mode: Mode = Mode.PROOF_FAITHFUL) -> ConditionReport:
    """Condition on Re(kappa) guaranteeing (-4 kappa / c) u' in P[A, B]."""
    case, slacks = _subordination_slacks(pair, complex(kappa).real, abs(c), 4.0)
    return _report(Theorem.T22, case, slacks, Mode(mode))


def thm31_condition(pair: JanowskiPair, kappa: complex, c: complex,
                    theorem: Theorem = Theorem.T31) -> ConditionReport:
    """Condition guaranteeing 1 + z u''/u' is subordinate to (1+Az)/(1+Bz)."""
    A, B = pair.A, pair.B
    kappa = complex(kappa)
    re, im, c_abs = kappa.real, kappa.imag, abs(c)
    if B == -1.0:
        thr = im * im / (2 * (2 + A)) + A / 2 + c_abs / (2 * (A + 1))
        return _report(theorem, CaseId.B_EQ_M1_CONV, [Slack("lower", re - thr)])
    AB = A - B
    lower = (A - B - 1) / (1 - B) + c_abs * (1 - B) / (4 * AB)
    upper = (A - B + 1) / (1 + B) - c_abs * (1 + B) / (4 * AB)
    left = A - B + 1 - c_abs * (1 + B) ** 2 / (4 * AB) - (1 + B) * re
    right = (1 - B) * re - c_abs * (1 - B) ** 2 / (4 * AB) - A + B + 1
    cap = 4 * AB * (1 + B * B - A * B) / (1 - B * B)
    slacks = [
        Slack("lower", re - lower),
        Slack("upper", upper - re, strict=True),
        Slack("discriminant", left * right - (B * im) ** 2),
        Slack("c_cap", cap - c_abs, strict=True),
    ]
    return _report(theorem, CaseId.B_GT_M1_CONV, slacks)


def thm32_condition(pair: JanowskiPair, kappa: complex, c: complex) -> ConditionReport:
    """Same inequalities as :func:`thm31_condition`; concludes z u' in S*[A, B]."""
    return thm31_condition(pair, kappa, c, theorem=Theorem.T32)


def corollary_condition(gamma: float, kappa: complex, c: complex) -> ConditionReport:
    """Condition for Re(1 + z u''/u') > gamma, 0 <= gamma < 1."""
    if not 0.0 <= gamma < 1.0:
        raise InvalidParams(f"gamma must lie in [0, 1), got {gamma}")
    kappa = complex(kappa)
    thr = (kappa.imag ** 2 / (2 * (3 - 2 * gamma)) + (1 - 2 * gamma) / 2
           + abs(c) / (4 * (1 - gamma)))
    return _report(Theorem.COR, CaseId.COROLLARY, [Slack("lower", kappa.real - thr)])


def check(theorem: Theorem, pair: JanowskiPair | None, kappa: complex, c: complex,
          mode: Mode = Mode.PROOF_FAITHFUL, gamma: float | None = None) -> ConditionReport:
    """Dispatch on the theorem tag."""
    theorem = Theorem(theorem)
    if theorem is Theorem.COR:
        if gamma is None:
            raise InvalidParams("the corollary requires gamma")
        return corollary_condition(gamma, kappa, c)
    if pair is None:
        raise InvalidParams(f"{theorem.value} requires a Janowski pair")
    if theorem is Theorem.T21:
        return thm21_condition(pair, kappa, c, mode)
    if theorem is Theorem.T22:
        return thm22_condition(pair, kappa, c, mode)
    if theorem is Theorem.T31:
        return thm31_condition(pair, kappa, c)
    return thm32_condition(pair, kappa, c)


# ---------------------------------------------------------------------------
# admissibility profiles


def _re_km1(kappa):
    return complex(kappa).real - 1.0


def eval_G(rho, A: float, c: complex, kappa: complex):
    """Quadratic profile in |rho| bounding Re Psi for B = -1, small A."""
    a = _re_km1(kappa)
    if a <= 0:
        raise InvalidParams("G requires Re(kappa - 1) > 0")
    c_abs = abs(c)
    rho = np.abs(rho)
    return (-(a / 2) * (rho - c_abs / (4 * a)) ** 2 + c_abs**2 / (32 * a)
            + c_abs * (1 - A) / (4 * (1 + A)) - a / 2)


def sup_G(A: float, c: complex, kappa: complex) -> tuple[float, float]:
    """Exact maximum of G over real rho and a maximizer (the vertex)."""
    a = _re_km1(kappa)
    if a <= 0:
        raise InvalidParams("G requires Re(kappa - 1) > 0")
    c_abs = abs(c)
    vertex = c_abs / (4 * a)
    return c_abs**2 / (32 * a) + c_abs * (1 - A) / (4 * (1 + A)) - a / 2, vertex


def eval_H(rho, A: float, c: complex, kappa: complex):
    """Even profile bounding Re Psi for B = -1, large A."""
    a = _re_km1(kappa)
    rho = np.asarray(rho, dtype=float) if np.ndim(rho) else float(rho)
    return -a * (1 + rho**2) / 2 + abs(c) * np.sqrt((1 - A) ** 2 + (1 + A) ** 2 * rho**2) / (4 * (1 + A))


def h_critical_point(A: float, c: complex, kappa: complex) -> float | None:
    """Positive interior critical point rho_0 of H, or None when rho_0^2 < 0."""
    a = _re_km1(kappa)
    if a <= 0:
        return None
    rho0_sq = abs(c) ** 2 / (16 * a * a) - ((1 - A) / (1 + A)) ** 2
    return math.sqrt(rho0_sq) if rho0_sq >= 0 else None


def sup_H(A: float, c: complex, kappa: complex, guard: float = 10.0,
          guard_points: int = 10_000) -> tuple[float, float]:
    """Maximum of H over the critical set {0, +-rho_0} and a guard grid on [-guard, guard].

    Returns +inf when Re(kappa-1) < 0 (H is unbounded above), and the limit
    sup when it is 0 and H is nondecreasing in |rho|.
    """
    a = _re_km1(kappa)
    if a < 0 or (a == 0 and c != 0):
        return math.inf, math.inf
    candidates = [0.0]
    rho0 = h_critical_point(A, c, kappa)
    if rho0 is not None:
        candidates += [rho0, -rho0]
    rhos = np.concatenate([np.array(candidates), np.linspace(-guard, guard, guard_points)])
    vals = eval_H(rhos, A, c, kappa)
    i = int(np.argmax(vals))
    return float(vals[i]), float(rhos[i])


@dataclass(frozen=True)
class QCoefficients:
    P: float
    R: float
    S: float


def q_coefficients(pair: JanowskiPair, kappa: complex, c: complex) -> QCoefficients:
    """Coefficients of Q(rho) = -P rho^2 + R rho - S (requires B > -1)."""
    A, B = pair.A, pair.B
    kappa = complex(kappa)
    c_abs = abs(c)
    P = (A - B + 1) / 2 - (1 + B) * kappa.real / 2 - c_abs * (1 + B) ** 2 / (8 * (A - B))
    R = B * kappa.imag
    S = (1 - B) * kappa.real / 2 - c_abs * (1 - B) ** 2 / (8 * (A - B)) - (A - B - 1) / 2
    return QCoefficients(P, R, S)


def eval_Q(coeffs: QCoefficients, rho):
    return -coeffs.P * rho**2 + coeffs.R * rho - coeffs.S


def sup_Q(coeffs: QCoefficients) -> tuple[float, float]:
    """Exact supremum of Q over real rho and its maximizer (inf sentinels if unbounded)."""
    P, R, S = coeffs.P, coeffs.R, coeffs.S
    if P > 0:
        return R * R / (4 * P) - S, R / (2 * P)
    if P == 0 and R == 0:
        return -S, 0.0
    return math.inf, math.copysign(math.inf, R) if R else math.inf


def eval_psi_subordination(pair: JanowskiPair, kappa: complex, c: complex,
                           r: complex, s: complex, t: complex, z: complex) -> complex:
    """Psi(r, s, t; z) of the transformed ODE used for u in P[A, B]."""
    A, B = pair.A, pair.B
    den = (1 - B) + (1 + B) * r
    if abs(den) < 1e-300:
        raise PoleHit("(1-B) + (1+B) r vanishes")
    return (t - 2 * (1 + B) * s * s / den + kappa * s
            + den * ((1 - A) + (1 + A) * r) * c * z / (8 * (A - B)))
