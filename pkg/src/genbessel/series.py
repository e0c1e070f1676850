"""Power-series evaluation of the normalized generalized Bessel function.

    u(z) = 0F1(kappa; -c z / 4) = sum_k (-c/4)^k z^k / ((kappa)_k k!)

with kappa = lambda + (b + 1)/2.  Only (kappa, c) enter the series; lambda
and b are carried so the shifted function u_{lambda+1} can be formed.

Truncation is certified by a ratio-test bound: the m-th derivative series
has terms t_j = d_j z^j with

    |t_{j+1} / t_j| = |c| |z| / (4 |kappa + j + m| (j + 1)),

which is non-increasing once j + m + Re(kappa) >= 0.  When that ratio is at
most 1/2 from the next index on, the whole remainder is bounded by twice the
modulus of the next term.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParams, NonConvergence

POLE_GUARD = 1e-12
MAX_TERMS = 500
STOP_REL = 1e-15
MAX_MODULUS = 4.0


def pochhammer(x: complex, k: int) -> complex:
    """Rising factorial (x)_k = x (x+1) ... (x+k-1); (x)_0 = 1."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    out = 1.0 + 0.0j if isinstance(x, complex) else 1.0
    for j in range(k):
        out *= x + j
    return out


def pole_distance(kappa: complex) -> float:
    """Distance from kappa to the set {0, -1, -2, ...}."""
    kappa = complex(kappa)
    n = min(round(kappa.real), 0)
    return abs(kappa - n)


@dataclass(frozen=True)
class BesselParams:
    """Order lambda, parameters b and c, and the derived kappa."""

    lam: complex
    b: complex
    c: complex
    kappa: complex = field(init=False)

    def __post_init__(self):
        lam, b, c = complex(self.lam), complex(self.b), complex(self.c)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        kappa = lam + (b + 1) / 2
        object.__setattr__(self, "kappa", kappa)
        if not all(cmath.isfinite(v) for v in (lam, b, c)):
            raise InvalidParams("parameters must be finite")
        if pole_distance(kappa) <= POLE_GUARD:
            raise InvalidParams(f"kappa at nonpositive integer (kappa={kappa})")

    @classmethod
    def from_kappa(cls, kappa: complex, c: complex) -> "BesselParams":
        # b = -1 makes kappa == lambda with no rounding
        return cls(lam=kappa, b=-1.0, c=c)

    def shifted(self, n: int = 1) -> "BesselParams":
        """Parameters of u_{lambda+n} (kappa -> kappa + n)."""
        return BesselParams(self.lam + n, self.b, self.c)


@dataclass(frozen=True)
class SeriesValue:
    value: complex
    tail_bound: float
    terms_used: int


def leading_coefficient(kappa: complex, c: complex, order: int) -> complex:
    """Constant term of the order-th derivative series: (-c/4)^m / (kappa)_m."""
    return (-complex(c) / 4) ** order / pochhammer(complex(kappa), order)


def _ratio(kappa, c_abs, r, j, order):
    den = 4.0 * abs(kappa + j + order) * (j + 1)
    return c_abs * r / den


def _check_order(order):
    if order not in (0, 1, 2, 3, 4):
        raise ValueError(f"derivative order must be in 0..4, got {order}")


def eval(params: BesselParams, z: complex, order: int = 0, extra_terms: int = 0) -> SeriesValue:
    """Evaluate the order-th derivative of u at z with a certified tail bound.

    ``extra_terms`` sums that many further terms after the stopping rule is met
    (used to audit the bound); the reported tail bound then refers to the
    longer partial sum.
    """
    _check_order(order)
    z = complex(z)
    if abs(z) > MAX_MODULUS:
        raise InvalidParams(f"|z| = {abs(z):.3g} outside the working domain |z| <= {MAX_MODULUS}")
    kappa, c = params.kappa, params.c
    c_abs, r = abs(c), abs(z)
    step = -c / 4 * z

    term = leading_coefficient(kappa, c, order)
    total = term
    if term == 0 or step == 0:
        return SeriesValue(total, 0.0, 1)

    j = 0
    stopped_at = None
    while True:
        # term is t_j, nxt is t_{j+1}; the remainder after t_j is at most 2|nxt|
        nxt = term * step / ((kappa + j + order) * (j + 1))
        if stopped_at is None and _tail_ok(kappa, c_abs, r, j + 1, order):
            if 2.0 * abs(nxt) <= STOP_REL * max(1.0, abs(total)):
                stopped_at = j
        if stopped_at is not None and j - stopped_at >= extra_terms:
            return SeriesValue(total, 2.0 * abs(nxt), j + 1)
        if j + 1 >= MAX_TERMS:
            raise NonConvergence(f"series not converged after {MAX_TERMS} terms (kappa={kappa})")
        total += nxt
        term = nxt
        j += 1


def _tail_ok(kappa, c_abs, r, j, order):
    """True when every term ratio from index j on is at most 1/2."""
    return j + order + kappa.real >= 0 and _ratio(kappa, c_abs, r, j, order) <= 0.5


def coefficients(params: BesselParams, order: int = 0, radius: float = 1.0,
                 atol: float = 1e-17, min_terms: int = 1) -> tuple[np.ndarray, float]:
    """Taylor coefficients d_j of u^(order) truncated for use on |z| <= radius.

    Returns ``(d, tail)`` where ``tail`` bounds sum_{j >= len(d)} |d_j| radius^j,
    and the truncation is chosen so that tail <= atol.
    """
    _check_order(order)
    kappa, c = params.kappa, params.c
    term = leading_coefficient(kappa, c, order)
    out = [term]
    if term == 0 or c == 0 or radius == 0:
        return np.array(out, dtype=complex), 0.0
    step = -c / 4
    j = 0
    while True:
        nxt = term * step / ((kappa + j + order) * (j + 1))
        if _tail_ok(kappa, abs(c), radius, j + 1, order):
            tail = 2.0 * abs(nxt) * radius ** (j + 1)
            if tail <= atol and len(out) >= min_terms:
                return np.array(out, dtype=complex), tail
        if j + 1 >= MAX_TERMS:
            raise NonConvergence(f"coefficients not converged after {MAX_TERMS} terms")
        out.append(nxt)
        term = nxt
        j += 1


def eval_many(params: BesselParams, zs, order: int = 0) -> np.ndarray:
    """Vectorized evaluation of u^(order) on an array of points.

    The truncation is certified at the largest modulus in ``zs`` to an absolute
    tail of 1e-15 (never looser than the scalar rule, whose threshold is
    1e-15 * max(1, |value|)).
    """
    zs = np.asarray(zs, dtype=complex)
    rmax = float(np.max(np.abs(zs))) if zs.size else 0.0
    if rmax > MAX_MODULUS:
        raise InvalidParams(f"|z| = {rmax:.3g} outside the working domain |z| <= {MAX_MODULUS}")
    d, _ = coefficients(params, order, radius=max(rmax, 1e-300), atol=STOP_REL)
    return np.polynomial.polynomial.polyval(zs, d)


def abs_moment(params: BesselParams, order: int, power: int = 0, radius: float = 1.0) -> float:
    """Upper bound on sum_j j^power |d_j| radius^j for the order-th derivative series.

    With power = 0 this bounds max |u^(order)| on the closed disk of that radius;
    power = 1, 2 bound the first two angular derivatives on the circle.
    """
    d, tail = coefficients(params, order, radius=radius, atol=1e-18, min_terms=8)
    n = len(d)
    j = np.arange(n, dtype=float)
    s = float(np.sum(j**power * np.abs(d) * radius**j))
    if tail == 0.0:
        return s
    # tail = 2|t_n| and plain ratios are <= 1/2 beyond n, so weighted ratios are
    # <= q = ((n+1)/n)^p / 2 < 1 for n >= 8, p <= 2
    q = ((n + 1.0) / n) ** power / 2.0
    return s + n**power * (tail / 2.0) / (1.0 - q)


def ode_residual(params: BesselParams, z: complex) -> complex:
    """4 z^2 u'' + 4 kappa z u' + c z u, which vanishes identically."""
    z = complex(z)
    u0 = eval(params, z, 0).value
    u1 = eval(params, z, 1).value
    u2 = eval(params, z, 2).value
    return 4 * z * z * u2 + 4 * params.kappa * z * u1 + params.c * z * u0


def recurrence_residual(params: BesselParams, z: complex) -> complex:
    """4 kappa u'_lambda(z) + c u_{lambda+1}(z), which vanishes identically."""
    up = eval(params, z, 1).value
    shifted = eval(params.shifted(1), z, 0).value
    return 4 * params.kappa * up + params.c * shifted


__all__ = [
    "BesselParams",
    "SeriesValue",
    "pochhammer",
    "pole_distance",
    "eval",
    "eval_many",
    "coefficients",
    "abs_moment",
    "leading_coefficient",
    "ode_residual",
    "recurrence_residual",
]
