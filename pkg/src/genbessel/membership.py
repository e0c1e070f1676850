"""Numerical certification of Janowski-class membership on the unit disk.

A functional F of u (u itself, the normalized derivative, or the convexity
quotient 1 + z u''/u') belongs to P[A, B] iff F(D) lies in the image region
of (1+Aw)/(1+Bw).  The region margin is harmonic (half-plane) or
superharmonic (disk: radius - |F - center|), so when F is analytic on the
closed disk its minimum over the disk is attained on |z| = 1.  The boundary
minimum is located by branch and bound in the angle, with rigorous bounds on
the first and second angular derivatives built from absolute coefficient
sums of the series of u, u', u'', ...
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from . import series
from .errors import ContourZero, DerivativeZero, GenBesselError, InvalidParams, NonConvergence
from .janowski import JanowskiPair, RegionKind, TargetRegion, margin, side_condition_margin, target_region
from .series import BesselParams

TWO_PI = 2.0 * math.pi
DERIV_ZERO = 1e-140
CONTOUR_ZERO = 1e-10
DEFAULT_TOL = 1e-8
CERT_TOL = 1e-9


class Functional(enum.Enum):
    U = "u"
    DERIV_NORM = "deriv"
    CONVEXITY = "convex"
    STARLIKE_ZU = "starlike"

    @property
    def needs_c(self) -> bool:
        return self is not Functional.U

    @property
    def quotient(self) -> bool:
        return self in (Functional.CONVEXITY, Functional.STARLIKE_ZU)


class Status(enum.Enum):
    MEMBER = "Member"
    NON_MEMBER = "NonMember"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class MembershipVerdict:
    status: Status
    worst_margin: float
    witness: complex
    samples_used: int
    side_conditions_ok: bool
    lower_bound: float = math.nan
    diagnostic: str = ""


@dataclass(frozen=True)
class BoundaryResult:
    worst_margin: float
    witness: complex
    samples: int
    lower_bound: float
    certified: bool


def _require_c(f, params):
    if f.needs_c and params.c == 0:
        raise InvalidParams(f"functional {f.value} requires c != 0")


def eval_functional(f: Functional, params: BesselParams, pair: JanowskiPair | None, z: complex) -> complex:
    """Value of the functional at z (|z| <= 1); exactly 1 at z = 0."""
    f = Functional(f)
    _require_c(f, params)
    z = complex(z)
    if abs(z) > 1.0 + 1e-12:
        raise InvalidParams(f"|z| = {abs(z)} outside the closed unit disk")
    if z == 0:
        return 1.0 + 0.0j
    if f is Functional.U:
        return series.eval(params, z, 0).value
    u1 = series.eval(params, z, 1).value
    if f is Functional.DERIV_NORM:
        return -4.0 * params.kappa / params.c * u1
    if abs(u1) < DERIV_ZERO:
        raise DerivativeZero(f"u' vanishes at z={z}")
    u2 = series.eval(params, z, 2).value
    if f is Functional.CONVEXITY:
        return 1.0 + z * u2 / u1
    # z (z u')' / (z u'), evaluated through g = z u' and g' = u' + z u''
    g = z * u1
    dg = u1 + z * u2
    return z * dg / g


def _values_many(f, params, zs):
    """Vectorized functional values; for quotient functionals also |u'|."""
    if f is Functional.U:
        return series.eval_many(params, zs, 0), None
    u1 = series.eval_many(params, zs, 1)
    if f is Functional.DERIV_NORM:
        return -4.0 * params.kappa / params.c * u1, None
    u2 = series.eval_many(params, zs, 2)
    au1 = np.abs(u1)
    with np.errstate(divide="ignore", invalid="ignore"):
        if f is Functional.CONVEXITY:
            vals = 1.0 + zs * u2 / u1
        else:
            vals = zs * (u1 + zs * u2) / (zs * u1)
    vals = np.where(au1 < DERIV_ZERO, np.nan, vals)
    vals = np.where(zs == 0, 1.0 + 0.0j, vals)
    return vals, au1


class _AngularBounds:
    """Bounds on |dF/dtheta| and |d^2F/dtheta^2| along |z| = 1."""

    def __init__(self, f, params):
        self.f = f
        if f is Functional.U:
            self.k1 = series.abs_moment(params, 0, 1)
            self.k2 = series.abs_moment(params, 0, 2)
        elif f is Functional.DERIV_NORM:
            scale = abs(4.0 * params.kappa / params.c)
            self.k1 = scale * series.abs_moment(params, 1, 1)
            self.k2 = scale * series.abs_moment(params, 1, 2)
        else:
            # max moduli of u'', u''', u'''' on the closed disk
            self.U2 = series.abs_moment(params, 2, 0)
            self.U3 = series.abs_moment(params, 3, 0)
            self.U4 = series.abs_moment(params, 4, 0)

    def __call__(self, width, aux_a, aux_b):
        if not self.f.quotient:
            return np.full_like(width, self.k1), np.full_like(width, self.k2)
        U2, U3, U4 = self.U2, self.U3, self.U4
        # lower bound on |u'| over the interval: |d u'/dtheta| = |u''| <= U2
        ell = np.minimum(aux_a, aux_b) - U2 * width / 2
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            inv = np.where(ell > 0, 1.0 / ell, np.inf)
            q0 = U2 * inv
            q1 = U3 * inv + U2**2 * inv**2
            q2 = U4 * inv + 3 * U2 * U3 * inv**2 + 2 * U2**3 * inv**3
            k1 = q0 + q1
            k2 = k1 + 2 * q1 + q2
        return k1, k2


def _interval_lower_bounds(region, bounds, ta, tb, ma, mb, aux_a, aux_b, ga, gb):
    """Rigorous lower bound of the margin on each interval [ta, tb]."""
    w = tb - ta
    k1, k2 = bounds(w, aux_a, aux_b)
    with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
        if region.kind is RegionKind.HALF_PLANE:
            km = k2
        else:
            # margin = r - |g|; |(|g|)''| <= |g''| + |g'|^2 / |g|
            ell_g = np.minimum(ga, gb) - k1 * w / 2
            km = np.where(ell_g > 0, k2 + k1**2 / ell_g, np.inf)
        lip = (ma + mb) / 2 - k1 * w / 2
        curv = np.minimum(ma, mb) - km * w * w / 8
        lb = np.fmax(lip, curv)
    return np.where(np.isnan(lb), -np.inf, lb)


def _margin_and_aux(f, params, region, theta):
    zs = np.exp(1j * theta)
    vals, au1 = _values_many(f, params, zs)
    m = margin(region, vals)
    m = np.where(np.isnan(m), -np.inf, m)
    g = np.abs(vals - region.center) if region.kind is RegionKind.DISK else np.zeros(theta.shape)
    g = np.where(np.isnan(g), 0.0, g)
    if au1 is None:
        au1 = np.zeros(theta.shape)
    return m, au1, g


def _scalar_margin(f, params, pair, region, theta):
    try:
        return float(margin(region, eval_functional(f, params, pair, np.exp(1j * theta))))
    except DerivativeZero:
        return -math.inf


def boundary_sup_margin(f: Functional, params: BesselParams, pair: JanowskiPair,
                        grid: int = 4096, cert_tol: float = CERT_TOL,
                        max_samples: int = 2**21) -> BoundaryResult:
    """Minimum over |z| = 1 of the region margin of f, with its minimizer.

    The minimum is certified to within ``cert_tol`` (``certified`` is False if
    the sample budget ran out first; ``lower_bound`` is rigorous either way,
    up to floating-point rounding).
    """
    f = Functional(f)
    _require_c(f, params)
    region = target_region(pair)
    bounds = _AngularBounds(f, params)

    theta = np.linspace(0.0, TWO_PI, grid + 1)
    m, aux, g = _margin_and_aux(f, params, region, theta[:-1])
    # close the circle: the endpoint at 2 pi duplicates theta = 0
    m, aux, g = np.append(m, m[0]), np.append(aux, aux[0]), np.append(g, g[0])
    samples = grid

    i = int(np.argmin(m))
    best, best_t = float(m[i]), float(theta[i])

    ta, tb = theta[:-1], theta[1:]
    ma, mb = m[:-1], m[1:]
    aa, ab = aux[:-1], aux[1:]
    ga, gb = g[:-1], g[1:]
    settled_lb = math.inf
    certified = True
    while ta.size:
        if best == -math.inf:
            settled_lb = -math.inf
            break
        lb = _interval_lower_bounds(region, bounds, ta, tb, ma, mb, aa, ab, ga, gb)
        active = lb < best - cert_tol
        if np.any(~active):
            settled_lb = min(settled_lb, float(np.min(lb[~active])))
        if not np.any(active):
            break
        if samples + int(np.count_nonzero(active)) > max_samples:
            settled_lb = min(settled_lb, float(np.min(lb[active])))
            certified = False
            break
        ta, tb, ma, mb = ta[active], tb[active], ma[active], mb[active]
        aa, ab, ga, gb = aa[active], ab[active], ga[active], gb[active]
        tm = (ta + tb) / 2
        mm, am, gm = _margin_and_aux(f, params, region, tm)
        samples += tm.size
        j = int(np.argmin(mm))
        if mm[j] < best:
            best, best_t = float(mm[j]), float(tm[j])
        ta, tb = np.concatenate([ta, tm]), np.concatenate([tm, tb])
        ma, mb = np.concatenate([ma, mm]), np.concatenate([mm, mb])
        aa, ab = np.concatenate([aa, am]), np.concatenate([am, ab])
        ga, gb = np.concatenate([ga, gm]), np.concatenate([gm, gb])

    if best > -math.inf:
        h = TWO_PI / grid
        res = minimize_scalar(lambda t: _scalar_margin(f, params, pair, region, t),
                              bounds=(best_t - h, best_t + h), method="bounded",
                              options={"xatol": 1e-12})
        samples += int(res.nfev)
        if res.fun < _scalar_margin(f, params, pair, region, best_t):
            best_t = float(res.x)
    best_t = math.remainder(best_t, TWO_PI)
    witness = complex(np.exp(1j * best_t))
    worst = _scalar_margin(f, params, pair, region, best_t)
    return BoundaryResult(worst, witness, samples, min(settled_lb, worst), certified)


def _winding(fn, radius, initial, max_samples, what):
    """Winding number of the analytic fn (vectorized) around |z| = radius."""
    theta = np.linspace(0.0, TWO_PI, initial + 1)
    vals = fn(radius * np.exp(1j * theta))
    vals[-1] = vals[0]
    while True:
        if np.min(np.abs(vals)) <= CONTOUR_ZERO:
            k = int(np.argmin(np.abs(vals)))
            raise ContourZero(f"{what} nearly vanishes on |z|={radius} at z={radius * np.exp(1j * theta[k]):.6g}")
        with np.errstate(invalid="ignore", divide="ignore"):
            dphi = np.angle(vals[1:] / vals[:-1])
        bad = np.flatnonzero(np.abs(dphi) >= math.pi / 2)
        if bad.size == 0:
            break
        if theta.size + bad.size > max_samples:
            raise NonConvergence("phase tracking exceeded its sample budget")
        mid = (theta[bad] + theta[bad + 1]) / 2
        mvals = fn(radius * np.exp(1j * mid))
        theta = np.insert(theta, bad + 1, mid)
        vals = np.insert(vals, bad + 1, mvals)
    winding = float(np.sum(dphi)) / TWO_PI
    n = round(winding)
    if abs(winding - n) > 1e-6:
        raise NonConvergence(f"winding number {winding} is not an integer")
    return int(n)


def _check_radius(radius):
    if not 0.0 < radius <= 1.0:
        raise InvalidParams(f"radius must lie in (0, 1], got {radius}")


def count_zeros(params: BesselParams, order: int, radius: float = 1.0,
                initial: int = 1024, max_samples: int = 2**20) -> int:
    """Number of zeros of u^(order) in |z| < radius by the argument principle.

    The image of the circle is sampled adaptively until every consecutive
    phase increment is below pi/2, then the increments are summed.
    """
    _check_radius(radius)
    return _winding(lambda z: series.eval_many(params, z, order), radius, initial, max_samples,
                    f"u^({order})")


def count_excluded_point_hits(f: Functional, params: BesselParams, pair: JanowskiPair,
                              radius: float = 1.0, initial: int = 1024, max_samples: int = 2**20) -> int:
    """Number of points in |z| < radius where f takes the value (1+A)/(1+B).

    Counted as zeros of an analytic numerator: (1+B)F - (1+A) for u and the
    normalized derivative, (A-B)u' - (1+B)zu'' for the quotient functionals.
    Always 0 when B = -1.
    """
    f = Functional(f)
    _check_radius(radius)
    _require_c(f, params)
    A, B = pair.A, pair.B
    if B == -1.0:
        return 0
    if f is Functional.U:
        def fn(z):
            return (1 + B) * series.eval_many(params, z, 0) - (1 + A)
    elif f is Functional.DERIV_NORM:
        scale = -4.0 * params.kappa / params.c

        def fn(z):
            return (1 + B) * scale * series.eval_many(params, z, 1) - (1 + A)
    else:
        def fn(z):
            return (A - B) * series.eval_many(params, z, 1) - (1 + B) * z * series.eval_many(params, z, 2)
    return _winding(fn, radius, initial, max_samples, "excluded-point numerator")


def _interior_search(f, params, pair, region, radii=50, angles=512):
    """Coarse polar-grid minimum of the margin inside the disk."""
    r = np.linspace(1.0 / radii, 1.0, radii)
    t = np.linspace(0.0, TWO_PI, angles, endpoint=False)
    zs = (r[:, None] * np.exp(1j * t[None, :])).ravel()
    vals, _ = _values_many(f, params, zs)
    m = np.where(np.isnan(vals), -np.inf, margin(region, vals))
    m = np.where(np.isnan(m), -np.inf, m)
    finite = np.isfinite(m)
    if not np.any(finite):
        return -math.inf, complex(zs[0]), zs.size
    k = int(np.argmin(np.where(finite, m, np.inf)))
    w = complex(zs[k])
    return float(margin(region, eval_functional(f, params, pair, w))), w, zs.size


def _classify(worst, lower, tol):
    if lower >= tol:
        return Status.MEMBER
    if worst <= -tol:
        return Status.NON_MEMBER
    return Status.INCONCLUSIVE


def verify(f: Functional, params: BesselParams, pair: JanowskiPair, tol: float = DEFAULT_TOL,
           grid: int = 4096, cert_tol: float = CERT_TOL) -> MembershipVerdict:
    """Certify (Member), refute (NonMember, with witness) or give up (Inconclusive)."""
    if not tol >= 1e-12:
        raise InvalidParams("tol must be at least 1e-12")
    f = Functional(f)
    region = target_region(pair)
    side_ok = True
    notes = []
    samples = 0
    try:
        _require_c(f, params)
        if f.quotient:
            try:
                n1 = count_zeros(params, 1, 1.0)
            except ContourZero as exc:
                # functional pole on the boundary: unbounded, so not in the class
                zs = np.exp(1j * np.linspace(0.0, TWO_PI, grid, endpoint=False))
                k = int(np.argmin(np.abs(series.eval_many(params, zs, 1))))
                return MembershipVerdict(Status.NON_MEMBER, -math.inf, complex(zs[k]), grid,
                                         False, -math.inf, f"u' zero on boundary: {exc}")
            if n1 > 0:
                side_ok = False
                notes.append(f"u' has {n1} zero(s) in the disk")
                worst, w, n = _interior_search(f, params, pair, region)
                samples += n
                status = Status.NON_MEMBER if worst <= -tol else Status.INCONCLUSIVE
                return MembershipVerdict(status, worst, w, samples, False, -math.inf, "; ".join(notes))
            try:
                n2 = count_zeros(params, 2, 1.0)
            except ContourZero as exc:
                n2 = None
                notes.append(f"u'' zero on boundary: {exc}")
            if n2 != 0:
                side_ok = False
                if n2:
                    notes.append(f"u'' has {n2} zero(s) in the disk")

        res = boundary_sup_margin(f, params, pair, grid=grid, cert_tol=cert_tol)
        samples += res.samples
        if not res.certified:
            notes.append("boundary minimum not certified within sample budget")

        if not f.quotient and pair.B > -1.0:
            zs = np.exp(1j * np.linspace(0.0, TWO_PI, grid, endpoint=False))
            vals, _ = _values_many(f, params, zs)
            side_min = float(np.min(side_condition_margin(pair, vals)))
            samples += grid
            if not side_min > 0:
                side_ok = False
                notes.append("functional reaches the excluded point (1+A)/(1+B)")
        if pair.B > -1.0:
            try:
                hits = count_excluded_point_hits(f, params, pair)
            except ContourZero:
                hits = None
            if hits != 0:
                side_ok = False
                notes.append("functional takes the value (1+A)/(1+B) "
                             + ("on the boundary" if hits is None else f"at {hits} point(s) in the disk"))
    except GenBesselError as exc:
        return MembershipVerdict(Status.INCONCLUSIVE, math.nan, complex(math.nan, math.nan),
                                 samples, side_ok, math.nan, f"{type(exc).__name__}: {exc}")

    status = _classify(res.worst_margin, res.lower_bound, tol)
    return MembershipVerdict(status, res.worst_margin, res.witness, samples, side_ok,
                             res.lower_bound, "; ".join(notes))


__all__ = [
    "Functional",
    "Status",
    "MembershipVerdict",
    "BoundaryResult",
    "TargetRegion",
    "eval_functional",
    "boundary_sup_margin",
    "count_zeros",
    "count_excluded_point_hits",
    "verify",
]
