"""Janowski pairs (A, B) and the image of the unit disk under w -> (1+Aw)/(1+Bw).

For B > -1 the image is the open disk with

    center = (1 - A B) / (1 - B^2),   radius = (A - B) / (1 - B^2),

and for B = -1 it is the half-plane Re w > (1 - A)/2.  Special cases:
P[1-2b, -1] is Re p > b, P[1-b, 0] is |p - 1| < 1 - b, and P[b, -b]
is |p - 1| < b |p + 1|.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams, PoleHit


@dataclass(frozen=True)
class JanowskiPair:
    A: float
    B: float

    def __post_init__(self):
        A, B = float(self.A), float(self.B)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        if not (math.isfinite(A) and math.isfinite(B)):
            raise InvalidParams("Janowski pair must be finite")
        if not -1.0 <= B:
            raise InvalidParams(f"Janowski pair requires B >= -1 (B={B})")
        if not B < A:
            raise InvalidParams("Janowski pair requires B < A")
        if not A <= 1.0:
            raise InvalidParams(f"Janowski pair requires A <= 1 (A={A})")

    @property
    def excluded_point(self) -> float:
        """(1+A)/(1+B), the value the functional must never take; inf when B = -1."""
        if self.B == -1.0:
            return math.inf
        return (1.0 + self.A) / (1.0 + self.B)


class RegionKind(enum.Enum):
    DISK = "Disk"
    HALF_PLANE = "HalfPlane"


@dataclass(frozen=True)
class TargetRegion:
    kind: RegionKind
    center: complex = 0j
    radius: float = 0.0
    threshold: float = 0.0
    # real-axis diameter [left, right] of a disk region
    left: float = math.nan
    right: float = math.nan


def target_region(pair: JanowskiPair) -> TargetRegion:
    A, B = pair.A, pair.B
    if B == -1.0:
        return TargetRegion(RegionKind.HALF_PLANE, threshold=(1.0 - A) / 2.0)
    den = (1.0 - B) * (1.0 + B)
    return TargetRegion(RegionKind.DISK, center=complex((1.0 - A * B) / den), radius=(A - B) / den,
                        left=(1.0 - A) / (1.0 - B), right=(1.0 + A) / (1.0 + B))


def mobius(pair: JanowskiPair, w: complex) -> complex:
    den = 1.0 + pair.B * w
    if abs(den) < 1e-300:
        raise PoleHit(f"1 + B w vanishes at w={w}")
    return (1.0 + pair.A * w) / den


def margin(region: TargetRegion, p):
    """Signed distance of p to the region boundary, positive inside.

    Accepts scalars or numpy arrays.
    """
    if region.kind is RegionKind.HALF_PLANE:
        return np.real(p) - region.threshold
    d = np.abs(p - region.center)
    if math.isnan(region.left):
        return region.radius - d
    # radius^2 - d^2 written through the diameter endpoints, so B near -1
    # (huge center and radius) does not cancel
    x, y = np.real(p), np.imag(p)
    return ((x - region.left) * (region.right - x) - y * y) / (region.radius + d)


def side_condition_margin(pair: JanowskiPair, p):
    """|p - (1+A)/(1+B)|; +inf when B = -1 (the condition is vacuous there)."""
    if pair.B == -1.0:
        if np.ndim(p):
            return np.full(np.shape(p), math.inf)
        return math.inf
    return np.abs(p - pair.excluded_point)
