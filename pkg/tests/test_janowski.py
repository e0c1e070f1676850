import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genbessel.errors import InvalidParams, PoleHit
from genbessel.janowski import (
    JanowskiPair,
    RegionKind,
    margin,
    mobius,
    side_condition_margin,
    target_region,
)


@st.composite
def pairs(draw, disk_only=False):
    lo = -0.999 if disk_only else -1.0
    B = draw(st.floats(lo, 0.99))
    if not disk_only and draw(st.booleans()):
        B = -1.0
    A = draw(st.floats(B + 1e-3, 1.0))
    return JanowskiPair(A, B)


@pytest.mark.parametrize("A, B", [(0.5, 0.5), (0.2, 0.7), (1.2, 0), (0.5, -1.1), (math.nan, 0)])
def test_pair_validation(A, B):
    with pytest.raises(InvalidParams):
        JanowskiPair(A, B)


def test_pair_error_message():
    with pytest.raises(InvalidParams, match="Janowski pair requires B < A"):
        JanowskiPair(0.3, 0.3)


def test_region_caratheodory():
    r = target_region(JanowskiPair(1, -1))
    assert r.kind is RegionKind.HALF_PLANE and r.threshold == 0


def test_region_affine_case_three_point_fit():
    pair = JanowskiPair(1, 0)
    r = target_region(pair)
    assert r.kind is RegionKind.DISK
    # circle through the images of 1, -1, i
    pts = [mobius(pair, w) for w in (1, -1, 1j)]
    (x1, y1), (x2, y2), (x3, y3) = [(p.real, p.imag) for p in pts]
    d = 2 * (x1 * (y2 - y3) + x2 * (y3 - y1) + x3 * (y1 - y2))
    ux = ((x1**2 + y1**2) * (y2 - y3) + (x2**2 + y2**2) * (y3 - y1) + (x3**2 + y3**2) * (y1 - y2)) / d
    uy = ((x1**2 + y1**2) * (x3 - x2) + (x2**2 + y2**2) * (x1 - x3) + (x3**2 + y3**2) * (x2 - x1)) / d
    assert complex(ux, uy) == pytest.approx(r.center, abs=1e-14)
    assert abs(pts[0] - complex(ux, uy)) == pytest.approx(r.radius, abs=1e-14)
    assert r.center == 1 and r.radius == 1


@pytest.mark.parametrize("beta", [0.0, 0.25, 0.6])
def test_region_order_beta(beta):
    r = target_region(JanowskiPair(1 - 2 * beta, -1))
    assert r.kind is RegionKind.HALF_PLANE
    assert r.threshold == pytest.approx(beta, abs=1e-15)


@pytest.mark.parametrize("A, B, w, expected", [(1, -1, 0, 1), (1, 0, 1j, 1 + 1j), (0.5, -0.5, 1, 3)])
def test_mobius_examples(A, B, w, expected):
    assert mobius(JanowskiPair(A, B), w) == pytest.approx(expected, abs=1e-15)


def test_mobius_pole():
    with pytest.raises(PoleHit):
        mobius(JanowskiPair(1, -1), 1)


def test_margin_examples():
    disk = target_region(JanowskiPair(1, 0))
    assert margin(disk, 1) == 1
    assert margin(disk, 2) == 0
    half = target_region(JanowskiPair(1, -1))
    assert margin(half, -0.25 + 5j) == -0.25


def test_margin_vectorized():
    disk = target_region(JanowskiPair(1, 0))
    assert np.allclose(margin(disk, np.array([1, 2, 3])), [1, 0, -1])


@pytest.mark.parametrize("A, B, p, expected", [(1, 0, 1, 1), (1, 0, 2, 0), (0.5, -0.5, 1, 2)])
def test_side_condition_examples(A, B, p, expected):
    assert side_condition_margin(JanowskiPair(A, B), p) == pytest.approx(expected, abs=1e-15)


def test_side_condition_vacuous_for_half_plane():
    pair = JanowskiPair(0.3, -1)
    assert side_condition_margin(pair, 5.0) == math.inf
    assert np.all(side_condition_margin(pair, np.ones(3)) == math.inf)


@settings(max_examples=200, deadline=None)
@given(pairs(disk_only=True))
def test_circle_maps_to_boundary(pair):
    r = target_region(pair)
    w = np.exp(1j * np.linspace(0, 2 * np.pi, 1000, endpoint=False))
    # avoid the pole -1/B, which lies on the circle only when B = -1
    img = (1 + pair.A * w) / (1 + pair.B * w)
    assert np.max(np.abs(np.abs(img - r.center) - r.radius)) <= 1e-12 * max(1.0, r.radius)


@settings(max_examples=200, deadline=None)
@given(pairs())
def test_interior_maps_inside(pair):
    rng = np.random.default_rng(0)
    w = 0.999 * np.sqrt(rng.random(1000)) * np.exp(2j * np.pi * rng.random(1000))
    img = (1 + pair.A * w) / (1 + pair.B * w)
    r = target_region(pair)
    assert np.all(margin(r, img) > 0)
    assert margin(r, 1.0) > 0


@settings(max_examples=200, deadline=None)
@given(pairs(disk_only=True))
def test_excluded_point_is_rightmost_boundary_point(pair):
    r = target_region(pair)
    assert pair.excluded_point == pytest.approx(r.center.real + r.radius, rel=1e-12)
    scale = max(1.0, abs(pair.excluded_point))
    assert side_condition_margin(pair, r.center + r.radius) <= 1e-12 * scale


@pytest.mark.parametrize("A", [-0.5, 0.0, 0.7, 1.0])
def test_limit_b_to_minus_one(A):
    half = target_region(JanowskiPair(A, -1))
    prev = math.inf
    for eps in (1e-2, 1e-4, 1e-6, 1e-8):
        r = target_region(JanowskiPair(A, -1 + eps))
        gap = abs((r.center.real - r.radius) - half.threshold)
        assert gap <= prev
        prev = gap
    assert prev < 1e-7


def test_margin_stable_near_half_plane_limit():
    # B = -1 + 1e-16: center and radius are ~4.5e15, the margin of 1 is 1 - (1-A)/(1-B)
    pair = JanowskiPair(0.0, -0.9999999999999999)
    r = target_region(pair)
    assert r.radius > 1e15
    assert margin(r, 1.0) == pytest.approx(1 - 1 / (1 - pair.B), abs=1e-12)
    assert margin(r, 0.25) == pytest.approx(0.25 - 1 / (1 - pair.B), abs=1e-12)
