"""Shared reference objects used across the suite."""

from __future__ import annotations

import pytest

from fanobott import (
    enumerate_matrices,
    make_forest,
    to_matrix,
    validate,
)

# 6x6 reference matrix with one tree: root 6, children 3 and 5,
# 3 above 1 (+) and 2 (-), 5 above 4 (-); edge signs 3:-, 5:+.
REFERENCE_6 = [
    [0, 0, 1, 0, 0, 0],
    [0, 0, -1, 0, 0, -1],
    [0, 0, 0, 0, 0, -1],
    [0, 0, 0, 0, -1, 1],
    [0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 0, 0],
]

# Expected images of REFERENCE_6 under the four flips exercised everywhere.
REFERENCE_6_COLFLIP_3 = [
    [0, 0, -1, 0, 0, -1],
    [0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, -1],
    [0, 0, 0, 0, -1, 1],
    [0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 0, 0],
]
REFERENCE_6_COLFLIP_5 = [
    [0, 0, 1, 0, 0, 0],
    [0, 0, -1, 0, 0, -1],
    [0, 0, 0, 0, 0, -1],
    [0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 0, 0],
]
REFERENCE_6_EDGEFLIP_3_6 = [
    [0, 0, 1, 0, 0, 0],
    [0, 0, -1, 0, 0, 1],
    [0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, -1, 1],
    [0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 0, 0],
]
REFERENCE_6_EDGEFLIP_5_6 = [
    [0, 0, 1, 0, 0, 0],
    [0, 0, -1, 0, 0, -1],
    [0, 0, 0, 0, 0, -1],
    [0, 0, 0, 0, -1, -1],
    [0, 0, 0, 0, 0, -1],
    [0, 0, 0, 0, 0, 0],
]

# Five-vertex tree: root 5, children 2 (-) and 4 (+), 1 below 2 (+),
# 3 below 4 (-).  Leading entries n12=n35=n45=1, n25=n34=-1.
TREE_5 = [
    [0, 1, 0, 0, 0],
    [0, 0, 0, 0, -1],
    [0, 0, 0, -1, 1],
    [0, 0, 0, 0, 1],
    [0, 0, 0, 0, 0],
]

# Two components: root 3 over 1 (+) and 2 (-); root 5 over 4 (+).
FOREST_5 = [
    [0, 0, 1, 0, 0],
    [0, 0, -1, 0, 0],
    [0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1],
    [0, 0, 0, 0, 0],
]


@pytest.fixture
def a6():
    return validate(REFERENCE_6)


@pytest.fixture
def tree5():
    return validate(TREE_5)


@pytest.fixture
def forest5():
    return validate(FOREST_5)


def star_trio():
    """Three sign variants of the star with root 5 over 1, 2, 4 and 3 below 4.

    Returns the matrices of the variants (s1, s2, s4; s3 fixed "+"):
    (+,-,-), (+,-,+), (+,+,-).  The first two are variety-equivalent, the
    third is not equivalent to the first.
    """
    def build(s1, s2, s4):
        return to_matrix(make_forest((5, 5, 4, 5, 0), (s1, s2, "+", s4, "")))

    return build("+", "-", "-"), build("+", "-", "+"), build("+", "+", "-")


def seven_vertex_pair():
    """The 7-vertex diffeomorphic pair: equal shapes, signs differing
    at the edges below root 7 and inside both subtrees."""
    a = to_matrix(make_forest((3, 3, 7, 6, 6, 7, 0),
                              ("+", "-", "+", "+", "+", "+", "")))
    b = to_matrix(make_forest((3, 3, 7, 6, 6, 7, 0),
                              ("-", "+", "+", "-", "-", "-", "")))
    return a, b


def broom_pair(p: int):
    """The two sign patterns on a broom with two leaves and handle length p.

    After renaming the leaves to 1, 2 and the handle to 3..p+3, the
    all-plus broom has leading entries n13=1 and n_{i,i+1}=1 for
    i=2..p+2; flipping one leaf edge gives n23=-1 with n24=1 instead.
    """
    d = p + 3
    rows = [[0] * d for _ in range(d)]
    rows[0][2] = 1
    for i in range(2, p + 3):
        rows[i - 1][i] = 1
    plain = validate(rows)

    rows = [[0] * d for _ in range(d)]
    rows[0][2] = 1
    rows[1][2] = -1
    rows[1][3] = 1
    for i in range(3, p + 3):
        rows[i - 1][i] = 1
    mixed = validate(rows)
    return plain, mixed


_FB_CACHE: dict[int, list] = {}


def fb(d: int) -> list:
    """Memoized list of the whole enumeration stream for small d."""
    if d not in _FB_CACHE:
        _FB_CACHE[d] = list(enumerate_matrices(d))
    return _FB_CACHE[d]
