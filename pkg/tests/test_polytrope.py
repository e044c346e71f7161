from fractions import Fraction

import pytest
from conftest import feasible_constraints, zero_diagonal
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_has_negative_cycle, polytrope_dimension, sq_point_segment
from tropmech.exceptions import DimensionUnsupported, NegativeCycleError
from tropmech.polytrope import Polytrope, hausdorff_distance_2d, sqrt_enclosure


def _poly(L):
    return Polytrope.from_constraints(L)


def test_from_constraints_examples():
    P = _poly([[0, 0], [0, 0]])
    assert P.contains((0, 0)) and not P.contains((0, 7))
    assert P.dimension() == 0
    # p_1 - p_2 <= 2 and p_2 - p_1 <= 3: the segment -2 <= p_2 - p_1 <= 3
    P = _poly([[0, 2], [3, 0]])
    assert P.contains((0, 3)) and P.contains((0, -2))
    assert not P.contains((0, 4)) and not P.contains((0, -3))
    with pytest.raises(NegativeCycleError):
        _poly([[0, 1], [-2, 0]])


def test_contains_is_projective():
    P = _poly([[0, 2], [3, 0]])
    assert P.contains((5, 6)) == P.contains((0, 1))


def test_vertices_and_interior_examples():
    assert _poly([[0, 0], [0, 0]]).tropical_vertices() == [(0, 0), (0, 0)]
    assert _poly([[0, 0], [0, 0]]).interior_point() == (0, 0)
    P = _poly([[0, 2], [3, 0]])
    assert P.tropical_vertices() == [(0, 3), (0, -2)]
    assert P.interior_point() == (0, Fraction(1, 2))
    P = _poly([[0, 2], [-2, 0]])
    assert P.tropical_vertices() == [(0, -2), (0, -2)]
    assert P.interior_point() == (0, -2)
    assert P.dimension() == 0


def test_equality_is_closure_equality():
    assert _poly([[0, 5], [3, 0]]).equals(_poly(_poly([[0, 5], [3, 0]]).closure))
    assert not _poly([[0, 2], [3, 0]]).equals(_poly([[0, 2], [-2, 0]]))
    # a redundant constraint does not change the set
    assert _poly([[0, 1, 9], [9, 0, 1], [9, 9, 0]]).equals(
        _poly([[0, 1, 2], [9, 0, 1], [9, 9, 0]])
    )


def test_from_point():
    P = Polytrope.from_point((1, 4, 2))
    assert P.dimension() == 0
    assert P.contains((0, 3, 1)) and not P.contains((0, 3, 2))


@given(zero_diagonal(max_m=4))
def test_nonempty_iff_no_negative_cycle(L):
    if brute_has_negative_cycle(L):
        with pytest.raises(NegativeCycleError):
            _poly(L)
    else:
        _poly(L)


@given(feasible_constraints(min_m=3, max_m=4))
def test_vertices_and_interior_point(L):
    P = _poly(L)
    S = P.closure
    for v in P.tropical_vertices():
        assert P.contains(v)
    q = P.interior_point()
    G = P.critical_graph()
    for i in range(P.m):
        for j in range(P.m):
            if i == j:
                continue
            if G.has_edge(i, j):
                assert q[i] - q[j] == S[i][j]
            else:
                assert q[i] - q[j] < S[i][j]


@given(feasible_constraints())
def test_dimension_matches_affine_rank(L):
    assert _poly(L).dimension() == polytrope_dimension(L)


# -- planar geometry ------------------------------------------------------------


@given(feasible_constraints(3, 3))
def test_polygon_vertices_lie_in_polytrope(L):
    P = _poly(L)
    poly = P.polygon()
    assert 1 <= len(poly) <= 6
    for x, y in poly:
        assert P.contains((0, x, y))
    q = P.interior_point()
    if P.dimension() == 2:
        assert len(poly) >= 3
        # interior point strictly inside: on the left of every CCW edge
        for a, b in zip(poly, poly[1:] + poly[:1]):
            cross = (b[0] - a[0]) * (q[2] - a[1]) - (b[1] - a[1]) * (q[1] - a[0])
            assert cross > 0


def test_polygon_of_square():
    # 0 <= x <= 2, 0 <= y <= 2 with x - y, y - x unconstrained
    P = _poly([[0, 0, 0], [2, 0, 9], [2, 9, 0]])
    assert P.polygon() == [(0, 0), (2, 0), (2, 2), (0, 2)]
    P = _poly([[0, 0, 0], [2, 0, 1], [2, 1, 0]])
    assert len(P.polygon()) == 6


def _segment(x, y0, y1):
    # {(0, x, y) : y0 <= y <= y1}
    return _poly(
        [[0, -x, -y0], [x, 0, x - y0], [y1, y1 - x, 0]]
    )


def test_hausdorff_examples():
    P = Polytrope.from_point((0, 0, 0))
    Q = Polytrope.from_point((0, 3, 4))
    d = hausdorff_distance_2d(P, Q)
    assert d.squared == 25 and d.exact == 5
    assert hausdorff_distance_2d(P, P).squared == 0
    A, B = _segment(0, 0, 1), _segment(2, 0, 1)
    assert A.polygon() == [(0, 0), (0, 1)]
    assert hausdorff_distance_2d(A, B).exact == 2
    assert hausdorff_distance_2d(A, B) <= 2
    assert not hausdorff_distance_2d(A, B) < 2
    with pytest.raises(DimensionUnsupported):
        hausdorff_distance_2d(_poly([[0, 1], [1, 0]]), _poly([[0, 1], [1, 0]]))


def test_hausdorff_point_to_triangle():
    T = _poly([[0, 0, 0], [2, 0, 9], [2, 0, 0]])  # 0 <= y <= x <= 2
    P = Polytrope.from_point((0, 0, 2))
    # farthest triangle vertex from (0, 2) is (2, 0); (0, 2) is sqrt(2) from the diagonal
    assert hausdorff_distance_2d(P, T).squared == 8


@given(feasible_constraints(3, 3), feasible_constraints(3, 3))
def test_hausdorff_properties(L1, L2):
    P, Q = _poly(L1), _poly(L2)
    d = hausdorff_distance_2d(P, Q)
    assert d.squared == hausdorff_distance_2d(Q, P).squared
    assert (d.squared == 0) == P.equals(Q)
    assert d.lower <= d.upper
    assert d.lower**2 <= d.squared <= d.upper**2
    # every vertex of P is within d of Q (vertex-to-edge oracle)
    qq = Q.polygon()
    edges = list(zip(qq, qq[1:] + qq[:1])) if len(qq) > 1 else [(qq[0], qq[0])]
    for v in P.polygon():
        inside = Q.contains((0, v[0], v[1]))
        near = 0 if inside else min(sq_point_segment(v, a, b) for a, b in edges)
        assert near <= d.squared


@given(st.fractions(0, 1000, max_denominator=1000))
def test_sqrt_enclosure(q):
    lo, hi = sqrt_enclosure(q)
    assert lo * lo <= q <= hi * hi
    assert hi - lo <= Fraction(1, 2**64)
