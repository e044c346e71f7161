from fractions import Fraction
from itertools import product

import pytest
from conftest import mechanisms, zero_diagonal
from hypothesis import given
from hypothesis import strategies as st

import oracles
from tropmech.exceptions import CrossCheckError, NotIC, NotRealizable
from tropmech.mechanism import (
    allocation_matrix,
    eigenvalue,
    eq_distance_boundary_check,
    graph_of_p,
    ic_payments,
    is_ic,
    is_realizable,
    is_revenue_equivalent_mechanism,
    is_weakly_monotone,
    realize,
    sector_membership,
    sector_pair_relation,
    separates,
)
from tropmech.polytrope import Polytrope
from tropmech.tropical import DiGraph, min_cycle_mean, strongly_connected_components

T2 = [(0, 1), (0, -1)]
G_IC = (1, 0)  # outcome 2 for (0, 1), outcome 1 for (0, -1)
G_BAD = (0, 1)

# separates but is not realizable: entry 0 is the only member of faces
# (1, 3) and (2, 1), which demand outcomes 1 and 2 at once
T_SPLIT = [(0, 0, 0), (0, -1, 1), (0, 2, 1), (0, 1, -1), (0, 2, 2)]
L_SPLIT = [[0, 0, -1], [1, 0, 0], [0, -1, 0]]

# I_13 = I_31 = {t2}: neither face has a witness of its own
T_SHARED = [(0, 3, 1), (0, 1, 3), (0, 5, 4), (0, 7, 2)]
L_SHARED = [[0, -3, -3], [7, 0, 5], [3, -1, 0]]


def test_allocation_matrix_examples():
    assert allocation_matrix(T2, G_IC) == ((0, 1), (1, 0))
    assert allocation_matrix(T2, G_BAD) == ((0, -1), (-1, 0))
    origin = [(0, 0, 0)] * 3
    assert allocation_matrix(origin, (2, 0, 1)) == ((0, 0, 0),) * 3


@given(mechanisms(max_m=4, max_r=7))
def test_allocation_matrix_matches_definition(inst):
    T, g = inst
    L = allocation_matrix(T, g)
    assert [list(r) for r in L] == oracles.alloc(T, g)


def test_ic_examples():
    assert is_ic(T2, G_IC) and eigenvalue(T2, G_IC) == 0
    assert not is_ic(T2, G_BAD) and eigenvalue(T2, G_BAD) == -1
    assert is_ic([(0, 0, 0)] * 3, (0, 1, 2))


def test_payments_examples():
    P = ic_payments(T2, G_IC)
    assert P.closure == ((0, 1), (1, 0))
    assert P.contains((0, 1)) and P.contains((0, -1)) and not P.contains((0, 2))
    assert P.dimension() == 1
    # all-zero constraints force p_1 = p_2 = p_3
    assert ic_payments([(0, 0, 0)] * 3, (0, 1, 2)).dimension() == 0
    with pytest.raises(NotIC) as info:
        ic_payments(T2, G_BAD)
    assert info.value.cycle == [0, 1]


@given(mechanisms(max_m=4, max_r=7))
def test_rochet_three_way(inst):
    T, g = inst
    ic = is_ic(T, g)
    assert ic == (oracles.brute_min_cycle_mean(oracles.alloc(T, g)) == 0)
    assert ic == oracles.ic_by_feasibility(T, g)
    try:
        ic_payments(T, g)
        built = True
    except NotIC:
        built = False
    assert ic == built


@given(mechanisms(max_m=4, max_r=7))
def test_ic_implies_weakly_monotone(inst):
    T, g = inst
    if is_ic(T, g):
        assert is_weakly_monotone(T, g)


@given(mechanisms(min_m=2, max_m=2, max_r=6))
def test_weak_monotonicity_is_ic_for_two_outcomes(inst):
    T, g = inst
    assert is_ic(T, g) == is_weakly_monotone(T, g)


def test_weakly_monotone_examples():
    assert is_weakly_monotone(T2, G_IC)
    assert not is_weakly_monotone(T2, G_BAD)


@given(mechanisms(max_m=4, max_r=6))
def test_payment_dimension_matches_affine_rank(inst):
    T, g = inst
    if not is_ic(T, g):
        return
    L = oracles.alloc(T, g)
    assert ic_payments(T, g).dimension() == oracles.polytrope_dimension(L)


def test_revenue_equivalent_mechanism():
    assert not is_revenue_equivalent_mechanism(T2, G_IC)
    assert is_revenue_equivalent_mechanism([(0, 0, 0)] * 3, (0, 1, 2))
    assert not is_revenue_equivalent_mechanism(T2, G_BAD)
    # copies of (0, 1) split between both outcomes pin p_2 - p_1 = 1
    T = [(0, 1), (0, 1), (0, -1)]
    assert is_revenue_equivalent_mechanism(T, (0, 1, 0))
    assert ic_payments(T, (0, 1, 0)).closure == ((0, -1), (1, 0))


@given(mechanisms(max_m=3, max_r=5), st.integers(-5, 5), st.integers(0, 10))
def test_scaling_invariance(inst, shift, which):
    T, g = inst
    i = which % len(T)
    T2_ = [list(t) for t in T]
    T2_[i] = [x + shift for x in T2_[i]]
    assert allocation_matrix(T, g) == allocation_matrix(T2_, g)
    p = [Fraction(k) for k in range(len(T[0]))]
    assert graph_of_p(T, p) == graph_of_p(T, [x + shift for x in p])


# -- sectors ----------------------------------------------------------------------


def test_sector_membership_examples():
    m = sector_membership([[0, 0, 0]] * 3, 0, (0, 0, 0))
    assert m.kind == "boundary" and m.tight == {1, 2}
    L = [[0, 1], [1, 0]]
    assert sector_membership(L, 0, (0, -1)).tight == {1}
    assert sector_membership(L, 0, (0, -2)).kind == "interior"
    assert sector_membership(L, 0, (0, 0)).kind == "outside"
    assert not sector_membership(L, 0, (0, 0)).inside


@given(zero_diagonal(3, 3), st.integers(0, 2), st.integers(0, 2))
def test_sector_pair_relation_matches_feasibility(L, j, k):
    if j == k:
        return
    assert sector_pair_relation(L, j, k) == oracles.sectors_relation(L, j, k)


# -- realizability ----------------------------------------------------------------


def test_realize_examples():
    assert realize([[0, 1], [1, 0]], T2) == G_IC
    assert is_realizable([[0, 1], [1, 0]], T2)
    assert not is_realizable([[0, 1], [1, 0]], [(0, 0)])
    # every point interior to its sector: the assignment is forced
    T = [(0, 5, 0), (0, 0, 5), (0, -5, -5)]
    g = (1, 2, 0)
    assert realize(allocation_matrix(T, g), T) == g


def test_shared_singleton_face_is_not_realizable():
    assert not separates(L_SHARED, T_SHARED)
    assert not is_realizable(L_SHARED, T_SHARED)
    with pytest.raises(NotRealizable):
        realize(L_SHARED, T_SHARED)
    assert oracles.realizing_assignments(L_SHARED, T_SHARED) == []


def test_separation_is_not_sufficient():
    assert separates(L_SPLIT, T_SPLIT)
    assert not is_realizable(L_SPLIT, T_SPLIT)
    assert oracles.realizing_assignments(L_SPLIT, T_SPLIT) == []


@given(mechanisms(max_m=4, max_r=7))
def test_realize_round_trip(inst):
    T, g = inst
    L = allocation_matrix(T, g)
    g2 = realize(L, T)
    assert allocation_matrix(T, g2) == L
    assert separates(L, T)


@given(zero_diagonal(2, 3, elements=st.integers(-2, 2)), st.data())
def test_realizable_matches_exhaustive_search(L, data):
    m = len(L)
    r = data.draw(st.integers(m, m + 2))
    T = [[0] + [data.draw(st.integers(-2, 2)) for _ in range(m - 1)] for _ in range(r)]
    found = oracles.realizing_assignments(L, T)
    assert is_realizable(L, T) == bool(found)
    if found:
        assert allocation_matrix(T, realize(L, T)) == tuple(tuple(map(Fraction, r)) for r in L)
        assert separates(L, T)


# -- graph of p -------------------------------------------------------------------


def test_graph_of_p_examples():
    G = graph_of_p(T2, (0, 0))
    assert G.proper_edges() == []
    G = graph_of_p(T2, (0, 1))
    assert G.has_edge(0, 1) and G.has_edge(1, 0)
    G = graph_of_p([(0, 2, 5)], (0, 2, 5))
    assert len(G.edges) == 9


@given(mechanisms(max_m=4, max_r=6))
def test_graph_of_interior_point_is_critical_graph(inst):
    T, g = inst
    if not is_ic(T, g):
        return
    P = ic_payments(T, g)
    q = P.interior_point()
    G = graph_of_p(T, q)
    crit = P.critical_graph()
    assert G.edges <= crit.edges
    assert strongly_connected_components(G) == strongly_connected_components(crit)
    # L' = L - (q_i - q_j) is nonnegative with zero cycle mean
    L = allocation_matrix(T, g)
    Lp = [[L[i][j] - (q[i] - q[j]) for j in range(len(L))] for i in range(len(L))]
    assert min(min(r) for r in Lp) == 0 and min_cycle_mean(Lp) == 0
    m = len(L)
    zero = DiGraph.from_edges(m, [(i, j) for i in range(m) for j in range(m) if Lp[i][j] == 0])
    comp = {v: c for c in strongly_connected_components(zero) for v in c}
    # an edge of L' is critical iff it is tight and closes a zero cycle
    critical = {e for e in zero.edges if comp[e[0]] == comp[e[1]]}
    assert G.edges & zero.edges == critical


@given(mechanisms(min_m=3, max_m=3, max_r=5))
def test_graph_grows_on_the_boundary(inst):
    T, g = inst
    if not is_ic(T, g):
        return
    P = ic_payments(T, g)
    inner = graph_of_p(T, P.interior_point()).edges
    for v in P.tropical_vertices():
        assert inner <= graph_of_p(T, v).edges


def test_eq_distance_boundary_examples():
    s = eq_distance_boundary_check(T2, G_IC, (0, 0))
    assert s == {(0, 1): 1, (1, 0): 1}
    s = eq_distance_boundary_check(T2, G_IC, (0, -1))
    assert s[0, 1] == 0 and s[1, 0] == 2
    s = eq_distance_boundary_check([(0, 0, 0)] * 3, (0, 1, 2), (0, 0, 0))
    assert set(s.values()) == {0}
    with pytest.raises(ValueError):
        eq_distance_boundary_check(T2, G_IC, (0, 5))


@given(mechanisms(max_m=4, max_r=6), st.data())
def test_eq_distance_boundary_on_vertices(inst, data):
    T, g = inst
    if not is_ic(T, g):
        return
    P = ic_payments(T, g)
    points = P.tropical_vertices() + [P.interior_point()]
    p = data.draw(st.sampled_from(points))
    try:
        slack = eq_distance_boundary_check(T, g, p)
    except CrossCheckError as exc:  # pragma: no cover - would be a library bug
        pytest.fail(str(exc))
    assert all(v >= 0 for v in slack.values())


def test_exhaustive_counts_for_shared_face():
    # all 3^4 assignments, surjective or not, miss L_SHARED
    target = tuple(tuple(Fraction(x) for x in row) for row in L_SHARED)
    hits = [
        g
        for g in product(range(3), repeat=4)
        if len(set(g)) == 3 and allocation_matrix(T_SHARED, g) == target
    ]
    assert hits == []
