"""Single-agent mechanisms on finite type spaces.

An outcome function ``g`` assigns each entry of a type space (copies
distinguished by position) an outcome in ``range(m)``.  Its allocation
matrix is ``L_jk = min_{g(t) = j} (t_j - t_k)``; ``g`` is IC exactly when the
min-plus eigenvalue of ``L`` is zero, and its IC payments are the polytrope
``{p : p_j - p_k <= L_jk}``.

Realizability on a finite type space
------------------------------------
Sector ``j`` of a zero-diagonal matrix ``L`` is ``{t : t_j - t_k >= L_jk}``
and its ``(j, k)`` face adds ``t_j - t_k = L_jk``.  ``L`` equals ``L^g`` iff
every ``t`` with ``g(t) = j`` lies in sector ``j`` and every ``(j, k)`` face
contains some ``t`` with ``g(t) = j``.

Limit witnesses (sequences in an open sector approaching a face) do not exist
in a finite set: the open sector is disjoint from the closed face, so the
finite set keeps a positive distance from it.  Separation therefore reduces
to: every face ``I_jk = T ∩ face_jk`` is nonempty, and no pair has
``I_jk = I_kj = {s}`` for a single entry ``s``.

Separation is necessary but not sufficient once ``m >= 3``: a single entry
can be the only member of two faces ``I_jk`` and ``I_lj`` that demand
different outcomes.  :func:`is_realizable` therefore decides realizability by
exact search and :func:`separates` reports the separation test alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .exceptions import CrossCheckError, NegativeCycleError, NotIC, NotRealizable
from .polytrope import Polytrope
from .tropical import DiGraph, min_cycle_mean
from .validation import (
    Matrix,
    TypeSpace,
    check_matrix,
    check_outcomes,
    check_point,
    check_type_space,
)


def allocation_matrix(T, g) -> Matrix:
    T = check_type_space(T)
    m = T.m
    g = check_outcomes(g, T.r, m)
    L = [[None] * m for _ in range(m)]
    for t, j in zip(T, g):
        row = L[j]
        for k in range(m):
            d = t[j] - t[k]
            if row[k] is None or d < row[k]:
                row[k] = d
    return tuple(tuple(row) for row in L)


def eigenvalue(T, g) -> Fraction:
    return min_cycle_mean(allocation_matrix(T, g))


def is_ic(T, g) -> bool:
    return eigenvalue(T, g) == 0


def ic_payments(T, g) -> Polytrope:
    """The set of IC payments; raises :class:`NotIC` with a negative cycle."""
    L = allocation_matrix(T, g)
    try:
        return Polytrope.from_constraints(L)
    except NegativeCycleError as exc:
        raise NotIC(exc.cycle, exc.weight, f"not IC: {exc}") from None


def is_weakly_monotone(T, g) -> bool:
    L = allocation_matrix(T, g)
    m = len(L)
    return all(L[j][k] + L[k][j] >= 0 for j in range(m) for k in range(j + 1, m))


def is_revenue_equivalent_mechanism(T, g) -> bool:
    try:
        return ic_payments(T, g).dimension() == 0
    except NotIC:
        return False


# -- sectors of a candidate matrix ------------------------------------------


@dataclass(frozen=True)
class SectorMembership:
    """Position of a type relative to sector ``j`` of a matrix.

    ``kind`` is ``"interior"``, ``"boundary"`` or ``"outside"``; ``tight`` holds
    the outcomes ``k != j`` with ``t_j - t_k == L_jk`` (boundary only).
    """

    kind: str
    tight: frozenset = frozenset()

    @property
    def inside(self) -> bool:
        return self.kind != "outside"


def sector_membership(L, j: int, t) -> SectorMembership:
    L = check_matrix(L, zero_diagonal=True)
    t = check_point(t, len(L))
    return _membership(L, j, t)


def _membership(L: Matrix, j: int, t) -> SectorMembership:
    tight = []
    for k in range(len(L)):
        if k == j:
            continue
        d = t[j] - t[k]
        if d < L[j][k]:
            return SectorMembership("outside")
        if d == L[j][k]:
            tight.append(k)
    if tight:
        return SectorMembership("boundary", frozenset(tight))
    return SectorMembership("interior")


def sector_pair_relation(L, j: int, k: int) -> str:
    """How closed sectors ``j != k`` of ``L`` meet, read off ``L_jk + L_kj``.

    Positive: ``"disjoint"``; zero: ``"touching"`` (they share boundary only);
    negative: ``"overlapping"`` (their interiors meet).
    """
    L = check_matrix(L, zero_diagonal=True)
    if j == k:
        raise ValueError("need two distinct sectors")
    s = L[j][k] + L[k][j]
    return "disjoint" if s > 0 else "touching" if s == 0 else "overlapping"


def _faces(L: Matrix, T: TypeSpace):
    """Per-entry sector sets and the entry sets ``I_jk`` of every face."""
    m = T.m
    sectors = []
    faces = {(j, k): [] for j in range(m) for k in range(m) if j != k}
    for idx, t in enumerate(T):
        inside = []
        for j in range(m):
            mem = _membership(L, j, t)
            if mem.inside:
                inside.append(j)
                for k in mem.tight:
                    faces[j, k].append(idx)
        sectors.append(inside)
    return sectors, faces


def _prepare(L, T):
    T = check_type_space(T)
    L = check_matrix(L, zero_diagonal=True)
    if len(L) != T.m:
        raise ValueError(f"matrix is {len(L)}x{len(L)}, type space has m = {T.m}")
    return L, T


def separates(L, T) -> bool:
    """Covering plus finite separation: every entry lies in a sector, every
    face ``I_jk`` is nonempty, and no pair shares a single-entry face."""
    L, T = _prepare(L, T)
    sectors, faces = _faces(L, T)
    if any(not s for s in sectors):
        return False
    for (j, k), members in faces.items():
        if not members:
            return False
        if j < k and len(members) == 1 and faces[k, j] == members:
            return False
    return True


def realize(L, T) -> tuple[int, ...]:
    """Find an outcome function ``g`` with ``allocation_matrix(T, g) == L``.

    Entries are assigned in index order, outcomes tried in increasing order;
    an entry only ever takes an outcome whose sector contains it, and the
    search prunes as soon as some face can no longer be attained.
    """
    L, T = _prepare(L, T)
    sectors, faces = _faces(L, T)
    if any(not s for s in sectors) or any(not v for v in faces.values()):
        raise NotRealizable("some type lies in no sector or some face is empty")
    r, m = T.r, T.m
    covers = [
        {j: [(j, k) for k in range(m) if k != j and idx in faces[j, k]] for j in sectors[idx]}
        for idx in range(r)
    ]
    # entries in no face are free; any sector containing them will do
    choices = []
    for idx in range(r):
        useful = [j for j in sectors[idx] if covers[idx][j]]
        choices.append(useful or sectors[idx][:1])
    last_chance = {
        face: max(members) for face, members in faces.items()
    }
    pending = {face: 0 for face in faces}
    g = [0] * r

    def feasible(idx: int) -> bool:
        return all(
            n > 0 or last_chance[face] > idx for face, n in pending.items()
        )

    def search(idx: int) -> bool:
        if idx == r:
            return all(n > 0 for n in pending.values())
        for j in choices[idx]:
            g[idx] = j
            for face in covers[idx].get(j, ()):
                pending[face] += 1
            if feasible(idx) and search(idx + 1):
                return True
            for face in covers[idx].get(j, ()):
                pending[face] -= 1
        return False

    if not search(0):
        raise NotRealizable("no assignment attains every face of the matrix")
    result = tuple(g)
    if allocation_matrix(T, result) != L:
        raise CrossCheckError("realized outcome function does not reproduce L")
    return result


def is_realizable(L, T) -> bool:
    L, T = _prepare(L, T)
    if not separates(L, T):
        return False
    try:
        realize(L, T)
    except NotRealizable:
        return False
    return True


# -- payments and the graph of a point ---------------------------------------


def graph_of_p(T, p) -> DiGraph:
    """Edge ``(i, j)`` iff some type lies in max-plus sectors ``i`` and ``j`` at apex ``p``.

    Equivalently some type ``t`` attains ``max_k (t_k - p_k)`` at both ``i``
    and ``j``.  Every self-loop is included.
    """
    T = check_type_space(T)
    m = T.m
    p = check_point(p, m)
    edges = {(i, i) for i in range(m)}
    for t in T:
        u = [t[k] - p[k] for k in range(m)]
        best = max(u)
        top = [k for k in range(m) if u[k] == best]
        edges.update((i, j) for i in top for j in top)
    return DiGraph(m, frozenset(edges))


def eq_distance_boundary_check(T, g, p) -> dict[tuple[int, int], Fraction]:
    """Slack ``L_ij - (p_i - p_j)`` for every ordered pair ``i != j``.

    ``p`` must be an IC payment of ``g``.  Zero slack on ``(i, j)`` must
    coincide with some type assigned ``i`` sitting in max-plus sectors ``i``
    and ``j`` at ``p``; a mismatch raises :class:`CrossCheckError`.
    """
    T = check_type_space(T)
    g = check_outcomes(g, T.r, T.m)
    p = check_point(p, T.m)
    L = allocation_matrix(T, g)
    m = T.m
    slack = {}
    for i, j in product(range(m), repeat=2):
        if i == j:
            continue
        s = L[i][j] - (p[i] - p[j])
        if s < 0:
            raise ValueError(f"p is not an IC payment of g: constraint {(i, j)} violated")
        slack[i, j] = s
    for (i, j), s in slack.items():
        touching = any(
            g[idx] == i and (t[i] - p[i]) == (t[j] - p[j]) == max(t[k] - p[k] for k in range(m))
            for idx, t in enumerate(T)
        )
        if touching != (s == 0):
            raise CrossCheckError(f"slack on {(i, j)} is {s} but face contact is {touching}")
    return slack
