"""Exact min-plus linear algebra on finite rational matrices.

All routines are pure and deterministic.  Matrices are tuples of tuples of
:class:`~fractions.Fraction`; any nested sequence of exact scalars is accepted
as input.  Node indices are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .exceptions import NegativeCycleError
from .validation import Matrix, Vector, check_matrix, check_vector


@dataclass(frozen=True)
class DiGraph:
    """Directed graph on nodes ``0..m-1``; self-loops allowed."""

    m: int
    edges: frozenset

    @classmethod
    def from_edges(cls, m: int, edges: Iterable[tuple[int, int]]) -> "DiGraph":
        edges = frozenset((int(i), int(j)) for i, j in edges)
        for i, j in edges:
            if not (0 <= i < m and 0 <= j < m):
                raise ValueError(f"edge {(i, j)} out of range for {m} nodes")
        return cls(m, edges)

    def successors(self, i: int) -> list[int]:
        return sorted(j for a, j in self.edges if a == i)

    def has_edge(self, i: int, j: int) -> bool:
        return (i, j) in self.edges

    def proper_edges(self) -> list[tuple[int, int]]:
        """Edges other than self-loops, sorted."""
        return sorted(e for e in self.edges if e[0] != e[1])

    def is_strongly_connected(self) -> bool:
        return len(strongly_connected_components(self)) <= 1


def min_plus_matvec(A, x) -> Vector:
    """``(A (x) x)_i = min_j (A_ij + x_j)``."""
    A = check_matrix(A)
    x = check_vector(x, len(A))
    return tuple(min(a + b for a, b in zip(row, x)) for row in A)


def min_plus_matmul(A, B) -> Matrix:
    A = check_matrix(A)
    B = check_matrix(B)
    if len(A) != len(B):
        raise ValueError("dimension mismatch")
    m = len(A)
    return tuple(
        tuple(min(A[i][k] + B[k][j] for k in range(m)) for j in range(m))
        for i in range(m)
    )


def min_cycle_mean(A) -> Fraction:
    """Minimum mean weight over all directed cycles (Karp's recurrence).

    For a finite matrix this is its unique min-plus eigenvalue.
    """
    A = check_matrix(A)
    n = len(A)
    # walks of exactly k edges from a virtual source joined to every node by 0
    D = [[Fraction(0)] * n]
    for k in range(1, n + 1):
        prev = D[-1]
        D.append([min(prev[u] + A[u][v] for u in range(n)) for v in range(n)])
    return min(
        max((D[n][v] - D[k][v]) / (n - k) for k in range(n))
        for v in range(n)
    )


def find_negative_cycle(A) -> list[int] | None:
    """Return a negative-weight cycle of ``A`` or ``None``.

    Bellman-Ford from a virtual source; the cycle is rotated to start at its
    smallest node so the witness is reproducible.
    """
    A = check_matrix(A)
    n = len(A)
    dist = [Fraction(0)] * n
    pred: list[int | None] = [None] * n
    last = None
    for _ in range(n):
        last = None
        for u in range(n):
            for v in range(n):
                cand = dist[u] + A[u][v]
                if cand < dist[v]:
                    dist[v] = cand
                    pred[v] = u
                    last = v
        if last is None:
            return None
    v = last
    for _ in range(n):
        v = pred[v]
    cycle = [v]
    u = pred[v]
    while u != v:
        cycle.append(u)
        u = pred[u]
    cycle.reverse()
    k = cycle.index(min(cycle))
    return cycle[k:] + cycle[:k]


def cycle_weight(A, cycle: list[int]) -> Fraction:
    return sum(
        (A[cycle[i]][cycle[(i + 1) % len(cycle)]] for i in range(len(cycle))),
        Fraction(0),
    )


def kleene_star(A) -> Matrix:
    """All-pairs shortest path closure ``A*`` (Floyd-Warshall).

    Requires a zero diagonal; raises :class:`NegativeCycleError` with a
    witness cycle when some cycle has negative weight.
    """
    A = check_matrix(A, zero_diagonal=True)
    n = len(A)
    d = [list(row) for row in A]
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            di = d[i]
            for j in range(n):
                cand = dik + dk[j]
                if cand < di[j]:
                    di[j] = cand
    if any(d[i][i] < 0 for i in range(n)):
        cycle = find_negative_cycle(A)
        raise NegativeCycleError(cycle, cycle_weight(A, cycle))
    return tuple(tuple(row) for row in d)


def critical_graph(A) -> DiGraph:
    """Pairs whose constraint ``p_i - p_j <= A*_ij`` is tight on the whole solution set.

    Edge ``(i, j)`` iff ``A*_ij + A*_ji == 0``; all self-loops are present.
    """
    S = kleene_star(A)
    n = len(S)
    return DiGraph(
        n,
        frozenset(
            (i, j) for i in range(n) for j in range(n) if S[i][j] + S[j][i] == 0
        ),
    )


def strongly_connected_components(G: DiGraph) -> list[tuple[int, ...]]:
    """Tarjan's algorithm; components sorted internally and by smallest member."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comps: list[tuple[int, ...]] = []
    counter = 0

    def visit(v: int) -> None:
        nonlocal counter
        index[v] = low[v] = counter
        counter += 1
        stack.append(v)
        on_stack.add(v)
        for w in G.successors(v):
            if w not in index:
                visit(w)
                low[v] = min(low[v], low[w])
            elif w in on_stack:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = []
            while True:
                w = stack.pop()
                on_stack.discard(w)
                comp.append(w)
                if w == v:
                    break
            comps.append(tuple(sorted(comp)))

    for v in range(G.m):
        if v not in index:
            visit(v)
    return sorted(comps)
