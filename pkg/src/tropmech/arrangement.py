"""Covectors, genericity and basic cells of a finite type space.

The basic cells of ``T`` are the IC payment sets of its IC outcome functions.
They are found by exhaustive search over assignments, pruned as soon as the
constraints collected so far contain a negative cycle.
"""

from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .exceptions import BudgetExceeded, CrossCheckError, DimensionUnsupported, PerturbationFailed
from .mechanism import allocation_matrix, graph_of_p
from .polytrope import Polytrope, hausdorff_distance_2d
from .tropical import strongly_connected_components
from .validation import TypeSpace, as_fraction, check_point, check_type_space

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 2_000_000


def default_budget() -> int:
    env = os.environ.get("TROPMECH_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def covector(T, p) -> tuple[tuple[bool, ...], ...]:
    """``m x r`` incidence: ``[i][idx]`` iff ``i`` minimizes ``p_k - t_k`` for entry ``idx``."""
    T = check_type_space(T)
    m = T.m
    p = check_point(p, m)
    cols = []
    for t in T:
        u = [p[k] - t[k] for k in range(m)]
        low = min(u)
        cols.append([u[k] == low for k in range(m)])
    return tuple(tuple(col[i] for col in cols) for i in range(m))


def contains_outcome_graph(cov, g) -> bool:
    return all(cov[j][idx] for idx, j in enumerate(g))


# -- genericity ---------------------------------------------------------------


def _tropically_singular(M) -> bool:
    """Whether the max-weight perfect matching of a square matrix is not unique.

    The rows lie on a common max-plus hyperplane exactly in this case, which
    by duality is when their min-plus hyperplanes meet non-transversally.
    Subset dynamic programme tracking the optimum and its multiplicity
    (capped at 2) for every set of used columns.
    """
    k = len(M)
    best = {0: (Fraction(0), 1)}
    for row in range(k):
        nxt = {}
        for used, (val, cnt) in best.items():
            for col in range(k):
                bit = 1 << col
                if used & bit:
                    continue
                key = used | bit
                cand = val + M[row][col]
                cur = nxt.get(key)
                if cur is None or cand > cur[0]:
                    nxt[key] = (cand, cnt)
                elif cand == cur[0]:
                    nxt[key] = (cand, min(2, cur[1] + cnt))
        best = nxt
    return best[(1 << k) - 1][1] > 1


def is_generic(T) -> bool:
    """No ``k`` types (``2 <= k <= m``) project onto ``k`` coordinates as a
    tropically singular (max-plus) ``k x k`` matrix."""
    T = check_type_space(T)
    m, r = T.m, T.r
    for k in range(2, m + 1):
        for rows in combinations(range(r), k):
            for cols in combinations(range(m), k):
                M = [[T[s][c] for c in cols] for s in rows]
                if _tropically_singular(M):
                    return False
    return True


# -- enumeration ----------------------------------------------------------------


@dataclass(frozen=True)
class BasicCell:
    polytrope: Polytrope
    outcome_functions: tuple[tuple[int, ...], ...]

    @property
    def dimension(self) -> int:
        return self.polytrope.dimension()


@dataclass(frozen=True)
class BasicCellSet:
    """Basic cells sorted by closure entries, each with the IC outcome functions it pays for."""

    m: int
    r: int
    cells: tuple[BasicCell, ...] = field(default_factory=tuple)

    @property
    def count(self) -> int:
        """``d(T)``: the number of IC outcome functions."""
        return sum(len(c.outcome_functions) for c in self.cells)

    @property
    def bound(self) -> int:
        return math.comb(self.r - 1, self.m - 1)

    def polytropes(self) -> list[Polytrope]:
        return [c.polytrope for c in self.cells]

    def __len__(self):
        return len(self.cells)


INF = None


def _add_edge(D, j, k, w, m):
    """Insert ``p_j - p_k <= w`` into a closed constraint matrix; ``None`` is +inf.

    Returns the new closure, or ``None`` if the edge closes a negative cycle.
    Edges are oriented ``k -> j`` so that ``D[a][b]`` bounds ``p_b - p_a``.
    """
    back = D[j][k]
    if back is not None and back + w < 0:
        return None
    cur = D[k][j]
    if cur is not None and cur <= w:
        return D
    out = [row[:] for row in D]
    for a in range(m):
        da = D[a][k]
        if da is None:
            continue
        via = da + w
        for b in range(m):
            db = D[j][b]
            if db is None:
                continue
            cand = via + db
            if out[a][b] is None or cand < out[a][b]:
                out[a][b] = cand
    return out


def iter_ic_outcomes(T, budget: int | None = None):
    """Yield every IC outcome function of ``T`` in lexicographic order."""
    T = check_type_space(T)
    m, r = T.m, T.r
    if r < m:
        raise ValueError(f"no surjective outcome function exists: {r} types, {m} outcomes")
    budget = default_budget() if budget is None else budget
    required = m**r
    if required > budget:
        raise BudgetExceeded(required, budget)

    start = [[Fraction(0) if a == b else INF for b in range(m)] for a in range(m)]
    g = [0] * r
    counts = [0] * m

    def search(idx, D, missing):
        if r - idx < missing:
            return
        if idx == r:
            yield tuple(g)
            return
        t = T[idx]
        for j in range(m):
            D2 = D
            for k in range(m):
                if k != j:
                    D2 = _add_edge(D2, j, k, t[j] - t[k], m)
                    if D2 is None:
                        break
            if D2 is None:
                continue
            g[idx] = j
            counts[j] += 1
            yield from search(idx + 1, D2, missing - (counts[j] == 1))
            counts[j] -= 1

    yield from search(0, start, m)


def enumerate_ic_outcomes(T, budget: int | None = None) -> BasicCellSet:
    T = check_type_space(T)
    groups: dict[tuple, list] = {}
    polys: dict[tuple, Polytrope] = {}
    for g in iter_ic_outcomes(T, budget):
        P = Polytrope.from_constraints(allocation_matrix(T, g))
        key = P.key()
        polys.setdefault(key, P)
        groups.setdefault(key, []).append(g)
    cells = tuple(
        BasicCell(polys[key], tuple(sorted(groups[key]))) for key in sorted(groups)
    )
    return BasicCellSet(T.m, T.r, cells)


def basic_cells(T, budget: int | None = None) -> list[Polytrope]:
    """Distinct IC payment sets; for generic ``T`` they must be full-dimensional
    and number ``C(r-1, m-1)``."""
    T = check_type_space(T)
    cells = enumerate_ic_outcomes(T, budget)
    if is_generic(T):
        dims = [c.dimension for c in cells.cells]
        if any(d != T.m - 1 for d in dims) or len(cells) != cells.bound:
            raise CrossCheckError(
                f"generic type space produced {len(cells)} cells of dimensions {dims}, "
                f"expected {cells.bound} of dimension {T.m - 1}"
            )
    return cells.polytropes()


def cell_of(cells: BasicCellSet, p) -> int:
    """Index of the first basic cell containing ``p``, or -1."""
    for i, c in enumerate(cells.cells):
        if c.polytrope.contains(p):
            return i
    return -1


# -- perturbation and convergence ---------------------------------------------


def perturbation_offsets(r: int, m: int, epsilon: Fraction) -> list[tuple[Fraction, ...]]:
    """Entry ``i``, coordinate ``c >= 1`` moves by ``epsilon * 2**-(i*(m-1) + c)``.

    Every (entry, coordinate) pair gets its own power of two, so distinct
    matchings of any square minor receive distinct total offsets.
    """
    return [
        (Fraction(0),)
        + tuple(epsilon / 2 ** (i * (m - 1) + c) for c in range(1, m))
        for i in range(r)
    ]


def generic_perturbation(T, epsilon, attempt_limit: int = 64) -> TypeSpace:
    """Deterministic generic type space within max-norm ``epsilon`` of ``T``.

    The offset pattern is halved until the result is generic.
    """
    T = check_type_space(T)
    epsilon = as_fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    offsets = perturbation_offsets(T.r, T.m, epsilon)
    scale = Fraction(1)
    for _ in range(attempt_limit + 1):
        pts = tuple(
            tuple(a + scale * b for a, b in zip(t, off)) for t, off in zip(T, offsets)
        )
        cand = TypeSpace(T.m, pts)
        if is_generic(cand):
            return cand
        scale /= 2
    raise PerturbationFailed(f"no generic perturbation after {attempt_limit} halvings")


@dataclass(frozen=True)
class ConvergenceStep:
    epsilon: Fraction
    perturbed: TypeSpace
    distances: tuple  # HausdorffDistance per basic cell of T
    matches: tuple[int, ...]  # index of nearest perturbed cell

    def within(self, slack: Fraction) -> bool:
        return all(d <= slack * self.epsilon for d in self.distances)


@dataclass(frozen=True)
class ConvergenceReport:
    cells: tuple[Polytrope, ...]
    steps: tuple[ConvergenceStep, ...]
    slack: Fraction

    @property
    def ok(self) -> bool:
        return all(s.within(self.slack) for s in self.steps)

    def monotone(self) -> bool:
        """Per-cell distances never increase along the epsilon sequence."""
        for a, b in zip(self.steps, self.steps[1:]):
            if any(y.squared > x.squared for x, y in zip(a.distances, b.distances)):
                return False
        return True


def convergence_harness(T, epsilons, slack=None, budget: int | None = None) -> ConvergenceReport:
    """Match every basic cell of ``T`` to the nearest basic cell of each perturbation.

    Raises :class:`CrossCheckError` if some cell is farther than ``slack * epsilon``
    (default slack ``4 m``).
    """
    T = check_type_space(T)
    if T.m != 3:
        raise DimensionUnsupported("convergence harness needs m = 3")
    slack = Fraction(4 * T.m) if slack is None else as_fraction(slack)
    cells = tuple(basic_cells(T, budget))
    steps = []
    for eps in sorted((as_fraction(e) for e in epsilons), reverse=True):
        Tp = generic_perturbation(T, eps)
        pert = sorted(basic_cells(Tp, budget), key=Polytrope.key)
        dists, matches = [], []
        for P in cells:
            scored = [(hausdorff_distance_2d(P, Q).squared, i) for i, Q in enumerate(pert)]
            _, best = min(scored)
            matches.append(best)
            dists.append(hausdorff_distance_2d(P, pert[best]))
        step = ConvergenceStep(eps, Tp, tuple(dists), tuple(matches))
        logger.debug("epsilon=%s distances=%s", eps, [float(d) for d in dists])
        if not step.within(slack):
            raise CrossCheckError(f"cells not within {slack}*{eps} of a perturbed cell")
        steps.append(step)
    return ConvergenceReport(cells, tuple(steps), slack)


# -- revenue equivalence --------------------------------------------------------


@dataclass(frozen=True)
class REVerdict:
    is_re: bool
    cell: Polytrope | None = None
    point: tuple | None = None
    components: tuple | None = None


def is_re_type_space(T, budget: int | None = None) -> REVerdict:
    """Every IC mechanism on ``T`` has a unique payment up to a constant.

    Decided by strong connectivity of the graph of an interior point of each
    basic cell, and cross-checked against the payment-set dimensions.
    """
    T = check_type_space(T)
    cells = enumerate_ic_outcomes(T, budget)
    verdict = REVerdict(True)
    for cell in cells.cells:
        q = cell.polytrope.interior_point()
        comps = strongly_connected_components(graph_of_p(T, q))
        if len(comps) > 1:
            verdict = REVerdict(False, cell.polytrope, q, tuple(comps))
            break
    by_dimension = all(c.dimension == 0 for c in cells.cells)
    if verdict.is_re != by_dimension:
        raise CrossCheckError(
            f"graph test says RE={verdict.is_re}, payment dimensions say {by_dimension}"
        )
    return verdict
