"""Polytropes: solution sets of ``p_i - p_j <= A_ij`` in TP^{m-1}.

A nonempty polytrope is stored through its Kleene closure, which is a
canonical key: two polytropes are equal as sets exactly when their closures
are equal matrices.  These sets are the IC payment sets of outcome functions
and the basic cells of a type space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .exceptions import DimensionUnsupported
from .tropical import DiGraph, critical_graph, kleene_star, strongly_connected_components
from .validation import Matrix, Vector, check_matrix, check_point


@dataclass(frozen=True)
class Polytrope:
    closure: Matrix

    @property
    def m(self) -> int:
        return len(self.closure)

    @classmethod
    def from_constraints(cls, L) -> "Polytrope":
        """``{p : p_i - p_j <= L_ij}``; raises NegativeCycleError when empty."""
        return cls(kleene_star(L))

    @classmethod
    def from_point(cls, p) -> "Polytrope":
        p = check_point(p)
        return cls(tuple(tuple(a - b for b in p) for a in p))

    def key(self) -> tuple:
        return tuple(x for row in self.closure for x in row)

    def contains(self, p) -> bool:
        p = check_point(p, self.m)
        S = self.closure
        return all(
            p[i] - p[j] <= S[i][j] for i, j in product(range(self.m), repeat=2)
        )

    def tropical_vertices(self) -> list[Vector]:
        """Normalized closure columns; they generate the set tropically."""
        S = self.closure
        return [
            tuple(S[i][j] - S[0][j] for i in range(self.m)) for j in range(self.m)
        ]

    def interior_point(self) -> Vector:
        """Average of the normalized closure columns.

        For a non-critical pair the column ``k = i`` term is strictly below
        ``S_ij``, so the average satisfies every non-forced constraint
        strictly: it lies in the relative interior.
        """
        cols = self.tropical_vertices()
        m = self.m
        return tuple(sum((c[i] for c in cols), Fraction(0)) / m for i in range(m))

    def critical_graph(self) -> DiGraph:
        return critical_graph(self.closure)

    def dimension(self) -> int:
        return len(strongly_connected_components(self.critical_graph())) - 1

    def equals(self, other: "Polytrope") -> bool:
        if self.m != other.m:
            raise ValueError("polytropes live in different dimensions")
        return self.closure == other.closure

    # -- planar geometry (m == 3) --------------------------------------------

    def polygon(self) -> list[tuple[Fraction, Fraction]]:
        """Vertices in the plane ``(x, y) = (p_2 - p_1, p_3 - p_1)``, counter-clockwise.

        Degenerate sets come back as one or two vertices.
        """
        if self.m != 3:
            raise DimensionUnsupported(f"planar polygon needs m = 3, got {self.m}")
        S = self.closure
        x_lo, x_hi = -S[0][1], S[1][0]
        y_lo, y_hi = -S[0][2], S[2][0]
        poly = [(x_lo, y_lo), (x_hi, y_lo), (x_hi, y_hi), (x_lo, y_hi)]
        # x - y <= S_23 and y - x <= S_32
        poly = _clip(poly, Fraction(1), Fraction(-1), S[1][2])
        poly = _clip(poly, Fraction(-1), Fraction(1), S[2][1])
        return _dedupe(poly)


def _clip(poly, a, b, c):
    """Sutherland-Hodgman clip of a convex polygon by ``a x + b y <= c``."""
    out = []
    n = len(poly)
    for k in range(n):
        P, Q = poly[k], poly[(k + 1) % n]
        fp = a * P[0] + b * P[1] - c
        fq = a * Q[0] + b * Q[1] - c
        if fp <= 0:
            out.append(P)
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = fp / (fp - fq)
            out.append((P[0] + t * (Q[0] - P[0]), P[1] + t * (Q[1] - P[1])))
    return out


def _dedupe(poly):
    out = []
    for v in poly:
        if not out or out[-1] != v:
            out.append(v)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    if len(out) > 2 and all(_cross(out[0], out[1], c) == 0 for c in out[2:]):
        return [min(out), max(out)]
    # drop collinear middle points left behind by tangent clips
    changed = True
    while changed and len(out) > 2:
        changed = False
        for k in range(len(out)):
            if _cross(out[k - 1], out[k], out[(k + 1) % len(out)]) == 0:
                del out[k]
                changed = True
                break
    return out


def _cross(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _sq_dist_point_segment(p, a, b) -> Fraction:
    dx, dy = b[0] - a[0], b[1] - a[1]
    px, py = p[0] - a[0], p[1] - a[1]
    denom = dx * dx + dy * dy
    if denom == 0:
        return px * px + py * py
    t = min(max((px * dx + py * dy) / denom, Fraction(0)), Fraction(1))
    ex, ey = px - t * dx, py - t * dy
    return ex * ex + ey * ey


def _sq_dist_point_polytrope(v, P: Polytrope, poly) -> Fraction:
    if P.contains((0, v[0], v[1])):
        return Fraction(0)
    if len(poly) == 1:
        return _sq_dist_point_segment(v, poly[0], poly[0])
    return min(
        _sq_dist_point_segment(v, poly[k], poly[(k + 1) % len(poly)])
        for k in range(len(poly))
    )


@dataclass(frozen=True)
class HausdorffDistance:
    """Exact squared distance with a certified rational enclosure of its root."""

    squared: Fraction
    lower: Fraction
    upper: Fraction

    def __float__(self):
        return math.sqrt(self.squared.numerator / self.squared.denominator)

    @property
    def exact(self) -> Fraction | None:
        return self.lower if self.lower == self.upper else None

    def __le__(self, bound) -> bool:
        bound = Fraction(bound)
        return bound >= 0 and self.squared <= bound * bound

    def __lt__(self, bound) -> bool:
        bound = Fraction(bound)
        return bound >= 0 and self.squared < bound * bound


def sqrt_enclosure(q: Fraction, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Rational ``lo <= sqrt(q) <= hi`` with ``hi - lo <= 2**-bits``; tight when exact."""
    if q < 0:
        raise ValueError("negative argument")
    num, den = q.numerator, q.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        r = Fraction(rn, rd)
        return r, r
    scale = 1 << bits
    # sqrt(num/den) = sqrt(num * den) / den
    s = math.isqrt(num * den * scale * scale)
    lo = Fraction(s, den * scale)
    hi = Fraction(s + 1, den * scale)
    return lo, hi


def hausdorff_distance_2d(P: Polytrope, Q: Polytrope) -> HausdorffDistance:
    """Euclidean Hausdorff distance of two polytropes in TP^2.

    Both sets are convex, so the directed distance is attained at a vertex;
    the computation is vertex-to-edge and exact up to the final square root.
    Finite closures always describe bounded sets.
    """
    if P.m != 3 or Q.m != 3:
        raise DimensionUnsupported("Hausdorff distance is implemented for m = 3 only")
    pp, qq = P.polygon(), Q.polygon()
    d2 = max(
        max(_sq_dist_point_polytrope(v, Q, qq) for v in pp),
        max(_sq_dist_point_polytrope(v, P, pp) for v in qq),
    )
    lo, hi = sqrt_enclosure(d2)
    return HausdorffDistance(d2, lo, hi)
