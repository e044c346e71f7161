"""Input validation and exact-number coercion.

Everything in the package works on :class:`fractions.Fraction`.  These helpers
turn user input (ints, ``"3/2"``, ``"0.25"``, :class:`decimal.Decimal`,
numpy integer arrays) into canonical tuples and reject binary floats, which
cannot represent the exact ties that sector and covector predicates rely on.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Sequence

Matrix = tuple[tuple[Fraction, ...], ...]
Vector = tuple[Fraction, ...]


def as_fraction(value) -> Fraction:
    """Coerce a scalar to an exact :class:`~fractions.Fraction`.

    Accepts integers, fractions, decimals and strings such as ``"-3/2"`` or
    ``"0.125"``.  Floats and bools are rejected.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, (Decimal, numbers.Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse {value!r} as an exact rational") from exc
    if isinstance(value, numbers.Real):
        raise TypeError(
            f"binary float {value!r} rejected; pass a string like '0.1' or a Fraction"
        )
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def as_vector(values: Iterable) -> Vector:
    return tuple(as_fraction(v) for v in values)


def normalize_point(values: Iterable) -> Vector:
    """Return the representative of a point of TP^{m-1} with first coordinate zero."""
    vec = as_vector(values)
    if not vec:
        raise ValueError("a point needs at least one coordinate")
    base = vec[0]
    return tuple(v - base for v in vec)


def check_point(values, m: int | None = None) -> Vector:
    p = normalize_point(values)
    if m is not None and len(p) != m:
        raise ValueError(f"expected a point with {m} coordinates, got {len(p)}")
    return p


def check_matrix(A, *, zero_diagonal: bool = False) -> Matrix:
    """Validate a square rational matrix of size at least 2."""
    rows = [as_vector(row) for row in A]
    m = len(rows)
    if m < 2:
        raise ValueError(f"matrix must be at least 2x2, got {m} rows")
    for i, row in enumerate(rows):
        if len(row) != m:
            raise ValueError(f"row {i} has length {len(row)}, expected {m}")
    if zero_diagonal:
        bad = [i for i in range(m) if rows[i][i] != 0]
        if bad:
            raise ValueError(f"diagonal must be zero; nonzero at {bad}")
    return tuple(rows)


def check_vector(x, m: int) -> Vector:
    vec = as_vector(x)
    if len(vec) != m:
        raise ValueError(f"vector has length {len(vec)}, expected {m}")
    return vec


@dataclass(frozen=True)
class TypeSpace:
    """A finite multiset of types in TP^{m-1}.

    Copies are listed explicitly; entry order fixes the copy indices used by
    outcome functions and covectors.  Points are stored normalized.
    """

    m: int
    points: tuple[Vector, ...]

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, idx):
        return self.points[idx]

    @property
    def r(self) -> int:
        return len(self.points)


def check_type_space(T, m: int | None = None) -> TypeSpace:
    """Coerce ``T`` (a :class:`TypeSpace` or an r x m array-like) to a TypeSpace."""
    if isinstance(T, TypeSpace):
        if m is not None and T.m != m:
            raise ValueError(f"type space lives in dimension {T.m}, expected {m}")
        return T
    points = [normalize_point(row) for row in T]
    if m is None:
        if not points:
            raise ValueError("cannot infer m from an empty type space; pass m")
        m = len(points[0])
    if m < 2:
        raise ValueError("need at least two outcomes")
    for i, p in enumerate(points):
        if len(p) != m:
            raise ValueError(f"type {i} has {len(p)} coordinates, expected {m}")
    return TypeSpace(m, tuple(points))


def check_outcomes(g: Sequence, r: int, m: int, *, surjective: bool = True) -> tuple[int, ...]:
    """Validate a 0-based outcome assignment of length ``r`` with values in ``range(m)``."""
    out = []
    for v in g:
        if isinstance(v, bool) or not isinstance(v, numbers.Integral):
            raise TypeError(f"outcome {v!r} is not an integer")
        out.append(int(v))
    if len(out) != r:
        raise ValueError(f"outcome function has {len(out)} entries, type space has {r}")
    bad = [v for v in out if not 0 <= v < m]
    if bad:
        raise ValueError(f"outcomes {bad} outside range(0, {m})")
    if surjective:
        if r < m:
            raise ValueError(
                f"no surjective outcome function exists: {r} types, {m} outcomes"
            )
        missing = sorted(set(range(m)) - set(out))
        if missing:
            raise ValueError(f"outcome function is not onto; missing outcomes {missing}")
    return tuple(out)


def fraction_str(x: Fraction) -> str:
    """Exact string form used in every serialized output (``"3/2"``, ``"-1"``)."""
    return str(x)
