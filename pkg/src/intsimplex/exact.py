"""Exact rational matrices and fraction-free determinants.

All realizability decisions downstream depend on exact signs, so nothing in
this module ever touches a float.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[int, Fraction, str]


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused: they would silently smuggle rounding into exact data.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational literal")
        # Fraction() would also take decimals like "0.5"; keep the grammar tight
        num, sep, den = text.partition("/")
        try:
            if sep:
                return Fraction(int(num), int(den))
            return Fraction(int(num))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {value!r}") from exc
    raise TypeError(f"cannot interpret {type(value).__name__} as an exact rational")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def det_int(rows: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    if any(len(r) != n for r in m):
        raise ValueError("matrix is not square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for s in range(k + 1, n):
                if m[s][k] != 0:
                    m[k], m[s] = m[s], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        row_k = m[k]
        for i in range(k + 1, n):
            row_i = m[i]
            f = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - f * row_k[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def det(matrix: Sequence[Sequence[RationalLike]]) -> Fraction:
    """Exact determinant of a square rational matrix.

    Each row is scaled by the lcm of its denominators, the integer matrix goes
    through Bareiss elimination and the scale is divided back out.
    """
    rows = [[as_rational(x) for x in r] for r in matrix]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    scale = 1
    int_rows = []
    for r in rows:
        mult = lcm(*(x.denominator for x in r)) if r else 1
        scale *= mult
        int_rows.append([x.numerator * (mult // x.denominator) for x in r])
    return Fraction(det_int(int_rows), scale)


def _frozen(rows: Iterable[Iterable[RationalLike]]) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(as_rational(x) for x in r) for r in rows)


@dataclass(frozen=True)
class SquaredDistanceMatrix:
    """Symmetric matrix of exact squared distances between ``n`` points."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __init__(self, rows: Iterable[Iterable[RationalLike]]):
        entries = _frozen(rows)
        n = len(entries)
        for i, row in enumerate(entries):
            if len(row) != n:
                raise ValueError(f"row {i} has {len(row)} entries, expected {n}")
            if row[i] != 0:
                raise ValueError(f"diagonal entry ({i},{i}) is {row[i]}, expected 0")
            for j in range(i):
                if row[j] != entries[j][i]:
                    raise ValueError(f"not symmetric at ({j},{i})")
                if row[j] <= 0:
                    raise ValueError(f"squared distance ({j},{i}) must be positive, got {row[j]}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_upper(cls, n: int, upper: Sequence[RationalLike]) -> "SquaredDistanceMatrix":
        """Build from the row-major upper triangle ``(0,1), (0,2), ..., (n-2,n-1)``."""
        if len(upper) != n * (n - 1) // 2:
            raise ValueError(f"need {n * (n - 1) // 2} upper-triangle entries for n={n}")
        rows = [[Fraction(0)] * n for _ in range(n)]
        it = iter(upper)
        for i in range(n):
            for j in range(i + 1, n):
                rows[i][j] = rows[j][i] = as_rational(next(it))
        return cls(rows)

    @classmethod
    def from_distances(cls, dist: Sequence[Sequence[int]]) -> "SquaredDistanceMatrix":
        """Square an integer distance matrix entrywise."""
        return cls([[x * x for x in r] for r in dist])

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def __len__(self) -> int:
        return len(self.entries)

    def upper(self) -> tuple[Fraction, ...]:
        n = self.n
        return tuple(self.entries[i][j] for i in range(n) for j in range(i + 1, n))

    def permuted(self, perm: Sequence[int]) -> "SquaredDistanceMatrix":
        """Relabel: new point ``k`` is old point ``perm[k]``."""
        return SquaredDistanceMatrix([[self.entries[a][b] for b in perm] for a in perm])

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self.entries for x in r)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(format_rational(x) for x in r) + "]" for r in self.entries)
        return f"SquaredDistanceMatrix([{body}])"


@dataclass(frozen=True)
class BorderedMatrix:
    """The Cayley-Menger matrix: ``A`` bordered by a zero-cornered row/column of ones."""

    inner: SquaredDistanceMatrix
    full: tuple[tuple[Fraction, ...], ...]

    @property
    def size(self) -> int:
        return len(self.full)

    def det(self) -> Fraction:
        return det(self.full)


def border(a: SquaredDistanceMatrix) -> BorderedMatrix:
    one, zero = Fraction(1), Fraction(0)
    full = [(zero,) + (one,) * a.n]
    full.extend((one,) + row for row in a.entries)
    return BorderedMatrix(a, tuple(full))


def principal_submatrix(a: SquaredDistanceMatrix, subset: Iterable[int]) -> SquaredDistanceMatrix:
    idx = sorted(set(subset))
    if not idx:
        raise ValueError("principal submatrix needs a nonempty index set")
    if idx[0] < 0 or idx[-1] >= a.n:
        raise IndexError(f"index set {idx} out of range for n={a.n}")
    return SquaredDistanceMatrix([[a.entries[i][j] for j in idx] for i in idx])
