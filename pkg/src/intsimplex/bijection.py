"""Partitions of d+1 and {1, lambda}-distance simplices.

A simplex whose edges have lengths 1 and lambda >= 2 falls apart into clusters
of mutually unit-distance vertices; the cluster sizes form a partition of the
vertex count. ``partition_to_matrix`` and ``matrix_to_partition`` are the two
directions of that correspondence, ``lemma_check`` certifies the determinant
inequalities for one instance, and ``threshold_scan`` probes what happens for
smaller lambda.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Optional, Sequence

from .exact import RationalLike, SquaredDistanceMatrix, as_rational, border, det
from .geometry import is_psd_int


class NotClustered(ValueError):
    """Unit distance is not transitive on the vertex set."""

    def __init__(self, witness: tuple[int, int, int]):
        i, j, k = witness
        super().__init__(f"points {i}-{j} and {j}-{k} are at distance 1 but {i}-{k} is not")
        self.witness = witness


class BadAlphabet(ValueError):
    """Off-diagonal entries are not drawn from {1, lambda^2} with lambda^2 > 1."""


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        if any(not isinstance(p, int) or p < 1 for p in parts):
            raise ValueError(f"parts must be positive integers: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, parts: Sequence[int]) -> "Partition":
        """Accept parts in any order."""
        return cls(tuple(sorted(parts, reverse=True)))

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def dim(self) -> int:
        return self.n - 1

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


def _partitions(n: int, largest: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def enumerate_partitions(n: int) -> list[Partition]:
    """All partitions of ``n`` in reverse-lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return [Partition(p) for p in _partitions(n, n)]


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    """p(n) by the standard parts-at-most-k table."""
    if n < 0:
        return 0
    table = [1] + [0] * n
    for k in range(1, n + 1):
        for m in range(k, n + 1):
            table[m] += table[m - k]
    return table[n]


def _check_lambda_sq(lambda_sq: Fraction, allow_small_lambda: bool) -> None:
    if lambda_sq <= 1:
        raise ValueError(f"lambda^2 must exceed 1, got {lambda_sq}")
    if lambda_sq < 4 and not allow_small_lambda:
        raise ValueError(
            f"lambda^2 = {lambda_sq} is below 4; clustering is only guaranteed for lambda >= 2 "
            "(pass allow_small_lambda=True to proceed anyway)"
        )


def partition_to_matrix(
    partition: Partition, lambda_sq: RationalLike, *, allow_small_lambda: bool = False
) -> SquaredDistanceMatrix:
    """Block matrix: squared distance 1 inside each part, ``lambda_sq`` across parts."""
    lam = as_rational(lambda_sq)
    _check_lambda_sq(lam, allow_small_lambda)
    block = [b for b, size in enumerate(partition.parts) for _ in range(size)]
    n = len(block)
    one, zero = Fraction(1), Fraction(0)
    rows = [[zero if i == j else (one if block[i] == block[j] else lam) for j in range(n)] for i in range(n)]
    return SquaredDistanceMatrix(rows)


def matrix_to_partition(a: SquaredDistanceMatrix) -> Partition:
    """Recover the cluster partition of a two-valued {1, lambda^2} matrix.

    Raises ``BadAlphabet`` when the off-diagonal values are not a subset of
    ``{1, x}`` with ``x > 1`` and ``NotClustered`` when unit distance fails to
    be transitive.
    """
    n = a.n
    values = {a[i][j] for i in range(n) for j in range(i + 1, n)}
    others = values - {1}
    if len(others) > 1 or any(x <= 1 for x in others):
        raise BadAlphabet(f"off-diagonal values {sorted(values)} are not of the form {{1, lambda^2 > 1}}")
    for j in range(n):
        near = [i for i in range(n) if i != j and a[i][j] == 1]
        for i, k in combinations(near, 2):
            if a[i][k] != 1:
                raise NotClustered((i, j, k))
    seen = [False] * n
    sizes = []
    for i in range(n):
        if seen[i]:
            continue
        block = [k for k in range(n) if k == i or a[i][k] == 1]
        for k in block:
            seen[k] = True
        sizes.append(len(block))
    return Partition.of(sizes)


@dataclass(frozen=True)
class LemmaReport:
    partition: Partition
    lambda_sq: Fraction
    det_a: Fraction
    det_abar: Fraction

    @property
    def sign(self) -> int:
        return -1 if self.partition.dim % 2 == 0 else 1

    @property
    def expr1(self) -> Fraction:
        return self.sign * (self.lambda_sq * self.det_abar + self.det_a)

    @property
    def expr2(self) -> Fraction:
        return self.sign * self.det_abar

    @property
    def holds(self) -> bool:
        return self.expr1 > 0 and self.expr2 > 0


def lemma_check(
    partition: Partition, lambda_sq: RationalLike, *, allow_small_lambda: bool = False
) -> LemmaReport:
    a = partition_to_matrix(partition, lambda_sq, allow_small_lambda=allow_small_lambda)
    return LemmaReport(partition, as_rational(lambda_sq), det(a.entries), border(a).det())


@dataclass(frozen=True)
class SigmaValue:
    """``sigma(d, d+2) = sqrt(outer_rational + outer_sqrt_coeff * sqrt(inner_radicand))``."""

    d: int
    value: float
    inner_radicand: Fraction
    outer_rational: Fraction
    outer_sqrt_coeff: Fraction


def sigma(d: int) -> SigmaValue:
    if d < 2:
        raise ValueError(f"sigma(d, d+2) needs d >= 2, got {d}")
    inner = Fraction(33 * d * d - 52 * d + 20)
    outer_q = Fraction(9 * d - 10, 4 * d - 4)
    coeff = Fraction(1, 4 * d - 4)
    value = math.sqrt((9 * d - 10 + math.sqrt(33 * d * d - 52 * d + 20)) / (4 * d - 4))
    return SigmaValue(d, value, inner, outer_q, coeff)


SIGMA_LIMIT = 0.5 * math.sqrt(9 + math.sqrt(33))


def bijection_threshold(dim: int) -> float:
    """Smallest lambda for which clusters biject with partitions in dimension ``dim``.

    This is sigma(dim-1, dim+1). For ``dim = 2`` the closed form is 0/0; its
    removable limit is 2, which is exactly where the (1,1,lambda) triangle dies.
    """
    if dim < 2:
        raise ValueError("threshold is defined for dim >= 2")
    if dim == 2:
        return 2.0
    return sigma(dim - 1).value


@dataclass(frozen=True)
class ScanRow:
    dim: int
    lambda_sq: Fraction
    realizable_count: int
    partition_count: int
    threshold_sq: float
    witnesses: tuple[tuple[int, ...], ...] = field(default=())

    @property
    def bijection_holds(self) -> bool:
        return self.realizable_count == self.partition_count

    @property
    def above_threshold(self) -> bool:
        return float(self.lambda_sq) >= self.threshold_sq


def _graph_classes(n: int) -> list[tuple[tuple[int, ...], ...]]:
    """One 0/1 adjacency matrix (1 = unit distance) per isomorphism class on ``n`` points."""
    from .census import canonical_form

    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    words = set()
    for mask in range(1 << len(pairs)):
        # code 1 = unit distance, 2 = long distance; canonical form only needs the order
        m = [[0] * n for _ in range(n)]
        for b, (i, j) in enumerate(pairs):
            m[i][j] = m[j][i] = 1 if mask >> b & 1 else 2
        words.add(canonical_form(m))
    classes = []
    for word in sorted(words):
        it = iter(word)
        m = [[0] * n for _ in range(n)]
        for i, j in pairs:
            m[i][j] = m[j][i] = next(it)
        classes.append(tuple(tuple(r) for r in m))
    return classes


def _nondegenerate(code: Sequence[Sequence[int]], lambda_sq: Fraction) -> bool:
    n = len(code)
    if n <= 1:
        return True
    sq = [[Fraction(0) if i == j else (Fraction(1) if code[i][j] == 1 else lambda_sq) for j in range(n)] for i in range(n)]
    den = lambda_sq.denominator
    # 2 * den * Gram is integral; positive definite iff full-rank semidefinite
    g = [[int((sq[0][i] + sq[0][j] - sq[i][j]) * den) for j in range(1, n)] for i in range(1, n)]
    psd, rank = is_psd_int(g)
    return psd and rank == n - 1


def threshold_scan(dim: int, lambda_sq_grid: Sequence[RationalLike]) -> list[ScanRow]:
    """Count {1, lambda}-simplices in dimension ``dim`` up to relabeling for each grid value.

    Every two-valued matrix on ``dim + 1`` points is tried; the bijection holds
    at a grid point when the number of nondegenerate realizable classes equals
    p(dim + 1). Realizable classes that are not cluster-structured are returned
    as witnesses (their unit-distance upper triangle, row-major, 1/0 coded).
    """
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    n = dim + 1
    classes = _graph_classes(n)
    # two points realize any pair of lengths, so every lambda > 1 works in dimension 1
    threshold = bijection_threshold(dim) ** 2 if dim >= 2 else 1.0
    rows = []
    for raw in lambda_sq_grid:
        lam = as_rational(raw)
        if lam <= 1:
            raise ValueError(f"lambda^2 must exceed 1, got {lam}")
        count = 0
        witnesses = []
        for code in classes:
            if not _nondegenerate(code, lam):
                continue
            count += 1
            a = SquaredDistanceMatrix(
                [[0 if i == j else (1 if code[i][j] == 1 else lam) for j in range(n)] for i in range(n)]
            )
            try:
                matrix_to_partition(a)
            except NotClustered:
                witnesses.append(tuple(1 if code[i][j] == 1 else 0 for i in range(n) for j in range(i + 1, n)))
        rows.append(ScanRow(dim, lam, count, partition_count(n), threshold, tuple(witnesses)))
    return rows
