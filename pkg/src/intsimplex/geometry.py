"""Euclidean realizability of squared-distance matrices.

The authoritative verdicts come from signs of exact Cayley-Menger (bordered)
determinants. ``gram_oracle`` is an independent floating-point cross-check via
classical double-centering and is never used to decide anything.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from .exact import SquaredDistanceMatrix, det, det_int, principal_submatrix, border


def cayley_menger(a: SquaredDistanceMatrix, subset: Optional[Iterable[int]] = None) -> Fraction:
    """det of the bordered matrix of ``a`` restricted to ``subset`` (default: all points)."""
    sub = a if subset is None else principal_submatrix(a, subset)
    if sub.is_integral():
        n = sub.n
        full = [[0] + [1] * n] + [[1] + [int(x) for x in row] for row in sub.entries]
        return Fraction(det_int(full))
    return border(sub).det()


def signed_volume_factor(a: SquaredDistanceMatrix, subset: Optional[Iterable[int]] = None) -> Fraction:
    """``(-1)^k det`` of the bordered matrix on ``k`` points.

    Equals ``2^(k-1) ((k-1)!)^2 V^2`` for a realizable set, so it is nonnegative
    for realizable sets and positive exactly for affinely independent ones.
    """
    idx = range(a.n) if subset is None else sorted(set(subset))
    k = len(idx)
    value = cayley_menger(a, idx)
    return value if k % 2 == 0 else -value


@dataclass(frozen=True)
class MengerVerdict:
    """Truthy iff the criterion passed; otherwise ``witness`` names the offending subset."""

    realizable: bool
    witness: Optional[tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.realizable


@dataclass(frozen=True)
class RealizabilityReport:
    realizable_in_dim: Optional[int]
    nondegenerate: bool
    witness: Optional[tuple[int, ...]] = None

    @property
    def realizable(self) -> bool:
        return self.realizable_in_dim is not None


def _menger_full(a: SquaredDistanceMatrix) -> Optional[tuple[int, ...]]:
    """Recursive criterion on all points against dimension n-1; returns a witness or None."""
    memo: dict[tuple[int, ...], Optional[tuple[int, ...]]] = {}

    def check(s: tuple[int, ...]) -> Optional[tuple[int, ...]]:
        # one point sits in dimension 0, two distinct points in dimension 1
        if len(s) <= 2:
            return None
        if s in memo:
            return memo[s]
        witness: Optional[tuple[int, ...]] = None
        if signed_volume_factor(a, s) < 0:
            witness = s
        else:
            for drop in range(len(s)):
                witness = check(s[:drop] + s[drop + 1:])
                if witness is not None:
                    break
        memo[s] = witness
        return witness

    return check(tuple(range(a.n)))


def affine_basis(a: SquaredDistanceMatrix) -> tuple[int, ...]:
    """Greedy maximal subset with nonzero Cayley-Menger determinant.

    Only meaningful for realizable matrices, where nonzero determinant is
    exactly affine independence and the greedy choice is a basis.
    """
    if a.n == 0:
        return ()
    basis = [0]
    for p in range(1, a.n):
        if signed_volume_factor(a, basis + [p]) != 0:
            basis.append(p)
    return tuple(basis)


def menger_realizable(a: SquaredDistanceMatrix, d: int) -> MengerVerdict:
    """Menger's recursive determinant criterion for embedding in Euclidean ``d``-space.

    With ``n = d + 1`` this is the plain recursion: the top-level signed
    determinant must be nonnegative and every ``(n-1)``-point subset must pass
    against ``d - 1``, memoized on index sets. A target ``d >= n`` is treated as
    ``n - 1`` (extra room is free). A target ``d < n - 1`` additionally needs
    every affinely independent subset to have at most ``d + 1`` points; the
    witness is then a ``(d+2)``-point subset whose determinant should vanish.
    """
    if d < 0:
        raise ValueError(f"dimension must be nonnegative, got {d}")
    witness = _menger_full(a)
    if witness is not None:
        return MengerVerdict(False, witness)
    if d < a.n - 1:
        basis = affine_basis(a)
        if len(basis) > d + 1:
            return MengerVerdict(False, basis[: d + 2])
    return MengerVerdict(True)


def minimal_embedding_dimension(a: SquaredDistanceMatrix) -> RealizabilityReport:
    witness = _menger_full(a)
    if witness is not None:
        return RealizabilityReport(None, False, witness)
    k = len(affine_basis(a)) - 1 if a.n else 0
    return RealizabilityReport(k, k == max(a.n - 1, 0))


def is_nondegenerate_simplex(a: SquaredDistanceMatrix) -> bool:
    """Realizable and full-dimensional: strict top-level sign plus the recursion."""
    if a.n <= 1:
        return True
    return signed_volume_factor(a) > 0 and _menger_full(a) is None


def gram_matrix(a: SquaredDistanceMatrix, base: int = 0) -> list[list[Fraction]]:
    """Exact Gram matrix of the vectors ``p_i - p_base`` for ``i != base``."""
    others = [i for i in range(a.n) if i != base]
    e = a.entries
    half = Fraction(1, 2)
    return [[(e[base][i] + e[base][j] - e[i][j]) * half for j in others] for i in others]


def gram_oracle(a: SquaredDistanceMatrix, d: int, tol: float = 1e-8) -> bool:
    """Float classical-scaling check: PSD up to ``-tol`` with at most ``d`` eigenvalues above ``tol``."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if a.n <= 1:
        return True
    g = np.array([[float(x) for x in row] for row in gram_matrix(a)], dtype=float)
    eig = np.linalg.eigvalsh(g)
    return bool(eig.min() >= -tol and int(np.count_nonzero(eig > tol)) <= d)


def float_bordered_dets(a: SquaredDistanceMatrix, min_size: int = 3) -> list[float]:
    """Float bordered determinants of every principal subset with at least ``min_size`` points."""
    f = np.array([[float(x) for x in row] for row in a.entries])
    out = []
    for k in range(min_size, a.n + 1):
        for s in combinations(range(a.n), k):
            b = np.ones((k + 1, k + 1))
            b[0, 0] = 0.0
            b[1:, 1:] = f[np.ix_(s, s)]
            out.append(float(np.linalg.det(b)))
    return out


def is_psd_int(m: Sequence[Sequence[int]]) -> tuple[bool, int]:
    """Exact semidefiniteness test of a symmetric integer matrix; returns ``(psd, rank)``.

    Symmetric Bareiss elimination with positive diagonal pivots. A negative
    diagonal entry refutes semidefiniteness; an all-zero diagonal forces the
    remaining block to vanish.
    """
    rows = [list(r) for r in m]
    prev = 1
    rank = 0
    while rows:
        n = len(rows)
        p = -1
        for i in range(n):
            v = rows[i][i]
            if v < 0:
                return False, rank
            if v > 0 and p < 0:
                p = i
        if p < 0:
            return all(x == 0 for r in rows for x in r), rank
        pivot = rows[p][p]
        rp = rows[p]
        rows = [
            [(ri[j] * pivot - ri[p] * rp[j]) // prev for j in range(n) if j != p]
            for i, ri in enumerate(rows)
            if i != p
        ]
        prev = pivot
        rank += 1
    return True, rank
