"""Explicit coordinates for the simplex of a partition.

Each part of size ``k`` becomes a unit-edge regular ``(k-1)``-simplex centered
at the origin in its own coordinate slice, pushed out along a private extra
axis so that every vertex sits at squared norm ``lambda^2 / 2``. Vertices in
different parts are then orthogonal, which makes every cross distance exactly
``lambda``.

Exactness is certified on the Gram matrix with rationals; coordinates are
floats and carry tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .bijection import Partition
from .exact import RationalLike, SquaredDistanceMatrix, as_rational

RANK_TOL = 1e-10


class ShiftImpossible(ValueError):
    """lambda is too small to lift a part of this size."""


class RankDeficient(ValueError):
    """The points span fewer dimensions than a simplex needs."""


@dataclass(frozen=True)
class RegularSimplexBlock:
    size: int
    circumradius_sq: Fraction
    pair_inner_product: Fraction
    shift_sq: Fraction


@dataclass(frozen=True)
class Embedding:
    ambient_dim: int
    points: np.ndarray
    gram: tuple[tuple[Fraction, ...], ...]
    block_of: tuple[int, ...]
    partition: Optional[Partition] = None
    lambda_sq: Optional[Fraction] = None

    @property
    def n(self) -> int:
        return len(self.block_of)

    def exact_squared_distances(self) -> SquaredDistanceMatrix:
        g = self.gram
        n = len(g)
        return SquaredDistanceMatrix([[g[i][i] + g[j][j] - 2 * g[i][j] for j in range(n)] for i in range(n)])

    def float_distances(self) -> np.ndarray:
        p = self.points
        return np.sqrt(((p[:, None, :] - p[None, :, :]) ** 2).sum(axis=-1))


def block_parameters(size: int, lambda_sq: RationalLike) -> RegularSimplexBlock:
    if size < 1:
        raise ValueError(f"block size must be positive, got {size}")
    lam = as_rational(lambda_sq)
    circ = Fraction(size - 1, 2 * size)
    shift = lam / 2 - circ
    if shift < 0:
        raise ShiftImpossible(f"lambda^2 = {lam} cannot lift a block of size {size} (shift^2 = {shift})")
    return RegularSimplexBlock(size, circ, Fraction(-1, 2 * size), shift)


def build_gram(partition: Partition, lambda_sq: RationalLike) -> tuple[tuple[Fraction, ...], ...]:
    if as_rational(lambda_sq) <= 1:
        raise ValueError(f"lambda^2 must exceed 1 to separate blocks, got {lambda_sq}")
    blocks = [block_parameters(k, lambda_sq) for k in partition.parts]
    block_of = [b for b, k in enumerate(partition.parts) for _ in range(k)]
    n = len(block_of)
    zero = Fraction(0)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if block_of[i] != block_of[j]:
                row.append(zero)
                continue
            blk = blocks[block_of[i]]
            row.append(blk.shift_sq + (blk.circumradius_sq if i == j else blk.pair_inner_product))
        rows.append(tuple(row))
    return tuple(rows)


def regular_simplex(k: int) -> np.ndarray:
    """``k`` vertices of a unit-edge regular simplex in ``R^(k-1)``, barycenter at the origin.

    Vertex ``m`` is raised on axis ``m-1`` above the barycenter of the first
    ``m`` vertices, then everything is recentered.
    """
    pts = np.zeros((k, max(k - 1, 0)))
    for m in range(1, k):
        r_sq = (m - 1) / (2 * m)
        h = math.sqrt(1.0 - r_sq)
        pts[m, m - 1] = h
        pts[: m + 1, m - 1] -= h / (m + 1)
    return pts


def build_coordinates(partition: Partition, lambda_sq: RationalLike) -> Embedding:
    lam = as_rational(lambda_sq)
    gram = build_gram(partition, lam)
    blocks = [block_parameters(k, lam) for k in partition.parts]
    ambient = sum(k - 1 for k in partition.parts) + len(partition.parts)
    points = np.zeros((partition.n, ambient))
    row = col = 0
    block_of = []
    for b, blk in enumerate(blocks):
        k = blk.size
        points[row : row + k, col : col + k - 1] = regular_simplex(k)
        points[row : row + k, col + k - 1] = math.sqrt(blk.shift_sq)
        block_of.extend([b] * k)
        row += k
        col += k
    return Embedding(ambient, points, gram, tuple(block_of), partition, lam)


def reduce_dimension(emb: Embedding, expected_rank: Optional[int] = None) -> Embedding:
    """Re-express the points in an orthonormal basis of their affine span, point 0 at the origin.

    The exact Gram is translated the same way, so it still describes the
    returned points. ``expected_rank`` defaults to ``n - 1``.
    """
    n = emb.n
    want = n - 1 if expected_rank is None else expected_rank
    diffs = emb.points[1:] - emb.points[0]
    basis: list[np.ndarray] = []
    for v in diffs:
        w = v.copy()
        # two sweeps keep the basis orthogonal to working precision
        for _ in range(2):
            for q in basis:
                w -= (q @ w) * q
        norm = float(np.linalg.norm(w))
        if norm > RANK_TOL * max(1.0, float(np.linalg.norm(v))):
            basis.append(w / norm)
    if len(basis) < want:
        raise RankDeficient(f"points span {len(basis)} dimensions, expected {want}")
    q = np.array(basis).reshape(len(basis), emb.points.shape[1])
    coords = (emb.points - emb.points[0]) @ q.T
    g = emb.gram
    shifted = tuple(
        tuple(g[i][j] - g[i][0] - g[0][j] + g[0][0] for j in range(n)) for i in range(n)
    )
    return Embedding(len(basis), coords, shifted, emb.block_of, emb.partition, emb.lambda_sq)
