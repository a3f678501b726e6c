"""Slow, obviously-correct reference computations used only by the tests."""

from fractions import Fraction
from itertools import permutations
from math import factorial


def leibniz_det(m):
    """Sum over all permutations; exact for any Fraction/int entries."""
    n = len(m)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = Fraction(-1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            term *= m[i][j]
            if term == 0:
                break
        total += term
    return total


def cofactor_det(m):
    """Laplace expansion along the first row."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(m[0][0])
    total = Fraction(0)
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * Fraction(m[0][j]) * cofactor_det(minor)
    return total


def naive_canonical(m):
    n = len(m)
    best = None
    for perm in permutations(range(n)):
        word = tuple(m[perm[i]][perm[j]] for i in range(n) for j in range(i + 1, n))
        if best is None or word < best:
            best = word
    return best


def partition_numbers(limit):
    """p(0..limit) by Euler's pentagonal number recurrence."""
    p = [1] + [0] * limit
    for n in range(1, limit + 1):
        k, total = 1, 0
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p


def regular_simplex_cm(n):
    """Bordered determinant of the unit regular simplex on ``n`` points from its volume.

    ``V_k^2 = (k+1) / (2^k (k!)^2)`` for the unit regular k-simplex and
    ``(-1)^n det = 2^k (k!)^2 V_k^2`` with ``k = n - 1``.
    """
    k = n - 1
    vol_sq = Fraction(k + 1, 2**k * factorial(k) ** 2)
    return (-1) ** n * 2**k * factorial(k) ** 2 * vol_sq
