import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from intsimplex.bijection import partition_count
from intsimplex.census import (
    CSV_HEADER,
    BudgetExceeded,
    CensusTask,
    Mode,
    canonical_form,
    canonical_matrix,
    census_table,
    enumerate_simplices,
    is_canonical,
    upper_word,
)
from intsimplex.exact import SquaredDistanceMatrix
from intsimplex.geometry import is_nondegenerate_simplex, menger_realizable, signed_volume_factor
from oracles import naive_canonical


def from_upper(n, word):
    m = [[0] * n for _ in range(n)]
    it = iter(word)
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = next(it)
    return m


def relabel(m, perm):
    return [[m[a][b] for b in perm] for a in perm]


def test_canonical_triangle():
    for perm in itertools.permutations(range(3)):
        m = relabel(from_upper(3, (2, 1, 2)), perm)
        assert canonical_form(m) == (1, 2, 2)


def test_canonical_partition_2_1_1():
    base = from_upper(4, (1, 2, 2, 2, 2, 2))
    words = {canonical_form(relabel(base, p)) for p in itertools.permutations(range(4))}
    assert words == {naive_canonical(base)}


def test_canonical_five_points_two_labelings():
    m = from_upper(5, (3, 1, 4, 1, 5, 2, 2, 3, 4, 4))
    other = relabel(m, [3, 0, 4, 2, 1])
    assert canonical_form(m) == canonical_form(other) == naive_canonical(m)


def test_canonical_matrix_round_trip():
    m = from_upper(4, (3, 2, 2, 1, 3, 2))
    c = canonical_matrix(m)
    assert upper_word(c) == canonical_form(m)
    assert is_canonical(c)


def test_canonical_tiny():
    assert canonical_form([[0]]) == ()
    assert canonical_form([]) == ()
    assert is_canonical([[0, 5], [5, 0]])


def test_canonical_against_naive(rng):
    for case in range(3000):
        n = 2 + case % 4
        top = rng.choice([2, 3, 4])
        m = from_upper(n, [rng.randint(1, top) for _ in range(n * (n - 1) // 2)])
        expected = naive_canonical(m)
        assert canonical_form(m) == expected
        assert is_canonical(m) == (upper_word(m) == expected)


def test_canonical_handles_large_symmetric_inputs():
    # all twins: a naive search would visit 10! orders
    m = [[0 if i == j else 1 for j in range(10)] for i in range(10)]
    assert canonical_form(m) == (1,) * 45
    blocks = [0, 0, 0, 1, 1, 1, 2, 2, 3, 4]
    m = [[0 if i == j else (1 if blocks[i] == blocks[j] else 2) for j in range(10)] for i in range(10)]
    assert is_canonical(canonical_matrix(m))


@st.composite
def labeled(draw):
    n = draw(st.integers(2, 6))
    word = draw(st.lists(st.integers(1, 4), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    return from_upper(n, word), draw(st.permutations(range(n)))


@given(labeled())
@settings(max_examples=300, deadline=None)
def test_canonical_relabeling_invariant(case):
    m, perm = case
    assert canonical_form(relabel(m, perm)) == canonical_form(m)


def brute_force_census(d, top):
    """Every labeled matrix, exact Menger verdict, naive canonical dedupe."""
    n = d + 1
    seen = set()
    for word in itertools.product(range(1, top + 1), repeat=n * (n - 1) // 2):
        if max(word) != top:
            continue
        m = from_upper(n, word)
        a = SquaredDistanceMatrix.from_distances(m)
        if signed_volume_factor(a) > 0 and menger_realizable(a, d):
            seen.add(naive_canonical(m))
    return len(seen)


@pytest.mark.parametrize("d, top", [(1, 1), (1, 3), (2, 1), (2, 2), (2, 4), (3, 1), (3, 2), (3, 3)])
def test_census_matches_brute_force(d, top):
    assert enumerate_simplices(CensusTask(d, top)).count == brute_force_census(d, top)


@pytest.mark.parametrize("top", range(1, 8))
def test_triangles_by_diameter(top):
    # integer triangles with longest side top and strict triangle inequality
    expected = sum(1 for a in range(1, top + 1) for b in range(a, top + 1) if a + b > top)
    assert enumerate_simplices(CensusTask(2, top)).count == expected


@pytest.mark.parametrize("d, top, expected", [(3, 1, 1), (3, 2, 4), (3, 3, 16), (3, 4, 45), (4, 3, 56), (5, 3, 197)])
def test_known_cells(d, top, expected):
    assert enumerate_simplices(CensusTask(d, top)).count == expected


@pytest.mark.parametrize("d", range(1, 10))
def test_diameter_one_is_regular_simplex(d):
    res = enumerate_simplices(CensusTask(d, 1, emit_representatives=True))
    assert res.count == 1
    assert res.representatives[0] == SquaredDistanceMatrix([[0 if i == j else 1 for j in range(d + 1)] for i in range(d + 1)])


@pytest.mark.parametrize("d", range(3, 7))
def test_diameter_two_is_partitions_minus_one(d):
    assert enumerate_simplices(CensusTask(d, 2)).count == partition_count(d + 1) - 1


@pytest.mark.parametrize("d, top", [(2, 5), (3, 3), (4, 3)])
def test_mode_consistency(d, top):
    upto = enumerate_simplices(CensusTask(d, top, Mode.UP_TO_DIAMETER)).count
    assert upto == sum(enumerate_simplices(CensusTask(d, t)).count for t in range(1, top + 1))


@pytest.mark.parametrize("d, top", [(3, 4), (4, 3), (5, 2)])
def test_representatives_are_canonical_simplices(d, top):
    res = enumerate_simplices(CensusTask(d, top, emit_representatives=True))
    assert len(res.representatives) == res.count
    words = set()
    for a in res.representatives:
        assert a.is_integral()
        dist = [[int(round(float(x) ** 0.5)) for x in row] for row in a.entries]
        assert SquaredDistanceMatrix.from_distances(dist) == a
        assert max(max(r) for r in dist) == top
        assert menger_realizable(a, d)
        assert signed_volume_factor(a) > 0 and is_nondegenerate_simplex(a)
        assert upper_word(dist) == canonical_form(dist)
        words.add(a.upper())
    assert len(words) == res.count


def test_parallel_and_order_independence():
    for d, top in [(3, 4), (4, 3)]:
        base = enumerate_simplices(CensusTask(d, top)).count
        for jobs in (2, 8):
            assert enumerate_simplices(CensusTask(d, top, jobs=jobs)).count == base
        for order in ("reverse", "shuffle:3"):
            assert enumerate_simplices(CensusTask(d, top, order=order)).count == base


def test_node_budget_fails_loudly():
    with pytest.raises(BudgetExceeded) as info:
        enumerate_simplices(CensusTask(5, 3, node_budget=500))
    part = info.value.partial
    assert not part.complete
    assert part.stats.nodes >= 500
    assert part.count < 197


def test_time_budget_fails_loudly():
    with pytest.raises(BudgetExceeded, match="time budget"):
        enumerate_simplices(CensusTask(6, 4, seconds_budget=1e-3))


def test_task_validation():
    for bad in [dict(dimension=0, diameter=1), dict(dimension=3, diameter=0),
                dict(dimension=3, diameter=1, jobs=0), dict(dimension=3, diameter=1, node_budget=0)]:
        with pytest.raises(ValueError):
            CensusTask(**bad)
    with pytest.raises(ValueError):
        enumerate_simplices(CensusTask(3, 2, order="sideways"))


def test_stats_are_populated():
    s = enumerate_simplices(CensusTask(4, 3)).stats
    assert s.nodes > 0
    assert s.pruned_triangle > 0 and s.pruned_canonicity > 0 and s.pruned_realizability > 0


def test_table_small_corner():
    t = census_table([3, 4], [1, 2])
    assert t.grid() == [[1, 1], [4, 6]]


def test_table_diameter_two_row():
    t = census_table([5, 6, 7, 8, 9], [2])
    assert t.grid() == [[10, 14, 21, 29, 41]]


def test_table_column_d3():
    t = census_table([3], [1, 2, 3, 4])
    assert [row[0] for row in t.grid()] == [1, 4, 16, 45]
    lines = t.to_csv().splitlines()
    assert lines[0] == CSV_HEADER
    assert [int(l.split(",")[2]) for l in lines[1:]] == [1, 4, 16, 45]
    assert t.to_grid_csv().splitlines() == ["diameter,d=3", "1,1", "2,4", "3,16", "4,45"]


def test_table_marks_budget_cells():
    t = census_table([3, 5], [3], node_budget=1000)
    assert t.grid() == [[16, None]]
    assert (5, 3) in t.over_budget
    assert "—" in t.to_text()
