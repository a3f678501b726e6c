"""Isomorph-free enumeration of integral simplices.

Matrices are integer *distance* matrices (squares are taken only where a
determinant needs them). Two matrices are isomorphic when a relabeling of the
points maps one onto the other; the canonical representative of a class is
the relabeling whose row-major upper triangle is lexicographically smallest.

The search fills the upper triangle in row-major order. Row 0 is the split
level for parallel work. Interior nodes are cut by

* the weak triangle inequality on every triangle closed by the new entry,
* exact semidefiniteness of the Gram matrix of the points ``0..i`` plus ``j``
  whenever entry ``(i, j)`` closes that point set (Euclidean realizability),
* canonicity bounds: inside a block of columns that rows ``< i`` cannot tell
  apart, row ``i`` must be nondecreasing; and once a point's full distance
  row is known its sorted row may not undercut row 0.

A leaf is counted iff it has the requested diameter, a strictly positive
signed Cayley-Menger determinant, and is its own canonical form.
"""

from __future__ import annotations

import enum
import itertools
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from .exact import SquaredDistanceMatrix, det_int
from .geometry import is_psd_int

DEFAULT_NODE_BUDGET = 10**9
DEFAULT_SECONDS_BUDGET = 600.0
JOBS_ENV = "INTSIMPLEX_JOBS"


# ---------------------------------------------------------------------------
# canonical form
# ---------------------------------------------------------------------------

def upper_word(m: Sequence[Sequence]) -> tuple:
    n = len(m)
    return tuple(m[i][j] for i in range(n) for j in range(i + 1, n))


def _twin_classes(m: Sequence[Sequence]) -> list[int]:
    """Label vertices that agree on every third vertex; swapping two such twins is an automorphism."""
    n = len(m)
    label = list(range(n))
    for u in range(n):
        if label[u] != u:
            continue
        mu = m[u]
        for v in range(u + 1, n):
            if label[v] != v:
                continue
            mv = m[v]
            if all(mu[w] == mv[w] for w in range(n) if w != u and w != v):
                label[v] = u
    return label


class _Smaller(Exception):
    pass


def _min_word(m: Sequence[Sequence], bound: Optional[tuple], stop_below_bound: bool) -> tuple:
    """Branch and bound over individualization orders.

    Picking the vertex for position ``k`` fixes row ``k`` of the permuted
    word: the remaining vertices are kept in an ordered partition, and
    splitting every cell by distance to the new vertex (ascending) yields the
    smallest row that is still consistent with rows ``< k``. Only vertices of
    the first cell may take position ``k``.
    """
    n = len(m)
    twin = _twin_classes(m)
    best = [bound]

    def finish(order_rest: list[int], word: tuple) -> None:
        tail = []
        for a, v in enumerate(order_rest):
            mv = m[v]
            tail.extend(mv[u] for u in order_rest[a + 1:])
        full = word + tuple(tail)
        if best[0] is None or full < best[0]:
            if stop_below_bound:
                raise _Smaller
            best[0] = full

    def rec(cells: list[list[int]], word: tuple, candidates: Optional[list[int]] = None) -> None:
        if all(len(c) == 1 for c in cells):
            finish([c[0] for c in cells], word)
            return
        first = cells[0]
        tried = set()
        for v in first if candidates is None else candidates:
            t = twin[v]
            if t in tried:
                continue
            tried.add(t)
            mv = m[v]
            new_cells: list[list[int]] = []
            row: list = []
            rest = [u for u in first if u != v]
            for cell in ([rest] if rest else []) + cells[1:]:
                if len(cell) == 1:
                    new_cells.append(cell)
                    row.append(mv[cell[0]])
                    continue
                groups: dict = {}
                for u in cell:
                    groups.setdefault(mv[u], []).append(u)
                for val in sorted(groups):
                    g = groups[val]
                    new_cells.append(g)
                    row.extend([val] * len(g))
            new_word = word + tuple(row)
            b = best[0]
            if b is not None:
                prefix = b[: len(new_word)]
                if new_word > prefix:
                    continue
                if new_word < prefix and stop_below_bound:
                    raise _Smaller
            rec(new_cells, new_word)

    # row 0 of the canonical word is the smallest sorted distance row
    keys = [sorted(m[v][u] for u in range(n) if u != v) for v in range(n)]
    low = min(keys)
    rec([list(range(n))], (), [v for v in range(n) if keys[v] == low])
    return best[0]


def canonical_form(m: Sequence[Sequence]) -> tuple:
    """Lexicographically smallest row-major upper-triangle word over all relabelings."""
    if len(m) < 2:
        return ()
    return _min_word(m, None, False)


def is_canonical(m: Sequence[Sequence]) -> bool:
    """True iff no relabeling has a smaller upper-triangle word (stops at the first one found)."""
    if len(m) < 2:
        return True
    try:
        _min_word(m, upper_word(m), True)
    except _Smaller:
        return False
    return True


def canonical_matrix(m: Sequence[Sequence]) -> tuple[tuple, ...]:
    n = len(m)
    word = iter(canonical_form(m))
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rows[i][j] = rows[j][i] = next(word)
    return tuple(tuple(r) for r in rows)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

class Mode(str, enum.Enum):
    EXACT_DIAMETER = "exact"
    UP_TO_DIAMETER = "upto"


@dataclass(frozen=True)
class CensusTask:
    dimension: int
    diameter: int
    mode: Mode = Mode.EXACT_DIAMETER
    emit_representatives: bool = False
    jobs: int = 1
    node_budget: int = DEFAULT_NODE_BUDGET
    seconds_budget: float = DEFAULT_SECONDS_BUDGET
    order: str = "forward"

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        if self.diameter < 1:
            raise ValueError(f"diameter must be >= 1, got {self.diameter}")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        if self.node_budget <= 0 or self.seconds_budget <= 0:
            raise ValueError("budgets must be positive")
        object.__setattr__(self, "mode", Mode(self.mode))


@dataclass
class CensusStats:
    nodes: int = 0
    pruned_triangle: int = 0
    pruned_canonicity: int = 0
    pruned_realizability: int = 0
    rejected_diameter: int = 0
    rejected_degenerate: int = 0
    rejected_noncanonical: int = 0

    def merge(self, other: "CensusStats") -> None:
        for k, v in vars(other).items():
            setattr(self, k, getattr(self, k) + v)


@dataclass
class CensusResult:
    task: CensusTask
    count: int
    representatives: Optional[list[SquaredDistanceMatrix]]
    stats: CensusStats
    seconds: float
    complete: bool = True


class BudgetExceeded(RuntimeError):
    def __init__(self, partial: CensusResult, reason: str):
        super().__init__(
            f"census d={partial.task.dimension} D={partial.task.diameter} stopped: {reason} "
            f"(partial count {partial.count} after {partial.stats.nodes} nodes)"
        )
        self.partial = partial
        self.reason = reason


@dataclass
class _Subtree:
    count: int = 0
    reps: list = field(default_factory=list)
    stats: CensusStats = field(default_factory=CensusStats)
    stopped: Optional[str] = None


class _Stop(Exception):
    pass


def _first_rows(n: int, top: int) -> list[tuple[int, ...]]:
    """Split level: every nondecreasing row 0."""
    return list(itertools.combinations_with_replacement(range(1, top + 1), n - 1))


def _search_subtree(n: int, top: int, exact: bool, emit: bool, row0: tuple[int, ...],
                    node_budget: int, deadline: float) -> _Subtree:
    out = _Subtree()
    st = out.stats
    a = [[0] * n for _ in range(n)]
    sq = [[0] * n for _ in range(n)]
    for j in range(1, n):
        a[0][j] = a[j][0] = row0[j - 1]
        sq[0][j] = sq[j][0] = row0[j - 1] ** 2
    positions = [(i, j) for i in range(1, n) for j in range(i + 1, n)]
    total = len(positions)
    check_every = 4096

    def leaf() -> None:
        if exact and max(row0[-1], max((a[i][j] for i, j in positions), default=0)) != top:
            st.rejected_diameter += 1
            return
        if n > 1 and sorted(a[n - 1][:n - 1]) < list(row0):
            st.pruned_canonicity += 1
            return
        bordered = [[0] + [1] * n] + [[1] + sq[i] for i in range(n)]
        cm = det_int(bordered)
        if (cm if n % 2 == 0 else -cm) <= 0:
            st.rejected_degenerate += 1
            return
        if not is_canonical(a):
            st.rejected_noncanonical += 1
            return
        out.count += 1
        if emit:
            out.reps.append(SquaredDistanceMatrix([row[:] for row in sq]))

    def rec(p: int) -> None:
        if p == total:
            leaf()
            return
        i, j = positions[p]
        ai = a[i]
        lo, hi = 1, top
        for k in range(i):
            x, y = a[k][i], a[k][j]
            if x - y > lo:
                lo = x - y
            elif y - x > lo:
                lo = y - x
            if x + y < hi:
                hi = x + y
        st.pruned_triangle += top - (hi - lo + 1) if hi >= lo else top
        start = lo
        if j > i + 1:
            prev = ai[j - 1]
            if prev > lo and all(a[r][j - 1] == a[r][j] for r in range(i)):
                st.pruned_canonicity += min(prev, hi + 1) - lo
                start = prev
        row_done = j == n - 1
        for v in range(start, hi + 1):
            st.nodes += 1
            if st.nodes >= node_budget:
                raise _Stop("node budget")
            if st.nodes % check_every == 0 and time.time() > deadline:
                raise _Stop("time budget")
            ai[j] = a[j][i] = v
            sq[i][j] = sq[j][i] = v * v
            if i >= 2:
                s0 = sq[0]
                pts = list(range(1, i + 1)) + [j]
                g = [[s0[x] + s0[y] - sq[x][y] for y in pts] for x in pts]
                if not is_psd_int(g)[0]:
                    st.pruned_realizability += 1
                    continue
            if row_done and sorted(ai[:i] + ai[i + 1:]) < list(row0):
                st.pruned_canonicity += 1
                continue
            rec(p + 1)
        ai[j] = a[j][i] = 0
        sq[i][j] = sq[j][i] = 0

    try:
        rec(0)
    except _Stop as stop:
        out.stopped = str(stop)
    return out


def _run_chunk(args) -> _Subtree:
    n, top, exact, emit, rows, node_budget, deadline = args
    merged = _Subtree()
    for row0 in rows:
        part = _search_subtree(n, top, exact, emit, row0, node_budget - merged.stats.nodes, deadline)
        merged.count += part.count
        merged.reps.extend(part.reps)
        merged.stats.merge(part.stats)
        if part.stopped:
            merged.stopped = part.stopped
            break
    return merged


def _ordered(rows: list, order: str) -> list:
    if order == "forward":
        return rows
    if order == "reverse":
        return rows[::-1]
    if order.startswith("shuffle:"):
        rng = random.Random(int(order.split(":", 1)[1]))
        rows = rows[:]
        rng.shuffle(rows)
        return rows
    raise ValueError(f"unknown subtree order {order!r}")


def enumerate_simplices(task: CensusTask) -> CensusResult:
    """Count isomorphism classes of nondegenerate integral ``d``-simplices.

    Raises ``BudgetExceeded`` (carrying the partial result) instead of
    returning a count that might be short.
    """
    t0 = time.time()
    n = task.dimension + 1
    deadline = t0 + task.seconds_budget
    exact = task.mode is Mode.EXACT_DIAMETER
    rows = _ordered(_first_rows(n, task.diameter), task.order)
    if task.jobs == 1 or len(rows) == 1:
        chunks = [rows]
    else:
        # round-robin keeps heavy and light subtrees mixed across workers
        k = min(task.jobs * 4, len(rows))
        chunks = [rows[c::k] for c in range(k)]
    args = [(n, task.diameter, exact, task.emit_representatives, c, task.node_budget, deadline) for c in chunks]
    if len(chunks) == 1:
        parts = [_run_chunk(args[0])]
    else:
        with ProcessPoolExecutor(max_workers=task.jobs) as pool:
            parts = list(pool.map(_run_chunk, args))

    stats = CensusStats()
    count = 0
    reps: list[SquaredDistanceMatrix] = []
    stopped = None
    for part in parts:
        count += part.count
        reps.extend(part.reps)
        stats.merge(part.stats)
        stopped = stopped or part.stopped
    if stopped is None and stats.nodes >= task.node_budget:
        stopped = "node budget"
    if task.emit_representatives:
        reps.sort(key=lambda r: r.upper())
    result = CensusResult(task, count, reps if task.emit_representatives else None, stats,
                          time.time() - t0, complete=stopped is None)
    if stopped is not None:
        raise BudgetExceeded(result, stopped)
    return result


def default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV)
    if not raw:
        return 1
    try:
        jobs = int(raw)
    except ValueError:
        jobs = 0
    if jobs < 1:
        raise ValueError(f"{JOBS_ENV} must be a positive integer")
    return jobs


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------

CSV_HEADER = "dimension,diameter,count,nodes,seconds"


@dataclass
class CensusTable:
    dimensions: list[int]
    diameters: list[int]
    cells: dict[tuple[int, int], CensusResult]
    over_budget: dict[tuple[int, int], str]

    def count(self, dim: int, diameter: int) -> Optional[int]:
        cell = self.cells.get((dim, diameter))
        return None if cell is None else cell.count

    def grid(self) -> list[list[Optional[int]]]:
        """Rows are diameters, columns are dimensions."""
        return [[self.count(d, D) for d in self.dimensions] for D in self.diameters]

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for D in self.diameters:
            for d in self.dimensions:
                cell = self.cells.get((d, D))
                if cell is None:
                    lines.append(f"{d},{D},,,")
                else:
                    lines.append(f"{d},{D},{cell.count},{cell.stats.nodes},{cell.seconds:.3f}")
        return "\n".join(lines) + "\n"

    def to_grid_csv(self) -> str:
        lines = ["diameter," + ",".join(f"d={d}" for d in self.dimensions)]
        for D, row in zip(self.diameters, self.grid()):
            lines.append(f"{D}," + ",".join("" if c is None else str(c) for c in row))
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        head = ["diameter"] + [f"d={d}" for d in self.dimensions]
        body = [[str(D)] + ["—" if c is None else str(c) for c in row]
                for D, row in zip(self.diameters, self.grid())]
        widths = [max(len(r[k]) for r in [head] + body) for k in range(len(head))]
        out = ["  ".join(s.rjust(w) for s, w in zip(r, widths)) for r in [head] + body]
        for (d, D), reason in sorted(self.over_budget.items()):
            out.append(f"— d={d} D={D}: {reason}")
        return "\n".join(out) + "\n"


def census_table(dimensions: Sequence[int], diameters: Sequence[int], *,
                 mode: Mode = Mode.EXACT_DIAMETER, jobs: int = 1,
                 node_budget: int = DEFAULT_NODE_BUDGET,
                 seconds_budget: float = DEFAULT_SECONDS_BUDGET) -> CensusTable:
    cells: dict[tuple[int, int], CensusResult] = {}
    over: dict[tuple[int, int], str] = {}
    for D in diameters:
        for d in dimensions:
            task = CensusTask(d, D, mode, jobs=jobs, node_budget=node_budget, seconds_budget=seconds_budget)
            try:
                cells[(d, D)] = enumerate_simplices(task)
            except BudgetExceeded as exc:
                over[(d, D)] = f"{exc.reason} exceeded (budget {node_budget} nodes / {seconds_budget:g} s)"
    return CensusTable(list(dimensions), list(diameters), cells, over)


def with_jobs(task: CensusTask, jobs: int) -> CensusTask:
    return replace(task, jobs=jobs)
