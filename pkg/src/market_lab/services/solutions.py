"""
Exact enumeration of the 0-1 solutions of ``A x > 0, B x = b``.

Small systems are enumerated densely with numpy, in blocks of 2**16 assignments. Larger
ones go through a depth-first search that propagates row bounds: every row keeps the
lowest and highest value its unassigned variables can still reach, and a row whose bound
meets its right-hand side forces all of its open variables. Variables that occur in no
row are not branched on when only counts are needed; their contribution to the target
is added combinatorially.
"""

from collections.abc import Iterator, Mapping
from math import comb

import numpy as np

from market_lab.config.settings import LabSettings, get_lab_settings
from market_lab.exceptions import EnumerationCapError
from market_lab.models.system import LinearSystem, Row, SolutionTally
from market_lab.utils.logging import get_market_lab_logger

logger = get_market_lab_logger("services.solutions")

DENSE_BLOCK = 1 << 16


def _check_fixed(system: LinearSystem, fixed: Mapping[int, int] | None) -> dict[int, int]:
    fixed = dict(fixed or {})
    for column, value in fixed.items():
        if not 0 <= column < system.columns:
            raise ValueError(f"fixed column {column} outside 0..{system.columns - 1}")
        if value not in (0, 1):
            raise ValueError(f"fixed column {column} must be 0 or 1, got {value}")
    return fixed


def _dense_blocks(system: LinearSystem, fixed: dict[int, int]) -> Iterator[np.ndarray]:
    """Yield blocks of satisfying assignments, one row per solution."""
    free = [column for column in range(system.columns) if column not in fixed]
    a, b_matrix, b = system.a_matrix(), system.b_matrix(), system.b_vector()
    shifts = np.arange(len(free), dtype=np.int64)
    total = 1 << len(free)

    for start in range(0, total, DENSE_BLOCK):
        index = np.arange(start, min(start + DENSE_BLOCK, total), dtype=np.int64)
        block = np.empty((len(index), system.columns), dtype=np.int64)
        block[:, free] = (index[:, None] >> shifts) & 1
        for column, value in fixed.items():
            block[:, column] = value
        keep = np.ones(len(index), dtype=bool)
        if len(a):
            keep &= np.all(block @ a.T > 0, axis=1)
        if len(b_matrix):
            keep &= np.all(block @ b_matrix.T == b, axis=1)
        yield block[keep]


class _PropagatingSearch:
    """Depth-first search over 0-1 assignments with bound propagation and an undo trail."""

    def __init__(self, system: LinearSystem, fixed: dict[int, int], budget: int):
        self.columns = system.columns
        self.budget = budget
        self.nodes = 0

        # Each row needs low <= row . x <= high; A rows have no upper bound
        rows: list[tuple[Row, int, int | None]] = [(row, 1, None) for row in system.A]
        rows += [(row, rhs, rhs) for row, rhs in zip(system.B, system.b, strict=True)]
        self.terms = [[(j, a) for j, a in enumerate(row) if a] for row, _, _ in rows]
        self.need_low = [low for _, low, _ in rows]
        self.need_high = [high for _, _, high in rows]
        self.lo = [sum(min(0, a) for _, a in terms) for terms in self.terms]
        self.hi = [sum(max(0, a) for _, a in terms) for terms in self.terms]

        self.occurs: list[list[tuple[int, int]]] = [[] for _ in range(self.columns)]
        for index, terms in enumerate(self.terms):
            for j, a in terms:
                self.occurs[j].append((index, a))

        # Branch on constrained columns first; the rest are free
        unconstrained = [j for j in range(self.columns) if not self.occurs[j]]
        constrained = [j for j in range(self.columns) if self.occurs[j]]
        self.order = constrained + unconstrained
        self.constrained_count = len(constrained)

        self.value = [-1] * self.columns
        self.trail: list[int] = []
        self.consistent = True
        queue = list(range(len(self.terms)))
        for column, value in fixed.items():
            self._assign(column, value, queue)
        self.consistent = self._propagate(queue)

    def _assign(self, var: int, value: int, queue: list[int]) -> None:
        self.value[var] = value
        self.trail.append(var)
        for index, a in self.occurs[var]:
            self.lo[index] += a * value - min(0, a)
            self.hi[index] += a * value - max(0, a)
            queue.append(index)

    def _undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            var = self.trail.pop()
            value = self.value[var]
            for index, a in self.occurs[var]:
                self.lo[index] -= a * value - min(0, a)
                self.hi[index] -= a * value - max(0, a)
            self.value[var] = -1

    def _propagate(self, queue: list[int]) -> bool:
        while queue:
            index = queue.pop()
            lo, hi = self.lo[index], self.hi[index]
            low, high = self.need_low[index], self.need_high[index]
            if hi < low or (high is not None and lo > high):
                return False
            if hi == low:
                to_max = True
            elif high is not None and lo == high:
                to_max = False
            else:
                continue
            for var, a in self.terms[index]:
                if self.value[var] < 0:
                    self._assign(var, int((a > 0) == to_max), queue)
        return True

    def _next_open(self, position: int, stop: int) -> int | None:
        while position < stop:
            if self.value[self.order[position]] < 0:
                return position
            position += 1
        return None

    def leaves(self, stop: int) -> Iterator[None]:
        """
        Visit every consistent assignment of the first ``stop`` variables in search order.

        The search state holds the assignment while the generator is suspended.

        Raises:
            EnumerationCapError: If more than ``budget`` values are tried
        """
        if not self.consistent:
            return
        stack: list[list[int]] = []
        position = self._next_open(0, stop)
        while True:
            if position is None:
                yield
            else:
                stack.append([position, len(self.trail), 0])

            while stack:
                frame = stack[-1]
                position, mark, value = frame
                self._undo(mark)
                if value > 1:
                    stack.pop()
                    continue
                frame[2] = value + 1
                self.nodes += 1
                if self.nodes > self.budget:
                    raise EnumerationCapError("search", self.nodes, self.budget)
                queue: list[int] = []
                self._assign(self.order[position], value, queue)
                if self._propagate(queue):
                    position = self._next_open(position + 1, stop)
                    break
            else:
                return

    def assignment(self) -> tuple[int, ...]:
        return tuple(self.value)


def _residual_offsets(target: Row, open_columns: list[int]) -> dict[int, int]:
    """Number of completions of ``open_columns`` for every value of their target contribution."""
    plus = sum(1 for j in open_columns if target[j] > 0)
    minus = sum(1 for j in open_columns if target[j] < 0)
    neutral = len(open_columns) - plus - minus
    offsets: dict[int, int] = {}
    for i in range(plus + 1):
        for j in range(minus + 1):
            offsets[i - j] = offsets.get(i - j, 0) + comb(plus, i) * comb(minus, j) * 2**neutral
    return offsets


def use_dense(
    system: LinearSystem, fixed: Mapping[int, int] | None = None, settings: LabSettings | None = None
) -> bool:
    """Whether the free columns are few enough for dense enumeration."""
    settings = settings or get_lab_settings()
    return system.columns - len(fixed or {}) <= settings.dense_enumeration_max_columns


def tally_solutions(
    system: LinearSystem,
    fixed: Mapping[int, int] | None = None,
    target: Row | None = None,
    limit: int | None = None,
    settings: LabSettings | None = None,
) -> SolutionTally:
    """
    Count the 0-1 solutions of a system and split them by the sign of ``target . x``.

    Args:
        system: Constraints to satisfy
        fixed: Column values to hold fixed
        target: Row whose sign classifies each solution (defaults to ``system.c``)
        limit: Stop once this many solutions are counted; the tally is then partial
        settings: Resource caps (defaults to the cached lab settings)

    Returns:
        Totals by sign; ``total == up + down + flat``

    Raises:
        EnumerationCapError: If the search exceeds its node budget
    """
    settings = settings or get_lab_settings()
    fixed = _check_fixed(system, fixed)
    target = system.c if target is None else target
    if len(target) != system.columns:
        raise ValueError(f"target row has {len(target)} entries for {system.columns} columns")

    up = down = flat = 0
    if use_dense(system, fixed, settings):
        target_vector = np.array(target, dtype=np.int64)
        for block in _dense_blocks(system, fixed):
            values = block @ target_vector
            up += int(np.count_nonzero(values > 0))
            down += int(np.count_nonzero(values < 0))
            flat += int(np.count_nonzero(values == 0))
            if limit is not None and up + down + flat >= limit:
                break
        return SolutionTally(total=up + down + flat, up=up, down=down, flat=flat)

    search = _PropagatingSearch(system, fixed, settings.search_node_budget)
    open_columns = [j for j in search.order[search.constrained_count :] if j not in fixed]
    offsets = _residual_offsets(target, open_columns)
    for _ in search.leaves(search.constrained_count):
        partial = sum(a * search.value[j] for j, a in enumerate(target) if a and search.value[j] >= 0)
        for offset, count in offsets.items():
            value = partial + offset
            if value > 0:
                up += count
            elif value < 0:
                down += count
            else:
                flat += count
        if limit is not None and up + down + flat >= limit:
            break
    logger.debug(f"Search visited {search.nodes} nodes over {system.columns} columns")
    return SolutionTally(total=up + down + flat, up=up, down=down, flat=flat)


def count_solutions(
    system: LinearSystem,
    fixed: Mapping[int, int] | None = None,
    limit: int | None = None,
    settings: LabSettings | None = None,
) -> int:
    """Exact number of 0-1 solutions, or at least ``limit`` when the count reaches it."""
    return tally_solutions(system, fixed=fixed, limit=limit, settings=settings).total


def find_solutions(
    system: LinearSystem,
    fixed: Mapping[int, int] | None = None,
    limit: int | None = None,
    settings: LabSettings | None = None,
) -> list[tuple[int, ...]]:
    """
    List 0-1 solutions, at most ``limit`` of them.

    Raises:
        EnumerationCapError: If the search exceeds its node budget
    """
    settings = settings or get_lab_settings()
    fixed = _check_fixed(system, fixed)
    found: list[tuple[int, ...]] = []

    if use_dense(system, fixed, settings):
        for block in _dense_blocks(system, fixed):
            found.extend(tuple(int(v) for v in row) for row in block)
            if limit is not None and len(found) >= limit:
                return found[:limit]
        return found

    search = _PropagatingSearch(system, fixed, settings.search_node_budget)
    for _ in search.leaves(system.columns):
        found.append(search.assignment())
        if limit is not None and len(found) >= limit:
            break
    return found
