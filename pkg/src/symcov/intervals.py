"""Interval-valued data containers and micro-to-macro aggregation.

An interval cell is stored canonically as (center, range): every downstream
statistic is written in that parameterization, and the limits [a, b] are
derived views with a = center - range/2 and b = center + range/2.

All containers are immutable after construction (arrays are marked
read-only), so values can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np


@dataclass(frozen=True)
class Interval:
    """One macro-data cell: a closed real interval in center/range form.

    ``range`` must be >= 0; a zero range models a conventional (point)
    value, which is legal everywhere.
    """

    center: float
    range: float

    def __post_init__(self):
        if not (math.isfinite(self.center) and math.isfinite(self.range)):
            raise ValueError(f"interval must be finite, got {self}")
        if self.range < 0:
            raise ValueError(f"interval range must be >= 0, got {self.range}")

    @property
    def lower(self) -> float:
        return self.center - self.range / 2

    @property
    def upper(self) -> float:
        return self.center + self.range / 2


def interval_from_limits(a: float, b: float) -> Interval:
    """Build an Interval from its limits; rejects a > b and non-finite input."""
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError(f"interval limits must be finite, got [{a}, {b}]")
    if a > b:
        raise ValueError(f"malformed interval: lower limit {a} > upper limit {b}")
    return Interval(center=(a + b) / 2, range=b - a)


def to_limits(x: Interval) -> tuple[float, float]:
    """Limits view (a, b) of an interval; inverse of interval_from_limits."""
    return (x.lower, x.upper)


def _frozen_f64(values, shape_hint: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True)
    if arr.ndim != 2:
        raise ValueError(f"{shape_hint} must be a 2-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class IntervalDataset:
    """Macro-data: n objects x p interval-valued variables.

    ``centers`` and ``ranges`` are (n, p) float arrays; object ids and
    variable names are unique. Construction validates every invariant and
    raises ValueError naming the first offending cell.
    """

    object_ids: tuple[str, ...]
    variable_names: tuple[str, ...]
    centers: np.ndarray = field(repr=False)
    ranges: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "object_ids", tuple(str(s) for s in self.object_ids))
        object.__setattr__(self, "variable_names", tuple(str(s) for s in self.variable_names))
        object.__setattr__(self, "centers", _frozen_f64(self.centers, "centers"))
        object.__setattr__(self, "ranges", _frozen_f64(self.ranges, "ranges"))
        validate_dataset(self)

    @property
    def n(self) -> int:
        return self.centers.shape[0]

    @property
    def p(self) -> int:
        return self.centers.shape[1]

    def cell(self, i: int, j: int) -> Interval:
        return Interval(center=float(self.centers[i, j]), range=float(self.ranges[i, j]))

    def limits(self) -> tuple[np.ndarray, np.ndarray]:
        """(lower, upper) matrices, each (n, p)."""
        half = self.ranges / 2
        return self.centers - half, self.centers + half

    @classmethod
    def from_limits(cls, object_ids, variable_names, lower, upper) -> "IntervalDataset":
        lo = np.asarray(lower, dtype=np.float64)
        up = np.asarray(upper, dtype=np.float64)
        if lo.shape != up.shape:
            raise ValueError(f"lower/upper shape mismatch: {lo.shape} vs {up.shape}")
        bad = np.argwhere(lo > up)
        if bad.size:
            i, j = bad[0]
            raise ValueError(
                f"malformed interval at cell ({i}, {j}): lower {lo[i, j]} > upper {up[i, j]}"
            )
        return cls(object_ids, variable_names, (lo + up) / 2, up - lo)

    @classmethod
    def from_cells(cls, object_ids, variable_names, cells) -> "IntervalDataset":
        """Build from a nested list of Interval, one row per object."""
        centers = [[c.center for c in row] for row in cells]
        ranges = [[c.range for c in row] for row in cells]
        return cls(object_ids, variable_names, centers, ranges)


def validate_dataset(d: IntervalDataset) -> None:
    """Check every IntervalDataset invariant; raise naming the first violation."""
    n, p = d.centers.shape
    if n < 1 or p < 1:
        raise ValueError(f"dataset must have n >= 1 and p >= 1, got shape ({n}, {p})")
    if d.ranges.shape != (n, p):
        raise ValueError(f"ragged data: centers {d.centers.shape} vs ranges {d.ranges.shape}")
    if len(d.object_ids) != n:
        raise ValueError(f"{len(d.object_ids)} object ids for {n} rows")
    if len(d.variable_names) != p:
        raise ValueError(f"{len(d.variable_names)} variable names for {p} columns")
    dup = _first_duplicate(d.object_ids)
    if dup is not None:
        raise ValueError(f"duplicate object id {dup!r}")
    dup = _first_duplicate(d.variable_names)
    if dup is not None:
        raise ValueError(f"duplicate variable name {dup!r}")
    bad = np.argwhere(~np.isfinite(d.centers) | ~np.isfinite(d.ranges))
    if bad.size:
        i, j = bad[0]
        raise ValueError(f"non-finite entry at cell ({i}, {j})")
    bad = np.argwhere(d.ranges < 0)
    if bad.size:
        i, j = bad[0]
        raise ValueError(f"negative range {d.ranges[bad[0][0], bad[0][1]]} at cell ({i}, {j})")


def _first_duplicate(items) -> str | None:
    seen = set()
    for s in items:
        if s in seen:
            return s
        seen.add(s)
    return None


@dataclass(frozen=True)
class MicroTable:
    """Micro-data: m individual observations, each tagged with a group id.

    Rows of the same group will be aggregated into one macro object; group
    ids may repeat (and usually do). All values must be finite.
    """

    group_ids: tuple[str, ...]
    variable_names: tuple[str, ...]
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "group_ids", tuple(str(s) for s in self.group_ids))
        object.__setattr__(self, "variable_names", tuple(str(s) for s in self.variable_names))
        object.__setattr__(self, "values", _frozen_f64(self.values, "values"))
        m, p = self.values.shape
        if m < 1 or p < 1:
            raise ValueError(f"micro table must be non-empty, got shape ({m}, {p})")
        if len(self.group_ids) != m:
            raise ValueError(f"{len(self.group_ids)} group ids for {m} rows")
        if len(self.variable_names) != p:
            raise ValueError(f"{len(self.variable_names)} variable names for {p} columns")
        if _first_duplicate(self.variable_names) is not None:
            raise ValueError("duplicate variable name in micro table")
        bad = np.argwhere(~np.isfinite(self.values))
        if bad.size:
            i, j = bad[0]
            raise ValueError(f"non-finite micro value at cell ({i}, {j})")

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    def group_order(self) -> tuple[str, ...]:
        """Distinct group ids in order of first appearance."""
        return tuple(dict.fromkeys(self.group_ids))

    def group_rows(self) -> dict[str, np.ndarray]:
        """Row indices per group id, preserving first-appearance order."""
        rows: dict[str, list[int]] = {}
        for i, g in enumerate(self.group_ids):
            rows.setdefault(g, []).append(i)
        return {g: np.asarray(ix, dtype=np.intp) for g, ix in rows.items()}


def aggregate_microdata(micro: MicroTable) -> IntervalDataset:
    """Collapse micro rows into per-group [min, max] intervals.

    Output objects follow the groups' first appearance in the input; a
    single-row group yields zero-range intervals.

    The canonical (center, range) storage cannot always reproduce the raw
    extrema bitwise, so the half-range is widened by the last-ulp rounding
    slack where needed: the derived limits are guaranteed to contain every
    micro value of the group (closed-interval membership, exact), at the
    cost of at most a couple of ulps of outward slack.
    """
    groups = micro.group_rows()
    mn = np.empty((len(groups), micro.p))
    mx = np.empty((len(groups), micro.p))
    for gi, (g, rows) in enumerate(groups.items()):
        block = micro.values[rows]
        mn[gi] = block.min(axis=0)
        mx[gi] = block.max(axis=0)
    centers = (mn + mx) / 2
    half = np.maximum(np.maximum(mx - centers, centers - mn), 0.0)
    bad = (centers - half > mn) | (centers + half < mx)
    while bad.any():
        shortfall = np.maximum((centers - half) - mn, mx - (centers + half))[bad]
        widened = np.maximum(half[bad] + shortfall, np.nextafter(half[bad], np.inf))
        half[bad] = widened
        bad = (centers - half > mn) | (centers + half < mx)
    return IntervalDataset(list(groups), micro.variable_names, centers, 2.0 * half)
