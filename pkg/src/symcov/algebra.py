"""Interval arithmetic in center/range form.

The operations are the classical ones for closed real intervals: ranges add
under both sum and difference, and scaling by w multiplies the range by |w|.
All four operations are exact in the (center, range) parameterization; no
outward rounding is applied.

Multiplication of two intervals is deliberately not provided: nothing in
this package needs interval products, and their semantics would be invented.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

from .intervals import Interval


@dataclass(frozen=True)
class AffineSpec:
    """A map x -> scale*x + offset applied to an interval variable."""

    scale: float
    offset: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.scale) and math.isfinite(self.offset)):
            raise ValueError(f"affine coefficients must be finite, got {self}")


def add(x: Interval, y: Interval) -> Interval:
    """Sum of intervals: centers add, ranges add."""
    return Interval(center=x.center + y.center, range=x.range + y.range)


def sub(x: Interval, y: Interval) -> Interval:
    """Difference of intervals: centers subtract, ranges still add.

    Note x - x is not the zero interval unless x is degenerate.
    """
    return Interval(center=x.center - y.center, range=x.range + y.range)


def affine(x: Interval, t: AffineSpec) -> Interval:
    """scale*x + offset: center maps affinely, range scales by |scale|."""
    return Interval(center=t.scale * x.center + t.offset, range=abs(t.scale) * x.range)


def lincomb2(w1: float, x1: Interval, w2: float, x2: Interval) -> Interval:
    """w1*x1 + w2*x2; specializes to add (1, 1) and sub (1, -1)."""
    if not (math.isfinite(w1) and math.isfinite(w2)):
        raise ValueError("linear combination weights must be finite")
    return Interval(
        center=w1 * x1.center + w2 * x2.center,
        range=abs(w1) * x1.range + abs(w2) * x2.range,
    )
