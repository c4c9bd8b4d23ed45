"""The interval partition induced by an automaton's guard constants.

Constants 0 = c0 < c1 < ... < ck split the non-negative reals into 2k+2
pieces that alternate between singleton points and open gaps:

    [c0,c0], (c0,c1), [c1,c1], ..., [ck,ck], (ck,oo)

Every guard built from those constants is constant on each piece, which is
what lets the monitor precompute one successor table per piece and letter.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .automata import AutomatonError, Rat


@dataclass(frozen=True)
class Interval:
    """A point [c,c], a bounded gap (a,b), or the unbounded tail (c,oo)."""

    lower: Rat
    upper: Optional[Rat]
    is_point: bool

    def contains(self, value: Rat) -> bool:
        if self.is_point:
            return value == self.lower
        if value <= self.lower:
            return False
        return self.upper is None or value < self.upper

    def midpoint(self) -> Rat:
        """Some value inside the interval, used to sample interval-constant guards."""
        if self.is_point:
            return self.lower
        if self.upper is None:
            return self.lower + 1
        return (self.lower + self.upper) / 2

    def __str__(self) -> str:
        if self.is_point:
            return f"[{self.lower},{self.lower}]"
        if self.upper is None:
            return f"({self.lower},oo)"
        return f"({self.lower},{self.upper})"


@dataclass(frozen=True)
class IntervalPartition:
    constants: tuple[Rat, ...]
    intervals: tuple[Interval, ...]

    def __len__(self) -> int:
        return len(self.intervals)

    def index_of(self, value: Rat) -> int:
        return interval_index(self, value)


def build_partition(constants: Sequence[Rat]) -> IntervalPartition:
    """Build the 2k+2 alternating point/gap intervals for sorted constants.

    The constant list must be strictly increasing and start at 0, as produced
    by collect_constants.
    """
    consts = tuple(Fraction(c) for c in constants)
    if not consts:
        raise AutomatonError("empty constant list")
    if consts[0] != 0:
        raise AutomatonError("constant list must start at 0")
    for a, b in zip(consts, consts[1:]):
        if a >= b:
            raise AutomatonError("constants must be strictly increasing")
    pieces: list[Interval] = []
    for i, c in enumerate(consts):
        pieces.append(Interval(c, c, True))
        if i + 1 < len(consts):
            pieces.append(Interval(c, consts[i + 1], False))
        else:
            pieces.append(Interval(c, None, False))
    return IntervalPartition(consts, tuple(pieces))


def interval_index(partition: IntervalPartition, value: Rat) -> int:
    """Index of the unique interval containing a non-negative value."""
    if value < 0:
        raise AutomatonError(f"clock value {value} is negative")
    consts = partition.constants
    i = bisect_right(consts, value) - 1
    if consts[i] == value:
        return 2 * i
    return 2 * i + 1
