"""Streaming acceptance monitor for one-clock timed automata.

The monitor answers "does the automaton accept the stream read so far" after
every element, in amortised constant time per element for a fixed automaton.
It keeps one InnerStructure per interval of the guard partition; the set of
stored (state, value) pairs across all structures is exactly the set of
configurations the automaton can be in.  Time spans advance each structure's
own clock and migrate values that crossed into a new interval; letters are
applied through successor tables precomputed per (interval, letter), so guard
evaluation never happens on the hot path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .automata import (
    AutomatonError,
    Rat,
    StreamElement,
    StreamError,
    TimedAutomaton,
    bind,
    collect_constants,
    complete_with_sink,
    eval_condition,
)
from .inner import InnerStructure, OpCounters
from .intervals import build_partition, interval_index

MAX_TABLE_STATES = 16
"""Successor tables hold one entry per state subset, so 2**n of them."""


class UnsupportedAutomaton(AutomatonError):
    """The fast monitor cannot handle this automaton; the oracle still can."""


@dataclass(frozen=True)
class Verdict:
    step: int
    accepted: bool


def _subset_closure(per_state: list[int], size: int) -> list[int]:
    """Extend a per-state successor map to all subsets by union."""
    table = [0] * (1 << size)
    for mask in range(1, 1 << size):
        low_index = (mask & -mask).bit_length() - 1
        table[mask] = table[mask & (mask - 1)] | per_state[low_index]
    return table


class Monitor:
    """Incremental acceptance monitor; one instance per stream."""

    def __init__(self, automaton: TimedAutomaton,
                 bindings: Optional[Mapping[str, Rat]] = None,
                 counters: Optional[OpCounters] = None) -> None:
        if not automaton.single_clock():
            raise UnsupportedAutomaton(
                f"monitor needs exactly one clock, got {len(automaton.clocks)}")
        completed = complete_with_sink(automaton)
        bound = bind(completed, bindings or {})
        if len(bound.states) > MAX_TABLE_STATES:
            raise UnsupportedAutomaton(
                f"{len(bound.states)} states after completion exceeds the "
                f"table limit of {MAX_TABLE_STATES}")
        self.automaton = bound
        self.state_index = {q: i for i, q in enumerate(bound.states)}
        self.final_mask = 0
        for q in bound.final:
            self.final_mask |= 1 << self.state_index[q]
        self.partition = build_partition(collect_constants(bound))
        self.counters = counters if counters is not None else OpCounters()
        self._tables = self._build_tables()
        rank_limit = 1 << len(bound.states)
        self.inners = [InnerStructure(piece, rank_limit, self.counters)
                       for piece in self.partition.intervals]
        self.step = 0
        self.values_appeared = 0
        if bound.initial:
            zero = Fraction(0)
            for q in bound.initial:
                self.inners[0].insert(self.state_index[q], zero)
            self.values_appeared = 1

    def _build_tables(self) -> list[dict[str, tuple[list[int], list[int]]]]:
        """Per interval and letter: subset tables for non-resetting and
        resetting moves.  Guards are constant on each interval, so one sample
        point decides each transition."""
        aut = self.automaton
        clock = aut.clocks[0]
        size = len(aut.states)
        by_source: dict[tuple[str, str], list] = {}
        for tr in aut.transitions:
            by_source.setdefault((tr.source, tr.letter), []).append(tr)
        tables: list[dict[str, tuple[list[int], list[int]]]] = []
        for piece in self.partition.intervals:
            sample = {clock: piece.midpoint()}
            per_letter: dict[str, tuple[list[int], list[int]]] = {}
            for a in aut.alphabet:
                keep_one = [0] * size
                reset_one = [0] * size
                for q in aut.states:
                    qi = self.state_index[q]
                    for tr in by_source.get((q, a), ()):
                        if not eval_condition(tr.guard, sample):
                            continue
                        target_bit = 1 << self.state_index[tr.target]
                        if tr.resets:
                            reset_one[qi] |= target_bit
                        else:
                            keep_one[qi] |= target_bit
                per_letter[a] = (_subset_closure(keep_one, size),
                                 _subset_closure(reset_one, size))
            tables.append(per_letter)
        return tables

    # ----- monitoring interface ---------------------------------------

    def accepted(self) -> bool:
        final_mask = self.final_mask
        for inner in self.inners:
            if inner.accepted(final_mask):
                return True
        return False

    def read(self, element: StreamElement) -> Verdict:
        """Consume one stream element and report the verdict after it."""
        if isinstance(element, str):
            self._read_letter(element)
        elif isinstance(element, (int, Fraction)):
            self._read_span(Fraction(element))
        else:
            raise StreamError(f"not a stream element: {element!r}")
        self.step += 1
        return Verdict(self.step, self.accepted())

    def _read_span(self, span: Rat) -> None:
        if span <= 0:
            raise StreamError(f"time span must be positive, got {span}")
        inners = self.inners
        evictions = [inner.update_time(span) for inner in inners]
        partition = self.partition
        counters = self.counters
        # Re-insert top interval first and each list back to front: globally
        # non-increasing values, which is what insert's precondition needs.
        for i in range(len(inners) - 1, -1, -1):
            for state, value in reversed(evictions[i]):
                j = interval_index(partition, value)
                inners[j].insert(state, value)
                counters.migrations += 1

    def _read_letter(self, letter: str) -> None:
        if letter not in self.automaton.alphabet:
            raise StreamError(f"letter {letter!r} is not in the alphabet")
        reset_union = 0
        for inner, per_letter in zip(self.inners, self._tables):
            keep_table, reset_table = per_letter[letter]
            reset_union |= inner.update_letter(keep_table, reset_table)
        if reset_union:
            zero_store = self.inners[0]
            if zero_store.is_empty():
                self.values_appeared += 1
            zero = Fraction(0)
            mask = reset_union
            while mask:
                low = mask & -mask
                zero_store.insert(low.bit_length() - 1, zero)
                mask ^= low

    def run_stream(self, elements: Iterable[StreamElement]) -> list[Verdict]:
        """Verdict before any input plus one verdict per element."""
        verdicts = [Verdict(self.step, self.accepted())]
        for element in elements:
            verdicts.append(self.read(element))
        return verdicts

    # ----- inspection --------------------------------------------------

    def active_configurations(self) -> frozenset[tuple[str, Rat]]:
        """Every (state name, clock value) the automaton can currently be in."""
        out = set()
        states = self.automaton.states
        for inner in self.inners:
            for value, mask in inner.items():
                remaining = mask
                while remaining:
                    low = remaining & -remaining
                    out.add((states[low.bit_length() - 1], value))
                    remaining ^= low
        return frozenset(out)

    def check_invariants(self) -> list[str]:
        problems = []
        for i, inner in enumerate(self.inners):
            for problem in inner.check_invariants():
                problems.append(f"store {i}: {problem}")
        return problems
