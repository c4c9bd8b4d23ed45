"""Brute-force reference simulator.

Tracks the full set of reachable configurations explicitly, one (state,
valuation) pair at a time, with exact rational clocks and set-based
deduplication.  Slow by design and independent of the monitor's data
structures, which is what makes it a trustworthy differential oracle.  Works
for any number of clocks.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .automata import (
    BindingError,
    Rat,
    StreamElement,
    StreamError,
    TimedAutomaton,
    bind,
    eval_condition,
)
from .monitor import Verdict

Config = tuple[str, tuple[Rat, ...]]
"""A state name and one value per clock, in the automaton's clock order."""

ConfigSet = frozenset[Config]


def oracle_init(aut: TimedAutomaton, bindings: Optional[Mapping[str, Rat]] = None) -> ConfigSet:
    """Initial configurations: every initial state with all clocks at zero."""
    bind(aut, bindings or {})
    zeros = tuple(Fraction(0) for _ in aut.clocks)
    return frozenset((q, zeros) for q in aut.initial)


def oracle_read(aut: TimedAutomaton, configs: ConfigSet, element: StreamElement) -> ConfigSet:
    """One step of the explicit simulation; input set is left untouched.

    The automaton must already be bound (no parameters left).
    """
    if aut.params:
        raise BindingError(f"automaton still has parameters {aut.params}")
    if isinstance(element, (int, Fraction)):
        span = Fraction(element)
        if span <= 0:
            raise StreamError(f"time span must be positive, got {span}")
        return frozenset(
            (q, tuple(v + span for v in vals)) for q, vals in configs)
    if not isinstance(element, str):
        raise StreamError(f"not a stream element: {element!r}")
    if element not in aut.alphabet:
        raise StreamError(f"letter {element!r} is not in the alphabet")
    clocks = aut.clocks
    out = set()
    for q, vals in configs:
        valuation = dict(zip(clocks, vals))
        for tr in aut.transitions:
            if tr.source != q or tr.letter != element:
                continue
            if not eval_condition(tr.guard, valuation):
                continue
            new_vals = tuple(
                Fraction(0) if c in tr.resets else v
                for c, v in zip(clocks, vals))
            out.add((tr.target, new_vals))
    return frozenset(out)


def oracle_accepted(configs: ConfigSet, final: frozenset[str]) -> bool:
    return any(q in final for q, _ in configs)


class NaiveMonitor:
    """Oracle wrapped in the monitor's read/accepted interface.

    Keeps a per-(state, letter) transition index so long differential runs
    stay bearable; the semantics is exactly the pure functions above.
    """

    def __init__(self, automaton: TimedAutomaton,
                 bindings: Optional[Mapping[str, Rat]] = None) -> None:
        self.automaton = bind(automaton, bindings or {})
        self._by_source: dict[tuple[str, str], list] = {}
        for tr in self.automaton.transitions:
            self._by_source.setdefault((tr.source, tr.letter), []).append(tr)
        zeros = tuple(Fraction(0) for _ in self.automaton.clocks)
        self.configs: set[Config] = {(q, zeros) for q in self.automaton.initial}
        self.step = 0

    def accepted(self) -> bool:
        final = self.automaton.final
        return any(q in final for q, _ in self.configs)

    def read(self, element: StreamElement) -> Verdict:
        if isinstance(element, str):
            if element not in self.automaton.alphabet:
                raise StreamError(f"letter {element!r} is not in the alphabet")
            clocks = self.automaton.clocks
            out: set[Config] = set()
            for q, vals in self.configs:
                valuation = dict(zip(clocks, vals))
                for tr in self._by_source.get((q, element), ()):
                    if eval_condition(tr.guard, valuation):
                        out.add((tr.target, tuple(
                            Fraction(0) if c in tr.resets else v
                            for c, v in zip(clocks, vals))))
            self.configs = out
        elif isinstance(element, (int, Fraction)):
            span = Fraction(element)
            if span <= 0:
                raise StreamError(f"time span must be positive, got {span}")
            self.configs = {
                (q, tuple(v + span for v in vals)) for q, vals in self.configs}
        else:
            raise StreamError(f"not a stream element: {element!r}")
        self.step += 1
        return Verdict(self.step, self.accepted())

    def run_stream(self, elements: Iterable[StreamElement]) -> list[Verdict]:
        verdicts = [Verdict(self.step, self.accepted())]
        for element in elements:
            verdicts.append(self.read(element))
        return verdicts
