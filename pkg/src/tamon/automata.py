"""Timed automata over exact rational clocks.

A timed automaton here is a finite automaton whose transitions carry clock
guards and reset sets.  Words interleave letters with positive rational time
spans; spans advance every clock, letters fire guarded transitions.  All
arithmetic is exact (`fractions.Fraction`), so guard comparisons never suffer
rounding.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Union

Rat = Fraction

StreamElement = Union[str, Fraction]
"""One element of a timed word: a letter token or a positive time span."""


class AutomatonError(ValueError):
    """A structurally invalid automaton, guard, or constant."""


class GuardError(AutomatonError):
    """A guard mentions a clock or parameter that is not bound."""


class BindingError(AutomatonError):
    """A parameter binding is missing, unknown at bind time, or negative."""


class StreamError(ValueError):
    """A stream element the automaton cannot consume."""


@dataclass(frozen=True)
class TrueCond:
    """The guard that always holds."""

    def __str__(self) -> str:
        return "true"


@dataclass(frozen=True)
class Atom:
    """Compare a sum of clocks against a bound: x < c, x > c, x = c, x+y = c.

    ``clocks`` holds one name for a plain atom and several for an additive
    atom.  ``bound`` is either a literal non-negative rational or the name of
    a parameter to be bound before evaluation.
    """

    clocks: tuple[str, ...]
    op: str
    bound: Union[Rat, str]

    def __post_init__(self) -> None:
        if not self.clocks:
            raise AutomatonError("atom with no clocks")
        if self.op not in ("<", ">", "="):
            raise AutomatonError(f"bad comparison operator {self.op!r}")
        if isinstance(self.bound, Fraction) and self.bound < 0:
            raise AutomatonError(f"negative constant {self.bound} in guard")

    def __str__(self) -> str:
        return f"{'+'.join(self.clocks)}{self.op}{self.bound}"


@dataclass(frozen=True)
class And:
    left: "Condition"
    right: "Condition"

    def __str__(self) -> str:
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Or:
    left: "Condition"
    right: "Condition"

    def __str__(self) -> str:
        return f"({self.left} | {self.right})"


Condition = Union[TrueCond, Atom, And, Or]

TRUE = TrueCond()


def eval_condition(cond: Condition, valuation: Mapping[str, Rat]) -> bool:
    """Evaluate a guard under a clock valuation.

    Raises GuardError if the guard mentions a clock missing from the
    valuation or a parameter that was never bound to a constant.
    """
    if isinstance(cond, TrueCond):
        return True
    if isinstance(cond, Atom):
        if isinstance(cond.bound, str):
            raise GuardError(f"parameter {cond.bound!r} is not bound")
        total = Fraction(0)
        for clock in cond.clocks:
            try:
                total += valuation[clock]
            except KeyError:
                raise GuardError(f"clock {clock!r} is not bound") from None
        if cond.op == "<":
            return total < cond.bound
        if cond.op == ">":
            return total > cond.bound
        return total == cond.bound
    if isinstance(cond, And):
        return eval_condition(cond.left, valuation) and eval_condition(cond.right, valuation)
    if isinstance(cond, Or):
        return eval_condition(cond.left, valuation) or eval_condition(cond.right, valuation)
    raise AutomatonError(f"not a condition: {cond!r}")


def negate_condition(cond: Condition) -> Optional[Condition]:
    """Negation within the guard grammar; None encodes the unsatisfiable guard."""
    if isinstance(cond, TrueCond):
        return None
    if isinstance(cond, Atom):
        if cond.op == "<":
            return Or(Atom(cond.clocks, ">", cond.bound), Atom(cond.clocks, "=", cond.bound))
        if cond.op == ">":
            return Or(Atom(cond.clocks, "<", cond.bound), Atom(cond.clocks, "=", cond.bound))
        return Or(Atom(cond.clocks, "<", cond.bound), Atom(cond.clocks, ">", cond.bound))
    if isinstance(cond, And):
        left = negate_condition(cond.left)
        right = negate_condition(cond.right)
        if left is None:
            return right
        if right is None:
            return left
        return Or(left, right)
    if isinstance(cond, Or):
        left = negate_condition(cond.left)
        right = negate_condition(cond.right)
        if left is None or right is None:
            return None
        return And(left, right)
    raise AutomatonError(f"not a condition: {cond!r}")


def condition_clocks(cond: Condition) -> frozenset[str]:
    if isinstance(cond, TrueCond):
        return frozenset()
    if isinstance(cond, Atom):
        return frozenset(cond.clocks)
    return condition_clocks(cond.left) | condition_clocks(cond.right)


def condition_atoms(cond: Condition) -> Iterator[Atom]:
    if isinstance(cond, Atom):
        yield cond
    elif isinstance(cond, (And, Or)):
        yield from condition_atoms(cond.left)
        yield from condition_atoms(cond.right)


def _map_bounds(cond: Condition, mapper) -> Condition:
    if isinstance(cond, TrueCond):
        return cond
    if isinstance(cond, Atom):
        return Atom(cond.clocks, cond.op, mapper(cond.bound))
    if isinstance(cond, And):
        return And(_map_bounds(cond.left, mapper), _map_bounds(cond.right, mapper))
    return Or(_map_bounds(cond.left, mapper), _map_bounds(cond.right, mapper))


def is_valid_letter(token: str) -> bool:
    return bool(token) and not any(ch.isspace() for ch in token)


@dataclass(frozen=True)
class Transition:
    source: str
    letter: str
    guard: Condition
    target: str
    resets: frozenset[str] = frozenset()


@dataclass(frozen=True)
class TimedAutomaton:
    """An immutable timed automaton, possibly with named guard parameters.

    ``sink`` names the absorbing reject state added by completion, or None if
    the automaton has not been completed.
    """

    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    clocks: tuple[str, ...]
    initial: frozenset[str]
    final: frozenset[str]
    transitions: tuple[Transition, ...]
    params: tuple[str, ...] = ()
    sink: Optional[str] = None

    def __post_init__(self) -> None:
        state_set = set(self.states)
        if len(state_set) != len(self.states):
            raise AutomatonError("duplicate state names")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise AutomatonError("duplicate letters")
        if len(set(self.clocks)) != len(self.clocks):
            raise AutomatonError("duplicate clock names")
        if len(set(self.params)) != len(self.params):
            raise AutomatonError("duplicate parameter names")
        for a in self.alphabet:
            if not is_valid_letter(a):
                raise AutomatonError(f"bad letter token {a!r}")
        overlap = set(self.params) & set(self.clocks)
        if overlap:
            raise AutomatonError(f"names used as both clock and parameter: {sorted(overlap)}")
        if not self.initial <= state_set:
            raise AutomatonError("initial states not a subset of states")
        if not self.final <= state_set:
            raise AutomatonError("final states not a subset of states")
        if self.sink is not None and self.sink not in state_set:
            raise AutomatonError(f"sink {self.sink!r} is not a state")
        clock_set = set(self.clocks)
        param_set = set(self.params)
        for tr in self.transitions:
            if tr.source not in state_set or tr.target not in state_set:
                raise AutomatonError(f"transition endpoint not a state: {tr.source!r} -> {tr.target!r}")
            if tr.letter not in self.alphabet:
                raise AutomatonError(f"transition letter {tr.letter!r} not in alphabet")
            if not tr.resets <= clock_set:
                raise AutomatonError(f"reset of unknown clock in {sorted(tr.resets)}")
            if not condition_clocks(tr.guard) <= clock_set:
                missing = sorted(condition_clocks(tr.guard) - clock_set)
                raise AutomatonError(f"guard mentions unknown clocks {missing}")
            for atom in condition_atoms(tr.guard):
                if isinstance(atom.bound, str) and atom.bound not in param_set:
                    raise AutomatonError(f"guard mentions undeclared parameter {atom.bound!r}")

    def single_clock(self) -> bool:
        return len(self.clocks) == 1

    def transitions_from(self, state: str, letter: str) -> list[Transition]:
        return [t for t in self.transitions if t.source == state and t.letter == letter]


def bind(aut: TimedAutomaton, bindings: Mapping[str, Rat]) -> TimedAutomaton:
    """Substitute constants for every parameter; the result has no parameters.

    Unknown binding names are ignored.  A missing or negative binding raises
    BindingError.
    """
    if not aut.params:
        return aut
    values: dict[str, Rat] = {}
    for name in aut.params:
        if name not in bindings:
            raise BindingError(f"no binding for parameter {name!r}")
        value = Fraction(bindings[name])
        if value < 0:
            raise BindingError(f"parameter {name!r} bound to negative constant {value}")
        values[name] = value

    def substitute(bound):
        if isinstance(bound, str):
            return values[bound]
        return bound

    new_transitions = tuple(
        Transition(t.source, t.letter, _map_bounds(t.guard, substitute), t.target, t.resets)
        for t in aut.transitions
    )
    return dataclasses.replace(aut, transitions=new_transitions, params=())


def collect_constants(aut: TimedAutomaton, bindings: Optional[Mapping[str, Rat]] = None) -> list[Rat]:
    """All constants appearing in guards, sorted, deduplicated, with 0 prepended."""
    if aut.params:
        aut = bind(aut, bindings or {})
    constants = {Fraction(0)}
    for tr in aut.transitions:
        for atom in condition_atoms(tr.guard):
            constants.add(atom.bound)
    return sorted(constants)


def fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    if base not in taken:
        return base
    i = 2
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def complete_with_sink(aut: TimedAutomaton) -> TimedAutomaton:
    """Ensure every (state, letter, valuation) has an enabled non-resetting move.

    Adds an absorbing non-final sink with guard-true self-loops, plus one edge
    (q, a, g, sink) per original pair where g negates the disjunction of the
    guards of the non-resetting transitions at (q, a).  When those guards
    already cover every valuation the negation is unsatisfiable and no edge is
    added, so an already-complete automaton only gains an unreachable sink.
    Idempotent: a completed automaton is returned unchanged.
    """
    if aut.sink is not None:
        return aut
    sink = fresh_name("sink", aut.states)
    added: list[Transition] = []
    for a in aut.alphabet:
        added.append(Transition(sink, a, TRUE, sink, frozenset()))
    for q in aut.states:
        for a in aut.alphabet:
            guards = [t.guard for t in aut.transitions
                      if t.source == q and t.letter == a and not t.resets]
            if not guards:
                missing: Optional[Condition] = TRUE
            else:
                disjunction: Condition = guards[0]
                for g in guards[1:]:
                    disjunction = Or(disjunction, g)
                missing = negate_condition(disjunction)
            if missing is not None:
                added.append(Transition(q, a, missing, sink, frozenset()))
    return dataclasses.replace(
        aut,
        states=aut.states + (sink,),
        transitions=aut.transitions + tuple(added),
        sink=sink,
    )
