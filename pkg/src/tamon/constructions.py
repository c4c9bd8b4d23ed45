"""Problem reductions that target the monitor.

Each construction turns a problem with a sliding or cumulative time flavour
into a timed automaton plus a stream encoding, so that monitoring answers the
original question per input element:

* sliding-window membership of the last C letters in an NFA language,
* matching a fixed within/sequence event pattern over letter prefixes,
* the dynamic coin (Frobenius) representability question,
* a 3SUM instance as a two-clock automaton with an additive guard.

Every construction comes with an independent brute-force oracle used by the
test suite: direct NFA membership, a memoized recursion on the pattern
semantics, a table DP over sums, and a cubic scan over triples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .automata import (
    Atom,
    AutomatonError,
    Or,
    Rat,
    StreamElement,
    TRUE,
    TimedAutomaton,
    Transition,
    fresh_name,
    is_valid_letter,
)


# ----- sliding window ------------------------------------------------------


@dataclass(frozen=True)
class Nfa:
    """A plain finite automaton, possibly nondeterministic."""

    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    initial: frozenset[str]
    final: frozenset[str]
    transitions: tuple[tuple[str, str, str], ...]

    def __post_init__(self) -> None:
        state_set = set(self.states)
        if len(state_set) != len(self.states):
            raise AutomatonError("duplicate state names")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise AutomatonError("duplicate letters")
        for a in self.alphabet:
            if not is_valid_letter(a):
                raise AutomatonError(f"bad letter token {a!r}")
        if not self.initial <= state_set or not self.final <= state_set:
            raise AutomatonError("initial/final states not a subset of states")
        for src, letter, dst in self.transitions:
            if src not in state_set or dst not in state_set:
                raise AutomatonError(f"transition endpoint not a state: {src!r} -> {dst!r}")
            if letter not in self.alphabet:
                raise AutomatonError(f"transition letter {letter!r} not in alphabet")


def nfa_accepts(nfa: Nfa, word: Sequence[str]) -> bool:
    """Subset-construction membership test."""
    current = set(nfa.initial)
    for a in word:
        current = {dst for src, letter, dst in nfa.transitions
                   if letter == a and src in current}
        if not current:
            return False
    return bool(current & nfa.final)


def sliding_window(nfa: Nfa, window: Union[int, str, Rat],
                   clock: str = "x") -> TimedAutomaton:
    """Timed automaton accepting 1a1..1an iff the NFA accepts the last
    `window` letters.

    NFA transitions become guard-true non-resetting edges; an edge into an
    NFA-final state additionally jumps to a fresh final state under the guard
    clock = window; initial states get resetting self-loops on every letter,
    each reset opening a candidate window start.  ``window`` may be a literal
    positive constant or the name of a parameter bound at monitor time.
    """
    if isinstance(window, str):
        bound: Union[Rat, str] = window
    else:
        bound = Fraction(window)
        if bound <= 0:
            raise AutomatonError(f"window must be positive, got {window}")
    accept = fresh_name("win", nfa.states)
    transitions: list[Transition] = []
    for src, letter, dst in nfa.transitions:
        transitions.append(Transition(src, letter, TRUE, dst, frozenset()))
        if dst in nfa.final:
            transitions.append(
                Transition(src, letter, Atom((clock,), "=", bound), accept, frozenset()))
    for q in sorted(nfa.initial):
        for a in nfa.alphabet:
            transitions.append(Transition(q, a, TRUE, q, frozenset({clock})))
    return TimedAutomaton(
        states=nfa.states + (accept,),
        alphabet=nfa.alphabet,
        clocks=(clock,),
        initial=nfa.initial,
        final=frozenset({accept}),
        transitions=tuple(transitions),
        params=(window,) if isinstance(window, str) else (),
    )


def encode_discrete(word: Iterable[str], span: Rat = Fraction(1)) -> list[StreamElement]:
    """Interleave a unit (or given) span before every letter: a,b -> +1 a +1 b."""
    span = Fraction(span)
    if span <= 0:
        raise AutomatonError(f"span must be positive, got {span}")
    out: list[StreamElement] = []
    for a in word:
        out.append(span)
        out.append(a)
    return out


def last_window_accepted(nfa: Nfa, word: Sequence[str], window: int) -> bool:
    """Direct sliding-window oracle: do the last `window` letters of a
    word of length >= window form an NFA word?"""
    if len(word) < window:
        return False
    return nfa_accepts(nfa, word[len(word) - window:])


# ----- complex event patterns ----------------------------------------------


@dataclass(frozen=True)
class CelLetter:
    letter: str


@dataclass(frozen=True)
class CelSeq:
    first: "CelExpr"
    second: "CelExpr"


@dataclass(frozen=True)
class CelWithin:
    expr: "CelExpr"
    horizon: int

    def __post_init__(self) -> None:
        if self.horizon <= 0:
            raise AutomatonError(f"horizon must be positive, got {self.horizon}")


CelExpr = Union[CelLetter, CelSeq, CelWithin]


def cel_matches(word: Sequence[str], expr: CelExpr) -> bool:
    """Does the whole word match the pattern?

    Straight recursion on the matching rules: a letter pattern matches iff it
    is the last letter read; a sequence splits the word into two non-empty
    halves; within(t) keeps only the last t+1 letters of the current segment.
    Memoized on (node, segment), shared across prefixes by passing longer
    words with the same expression.
    """
    memo: dict[tuple[int, int, int], bool] = {}

    def match(node: CelExpr, lo: int, hi: int) -> bool:
        if hi <= lo:
            return False
        key = (id(node), lo, hi)
        cached = memo.get(key)
        if cached is not None:
            return cached
        if isinstance(node, CelLetter):
            result = word[hi - 1] == node.letter
        elif isinstance(node, CelSeq):
            result = any(match(node.first, lo, mid) and match(node.second, mid, hi)
                         for mid in range(lo + 1, hi))
        else:
            result = match(node.expr, max(lo, hi - node.horizon - 1), hi)
        memo[key] = result
        return result

    return match(expr, 0, len(word))


def cel_pattern_expr() -> CelExpr:
    """The worked pattern: ((a ; b) within t_ab) ; c, all within t_ac."""
    return CelWithin(
        CelSeq(CelWithin(CelSeq(CelLetter("a"), CelLetter("b")), 4), CelLetter("c")),
        10)


def cel_pattern_automaton() -> TimedAutomaton:
    """Single-clock automaton equivalent to cel_pattern_expr on letter prefixes.

    Accepts +1 a1 +1 a2 ... +1 an iff a1..an matches the pattern.  The two
    horizons stay parameters t_ab and t_ac; bind them with
    cel_pattern_bindings().
    """
    # The three matched events need not be contiguous, so p, q and r all
    # wait through unrelated letters without touching the clock; only the
    # match-opening a resets it.
    loops = [
        Transition(state, a, TRUE, state, frozenset())
        for state in ("p", "q", "r")
        for a in ("a", "b", "c")
    ]
    le_ab = Or(Atom(("x",), "<", "t_ab"), Atom(("x",), "=", "t_ab"))
    le_ac = Or(Atom(("x",), "<", "t_ac"), Atom(("x",), "=", "t_ac"))
    return TimedAutomaton(
        states=("p", "q", "r", "s"),
        alphabet=("a", "b", "c"),
        clocks=("x",),
        initial=frozenset({"p"}),
        final=frozenset({"s"}),
        transitions=tuple(loops) + (
            Transition("p", "a", TRUE, "q", frozenset({"x"})),
            Transition("q", "b", le_ab, "r", frozenset()),
            Transition("r", "c", le_ac, "s", frozenset()),
        ),
        params=("t_ab", "t_ac"),
    )


def cel_pattern_bindings() -> dict[str, Rat]:
    return {"t_ab": Fraction(4), "t_ac": Fraction(10)}


# ----- coin problem ---------------------------------------------------------


def frobenius_automaton(coins: Sequence[int]) -> TimedAutomaton:
    """Automaton accepting (+1 a)^h iff h is a non-negative integer
    combination of the coin values.

    One state idles while time accumulates; once the clock equals any coin
    value a resetting transition banks that coin and accepts; further
    transitions return to idle for the next coin or bank the next coin
    directly, which is the only way to chain two coins one apart.
    """
    coins = sorted(set(int(c) for c in coins))
    if not coins:
        raise AutomatonError("need at least one coin value")
    if coins[0] <= 0:
        raise AutomatonError(f"coin values must be positive, got {coins[0]}")
    guard: Or | Atom = Atom(("x",), "=", Fraction(coins[0]))
    for c in coins[1:]:
        guard = Or(guard, Atom(("x",), "=", Fraction(c)))
    return TimedAutomaton(
        states=("idle", "paid"),
        alphabet=("a",),
        clocks=("x",),
        initial=frozenset({"idle"}),
        final=frozenset({"paid"}),
        transitions=(
            Transition("idle", "a", TRUE, "idle", frozenset()),
            Transition("idle", "a", guard, "paid", frozenset({"x"})),
            Transition("paid", "a", TRUE, "idle", frozenset()),
            Transition("paid", "a", guard, "paid", frozenset({"x"})),
        ),
    )


def coin_dp_oracle(coins: Sequence[int], total: int) -> bool:
    """Table DP: is total a sum of coin values with repetition allowed?"""
    if total < 0:
        return False
    reachable = [False] * (total + 1)
    reachable[0] = True
    coin_list = [c for c in set(coins) if 0 < c <= total]
    for amount in range(1, total + 1):
        for c in coin_list:
            if c <= amount and reachable[amount - c]:
                reachable[amount] = True
                break
    return reachable[total]


# ----- 3SUM -----------------------------------------------------------------

DIAMOND = "♦"
SPADE = "♠"


@dataclass(frozen=True)
class ThreeSumInstance:
    values: tuple[Rat, ...]
    target_sum: Rat
    word: tuple[StreamElement, ...]
    automaton: TimedAutomaton


def threesum_brute(values: Iterable[Rat]) -> bool:
    """Is there a+b=c with a, b, c drawn from the set (a=b allowed)?"""
    vals = sorted(set(Fraction(v) for v in values))
    present = set(vals)
    for i, a in enumerate(vals):
        for b in vals[i:]:
            if a + b in present:
                return True
    return False


def threesum_instance(values: Iterable[Rat]) -> ThreeSumInstance:
    """Encode a 3SUM set as a timed word plus a two-clock additive automaton.

    With M one more than the largest element, the word walks down through the
    sorted values twice at double speed (choosing a and b) and once at single
    speed (choosing c), marking each value with a diamond; spades separate
    the three passes.  The automaton resets one clock at some diamond of the
    first pass and the other at some diamond of the second, then checks
    x + y = 4M at a diamond of the third pass, which holds exactly when the
    chosen a, b, c satisfy a + b = c.  The instance is accepted by the
    automaton iff the set contains such a triple.
    """
    vals = sorted(set(Fraction(v) for v in values))
    if not vals:
        raise AutomatonError("3SUM instance needs at least one value")
    if vals[0] <= 0:
        raise AutomatonError(f"3SUM values must be positive, got {vals[0]}")
    bound = 1 + vals[-1]
    down = [bound] + list(reversed(vals))
    double_steps = [2 * (hi - lo) for hi, lo in zip(down, down[1:])]
    double_steps.append(2 * vals[0])
    single_steps = [hi - lo for hi, lo in zip(down, down[1:])]

    u: list[StreamElement] = []
    for step in double_steps:
        u.append(step)
        u.append(DIAMOND)
    u.pop()  # no diamond after the final span of u
    v: list[StreamElement] = []
    for step in single_steps:
        v.append(step)
        v.append(DIAMOND)
    word = tuple(u) + (SPADE,) + tuple(u) + (SPADE,) + tuple(v)

    target = 4 * bound
    states = ("p1", "p2", "q1", "q2", "r1", "r2")
    loops = tuple(Transition(q, DIAMOND, TRUE, q, frozenset()) for q in states)
    automaton = TimedAutomaton(
        states=states,
        alphabet=(DIAMOND, SPADE),
        clocks=("x", "y"),
        initial=frozenset({"p1"}),
        final=frozenset({"r2"}),
        transitions=loops + (
            Transition("p1", DIAMOND, TRUE, "p2", frozenset({"x"})),
            Transition("p2", SPADE, TRUE, "q1", frozenset({"y"})),
            Transition("q1", DIAMOND, TRUE, "q2", frozenset({"y"})),
            Transition("q2", SPADE, TRUE, "r1", frozenset()),
            Transition("r1", DIAMOND, Atom(("x", "y"), "=", target), "r2", frozenset()),
        ),
    )
    return ThreeSumInstance(tuple(vals), target, word, automaton)
