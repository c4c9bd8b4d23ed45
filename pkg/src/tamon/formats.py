"""Text formats: automata, finite automata, streams, verdicts.

Automaton files are line oriented; '#' starts a comment.  Directives:

    alphabet a b c
    clocks x
    states p q r
    initial p
    final r
    param C
    trans p a [x < C & x > 0] -> q reset x

Guards sit in brackets: atoms ``x<c  x>c  x=c  x<=c  x>=c  x+y=c  true``
joined by ``&`` and ``|`` (``&`` binds tighter) with parentheses allowed;
constants are non-negative decimals, fractions like 3/2, or parameter names;
``<=`` and ``>=`` are sugar for the strict atom or-equal.  The reset clause
is optional and lists clocks.

A stream is whitespace-separated tokens: ``+<rat>`` is a time span, anything
else is a letter.  Letters starting with '+' or '#' cannot be written in
these formats and are rejected.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator, Optional, TextIO, Union

from .automata import (
    And,
    Atom,
    AutomatonError,
    Condition,
    Or,
    Rat,
    StreamElement,
    StreamError,
    TRUE,
    TimedAutomaton,
    Transition,
    TrueCond,
)
from .constructions import Nfa
from .monitor import Verdict


class ParseError(ValueError):
    """Malformed input text; the message names the line."""


def parse_rat(text: str) -> Rat:
    """Exact rational from decimal or fraction notation: 7, 0.25, 3/2."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational number: {text!r}") from exc


def format_rat(value: Rat) -> str:
    return str(Fraction(value))


# ----- guard expressions ----------------------------------------------------

_TOKEN = re.compile(r"""
    \s*(
        <=|>=|[<>=()&|+]
      | \d+/\d+ | \d+\.\d* | \.\d+ | \d+
      | [A-Za-z_]\w*
      | \S
    )""", re.VERBOSE)


def _tokenize_guard(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            break
        tokens.append(match.group(1))
        pos = match.end()
    if text[pos:].strip():
        raise ParseError(f"bad guard syntax near {text[pos:].strip()!r}")
    return tokens


class _GuardParser:
    def __init__(self, text: str) -> None:
        self.tokens = _tokenize_guard(text)
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        token = self.peek()
        if token is None:
            raise ParseError("guard ends unexpectedly")
        self.pos += 1
        return token

    def parse(self) -> Condition:
        cond = self.parse_or()
        if self.peek() is not None:
            raise ParseError(f"unexpected {self.peek()!r} in guard")
        return cond

    def parse_or(self) -> Condition:
        cond = self.parse_and()
        while self.peek() == "|":
            self.take()
            cond = Or(cond, self.parse_and())
        return cond

    def parse_and(self) -> Condition:
        cond = self.parse_factor()
        while self.peek() == "&":
            self.take()
            cond = And(cond, self.parse_factor())
        return cond

    def parse_factor(self) -> Condition:
        token = self.take()
        if token == "(":
            cond = self.parse_or()
            if self.take() != ")":
                raise ParseError("missing ')' in guard")
            return cond
        if token == "true":
            return TRUE
        if not re.fullmatch(r"[A-Za-z_]\w*", token):
            raise ParseError(f"expected clock name, got {token!r}")
        clocks = [token]
        while self.peek() == "+":
            self.take()
            name = self.take()
            if not re.fullmatch(r"[A-Za-z_]\w*", name):
                raise ParseError(f"expected clock name after '+', got {name!r}")
            clocks.append(name)
        op = self.take()
        if op not in ("<", ">", "=", "<=", ">="):
            raise ParseError(f"expected comparison, got {op!r}")
        bound_token = self.take()
        bound: Union[Rat, str]
        if re.fullmatch(r"[A-Za-z_]\w*", bound_token):
            bound = bound_token
        else:
            bound = parse_rat(bound_token)
            if bound < 0:
                raise ParseError(f"negative constant {bound} in guard")
        if op in ("<", ">", "="):
            return Atom(tuple(clocks), op, bound)
        strict = "<" if op == "<=" else ">"
        return Or(Atom(tuple(clocks), strict, bound), Atom(tuple(clocks), "=", bound))


def parse_guard(text: str) -> Condition:
    return _GuardParser(text).parse()


def guard_text(cond: Condition) -> str:
    """Render a guard so that parsing the text rebuilds the identical tree.

    '&' binds tighter than '|'; a right operand of its own connective is
    parenthesized so association is preserved.
    """
    if isinstance(cond, TrueCond):
        return "true"
    if isinstance(cond, Atom):
        bound = cond.bound if isinstance(cond.bound, str) else format_rat(cond.bound)
        return f"{'+'.join(cond.clocks)} {cond.op} {bound}"
    if isinstance(cond, And):
        left = guard_text(cond.left)
        right = guard_text(cond.right)
        if isinstance(cond.left, Or):
            left = f"({left})"
        if isinstance(cond.right, (Or, And)):
            right = f"({right})"
        return f"{left} & {right}"
    if isinstance(cond, Or):
        left = guard_text(cond.left)
        right = guard_text(cond.right)
        if isinstance(cond.right, Or):
            right = f"({right})"
        return f"{left} | {right}"
    raise AutomatonError(f"not a condition: {cond!r}")


# ----- automaton files ------------------------------------------------------


def _writable_letter(token: str) -> bool:
    return bool(token) and not token.startswith(("+", "#"))


def _split_line(line: str) -> list[str]:
    cut = line.find("#")
    if cut >= 0:
        line = line[:cut]
    return line.split()


def parse_automaton(text: str) -> TimedAutomaton:
    alphabet: list[str] = []
    clocks: list[str] = []
    states: list[str] = []
    initial: list[str] = []
    final: list[str] = []
    params: list[str] = []
    sink: Optional[str] = None
    transitions: list[Transition] = []

    for ln, raw in enumerate(text.splitlines(), start=1):
        fields = _split_line(raw)
        if not fields:
            continue
        directive, args = fields[0], fields[1:]
        try:
            if directive == "alphabet":
                for a in args:
                    if not _writable_letter(a):
                        raise ParseError(f"letter {a!r} cannot start with '+' or '#'")
                alphabet.extend(args)
            elif directive == "clocks":
                clocks.extend(args)
            elif directive == "states":
                states.extend(args)
            elif directive == "initial":
                initial.extend(args)
            elif directive == "final":
                final.extend(args)
            elif directive == "param":
                params.extend(args)
            elif directive == "sink":
                if len(args) != 1:
                    raise ParseError("sink takes exactly one state")
                sink = args[0]
            elif directive == "trans":
                transitions.append(_parse_transition(raw))
            else:
                raise ParseError(f"unknown directive {directive!r}")
        except ParseError as exc:
            raise ParseError(f"line {ln}: {exc}") from None
    if not states:
        raise ParseError("no states declared")
    if not clocks:
        raise ParseError("no clocks declared")
    if not alphabet:
        raise ParseError("no alphabet declared")
    try:
        return TimedAutomaton(
            states=tuple(states),
            alphabet=tuple(alphabet),
            clocks=tuple(clocks),
            initial=frozenset(initial),
            final=frozenset(final),
            transitions=tuple(transitions),
            params=tuple(params),
            sink=sink,
        )
    except AutomatonError as exc:
        raise ParseError(f"inconsistent automaton file: {exc}") from None


def _parse_transition(raw: str) -> Transition:
    cut = raw.find("#")
    if cut >= 0:
        raw = raw[:cut]
    head, bracket, rest = raw.partition("[")
    if not bracket:
        raise ParseError("transition needs a [guard]")
    head_fields = head.split()
    if len(head_fields) != 3 or head_fields[0] != "trans":
        raise ParseError("expected: trans <state> <letter> [guard] -> <state> [reset <clocks>]")
    _, source, letter = head_fields
    guard_part, bracket, tail = rest.partition("]")
    if not bracket:
        raise ParseError("unclosed [guard]")
    guard = parse_guard(guard_part)
    tail_fields = tail.split()
    if len(tail_fields) < 2 or tail_fields[0] != "->":
        raise ParseError("expected '-> <state>' after the guard")
    target = tail_fields[1]
    resets: frozenset[str] = frozenset()
    extra = tail_fields[2:]
    if extra:
        if extra[0] != "reset" or len(extra) < 2:
            raise ParseError("trailing clause must be 'reset <clocks>'")
        resets = frozenset(extra[1:])
    return Transition(source, letter, guard, target, resets)


def emit_automaton(aut: TimedAutomaton) -> str:
    for a in aut.alphabet:
        if not _writable_letter(a):
            raise AutomatonError(f"letter {a!r} has no text form")
    lines = [
        "alphabet " + " ".join(aut.alphabet),
        "clocks " + " ".join(aut.clocks),
        "states " + " ".join(aut.states),
    ]
    if aut.initial:
        lines.append("initial " + " ".join(sorted(aut.initial)))
    if aut.final:
        lines.append("final " + " ".join(sorted(aut.final)))
    for p in aut.params:
        lines.append(f"param {p}")
    if aut.sink is not None:
        lines.append(f"sink {aut.sink}")
    for tr in aut.transitions:
        line = f"trans {tr.source} {tr.letter} [{guard_text(tr.guard)}] -> {tr.target}"
        if tr.resets:
            line += " reset " + " ".join(sorted(tr.resets))
        lines.append(line)
    return "\n".join(lines) + "\n"


# ----- finite automaton files ------------------------------------------------


def parse_nfa(text: str) -> Nfa:
    """Finite automaton file: the automaton format without clocks, params,
    guards, or resets; transitions read ``trans p a -> q``."""
    alphabet: list[str] = []
    states: list[str] = []
    initial: list[str] = []
    final: list[str] = []
    transitions: list[tuple[str, str, str]] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        fields = _split_line(raw)
        if not fields:
            continue
        directive, args = fields[0], fields[1:]
        try:
            if directive == "alphabet":
                for a in args:
                    if not _writable_letter(a):
                        raise ParseError(f"letter {a!r} cannot start with '+' or '#'")
                alphabet.extend(args)
            elif directive == "states":
                states.extend(args)
            elif directive == "initial":
                initial.extend(args)
            elif directive == "final":
                final.extend(args)
            elif directive == "trans":
                if len(args) != 4 or args[2] != "->":
                    raise ParseError("expected: trans <state> <letter> -> <state>")
                transitions.append((args[0], args[1], args[3]))
            else:
                raise ParseError(f"unknown directive {directive!r}")
        except ParseError as exc:
            raise ParseError(f"line {ln}: {exc}") from None
    if not states:
        raise ParseError("no states declared")
    if not alphabet:
        raise ParseError("no alphabet declared")
    try:
        return Nfa(
            states=tuple(states),
            alphabet=tuple(alphabet),
            initial=frozenset(initial),
            final=frozenset(final),
            transitions=tuple(transitions),
        )
    except AutomatonError as exc:
        raise ParseError(f"inconsistent automaton file: {exc}") from None


def emit_nfa(nfa: Nfa) -> str:
    lines = [
        "alphabet " + " ".join(nfa.alphabet),
        "states " + " ".join(nfa.states),
    ]
    if nfa.initial:
        lines.append("initial " + " ".join(sorted(nfa.initial)))
    if nfa.final:
        lines.append("final " + " ".join(sorted(nfa.final)))
    for src, letter, dst in nfa.transitions:
        lines.append(f"trans {src} {letter} -> {dst}")
    return "\n".join(lines) + "\n"


# ----- streams and verdicts ---------------------------------------------------


def parse_stream_token(token: str) -> StreamElement:
    if token.startswith("+"):
        try:
            span = Fraction(token[1:])
        except (ValueError, ZeroDivisionError) as exc:
            raise StreamError(f"bad time span token {token!r}") from exc
        if span <= 0:
            raise StreamError(f"time span must be positive, got {token!r}")
        return span
    return token


def iter_stream(handle: Union[TextIO, Iterable[str]]) -> Iterator[StreamElement]:
    """Lazily decode stream tokens from lines; suits unbounded input."""
    for line in handle:
        for token in line.split():
            yield parse_stream_token(token)


def parse_stream(text: str) -> list[StreamElement]:
    return [parse_stream_token(token) for token in text.split()]


def format_stream(elements: Iterable[StreamElement], per_line: int = 16) -> str:
    tokens = []
    for element in elements:
        if isinstance(element, str):
            if not _writable_letter(element):
                raise StreamError(f"letter {element!r} has no text form")
            tokens.append(element)
        else:
            span = Fraction(element)
            if span <= 0:
                raise StreamError(f"time span must be positive, got {span}")
            tokens.append(f"+{format_rat(span)}")
    lines = [" ".join(tokens[i:i + per_line]) for i in range(0, len(tokens), per_line)]
    return "\n".join(lines) + ("\n" if lines else "")


def format_verdict(verdict: Verdict) -> str:
    return f"{verdict.step} {'accept' if verdict.accepted else 'reject'}"
