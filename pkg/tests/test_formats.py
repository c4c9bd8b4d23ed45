"""Text formats: rationals, guards, automata, streams."""

import io
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tamon import (
    And,
    Atom,
    Or,
    StreamError,
    TRUE,
    complete_with_sink,
)
from tamon.constructions import (
    cel_pattern_automaton,
    frobenius_automaton,
    sliding_window,
    threesum_instance,
)
from tamon.formats import (
    ParseError,
    emit_automaton,
    emit_nfa,
    format_rat,
    format_stream,
    format_verdict,
    guard_text,
    iter_stream,
    parse_automaton,
    parse_guard,
    parse_nfa,
    parse_rat,
    parse_stream,
    parse_stream_token,
)
from tamon.monitor import Verdict

from _fuzz import CONSTANT_POOL, random_automaton, random_guard


def test_parse_rat_forms():
    assert parse_rat("3") == Fraction(3)
    assert parse_rat("7/3") == Fraction(7, 3)
    assert parse_rat("0.25") == Fraction(1, 4)
    assert parse_rat("1.5") == Fraction(3, 2)
    with pytest.raises(ParseError):
        parse_rat("three")
    with pytest.raises(ParseError):
        parse_rat("1/0")


@given(st.fractions(min_value=0, max_value=10**7))
@settings(deadline=None, max_examples=300, derandomize=True)
def test_rat_round_trip(value):
    assert parse_rat(format_rat(value)) == value


def test_guard_precedence_and_sugar():
    guard = parse_guard("x < 4 & x > 1 | x = 2")
    assert isinstance(guard, Or) and isinstance(guard.left, And)
    assert parse_guard("x <= 10") == Or(
        Atom(("x",), "<", Fraction(10)), Atom(("x",), "=", Fraction(10))
    )
    assert parse_guard("x >= c") == Or(Atom(("x",), ">", "c"), Atom(("x",), "=", "c"))
    assert parse_guard("x + y = 16") == Atom(("x", "y"), "=", Fraction(16))
    assert parse_guard("true") is TRUE
    assert parse_guard("(x < 1 | x > 2) & x = 3/2") == And(
        Or(Atom(("x",), "<", Fraction(1)), Atom(("x",), ">", Fraction(2))),
        Atom(("x",), "=", Fraction(3, 2)),
    )


def test_guard_errors():
    for text in ("x << 3", "x <", "& x < 1", "x < 1 |", "(x < 1", "x ~ 2"):
        with pytest.raises(ParseError):
            parse_guard(text)


def test_guard_text_round_trip_fuzz():
    rng = random.Random(61)
    for _ in range(300):
        guard = random_guard(rng, list(CONSTANT_POOL), depth=3)
        assert parse_guard(guard_text(guard)) == guard


def test_automaton_round_trip_constructions():
    samples = [
        cel_pattern_automaton(),
        frobenius_automaton((3, 5)),
        threesum_instance((1, 2, 3)).automaton,
        sliding_window(
            parse_nfa(emit_nfa(_ab_nfa())), "C"
        ),
        complete_with_sink(cel_pattern_automaton()),
    ]
    for aut in samples:
        assert parse_automaton(emit_automaton(aut)) == aut


def _ab_nfa():
    from tamon.constructions import Nfa

    return Nfa(
        states=("p", "q", "r"),
        alphabet=("a", "b"),
        initial=frozenset({"p"}),
        final=frozenset({"r"}),
        transitions=(("p", "a", "q"), ("q", "b", "q"), ("q", "a", "r")),
    )


def test_automaton_round_trip_fuzz():
    rng = random.Random(67)
    for _ in range(60):
        aut = random_automaton(rng)
        assert parse_automaton(emit_automaton(aut)) == aut


def test_parse_automaton_accepts_comments_and_blank_lines():
    text = """
# sliding gate
alphabet a
clocks x
states p q
initial p
final q

trans p a [x < 4] -> q reset x
trans q a [true] -> q
"""
    aut = parse_automaton(text)
    assert aut.states == ("p", "q")
    assert aut.transitions[0].guard == Atom(("x",), "<", Fraction(4))
    assert aut.transitions[0].resets == frozenset({"x"})
    assert aut.transitions[1].guard == TRUE


def test_parse_automaton_errors_carry_line_numbers():
    text = "alphabet a\nclocks x\nstates p\nbogus directive\n"
    with pytest.raises(ParseError) as err:
        parse_automaton(text)
    assert "line 4" in str(err.value)

    with pytest.raises(ParseError):
        parse_automaton("alphabet a\nclocks x\n")


def test_nfa_round_trip():
    nfa = _ab_nfa()
    assert parse_nfa(emit_nfa(nfa)) == nfa
    with pytest.raises(ParseError):
        parse_nfa("alphabet a\nstates p\ninitial p\nfinal p\ntrans p b -> p\n")


def test_stream_tokens():
    assert parse_stream_token("+1/2") == Fraction(1, 2)
    assert parse_stream_token("+0.25") == Fraction(1, 4)
    assert parse_stream_token("a") == "a"
    for bad in ("+0", "+-1", "+x"):
        with pytest.raises(StreamError):
            parse_stream_token(bad)


def test_stream_round_trip_and_wrapping():
    elements = []
    rng = random.Random(71)
    for _ in range(40):
        if rng.random() < 0.5:
            elements.append(Fraction(rng.randint(1, 9), rng.randint(1, 9)))
        else:
            elements.append(rng.choice("ab"))
    text = format_stream(elements)
    assert parse_stream(text) == elements
    assert all(len(line.split()) <= 16 for line in text.splitlines())


def test_iter_stream_is_lazy_over_lines():
    handle = io.StringIO("+1 a\n+1/2 b\n")
    it = iter_stream(handle)
    assert next(it) == Fraction(1)
    assert next(it) == "a"
    assert list(it) == [Fraction(1, 2), "b"]


def test_format_verdict():
    assert format_verdict(Verdict(3, True)) == "3 accept"
    assert format_verdict(Verdict(0, False)) == "0 reject"