"""Amortised constant-time monitoring for one-clock timed automata.

The package is organised around a small set of layers:

- :mod:`tamon.automata` defines timed automata, guard conditions, and
  parameter binding.
- :mod:`tamon.intervals` splits the non-negative rationals into the
  intervals induced by a guard constant set.
- :mod:`tamon.inner` holds the per-interval store (sorted value list plus
  a ranked forest of state sets).
- :mod:`tamon.monitor` glues one inner structure per interval into an
  online monitor with per-read cost independent of history length.
- :mod:`tamon.oracle` is a deliberately naive reference engine used to
  cross-check the monitor.
- :mod:`tamon.constructions` builds the example automata families
  (sliding-window NFA matching, a small event-pattern query, coin-sum
  reachability, and a 3SUM encoding).
- :mod:`tamon.bench` generates workloads and measures operation counts.
- :mod:`tamon.formats` parses and emits the text formats used by the CLI.
"""

from .automata import (
    And,
    Atom,
    AutomatonError,
    BindingError,
    Condition,
    GuardError,
    Or,
    Rat,
    StreamElement,
    StreamError,
    TRUE,
    TimedAutomaton,
    Transition,
    TrueCond,
    bind,
    collect_constants,
    complete_with_sink,
    eval_condition,
    negate_condition,
)
from .bench import BenchReport, STREAM_KINDS, gen_stream, run_instrumented
from .constructions import (
    CelLetter,
    CelSeq,
    CelWithin,
    ThreeSumInstance,
    cel_matches,
    cel_pattern_automaton,
    cel_pattern_bindings,
    cel_pattern_expr,
    coin_dp_oracle,
    encode_discrete,
    frobenius_automaton,
    last_window_accepted,
    Nfa,
    nfa_accepts,
    sliding_window,
    threesum_brute,
    threesum_instance,
)
from .inner import InnerStructure, OpCounters
from .intervals import Interval, IntervalPartition, build_partition, interval_index
from .monitor import MAX_TABLE_STATES, Monitor, UnsupportedAutomaton, Verdict
from .oracle import NaiveMonitor, oracle_accepted, oracle_init, oracle_read

__all__ = [
    "And",
    "Atom",
    "AutomatonError",
    "BenchReport",
    "BindingError",
    "CelLetter",
    "CelSeq",
    "CelWithin",
    "Condition",
    "GuardError",
    "InnerStructure",
    "Interval",
    "IntervalPartition",
    "MAX_TABLE_STATES",
    "Monitor",
    "NaiveMonitor",
    "Nfa",
    "OpCounters",
    "Or",
    "Rat",
    "STREAM_KINDS",
    "StreamElement",
    "StreamError",
    "ThreeSumInstance",
    "TimedAutomaton",
    "Transition",
    "TrueCond",
    "TRUE",
    "UnsupportedAutomaton",
    "Verdict",
    "bind",
    "build_partition",
    "cel_matches",
    "cel_pattern_automaton",
    "cel_pattern_bindings",
    "cel_pattern_expr",
    "coin_dp_oracle",
    "collect_constants",
    "complete_with_sink",
    "encode_discrete",
    "eval_condition",
    "frobenius_automaton",
    "gen_stream",
    "interval_index",
    "last_window_accepted",
    "negate_condition",
    "nfa_accepts",
    "oracle_accepted",
    "oracle_init",
    "oracle_read",
    "run_instrumented",
    "sliding_window",
    "threesum_brute",
    "threesum_instance",
]

__version__ = "0.1.0"
