"""Release gate: nine end-to-end checks with fixed seeds.

Run with ``pytest tests/test_acceptance.py -s`` to see one verdict line per
check.  Each check either compares the fast monitor against an independent
oracle or pins a measured quantity that must not drift.  All seeds are fixed
so a failure is always reproducible.
"""

import random
import time
from fractions import Fraction

from tamon import (
    Monitor,
    NaiveMonitor,
    Nfa,
    cel_matches,
    cel_pattern_automaton,
    cel_pattern_bindings,
    cel_pattern_expr,
    coin_dp_oracle,
    frobenius_automaton,
    gen_stream,
    last_window_accepted,
    run_instrumented,
    sliding_window,
    threesum_brute,
    threesum_instance,
)
from tamon.intervals import Interval

from _fuzz import (
    drive_inner_vs_shadow,
    random_automaton,
    random_nfa,
    random_stream,
    scale_automaton,
)

AB_STAR_A = Nfa(
    states=("p", "q", "r"),
    alphabet=("a", "b"),
    initial=frozenset({"p"}),
    final=frozenset({"r"}),
    transitions=(("p", "a", "q"), ("q", "b", "q"), ("q", "a", "r")),
)


def report(label: str, ok: bool, detail: str = "") -> None:
    suffix = f" ({detail})" if detail else ""
    print(f"{label}: {'PASS' if ok else 'FAIL'}{suffix}")
    assert ok, f"{label}{suffix}"


def test_fast_monitor_matches_explicit_simulation_on_random_automata():
    rng = random.Random(1001)
    start = time.perf_counter()
    bad = None
    for case in range(1000):
        automaton = random_automaton(rng)
        length = rng.randint(1, 60) if rng.random() < 0.8 else rng.randint(61, 200)
        stream = random_stream(rng, automaton, length)
        fast = [v.accepted for v in Monitor(automaton).run_stream(stream)]
        slow = [v.accepted for v in NaiveMonitor(automaton).run_stream(stream)]
        if fast != slow:
            bad = case
            break
    elapsed = time.perf_counter() - start
    report(
        "fast monitor vs explicit simulation on 1000 random automata",
        bad is None and elapsed < 60.0,
        f"wall {elapsed:.1f}s" if bad is None else f"verdict traces diverge on case {bad}",
    )


def test_value_store_survives_randomized_operation_fuzz():
    plans = [
        (Interval(Fraction(0), Fraction(4), False), 3, 14000, 201),
        (Interval(Fraction(0), Fraction(4), False), 4, 14000, 202),
        (Interval(Fraction(0), Fraction(1, 3), False), 4, 14000, 203),
        (Interval(Fraction(0), Fraction(6), False), 3, 14000, 204),
        (Interval(Fraction(1, 2), Fraction(2), False), 4, 14000, 205),
        (Interval(Fraction(3), Fraction(3), True), 3, 14000, 206),
        (Interval(Fraction(3), Fraction(3), True), 4, 14000, 207),
        (Interval(Fraction(10), None, False), 3, 1500, 208),
        (Interval(Fraction(10), None, False), 4, 1500, 209),
    ]
    total = 0
    for interval, n_states, n_ops, seed in plans:
        total += drive_inner_vs_shadow(random.Random(seed), interval, n_states, n_ops)
    report(
        "value store vs shadow model under randomized operations",
        total >= 100_000,
        f"{total} operations, invariants and contents audited after each",
    )


def test_worst_single_read_does_not_grow_with_stream_length():
    subjects = [
        ("window", sliding_window(AB_STAR_A, 3), 497),
        ("coins", frobenius_automaton((3, 5)), 499),
    ]
    for i in range(10):
        subjects.append((f"fuzz{i}", random_automaton(random.Random(i)), 500 + i))
    grew = []
    for name, automaton, seed in subjects:
        per_size = []
        for n in (1000, 100000):
            stream = gen_stream("discrete", n, seed=seed, alphabet=automaton.alphabet)
            per_size.append(run_instrumented(Monitor(automaton), stream).max_ops_per_read)
        if per_size[0] != per_size[1]:
            grew.append((name, per_size))
    report(
        "worst single read equal at stream sizes 10^3 and 10^5 across 12 automata",
        not grew,
        "all equal" if not grew else f"grew: {grew}",
    )


def test_burst_streams_keep_amortised_cost_flat():
    automaton = sliding_window(AB_STAR_A, 3)
    amortised = {}
    burst_read = {}
    for n in (1000, 10000, 100000):
        monitor = Monitor(automaton)
        constants = monitor.partition.constants
        stream = gen_stream(
            "adversarial_burst",
            n,
            seed=9,
            alphabet=automaton.alphabet,
            unit=min(Fraction(1), constants[1]),
            burst=constants[-1] + 1,
        )
        result = run_instrumented(monitor, stream)
        amortised[n] = result.amortised
        burst_read[n] = result.max_ops_per_read
    ratio = max(amortised.values()) / min(amortised.values())
    report(
        "amortised cost flat across burst stream sizes 10^3, 10^4, 10^5",
        ratio <= 2.0,
        f"ratio {ratio:.3f}, burst read costs {burst_read[1000]} -> {burst_read[100000]} ops",
    )


def test_magnitude_scaling_leaves_behaviour_bit_identical():
    rng = random.Random(5005)
    factor = Fraction(10) ** 6
    bad = None
    for case in range(25):
        automaton = random_automaton(rng)
        stream = random_stream(rng, automaton, 100)
        small = Monitor(automaton)
        big = Monitor(scale_automaton(automaton, factor))
        if small.accepted() != big.accepted():
            bad = case
            break
        for element in stream:
            scaled = element * factor if isinstance(element, Fraction) else element
            same_verdict = small.read(element).accepted == big.read(scaled).accepted
            same_counters = small.counters.snapshot() == big.counters.snapshot()
            if not (same_verdict and same_counters):
                bad = case
                break
        if bad is not None:
            break
    report(
        "constants and spans scaled by 10^6 leave verdicts and op traces identical",
        bad is None,
        "25 automata, per-read counter snapshots compared" if bad is None else f"case {bad} differs",
    )


def test_window_monitor_equals_direct_membership_of_last_letters():
    rng = random.Random(606)
    bad = None
    for case in range(200):
        nfa = random_nfa(rng)
        width = rng.randint(1, 50)
        length = rng.randint(1, 140) if rng.random() < 0.9 else rng.randint(141, 500)
        word = "".join(rng.choice(nfa.alphabet) for _ in range(length))
        integer = Monitor(sliding_window(nfa, width))
        fine = Monitor(sliding_window(nfa, 1))
        delta = Fraction(1, width)
        for j, letter in enumerate(word):
            integer.read(Fraction(1))
            got = integer.read(letter).accepted
            fine.read(delta)
            got_fine = fine.read(letter).accepted
            want = last_window_accepted(nfa, word[: j + 1], width)
            if got != want or got_fine != want:
                bad = (case, j)
                break
        if bad is not None:
            break
    report(
        "window monitor vs direct membership of the last C letters",
        bad is None,
        "200 NFAs, widths 1..50, plus the 1/C-span variant"
        if bad is None
        else f"diverges at case, position {bad}",
    )


def test_pattern_monitor_equals_match_oracle():
    rng = random.Random(707)
    automaton = cel_pattern_automaton()
    bindings = cel_pattern_bindings()
    expr = cel_pattern_expr()
    bad = None
    for case in range(500):
        word = "".join(rng.choice("abc") for _ in range(rng.randint(1, 100)))
        monitor = Monitor(automaton, bindings)
        for j, letter in enumerate(word):
            monitor.read(Fraction(1))
            if monitor.read(letter).accepted != cel_matches(word[: j + 1], expr):
                bad = (case, j)
                break
        if bad is not None:
            break
    report(
        "pattern monitor vs match oracle on 500 random words",
        bad is None,
        "per-prefix verdicts compared" if bad is None else f"diverges at case, position {bad}",
    )


def test_coin_automaton_equals_table_oracle():
    monitor = Monitor(frobenius_automaton((3, 5)))
    rejected = []
    bad = None
    for total in range(1, 1001):
        monitor.read(Fraction(1))
        got = monitor.read("a").accepted
        if got != coin_dp_oracle((3, 5), total):
            bad = total
            break
        if not got:
            rejected.append(total)
    ok = bad is None and rejected and max(rejected) == 7
    report(
        "coin automaton vs table oracle for totals 1..1000",
        bool(ok),
        f"largest unreachable total {max(rejected)}"
        if bad is None and rejected
        else f"diverges at total {bad}",
    )


def test_additive_guard_reduction_equals_brute_force():
    rng = random.Random(909)
    cases = [
        (Fraction(1), Fraction(2), Fraction(4)),
        (Fraction(1), Fraction(2), Fraction(3)),
        (Fraction(5),),
        (Fraction(2), Fraction(3), Fraction(10)),
    ]
    while len(cases) < 500:
        roll = rng.random()
        if roll < 0.8:
            size = rng.randint(1, 10)
        elif roll < 0.95:
            size = rng.randint(11, 20)
        else:
            size = rng.randint(21, 30)
        values = set()
        while len(values) < size:
            values.add(Fraction(rng.randint(1, 40), rng.choice((1, 1, 2, 3, 4))))
        cases.append(tuple(sorted(values)))
    bad = None
    for i, values in enumerate(cases):
        instance = threesum_instance(values)
        got = NaiveMonitor(instance.automaton).run_stream(instance.word)[-1].accepted
        if got != threesum_brute(values):
            bad = i
            break
    report(
        "additive-guard reduction vs brute force on 500 value sets",
        bad is None,
        "includes the doubled-element case {1, 2, 4}" if bad is None else f"case {bad} differs",
    )
