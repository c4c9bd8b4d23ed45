"""Stream generators and the instrumented runner."""

import csv
from fractions import Fraction

import pytest

from tamon import (
    Monitor,
    STREAM_KINDS,
    gen_stream,
    run_instrumented,
    sliding_window,
)
from tamon.bench import format_report, metric_lines, render_figures, write_csv
from tamon.constructions import Nfa

AB_STAR_A = Nfa(
    states=("p", "q", "r"),
    alphabet=("a", "b"),
    initial=frozenset({"p"}),
    final=frozenset({"r"}),
    transitions=(("p", "a", "q"), ("q", "b", "q"), ("q", "a", "r")),
)


def window3():
    return sliding_window(AB_STAR_A, 3)


def test_gen_stream_is_deterministic():
    for kind in STREAM_KINDS:
        a = gen_stream(kind, 50, seed=7, alphabet=("a", "b"))
        b = gen_stream(kind, 50, seed=7, alphabet=("a", "b"))
        assert a == b
    assert gen_stream("random_spans", 50, seed=7) != gen_stream("random_spans", 50, seed=8)


def test_gen_stream_empty():
    assert gen_stream("random_spans", 0, seed=3) == []
    assert gen_stream("discrete", 0, seed=3) == []


def test_gen_stream_rejects_unknown_kind():
    with pytest.raises(ValueError):
        gen_stream("steady", 10, seed=0)


def test_discrete_stream_shape_and_prefix_property():
    short = gen_stream("discrete", 100, seed=11, alphabet=("a", "b"))
    long = gen_stream("discrete", 5000, seed=11, alphabet=("a", "b"))
    assert len(short) == 200
    assert short == long[:200]
    assert all(short[i] == Fraction(1) for i in range(0, 200, 2))
    assert all(short[i] in ("a", "b") for i in range(1, 200, 2))


def test_adversarial_burst_spans_grow_and_sum_to_half_unit():
    stream = gen_stream("adversarial_burst", 60, seed=2, alphabet=("a",))
    pairs = 30
    assert len(stream) == 2 * pairs + 1
    spans = [stream[i] for i in range(0, 2 * pairs, 2)]
    assert spans == sorted(spans) and len(set(spans)) == pairs
    assert sum(spans) == Fraction(1, 2)
    assert stream[-1] == Fraction(10) ** 6


def test_adversarial_burst_final_read_pays_for_the_pileup():
    stream = gen_stream("adversarial_burst", 60, seed=2, alphabet=("a", "b"))
    report = run_instrumented(Monitor(window3()), stream)
    assert report.n == len(stream)
    assert report.per_read[-1] >= 30
    assert report.max_ops_per_read == report.per_read[-1]


def test_run_instrumented_counter_identities():
    stream = gen_stream("random_spans", 300, seed=5, alphabet=("a", "b"))
    monitor = Monitor(window3())
    report = run_instrumented(monitor, stream)
    assert report.n == 300
    assert report.total_ops == sum(report.per_read)
    assert report.max_ops_per_read == max(report.per_read)
    assert report.amortised == pytest.approx(report.total_ops / 300)
    assert report.counters["evictions"] == report.counters["migrations"]
    assert report.counters["node_removals"] <= report.counters["node_inserts"]
    assert report.total_ops == sum(report.counters.values())
    assert monitor.check_invariants() == []


def test_run_instrumented_accepts_generators():
    stream = gen_stream("discrete", 40, seed=9, alphabet=("a", "b"))
    lazy = run_instrumented(Monitor(window3()), iter(stream))
    eager = run_instrumented(Monitor(window3()), stream)
    assert lazy.n == eager.n == 80
    assert lazy.per_read == eager.per_read


def test_report_text_output():
    report = run_instrumented(
        Monitor(window3()), gen_stream("discrete", 20, seed=1, alphabet=("a", "b"))
    )
    block = format_report(report, "smoke")
    assert block.startswith("run smoke")
    assert "ops per element" in block
    lines = metric_lines(report)
    assert any(line.startswith("n=") for line in lines)
    assert any(line.startswith("total_ops=") for line in lines)
    assert any(line.startswith("node_inserts=") for line in lines)


def test_write_csv_round_trip(tmp_path):
    reports = []
    for n in (50, 100):
        stream = gen_stream("discrete", n, seed=4, alphabet=("a", "b"))
        reports.append((f"n{n}", run_instrumented(Monitor(window3()), stream)))
    path = write_csv(reports, tmp_path / "bench.csv")
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [row["label"] for row in rows] == ["n50", "n100"]
    assert int(rows[0]["n"]) == 100
    assert int(rows[0]["total_ops"]) == reports[0][1].total_ops


def test_render_figures(tmp_path):
    reports = []
    for n in (30, 60):
        stream = gen_stream("adversarial_burst", n, seed=6, alphabet=("a", "b"))
        reports.append((f"n{n}", run_instrumented(Monitor(window3()), stream)))
    paths = render_figures(reports, tmp_path)
    assert len(paths) == 2
    for p in paths:
        assert p.exists() and p.stat().st_size > 0
        assert p.suffix == ".png"