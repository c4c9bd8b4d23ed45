"""Benchmark harness: seeded stream generators and operation accounting.

Wall-clock numbers are reported for orientation, but the claims worth
certifying are counted, not timed: every structural step the monitor takes
(node inserts and removals, forest links, root merges, parent hops,
evictions, migrations) lands in an OpCounters, and the reports carry both the
totals and the worst single read.  The report path renders the measured
series as figures next to the delimited output.
"""

from __future__ import annotations

import csv
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .automata import Rat, StreamElement
from .inner import OpCounters
from .monitor import Monitor

__all__ = [
    "BenchReport",
    "OpCounters",
    "gen_stream",
    "run_instrumented",
    "format_report",
    "metric_lines",
    "write_csv",
    "render_figures",
]

STREAM_KINDS = ("discrete", "random_spans", "adversarial_burst")

_SPAN_FACTORS = (
    Fraction(1, 4), Fraction(1, 3), Fraction(1, 2),
    Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3),
)

DEFAULT_BURST_FACTOR = 10 ** 6
"""Fallback burst span in units; clears guard constants up to a million units
when the caller does not know the automaton's largest constant."""


def gen_stream(kind: str, n: int, seed: int,
               alphabet: Sequence[str] = ("a",),
               unit: Rat = Fraction(1),
               burst: Optional[Rat] = None) -> list[StreamElement]:
    """Deterministic stream of the given kind and size parameter.

    discrete          n letters, each preceded by a unit span.
    random_spans      n elements mixing letters and small rational spans.
    adversarial_burst n//2 pairs of a tiny strictly growing span and a
                      letter, then one giant span.  The tiny spans share the
                      denominator m(m+1) and sum to unit/2, so the pairs pile
                      up distinct active values without ever crossing a
                      constant, and the final burst migrates all of them at
                      once.  ``burst`` must exceed the automaton's largest
                      guard constant for the pile-up to drain.

    Same arguments, same stream, element for element.
    """
    if kind not in STREAM_KINDS:
        raise ValueError(f"unknown stream kind {kind!r}")
    if n < 0:
        raise ValueError(f"size must be non-negative, got {n}")
    unit = Fraction(unit)
    if unit <= 0:
        raise ValueError(f"unit span must be positive, got {unit}")
    rng = random.Random(seed)
    letters = list(alphabet)
    if not letters:
        raise ValueError("alphabet must not be empty")
    out: list[StreamElement] = []
    if kind == "discrete":
        for _ in range(n):
            out.append(unit)
            out.append(rng.choice(letters))
    elif kind == "random_spans":
        for _ in range(n):
            if rng.random() < 0.5:
                out.append(unit * rng.choice(_SPAN_FACTORS))
            else:
                out.append(rng.choice(letters))
    else:
        pairs = max(1, n // 2)
        denominator = pairs * (pairs + 1)
        for i in range(pairs):
            out.append(Fraction((i + 1), denominator) * unit)
            out.append(rng.choice(letters))
        burst_span = Fraction(burst) if burst is not None else unit * DEFAULT_BURST_FACTOR
        if burst_span <= 0:
            raise ValueError(f"burst span must be positive, got {burst_span}")
        out.append(burst_span)
    return out


@dataclass
class BenchReport:
    """Operation and timing summary for one instrumented run."""

    n: int
    total_ops: int
    max_ops_per_read: int
    amortised: float
    wall_seconds: float
    reads_per_second: float
    counters: dict[str, int]
    per_read: list[int] = field(repr=False, default_factory=list)


def run_instrumented(monitor: Monitor, stream: Iterable[StreamElement]) -> BenchReport:
    """Feed the stream and account every structural operation.

    Counter deltas are taken relative to the monitor's state on entry, so the
    cost of building the monitor itself is not charged to the reads.
    """
    counters = monitor.counters
    start_snapshot = counters.snapshot()
    per_read: list[int] = []
    before = counters.total()
    wall_start = time.perf_counter()
    for element in stream:
        monitor.read(element)
        after = counters.total()
        per_read.append(after - before)
        before = after
    wall = time.perf_counter() - wall_start
    end_snapshot = counters.snapshot()
    names = [f for f in counters.as_dict()]
    deltas = {name: end - start for name, start, end
              in zip(names, start_snapshot, end_snapshot)}
    total_ops = sum(per_read)
    n = len(per_read)
    return BenchReport(
        n=n,
        total_ops=total_ops,
        max_ops_per_read=max(per_read, default=0),
        amortised=(total_ops / n) if n else 0.0,
        wall_seconds=wall,
        reads_per_second=(n / wall) if wall > 0 else 0.0,
        counters=deltas,
        per_read=per_read,
    )


def format_report(report: BenchReport, label: str = "") -> str:
    """Human-readable block, one metric per line."""
    head = f"run {label}".rstrip()
    lines = [
        head,
        f"  elements read        {report.n}",
        f"  structural ops       {report.total_ops}",
        f"  worst single read    {report.max_ops_per_read}",
        f"  ops per element      {report.amortised:.3f}",
        f"  wall seconds         {report.wall_seconds:.4f}",
        f"  reads per second     {report.reads_per_second:.0f}",
    ]
    for name, value in report.counters.items():
        lines.append(f"  {name:<20} {value}")
    return "\n".join(lines)


def metric_lines(report: BenchReport) -> list[str]:
    """Delimited metric=value lines for scripting."""
    lines = [
        f"n={report.n}",
        f"total_ops={report.total_ops}",
        f"max_ops_per_read={report.max_ops_per_read}",
        f"amortised={report.amortised!r}",
        f"wall_seconds={report.wall_seconds!r}",
        f"reads_per_second={report.reads_per_second!r}",
    ]
    for name, value in report.counters.items():
        lines.append(f"{name}={value}")
    return lines


def write_csv(reports: Sequence[tuple[str, BenchReport]], path: Union[str, Path]) -> Path:
    path = Path(path)
    counter_names = list(reports[0][1].counters) if reports else []
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label", "n", "total_ops", "max_ops_per_read",
                         "amortised", "wall_seconds", "reads_per_second",
                         *counter_names])
        for label, report in reports:
            writer.writerow([label, report.n, report.total_ops,
                             report.max_ops_per_read, report.amortised,
                             report.wall_seconds, report.reads_per_second,
                             *[report.counters.get(c, 0) for c in counter_names]])
    return path


def render_figures(reports: Sequence[tuple[str, BenchReport]],
                   out_dir: Union[str, Path],
                   stem: str = "bench") -> list[Path]:
    """Render the measured series to PNG files and return their paths.

    One figure tracks amortised cost against stream size, the other the worst
    single read; flat lines are the whole point.
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    sizes = [report.n for _, report in reports]
    amortised = [report.amortised for _, report in reports]
    worst = [report.max_ops_per_read for _, report in reports]

    paths = []
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(sizes, amortised, marker="o")
    ax.set_xscale("log")
    ax.set_xlabel("stream elements")
    ax.set_ylabel("structural ops per element")
    ax.set_title("amortised cost per read")
    ax.set_ylim(bottom=0)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    amortised_path = out_dir / f"{stem}_amortised.png"
    fig.savefig(amortised_path, dpi=120)
    plt.close(fig)
    paths.append(amortised_path)

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(sizes, worst, marker="s", color="tab:orange")
    ax.set_xscale("log")
    ax.set_xlabel("stream elements")
    ax.set_ylabel("ops in the worst read")
    ax.set_title("worst single read")
    ax.set_ylim(bottom=0)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    worst_path = out_dir / f"{stem}_worst_read.png"
    fig.savefig(worst_path, dpi=120)
    plt.close(fig)
    paths.append(worst_path)
    return paths
