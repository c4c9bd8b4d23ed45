"""Command line front end.

Subcommands: ``monitor`` streams verdicts for an automaton over a stream
file or stdin, ``gen`` writes automaton and stream files for the packaged
constructions, ``bench`` measures operation counts over generated streams
and renders report figures.  Exit codes: 0 success, 1 usage or parse
problems, 2 engine divergence.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Optional, TextIO

from .automata import AutomatonError, Rat, StreamError
from .bench import (
    BenchReport,
    STREAM_KINDS,
    format_report,
    gen_stream,
    metric_lines,
    render_figures,
    run_instrumented,
    write_csv,
)
from .constructions import (
    cel_pattern_automaton,
    cel_pattern_bindings,
    encode_discrete,
    frobenius_automaton,
    sliding_window,
    threesum_instance,
)
from .formats import (
    ParseError,
    emit_automaton,
    format_stream,
    format_verdict,
    iter_stream,
    parse_automaton,
    parse_nfa,
    parse_rat,
)
from .monitor import Monitor
from .oracle import NaiveMonitor


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors by default; 2 is reserved for
    engine divergence here, so usage problems exit 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_bindings(pairs: list[str]) -> dict[str, Rat]:
    bindings: dict[str, Rat] = {}
    for pair in pairs:
        name, eq, value = pair.partition("=")
        if not eq or not name:
            raise ParseError(f"binding must look like NAME=VALUE, got {pair!r}")
        bindings[name] = parse_rat(value)
    return bindings


def _open_stream(source: str) -> TextIO:
    if source == "-":
        return sys.stdin
    return open(source, "r")


def cmd_monitor(args: argparse.Namespace) -> int:
    if args.stats and args.engine == "naive":
        print("error: --stats needs the fast engine (use fast or both)", file=sys.stderr)
        return 1
    automaton = parse_automaton(Path(args.automaton).read_text())
    bindings = _parse_bindings(args.bind)
    fast = Monitor(automaton, bindings) if args.engine in ("fast", "both") else None
    naive = NaiveMonitor(automaton, bindings) if args.engine in ("naive", "both") else None
    primary = fast if fast is not None else naive

    counters = fast.counters if fast is not None else None
    per_read: list[int] = []
    wall_start = time.perf_counter()
    start_snapshot = counters.snapshot() if counters is not None else None

    verdict = _emit(args, None, primary.accepted(), step=0)
    if fast is not None and naive is not None and fast.accepted() != naive.accepted():
        print("engines diverge at step 0: "
              f"fast={_word(fast.accepted())} naive={_word(naive.accepted())}",
              file=sys.stderr)
        return 2

    handle = _open_stream(args.stream)
    try:
        for element in iter_stream(handle):
            before = counters.total() if counters is not None else 0
            verdict = primary.read(element)
            if counters is not None:
                per_read.append(counters.total() - before)
            if fast is not None and naive is not None:
                other = naive.read(element)
                if other.accepted != verdict.accepted:
                    print(f"engines diverge at step {verdict.step}: "
                          f"fast={_word(verdict.accepted)} naive={_word(other.accepted)}",
                          file=sys.stderr)
                    return 2
            _emit(args, verdict, verdict.accepted, step=verdict.step)
    finally:
        if handle is not sys.stdin:
            handle.close()
    if args.emit == "final":
        print(f"{primary.step} {_word(primary.accepted())}")
    if args.stats and counters is not None:
        wall = time.perf_counter() - wall_start
        names = list(counters.as_dict())
        deltas = {name: end - start for name, start, end
                  in zip(names, start_snapshot, counters.snapshot())}
        total_ops = sum(per_read)
        report = BenchReport(
            n=len(per_read),
            total_ops=total_ops,
            max_ops_per_read=max(per_read, default=0),
            amortised=(total_ops / len(per_read)) if per_read else 0.0,
            wall_seconds=wall,
            reads_per_second=(len(per_read) / wall) if wall > 0 else 0.0,
            counters=deltas,
            per_read=per_read,
        )
        print(format_report(report, label="monitor"))
        for line in metric_lines(report):
            print(line)
    return 0


def _word(accepted: bool) -> str:
    return "accept" if accepted else "reject"


def _emit(args: argparse.Namespace, verdict, accepted: bool, step: int):
    if args.emit == "each" and step > 0:
        print(f"{step} {_word(accepted)}")
    return verdict


def cmd_gen(args: argparse.Namespace) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    hint = ""
    if args.construction == "window":
        nfa = parse_nfa(Path(args.regex_dfa).read_text())
        token = args.C
        try:
            value: Optional[Rat] = parse_rat(token)
        except ParseError:
            value = None
        name = "C" if value is not None else token
        automaton = sliding_window(nfa, name)
        path = out_dir / "window.ta"
        path.write_text(emit_automaton(automaton))
        written.append(path)
        if value is not None:
            if value <= 0:
                raise AutomatonError(f"window must be positive, got {value}")
            hint = f"monitor with --bind {name}={value}"
        else:
            hint = f"monitor with --bind {name}=<window>"
    elif args.construction == "cel-fig2":
        automaton = cel_pattern_automaton()
        path = out_dir / "cel_pattern.ta"
        path.write_text(emit_automaton(automaton))
        written.append(path)
        if args.word:
            word = args.word.split() if any(ch.isspace() for ch in args.word) else list(args.word)
            stream_path = out_dir / "cel_pattern_stream.txt"
            stream_path.write_text(format_stream(encode_discrete(word)))
            written.append(stream_path)
        bindings = cel_pattern_bindings()
        hint = "monitor with " + " ".join(
            f"--bind {name}={value}" for name, value in sorted(bindings.items()))
    elif args.construction == "frobenius":
        coins = [int(v) for v in args.ks.split(",") if v]
        automaton = frobenius_automaton(coins)
        path = out_dir / "frobenius.ta"
        path.write_text(emit_automaton(automaton))
        written.append(path)
        stream_path = out_dir / "frobenius_stream.txt"
        stream_path.write_text(format_stream(encode_discrete(["a"] * args.h)))
        written.append(stream_path)
    else:
        values = [parse_rat(v) for v in args.set.split(",") if v]
        instance = threesum_instance(values)
        path = out_dir / "threesum.ta"
        path.write_text(emit_automaton(instance.automaton))
        written.append(path)
        stream_path = out_dir / "threesum_stream.txt"
        stream_path.write_text(format_stream(instance.word))
        written.append(stream_path)
    for path in written:
        print(f"wrote {path}")
    if hint:
        print(hint)
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    automaton = parse_automaton(Path(args.automaton).read_text())
    bindings = _parse_bindings(args.bind)
    sizes = [int(s) for s in args.sizes.split(",") if s]
    if not sizes or any(s <= 0 for s in sizes):
        raise ParseError(f"sizes must be positive integers, got {args.sizes!r}")
    reports: list[tuple[str, BenchReport]] = []
    for size in sizes:
        monitor = Monitor(automaton, bindings)
        constants = monitor.partition.constants
        unit = Fraction(1)
        if args.kind == "adversarial_burst" and len(constants) > 1:
            unit = min(Fraction(1), constants[1])
        burst = constants[-1] + 1
        stream = gen_stream(args.kind, size, args.seed,
                            alphabet=automaton.alphabet, unit=unit, burst=burst)
        report = run_instrumented(monitor, stream)
        label = f"{args.kind} n={size}"
        reports.append((label, report))
        print(format_report(report, label=label))
        for line in metric_lines(report):
            print(line)
        print()
    if args.out_dir is not None:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = write_csv(reports, out_dir / "bench.csv")
        figure_paths = render_figures(reports, out_dir)
        for path in [csv_path, *figure_paths]:
            print(f"wrote {path}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="tamon", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    monitor = sub.add_parser("monitor", help="stream verdicts for an automaton")
    monitor.add_argument("--automaton", required=True, help="automaton file")
    monitor.add_argument("--bind", action="append", default=[], metavar="NAME=RAT",
                         help="bind a named constant (repeatable)")
    monitor.add_argument("--stream", required=True, help="stream file, or - for stdin")
    monitor.add_argument("--engine", choices=("fast", "naive", "both"), default="fast")
    monitor.add_argument("--emit", choices=("each", "final"), default="each")
    monitor.add_argument("--stats", action="store_true",
                         help="append an operation-count report")
    monitor.set_defaults(func=cmd_monitor)

    gen = sub.add_parser("gen", help="write construction automata and streams")
    gen_sub = gen.add_subparsers(dest="construction", required=True)
    window = gen_sub.add_parser("window", help="sliding-window membership automaton")
    window.add_argument("--regex-dfa", required=True, dest="regex_dfa",
                        help="finite automaton file")
    window.add_argument("--C", required=True,
                        help="window length (number, or a parameter name)")
    window.add_argument("--out-dir", default=".", dest="out_dir")
    window.set_defaults(func=cmd_gen)
    cel = gen_sub.add_parser("cel-fig2", help="the worked within-pattern automaton")
    cel.add_argument("--word", default="",
                     help="also emit the word's discrete stream encoding")
    cel.add_argument("--out-dir", default=".", dest="out_dir")
    cel.set_defaults(func=cmd_gen)
    frobenius = gen_sub.add_parser("frobenius", help="coin representability automaton")
    frobenius.add_argument("--ks", required=True, help="comma-separated coin values")
    frobenius.add_argument("--h", required=True, type=int, help="stream length in letters")
    frobenius.add_argument("--out-dir", default=".", dest="out_dir")
    frobenius.set_defaults(func=cmd_gen)
    threesum = gen_sub.add_parser("threesum", help="3SUM word and additive automaton")
    threesum.add_argument("--set", required=True, help="comma-separated positive rationals")
    threesum.add_argument("--out-dir", default=".", dest="out_dir")
    threesum.set_defaults(func=cmd_gen)

    bench = sub.add_parser("bench", help="measure operation counts per stream size")
    bench.add_argument("--automaton", required=True)
    bench.add_argument("--bind", action="append", default=[], metavar="NAME=RAT")
    bench.add_argument("--kind", choices=STREAM_KINDS, default="discrete")
    bench.add_argument("--sizes", default="1000,10000,100000",
                       help="comma-separated stream sizes")
    bench.add_argument("--seed", type=int, default=7)
    bench.add_argument("--out-dir", default=None, dest="out_dir",
                       help="also write CSV and figures here")
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, AutomatonError, StreamError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
