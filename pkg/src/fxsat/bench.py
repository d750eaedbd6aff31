"""Benchmark harness: repeated timed runs and the CSV report."""

from __future__ import annotations

import csv
import io
import statistics
import time
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

from .annotate import DEFAULT_TIMEOUT, Algorithm, Mode, SatReport, Verdict, is_satisfiable
from .curated import CuratedCase, decode_label
from .parser import parse_bgp_text
from .terms import Bgp

REPORT_HEADER = (
    "name", "satisfiable", "found", "type", "size",
    "ms_avg", "ms_std", "tested_avg", "tested_std",
)


@dataclass(frozen=True)
class BenchCase:
    name: str
    bgp: Bgp
    kind: str = "-"


@dataclass(frozen=True)
class BenchRow:
    name: str
    satisfiable: bool | None  # None marks a timeout
    found: int
    type: str
    size: int
    ms_avg: float
    ms_std: float
    tested_avg: float
    tested_std: float

    def __post_init__(self) -> None:
        if self.satisfiable is None and (self.found != -1 or self.ms_avg != -1):
            raise ValueError("timeout rows carry -1 for found and ms_avg")

    def as_csv_row(self) -> list[str]:
        sat = "TIMEOUT" if self.satisfiable is None else str(self.satisfiable).upper()
        return [
            self.name, sat, str(self.found), self.type, str(self.size),
            f"{self.ms_avg:.1f}", f"{self.ms_std:.2f}",
            f"{self.tested_avg:.1f}", f"{self.tested_std:.2f}",
        ]


def as_bench_cases(cases: Iterable[CuratedCase]) -> list[BenchCase]:
    return [BenchCase(c.label, c.bgp, c.kind) for c in cases]


def load_suite_dir(path: str | Path) -> list[BenchCase]:
    """Every ``.bgp`` file of a directory, named after its stem."""
    out = []
    for f in sorted(Path(path).glob("*.bgp")):
        try:
            kind = decode_label(f.stem).family[0]
        except ValueError:
            kind = "-"
        out.append(BenchCase(f.stem, parse_bgp_text(f.read_text("utf-8"), source=f.name), kind))
    return out


def _std(xs: Sequence[float]) -> float:
    return statistics.pstdev(xs) if len(xs) > 1 else 0.0


def run_case(
    case: BenchCase,
    algorithm: Algorithm,
    mode: Mode,
    repeats: int,
    timeout: float | None,
    warmup: bool = True,
) -> BenchRow:
    if warmup:
        is_satisfiable(case.bgp, algorithm, mode, timeout)
    times: list[float] = []
    tested: list[float] = []
    last: SatReport | None = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        last = is_satisfiable(case.bgp, algorithm, mode, timeout)
        times.append((time.perf_counter() - t0) * 1000.0)
        if last.verdict is Verdict.TIMEOUT:
            return BenchRow(case.name, None, -1, case.kind, len(case.bgp), -1.0, 0.0, -1.0, 0.0)
        tested.append(float(last.tested))
    assert last is not None
    return BenchRow(
        case.name,
        bool(last.satisfiable),
        last.found,
        case.kind,
        len(case.bgp),
        statistics.fmean(times),
        _std(times),
        statistics.fmean(tested),
        _std(tested),
    )


def run_benchmark(
    cases: Sequence[BenchCase],
    algorithm: Algorithm = Algorithm.BOTTOM_UP,
    mode: Mode = Mode.FIRST,
    repeats: int = 10,
    timeout: float | None = DEFAULT_TIMEOUT,
    warmup: bool = True,
) -> list[BenchRow]:
    """Runs every case ``repeats`` times, one at a time on this thread."""
    if not cases:
        raise ValueError("no benchmark cases")
    if repeats < 1:
        raise ValueError("repeats must be positive")
    return [run_case(c, algorithm, mode, repeats, timeout, warmup) for c in cases]


def report_csv(rows: Iterable[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_HEADER)
    for row in rows:
        w.writerow(row.as_csv_row())
    return buf.getvalue()
