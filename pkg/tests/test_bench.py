from __future__ import annotations

import csv
import io
import re
import time

import pytest

from fxsat.annotate import Algorithm, Mode, is_satisfiable
from fxsat.bench import (
    REPORT_HEADER,
    BenchCase,
    BenchRow,
    as_bench_cases,
    load_suite_dir,
    report_csv,
    run_benchmark,
)
from fxsat.curated import curated_suite, load_case, fixture_text
from fxsat.facade.facadify import facadify_csv
from fxsat.facade.materialize import materialize
from fxsat.facade.oracle import bgp_match
from fxsat.parser import extract_bgps_from_query

from helpers import SURNAME_QUERY, bgp

SMALL = as_bench_cases([load_case(label) for label in ("S_1T", "N_2J", "S_3P_C")])


def _rows(text: str) -> list[list[str]]:
    return list(csv.reader(io.StringIO(text)))


def test_report_header_and_formatting():
    text = report_csv(run_benchmark(SMALL, repeats=2))
    rows = _rows(text)
    assert tuple(rows[0]) == REPORT_HEADER
    assert [r[0] for r in rows[1:]] == ["S_1T", "N_2J", "S_3P_C"]
    assert [r[1] for r in rows[1:]] == ["TRUE", "FALSE", "TRUE"]
    assert [r[3] for r in rows[1:]] == ["T", "J", "P"]
    for r in rows[1:]:
        assert re.fullmatch(r"\d+\.\d", r[5]) and re.fullmatch(r"\d+\.\d\d", r[6])
        assert re.fullmatch(r"\d+\.\d", r[7]) and r[8] == "0.00"


def test_single_repeat_has_zero_spread():
    for row in run_benchmark(SMALL, repeats=1):
        assert row.ms_std == 0.0 and row.tested_std == 0.0


def test_report_is_stable_except_timings():
    def stable(text):
        return [r[:5] + r[7:] for r in _rows(text)]

    a = report_csv(run_benchmark(SMALL, repeats=3))
    b = report_csv(run_benchmark(SMALL, repeats=3))
    assert stable(a) == stable(b)


def test_complete_mode_found_column():
    rows = run_benchmark(as_bench_cases([load_case("S_3J"), load_case("S_4P_C")]), mode=Mode.ALL,
                         repeats=1)
    assert [(r.found, r.tested_avg) for r in rows] == [(60, 432.0), (8, 54.0)]


def test_timeouts_use_the_minus_one_convention():
    (row,) = run_benchmark(as_bench_cases([load_case("S_3T")]), Algorithm.TOP_DOWN, Mode.ALL,
                           repeats=3, timeout=0.05, warmup=False)
    assert row.satisfiable is None
    assert (row.found, row.ms_avg, row.tested_avg) == (-1, -1.0, -1.0)
    assert row.as_csv_row()[1] == "TIMEOUT"
    with pytest.raises(ValueError):
        BenchRow("x", None, 3, "T", 1, 1.0, 0.0, 1.0, 0.0)


def test_bad_arguments():
    with pytest.raises(ValueError):
        run_benchmark([])
    with pytest.raises(ValueError):
        run_benchmark(SMALL, repeats=0)


def test_suite_directories(tmp_path):
    (tmp_path / "S_2J.bgp").write_text(fixture_text("S_2J"))
    (tmp_path / "mine.bgp").write_text("?s ?p ?o .\n")
    (tmp_path / "notes.txt").write_text("ignored")
    cases = load_suite_dir(tmp_path)
    assert [(c.name, c.kind) for c in cases] == [("S_2J", "J"), ("mine", "-")]
    assert cases[1] == BenchCase("mine", bgp("?s ?p ?o ."), "-")


def _people_rows(n: int) -> str:
    lines = ["email,name,surname"]
    lines += [f"p{i}@example.com,Name{i},Surname{i}" for i in range(n)]
    lines[n // 2] = "laura@example.com,Laura,Grey"
    return "\n".join(lines) + "\n"


def test_checking_is_far_cheaper_than_loading_data():
    data = _people_rows(10_000)
    (query,) = extract_bgps_from_query(SURNAME_QUERY).bgps
    t0 = time.perf_counter()
    quads = materialize(facadify_csv(data, "http://example.org/people", headers=True))
    found = bgp_match(query, quads)
    loading = time.perf_counter() - t0
    assert len(found) == 1

    slowest = 0.0
    for case in curated_suite():
        t0 = time.perf_counter()
        is_satisfiable(case.bgp)
        slowest = max(slowest, time.perf_counter() - t0)
    assert slowest * 10 <= loading, (slowest, loading)
