from __future__ import annotations

import csv
import io
import json

import pytest
import rdflib
from rdflib.compare import isomorphic

from fxsat import __version__
from fxsat.cli import (
    CHECK_SCHEMA,
    EXIT_DATAERR,
    EXIT_OK,
    EXIT_TIMEOUT,
    EXIT_UNSAT,
    EXIT_USAGE,
    cli_main,
)
from fxsat.curated import fixture_text

from helpers import PEOPLE_CSV, PEOPLE_TURTLE, SURNAME_QUERY, TYPED_MEMBER_QUERY

EXPECTED_FOUND = {
    "S_1T": 6, "S_2J": 36, "S_2P_R": 1, "S_2T": 36, "S_3J": 60, "S_3P_C": 4, "S_3T": 216,
    "S_4J": 300, "S_4P_C": 8, "S_4T": 1296, "S_5P_C": 16, "S_5T": 7776,
}


@pytest.fixture
def files(tmp_path):
    paths = {
        "people.csv": PEOPLE_CSV,
        "surname.rq": SURNAME_QUERY,
        "typed.rq": TYPED_MEMBER_QUERY,
        "sat.bgp": fixture_text("S_3J"),
        "unsat.bgp": fixture_text("N_3P_C"),
        "slow.bgp": fixture_text("S_5T"),
        "broken.bgp": "?s ?p .\n",
        "bad.json": "{",
    }
    for name, text in paths.items():
        (tmp_path / name).write_text(text)
    return {name: str(tmp_path / name) for name in paths}


def test_check_exit_codes(files, capsys):
    assert cli_main(["check", files["sat.bgp"]]) == EXIT_OK
    assert "SATISFIABLE" in capsys.readouterr().out
    assert cli_main(["check", files["unsat.bgp"]]) == EXIT_UNSAT
    assert cli_main(["check", files["slow.bgp"], "--algo", "topdown", "--mode", "all",
                     "--timeout-ms", "20"]) == EXIT_TIMEOUT
    assert cli_main(["check", files["broken.bgp"]]) == EXIT_DATAERR
    assert cli_main(["check", files["sat.bgp"], "--mode", "sometimes"]) == EXIT_USAGE
    assert cli_main(["check"]) == EXIT_USAGE
    assert cli_main(["frobnicate"]) == EXIT_USAGE


def test_unsatisfiable_query_cites_the_role_conflict(files, capsys):
    assert cli_main(["check", files["typed.rq"]]) == EXIT_UNSAT
    out = capsys.readouterr().out
    assert "Container" in out and "Type" in out


def test_json_output(files, capsys):
    assert cli_main(["check", files["surname.rq"], "--json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["schema"] == CHECK_SCHEMA
    (result,) = payload["results"]
    assert result["verdict"] == "satisfiable" and result["satisfiable"] is True
    assert {"solutions", "tested", "elapsed_ms", "algorithm", "mode"} <= set(result)
    assert len(result["solutions"]) == 1


def test_annotate_lists_every_solution(files, capsys):
    assert cli_main(["annotate", files["sat.bgp"], "--json"]) == EXIT_OK
    (result,) = json.loads(capsys.readouterr().out)["results"]
    assert result["found"] == 60 and result["mode"] == "all"


def test_materialize_matches_the_expected_graph(files, tmp_path, capsys):
    out = tmp_path / "people.nt"
    assert cli_main(["materialize", files["people.csv"], "--triples", "-o", str(out)]) == EXIT_OK
    ours = rdflib.Graph().parse(out, format="nt")
    assert isomorphic(ours, rdflib.Graph().parse(data=PEOPLE_TURTLE, format="turtle"))
    assert cli_main(["materialize", files["people.csv"], "--entities", "iri"]) == EXIT_OK
    quads = capsys.readouterr().out
    assert len(quads.splitlines()) == 21 and "_:" not in quads
    assert cli_main(["materialize", files["bad.json"]]) == EXIT_DATAERR


def test_oracle_prints_bindings(files, capsys):
    assert cli_main(["oracle", files["surname.rq"], files["people.csv"], "--csv-headers"]) == EXIT_OK
    captured = capsys.readouterr()
    assert captured.out.splitlines() == ["?surname", '"Grey"']
    assert "# 1 binding(s)" in captured.err
    assert cli_main(["oracle", files["surname.rq"], files["people.csv"]]) == EXIT_UNSAT
    assert cli_main(["oracle", files["sat.bgp"], files["people.csv"], "--limit", "2"]) == EXIT_OK
    assert "# 2 binding(s)" in capsys.readouterr().err


def test_bench_found_column(tmp_path, capsys):
    report = tmp_path / "report.csv"
    args = ["bench", "--mode", "all", "--repeats", "1", "--no-warmup", "--report", str(report)]
    assert cli_main(args) == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(report.read_text())))
    assert len(rows) == 27
    found = {r["name"]: int(r["found"]) for r in rows if r["name"] in EXPECTED_FOUND}
    assert found == EXPECTED_FOUND
    assert all(r["satisfiable"] == ("TRUE" if r["name"][0] == "S" else "FALSE") for r in rows)


def test_bench_suite_directory(tmp_path, capsys):
    (tmp_path / "S_2J.bgp").write_text(fixture_text("S_2J"))
    assert cli_main(["bench", "--suite", str(tmp_path), "--repeats", "1"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[1].startswith("S_2J,TRUE,")
    assert cli_main(["bench", "--suite", str(tmp_path / "missing")]) == EXIT_USAGE
    empty = tmp_path / "empty"
    empty.mkdir()
    assert cli_main(["bench", "--suite", str(empty)]) == EXIT_USAGE


def test_verify(files, capsys):
    args = ["verify", files["sat.bgp"], files["unsat.bgp"], files["surname.rq"], files["typed.rq"],
            "--data", files["people.csv"], "--jobs", "2"]
    assert cli_main(args) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 4 and all(" AGREE " in line for line in lines)


def test_version_and_help(capsys):
    assert cli_main(["--version"]) == EXIT_OK
    assert __version__ in capsys.readouterr().out
    assert cli_main(["-h"]) == EXIT_OK
    out = capsys.readouterr().out
    for command in ("check", "annotate", "materialize", "oracle", "bench", "verify"):
        assert command in out
