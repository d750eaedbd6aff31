"""Command-line front end.

Exit codes: 0 satisfiable (or success), 1 unsatisfiable (or no match,
or a disagreement), 2 timeout, 64 usage error, 65 unreadable input.
"""

from __future__ import annotations

import json
import sys
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from . import __version__
from .annotate import Algorithm, Mode, SatReport, Verdict, is_satisfiable
from .bench import as_bench_cases, load_suite_dir, report_csv, run_benchmark
from .curated import curated_suite
from .facade.facadify import FORMATS, FacadifyError, facadify_file
from .facade.materialize import EntityMode, FxQuad, materialize, to_nquads, to_ntriples
from .facade.oracle import iter_matches
from .parser import ParseError, parse_file_text
from .terms import Annotation, Bgp, NodeKind
from .verify import Agreement, verify_bgp

EXIT_OK = 0
EXIT_UNSAT = 1
EXIT_TIMEOUT = 2
EXIT_USAGE = 64
EXIT_DATAERR = 65
CHECK_SCHEMA = "fxsat.check/1"


class InputError(click.ClickException):
    exit_code = EXIT_DATAERR


def _read_bgps(path: str) -> list[Bgp]:
    try:
        text = Path(path).read_text("utf-8")
        return parse_file_text(text, Path(path).name)
    except (ParseError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _read_quads(
    path: str, fmt: str | None, headers: bool, mode: EntityMode = EntityMode.BLANK_NODES
) -> frozenset[FxQuad]:
    try:
        return materialize(facadify_file(path, fmt, csv_headers=headers), mode)
    except FacadifyError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _exit_for(verdicts: Iterable[Verdict]) -> int:
    verdicts = set(verdicts)
    if Verdict.TIMEOUT in verdicts:
        return EXIT_TIMEOUT
    if Verdict.UNSATISFIABLE in verdicts:
        return EXIT_UNSAT
    return EXIT_OK


def _solution_table(sol: Annotation) -> list[str]:
    width = max((len(str(n)) for n in sol), default=0)
    return [f"  {str(n).ljust(width)}  {p}" for n, p in sol.items()]


def _report_json(source: str, index: int, report: SatReport) -> dict:
    return {
        "source": source,
        "bgp": index,
        "verdict": report.verdict.value,
        "satisfiable": report.satisfiable,
        "solutions": [{str(n): p.value for n, p in s.items()} for s in report.solutions],
        "found": report.found,
        "tested": report.tested,
        "elapsed_ms": round(report.elapsed * 1000.0, 3),
        "algorithm": report.algorithm.value,
        "mode": report.mode.value,
        "reason": report.reason,
    }


def _summary(report: SatReport) -> str:
    return (
        f"{report.verdict.value.upper()} ({report.algorithm.value}, {report.mode.value}, "
        f"found {report.found}, tested {report.tested}, {report.elapsed * 1000.0:.1f} ms)"
    )


_algo_option = click.option(
    "--algo", type=click.Choice([a.value for a in Algorithm]), default=Algorithm.BOTTOM_UP.value,
    show_default=True,
)
_timeout_option = click.option(
    "--timeout-ms", type=click.IntRange(min=1), default=5000, show_default=True,
)
_headers_option = click.option(
    "--csv-headers", is_flag=True, help="Use the first CSV row as column names."
)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="fxsat")
def main() -> None:
    """Static satisfiability checks for SPARQL BGPs over Façade-X graphs."""


def _analyse(file: str, algo: str, mode: Mode, timeout_ms: int, as_json: bool) -> int:
    bgps = _read_bgps(file)
    reports = [is_satisfiable(b, Algorithm(algo), mode, timeout_ms / 1000.0) for b in bgps]
    if as_json:
        payload = {
            "schema": CHECK_SCHEMA,
            "results": [_report_json(file, i, r) for i, r in enumerate(reports)],
        }
        click.echo(json.dumps(payload, indent=2))
    else:
        for i, report in enumerate(reports):
            prefix = f"{file}" if len(reports) == 1 else f"{file} [bgp {i + 1}/{len(reports)}]"
            click.echo(f"{prefix}: {_summary(report)}")
            if report.reason and report.verdict is not Verdict.SATISFIABLE:
                click.echo(f"  reason: {report.reason}")
            for k, sol in enumerate(report.solutions):
                if len(report.solutions) > 1:
                    click.echo(f"solution {k + 1}:")
                for line in _solution_table(sol):
                    click.echo(line)
    return _exit_for(r.verdict for r in reports)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@_algo_option
@click.option("--mode", type=click.Choice([m.value for m in Mode]), default=Mode.FIRST.value,
              show_default=True)
@_timeout_option
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
def check(file: str, algo: str, mode: str, timeout_ms: int, as_json: bool) -> int:
    """Decide whether the BGPs of FILE can match any Façade-X graph."""
    return _analyse(file, algo, Mode(mode), timeout_ms, as_json)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@_algo_option
@_timeout_option
@click.option("--json", "as_json", is_flag=True)
def annotate(file: str, algo: str, timeout_ms: int, as_json: bool) -> int:
    """Print every solution pattern of FILE as a node to predicate table."""
    return _analyse(file, algo, Mode.ALL, timeout_ms, as_json)


@main.command(name="materialize")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(sorted(FORMATS)), default=None,
              help="Input format; defaults to the file extension.")
@click.option("--entities", type=click.Choice([m.value for m in EntityMode]),
              default=EntityMode.BLANK_NODES.value, show_default=True)
@click.option("--triples", is_flag=True, help="Write N-Triples instead of N-Quads.")
@_headers_option
@click.option("-o", "--output", type=click.Path(dir_okay=False, writable=True), default=None)
def materialize_cmd(
    file: str, fmt: str | None, entities: str, triples: bool, csv_headers: bool, output: str | None
) -> int:
    """Write the Façade-X RDF of a CSV, JSON or XML file."""
    quads = _read_quads(file, fmt, csv_headers, EntityMode(entities))
    text = to_ntriples(quads) if triples else to_nquads(quads)
    if output is None:
        click.echo(text, nl=False)
    else:
        Path(output).write_text(text, "utf-8")
    return EXIT_OK


@main.command()
@click.argument("bgp_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("data_files", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(sorted(FORMATS)), default=None)
@_headers_option
@click.option("--limit", type=click.IntRange(min=1), default=None)
def oracle(
    bgp_file: str, data_files: Sequence[str], fmt: str | None, csv_headers: bool, limit: int | None
) -> int:
    """Evaluate a BGP over materialised data files and print the bindings."""
    bgps = _read_bgps(bgp_file)
    quads: set[FxQuad] = set()
    for f in data_files:
        quads |= _read_quads(f, fmt, csv_headers)
    total = 0
    for bgp in bgps:
        names = sorted({n.label for n in bgp.nodes() if n.kind is NodeKind.VARIABLE})
        click.echo("\t".join(f"?{n}" for n in names))
        for binding in iter_matches(bgp, quads):
            if limit is not None and total >= limit:
                break
            by_name = {n.label: v for n, v in binding.items() if n.kind is NodeKind.VARIABLE}
            click.echo("\t".join(str(by_name[n]) for n in names))
            total += 1
    click.echo(f"# {total} binding(s)", err=True)
    return EXIT_OK if total else EXIT_UNSAT


@main.command()
@click.option("--suite", default="curated", show_default=True,
              help="'curated' or a directory of .bgp files.")
@_algo_option
@click.option("--mode", type=click.Choice([m.value for m in Mode]), default=Mode.FIRST.value,
              show_default=True)
@click.option("--repeats", type=click.IntRange(min=1), default=10, show_default=True)
@_timeout_option
@click.option("--warmup/--no-warmup", default=True, show_default=True)
@click.option("--report", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Write the CSV here instead of standard output.")
def bench(
    suite: str, algo: str, mode: str, repeats: int, timeout_ms: int, warmup: bool,
    report: str | None,
) -> int:
    """Time the analyzer over a suite and emit the CSV report."""
    if suite == "curated":
        cases = as_bench_cases(curated_suite())
    elif Path(suite).is_dir():
        try:
            cases = load_suite_dir(suite)
        except ParseError as exc:
            raise InputError(str(exc)) from exc
        if not cases:
            raise click.UsageError(f"no .bgp files in {suite}")
    else:
        raise click.BadParameter(f"{suite!r} is neither 'curated' nor a directory", param_hint="--suite")
    rows = run_benchmark(cases, Algorithm(algo), Mode(mode), repeats, timeout_ms / 1000.0, warmup)
    text = report_csv(rows)
    if report is None:
        click.echo(text, nl=False)
    else:
        Path(report).write_text(text, "utf-8")
    return EXIT_OK


@main.command()
@click.argument("bgp_files", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--data", "data_files", multiple=True, type=click.Path(exists=True, dir_okay=False),
              help="Data file an unsatisfiable verdict must not match; repeatable.")
@_headers_option
@_timeout_option
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
def verify(
    bgp_files: Sequence[str], data_files: Sequence[str], csv_headers: bool, timeout_ms: int,
    jobs: int,
) -> int:
    """Cross-check analyzer verdicts against witnesses and the oracle."""
    datasets = [_read_quads(f, None, csv_headers) for f in data_files]
    work = [(f, i, b) for f in bgp_files for i, b in enumerate(_read_bgps(f))]

    def run(item: tuple[str, int, Bgp]):
        return verify_bgp(item[2], datasets, timeout_ms / 1000.0)

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(run, work))
    for (f, i, _), res in zip(work, results):
        click.echo(f"{f}#{i}: {res.agreement.value.upper()} {res.verdict.value}: {res.detail}")
    agreements = {r.agreement for r in results}
    if Agreement.DISAGREE in agreements:
        return EXIT_UNSAT
    if Agreement.TIMEOUT in agreements:
        return EXIT_TIMEOUT
    return EXIT_OK


def cli_main(argv: Sequence[str] | None = None) -> int:
    """Runs the CLI and returns its exit code instead of exiting."""
    try:
        rv = main.main(args=list(argv) if argv is not None else None,
                       prog_name="fxsat", standalone_mode=False)
    except InputError as exc:
        exc.show()
        return EXIT_DATAERR
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        click.echo("aborted", err=True)
        return EXIT_UNSAT
    return rv if isinstance(rv, int) else EXIT_OK


def run() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    run()
