"""Command line surface: ingest, indicator, chart, serve.

Indicator and chart output is the same canonical JSON the HTTP API
serves, so scripted use and the API are interchangeable.
"""

from __future__ import annotations

import sys
from datetime import date
from pathlib import Path

import click

from .corpus import corpus_digest, ingest_pages, ingest_tabular, load_corpus, save_corpus
from .jsonutil import canonical_json
from .service import (
    ApiError,
    indicator_payload,
    resolve_chart,
    resolve_query,
    serve as run_server,
)
from .svg import render_svg


def _fail(error: ApiError) -> "click.exceptions.Exit":
    click.echo(canonical_json(error.payload()), err=True)
    return click.exceptions.Exit(2)


def _filter_params(status, region, year_from, year_to, granularity=None) -> dict:
    params = {}
    if status:
        params["status"] = status
    if region:
        params["region"] = region
    if year_from is not None:
        params["from"] = str(year_from)
    if year_to is not None:
        params["to"] = str(year_to)
    if granularity:
        params["granularity"] = granularity
    return params


filter_options = [
    click.option("--status", type=str, default=None, help="completed, starting or current"),
    click.option("--region", type=str, default=None, help="germany or dach (default dach)"),
    click.option("--from", "year_from", type=int, default=None, help="first year of the slice"),
    click.option("--to", "year_to", type=int, default=None, help="last year of the slice"),
]


def with_filter_options(command):
    for option in reversed(filter_options):
        command = option(command)
    return command


@click.group()
def main():
    """Monitoring engine for wiki-encoded research-project corpora."""


@main.command()
@click.option("--pages", type=click.Path(exists=True, file_okay=False), default=None,
              help="directory of .wiki page files")
@click.option("--tabular", type=click.Path(exists=True, dir_okay=False), default=None,
              help="tab-separated record file (wiki-bypass import)")
@click.option("--schema", type=click.Path(exists=True, dir_okay=False), default=None,
              help="attribute declarations (default: packaged table)")
@click.option("--rules", type=click.Path(exists=True, dir_okay=False), default=None,
              help="derivation rules (default: packaged table)")
@click.option("--out", required=True, type=click.Path(dir_okay=False),
              help="corpus snapshot file to write")
@click.option("--reference-date", type=str, default=None,
              help="YYYY-MM-DD used for status derivation (default: today)")
def ingest(pages, tabular, schema, rules, out, reference_date):
    """Build a corpus snapshot from pages or from a tabular file."""
    if (pages is None) == (tabular is None):
        raise click.UsageError("exactly one of --pages or --tabular is required")
    reference = date.fromisoformat(reference_date) if reference_date else None
    if pages is not None:
        from .config import load_derivation_rules, load_schema

        corpus, report = ingest_pages(
            pages,
            schema=load_schema(schema) if schema else None,
            rules=load_derivation_rules(rules) if rules else None,
            reference_date=reference,
        )
    else:
        corpus, report = ingest_tabular(tabular, reference_date=reference)
    save_corpus(corpus, out)
    payload = report.to_dict()
    payload["snapshot"] = corpus_digest(out)
    payload["out"] = str(out)
    click.echo(canonical_json(payload))


@main.command()
@click.argument("indicator_id", metavar="INDICATOR")
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@with_filter_options
@click.option("--granularity", type=str, default=None, help="total or per_year")
def indicator(indicator_id, corpus_path, status, region, year_from, year_to, granularity):
    """Compute one indicator; canonical JSON on standard output."""
    corpus = load_corpus(corpus_path)
    snapshot = corpus_digest(corpus_path)
    params = _filter_params(status, region, year_from, year_to, granularity)
    try:
        query = resolve_query(indicator_id, params)
        payload = indicator_payload(corpus, query, snapshot)
    except ApiError as error:
        raise _fail(error)
    click.echo(canonical_json(payload))


@main.command()
@click.argument("indicator_id", metavar="INDICATOR")
@click.option("--kind", required=True, type=str,
              help="bar, line_series, pie, donut, treemap, bubble or tagcloud")
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False),
              help="output file: .svg or .json")
@with_filter_options
def chart(indicator_id, kind, corpus_path, out, status, region, year_from, year_to):
    """Emit a chart as SVG or as its canonical JSON spec."""
    corpus = load_corpus(corpus_path)
    snapshot = corpus_digest(corpus_path)
    params = _filter_params(status, region, year_from, year_to)
    params["kind"] = kind
    try:
        spec = resolve_chart(corpus, indicator_id, params, snapshot)
    except ApiError as error:
        raise _fail(error)
    out_path = Path(out)
    if out_path.suffix == ".svg":
        out_path.write_text(render_svg(spec), encoding="utf-8")
    elif out_path.suffix == ".json":
        out_path.write_text(canonical_json(spec.to_dict()) + "\n", encoding="utf-8")
    else:
        raise click.UsageError("--out must end in .svg or .json")
    click.echo(str(out_path))


@main.command()
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--bind", default="127.0.0.1:8000", show_default=True)
@click.option("--static", "static_dir", type=click.Path(exists=True, file_okay=False),
              default=None, help="directory of UI assets to serve at /")
def serve(corpus_path, bind, static_dir):
    """Serve the read-only JSON API (and optionally the UI) over a snapshot."""
    run_server(corpus_path, bind, static_dir)


if __name__ == "__main__":
    sys.exit(main())
