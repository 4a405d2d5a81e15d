"""HTTP JSON API and the shared request/payload layer.

The CLI and the HTTP endpoints build their bodies through the same
functions here, so both surfaces emit byte-identical canonical JSON.
Every response carries the corpus snapshot identifier; indicator and
chart responses also echo the fully resolved filter. The API is
read-only: a snapshot swap installs a completely new corpus between
requests, never a partially loaded one.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping

from fastapi import FastAPI, Request, Response
from fastapi.staticfiles import StaticFiles

from .charts import (
    ChartKind,
    ChartSpec,
    DISTRIBUTION_KINDS,
    emit_distribution,
    emit_tagcloud,
    emit_timeseries,
    empty_chart,
)
from .corpus import Corpus, CorpusFilter, Region, corpus_digest, load_corpus
from .indicators import (
    DistributionResult,
    Granularity,
    Indicator,
    INDICATOR_GRANULARITIES,
    IndicatorQuery,
    QueryResult,
    query_result_to_dict,
    run_query,
)
from .jsonutil import canonical_json
from .records import ProjectStatus
from .schema import (
    DISCIPLINARY_AREAS,
    FUNDING_SURFACE,
    FundingType,
    QualificationType,
    ResearchTypeFlag,
)

API_PREFIX = "/api/v1"

INDICATOR_TITLES = {
    Indicator.ACTIVITY: "Research activity",
    Indicator.DISCIPLINE: "Disciplinary area",
    Indicator.FUNDING: "Type of funding",
    Indicator.QUALIFICATION: "Qualification theses",
}

# Chart kinds offered per indicator; mirrors the exploration UI's menu.
CHART_KINDS_BY_INDICATOR = {
    Indicator.ACTIVITY: (ChartKind.BAR, ChartKind.LINE_SERIES),
    Indicator.DISCIPLINE: (
        ChartKind.TAGCLOUD,
        ChartKind.PIE,
        ChartKind.DONUT,
        ChartKind.TREEMAP,
        ChartKind.BUBBLE,
    ),
    Indicator.FUNDING: (
        ChartKind.PIE,
        ChartKind.DONUT,
        ChartKind.TREEMAP,
        ChartKind.BUBBLE,
        ChartKind.TAGCLOUD,
        ChartKind.LINE_SERIES,
    ),
    Indicator.QUALIFICATION: (ChartKind.BAR, ChartKind.LINE_SERIES),
}


class ApiError(Exception):
    """Structured request error: {error, parameter?} with an HTTP status."""

    def __init__(self, status_code: int, message: str, parameter: str | None = None):
        super().__init__(message)
        self.status_code = status_code
        self.message = message
        self.parameter = parameter

    def payload(self) -> dict:
        body = {"error": self.message}
        if self.parameter is not None:
            body["parameter"] = self.parameter
        return body


def resolve_indicator(indicator_id: str) -> Indicator:
    try:
        return Indicator(indicator_id)
    except ValueError:
        raise ApiError(404, f"unknown indicator {indicator_id!r}", "indicator") from None


def _parse_year(params: Mapping[str, str], name: str) -> int | None:
    raw = params.get(name)
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise ApiError(400, f"parameter {name!r} must be an integer year", name) from None


def resolve_query(indicator_id: str, params: Mapping[str, str]) -> IndicatorQuery:
    """Total parameter parsing: defaults are dach region, no status, whole period."""
    indicator = resolve_indicator(indicator_id)

    status = None
    if params.get("status"):
        try:
            status = ProjectStatus(params["status"])
        except ValueError:
            raise ApiError(400, f"unknown status {params['status']!r}", "status") from None

    region = Region.DACH
    if params.get("region"):
        try:
            region = Region(params["region"])
        except ValueError:
            raise ApiError(400, f"unknown region {params['region']!r}", "region") from None

    year_from = _parse_year(params, "from")
    year_to = _parse_year(params, "to")
    if year_from is not None and year_to is not None and year_from > year_to:
        raise ApiError(400, "'from' must not exceed 'to'", "from")

    granularity = None
    if params.get("granularity"):
        try:
            granularity = Granularity(params["granularity"])
        except ValueError:
            raise ApiError(
                400, f"unknown granularity {params['granularity']!r}", "granularity"
            ) from None

    try:
        return IndicatorQuery(
            indicator=indicator,
            filter=CorpusFilter(
                status=status, region=region, year_from=year_from, year_to=year_to
            ),
            granularity=granularity,
        )
    except ValueError as exc:
        raise ApiError(400, str(exc), "granularity") from None


def resolve_chart_kind(indicator: Indicator, kind_id: str | None) -> ChartKind:
    if not kind_id:
        raise ApiError(400, "parameter 'kind' is required", "kind")
    try:
        kind = ChartKind(kind_id)
    except ValueError:
        raise ApiError(400, f"unknown chart kind {kind_id!r}", "kind") from None
    if kind not in CHART_KINDS_BY_INDICATOR[indicator]:
        raise ApiError(
            400,
            f"chart kind {kind.value!r} is not available for "
            f"indicator {indicator.value!r}",
            "kind",
        )
    return kind


def _granularity_for_kind(indicator: Indicator, kind: ChartKind) -> Granularity:
    if kind in (ChartKind.BAR, ChartKind.LINE_SERIES):
        return (
            Granularity.PER_YEAR
            if Granularity.PER_YEAR in INDICATOR_GRANULARITIES[indicator]
            else Granularity.TOTAL
        )
    return Granularity.TOTAL


def chart_title(indicator: Indicator, result: QueryResult) -> str:
    title = INDICATOR_TITLES[indicator]
    if result.resolved.year_from is not None and result.resolved.year_to is not None:
        title += f", {result.resolved.year_from}-{result.resolved.year_to}"
    return title


# --- payload builders (shared by CLI and HTTP) -------------------------------

def summary_payload(corpus: Corpus, snapshot: str) -> dict:
    summary = corpus.summary
    return {
        "snapshot": snapshot,
        "record_count": summary.record_count,
        "year_end_min": summary.year_end_min,
        "year_end_max": summary.year_end_max,
    }


def indicator_payload(corpus: Corpus, query: IndicatorQuery, snapshot: str) -> dict:
    result = run_query(corpus, query)
    payload = query_result_to_dict(result)
    payload["snapshot"] = snapshot
    return payload


def build_chart_spec(
    corpus: Corpus, indicator: Indicator, kind: ChartKind,
    query: IndicatorQuery, snapshot: str,
) -> ChartSpec:
    result = run_query(corpus, query)
    meta = {
        "indicator": indicator.value,
        "filter": result.resolved.to_dict(),
        "snapshot": snapshot,
    }
    title = chart_title(indicator, result)
    if result.empty or result.result is None:
        return empty_chart(kind, title, meta)
    if kind in (ChartKind.BAR, ChartKind.LINE_SERIES):
        return emit_timeseries(result.result, kind, title, meta)
    if kind is ChartKind.TAGCLOUD:
        assert isinstance(result.result, DistributionResult)
        return emit_tagcloud(result.result, title, meta)
    assert isinstance(result.result, DistributionResult)
    return emit_distribution(result.result, kind, title, meta)


def resolve_chart(
    corpus: Corpus, indicator_id: str, params: Mapping[str, str], snapshot: str
) -> ChartSpec:
    indicator = resolve_indicator(indicator_id)
    kind = resolve_chart_kind(indicator, params.get("kind"))
    query_params = dict(params)
    # the chart kind decides the granularity (series kinds are per-year)
    query_params["granularity"] = _granularity_for_kind(indicator, kind).value
    query = resolve_query(indicator_id, query_params)
    return build_chart_spec(corpus, indicator, kind, query, snapshot)


def chart_payload(
    corpus: Corpus, indicator_id: str, params: Mapping[str, str], snapshot: str
) -> dict:
    return resolve_chart(corpus, indicator_id, params, snapshot).to_dict()


def meta_schema_payload(snapshot: str) -> dict:
    from .config import load_attribute_mapping

    return {
        "snapshot": snapshot,
        "attribute_mapping": load_attribute_mapping(),
        "disciplinary_areas": list(DISCIPLINARY_AREAS),
        "funding_types": [ft.value for ft in FundingType],
        "funding_labels": {ft.value: FUNDING_SURFACE[ft] for ft in FundingType},
        "qualification_types": [q.value for q in QualificationType],
        "research_type_flags": [flag.value for flag in ResearchTypeFlag],
        "statuses": [status.value for status in ProjectStatus],
        "regions": [region.value for region in Region],
        "indicators": {
            indicator.value: {
                "title": INDICATOR_TITLES[indicator],
                "granularities": [
                    g.value for g in INDICATOR_GRANULARITIES[indicator]
                ],
                "chart_kinds": [
                    kind.value for kind in CHART_KINDS_BY_INDICATOR[indicator]
                ],
            }
            for indicator in Indicator
        },
    }


# --- application ------------------------------------------------------------

class SnapshotHolder:
    """Single-writer, multi-reader snapshot cell.

    ``swap`` installs a complete (corpus, digest) pair in one attribute
    assignment, so concurrent readers always see a consistent snapshot.
    """

    def __init__(self, corpus: Corpus, digest: str):
        self._state = (corpus, digest)

    @classmethod
    def from_file(cls, path: str | Path) -> "SnapshotHolder":
        return cls(load_corpus(path), corpus_digest(path))

    @property
    def snapshot(self) -> tuple[Corpus, str]:
        return self._state

    def swap(self, corpus: Corpus, digest: str) -> None:
        self._state = (corpus, digest)

    def reload_from_file(self, path: str | Path) -> None:
        self.swap(load_corpus(path), corpus_digest(path))


def _json_response(payload: dict, status_code: int = 200) -> Response:
    return Response(
        content=canonical_json(payload),
        status_code=status_code,
        media_type="application/json",
    )


def create_app(holder: SnapshotHolder, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="fieldmon", docs_url=None, redoc_url=None, openapi_url=None)

    @app.exception_handler(ApiError)
    async def handle_api_error(_request: Request, error: ApiError) -> Response:
        return _json_response(error.payload(), error.status_code)

    @app.get(API_PREFIX + "/corpus/summary")
    def get_summary() -> Response:
        corpus, digest = holder.snapshot
        return _json_response(summary_payload(corpus, digest))

    @app.get(API_PREFIX + "/indicators/{indicator_id}")
    def get_indicator(indicator_id: str, request: Request) -> Response:
        corpus, digest = holder.snapshot
        query = resolve_query(indicator_id, request.query_params)
        return _json_response(indicator_payload(corpus, query, digest))

    @app.get(API_PREFIX + "/charts/{indicator_id}")
    def get_chart(indicator_id: str, request: Request) -> Response:
        corpus, digest = holder.snapshot
        return _json_response(
            chart_payload(corpus, indicator_id, request.query_params, digest)
        )

    @app.get(API_PREFIX + "/meta/schema")
    def get_meta_schema() -> Response:
        _corpus, digest = holder.snapshot
        return _json_response(meta_schema_payload(digest))

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app


def serve(
    corpus_path: str | Path,
    bind: str = "127.0.0.1:8000",
    static_dir: str | Path | None = None,
) -> None:
    """Run the API over a corpus snapshot file (blocking)."""
    import uvicorn

    host, _, port_text = bind.rpartition(":")
    if not host or not port_text.isdigit():
        raise SystemExit(f"invalid bind address {bind!r}; expected host:port")
    holder = SnapshotHolder.from_file(corpus_path)
    app = create_app(holder, static_dir)
    uvicorn.run(app, host=host, port=int(port_text), log_level="info")
