"""The four field indicators computed over a filtered corpus.

Every per-year indicator attributes a project to its completion year;
projects without one cannot be placed on the time axis and are skipped
by year-keyed tallies. Funding counts are absolute: a project counts
once per funding type it carries, and no percentages are computed
anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Union

from .corpus import Corpus, CorpusFilter, filter_records
from .records import ProjectRecord
from .schema import DISCIPLINARY_AREAS, FundingType, QualificationType


class Indicator(Enum):
    ACTIVITY = "activity"
    DISCIPLINE = "discipline"
    FUNDING = "funding"
    QUALIFICATION = "qualification"


class Granularity(Enum):
    TOTAL = "total"
    PER_YEAR = "per_year"


# Which granularities each indicator supports; the first entry is the default.
INDICATOR_GRANULARITIES = {
    Indicator.ACTIVITY: (Granularity.PER_YEAR,),
    Indicator.DISCIPLINE: (Granularity.TOTAL,),
    Indicator.FUNDING: (Granularity.TOTAL, Granularity.PER_YEAR),
    Indicator.QUALIFICATION: (Granularity.PER_YEAR,),
}

FUNDING_ORDER = (FundingType.IN_HOUSE, FundingType.THIRD_PARTY, FundingType.CONTRACT)
QUALIFICATION_ORDER = (QualificationType.DOCTORAL, QualificationType.HABILITATION)


@dataclass(frozen=True)
class YearSeries:
    """Counts over a contiguous, zero-filled year domain."""

    year_from: int
    year_to: int
    counts: dict[int, int]

    def __post_init__(self):
        if self.year_from > self.year_to:
            raise ValueError("year_from must not exceed year_to")
        expected = list(range(self.year_from, self.year_to + 1))
        if list(self.counts.keys()) != expected:
            raise ValueError("counts must cover every year of the domain in order")
        if any(count < 0 for count in self.counts.values()):
            raise ValueError("counts must be non-negative")

    @property
    def years(self) -> list[int]:
        return list(self.counts.keys())

    @property
    def values(self) -> list[int]:
        return list(self.counts.values())

    @classmethod
    def tally(cls, years: Iterable[int], year_from: int, year_to: int) -> "YearSeries":
        counts = {year: 0 for year in range(year_from, year_to + 1)}
        for year in years:
            if year_from <= year <= year_to:
                counts[year] += 1
        return cls(year_from=year_from, year_to=year_to, counts=counts)


@dataclass(frozen=True)
class MultiSeries:
    """Several labeled year series over one shared domain."""

    series: dict[str, YearSeries]

    def __post_init__(self):
        domains = {(s.year_from, s.year_to) for s in self.series.values()}
        if len(domains) > 1:
            raise ValueError("all series must share one year domain")

    @property
    def year_from(self) -> int:
        return next(iter(self.series.values())).year_from

    @property
    def year_to(self) -> int:
        return next(iter(self.series.values())).year_to


@dataclass(frozen=True)
class DistributionResult:
    """Absolute category counts plus the number of contributing projects."""

    counts: dict[str, int]
    total_projects: int
    unmapped: dict[str, int] = field(default_factory=dict)


IndicatorResult = Union[YearSeries, MultiSeries, DistributionResult]


@dataclass(frozen=True)
class IndicatorQuery:
    indicator: Indicator
    filter: CorpusFilter = CorpusFilter()
    granularity: Granularity | None = None

    def __post_init__(self):
        allowed = INDICATOR_GRANULARITIES[self.indicator]
        if self.granularity is None:
            object.__setattr__(self, "granularity", allowed[0])
        elif self.granularity not in allowed:
            raise ValueError(
                f"indicator {self.indicator.value} does not support "
                f"granularity {self.granularity.value}"
            )


def research_activity(
    records: Iterable[ProjectRecord], year_from: int, year_to: int
) -> YearSeries:
    """Number of projects completed per year."""
    return YearSeries.tally(
        (r.year_end for r in records if r.year_end is not None), year_from, year_to
    )


def disciplinary_area(
    records: Iterable[ProjectRecord], mapping: dict[str, str] | None = None
) -> DistributionResult:
    """Distribution over the twelve canonical areas.

    Classifications the mapping does not cover land in the ``unmapped``
    bucket (keyed by surface form; empty string for records without any
    classification) so nothing is silently dropped.
    """
    if mapping is None:
        from .config import load_area_mapping

        mapping = load_area_mapping()
    if set(mapping.values()) != set(DISCIPLINARY_AREAS):
        raise ValueError("area mapping must cover exactly the twelve canonical areas")
    counts = {area: 0 for area in DISCIPLINARY_AREAS}
    unmapped: dict[str, int] = {}
    total = 0
    for record in records:
        area = mapping.get(record.main_classification.lower()) if record.main_classification else None
        if area is None:
            key = record.main_classification
            unmapped[key] = unmapped.get(key, 0) + 1
        else:
            counts[area] += 1
            total += 1
    return DistributionResult(
        counts=counts, total_projects=total, unmapped=dict(sorted(unmapped.items()))
    )


def funding_type(
    records: Iterable[ProjectRecord],
    granularity: Granularity,
    year_from: int | None = None,
    year_to: int | None = None,
) -> DistributionResult | MultiSeries:
    """Absolute funding-type counts; multi-funded projects count once per type."""
    records = list(records)
    if granularity is Granularity.TOTAL:
        counts = {ft.value: 0 for ft in FUNDING_ORDER}
        total = 0
        for record in records:
            if record.funding_types:
                total += 1
            for ft in record.funding_types:
                counts[ft.value] += 1
        return DistributionResult(counts=counts, total_projects=total)
    if year_from is None or year_to is None:
        raise ValueError("per-year funding requires a year range")
    return MultiSeries(
        series={
            ft.value: YearSeries.tally(
                (
                    r.year_end
                    for r in records
                    if r.year_end is not None and ft in r.funding_types
                ),
                year_from,
                year_to,
            )
            for ft in FUNDING_ORDER
        }
    )


def qualification(
    records: Iterable[ProjectRecord], year_from: int, year_to: int
) -> MultiSeries:
    """Completed doctoral and habilitation theses per year."""
    records = list(records)
    return MultiSeries(
        series={
            q.value: YearSeries.tally(
                (
                    r.year_end
                    for r in records
                    if r.year_end is not None and r.qualification is q
                ),
                year_from,
                year_to,
            )
            for q in QUALIFICATION_ORDER
        }
    )


@dataclass(frozen=True)
class ResolvedFilter:
    """Filter echo with the year range made explicit."""

    status: str | None
    region: str
    year_from: int | None
    year_to: int | None
    whole_period: bool

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "region": self.region,
            "year_from": self.year_from,
            "year_to": self.year_to,
            "whole_period": self.whole_period,
        }


@dataclass(frozen=True)
class QueryResult:
    indicator: Indicator
    granularity: Granularity
    resolved: ResolvedFilter
    empty: bool
    result: IndicatorResult | None


def run_query(
    corpus: Corpus, query: IndicatorQuery, area_mapping: dict[str, str] | None = None
) -> QueryResult:
    """Filter, resolve the default whole-period year range, and compute.

    Without explicit bounds the range becomes [min, max] completion year
    of the filtered set; if that set has no completion years a per-year
    query returns the explicit empty marker instead of a fabricated
    range.
    """
    corpus_filter = query.filter
    records = filter_records(corpus, corpus_filter)
    whole_period = corpus_filter.year_from is None and corpus_filter.year_to is None
    year_from, year_to = corpus_filter.year_from, corpus_filter.year_to
    if year_from is None or year_to is None:
        years = [r.year_end for r in records if r.year_end is not None]
        if years:
            if year_from is None:
                year_from = min(years)
            if year_to is None:
                year_to = max(years)

    resolved = ResolvedFilter(
        status=corpus_filter.status.value if corpus_filter.status else None,
        region=corpus_filter.region.value,
        year_from=year_from,
        year_to=year_to,
        whole_period=whole_period,
    )

    if query.granularity is Granularity.PER_YEAR and (year_from is None or year_to is None):
        return QueryResult(
            indicator=query.indicator,
            granularity=query.granularity,
            resolved=resolved,
            empty=True,
            result=None,
        )

    if query.indicator is Indicator.ACTIVITY:
        result: IndicatorResult = research_activity(records, year_from, year_to)
    elif query.indicator is Indicator.DISCIPLINE:
        result = disciplinary_area(records, area_mapping)
    elif query.indicator is Indicator.FUNDING:
        result = funding_type(records, query.granularity, year_from, year_to)
    else:
        result = qualification(records, year_from, year_to)

    return QueryResult(
        indicator=query.indicator,
        granularity=query.granularity,
        resolved=resolved,
        empty=False,
        result=result,
    )


def result_to_dict(result: IndicatorResult | None) -> dict | None:
    """Wire form of an indicator result; absolute counts only."""
    if result is None:
        return None
    if isinstance(result, YearSeries):
        return {
            "type": "year_series",
            "year_from": result.year_from,
            "year_to": result.year_to,
            "years": result.years,
            "values": result.values,
        }
    if isinstance(result, MultiSeries):
        return {
            "type": "multi_series",
            "year_from": result.year_from,
            "year_to": result.year_to,
            "years": list(range(result.year_from, result.year_to + 1)),
            "series": {label: series.values for label, series in result.series.items()},
        }
    return {
        "type": "distribution",
        "counts": dict(result.counts),
        "total_projects": result.total_projects,
        "unmapped": dict(result.unmapped),
    }


def query_result_to_dict(query_result: QueryResult) -> dict:
    return {
        "indicator": query_result.indicator.value,
        "granularity": query_result.granularity.value,
        "filter": query_result.resolved.to_dict(),
        "empty": query_result.empty,
        "result": result_to_dict(query_result.result),
    }
