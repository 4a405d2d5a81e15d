"""Project records assembled from typed facts.

One record per wiki page, populated through the editable attribute
mapping. Status is derived from the duration dates relative to a
reference date, since the corpus carries no explicit status field.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import date
from enum import Enum

from .schema import (
    CATEGORY_ATTRIBUTE,
    Fact,
    FundingType,
    QualificationType,
    ResearchTypeFlag,
    fact_value_as_text,
    parse_date,
    parse_funding_label,
    parse_qualification_label,
    parse_research_type,
)
from .wikitext import Diagnostic, PageName


class Country(Enum):
    DE = "DE"
    AT = "AT"
    CH = "CH"
    UNKNOWN = "unknown"


class ProjectStatus(Enum):
    COMPLETED = "completed"
    STARTING = "starting"
    CURRENT = "current"


@dataclass(frozen=True)
class ProjectRecord:
    id: str
    title: str
    duration_from: date | None = None
    duration_to: date | None = None
    year_start: int | None = None
    year_end: int | None = None
    research_types: frozenset[ResearchTypeFlag] = frozenset()
    funding_types: frozenset[FundingType] = frozenset()
    qualification: QualificationType | None = None
    main_classification: str = ""
    disciplinary_area: str | None = None
    keywords: tuple[str, ...] = ()
    institutions: tuple[str, ...] = ()
    institution_count: int = 0
    persons: tuple[str, ...] = ()
    country: Country = Country.UNKNOWN
    status: ProjectStatus = ProjectStatus.CURRENT
    extras: tuple[tuple[str, tuple[str, ...]], ...] = field(default=())

    def __post_init__(self):
        if not self.id.strip():
            raise ValueError("record id must be non-empty")
        if (
            self.duration_from is not None
            and self.duration_to is not None
            and self.duration_from > self.duration_to
        ):
            raise ValueError(f"record {self.id}: duration_from after duration_to")
        if (
            self.year_start is not None
            and self.year_end is not None
            and self.year_start > self.year_end
        ):
            raise ValueError(f"record {self.id}: year_start after year_end")
        if self.institutions and self.institution_count != len(self.institutions):
            raise ValueError(f"record {self.id}: institution_count mismatch")


def derive_status(
    duration_from: date | None, duration_to: date | None, reference_date: date
) -> ProjectStatus:
    if duration_to is not None and duration_to < reference_date:
        return ProjectStatus.COMPLETED
    if duration_from is not None and duration_from > reference_date:
        return ProjectStatus.STARTING
    return ProjectStatus.CURRENT


def _as_date(value) -> date | None:
    if isinstance(value, date):
        return value
    return parse_date(fact_value_as_text(value))


def _as_year(value) -> int | None:
    if isinstance(value, bool):
        return None
    if isinstance(value, int):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return None


def assemble_record(
    facts: list[Fact],
    reference_date: date,
    page_name: PageName | None = None,
    *,
    attribute_mapping: dict[str, list[str]] | None = None,
    synonyms: dict[str, ResearchTypeFlag] | None = None,
    area_mapping: dict[str, str] | None = None,
) -> tuple[ProjectRecord, list[Diagnostic]]:
    """Build one project record from the facts of a single page.

    Fields come from the attribute mapping; facts for attributes the
    mapping does not consume land in the record's extras bag. Where the
    page carries no id, the page name serves as id.
    """
    from .config import load_area_mapping, load_attribute_mapping, load_research_type_synonyms

    if attribute_mapping is None:
        attribute_mapping = load_attribute_mapping()
    if synonyms is None:
        synonyms = load_research_type_synonyms()
    if area_mapping is None:
        area_mapping = load_area_mapping()

    subjects = {fact.subject for fact in facts}
    if len(subjects) > 1:
        raise ValueError(f"facts span multiple pages: {sorted(s.render() for s in subjects)}")
    if page_name is None:
        if not subjects:
            raise ValueError("page_name required when no facts are given")
        page_name = next(iter(subjects))

    by_attribute: dict[str, list[Fact]] = {}
    for fact in facts:
        by_attribute.setdefault(fact.attribute, []).append(fact)

    consumed: set[str] = set()
    diagnostics: list[Diagnostic] = []

    def values(record_field: str) -> list:
        """Fact values for the first mapped attribute that has any."""
        for attribute in attribute_mapping.get(record_field, []):
            consumed.add(attribute)
            if attribute in by_attribute:
                return [fact.value for fact in by_attribute[attribute]]
        return []

    def texts(record_field: str) -> list[str]:
        # blank values mean "absent" (templates with empty defaults produce them)
        return [
            text
            for text in (fact_value_as_text(v) for v in values(record_field))
            if text.strip()
        ]

    id_values = texts("id")
    record_id = id_values[0].strip() if id_values and id_values[0].strip() else page_name.render()

    title_values = texts("title")
    title = title_values[0] if title_values else page_name.local_name

    duration_from = next((d for d in map(_as_date, values("duration_from")) if d), None)
    duration_to = next((d for d in map(_as_date, values("duration_to")) if d), None)
    if duration_from is not None and duration_to is not None and duration_from > duration_to:
        diagnostics.append(
            Diagnostic(
                "invalid-duration",
                f"page {page_name.render()!r}: duration start after end; end dropped",
            )
        )
        duration_to = None

    year_start = next((y for y in map(_as_year, values("year_start")) if y is not None), None)
    year_end = next((y for y in map(_as_year, values("year_end")) if y is not None), None)
    if year_start is not None and year_end is not None and year_start > year_end:
        diagnostics.append(
            Diagnostic(
                "invalid-years",
                f"page {page_name.render()!r}: year_start after year_end; year_end dropped",
            )
        )
        year_end = None

    research_types: set[ResearchTypeFlag] = set()
    for raw in texts("research_types"):
        flag = parse_research_type(raw, synonyms)
        if flag is None:
            diagnostics.append(
                Diagnostic("unknown-research-type", f"unrecognized type of research {raw!r}")
            )
        else:
            research_types.add(flag)

    funding_types: set[FundingType] = set()
    for raw in texts("funding_types"):
        funding = parse_funding_label(raw)
        if funding is None:
            diagnostics.append(
                Diagnostic("unknown-funding-label", f"unrecognized funding type {raw!r}")
            )
        else:
            funding_types.add(funding)

    qualification = None
    qualification_values = texts("qualification")
    if qualification_values:
        qualification = parse_qualification_label(qualification_values[0])
        if qualification is None:
            diagnostics.append(
                Diagnostic(
                    "unknown-qualification-label",
                    f"unrecognized qualification {qualification_values[0]!r}",
                )
            )

    classification_values = texts("main_classification")
    main_classification = classification_values[0] if classification_values else ""
    disciplinary_area = (
        area_mapping.get(main_classification.lower()) if main_classification else None
    )

    keywords = tuple(texts("keywords"))
    institutions = tuple(texts("institutions"))
    persons = tuple(texts("persons"))

    country = Country.UNKNOWN
    country_values = texts("country")
    if country_values:
        try:
            country = Country(country_values[0].strip().upper())
        except ValueError:
            diagnostics.append(
                Diagnostic("unknown-country", f"unrecognized country {country_values[0]!r}")
            )

    extras = tuple(
        sorted(
            (attribute, tuple(fact_value_as_text(f.value) for f in attribute_facts))
            for attribute, attribute_facts in by_attribute.items()
            if attribute not in consumed and attribute != CATEGORY_ATTRIBUTE
        )
    )

    record = ProjectRecord(
        id=record_id,
        title=title,
        duration_from=duration_from,
        duration_to=duration_to,
        year_start=year_start,
        year_end=year_end,
        research_types=frozenset(research_types),
        funding_types=frozenset(funding_types),
        qualification=qualification,
        main_classification=main_classification,
        disciplinary_area=disciplinary_area,
        keywords=keywords,
        institutions=institutions,
        institution_count=len(institutions),
        persons=persons,
        country=country,
        status=derive_status(duration_from, duration_to, reference_date),
        extras=extras,
    )
    return record, diagnostics


def with_derived_status(record: ProjectRecord, reference_date: date) -> ProjectRecord:
    return replace(
        record,
        status=derive_status(record.duration_from, record.duration_to, reference_date),
    )
