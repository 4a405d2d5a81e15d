"""Corpus snapshots: assembly from page directories, faceted filtering,
and line-oriented persistence.

A corpus is immutable once built; ingestion always produces a fresh
snapshot, so readers never observe partial state. All query results are
ordered by record id for reproducibility.
"""

from __future__ import annotations

import csv
import hashlib
import json
from collections import Counter
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

from .jsonutil import canonical_json
from .records import (
    Country,
    ProjectRecord,
    ProjectStatus,
    assemble_record,
    derive_status,
)
from .schema import (
    AttributeDecl,
    DerivationRule,
    FundingType,
    QualificationType,
    ResearchTypeFlag,
    bind_facts,
    derive_fields,
)
from .wikitext import (
    DEFAULT_MAX_EXPANSION_DEPTH,
    Diagnostic,
    PageSource,
    expand_templates,
    load_page_directory,
    parse_page,
)


class Region(Enum):
    GERMANY = "germany"
    DACH = "dach"


@dataclass(frozen=True)
class CorpusFilter:
    status: ProjectStatus | None = None
    region: Region = Region.DACH
    year_from: int | None = None
    year_to: int | None = None

    def __post_init__(self):
        if (
            self.year_from is not None
            and self.year_to is not None
            and self.year_from > self.year_to
        ):
            raise ValueError("year_from must not exceed year_to")


@dataclass(frozen=True)
class CorpusSummary:
    record_count: int
    year_end_min: int | None
    year_end_max: int | None


class Corpus:
    """Immutable snapshot of project records, keyed and ordered by id."""

    def __init__(self, records: Iterable[ProjectRecord]):
        ordered: dict[str, ProjectRecord] = {}
        for record in sorted(records, key=lambda r: r.id):
            if record.id in ordered:
                raise ValueError(f"duplicate record id {record.id!r}")
            ordered[record.id] = record
        self._records: Mapping[str, ProjectRecord] = MappingProxyType(ordered)
        years = [r.year_end for r in ordered.values() if r.year_end is not None]
        self._summary = CorpusSummary(
            record_count=len(ordered),
            year_end_min=min(years) if years else None,
            year_end_max=max(years) if years else None,
        )

    @property
    def records(self) -> Mapping[str, ProjectRecord]:
        return self._records

    @property
    def summary(self) -> CorpusSummary:
        return self._summary

    def __len__(self) -> int:
        return len(self._records)

    def __eq__(self, other):
        if not isinstance(other, Corpus):
            return NotImplemented
        return dict(self._records) == dict(other._records) and self._summary == other._summary


def filter_records(corpus: Corpus, corpus_filter: CorpusFilter) -> list[ProjectRecord]:
    """Faceted selection; the result is ascending by record id.

    A record passes when its status matches (or no status is requested),
    its country fits the region (germany keeps DE only, dach keeps all),
    and, if either year bound is present, it has a completion year inside
    the bounds. Records without a completion year never match a
    year-bounded filter.
    """
    year_bounded = corpus_filter.year_from is not None or corpus_filter.year_to is not None
    selected = []
    for record in corpus.records.values():
        if corpus_filter.status is not None and record.status is not corpus_filter.status:
            continue
        if corpus_filter.region is Region.GERMANY and record.country is not Country.DE:
            continue
        if year_bounded:
            if record.year_end is None:
                continue
            if corpus_filter.year_from is not None and record.year_end < corpus_filter.year_from:
                continue
            if corpus_filter.year_to is not None and record.year_end > corpus_filter.year_to:
                continue
        selected.append(record)
    return selected


# --- persistence ------------------------------------------------------------

def record_to_dict(record: ProjectRecord) -> dict:
    return {
        "id": record.id,
        "title": record.title,
        "duration_from": record.duration_from.isoformat() if record.duration_from else None,
        "duration_to": record.duration_to.isoformat() if record.duration_to else None,
        "year_start": record.year_start,
        "year_end": record.year_end,
        "research_types": sorted(flag.value for flag in record.research_types),
        "funding_types": sorted(ft.value for ft in record.funding_types),
        "qualification": record.qualification.value if record.qualification else None,
        "main_classification": record.main_classification,
        "disciplinary_area": record.disciplinary_area,
        "keywords": list(record.keywords),
        "institutions": list(record.institutions),
        "institution_count": record.institution_count,
        "persons": list(record.persons),
        "country": record.country.value,
        "status": record.status.value,
        "extras": {attribute: list(values) for attribute, values in record.extras},
    }


def record_from_dict(payload: dict) -> ProjectRecord:
    return ProjectRecord(
        id=payload["id"],
        title=payload["title"],
        duration_from=(
            date.fromisoformat(payload["duration_from"]) if payload.get("duration_from") else None
        ),
        duration_to=(
            date.fromisoformat(payload["duration_to"]) if payload.get("duration_to") else None
        ),
        year_start=payload.get("year_start"),
        year_end=payload.get("year_end"),
        research_types=frozenset(
            ResearchTypeFlag(value) for value in payload.get("research_types", [])
        ),
        funding_types=frozenset(FundingType(value) for value in payload.get("funding_types", [])),
        qualification=(
            QualificationType(payload["qualification"]) if payload.get("qualification") else None
        ),
        main_classification=payload.get("main_classification", ""),
        disciplinary_area=payload.get("disciplinary_area"),
        keywords=tuple(payload.get("keywords", [])),
        institutions=tuple(payload.get("institutions", [])),
        institution_count=payload.get("institution_count", 0),
        persons=tuple(payload.get("persons", [])),
        country=Country(payload.get("country", "unknown")),
        status=ProjectStatus(payload.get("status", "current")),
        extras=tuple(
            (attribute, tuple(values))
            for attribute, values in sorted(payload.get("extras", {}).items())
        ),
    )


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write one canonical JSON object per record, ascending by id.

    The file may be extended by appending further record lines; ingestion
    always rewrites the full snapshot.
    """
    lines = [canonical_json(record_to_dict(record)) for record in corpus.records.values()]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def load_corpus(path: str | Path) -> Corpus:
    records = []
    for line_number, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip():
            continue
        try:
            records.append(record_from_dict(json.loads(line)))
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            raise ValueError(f"{path}:{line_number}: bad record line: {exc}") from exc
    return Corpus(records)


def corpus_digest(path: str | Path) -> str:
    """Snapshot identifier: content hash of the persisted corpus file."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# --- ingestion --------------------------------------------------------------

@dataclass
class IngestReport:
    page_count: int = 0
    record_count: int = 0
    template_count: int = 0
    errors: list[str] = field(default_factory=list)
    warnings: list[tuple[str, Diagnostic]] = field(default_factory=list)

    @property
    def warning_counts(self) -> dict[str, int]:
        return dict(Counter(diagnostic.kind for _, diagnostic in self.warnings))

    def to_dict(self) -> dict:
        return {
            "page_count": self.page_count,
            "record_count": self.record_count,
            "template_count": self.template_count,
            "errors": list(self.errors),
            "warning_counts": self.warning_counts,
        }


def ingest_pages(
    pages_dir: str | Path,
    *,
    schema: list[AttributeDecl] | None = None,
    rules: list[DerivationRule] | None = None,
    reference_date: date | None = None,
    synonyms: dict[str, ResearchTypeFlag] | None = None,
    attribute_mapping: dict[str, list[str]] | None = None,
    area_mapping: dict[str, str] | None = None,
    max_depth: int = DEFAULT_MAX_EXPANSION_DEPTH,
) -> tuple[Corpus, IngestReport]:
    """Run parse, expand, bind, derive and assemble for every page file.

    Unreadable files and duplicate record ids become error entries; all
    page-level problems are collected as warnings. The returned corpus is
    a complete immutable snapshot.
    """
    from .config import (
        load_attribute_mapping,
        load_area_mapping,
        load_derivation_rules,
        load_research_type_synonyms,
        load_schema,
    )

    if schema is None:
        schema = load_schema()
    if rules is None:
        rules = load_derivation_rules()
    if synonyms is None:
        synonyms = load_research_type_synonyms()
    if attribute_mapping is None:
        attribute_mapping = load_attribute_mapping()
    if area_mapping is None:
        area_mapping = load_area_mapping()
    if reference_date is None:
        reference_date = date.today()

    directory = load_page_directory(pages_dir)
    report = IngestReport(
        page_count=len(directory.pages),
        template_count=len(directory.templates),
        errors=[d.message for d in directory.errors],
    )

    records: dict[str, ProjectRecord] = {}
    for page in directory.pages:
        page_label = page.name.render()
        ast = parse_page(page)
        ast = expand_templates(ast, directory.templates, max_depth)
        facts, bind_warnings = bind_facts(ast, schema)
        facts, derive_warnings = derive_fields(facts, rules, synonyms)
        record, assemble_warnings = assemble_record(
            facts,
            reference_date,
            page.name,
            attribute_mapping=attribute_mapping,
            synonyms=synonyms,
            area_mapping=area_mapping,
        )
        for diagnostic in (
            list(ast.diagnostics) + bind_warnings + derive_warnings + assemble_warnings
        ):
            report.warnings.append((page_label, diagnostic))
        if record.id in records:
            report.errors.append(
                f"duplicate record id {record.id!r}: page {page_label!r} rejected"
            )
            continue
        records[record.id] = record

    corpus = Corpus(records.values())
    report.record_count = len(corpus)
    return corpus, report


_LIST_SEPARATOR = "|"


def _split_list(cell: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in cell.split(_LIST_SEPARATOR) if part.strip())


def ingest_tabular(
    path: str | Path, *, reference_date: date | None = None
) -> tuple[Corpus, IngestReport]:
    """Wiki-bypass import: one record per row of a tab-separated file.

    Columns match the record fields; list-valued cells use ``|`` between
    entries. Funding, qualification and status are derived when their
    columns are absent or empty.
    """
    if reference_date is None:
        reference_date = date.today()
    report = IngestReport()
    records: dict[str, ProjectRecord] = {}
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle, delimiter="\t")
        for row_number, row in enumerate(reader, start=2):
            try:
                record = _record_from_row(row, reference_date)
            except (ValueError, KeyError) as exc:
                report.errors.append(f"row {row_number}: {exc}")
                continue
            report.page_count += 1
            if record.id in records:
                report.errors.append(
                    f"duplicate record id {record.id!r}: row {row_number} rejected"
                )
                continue
            records[record.id] = record
    corpus = Corpus(records.values())
    report.record_count = len(corpus)
    return corpus, report


def _record_from_row(row: dict[str, str], reference_date: date) -> ProjectRecord:
    from .config import load_area_mapping

    def cell(name: str) -> str:
        return (row.get(name) or "").strip()

    duration_from = date.fromisoformat(cell("duration_from")) if cell("duration_from") else None
    duration_to = date.fromisoformat(cell("duration_to")) if cell("duration_to") else None
    research_types = frozenset(
        ResearchTypeFlag(value) for value in _split_list(cell("research_types"))
    )
    if cell("funding_types"):
        funding_types = frozenset(
            FundingType(value) for value in _split_list(cell("funding_types"))
        )
    else:
        from .schema import derive_funding

        funding_types = frozenset(derive_funding(set(research_types)))
    if cell("qualification"):
        qualification = QualificationType(cell("qualification"))
    else:
        from .schema import derive_qualification

        qualification = derive_qualification(set(research_types))
    if cell("status"):
        status = ProjectStatus(cell("status"))
    else:
        status = derive_status(duration_from, duration_to, reference_date)
    main_classification = cell("main_classification")
    if cell("disciplinary_area"):
        disciplinary_area = cell("disciplinary_area")
    elif main_classification:
        disciplinary_area = load_area_mapping().get(main_classification.lower())
    else:
        disciplinary_area = None
    institutions = _split_list(cell("institutions"))
    return ProjectRecord(
        id=cell("id"),
        title=cell("title") or cell("id"),
        duration_from=duration_from,
        duration_to=duration_to,
        year_start=int(cell("year_start")) if cell("year_start") else None,
        year_end=int(cell("year_end")) if cell("year_end") else None,
        research_types=research_types,
        funding_types=funding_types,
        qualification=qualification,
        main_classification=main_classification,
        disciplinary_area=disciplinary_area,
        keywords=_split_list(cell("keywords")),
        institutions=institutions,
        institution_count=int(cell("institution_count"))
        if cell("institution_count")
        else len(institutions),
        persons=_split_list(cell("persons")),
        country=Country(cell("country")) if cell("country") else Country.UNKNOWN,
        status=status,
    )
