"""Loaders for the editable tab-separated configuration tables.

All tables ship with the package under ``fieldmon/data`` and can be
replaced by site-local files of the same layout. Lines starting with
``#`` and blank lines are ignored; the first data line is the header.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path

from .schema import (
    AttributeDecl,
    AttributeKind,
    DerivationRule,
    DISCIPLINARY_AREAS,
    ResearchTypeFlag,
    Transform,
)

SCHEMA_FILE = "schema.tsv"
SYNONYMS_FILE = "research_type_synonyms.tsv"
RULES_FILE = "derivation_rules.tsv"
ATTRIBUTE_MAPPING_FILE = "attribute_mapping.tsv"
AREA_MAPPING_FILE = "disciplinary_areas.tsv"


def _read_rows(path: str | Path | None, default_name: str) -> list[dict[str, str]]:
    if path is None:
        text = (resources.files("fieldmon") / "data" / default_name).read_text(
            encoding="utf-8"
        )
    else:
        text = Path(path).read_text(encoding="utf-8")
    lines = [
        line
        for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines:
        return []
    header = [column.strip() for column in lines[0].split("\t")]
    rows = []
    for line in lines[1:]:
        cells = line.split("\t")
        if len(cells) < len(header):
            raise ValueError(f"short row in {default_name if path is None else path}: {line!r}")
        rows.append({column: cells[i].strip() for i, column in enumerate(header)})
    return rows


def load_schema(path: str | Path | None = None) -> list[AttributeDecl]:
    declarations = []
    for row in _read_rows(path, SCHEMA_FILE):
        declarations.append(
            AttributeDecl(
                name=row["name"],
                kind=AttributeKind(row["kind"]),
                multivalued=row["multivalued"].lower() in ("true", "1", "yes"),
            )
        )
    return declarations


@lru_cache(maxsize=1)
def _default_synonyms() -> dict[str, ResearchTypeFlag]:
    return _load_synonyms_from(None)


def _load_synonyms_from(path: str | Path | None) -> dict[str, ResearchTypeFlag]:
    table = {}
    for row in _read_rows(path, SYNONYMS_FILE):
        table[row["surface_form"].lower()] = ResearchTypeFlag(row["flag"])
    return table


def load_research_type_synonyms(
    path: str | Path | None = None,
) -> dict[str, ResearchTypeFlag]:
    if path is None:
        return dict(_default_synonyms())
    return _load_synonyms_from(path)


def load_derivation_rules(path: str | Path | None = None) -> list[DerivationRule]:
    return [
        DerivationRule(
            target_attribute=row["target_attribute"],
            source_attribute=row["source_attribute"],
            transform=Transform(row["transform"]),
        )
        for row in _read_rows(path, RULES_FILE)
    ]


def load_attribute_mapping(path: str | Path | None = None) -> dict[str, list[str]]:
    """Record field -> wiki attribute names, in priority order."""
    mapping: dict[str, list[str]] = {}
    for row in _read_rows(path, ATTRIBUTE_MAPPING_FILE):
        mapping.setdefault(row["record_field"], []).append(row["wiki_attribute"])
    return mapping


def load_area_mapping(path: str | Path | None = None) -> dict[str, str]:
    """Classification surface form (lowercased) -> canonical disciplinary area."""
    mapping: dict[str, str] = {}
    for row in _read_rows(path, AREA_MAPPING_FILE):
        area = row["area"]
        if area not in DISCIPLINARY_AREAS:
            raise ValueError(f"unknown disciplinary area {area!r}")
        mapping[row["classification"].lower()] = area
    return mapping
