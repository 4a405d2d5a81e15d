"""Shared fixtures: the transcribed sample record and seeded synthetic corpora."""

import random
from datetime import date, timedelta
from pathlib import Path

import pytest

from fieldmon.config import load_area_mapping
from fieldmon.corpus import Corpus, ingest_pages
from fieldmon.records import Country, ProjectRecord, ProjectStatus
from fieldmon.schema import ResearchTypeFlag, derive_funding, derive_qualification
from fieldmon.wikitext import Namespace, PageName, page_file_name

FIXTURE_PAGES = Path(__file__).parent / "fixtures" / "pages"

REFERENCE_DATE = date(2014, 1, 1)

# Classification surface pool: mapped German forms, two unmapped ones, and absent.
CLASSIFICATIONS = [
    "Erziehungswissenschaft",
    "Psychologie",
    "Soziologie",
    "Politikwissenschaft",
    "Geschichte",
    "Wirtschaftswissenschaften",
    "Sozialpolitik",
    "Bevölkerungswissenschaft",
    "Kommunikationswissenschaften",
    "Arbeitsmarktforschung",
    "Interdisziplinäre Fächer",
    "Sozial- und Geisteswissenschaften",
    "Unbekanntes Fach",
    "Exotisches Fach",
    "",
]


@pytest.fixture(scope="session")
def fixture_corpus():
    corpus, report = ingest_pages(FIXTURE_PAGES, reference_date=REFERENCE_DATE)
    assert report.errors == []
    return corpus


def make_synthetic_records(seed: int, count: int) -> list[ProjectRecord]:
    """Deterministic record population covering every facet combination."""
    rng = random.Random(seed)
    area_mapping = load_area_mapping()
    flags = list(ResearchTypeFlag)
    records = []
    for index in range(count):
        year_end = rng.choice([None, *range(1995, 2010)])
        year_start = None
        duration_from = None
        duration_to = None
        if year_end is not None:
            year_start = year_end - rng.randint(0, 3)
            duration_to = date(year_end, 1, 1) + timedelta(days=rng.randint(0, 363))
            duration_from = date(year_start, 1, 1) + timedelta(
                days=rng.randint(0, max((duration_to - date(year_start, 1, 1)).days, 0))
            )
        research_types = frozenset(rng.sample(flags, rng.randint(0, 3)))
        classification = rng.choice(CLASSIFICATIONS)
        institutions = tuple(
            f"Institut {chr(65 + rng.randrange(26))}" for _ in range(rng.randint(0, 3))
        )
        records.append(
            ProjectRecord(
                id=f"P{index:05d}",
                title=f"Projekt {index}",
                duration_from=duration_from,
                duration_to=duration_to,
                year_start=year_start,
                year_end=year_end,
                research_types=research_types,
                funding_types=frozenset(derive_funding(set(research_types))),
                qualification=derive_qualification(set(research_types)),
                main_classification=classification,
                disciplinary_area=area_mapping.get(classification.lower()),
                keywords=("Schule",) if rng.random() < 0.5 else (),
                institutions=institutions,
                institution_count=len(institutions),
                persons=(),
                country=rng.choice(
                    [Country.DE, Country.DE, Country.DE, Country.AT, Country.CH, Country.UNKNOWN]
                ),
                status=rng.choice(
                    [
                        ProjectStatus.COMPLETED,
                        ProjectStatus.COMPLETED,
                        ProjectStatus.CURRENT,
                        ProjectStatus.STARTING,
                    ]
                ),
            )
        )
    return records


def make_synthetic_corpus(seed: int, count: int) -> Corpus:
    return Corpus(make_synthetic_records(seed, count))


def write_synthetic_pages(directory: Path, seed: int, count: int) -> None:
    """Write plain wiki pages (no templates) for ingestion benchmarks."""
    rng = random.Random(seed)
    directory.mkdir(parents=True, exist_ok=True)
    for index in range(count):
        year_end = rng.randint(1995, 2009)
        year_start = year_end - rng.randint(0, 3)
        art = rng.choice(["gefördert", "Eigenprojekt", "Auftragsforschung", "Dissertation"])
        classification = rng.choice(CLASSIFICATIONS[:12])
        name = PageName(Namespace.MAIN, f"Synthetisches Projekt {index}")
        markup = (
            f"[[id::S{index:05d}]]\n"
            f"[[Laufzeit Von::{year_start}-03-01]]\n"
            f"[[Laufzeit Bis::{year_end}-11-30]]\n"
            f"[[Forschungsart::{art}]]\n"
            f"[[Hauptklassifikationsuch::{classification}]]\n"
            f"[[Land::DE]]\n"
            f"[[Schlagwörter::Bildung]] [[Schlagwörter::Forschung]]\n"
            "[[Category: Projects]]\n"
        )
        (directory / page_file_name(name)).write_text(markup, encoding="utf-8")
