"""Record assembly, ingestion, faceted filtering and persistence tests."""

from datetime import date

import pytest

from conftest import (
    FIXTURE_PAGES,
    REFERENCE_DATE,
    make_synthetic_corpus,
    make_synthetic_records,
)
from fieldmon.corpus import (
    Corpus,
    CorpusFilter,
    CorpusSummary,
    Region,
    corpus_digest,
    filter_records,
    ingest_pages,
    ingest_tabular,
    load_corpus,
    record_from_dict,
    record_to_dict,
    save_corpus,
)
from fieldmon.records import (
    Country,
    ProjectRecord,
    ProjectStatus,
    assemble_record,
    derive_status,
)
from fieldmon.schema import Fact, FundingType, ResearchTypeFlag
from fieldmon.wikitext import Namespace, PageName

SUBJECT = PageName(Namespace.MAIN, "Projekt X")


def fact(attribute, value):
    return Fact(subject=SUBJECT, attribute=attribute, value=value)


def oracle_filter(records, status=None, region=Region.DACH, year_from=None, year_to=None):
    """Independent linear scan against the documented filter rules."""
    kept = []
    for r in records:
        if status is not None and r.status is not status:
            continue
        if region is Region.GERMANY and r.country is not Country.DE:
            continue
        if year_from is not None or year_to is not None:
            if r.year_end is None:
                continue
            if year_from is not None and r.year_end < year_from:
                continue
            if year_to is not None and r.year_end > year_to:
                continue
        kept.append(r)
    return sorted(kept, key=lambda r: r.id)


class TestDeriveStatus:
    def test_past_end_means_completed(self):
        assert (
            derive_status(date(2004, 9, 15), date(2005, 7, 15), REFERENCE_DATE)
            is ProjectStatus.COMPLETED
        )

    def test_future_start_means_starting(self):
        assert (
            derive_status(date(2030, 1, 1), None, REFERENCE_DATE) is ProjectStatus.STARTING
        )

    def test_no_dates_means_current(self):
        assert derive_status(None, None, REFERENCE_DATE) is ProjectStatus.CURRENT

    def test_running_project_is_current(self):
        assert (
            derive_status(date(2013, 1, 1), date(2015, 1, 1), REFERENCE_DATE)
            is ProjectStatus.CURRENT
        )


class TestAssembleRecord:
    def test_zero_facts_uses_page_name(self):
        record, diagnostics = assemble_record([], REFERENCE_DATE, SUBJECT)
        assert record.id == "Projekt X"
        assert record.title == "Projekt X"
        assert record.status is ProjectStatus.CURRENT
        assert record.year_end is None
        assert diagnostics == []

    def test_field_population_via_mapping(self):
        facts = [
            fact("id", "20054886"),
            fact("Laufzeit Von", date(2004, 9, 15)),
            fact("Laufzeit Bis", date(2005, 7, 15)),
            fact("Jahrgang start", 2004),
            fact("Jahrgang ende", 2005),
            fact("Forschungsart", "gefördert"),
            fact("Förderart", "Gefördert"),
            fact("Hauptklassifikationsuch", "Erziehungswissenschaft"),
            fact("Forschungseinrichtung", "Institut A"),
            fact("Forschungseinrichtung", "Institut B"),
            fact("Land", "DE"),
        ]
        record, diagnostics = assemble_record(facts, REFERENCE_DATE)
        assert record.id == "20054886"
        assert record.year_start == 2004
        assert record.year_end == 2005
        assert record.research_types == {ResearchTypeFlag.THIRD_PARTY_FUNDED}
        assert record.funding_types == {FundingType.THIRD_PARTY}
        assert record.disciplinary_area == "Education"
        assert record.institution_count == 2
        assert record.country is Country.DE
        assert record.status is ProjectStatus.COMPLETED
        assert diagnostics == []

    def test_unmapped_attributes_land_in_extras(self):
        record, _ = assemble_record([fact("Methode", "empirisch")], REFERENCE_DATE)
        assert ("Methode", ("empirisch",)) in record.extras

    def test_erfassungsnr_is_id_fallback(self):
        record, _ = assemble_record([fact("Erfassungsnr.", "77")], REFERENCE_DATE)
        assert record.id == "77"

    def test_inverted_duration_drops_end_with_warning(self):
        facts = [fact("Laufzeit Von", date(2006, 1, 1)), fact("Laufzeit Bis", date(2005, 1, 1))]
        record, diagnostics = assemble_record(facts, REFERENCE_DATE)
        assert record.duration_from == date(2006, 1, 1)
        assert record.duration_to is None
        assert any(d.kind == "invalid-duration" for d in diagnostics)

    def test_mixed_subjects_rejected(self):
        other = Fact(subject=PageName(Namespace.MAIN, "Other"), attribute="id", value="1")
        with pytest.raises(ValueError):
            assemble_record([fact("id", "2"), other], REFERENCE_DATE)

    def test_future_start_yields_starting(self):
        record, _ = assemble_record(
            [fact("Laufzeit Von", date(2030, 1, 1))], date(2014, 1, 1)
        )
        assert record.status is ProjectStatus.STARTING


class TestIngestPages:
    def test_fixture_page_round_trip(self, fixture_corpus):
        assert len(fixture_corpus) == 1
        record = fixture_corpus.records["20054886"]
        assert record.year_start == 2004
        assert record.year_end == 2005
        assert record.funding_types == {FundingType.THIRD_PARTY}
        assert record.institution_count == 2
        assert record.disciplinary_area == "Education"
        assert record.status is ProjectStatus.COMPLETED
        assert record.title == "Schule und Betrieb"

    def test_empty_directory(self, tmp_path):
        corpus, report = ingest_pages(tmp_path, reference_date=REFERENCE_DATE)
        assert len(corpus) == 0
        assert report.page_count == 0
        assert report.errors == []
        assert report.warning_counts == {}

    def test_duplicate_id_rejected_with_error(self, tmp_path):
        (tmp_path / "A.wiki").write_text("[[id::1]]", encoding="utf-8")
        (tmp_path / "B.wiki").write_text("[[id::1]]", encoding="utf-8")
        corpus, report = ingest_pages(tmp_path, reference_date=REFERENCE_DATE)
        assert len(corpus) == 1
        assert len([e for e in report.errors if "duplicate record id" in e]) == 1

    def test_summary_reflects_records(self, fixture_corpus):
        assert fixture_corpus.summary == CorpusSummary(
            record_count=1, year_end_min=2005, year_end_max=2005
        )


class TestIngestTabular:
    def test_round_trip_via_tabular_file(self, tmp_path):
        path = tmp_path / "records.tsv"
        path.write_text(
            "id\ttitle\tyear_end\tresearch_types\tcountry\tstatus\tmain_classification\n"
            "T1\tEins\t2001\tthird_party_funded|doctoral_project\tDE\tcompleted\tPsychologie\n"
            "T2\tZwei\t\t\t\t\t\n",
            encoding="utf-8",
        )
        corpus, report = ingest_tabular(path, reference_date=REFERENCE_DATE)
        assert report.errors == []
        assert len(corpus) == 2
        first = corpus.records["T1"]
        assert first.funding_types == {FundingType.THIRD_PARTY}
        assert first.qualification is not None
        assert first.disciplinary_area == "Psychology"
        second = corpus.records["T2"]
        assert second.year_end is None
        assert second.status is ProjectStatus.CURRENT

    def test_bad_row_is_error_entry(self, tmp_path):
        path = tmp_path / "records.tsv"
        path.write_text(
            "id\tyear_end\nGOOD\t2000\n\t2001\n",
            encoding="utf-8",
        )
        corpus, report = ingest_tabular(path, reference_date=REFERENCE_DATE)
        assert len(corpus) == 1
        assert len(report.errors) == 1


class TestFilterRecords:
    def test_fixture_record_matches_completed_germany(self, fixture_corpus):
        result = filter_records(
            fixture_corpus,
            CorpusFilter(status=ProjectStatus.COMPLETED, region=Region.GERMANY),
        )
        assert [r.id for r in result] == ["20054886"]

    def test_dach_without_bounds_is_identity(self):
        corpus = make_synthetic_corpus(seed=1, count=200)
        result = filter_records(corpus, CorpusFilter())
        assert len(result) == 200

    def test_matches_linear_scan_oracle(self):
        corpus = make_synthetic_corpus(seed=2, count=1000)
        result = filter_records(
            corpus,
            CorpusFilter(
                status=ProjectStatus.COMPLETED,
                region=Region.GERMANY,
                year_from=1995,
                year_to=2009,
            ),
        )
        expected = oracle_filter(
            corpus.records.values(),
            status=ProjectStatus.COMPLETED,
            region=Region.GERMANY,
            year_from=1995,
            year_to=2009,
        )
        assert result == expected

    def test_germany_subset_of_dach(self):
        corpus = make_synthetic_corpus(seed=3, count=300)
        for status in (None, ProjectStatus.COMPLETED):
            germany = filter_records(corpus, CorpusFilter(status=status, region=Region.GERMANY))
            dach = filter_records(corpus, CorpusFilter(status=status, region=Region.DACH))
            assert set(r.id for r in germany) <= set(r.id for r in dach)

    def test_slice_equals_full_restricted(self):
        corpus = make_synthetic_corpus(seed=4, count=300)
        sliced = filter_records(corpus, CorpusFilter(year_from=1998, year_to=2003))
        full = filter_records(corpus, CorpusFilter())
        restricted = [
            r for r in full if r.year_end is not None and 1998 <= r.year_end <= 2003
        ]
        assert sliced == restricted

    def test_narrowing_never_adds(self):
        corpus = make_synthetic_corpus(seed=5, count=300)
        wide = filter_records(corpus, CorpusFilter(year_from=1995, year_to=2009))
        narrow = filter_records(corpus, CorpusFilter(year_from=1999, year_to=2004))
        assert set(r.id for r in narrow) <= set(r.id for r in wide)

    def test_ordering_ascending_by_id(self):
        corpus = make_synthetic_corpus(seed=6, count=50)
        result = filter_records(corpus, CorpusFilter())
        assert [r.id for r in result] == sorted(r.id for r in result)

    def test_invalid_filter_bounds_rejected(self):
        with pytest.raises(ValueError):
            CorpusFilter(year_from=2005, year_to=2000)


class TestPersistence:
    def test_record_dict_round_trip(self):
        for record in make_synthetic_records(seed=7, count=50):
            assert record_from_dict(record_to_dict(record)) == record

    def test_save_load_round_trip(self, tmp_path):
        corpus = make_synthetic_corpus(seed=8, count=500)
        path = tmp_path / "corpus.jsonl"
        save_corpus(corpus, path)
        loaded = load_corpus(path)
        assert loaded == corpus
        assert loaded.summary == corpus.summary

    def test_save_is_deterministic(self, tmp_path):
        corpus = make_synthetic_corpus(seed=9, count=100)
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        save_corpus(corpus, a)
        save_corpus(corpus, b)
        assert a.read_bytes() == b.read_bytes()
        assert corpus_digest(a) == corpus_digest(b)

    def test_duplicate_id_in_file_is_loud(self, tmp_path):
        corpus = make_synthetic_corpus(seed=10, count=2)
        path = tmp_path / "corpus.jsonl"
        save_corpus(corpus, path)
        first_line = path.read_text(encoding="utf-8").splitlines()[0]
        path.write_text(first_line + "\n" + first_line + "\n", encoding="utf-8")
        with pytest.raises(ValueError):
            load_corpus(path)

    def test_snapshot_results_survive_new_ingest(self, tmp_path):
        corpus = make_synthetic_corpus(seed=11, count=100)
        before = filter_records(corpus, CorpusFilter(region=Region.GERMANY))
        make_synthetic_corpus(seed=12, count=100)  # a second snapshot appears
        after = filter_records(corpus, CorpusFilter(region=Region.GERMANY))
        assert before == after

    def test_records_mapping_is_read_only(self):
        corpus = make_synthetic_corpus(seed=13, count=3)
        with pytest.raises(TypeError):
            corpus.records["new"] = None  # type: ignore[index]

    def test_duplicate_ids_rejected_at_construction(self):
        record = make_synthetic_records(seed=14, count=1)[0]
        with pytest.raises(ValueError):
            Corpus([record, record])
