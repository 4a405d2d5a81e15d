"""Fact binding, datatype parsing and indicator-attribute derivation tests."""

from datetime import date
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fieldmon.config import (
    load_area_mapping,
    load_attribute_mapping,
    load_derivation_rules,
    load_research_type_synonyms,
    load_schema,
)
from fieldmon.schema import (
    AttributeDecl,
    AttributeKind,
    DISCIPLINARY_AREAS,
    DerivationRule,
    Fact,
    FundingType,
    QualificationType,
    ResearchTypeFlag,
    Transform,
    bind_facts,
    derive_fields,
    derive_funding,
    derive_qualification,
    parse_attribute_value,
    parse_date,
    parse_number,
)
from fieldmon.wikitext import Namespace, PageName, PageSource, parse_page

SUBJECT = PageName(Namespace.MAIN, "Projekt")


def ast_of(markup: str):
    return parse_page(PageSource(name=SUBJECT, markup=markup))


def fact(attribute, value, subject=SUBJECT):
    return Fact(subject=subject, attribute=attribute, value=value)


class TestDateParsing:
    @pytest.mark.parametrize(
        "raw,expected",
        [
            ("2004/09/15", date(2004, 9, 15)),
            ("2005-07-15", date(2005, 7, 15)),
            ("2005", date(2005, 1, 1)),
            ("15 Juli 2005", date(2005, 7, 15)),
            ("15 September 2004", date(2004, 9, 15)),
            ("1 March 1997", date(1997, 3, 1)),
            ("15. Juli 2005", date(2005, 7, 15)),
        ],
    )
    def test_accepted_formats(self, raw, expected):
        assert parse_date(raw) == expected

    @pytest.mark.parametrize(
        "raw",
        ["", "abc", "2005-02-30", "2005/13/01", "15 Brumaire 2005", "20054886", "05"],
    )
    def test_rejected_values(self, raw):
        assert parse_date(raw) is None


class TestNumberParsing:
    def test_integers_stay_integers(self):
        assert parse_number("2005") == 2005
        assert isinstance(parse_number("2005"), int)

    def test_decimals_and_signs(self):
        assert parse_number("-3.5") == -3.5
        assert parse_number("+7") == 7

    @pytest.mark.parametrize("raw", ["", "abc", "nan", "inf", "1,5", "1 000"])
    def test_rejected_values(self, raw):
        assert parse_number(raw) is None


class TestBindFacts:
    def schema(self):
        return [
            AttributeDecl("Jahrgang ende", AttributeKind.NUMBER),
            AttributeDecl("Laufzeit Bis", AttributeKind.DATE),
            AttributeDecl("Personen", AttributeKind.PAGE, multivalued=True),
        ]

    def test_number_annotation_binds(self):
        facts, warnings = bind_facts(ast_of("[[Jahrgang ende::2005]]"), self.schema())
        assert facts == [fact("Jahrgang ende", 2005)]
        assert warnings == []

    def test_type_mismatch_is_dropped_with_one_warning(self):
        facts, warnings = bind_facts(ast_of("[[Jahrgang ende::abc]]"), self.schema())
        assert facts == []
        assert len(warnings) == 1
        assert warnings[0].kind == "type-mismatch"

    def test_empty_ast_binds_nothing(self):
        facts, warnings = bind_facts(ast_of("no annotations here"), self.schema())
        assert facts == []
        assert warnings == []

    def test_date_annotation_binds(self):
        facts, _ = bind_facts(ast_of("[[Laufzeit Bis::2005-07-15]]"), self.schema())
        assert facts == [fact("Laufzeit Bis", date(2005, 7, 15))]

    def test_undeclared_attribute_defaults_to_string(self):
        facts, warnings = bind_facts(ast_of("[[Sonstiges Feld::whatever 123]]"), self.schema())
        assert facts == [fact("Sonstiges Feld", "whatever 123")]
        assert warnings == []

    def test_category_links_become_category_facts(self):
        facts, _ = bind_facts(ast_of("[[Category: MoBi]][[Category: Projects]]"), self.schema())
        assert facts == [fact("category", "MoBi"), fact("category", "Projects")]

    def test_page_kind_binds_page_names(self):
        facts, _ = bind_facts(ast_of("[[Personen::Ute Bender]]"), self.schema())
        assert facts == [fact("Personen", PageName(Namespace.MAIN, "Ute Bender"))]

    def test_duplicate_declarations_rejected(self):
        with pytest.raises(ValueError):
            bind_facts(ast_of(""), [
                AttributeDecl("x", AttributeKind.STRING),
                AttributeDecl("x", AttributeKind.NUMBER),
            ])

    @given(
        st.lists(
            st.tuples(
                st.sampled_from(["n", "d", "s", "p"]),
                st.text(
                    alphabet=st.characters(blacklist_characters="[]{}|:", blacklist_categories=("Cs",)),
                    max_size=12,
                ),
            ),
            max_size=12,
        )
    )
    @settings(max_examples=150, deadline=None)
    def test_ignore_rule_no_ill_typed_fact_survives(self, annotations):
        # Property: for every fact emitted, re-parsing its raw value under
        # the declared kind succeeds.
        kinds = {
            "n": AttributeKind.NUMBER,
            "d": AttributeKind.DATE,
            "s": AttributeKind.STRING,
            "p": AttributeKind.PAGE,
        }
        schema = [AttributeDecl(k, kinds[k]) for k in kinds]
        markup = "".join(f"[[{attr}::{value}]]" for attr, value in annotations)
        facts, _ = bind_facts(ast_of(markup), schema)
        ast = ast_of(markup)
        raw_by_node = [(n.attribute, n.raw_value) for n in ast.annotations()]
        for f in facts:
            if f.attribute == "category":
                continue
            raws = [raw for attr, raw in raw_by_node if attr == f.attribute]
            assert any(
                parse_attribute_value(raw, kinds[f.attribute]) is not None for raw in raws
            )


class TestDeriveFunding:
    def test_third_party(self):
        assert derive_funding({ResearchTypeFlag.THIRD_PARTY_FUNDED}) == {
            FundingType.THIRD_PARTY
        }

    def test_multiple_funding_flags(self):
        flags = {ResearchTypeFlag.IN_HOUSE, ResearchTypeFlag.CONTRACT_RESEARCH}
        assert derive_funding(flags) == {FundingType.IN_HOUSE, FundingType.CONTRACT}

    def test_unspecified_contributes_nothing(self):
        assert derive_funding({ResearchTypeFlag.UNSPECIFIED}) == set()

    def test_non_funding_flags_contribute_nothing(self):
        flags = {ResearchTypeFlag.EXPERTISE, ResearchTypeFlag.OTHER_EXAM_THESIS}
        assert derive_funding(flags) == set()

    def test_exhaustive_all_512_subsets_match_membership_oracle(self):
        # Independent oracle: membership of the three funding-bearing flags.
        oracle_pairs = [
            (ResearchTypeFlag.IN_HOUSE, FundingType.IN_HOUSE),
            (ResearchTypeFlag.THIRD_PARTY_FUNDED, FundingType.THIRD_PARTY),
            (ResearchTypeFlag.CONTRACT_RESEARCH, FundingType.CONTRACT),
        ]
        all_flags = list(ResearchTypeFlag)
        checked = 0
        for r in range(len(all_flags) + 1):
            for subset in combinations(all_flags, r):
                flag_set = set(subset)
                expected = {ft for rf, ft in oracle_pairs if rf in flag_set}
                assert derive_funding(flag_set) == expected
                assert derive_funding(flag_set) <= set(FundingType)
                checked += 1
        assert checked == 512

    @given(
        st.sets(st.sampled_from(list(ResearchTypeFlag))),
        st.sets(st.sampled_from(list(ResearchTypeFlag))),
    )
    @settings(max_examples=200, deadline=None)
    def test_monotonicity_adding_flags_never_removes_funding(self, base, extra):
        assert derive_funding(base) <= derive_funding(base | extra)


class TestDeriveQualification:
    def test_doctoral_among_other_flags(self):
        flags = {ResearchTypeFlag.DOCTORAL_PROJECT, ResearchTypeFlag.THIRD_PARTY_FUNDED}
        assert derive_qualification(flags) is QualificationType.DOCTORAL

    def test_habilitation(self):
        assert (
            derive_qualification({ResearchTypeFlag.HABILITATION_PROJECT})
            is QualificationType.HABILITATION
        )

    def test_other_exam_thesis_is_not_a_qualification(self):
        assert derive_qualification({ResearchTypeFlag.OTHER_EXAM_THESIS}) is None

    def test_doctoral_wins_over_habilitation(self):
        flags = {ResearchTypeFlag.DOCTORAL_PROJECT, ResearchTypeFlag.HABILITATION_PROJECT}
        assert derive_qualification(flags) is QualificationType.DOCTORAL


class TestDeriveFields:
    def rules(self):
        return [
            DerivationRule("Jahrgang ende", "Laufzeit Bis", Transform.YEAR_OF_DATE),
            DerivationRule("Jahrgang start", "Laufzeit Von", Transform.YEAR_OF_DATE),
            DerivationRule("Förderart", "Forschungsart", Transform.FUNDING_MAPPING),
            DerivationRule("qualification", "Forschungsart", Transform.QUALIFICATION_MAPPING),
            DerivationRule(
                "Forschungseinrichtungs counter",
                "Forschungseinrichtung",
                Transform.COUNT_OF_VALUES,
            ),
        ]

    def test_year_of_date_extracts_calendar_year(self):
        facts, diags = derive_fields([fact("Laufzeit Bis", date(2005, 7, 15))], self.rules())
        assert fact("Jahrgang ende", 2005) in facts
        assert diags == []

    def test_count_of_values_counts_multiplicity(self):
        inputs = [
            fact("Forschungseinrichtung", "Institut A"),
            fact("Forschungseinrichtung", "Institut B"),
        ]
        facts, _ = derive_fields(inputs, self.rules())
        assert fact("Forschungseinrichtungs counter", 2) in facts

    def test_empty_input_yields_empty_output(self):
        facts, diags = derive_fields([], self.rules())
        assert facts == []
        assert diags == []

    def test_funding_mapping_emits_surface_labels(self):
        facts, _ = derive_fields([fact("Forschungsart", "gefördert")], self.rules())
        assert fact("Förderart", "Gefördert") in facts

    def test_qualification_mapping(self):
        facts, _ = derive_fields([fact("Forschungsart", "Dissertation")], self.rules())
        assert fact("qualification", "Dissertation") in facts

    def test_qualification_conflict_warns_and_keeps_doctoral(self):
        inputs = [fact("Forschungsart", "Dissertation"), fact("Forschungsart", "Habilitation")]
        facts, diags = derive_fields(inputs, self.rules())
        assert fact("qualification", "Dissertation") in facts
        assert any(d.kind == "qualification-conflict" for d in diags)

    def test_unknown_research_type_is_diagnosed(self):
        facts, diags = derive_fields([fact("Forschungsart", "Nonsense")], self.rules())
        assert any(d.kind == "unknown-research-type" for d in diags)
        assert not any(f.attribute == "Förderart" for f in facts)

    def test_explicit_target_fact_blocks_derivation(self):
        inputs = [fact("Jahrgang ende", 1999), fact("Laufzeit Bis", date(2005, 7, 15))]
        facts, _ = derive_fields(inputs, self.rules())
        ende = [f for f in facts if f.attribute == "Jahrgang ende"]
        assert ende == [fact("Jahrgang ende", 1999)]

    def test_missing_source_produces_no_fact_and_no_warning(self):
        facts, diags = derive_fields([fact("Titel", "x")], self.rules())
        assert facts == [fact("Titel", "x")]
        assert diags == []

    def test_order_independence(self):
        inputs = [
            fact("Laufzeit Bis", date(2005, 7, 15)),
            fact("Forschungsart", "gefördert"),
            fact("Forschungsart", "Eigenprojekt"),
            fact("Forschungseinrichtung", "A"),
            fact("Forschungseinrichtung", "B"),
        ]
        forward, _ = derive_fields(inputs, self.rules())
        backward, _ = derive_fields(list(reversed(inputs)), self.rules())
        assert set(forward) == set(backward)

    def test_cyclic_rules_rejected(self):
        rules = [
            DerivationRule("b", "a", Transform.COUNT_OF_VALUES),
            DerivationRule("c", "b", Transform.COUNT_OF_VALUES),
        ]
        with pytest.raises(ValueError):
            derive_fields([], rules)

    def test_rule_with_equal_target_and_source_rejected(self):
        with pytest.raises(ValueError):
            DerivationRule("a", "a", Transform.COUNT_OF_VALUES)


class TestShippedConfig:
    def test_schema_loads_with_unique_names(self):
        schema = load_schema()
        names = [decl.name for decl in schema]
        assert len(names) == len(set(names))
        assert AttributeDecl("Jahrgang ende", AttributeKind.NUMBER) in schema

    def test_synonyms_cover_all_nine_flags(self):
        synonyms = load_research_type_synonyms()
        assert set(synonyms.values()) == set(ResearchTypeFlag)
        assert synonyms["gefördert"] is ResearchTypeFlag.THIRD_PARTY_FUNDED

    def test_default_rules_derive_years_from_durations(self):
        rules = load_derivation_rules()
        by_target = {rule.target_attribute: rule for rule in rules}
        assert by_target["Jahrgang ende"].source_attribute == "Laufzeit Bis"
        assert by_target["Jahrgang start"].source_attribute == "Laufzeit Von"

    def test_attribute_mapping_has_documented_entries(self):
        mapping = load_attribute_mapping()
        assert mapping["id"] == ["id", "Erfassungsnr."]
        assert mapping["duration_to"] == ["Laufzeit Bis"]
        assert mapping["institutions"] == ["Forschungseinrichtung"]

    def test_area_mapping_covers_the_twelve_areas(self):
        mapping = load_area_mapping()
        assert set(mapping.values()) == set(DISCIPLINARY_AREAS)
        assert mapping["erziehungswissenschaft"] == "Education"
        assert len(DISCIPLINARY_AREAS) == 12
