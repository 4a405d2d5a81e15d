"""Typed attribute schema, fact binding and derived indicator attributes.

Raw annotations become typed facts only when their value parses under
the attribute's declared kind; everything else is dropped with a
diagnostic instead of failing the page. Derivation rules then generate
the indicator-relevant attributes (completion year, funding type,
qualification, value counts) from the source attributes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date
from enum import Enum
from typing import Iterable, Union

from .wikitext import Annotation, CategoryLink, Diagnostic, PageAst, PageName

# Reserved attribute that carries [[Category: ...]] assignments.
CATEGORY_ATTRIBUTE = "category"


class AttributeKind(Enum):
    STRING = "string"
    PAGE = "page"
    NUMBER = "number"
    DATE = "date"


@dataclass(frozen=True)
class AttributeDecl:
    name: str
    kind: AttributeKind
    multivalued: bool = False


FactValue = Union[str, int, float, date, PageName]


@dataclass(frozen=True)
class Fact:
    """One typed (page, attribute, value) triple."""

    subject: PageName
    attribute: str
    value: FactValue


class ResearchTypeFlag(Enum):
    """The nine multi-assignable values of the type-of-research attribute."""

    CONTRACT_RESEARCH = "contract_research"
    THIRD_PARTY_FUNDED = "third_party_funded"
    IN_HOUSE = "in_house"
    EXPERTISE = "expertise"
    DOCTORAL_PROJECT = "doctoral_project"
    HABILITATION_PROJECT = "habilitation_project"
    OTHER_EXAM_THESIS = "other_exam_thesis"
    OTHER = "other"
    UNSPECIFIED = "unspecified"


class FundingType(Enum):
    IN_HOUSE = "in_house"
    THIRD_PARTY = "third_party"
    CONTRACT = "contract"


class QualificationType(Enum):
    DOCTORAL = "doctoral"
    HABILITATION = "habilitation"


class Transform(Enum):
    YEAR_OF_DATE = "year_of_date"
    FUNDING_MAPPING = "funding_mapping"
    QUALIFICATION_MAPPING = "qualification_mapping"
    COUNT_OF_VALUES = "count_of_values"


@dataclass(frozen=True)
class DerivationRule:
    target_attribute: str
    source_attribute: str
    transform: Transform

    def __post_init__(self):
        if self.target_attribute == self.source_attribute:
            raise ValueError(f"rule target equals source: {self.target_attribute!r}")


# The twelve canonical disciplinary areas of the social-sciences classification.
DISCIPLINARY_AREAS = (
    "Social Sciences and Humanities",
    "Sociology",
    "Population Science",
    "Political Science",
    "Education",
    "Psychology",
    "Communication Sciences",
    "Economics",
    "Social Policy",
    "Labour market and occupational research",
    "Interdisciplinary Subjects",
    "History",
)

# Display surface used for derived funding-type and qualification facts
# (the corpus keeps the German record vocabulary).
FUNDING_SURFACE = {
    FundingType.IN_HOUSE: "Eigenprojekt",
    FundingType.THIRD_PARTY: "Gefördert",
    FundingType.CONTRACT: "Auftragsforschung",
}

QUALIFICATION_SURFACE = {
    QualificationType.DOCTORAL: "Dissertation",
    QualificationType.HABILITATION: "Habilitation",
}

_FUNDING_LABELS = {
    "eigenprojekt": FundingType.IN_HOUSE,
    "in_house": FundingType.IN_HOUSE,
    "in-house": FundingType.IN_HOUSE,
    "in-house project": FundingType.IN_HOUSE,
    "gefördert": FundingType.THIRD_PARTY,
    "third_party": FundingType.THIRD_PARTY,
    "third-party": FundingType.THIRD_PARTY,
    "third-party funded research": FundingType.THIRD_PARTY,
    "auftragsforschung": FundingType.CONTRACT,
    "contract": FundingType.CONTRACT,
    "contract research": FundingType.CONTRACT,
}

_QUALIFICATION_LABELS = {
    "dissertation": QualificationType.DOCTORAL,
    "doctoral": QualificationType.DOCTORAL,
    "habilitation": QualificationType.HABILITATION,
}


_INT_RE = re.compile(r"[+-]?\d+\Z")
_FLOAT_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?\Z")
_ISO_DATE_RE = re.compile(r"(\d{4})-(\d{1,2})-(\d{1,2})\Z")
_SLASH_DATE_RE = re.compile(r"(\d{4})/(\d{1,2})/(\d{1,2})\Z")
_YEAR_RE = re.compile(r"\d{4}\Z")
_NAMED_DATE_RE = re.compile(r"(\d{1,2})\.?\s+([^\W\d_]+)\s+(\d{4})\Z", re.UNICODE)

_MONTH_NAMES = {
    name: number
    for number, names in enumerate(
        [
            ("januar", "january"),
            ("februar", "february"),
            ("märz", "march"),
            ("april",),
            ("mai", "may"),
            ("juni", "june"),
            ("juli", "july"),
            ("august",),
            ("september",),
            ("oktober", "october"),
            ("november",),
            ("dezember", "december"),
        ],
        start=1,
    )
    for name in names
}


def parse_number(raw: str) -> int | float | None:
    text = raw.strip()
    if _INT_RE.fullmatch(text):
        return int(text)
    if _FLOAT_RE.fullmatch(text):
        return float(text)
    return None


def parse_date(raw: str) -> date | None:
    """Accepted forms: YYYY/MM/DD, YYYY-MM-DD, bare YYYY, and 'DD Month YYYY'
    with German or English month names. A bare year means January 1st."""
    text = raw.strip()
    m = _ISO_DATE_RE.fullmatch(text) or _SLASH_DATE_RE.fullmatch(text)
    if m:
        try:
            return date(int(m.group(1)), int(m.group(2)), int(m.group(3)))
        except ValueError:
            return None
    if _YEAR_RE.fullmatch(text):
        return date(int(text), 1, 1)
    m = _NAMED_DATE_RE.fullmatch(text)
    if m:
        month = _MONTH_NAMES.get(m.group(2).lower())
        if month is None:
            return None
        try:
            return date(int(m.group(3)), month, int(m.group(1)))
        except ValueError:
            return None
    return None


def parse_attribute_value(raw: str, kind: AttributeKind) -> FactValue | None:
    """Parse a raw annotation value under the declared kind; None on mismatch."""
    if kind is AttributeKind.STRING:
        return raw
    if kind is AttributeKind.NUMBER:
        return parse_number(raw)
    if kind is AttributeKind.DATE:
        return parse_date(raw)
    if kind is AttributeKind.PAGE:
        if raw.strip():
            return PageName.parse(raw)
        return None
    raise AssertionError(f"unhandled kind {kind}")


def fact_value_as_text(value: FactValue) -> str:
    if isinstance(value, PageName):
        return value.render()
    if isinstance(value, date):
        return value.isoformat()
    return str(value)


def bind_facts(
    ast: PageAst, schema: Iterable[AttributeDecl]
) -> tuple[list[Fact], list[Diagnostic]]:
    """Bind annotations to typed facts, dropping type-mismatched ones.

    Annotations for undeclared attributes default to string kind. Category
    links become facts carrying the reserved ``category`` attribute. All
    failures are diagnostics, never exceptions.
    """
    declared: dict[str, AttributeDecl] = {}
    for decl in schema:
        if decl.name in declared:
            raise ValueError(f"duplicate attribute declaration: {decl.name!r}")
        declared[decl.name] = decl

    facts: list[Fact] = []
    diagnostics: list[Diagnostic] = []
    for node in ast.nodes:
        if isinstance(node, Annotation):
            decl = declared.get(node.attribute)
            kind = decl.kind if decl else AttributeKind.STRING
            value = parse_attribute_value(node.raw_value, kind)
            if value is None:
                diagnostics.append(
                    Diagnostic(
                        "type-mismatch",
                        f"value {node.raw_value!r} of attribute "
                        f"{node.attribute!r} does not parse as {kind.value}",
                    )
                )
                continue
            facts.append(Fact(subject=ast.name, attribute=node.attribute, value=value))
        elif isinstance(node, CategoryLink):
            facts.append(
                Fact(subject=ast.name, attribute=CATEGORY_ATTRIBUTE, value=node.category)
            )
    return facts, diagnostics


def parse_research_type(
    raw: str, synonyms: dict[str, ResearchTypeFlag]
) -> ResearchTypeFlag | None:
    return synonyms.get(raw.strip().lower())


def parse_funding_label(raw: str) -> FundingType | None:
    return _FUNDING_LABELS.get(raw.strip().lower())


def parse_qualification_label(raw: str) -> QualificationType | None:
    return _QUALIFICATION_LABELS.get(raw.strip().lower())


def derive_funding(research_types: set[ResearchTypeFlag]) -> set[FundingType]:
    """Three-membership rule: only the three funding-bearing flags contribute."""
    funding: set[FundingType] = set()
    if ResearchTypeFlag.IN_HOUSE in research_types:
        funding.add(FundingType.IN_HOUSE)
    if ResearchTypeFlag.THIRD_PARTY_FUNDED in research_types:
        funding.add(FundingType.THIRD_PARTY)
    if ResearchTypeFlag.CONTRACT_RESEARCH in research_types:
        funding.add(FundingType.CONTRACT)
    return funding


def derive_qualification(
    research_types: set[ResearchTypeFlag],
) -> QualificationType | None:
    """Doctoral wins over habilitation when both flags are present."""
    if ResearchTypeFlag.DOCTORAL_PROJECT in research_types:
        return QualificationType.DOCTORAL
    if ResearchTypeFlag.HABILITATION_PROJECT in research_types:
        return QualificationType.HABILITATION
    return None


def _check_rules_acyclic(rules: list[DerivationRule]) -> None:
    targets = {rule.target_attribute for rule in rules}
    sources = {rule.source_attribute for rule in rules}
    overlap = targets & sources
    if overlap:
        raise ValueError(f"derivation targets used as sources: {sorted(overlap)}")


def derive_fields(
    facts: list[Fact],
    rules: list[DerivationRule],
    synonyms: dict[str, ResearchTypeFlag] | None = None,
) -> tuple[list[Fact], list[Diagnostic]]:
    """Apply derivation rules, returning input facts plus derived ones.

    A target attribute that already has explicit facts for a subject is
    left alone: source data stays authoritative. Missing sources simply
    produce no derived fact.
    """
    from .config import load_research_type_synonyms

    _check_rules_acyclic(rules)
    if synonyms is None:
        synonyms = load_research_type_synonyms()

    by_subject: dict[PageName, dict[str, list[Fact]]] = {}
    for fact in facts:
        by_subject.setdefault(fact.subject, {}).setdefault(fact.attribute, []).append(fact)

    derived: list[Fact] = []
    diagnostics: list[Diagnostic] = []
    seen_diagnostics: set[tuple[str, str]] = set()

    def diagnose(kind: str, message: str) -> None:
        key = (kind, message)
        if key not in seen_diagnostics:
            seen_diagnostics.add(key)
            diagnostics.append(Diagnostic(kind, message))

    def flags_of(subject: PageName, attribute: str) -> set[ResearchTypeFlag]:
        flags: set[ResearchTypeFlag] = set()
        for fact in by_subject[subject].get(attribute, []):
            raw = fact_value_as_text(fact.value)
            flag = parse_research_type(raw, synonyms)
            if flag is None:
                diagnose("unknown-research-type", f"unrecognized type of research {raw!r}")
            else:
                flags.add(flag)
        return flags

    for subject, attributes in by_subject.items():
        for rule in rules:
            if rule.target_attribute in attributes:
                continue  # explicit facts win
            sources = attributes.get(rule.source_attribute, [])
            if rule.transform is Transform.YEAR_OF_DATE:
                years = sorted({f.value.year for f in sources if isinstance(f.value, date)})
                derived.extend(
                    Fact(subject=subject, attribute=rule.target_attribute, value=year)
                    for year in years
                )
            elif rule.transform is Transform.COUNT_OF_VALUES:
                if sources:
                    derived.append(
                        Fact(
                            subject=subject,
                            attribute=rule.target_attribute,
                            value=len(sources),
                        )
                    )
            elif rule.transform is Transform.FUNDING_MAPPING:
                if sources:
                    funding = derive_funding(flags_of(subject, rule.source_attribute))
                    derived.extend(
                        Fact(
                            subject=subject,
                            attribute=rule.target_attribute,
                            value=FUNDING_SURFACE[funding_type],
                        )
                        for funding_type in FundingType
                        if funding_type in funding
                    )
            elif rule.transform is Transform.QUALIFICATION_MAPPING:
                if sources:
                    flags = flags_of(subject, rule.source_attribute)
                    if (
                        ResearchTypeFlag.DOCTORAL_PROJECT in flags
                        and ResearchTypeFlag.HABILITATION_PROJECT in flags
                    ):
                        diagnose(
                            "qualification-conflict",
                            f"page {subject.render()!r} marked both doctoral and "
                            "habilitation; keeping doctoral",
                        )
                    qualification = derive_qualification(flags)
                    if qualification is not None:
                        derived.append(
                            Fact(
                                subject=subject,
                                attribute=rule.target_attribute,
                                value=QUALIFICATION_SURFACE[qualification],
                            )
                        )
    return list(facts) + derived, diagnostics
