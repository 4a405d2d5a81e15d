"""Semantic-wiki markup parsing and template expansion.

Parses wiki source into a lossless AST of text runs, category links,
typed annotations (``[[attribute::value]]``) and template transclusions
(``{{Name|arg|key=val}}``), then expands transclusions so that
annotations produced by templates are indistinguishable from inline
ones.

Parsing is total: malformed input never raises, it degrades to literal
text plus a diagnostic. Concatenating the source spans of all nodes in
order reproduces the input exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Union
from urllib.parse import quote, unquote

PAGE_FILE_EXTENSION = ".wiki"

DEFAULT_MAX_EXPANSION_DEPTH = 8


class Namespace(Enum):
    MAIN = "main"
    CATEGORY = "category"
    ATTRIBUTE = "attribute"
    TEMPLATE = "template"


_NAMESPACE_PREFIXES = {
    "category": Namespace.CATEGORY,
    "attribute": Namespace.ATTRIBUTE,
    "template": Namespace.TEMPLATE,
}

_NAMESPACE_RENDER = {
    Namespace.CATEGORY: "Category",
    Namespace.ATTRIBUTE: "Attribute",
    Namespace.TEMPLATE: "Template",
}


@dataclass(frozen=True)
class PageName:
    """A wiki page name: namespace plus local name.

    Rendered as ``Namespace:local_name`` for non-main namespaces and as
    the bare local name for the main namespace.
    """

    namespace: Namespace
    local_name: str

    def __post_init__(self):
        if not self.local_name or self.local_name != self.local_name.strip():
            raise ValueError(f"invalid page local name: {self.local_name!r}")

    def render(self) -> str:
        if self.namespace is Namespace.MAIN:
            return self.local_name
        return f"{_NAMESPACE_RENDER[self.namespace]}:{self.local_name}"

    @classmethod
    def parse(cls, rendered: str) -> "PageName":
        prefix, sep, rest = rendered.partition(":")
        if sep:
            namespace = _NAMESPACE_PREFIXES.get(prefix.strip().lower())
            if namespace is not None and rest.strip():
                return cls(namespace, rest.strip())
        return cls(Namespace.MAIN, rendered.strip())


@dataclass(frozen=True)
class PageSource:
    """Raw wiki source for one page."""

    name: PageName
    markup: str


@dataclass(frozen=True)
class Diagnostic:
    """A recoverable problem noticed while processing a page."""

    kind: str
    message: str


@dataclass(frozen=True)
class TextRun:
    text: str
    start: int
    end: int


@dataclass(frozen=True)
class CategoryLink:
    category: str
    start: int
    end: int


@dataclass(frozen=True)
class Annotation:
    attribute: str
    raw_value: str
    display_override: str | None
    start: int
    end: int


@dataclass(frozen=True)
class Transclusion:
    template: str
    arguments: dict[str, str]  # positional args keyed "1", "2", ...
    start: int
    end: int

    def __eq__(self, other):
        if not isinstance(other, Transclusion):
            return NotImplemented
        return (
            self.template == other.template
            and list(self.arguments.items()) == list(other.arguments.items())
            and self.start == other.start
            and self.end == other.end
        )


AstNode = Union[TextRun, CategoryLink, Annotation, Transclusion]


@dataclass(frozen=True)
class PageAst:
    """Parsed page. ``nodes`` spans index into ``markup`` losslessly."""

    name: PageName
    markup: str
    nodes: tuple[AstNode, ...]
    diagnostics: tuple[Diagnostic, ...] = ()

    def annotations(self) -> list[Annotation]:
        return [n for n in self.nodes if isinstance(n, Annotation)]

    def category_links(self) -> list[CategoryLink]:
        return [n for n in self.nodes if isinstance(n, CategoryLink)]

    def transclusions(self) -> list[Transclusion]:
        return [n for n in self.nodes if isinstance(n, Transclusion)]


@dataclass(frozen=True)
class TemplateDefinition:
    """Template body with ``{{{name}}}`` / ``{{{name|default}}}`` holes."""

    name: str
    body: str


# Parameter placeholder inside a template body: {{{name}}} or {{{name|default}}}.
_PLACEHOLDER_RE = re.compile(r"\{\{\{([^{}|]*)(?:\|([^{}]*))?\}\}\}")


def _bracket_end(text: str, j: int) -> int:
    """End offset of the ``[[...]]`` starting at ``j``, or -1.

    A second ``[[`` opening before the closing ``]]`` disqualifies the
    construct: the outer token is then literal and the inner construct
    gets its own chance to parse.
    """
    close = text.find("]]", j + 2)
    if close == -1:
        return -1
    nxt = text.find("[[", j + 2)
    if nxt != -1 and nxt < close:
        return -1
    return close + 2


def _brace_end(text: str, j: int) -> int:
    """End offset of the ``{{...}}`` starting at ``j``, or -1 if unterminated."""
    n = len(text)
    k = j + 2
    depth = 1
    while k < n:
        ch = text[k]
        if ch == "{":
            m = _PLACEHOLDER_RE.match(text, k)
            if m:
                k = m.end()
            elif text.startswith("{{", k):
                depth += 1
                k += 2
            else:
                k += 1
        elif ch == "}":
            if text.startswith("}}", k):
                depth -= 1
                k += 2
                if depth == 0:
                    return k
            else:
                k += 1
        elif ch == "[" and text.startswith("[[", k):
            e = _bracket_end(text, k)
            k = e if e != -1 else k + 2
        else:
            k += 1
    return -1


def _split_top_level(text: str, sep: str) -> list[str]:
    """Split on ``sep`` occurrences that sit outside nested constructs."""
    parts: list[str] = []
    n = len(text)
    start = 0
    k = 0
    while k < n:
        ch = text[k]
        if ch == sep:
            parts.append(text[start:k])
            start = k + 1
            k += 1
        elif ch == "{":
            m = _PLACEHOLDER_RE.match(text, k)
            if m:
                k = m.end()
            elif text.startswith("{{", k):
                e = _brace_end(text, k)
                k = e if e != -1 else k + 2
            else:
                k += 1
        elif ch == "[" and text.startswith("[[", k):
            e = _bracket_end(text, k)
            k = e if e != -1 else k + 2
        else:
            k += 1
    parts.append(text[start:])
    return parts


def _parse_bracket_construct(markup: str, j: int, end: int) -> AstNode | None:
    """Classify a terminated ``[[...]]`` at ``j``; None means literal text."""
    inner = markup[j + 2 : end - 2]
    if "::" in inner:
        attr, _, rest = inner.partition("::")
        attr = attr.strip()
        if attr:
            value, sep, display = rest.partition("|")
            return Annotation(
                attribute=attr,
                raw_value=value.strip(),
                display_override=display.strip() if sep else None,
                start=j,
                end=end,
            )
        return None
    prefix, sep, rest = inner.partition(":")
    if sep and prefix.strip().lower() == "category":
        category = rest.partition("|")[0].strip()  # drop any sort key
        if category:
            return CategoryLink(category=category, start=j, end=end)
    return None


def _parse_transclusion(markup: str, j: int, end: int) -> Transclusion | None:
    """Build a Transclusion from a terminated ``{{...}}``; None means literal."""
    inner = markup[j + 2 : end - 2]
    segments = _split_top_level(inner, "|")
    name = segments[0].strip()
    if name.lower().startswith("template:"):
        name = name[len("template:") :].strip()
    if not name:
        return None
    arguments: dict[str, str] = {}
    position = 0
    for segment in segments[1:]:
        pieces = _split_top_level(segment, "=")
        if len(pieces) > 1 and pieces[0].strip():
            key = pieces[0].strip()
            arguments[key] = segment[len(pieces[0]) + 1 :].strip()
        else:
            position += 1
            arguments[str(position)] = segment
    return Transclusion(template=name, arguments=arguments, start=j, end=end)


def parse_page(source: PageSource) -> PageAst:
    """Parse wiki markup into a lossless AST. Never raises on malformed input."""
    markup = source.markup
    n = len(markup)
    nodes: list[AstNode] = []
    diagnostics: list[Diagnostic] = []
    text_start = 0
    i = 0

    def flush(upto: int) -> None:
        if upto > text_start:
            nodes.append(TextRun(text=markup[text_start:upto], start=text_start, end=upto))

    while i < n:
        b = markup.find("[[", i)
        c = markup.find("{{", i)
        if b == -1 and c == -1:
            break
        if c == -1 or (b != -1 and b < c):
            j = b
            end = _bracket_end(markup, j)
            if end == -1:
                if markup.find("]]", j + 2) == -1:
                    diagnostics.append(
                        Diagnostic("unterminated-construct", f"unterminated '[[' at offset {j}")
                    )
                # token stays literal; an inner construct may still parse
                i = j + 2
                continue
            node = _parse_bracket_construct(markup, j, end)
        else:
            j = c
            m = _PLACEHOLDER_RE.match(markup, j)
            if m:
                # bare parameter placeholder outside a template body: literal
                i = m.end()
                continue
            end = _brace_end(markup, j)
            if end == -1:
                diagnostics.append(
                    Diagnostic("unterminated-construct", f"unterminated '{{{{' at offset {j}")
                )
                i = j + 2
                continue
            node = _parse_transclusion(markup, j, end)
        if node is None:
            # terminated but unrecognized: swallow into the running text
            i = end
            continue
        flush(j)
        nodes.append(node)
        text_start = end
        i = end
    flush(n)
    return PageAst(
        name=source.name,
        markup=markup,
        nodes=tuple(nodes),
        diagnostics=tuple(diagnostics),
    )


def substitute_parameters(body: str, arguments: dict[str, str]) -> str:
    """Fill template parameter placeholders; unbound ones without a default stay literal."""

    def fill(m: re.Match) -> str:
        name = m.group(1).strip()
        if name in arguments:
            return arguments[name]
        if m.group(2) is not None:
            return m.group(2)
        return m.group(0)

    return _PLACEHOLDER_RE.sub(fill, body)


def expand_templates(
    ast: PageAst,
    templates: dict[str, TemplateDefinition],
    max_depth: int = DEFAULT_MAX_EXPANSION_DEPTH,
) -> PageAst:
    """Replace transclusions of known templates by their parsed expansions.

    Expansion is textual: each layer splices substituted template bodies
    into the page markup and re-parses, so nested transclusions and
    annotations carried in arguments surface naturally. At most
    ``max_depth`` layers run, which bounds cyclic transclusion. Unknown
    templates and transclusions left over when the depth is exhausted
    become literal text runs with a diagnostic.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    current = ast
    for _ in range(max_depth):
        if not any(
            isinstance(node, Transclusion) and node.template in templates
            for node in current.nodes
        ):
            break
        parts = []
        for node in current.nodes:
            if isinstance(node, Transclusion) and node.template in templates:
                parts.append(
                    substitute_parameters(templates[node.template].body, node.arguments)
                )
            else:
                parts.append(current.markup[node.start : node.end])
        current = parse_page(PageSource(name=ast.name, markup="".join(parts)))

    extra: list[Diagnostic] = []
    converted: list[AstNode] = []
    depth_exceeded = False
    for node in current.nodes:
        if isinstance(node, Transclusion):
            if node.template in templates:
                depth_exceeded = True
            else:
                extra.append(
                    Diagnostic("unknown-template", f"template {node.template!r} is not defined")
                )
            converted.append(
                TextRun(
                    text=current.markup[node.start : node.end],
                    start=node.start,
                    end=node.end,
                )
            )
        else:
            converted.append(node)
    if depth_exceeded:
        extra.insert(
            0,
            Diagnostic(
                "depth-exceeded",
                f"template expansion stopped after {max_depth} layers",
            ),
        )
    if current is ast and not extra:
        return ast
    return PageAst(
        name=ast.name,
        markup=current.markup,
        nodes=tuple(converted),
        diagnostics=current.diagnostics + tuple(extra),
    )


def page_file_name(name: PageName) -> str:
    """Percent-encoded rendered page name plus the page file extension."""
    return quote(name.render(), safe="") + PAGE_FILE_EXTENSION


def page_name_from_file(file_name: str) -> PageName:
    stem = file_name
    if stem.endswith(PAGE_FILE_EXTENSION):
        stem = stem[: -len(PAGE_FILE_EXTENSION)]
    return PageName.parse(unquote(stem))


@dataclass
class PageDirectory:
    """Contents of a corpus directory: project pages plus template definitions."""

    pages: list[PageSource] = field(default_factory=list)
    templates: dict[str, TemplateDefinition] = field(default_factory=dict)
    errors: list[Diagnostic] = field(default_factory=list)


def load_page_directory(path: str | Path) -> PageDirectory:
    """Read every ``.wiki`` file in ``path``; template-namespace pages become templates.

    Unreadable files are skipped with an error entry instead of failing the load.
    """
    directory = PageDirectory()
    for file_path in sorted(Path(path).iterdir()):
        if file_path.suffix != PAGE_FILE_EXTENSION or not file_path.is_file():
            continue
        name = page_name_from_file(file_path.name)
        try:
            markup = file_path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            directory.errors.append(
                Diagnostic("unreadable-file", f"{file_path.name}: {exc}")
            )
            continue
        if name.namespace is Namespace.TEMPLATE:
            directory.templates[name.local_name] = TemplateDefinition(
                name=name.local_name, body=markup
            )
        else:
            directory.pages.append(PageSource(name=name, markup=markup))
    return directory
