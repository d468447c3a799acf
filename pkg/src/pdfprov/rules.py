"""Declarative byte-pattern rules and their execution against PDF sections.

A rule binds a byte-oriented regular expression to a producer, a section
and optional OS/distribution tags.  Rule files are plain UTF-8 text:

    rule <id> {
      producer = <name>
      section  = header | body | xref | trailer
      kind     = magic | keyorder | template | presence
      os       = [windows, linux, macos]        # optional
      distro   = [texlive, miktex]              # optional
      pattern  = "<byte-regex>"
    }

Comments start with '#'.  Patterns operate on raw bytes and support
literals, \\xNN escapes, \\r \\n \\t, character classes, repetition
(``*`` ``+`` ``?`` ``{m,n}``), alternation, grouping and the ``^``/``$``
anchors.  Lookaround and backreferences are rejected.

Presence rules are special: they match a one-byte pseudo-input that is
``P`` when the file has at least one classic xref table and ``A`` when it
has none, so that presence/absence facts ride the same rule mechanism as
byte patterns.  A presence match on the ``P`` token is flagged advisory:
nearly every producer emits a table, so the fact isn't treated as a
nomination by the detector, only as OS/distribution evidence.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import NotAPdf, PatternCompileError, RuleParseError
from .producers import Distro, OpSys, producer_name
from .segmenter import PdfSections, segment


class SectionKind(str, Enum):
    HEADER = "header"
    BODY = "body"
    XREF = "xref"
    TRAILER = "trailer"


SECTION_ORDER = (SectionKind.HEADER, SectionKind.BODY, SectionKind.XREF, SectionKind.TRAILER)


class RuleKind(str, Enum):
    MAGIC = "magic"
    KEYORDER = "keyorder"
    TEMPLATE = "template"
    PRESENCE = "presence"


_FORBIDDEN_CONSTRUCTS = re.compile(r"\(\?(?!:)|\\[1-9]")


def compile_pattern(source: str, rule_id: str = "<pattern>") -> re.Pattern[bytes]:
    """Compile a byte-regex source string; '.' matches any byte."""
    if _FORBIDDEN_CONSTRUCTS.search(source):
        raise PatternCompileError(rule_id, "lookaround and backreferences are not supported")
    try:
        raw = source.encode("latin-1")
    except UnicodeEncodeError as exc:
        raise PatternCompileError(rule_id, f"non-byte character in pattern: {exc}") from None
    try:
        return re.compile(raw, re.DOTALL)
    except re.error as exc:
        raise PatternCompileError(rule_id, str(exc)) from None


@dataclass(frozen=True)
class Rule:
    """One producer signature."""

    id: str
    producer: str
    section: SectionKind
    kind: RuleKind
    pattern: str
    os_tags: frozenset[str] = frozenset()
    distro_tags: frozenset[str] = frozenset()
    regex: re.Pattern[bytes] = field(compare=False, hash=False, repr=False, default=None)  # type: ignore[assignment]

    @staticmethod
    def make(
        id: str,
        producer: str,
        section: SectionKind,
        kind: RuleKind,
        pattern: str,
        os_tags: frozenset[str] = frozenset(),
        distro_tags: frozenset[str] = frozenset(),
    ) -> "Rule":
        return Rule(
            id, producer_name(producer), section, kind, pattern,
            os_tags, distro_tags, compile_pattern(pattern, id),
        )


@dataclass
class Rulepack:
    """A named, ordered collection of rules with unique ids."""

    name: str
    version: str
    rules: list[Rule]

    @property
    def counts_by_producer(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for rule in self.rules:
            counts[rule.producer] = counts.get(rule.producer, 0) + 1
        return counts

    def for_section(self, section: SectionKind) -> list[Rule]:
        return [r for r in self.rules if r.section == section]


@dataclass(frozen=True)
class RuleMatch:
    """One occurrence of a rule within one section element."""

    rule_id: str
    producer: str
    section: SectionKind
    match_offset: int
    element_ref: str
    kind: RuleKind
    os_tags: frozenset[str] = frozenset()
    distro_tags: frozenset[str] = frozenset()
    advisory: bool = False


# -- Rule-file parsing ---------------------------------------------------------

_RULE_OPEN_RE = re.compile(r"^rule\s+([A-Za-z0-9_][A-Za-z0-9_.-]*)\s*\{\s*$")
_FIELD_RE = re.compile(r"^([a-z]+)\s*=\s*(.*)$")
_VALID_OS = {o.value for o in OpSys}
_VALID_DISTRO = {d.value for d in Distro}


def _strip_comment(line: str) -> str:
    out: list[str] = []
    in_string = False
    i = 0
    while i < len(line):
        ch = line[i]
        if in_string:
            if ch == "\\":
                out.append(line[i : i + 2])
                i += 2
                continue
            if ch == '"':
                in_string = False
        else:
            if ch == '"':
                in_string = True
            elif ch == "#":
                break
        out.append(ch)
        i += 1
    return "".join(out).strip()


def _parse_quoted(value: str, lineno: int) -> str:
    """Decode a quoted pattern value.

    Only ``\\"`` is consumed at the file layer; every other escape is part
    of the regex source and passes through verbatim.
    """
    if not value.startswith('"'):
        raise RuleParseError(lineno, "pattern value must be quoted")
    out: list[str] = []
    i = 1
    while i < len(value):
        ch = value[i]
        if ch == "\\" and i + 1 < len(value):
            nxt = value[i + 1]
            if nxt == '"':
                out.append('"')
            else:
                out.append(ch)
                out.append(nxt)
            i += 2
            continue
        if ch == '"':
            rest = value[i + 1 :].strip()
            if rest:
                raise RuleParseError(lineno, f"unexpected trailing text {rest!r}")
            return "".join(out)
        out.append(ch)
        i += 1
    raise RuleParseError(lineno, "unterminated pattern string")


def _parse_tag_list(value: str, valid: set[str], what: str, lineno: int) -> frozenset[str]:
    value = value.strip()
    if not (value.startswith("[") and value.endswith("]")):
        raise RuleParseError(lineno, f"{what} must be a [bracketed, list]")
    items = [item.strip() for item in value[1:-1].split(",") if item.strip()]
    for item in items:
        if item not in valid:
            raise RuleParseError(lineno, f"unknown {what} tag {item!r}")
    return frozenset(items)


def load_rulepack(text: str, name: str = "rulepack", version: str = "0") -> Rulepack:
    """Parse rule-file text into a compiled, validated :class:`Rulepack`."""
    rules: list[Rule] = []
    seen_ids: set[str] = set()
    current: dict[str, object] | None = None
    current_line = 0
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw_line)
        if not line:
            continue
        if current is None:
            m = _RULE_OPEN_RE.match(line)
            if not m:
                raise RuleParseError(lineno, f"expected 'rule <id> {{', got {line!r}")
            rid = m.group(1)
            if rid in seen_ids:
                raise RuleParseError(lineno, f"duplicate rule id {rid!r}")
            seen_ids.add(rid)
            current = {"id": rid}
            current_line = lineno
            continue
        if line == "}":
            rules.append(_finish_rule(current, current_line))
            current = None
            continue
        m = _FIELD_RE.match(line)
        if not m:
            raise RuleParseError(lineno, f"expected 'key = value', got {line!r}")
        key, value = m.group(1), m.group(2)
        if key == "producer":
            current["producer"] = value.strip()
        elif key == "section":
            try:
                current["section"] = SectionKind(value.strip())
            except ValueError:
                raise RuleParseError(lineno, f"unknown section {value.strip()!r}") from None
        elif key == "kind":
            try:
                current["kind"] = RuleKind(value.strip())
            except ValueError:
                raise RuleParseError(lineno, f"unknown kind {value.strip()!r}") from None
        elif key == "os":
            current["os"] = _parse_tag_list(value, _VALID_OS, "os", lineno)
        elif key == "distro":
            current["distro"] = _parse_tag_list(value, _VALID_DISTRO, "distro", lineno)
        elif key == "pattern":
            current["pattern"] = _parse_quoted(value.strip(), lineno)
        else:
            raise RuleParseError(lineno, f"unknown field {key!r}")
    if current is not None:
        raise RuleParseError(current_line, "unterminated rule block")
    return Rulepack(name, version, rules)


def _finish_rule(fields: dict[str, object], lineno: int) -> Rule:
    for required in ("producer", "section", "kind", "pattern"):
        if required not in fields:
            raise RuleParseError(lineno, f"rule {fields['id']!r} is missing {required!r}")
    return Rule.make(
        str(fields["id"]),
        str(fields["producer"]),
        fields["section"],  # type: ignore[arg-type]
        fields["kind"],  # type: ignore[arg-type]
        str(fields["pattern"]),
        fields.get("os", frozenset()),  # type: ignore[arg-type]
        fields.get("distro", frozenset()),  # type: ignore[arg-type]
    )


def render_rulepack(rules: list[Rule], header_comment: str = "") -> str:
    """Render rules back to the rule-file format (deterministic)."""
    blocks: list[str] = []
    if header_comment:
        blocks.append("\n".join(f"# {line}".rstrip() for line in header_comment.splitlines()))
    for rule in rules:
        lines = [f"rule {rule.id} {{"]
        lines.append(f"  producer = {rule.producer}")
        lines.append(f"  section  = {rule.section.value}")
        lines.append(f"  kind     = {rule.kind.value}")
        if rule.os_tags:
            lines.append(f"  os       = [{', '.join(sorted(rule.os_tags))}]")
        if rule.distro_tags:
            lines.append(f"  distro   = [{', '.join(sorted(rule.distro_tags))}]")
        pattern = rule.pattern.replace('"', '\\"')
        lines.append(f'  pattern  = "{pattern}"')
        lines.append("}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


# -- Matching ------------------------------------------------------------------


def section_elements(sections: PdfSections, kind: SectionKind) -> list[tuple[str, bytes]]:
    """Eligible (element_ref, bytes) pairs for one section.

    Metadata objects never appear here; for the xref section this returns
    the table bytes only (the presence pseudo-input is handled by
    :func:`match_section` directly).
    """
    if kind is SectionKind.HEADER:
        comment = sections.header.binary_comment
        return [("header", comment)] if comment else []
    if kind is SectionKind.BODY:
        return [
            (f"obj:{obj.obj_num}:{obj.gen_num}", obj.raw)
            for obj in sections.objects
            if not obj.is_metadata
        ]
    if kind is SectionKind.XREF:
        return [(f"xref:{i}", t.raw) for i, t in enumerate(sections.xref_tables)]
    return [(f"trailer:{i}", t.raw) for i, t in enumerate(sections.trailers)]


def presence_token(sections: PdfSections) -> bytes:
    return b"A" if sections.classic_xref_absent else b"P"


def match_section(
    pack: Rulepack, sections: PdfSections, kind: SectionKind
) -> list[RuleMatch]:
    """Run every rule of one section against every eligible element."""
    elements = section_elements(sections, kind)
    token = presence_token(sections)
    matches: list[tuple[tuple[str, int, int], RuleMatch]] = []
    for rule in pack.for_section(kind):
        if rule.kind is RuleKind.PRESENCE:
            targets = [("xref:presence", token, 0)]
        else:
            targets = [(ref, data, idx) for idx, (ref, data) in enumerate(elements)]
        for ref, data, idx in targets:
            for m in rule.regex.finditer(data):
                matches.append(
                    (
                        (rule.id, idx, m.start()),
                        RuleMatch(
                            rule_id=rule.id,
                            producer=rule.producer,
                            section=kind,
                            match_offset=m.start(),
                            element_ref=ref,
                            kind=rule.kind,
                            os_tags=rule.os_tags,
                            distro_tags=rule.distro_tags,
                            advisory=(rule.kind is RuleKind.PRESENCE and token == b"P"),
                        ),
                    )
                )
                if m.end() == m.start():  # zero-width match guard
                    break
    matches.sort(key=lambda pair: pair[0])
    return [match for _, match in matches]


def evaluate_file(pack: Rulepack, data: bytes) -> dict[SectionKind, list[RuleMatch]]:
    """Segment ``data`` and match all four sections.

    Raises :class:`NotAPdf` for inputs without a PDF header.
    """
    sections = segment(data)
    return evaluate_sections(pack, sections)


def evaluate_sections(pack: Rulepack, sections: PdfSections) -> dict[SectionKind, list[RuleMatch]]:
    return {kind: match_section(pack, sections, kind) for kind in SECTION_ORDER}


__all__ = [
    "SectionKind",
    "SECTION_ORDER",
    "RuleKind",
    "Rule",
    "Rulepack",
    "RuleMatch",
    "compile_pattern",
    "load_rulepack",
    "render_rulepack",
    "section_elements",
    "presence_token",
    "match_section",
    "evaluate_file",
    "evaluate_sections",
    "NotAPdf",
]
