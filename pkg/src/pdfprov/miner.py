"""Derive producer signatures by comparing same-source PDFs across tools.

The miner looks, per producer and per section, for byte patterns shared
by every file in the group, then generalizes the volatile parts: decimal
digit runs become ``[0-9]*`` and long hex strings inside angle brackets
become ``[0-9A-F]*`` (but only where the values actually vary across the
group; constant runs stay literal).  Every surviving candidate is scored
for support (fraction of the producer's files it matches, 1.0 by
construction and re-verified) and discriminacy (worst-case fraction of
any other producer's files it matches).

The search is a pairwise maximal-common-substring intersection iterated
across the group, on a token alphabet where digit/hex runs compare equal
regardless of value.  Groups are small; auditability beats asymptotics.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import EmptyGroup, SectionAbsentEverywhere
from .producers import Producer
from .rules import (
    RuleKind,
    SectionKind,
    SECTION_ORDER,
    compile_pattern,
    section_elements,
)
from .segmenter import PdfSections, segment

_NUM = 256
_HEX = 257
_SEP_BASE = 258

_HEX_ANGLE_RE = re.compile(rb"<([0-9A-Fa-f]{16,})>")
_NUM_RE = re.compile(rb"[0-9]+")

_SLUGS: dict[str, str] = {
    Producer.ACROBAT_DISTILLER.value: "acrobat-distiller",
    Producer.MICROSOFT_OFFICE_WORD.value: "word",
    Producer.LIBREOFFICE.value: "libreoffice",
    Producer.GHOSTSCRIPT.value: "ghostscript",
    Producer.MACOS_QUARTZ.value: "quartz",
    Producer.PDFTEX.value: "pdftex",
    Producer.SKIA_PDF.value: "skia",
    Producer.CAIRO.value: "cairo",
    Producer.XDVIPDFMX.value: "xdvipdfmx",
    Producer.LUATEX.value: "luatex",
    Producer.PDFLATEX.value: "pdflatex",
}


def producer_slug(name: str) -> str:
    return _SLUGS.get(name) or re.sub(r"[^a-z0-9]+", "-", name.lower()).strip("-")


@dataclass(frozen=True)
class CorpusFile:
    data: bytes
    producer: str
    os: str = ""
    distro: str = ""
    path: str = ""


@dataclass
class LabeledCorpus:
    """PDF bytes grouped by producer, with labels from a manifest."""

    files: list[CorpusFile]
    _sections: dict[int, PdfSections] = field(default_factory=dict, repr=False)

    @property
    def groups(self) -> dict[str, list[CorpusFile]]:
        grouped: dict[str, list[CorpusFile]] = {}
        for f in self.files:
            grouped.setdefault(f.producer, []).append(f)
        return grouped

    def sections_of(self, f: CorpusFile) -> PdfSections:
        key = id(f)
        if key not in self._sections:
            self._sections[key] = segment(f.data)
        return self._sections[key]

    @staticmethod
    def from_manifest(path: str | Path) -> "LabeledCorpus":
        """Load ``<path>TAB<producer>[TAB os][TAB distro]`` manifest lines."""
        path = Path(path)
        base = path.parent
        files: list[CorpusFile] = []
        for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) < 2 or not cols[1]:
                raise ValueError(f"{path}:{lineno}: expected '<path>\\t<producer>'")
            rel = cols[0]
            files.append(
                CorpusFile(
                    data=(base / rel).read_bytes(),
                    producer=cols[1],
                    os=cols[2] if len(cols) > 2 else "",
                    distro=cols[3] if len(cols) > 3 else "",
                    path=rel,
                )
            )
        return LabeledCorpus(files)


@dataclass(frozen=True)
class CandidatePattern:
    """A mined pattern with its corpus evidence."""

    producer: str
    section: SectionKind
    template: str
    kind: RuleKind
    support: float
    discriminacy: float
    byte_len: int


# -- Tokenization ----------------------------------------------------------


def _tokenize(data: bytes) -> list[int]:
    tokens: list[int] = []
    pos = 0
    for m in _HEX_ANGLE_RE.finditer(data):
        _tokenize_literal(tokens, data[pos : m.start() + 1])  # keep '<'
        tokens.append(_HEX)
        pos = m.end() - 1  # '>' belongs to the following literal run
    _tokenize_literal(tokens, data[pos:])
    return tokens


def _tokenize_literal(tokens: list[int], chunk: bytes) -> None:
    pos = 0
    for m in _NUM_RE.finditer(chunk):
        tokens.extend(chunk[pos : m.start()])
        tokens.append(_NUM)
        pos = m.end()
    tokens.extend(chunk[pos:])


def _file_tokens(haystacks: list[bytes]) -> list[int]:
    tokens: list[int] = []
    for i, hay in enumerate(haystacks):
        if i:
            tokens.append(_SEP_BASE + i)  # unmatchable boundary
        tokens.extend(_tokenize(hay))
    return tokens


# -- Maximal common substrings ----------------------------------------------


def _maximal_common(a: tuple[int, ...], b: list[int]) -> set[tuple[int, ...]]:
    """All maximal token substrings of ``a`` that occur in ``b``."""
    positions: dict[int, list[int]] = {}
    for j, tok in enumerate(b):
        positions.setdefault(tok, []).append(j)
    out: set[tuple[int, ...]] = set()
    prev: dict[int, int] = {}
    rows: list[dict[int, int]] = []
    for tok in a:
        row: dict[int, int] = {}
        for j in positions.get(tok, ()):
            row[j] = prev.get(j - 1, 0) + 1
        rows.append(row)
        prev = row
    for i, row in enumerate(rows):
        nxt = rows[i + 1] if i + 1 < len(rows) else {}
        for j, run in row.items():
            if (j + 1) not in nxt:  # not extendable to the right
                out.add(tuple(a[i - run + 1 : i + 1]))
    return out


def _contains(big: tuple[int, ...], small: tuple[int, ...]) -> bool:
    n, m = len(big), len(small)
    if m > n:
        return False
    first = small[0]
    for i in range(n - m + 1):
        if big[i] == first and big[i : i + m] == small:
            return True
    return False


def _drop_contained(cands: set[tuple[int, ...]]) -> list[tuple[int, ...]]:
    ordered = sorted(cands, key=lambda c: (-len(c), c))
    kept: list[tuple[int, ...]] = []
    for cand in ordered:
        if not any(_contains(k, cand) for k in kept):
            kept.append(cand)
    return kept


def _common_across(files_tokens: list[list[int]], first_haystacks: list[bytes],
                   min_tokens: int) -> list[tuple[int, ...]]:
    cands: list[tuple[int, ...]] = [
        tuple(_tokenize(hay)) for hay in first_haystacks if hay
    ]
    for tokens in files_tokens[1:]:
        found: set[tuple[int, ...]] = set()
        for cand in cands:
            found |= _maximal_common(cand, tokens)
        cands = [c for c in _drop_contained(found) if len(c) >= min_tokens]
        if not cands:
            break
    return cands


# -- Template construction ---------------------------------------------------

_LITERAL_SPECIALS = set(b"\\.^$*+?()[]{}|")


def escape_literal(chunk: bytes) -> str:
    """Render literal bytes as byte-regex source text."""
    out: list[str] = []
    for b in chunk:
        if b in _LITERAL_SPECIALS:
            out.append("\\" + chr(b))
        elif b == 0x0D:
            out.append("\\r")
        elif b == 0x0A:
            out.append("\\n")
        elif b == 0x09:
            out.append("\\t")
        elif 0x20 <= b <= 0x7E:
            out.append(chr(b))
        else:
            out.append(f"\\x{b:02X}")
    return "".join(out)


def _occurrence_regex(tokens: tuple[int, ...]) -> re.Pattern[bytes]:
    parts: list[bytes] = []
    for tok in tokens:
        if tok == _NUM:
            parts.append(b"([0-9]+)")
        elif tok == _HEX:
            parts.append(b"([0-9A-Fa-f]{16,})")
        else:
            parts.append(re.escape(bytes([tok])))
    return re.compile(b"".join(parts), re.DOTALL)


def _build_template(tokens: tuple[int, ...], group_haystacks: list[list[bytes]]) -> str | None:
    """Turn a common token run into regex source, generalizing varying runs."""
    probe = _occurrence_regex(tokens)
    slots = sum(1 for t in tokens if t in (_NUM, _HEX))
    values: list[set[bytes]] = [set() for _ in range(slots)]
    for haystacks in group_haystacks:
        for hay in haystacks:
            for m in probe.finditer(hay):
                for idx in range(slots):
                    values[idx].add(m.group(idx + 1))
    if slots and any(not v for v in values):
        return None  # never observed as a whole; not a real common run
    parts: list[str] = []
    literal: list[int] = []
    slot = 0
    for tok in tokens:
        if tok < 256:
            literal.append(tok)
            continue
        if literal:
            parts.append(escape_literal(bytes(literal)))
            literal = []
        seen = values[slot]
        slot += 1
        if len(seen) == 1:
            parts.append(next(iter(seen)).decode("ascii"))
        elif tok == _NUM:
            parts.append("[0-9]*")
        else:
            parts.append("[0-9A-F]*")
    if literal:
        parts.append(escape_literal(bytes(literal)))
    return "".join(parts)


# -- Mining -------------------------------------------------------------------


def _group_haystacks(corpus: LabeledCorpus, group: list[CorpusFile],
                     section: SectionKind) -> list[list[bytes]]:
    return [
        [data for _, data in section_elements(corpus.sections_of(f), section)]
        for f in group
    ]


def _fraction_matching(regex: re.Pattern[bytes], haystacks_per_file: list[list[bytes]]) -> float:
    if not haystacks_per_file:
        return 0.0
    hits = sum(
        1 for haystacks in haystacks_per_file if any(regex.search(h) for h in haystacks)
    )
    return hits / len(haystacks_per_file)


def mine(corpus: LabeledCorpus, section: SectionKind, min_len: int = 8,
         max_discriminacy: float = 0.0) -> dict[str, list[CandidatePattern]]:
    """Mine one section across the whole corpus.

    Returns, per producer, the candidates with full support, discriminacy
    at or below the threshold, and a concrete match of at least
    ``min_len`` bytes, sorted by (discriminacy, length desc, template).
    """
    if min_len < 4:
        raise ValueError("min_len must be at least 4")
    groups = corpus.groups
    if not groups:
        raise EmptyGroup("corpus has no files")
    for producer, group in groups.items():
        if not group:
            raise EmptyGroup(producer)
    all_haystacks = {
        producer: _group_haystacks(corpus, group, section)
        for producer, group in groups.items()
    }
    if section is not SectionKind.XREF and all(
        not any(h) for h in all_haystacks.values()
    ):
        raise SectionAbsentEverywhere(section.value)

    results: dict[str, list[CandidatePattern]] = {}
    for producer, group in groups.items():
        own = all_haystacks[producer]
        others = {p: h for p, h in all_haystacks.items() if p != producer}
        candidates: list[CandidatePattern] = []
        if all(not h for h in own):
            if section is SectionKind.XREF:
                # The absence of the section is itself the signature.
                disc = max(
                    (sum(1 for h in hs if not h) / len(hs) for hs in others.values()),
                    default=0.0,
                )
                cand = CandidatePattern(producer, section, "^A$", RuleKind.PRESENCE,
                                        1.0, disc, 1)
                if disc <= max_discriminacy:
                    candidates.append(cand)
            results[producer] = candidates
            continue
        if any(not h for h in own):
            results[producer] = []  # mixed presence: full support is impossible
            continue
        file_tokens = [_file_tokens(h) for h in own]
        for tokens in _common_across(file_tokens, own[0], min_tokens=2):
            template = _build_template(tokens, own)
            if template is None:
                continue
            regex = compile_pattern(template)
            first = None
            for hay in own[0]:
                first = regex.search(hay)
                if first:
                    break
            if first is None:
                continue
            byte_len = first.end() - first.start()
            if byte_len < min_len:
                continue
            support = _fraction_matching(regex, own)
            if support < 1.0:
                continue
            disc = max(
                (_fraction_matching(regex, hs) for hs in others.values()), default=0.0
            )
            if disc > max_discriminacy:
                continue
            candidates.append(
                CandidatePattern(producer, section, template, RuleKind.TEMPLATE,
                                 support, disc, byte_len)
            )
        candidates.sort(key=lambda c: (c.discriminacy, -c.byte_len, c.template))
        results[producer] = candidates
    return results


def mine_all(corpus: LabeledCorpus, min_len: int = 8,
             max_discriminacy: float = 0.0) -> dict[str, list[CandidatePattern]]:
    """Mine all four sections; candidate lists are concatenated per producer."""
    merged: dict[str, list[CandidatePattern]] = {p: [] for p in corpus.groups}
    for section in SECTION_ORDER:
        try:
            mined = mine(corpus, section, min_len, max_discriminacy)
        except SectionAbsentEverywhere:
            continue
        for producer, cands in mined.items():
            merged[producer].extend(cands)
    return merged


def emit_rulepack(candidates: dict[str, list[CandidatePattern]], name: str,
                  group_labels: dict[str, tuple[str, str]] | None = None) -> str:
    """Render mined candidates as deterministic rule-file text.

    ``group_labels`` optionally maps producers to (os, distro) tags; pass
    :func:`uniform_group_labels` output to tag rules whose whole group
    shares a label.  The output always re-loads through ``load_rulepack``.
    """
    group_labels = group_labels or {}
    lines = [f"# mined rulepack: {name}", "# generated by pdfprov mine"]
    blocks = ["\n".join(lines)]
    for producer in sorted(candidates):
        slug = producer_slug(producer)
        per_section: dict[SectionKind, int] = {}
        for cand in sorted(
            candidates[producer],
            key=lambda c: (SECTION_ORDER.index(c.section), c.discriminacy, -c.byte_len, c.template),
        ):
            idx = per_section.get(cand.section, 0)
            per_section[cand.section] = idx + 1
            os_label, distro_label = group_labels.get(producer, ("", ""))
            block = [f"rule {slug}-{cand.section.value}-{idx} {{"]
            block.append(f"  producer = {producer}")
            block.append(f"  section  = {cand.section.value}")
            block.append(f"  kind     = {cand.kind.value}")
            if os_label:
                block.append(f"  os       = [{os_label}]")
            if distro_label:
                block.append(f"  distro   = [{distro_label}]")
            pattern = cand.template.replace('"', '\\"')
            block.append(f'  pattern  = "{pattern}"')
            block.append("}")
            blocks.append("\n".join(block))
    return "\n\n".join(blocks) + "\n"


def uniform_group_labels(corpus: LabeledCorpus) -> dict[str, tuple[str, str]]:
    """(os, distro) per producer when the whole group agrees, else blanks."""
    labels: dict[str, tuple[str, str]] = {}
    for producer, group in corpus.groups.items():
        os_values = {f.os for f in group}
        distro_values = {f.distro for f in group}
        os_label = os_values.pop() if len(os_values) == 1 else ""
        distro_label = distro_values.pop() if len(distro_values) == 1 else ""
        labels[producer] = (os_label, distro_label)
    return labels
