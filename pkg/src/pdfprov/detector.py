"""Per-section candidate sets, majority voting and outcome classification.

Each section nominates the set of producers whose rules matched it.  The
file-level verdict combines the four sections by counting, per producer,
how many sections nominated it:

* a unique maximum of two or more votes names that producer;
* a tied maximum is reported as ambiguous rather than decided by chance;
* a single vote wins only when no other producer received any vote;
* four empty sections yield no result.

Presence matches flagged advisory (the ubiquitous "has a classic xref
table" fact) never nominate; they only feed OS/distribution inference.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

from .rules import (
    SECTION_ORDER,
    RuleMatch,
    Rulepack,
    SectionKind,
    evaluate_sections,
)
from .segmenter import PdfSections, segment


class VerdictKind(str, Enum):
    PRODUCER = "producer"
    AMBIGUOUS = "ambiguous"
    NO_RESULT = "no_result"


class Status(str, Enum):
    CORRECT = "correct"
    WRONG = "wrong"
    NO_RESULT = "no_result"


class Refinement(str, Enum):
    CONFUSED = "confused"  # two candidates, one of them the true producer
    ERROR = "error"  # two candidates, neither the true producer


@dataclass
class SectionVerdict:
    """The candidate producers one section's matches imply."""

    section: SectionKind
    candidates: frozenset[str]
    supporting_matches: list[RuleMatch] = field(default_factory=list)


@dataclass
class Verdict:
    """The vote-combined answer for one file."""

    kind: VerdictKind
    producer: str | None
    candidates: frozenset[str]
    votes: dict[str, int]
    section_verdicts: dict[SectionKind, SectionVerdict]
    os_candidates: tuple[tuple[str, str | None], ...] = ()
    evidence: dict[SectionKind, tuple[str, ...]] = field(default_factory=dict)


@dataclass
class SectionOutcome:
    status: Status
    refinement: Refinement | None = None


@dataclass
class OutcomeClass:
    """Classification of a verdict against a known ground truth."""

    file_status: Status
    sections: dict[SectionKind, SectionOutcome]


def section_verdict(matches: Iterable[RuleMatch], section: SectionKind) -> SectionVerdict:
    """Collapse one section's matches into a candidate set.

    Matches are de-duplicated by (rule, element); advisory matches are
    recorded nowhere here, so candidates always equal the producer set of
    the supporting matches.
    """
    supporting: list[RuleMatch] = []
    seen: set[tuple[str, str]] = set()
    for m in matches:
        if m.section != section or m.advisory:
            continue
        key = (m.rule_id, m.element_ref)
        if key in seen:
            continue
        seen.add(key)
        supporting.append(m)
    return SectionVerdict(section, frozenset(m.producer for m in supporting), supporting)


def majority_vote(section_verdicts: Mapping[SectionKind, SectionVerdict]) -> Verdict:
    """Combine the four per-section candidate sets by majority vote."""
    votes: dict[str, int] = {}
    for kind in SECTION_ORDER:
        sv = section_verdicts.get(kind)
        if sv is None:
            continue
        for producer in sv.candidates:
            votes[producer] = votes.get(producer, 0) + 1
    evidence = {
        kind: tuple(sorted({m.rule_id for m in sv.supporting_matches}))
        for kind, sv in section_verdicts.items()
    }
    ordered_votes = dict(sorted(votes.items()))
    if not votes:
        return Verdict(VerdictKind.NO_RESULT, None, frozenset(), ordered_votes,
                       dict(section_verdicts), evidence=evidence)
    top = max(votes.values())
    leaders = frozenset(p for p, v in votes.items() if v == top)
    if len(leaders) == 1:
        # A lone leader with a single vote can still win, but only because
        # nobody else received any vote at all: a 1-1 split is ambiguous.
        return Verdict(VerdictKind.PRODUCER, next(iter(leaders)), leaders,
                       ordered_votes, dict(section_verdicts), evidence=evidence)
    return Verdict(VerdictKind.AMBIGUOUS, None, leaders, ordered_votes,
                   dict(section_verdicts), evidence=evidence)


def detect_os(
    verdict: Verdict, matches: Mapping[SectionKind, list[RuleMatch]]
) -> tuple[tuple[str, str | None], ...]:
    """Infer OS (and distribution) by intersecting tags of the winner's matches.

    Tags are rare and an over-claim is worse than silence, so this
    intersects rather than votes: any contradiction, or the absence of
    OS-tagged matches, yields no claim.  Advisory matches participate;
    they exist chiefly to carry distribution evidence.
    """
    if verdict.kind is not VerdictKind.PRODUCER:
        return ()
    os_sets: list[frozenset[str]] = []
    distro_sets: list[frozenset[str]] = []
    for section_matches in matches.values():
        for m in section_matches:
            if m.producer != verdict.producer:
                continue
            if m.os_tags:
                os_sets.append(m.os_tags)
            if m.distro_tags:
                distro_sets.append(m.distro_tags)
    if not os_sets:
        return ()
    os_common = frozenset.intersection(*os_sets)
    if not os_common:
        return ()
    distro_common: frozenset[str] = (
        frozenset.intersection(*distro_sets) if distro_sets else frozenset()
    )
    distros: tuple[str | None, ...] = tuple(sorted(distro_common)) or (None,)
    return tuple((o, d) for o in sorted(os_common) for d in distros)


def detect(pack: Rulepack, data: bytes, sections: PdfSections | None = None,
           only: Iterable[SectionKind] | None = None) -> Verdict:
    """Full pipeline: segment, match, vote, infer OS."""
    if sections is None:
        sections = segment(data)
    matches = evaluate_sections(pack, sections)
    wanted = set(only) if only is not None else set(SECTION_ORDER)
    verdicts = {
        kind: section_verdict(matches[kind] if kind in wanted else [], kind)
        for kind in SECTION_ORDER
    }
    verdict = majority_vote(verdicts)
    filtered = {k: (v if k in wanted else []) for k, v in matches.items()}
    verdict.os_candidates = detect_os(verdict, filtered)
    # Evidence lists every matched rule, advisory ones included.
    verdict.evidence = {
        kind: tuple(sorted({m.rule_id for m in filtered[kind]})) for kind in SECTION_ORDER
    }
    return verdict


def classify(verdict: Verdict, ground_truth: str) -> OutcomeClass:
    """Grade a verdict, per section and at file level, against the truth."""
    sections: dict[SectionKind, SectionOutcome] = {}
    for kind, sv in verdict.section_verdicts.items():
        if not sv.candidates:
            sections[kind] = SectionOutcome(Status.NO_RESULT)
            continue
        status = Status.CORRECT if sv.candidates == {ground_truth} else Status.WRONG
        refinement = None
        if len(sv.candidates) == 2:
            refinement = (
                Refinement.CONFUSED if ground_truth in sv.candidates else Refinement.ERROR
            )
        sections[kind] = SectionOutcome(status, refinement)
    if verdict.kind is VerdictKind.NO_RESULT:
        file_status = Status.NO_RESULT
    elif verdict.kind is VerdictKind.PRODUCER and verdict.producer == ground_truth:
        file_status = Status.CORRECT
    else:
        file_status = Status.WRONG
    return OutcomeClass(file_status, sections)
