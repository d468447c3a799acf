"""Report structures for the CLI: per-file scan reports and batch stats.

The JSON schema is versioned (``schema: 1``) and round-trips losslessly;
CSV rows mirror the flat fields so batch output can feed pipelines.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .detector import OutcomeClass, Refinement, Status, Verdict, VerdictKind
from .metadata import ConsistencyStatus, DeclaredMetadata
from .rules import SECTION_ORDER, SectionKind

SCHEMA_VERSION = 1

CSV_COLUMNS = [
    "file", "verdict", "producer", "candidates", "votes",
    "header_candidates", "header_rules",
    "body_candidates", "body_rules",
    "xref_candidates", "xref_rules",
    "trailer_candidates", "trailer_rules",
    "os", "declared_producer", "declared_creator", "declared_source",
    "consistency", "truth", "file_class", "diagnostics",
]


@dataclass
class SectionReport:
    kind: str
    candidates: list[str]
    rules: list[str]


@dataclass
class ScanReport:
    """Everything one file scan produced, in serializable form."""

    file: str
    verdict_kind: str
    producer: str | None
    candidates: list[str]
    votes: dict[str, int]
    sections: list[SectionReport]
    os: list[dict[str, str | None]]
    declared_producer: str | None
    declared_creator: str | None
    declared_source: str | None
    consistency: str
    diagnostics: list[str]
    schema: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        verdict: dict[str, object] = {"kind": self.verdict_kind}
        if self.verdict_kind == VerdictKind.PRODUCER.value:
            verdict["producer"] = self.producer
        elif self.verdict_kind == VerdictKind.AMBIGUOUS.value:
            verdict["candidates"] = list(self.candidates)
        return {
            "schema": self.schema,
            "file": self.file,
            "verdict": verdict,
            "votes": dict(self.votes),
            "sections": [
                {"kind": s.kind, "candidates": list(s.candidates), "rules": list(s.rules)}
                for s in self.sections
            ],
            "os": [dict(o) for o in self.os],
            "declared": {
                "producer": self.declared_producer,
                "creator": self.declared_creator,
                "source": self.declared_source,
            },
            "consistency": self.consistency,
            "diagnostics": list(self.diagnostics),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    @staticmethod
    def from_dict(payload: dict) -> "ScanReport":
        verdict = payload["verdict"]
        declared = payload.get("declared", {})
        return ScanReport(
            file=payload["file"],
            verdict_kind=verdict["kind"],
            producer=verdict.get("producer"),
            candidates=list(verdict.get("candidates", [])),
            votes={k: int(v) for k, v in payload.get("votes", {}).items()},
            sections=[
                SectionReport(s["kind"], list(s["candidates"]), list(s["rules"]))
                for s in payload.get("sections", [])
            ],
            os=[dict(o) for o in payload.get("os", [])],
            declared_producer=declared.get("producer"),
            declared_creator=declared.get("creator"),
            declared_source=declared.get("source"),
            consistency=payload.get("consistency", ConsistencyStatus.UNVERIFIABLE.value),
            diagnostics=list(payload.get("diagnostics", [])),
            schema=int(payload.get("schema", SCHEMA_VERSION)),
        )

    @staticmethod
    def from_json(text: str) -> "ScanReport":
        return ScanReport.from_dict(json.loads(text))


def build_scan_report(path: str, verdict: Verdict, declared: DeclaredMetadata,
                      consistency: ConsistencyStatus, diagnostics: list[str]) -> ScanReport:
    candidates = sorted(verdict.candidates) if verdict.kind is VerdictKind.AMBIGUOUS else []
    return ScanReport(
        file=path,
        verdict_kind=verdict.kind.value,
        producer=verdict.producer,
        candidates=candidates,
        votes=dict(sorted(verdict.votes.items())),
        sections=[
            SectionReport(
                kind.value,
                sorted(verdict.section_verdicts[kind].candidates),
                list(verdict.evidence.get(kind, ())),
            )
            for kind in SECTION_ORDER
        ],
        os=[{"os": o, "distro": d} for o, d in verdict.os_candidates],
        declared_producer=declared.producer,
        declared_creator=declared.creator,
        declared_source=declared.source.value if declared.source else None,
        consistency=consistency.value,
        diagnostics=list(diagnostics),
    )


def csv_row(report: ScanReport, truth: str = "", file_class: str = "") -> list[str]:
    by_kind = {s.kind: s for s in report.sections}

    def sect(kind: SectionKind) -> tuple[str, str]:
        s = by_kind.get(kind.value)
        if not s:
            return "", ""
        return ";".join(s.candidates), ";".join(s.rules)

    header_c, header_r = sect(SectionKind.HEADER)
    body_c, body_r = sect(SectionKind.BODY)
    xref_c, xref_r = sect(SectionKind.XREF)
    trailer_c, trailer_r = sect(SectionKind.TRAILER)
    return [
        report.file,
        report.verdict_kind,
        report.producer or "",
        ";".join(report.candidates),
        ";".join(f"{k}:{v}" for k, v in sorted(report.votes.items())),
        header_c, header_r, body_c, body_r, xref_c, xref_r, trailer_c, trailer_r,
        ";".join(
            o["os"] + (f"/{o['distro']}" if o.get("distro") else "") for o in report.os
        ),
        report.declared_producer or "",
        report.declared_creator or "",
        report.declared_source or "",
        report.consistency,
        truth,
        file_class,
        ";".join(report.diagnostics),
    ]


@dataclass
class SectionTally:
    correct: int = 0
    wrong: int = 0
    no_result: int = 0
    confused: int = 0
    error: int = 0


@dataclass
class BatchStats:
    """Aggregate counts over a labeled batch, in the standard table shapes."""

    total: int = 0
    labeled: int = 0
    file_correct: int = 0
    file_wrong: int = 0  # includes ambiguous verdicts
    file_no_result: int = 0
    file_ambiguous: int = 0
    per_section: dict[str, SectionTally] = field(default_factory=dict)
    per_producer: dict[str, dict[str, int]] = field(default_factory=dict)
    os_detected: int = 0
    os_detected_correct_files: int = 0
    errors: list[tuple[str, str]] = field(default_factory=list)

    def add(self, truth: str | None, verdict_kind: str, producer_detected: str | None,
            outcome: OutcomeClass | None, has_os: bool) -> None:
        self.total += 1
        if has_os:
            self.os_detected += 1
        if truth is None or outcome is None:
            return
        self.labeled += 1
        row = self.per_producer.setdefault(truth, {"files": 0, "detected": 0})
        row["files"] += 1
        if outcome.file_status is Status.CORRECT:
            self.file_correct += 1
            row["detected"] += 1
            if has_os:
                self.os_detected_correct_files += 1
        elif outcome.file_status is Status.NO_RESULT:
            self.file_no_result += 1
        else:
            self.file_wrong += 1
            if verdict_kind == VerdictKind.AMBIGUOUS.value:
                self.file_ambiguous += 1
        for kind, section_outcome in outcome.sections.items():
            tally = self.per_section.setdefault(kind.value, SectionTally())
            if section_outcome.status is Status.CORRECT:
                tally.correct += 1
            elif section_outcome.status is Status.NO_RESULT:
                tally.no_result += 1
            else:
                tally.wrong += 1
            if section_outcome.refinement is Refinement.CONFUSED:
                tally.confused += 1
            elif section_outcome.refinement is Refinement.ERROR:
                tally.error += 1

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "total": self.total,
            "labeled": self.labeled,
            "file_level": {
                "correct": self.file_correct,
                "wrong": self.file_wrong,
                "no_result": self.file_no_result,
                "ambiguous_within_wrong": self.file_ambiguous,
            },
            "sections": {
                kind: vars(tally) for kind, tally in sorted(self.per_section.items())
            },
            "producers": {
                producer: dict(row) for producer, row in sorted(self.per_producer.items())
            },
            "os_detection": {
                "detected": self.os_detected,
                "of_all_files": _ratio(self.os_detected, self.total),
                "of_correct_files": _ratio(self.os_detected_correct_files, self.file_correct),
            },
            "errors": [{"file": f, "error": e} for f, e in self.errors],
        }

    def render_tables(self) -> str:
        """Human-readable tables: per-section, two-candidate, per-producer."""
        out: list[str] = []
        n = self.labeled or 1
        out.append(f"Files: {self.total} total, {self.labeled} with ground truth")
        out.append("")
        out.append("Per-section detection")
        header = ["Detection"] + [k.value.capitalize() for k in SECTION_ORDER]
        rows = []
        for label, attr in (("Correct", "correct"), ("Wrong", "wrong"),
                            ("No result", "no_result")):
            row = [label]
            for kind in SECTION_ORDER:
                tally = self.per_section.get(kind.value, SectionTally())
                value = getattr(tally, attr)
                row.append(f"{value} ({100 * value // n}%)")
            rows.append(row)
        out.append(_format_table(header, rows))
        out.append("Two-candidate detections")
        rows = []
        for label, attr in (("Confused", "confused"), ("Error", "error")):
            row = [label]
            for kind in SECTION_ORDER:
                tally = self.per_section.get(kind.value, SectionTally())
                value = getattr(tally, attr)
                row.append(f"{value} ({100 * value // n}%)")
            rows.append(row)
        out.append(_format_table(header, rows))
        out.append("File-level (majority vote)")
        out.append(_format_table(
            ["Correct", "Wrong", "No result", "(ambiguous)"],
            [[
                f"{self.file_correct} ({100 * self.file_correct // n}%)",
                f"{self.file_wrong} ({100 * self.file_wrong // n}%)",
                f"{self.file_no_result} ({100 * self.file_no_result // n}%)",
                str(self.file_ambiguous),
            ]],
        ))
        out.append("Per-producer detection")
        rows = [
            [producer, str(row["files"]), str(row["detected"]),
             f"{100 * row['detected'] // (row['files'] or 1)}%"]
            for producer, row in sorted(self.per_producer.items())
        ]
        out.append(_format_table(["Producer", "Files", "Detected", "Rate"], rows))
        out.append(
            "OS detected for {} files ({:.0%} of all, {:.0%} of correctly detected)".format(
                self.os_detected,
                _ratio(self.os_detected, self.total),
                _ratio(self.os_detected_correct_files, self.file_correct),
            )
        )
        if self.errors:
            out.append("")
            out.append("Errors:")
            out.extend(f"  {f}: {e}" for f, e in self.errors)
        return "\n".join(out) + "\n"


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def _format_table(header: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header))]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    return "\n".join(lines) + "\n"
