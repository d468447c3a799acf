"""Command-line frontend: scan, batch, audit, mine, fixtures.

Exit codes for ``scan`` are a stable pipeline contract: 0 when a single
producer was named, 2 for an ambiguous verdict, 3 when no section
matched anything, 1 for errors (with a machine-readable error object on
stdout).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .builtin_pack import builtin
from .detector import detect
from .errors import EmptyGroup, PdfProvError
from .fixtures import emit_corpus
from .metadata import (
    consistency_status,
    extract_declared,
    normalize_producer_string,
)
from .miner import LabeledCorpus, emit_rulepack, mine, mine_all, uniform_group_labels
from .report import (
    CSV_COLUMNS,
    SCHEMA_VERSION,
    BatchStats,
    ScanReport,
    build_scan_report,
    csv_row,
)
from .rules import Rulepack, SectionKind, load_rulepack
from .segmenter import segment

EXIT_PRODUCER = 0
EXIT_ERROR = 1
EXIT_AMBIGUOUS = 2
EXIT_NO_RESULT = 3

_VERDICT_EXIT = {"producer": EXIT_PRODUCER, "ambiguous": EXIT_AMBIGUOUS,
                 "no_result": EXIT_NO_RESULT}


def _load_pack(path: str | None) -> Rulepack:
    if not path:
        return builtin()
    text = Path(path).read_text(encoding="utf-8")
    return load_rulepack(text, name=Path(path).name)


def _parse_sections(value: str | None) -> list[SectionKind] | None:
    if not value:
        return None
    kinds = []
    for item in value.split(","):
        item = item.strip()
        if item:
            kinds.append(SectionKind(item))
    return kinds or None


def _error_object(path: str, exc: Exception) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "file": path,
        "error": {"type": type(exc).__name__, "message": str(exc)},
    }


def scan_bytes(label: str, data: bytes, pack: Rulepack,
               only: list[SectionKind] | None = None) -> ScanReport:
    """Run the full per-file pipeline and assemble a report."""
    sections = segment(data)
    verdict = detect(pack, data, sections=sections, only=only)
    declared = extract_declared(data, sections=sections)
    status, _ = consistency_status(declared, verdict)
    return build_scan_report(label, verdict, declared, status, sections.diagnostics)


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


# -- scan ----------------------------------------------------------------------


def cmd_scan(args: argparse.Namespace) -> int:
    try:
        data = _read_input(args.path)
        pack = _load_pack(args.pack)
        report = scan_bytes(args.path, data, pack, _parse_sections(args.sections))
    except (PdfProvError, OSError) as exc:
        print(json.dumps(_error_object(args.path, exc), indent=2))
        return EXIT_ERROR
    if args.format == "table":
        print(_scan_table(report))
    else:
        print(report.to_json())
    return _VERDICT_EXIT[report.verdict_kind]


def _scan_table(report: ScanReport) -> str:
    lines = [f"file:        {report.file}"]
    if report.verdict_kind == "producer":
        lines.append(f"producer:    {report.producer}")
    elif report.verdict_kind == "ambiguous":
        lines.append(f"ambiguous:   {', '.join(report.candidates)}")
    else:
        lines.append("producer:    (no result)")
    lines.append("votes:       " + (", ".join(f"{k}={v}" for k, v in report.votes.items()) or "-"))
    for section in report.sections:
        cands = ", ".join(section.candidates) or "-"
        lines.append(f"  {section.kind:<8} {cands}")
    if report.os:
        lines.append("os:          " + ", ".join(
            o["os"] + (f" ({o['distro']})" if o.get("distro") else "") for o in report.os
        ))
    lines.append(f"declared:    {report.declared_producer or '-'}")
    lines.append(f"consistency: {report.consistency}")
    if report.diagnostics:
        lines.append("diagnostics: " + "; ".join(report.diagnostics))
    return "\n".join(lines)


# -- batch ---------------------------------------------------------------------


def _batch_inputs(source: str) -> list[tuple[str, Path, str | None]]:
    """(label, path, manifest-truth) triples, sorted by label."""
    src = Path(source)
    entries: list[tuple[str, Path, str | None]] = []
    if src.is_dir():
        for path in sorted(src.rglob("*.pdf")):
            entries.append((str(path.relative_to(src)), path, None))
    else:
        base = src.parent
        for lineno, line in enumerate(src.read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t")
            if not cols[0]:
                raise ValueError(f"{src}:{lineno}: empty path")
            truth = cols[1] if len(cols) > 1 and cols[1] else None
            entries.append((cols[0], base / cols[0], truth))
    entries.sort(key=lambda e: e[0])
    return entries


def cmd_batch(args: argparse.Namespace) -> int:
    try:
        pack = _load_pack(args.pack)
        entries = _batch_inputs(args.source)
    except (PdfProvError, OSError, ValueError) as exc:
        print(json.dumps(_error_object(args.source, exc), indent=2))
        return EXIT_ERROR
    only = _parse_sections(args.sections)
    jobs = args.jobs or os.cpu_count() or 1

    def work(entry: tuple[str, Path, str | None]):
        label, path, manifest_truth = entry
        try:
            report = scan_bytes(label, path.read_bytes(), pack, only)
        except (PdfProvError, OSError) as exc:
            return label, None, manifest_truth, f"{type(exc).__name__}: {exc}"
        return label, report, manifest_truth, None

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, entries))
    else:
        results = [work(entry) for entry in entries]
    results.sort(key=lambda r: r[0])

    stats = BatchStats()
    rows: list[list[str]] = []
    file_dicts: list[dict] = []
    for label, report, manifest_truth, error in results:
        if report is None:
            stats.errors.append((label, error or "error"))
            stats.total += 1
            rows.append([label, "error"] + [""] * (len(CSV_COLUMNS) - 3) + [error or ""])
            continue
        if args.truth == "metadata":
            truth = normalize_producer_string(report.declared_producer)
        else:
            truth = manifest_truth
        outcome = None
        file_class = ""
        if truth:
            # Classification needs only the candidate sets, which the
            # report already carries; no second scan.
            outcome, file_class = _classify_report(report, truth)
        stats.add(truth, report.verdict_kind, report.producer, outcome, bool(report.os))
        rows.append(csv_row(report, truth or "", file_class))
        payload = report.to_dict()
        payload["truth"] = truth
        payload["file_class"] = file_class
        file_dicts.append(payload)

    csv_text = _render_csv(rows)
    if args.csv:
        Path(args.csv).write_text(csv_text, encoding="utf-8")
    if args.format == "csv":
        sys.stdout.write(csv_text)
    elif args.format == "json":
        print(json.dumps({"schema": SCHEMA_VERSION, "stats": stats.to_dict(),
                          "files": file_dicts}, indent=2))
    else:
        sys.stdout.write(stats.render_tables())
    return EXIT_PRODUCER


def _classify_report(report: ScanReport, truth: str):
    from .detector import (  # local import keeps module load light
        OutcomeClass,
        Refinement,
        SectionOutcome,
        Status,
    )

    sections = {}
    for s in report.sections:
        kind = SectionKind(s.kind)
        candidates = set(s.candidates)
        if not candidates:
            sections[kind] = SectionOutcome(Status.NO_RESULT)
            continue
        status = Status.CORRECT if candidates == {truth} else Status.WRONG
        refinement = None
        if len(candidates) == 2:
            refinement = Refinement.CONFUSED if truth in candidates else Refinement.ERROR
        sections[kind] = SectionOutcome(status, refinement)
    if report.verdict_kind == "no_result":
        file_status = Status.NO_RESULT
    elif report.verdict_kind == "producer" and report.producer == truth:
        file_status = Status.CORRECT
    else:
        file_status = Status.WRONG
    return OutcomeClass(file_status, sections), file_status.value


def _render_csv(rows: list[list[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    writer.writerows(rows)
    return buffer.getvalue()


# -- audit ---------------------------------------------------------------------


def cmd_audit(args: argparse.Namespace) -> int:
    try:
        pack = _load_pack(args.pack)
    except (PdfProvError, OSError) as exc:
        print(json.dumps(_error_object(args.pack or "", exc), indent=2))
        return EXIT_ERROR
    src = Path(args.path)
    paths = sorted(src.rglob("*.pdf")) if src.is_dir() else [src]
    reports: list[dict] = []
    counts = {"consistent": 0, "inconsistent": 0, "unverifiable": 0, "error": 0}
    for path in paths:
        label = str(path.relative_to(src)) if src.is_dir() else str(path)
        try:
            report = scan_bytes(label, path.read_bytes(), pack)
        except (PdfProvError, OSError) as exc:
            counts["error"] += 1
            reports.append(_error_object(label, exc))
            continue
        counts[report.consistency] += 1
        reports.append({
            "file": label,
            "declared_producer": report.declared_producer,
            "normalized": normalize_producer_string(report.declared_producer),
            "detected": report.producer,
            "status": report.consistency,
        })
    if args.format == "table":
        for r in reports:
            if "error" in r:
                print(f"{r['file']}: error ({r['error']['message']})")
            else:
                print(f"{r['file']}: {r['status']} (declared={r['declared_producer'] or '-'}, "
                      f"detected={r['detected'] or '-'})")
        print("summary: " + ", ".join(f"{k}={v}" for k, v in counts.items()))
    else:
        print(json.dumps({"schema": SCHEMA_VERSION, "files": reports,
                          "summary": counts}, indent=2))
    return EXIT_PRODUCER if counts["error"] == 0 else EXIT_ERROR


# -- mine ----------------------------------------------------------------------


def cmd_mine(args: argparse.Namespace) -> int:
    try:
        corpus = LabeledCorpus.from_manifest(args.manifest)
        if not corpus.files:
            raise EmptyGroup("manifest lists no files")
        if args.section == "all":
            candidates = mine_all(corpus, args.min_len, args.max_discriminacy)
        else:
            candidates = mine(corpus, SectionKind(args.section), args.min_len,
                              args.max_discriminacy)
        text = emit_rulepack(candidates, args.name, uniform_group_labels(corpus))
        load_rulepack(text)  # emitted packs must always re-load
    except (PdfProvError, OSError, ValueError) as exc:
        print(json.dumps(_error_object(args.manifest, exc), indent=2))
        return EXIT_ERROR
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_PRODUCER


# -- fixtures --------------------------------------------------------------


def cmd_fixtures(args: argparse.Namespace) -> int:
    seeds = range(args.seed_start, args.seed_start + args.seeds)
    manifest = emit_corpus(args.dir, seeds=seeds)
    print(str(manifest))
    return EXIT_PRODUCER


# -- entry point -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pdfprov",
        description="Identify which software produced a PDF from its coding style.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("scan", help="scan one PDF file (or - for stdin)")
    scan.add_argument("path")
    scan.add_argument("--pack", help="rule file (default: builtin pack)")
    scan.add_argument("--sections", help="comma list: header,body,xref,trailer")
    scan.add_argument("--format", choices=["json", "table"], default="json")
    scan.set_defaults(func=cmd_scan)

    batch = sub.add_parser("batch", help="scan a manifest or directory of PDFs")
    batch.add_argument("source", help="manifest.tsv or a directory")
    batch.add_argument("--pack")
    batch.add_argument("--sections")
    batch.add_argument("--truth", choices=["manifest", "metadata"], default="manifest")
    batch.add_argument("--format", choices=["table", "json", "csv"], default="table")
    batch.add_argument("--csv", help="also write the per-file CSV here")
    batch.add_argument("--jobs", type=int, default=0,
                       help="worker count (default: logical CPUs)")
    batch.set_defaults(func=cmd_batch)

    audit = sub.add_parser("audit", help="compare declared metadata with detection")
    audit.add_argument("path", help="PDF file or directory")
    audit.add_argument("--pack")
    audit.add_argument("--format", choices=["json", "table"], default="json")
    audit.set_defaults(func=cmd_audit)

    minep = sub.add_parser("mine", help="derive a rulepack from a labeled corpus")
    minep.add_argument("manifest")
    minep.add_argument("--section", default="all",
                       choices=["all", "header", "body", "xref", "trailer"])
    minep.add_argument("--min-len", type=int, default=8)
    minep.add_argument("--max-discriminacy", type=float, default=0.0)
    minep.add_argument("--name", default="mined")
    minep.add_argument("-o", "--out")
    minep.set_defaults(func=cmd_mine)

    fixtures = sub.add_parser("fixtures", help="write the synthetic fixture corpus")
    fixtures.add_argument("--dir", required=True)
    fixtures.add_argument("--seeds", type=int, default=10)
    fixtures.add_argument("--seed-start", type=int, default=1)
    fixtures.set_defaults(func=cmd_fixtures)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
