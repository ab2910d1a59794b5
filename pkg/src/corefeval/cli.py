"""Command-line interface.

Subcommands: validate, fix, score, stats, errors, upos, leaderboard,
perturb.  Exit codes: 0 success, 1 data or validation failure, 2 usage
or IO failure.  All inputs may be plain or gzipped CoNLL-U files.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from pathlib import Path

from . import __version__
from .align import MatchStrategy, ZeroMatching
from .analysis import (
    DEFAULT_UPOS_TAGS,
    dataset_stats,
    error_decomposition,
    filter_entities_by_upos,
    filter_mentions_by_upos,
    macro_average,
)
from .conllu import (
    ParseError,
    autofix,
    is_scoreable,
    parse_corpus,
    serialize_corpus,
    validate,
)
from .metrics import (
    DataMismatchError,
    PRIMARY_CONFIG,
    ScoreConfig,
    ScoreReport,
    ScoreTriple,
    score_dataset,
)
from .model import Corpus
from .perturb import PerturbRates, perturb_corpus

_METRIC_ROWS = ("muc", "b3", "ceafe", "blanc", "lea")
_EXTRA_ROWS = ("mor", "zero-anaphora", "empty-nodes", "conll-f1")


def _pct(value: float | None) -> str:
    return "-" if value is None else f"{100 * value:.2f}"


def _read_bytes(path: str) -> bytes:
    with open(path, "rb") as handle:
        return handle.read()


def _load(path: str) -> Corpus:
    return parse_corpus(_read_bytes(path))


def _manifest(command: str, inputs: list[str],
              config: dict | None = None) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "config": config or {},
        "version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc)
        .isoformat(timespec="seconds"),
    }


def _print_violations(violations) -> None:
    for violation in violations:
        print(str(violation), file=sys.stderr)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_validate(args: argparse.Namespace) -> int:
    status = 0
    for path in args.paths:
        violations = validate(_read_bytes(path))
        for violation in violations:
            print(f"{path}: {violation}", file=sys.stderr)
        if any(v.is_error for v in violations):
            status = 1
    return status


def cmd_fix(args: argparse.Namespace) -> int:
    fixed = autofix(_read_bytes(args.input))
    Path(args.output).write_bytes(fixed)
    remaining = [v for v in validate(fixed) if v.is_error]
    _print_violations(remaining)
    return 1 if remaining else 0


def _score_config(args: argparse.Namespace) -> ScoreConfig:
    return ScoreConfig(
        strategy=MatchStrategy(args.match),
        keep_singletons=args.keep_singletons,
        zero_matching=ZeroMatching(args.zero_match),
    )


def _score_rows(report: ScoreReport, metrics: set[str]) -> list[tuple]:
    rows = []
    for name in _METRIC_ROWS:
        if name in metrics:
            triple = report.per_metric[name]
            rows.append((name, triple.recall, triple.precision, triple.f1))
    named: dict[str, ScoreTriple | None] = {
        "mor": report.mor,
        "zero-anaphora": report.zero_anaphora,
        "empty-nodes": report.empty_nodes,
    }
    for name in ("mor", "zero-anaphora", "empty-nodes"):
        if name in metrics:
            triple = named[name]
            if triple is None:
                rows.append((name, None, None, None))
            else:
                rows.append((name, triple.recall, triple.precision,
                             triple.f1))
    if "conll-f1" in metrics:
        rows.append(("conll-f1", None, None, report.conll_f1))
    return rows


def _emit_score_report(report: ScoreReport, args,
                       manifest: dict) -> None:
    metrics = set(_METRIC_ROWS + _EXTRA_ROWS)
    if args.metrics != "all":
        metrics = set(args.metrics.split(","))
        unknown = metrics - set(_METRIC_ROWS + _EXTRA_ROWS)
        if unknown:
            raise SystemExit(2)
    payload = dict(manifest=manifest, **report.to_dict())
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print("metric\trecall\tprecision\tf1")
        for name, recall, precision, f1 in _score_rows(report, metrics):
            print(f"{name}\t{_pct(recall)}\t{_pct(precision)}\t{_pct(f1)}")
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n",
                                  encoding="utf-8")
    for note in report.diagnostics:
        print(f"note: {note}", file=sys.stderr)


def cmd_score(args: argparse.Namespace) -> int:
    pred_bytes = _read_bytes(args.pred)
    if args.autofix:
        pred_bytes = autofix(pred_bytes)
    pred_violations = [v for v in validate(pred_bytes) if v.is_error]
    if pred_violations:
        _print_violations(pred_violations)
        return 1
    gold = _load(args.gold)
    pred = parse_corpus(pred_bytes)
    config = _score_config(args)
    dataset_id = args.dataset or Path(args.gold).stem
    report = score_dataset(gold, pred, config, dataset_id=dataset_id)
    manifest = _manifest("score", [args.gold, args.pred], config.to_dict())
    manifest["system"] = args.system or Path(args.pred).stem
    _emit_score_report(report, args, manifest)
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    corpus = _load(args.input)
    stats = dataset_stats(corpus, include_singletons=args.include_singletons)
    rows = [
        ("docs", stats.docs),
        ("sentences", stats.sentences),
        ("words", stats.words),
        ("empty_nodes", stats.empty_nodes),
        ("entities", stats.entities.total),
        ("entities_per_1k", f"{stats.entities.per_1k_words:.1f}"),
        ("entity_max_len", stats.entities.max_len),
        ("entity_avg_len", f"{stats.entities.avg_len:.1f}"),
        ("mentions", stats.mentions.total),
        ("mentions_per_1k", f"{stats.mentions.per_1k_words:.1f}"),
        ("mention_max_len", stats.mentions.max_len),
        ("mention_avg_len", f"{stats.mentions.avg_len:.1f}"),
        ("with_empty_pct", f"{stats.with_empty_pct:.1f}"),
        ("with_gap_pct", f"{stats.with_gap_pct:.1f}"),
        ("non_treelet_pct", f"{stats.non_treelet_pct:.1f}"),
    ]
    for name, value in rows:
        print(f"{name}\t{value}")
    for upos, share in stats.head_upos.items():
        print(f"head_upos:{upos}\t{100 * share:.1f}")
    return 0


def cmd_errors(args: argparse.Namespace) -> int:
    gold = _load(args.gold)
    pred = _load(args.pred)
    profile = error_decomposition(gold, pred)
    maxima = {}
    if args.max_row:
        for line in Path(args.max_row).read_text(encoding="utf-8").splitlines():
            if line.strip():
                name, value = line.split("\t")
                maxima[name] = float(value)
    print("error_type\tcount" + ("\tshare" if maxima else ""))
    for name, count in profile.as_dict().items():
        row = f"{name}\t{count}"
        if maxima:
            cap = maxima.get(name, 0.0)
            share = count / cap if cap > 0 else 0.0
            row += f"\t{share:.2f}"
        print(row)
    return 0


def cmd_upos(args: argparse.Namespace) -> int:
    gold = _load(args.gold)
    pred = _load(args.pred)
    tags = [t for t in args.tags.split(",") if t]
    filter_fn = filter_entities_by_upos if args.level == "entity" \
        else filter_mentions_by_upos
    print("\t".join(["upos"] + tags))
    values = []
    for tag in tags:
        gold_f = filter_fn(gold, tag)
        pred_f = filter_fn(pred, tag)
        populated = any(len(e.mentions) >= 2 for d in gold_f.documents
                        for e in d.entities) or \
            any(len(e.mentions) >= 2 for d in pred_f.documents
                for e in d.entities)
        if not populated:
            values.append("-")
            continue
        report = score_dataset(gold_f, pred_f, PRIMARY_CONFIG,
                               dataset_id=tag)
        values.append(f"{100 * report.conll_f1:.2f}")
    print("\t".join(["conll-f1"] + values))
    return 0


def cmd_leaderboard(args: argparse.Namespace) -> int:
    reports_by_system: dict[str, list[ScoreReport]] = {}
    for path in args.reports:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        system = payload.get("manifest", {}).get("system") \
            or Path(path).stem
        report = _report_from_payload(payload)
        reports_by_system.setdefault(system, []).append(report)
    if not reports_by_system:
        print("no reports given", file=sys.stderr)
        return 1
    rows = macro_average(reports_by_system)
    datasets = sorted(rows[0].per_dataset) if rows else []
    header = ["rank", "system", "conll-f1"]
    if args.wide:
        header += datasets
    print("\t".join(header))
    for row in rows:
        cells = [str(row.rank), row.system, f"{100 * row.score:.2f}"]
        if args.wide:
            cells += [_pct(row.per_dataset[d]) for d in datasets]
        print("\t".join(cells))
        for name in row.missing:
            print(f"warning: {row.system} missing dataset {name}, "
                  "scored 0", file=sys.stderr)
    return 0


def _report_from_payload(payload: dict) -> ScoreReport:
    """Rebuild the score fields needed for ranking from a JSON report."""
    def triple(obj) -> ScoreTriple | None:
        if obj is None:
            return None
        return ScoreTriple(obj["recall"] / 100, obj["precision"] / 100,
                           obj["f1"] / 100)

    return ScoreReport(
        dataset_id=payload["dataset_id"],
        per_metric={name: triple(t) for name, t in payload["scores"].items()},
        conll_f1=payload["conll_f1"] / 100,
        mor=triple(payload.get("mor")),
        zero_anaphora=triple(payload.get("zero_anaphora")),
        empty_nodes=triple(payload.get("empty_nodes")),
        config=PRIMARY_CONFIG,
        diagnostics=tuple(payload.get("diagnostics", ())),
    )


def cmd_perturb(args: argparse.Namespace) -> int:
    rates = PerturbRates(
        trim_span=args.trim_span,
        drop_mention=args.drop_mention,
        split_entity=args.split_entity,
        merge_entity=args.merge_entity,
        move_zero=args.move_zero,
    )
    try:
        rates.validate()
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    corpus = _load(args.gold)
    perturbed = perturb_corpus(corpus, rates, args.seed)
    Path(args.output).write_bytes(serialize_corpus(perturbed))
    return 0


# ---------------------------------------------------------------------------
# Argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corefeval",
        description="Coreference evaluation toolkit for CoNLL-U corpora "
                    "with entity annotation and zero mentions.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check files for violations")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("fix", help="repair fixable violations")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_fix)

    p = sub.add_parser("score", help="score a prediction against gold")
    p.add_argument("gold")
    p.add_argument("pred")
    p.add_argument("--match", choices=[s.value for s in MatchStrategy],
                   default="head")
    p.add_argument("--keep-singletons", action="store_true")
    p.add_argument("--zero-match",
                   choices=[z.value for z in ZeroMatching],
                   default="dependency")
    p.add_argument("--metrics", default="all",
                   help="comma list of rows to print, or 'all'")
    p.add_argument("--format", choices=["tsv", "json"], default="tsv")
    p.add_argument("--out", help="also write the JSON report here")
    p.add_argument("--autofix", action="store_true",
                   help="apply automatic fixes to the prediction first")
    p.add_argument("--dataset", help="dataset id (default: gold file stem)")
    p.add_argument("--system", help="system name (default: pred file stem)")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("stats", help="corpus statistics")
    p.add_argument("input")
    p.add_argument("--include-singletons", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("errors", help="error-type decomposition")
    p.add_argument("gold")
    p.add_argument("pred")
    p.add_argument("--max-row",
                   help="TSV of per-type maxima for normalized shares")
    p.set_defaults(func=cmd_errors)

    p = sub.add_parser("upos", help="UPOS-factorized scoring")
    p.add_argument("gold")
    p.add_argument("pred")
    p.add_argument("--level", choices=["entity", "mention"],
                   default="entity")
    p.add_argument("--tags", default=",".join(DEFAULT_UPOS_TAGS))
    p.set_defaults(func=cmd_upos)

    p = sub.add_parser("leaderboard", help="rank systems by macro average")
    p.add_argument("reports", nargs="*", help="JSON reports from 'score'")
    p.add_argument("--wide", action="store_true",
                   help="per-dataset breakdown columns")
    p.set_defaults(func=cmd_leaderboard)

    p = sub.add_parser("perturb",
                       help="generate a synthetic prediction from gold")
    p.add_argument("gold")
    p.add_argument("output")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trim-span", type=float, default=0.0)
    p.add_argument("--drop-mention", type=float, default=0.0)
    p.add_argument("--split-entity", type=float, default=0.0)
    p.add_argument("--merge-entity", type=float, default=0.0)
    p.add_argument("--move-zero", type=float, default=0.0)
    p.set_defaults(func=cmd_perturb)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2
    except ParseError as exc:
        for violation in exc.violations:
            print(str(violation), file=sys.stderr)
        return 1
    except DataMismatchError as exc:
        print(f"data mismatch: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
