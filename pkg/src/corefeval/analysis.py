"""Corpus statistics, UPOS-factorized filters, error decomposition and
leaderboard aggregation."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

from .align import Alignment, MatchStrategy, ZeroMatching, align_mentions, align_zeros
from .metrics import ScoreReport, check_comparable
from .model import (
    Corpus,
    Document,
    Entity,
    Mention,
    drop_singletons,
    mention_shape,
)

#: Default UPOS columns of the factorized tables.
DEFAULT_UPOS_TAGS = ("NOUN", "PRON", "PROPN", "DET", "ADJ", "VERB", "ADV",
                     "NUM")


@dataclass(frozen=True)
class GroupStats:
    total: int
    per_1k_words: float
    max_len: int
    avg_len: float


@dataclass(frozen=True)
class DatasetStats:
    """Corpus-level counts in the style of the data-overview tables."""

    docs: int
    sentences: int
    words: int
    empty_nodes: int
    entities: GroupStats
    mentions: GroupStats
    entity_size_hist: Mapping[int, int]
    mention_len_hist: Mapping[int, int]
    with_empty_pct: float
    with_gap_pct: float
    non_treelet_pct: float
    head_upos: Mapping[str, float]


def _group_stats(total: int, words: int, lengths: Sequence[int]) -> GroupStats:
    return GroupStats(
        total=total,
        per_1k_words=1000.0 * total / words if words else 0.0,
        max_len=max(lengths) if lengths else 0,
        avg_len=sum(lengths) / len(lengths) if lengths else 0.0,
    )


def dataset_stats(corpus: Corpus, include_singletons: bool = False
                  ) -> DatasetStats:
    """Counts of documents, nodes, entities and mentions plus mention-shape
    and head-UPOS distributions.  Mention lengths count surface words only
    (zeros have length 0)."""
    docs = len(corpus.documents)
    sentences = sum(len(d.sentences) for d in corpus.documents)
    words = sum(len(s.surface_nodes) for d in corpus.documents
                for s in d.sentences)
    empty_nodes = sum(len(s.empty_nodes) for d in corpus.documents
                      for s in d.sentences)

    entity_sizes: list[int] = []
    mention_lengths: list[int] = []
    shape_counts = Counter()
    upos_counts: Counter = Counter()
    n_mentions = 0
    for document in corpus.documents:
        entities = document.entities if include_singletons \
            else drop_singletons(document.entities)
        for entity in entities:
            entity_sizes.append(len(entity.mentions))
            for mention in entity.mentions:
                n_mentions += 1
                shape = mention_shape(mention, document)
                mention_lengths.append(shape.length_words)
                shape_counts["with_empty"] += shape.with_empty
                shape_counts["with_gap"] += shape.with_gap
                shape_counts["non_treelet"] += shape.non_treelet
                upos_counts[document.node(mention.head).upos] += 1

    def pct(kind: str) -> float:
        return 100.0 * shape_counts[kind] / n_mentions if n_mentions else 0.0

    return DatasetStats(
        docs=docs,
        sentences=sentences,
        words=words,
        empty_nodes=empty_nodes,
        entities=_group_stats(len(entity_sizes), words, entity_sizes),
        mentions=_group_stats(n_mentions, words, mention_lengths),
        entity_size_hist=dict(sorted(Counter(entity_sizes).items())),
        mention_len_hist=dict(sorted(Counter(mention_lengths).items())),
        with_empty_pct=pct("with_empty"),
        with_gap_pct=pct("with_gap"),
        non_treelet_pct=pct("non_treelet"),
        head_upos={upos: count / n_mentions
                   for upos, count in sorted(upos_counts.items())}
        if n_mentions else {},
    )


def _effective_head_upos(mention: Mention, document: Document) -> set[str]:
    """UPOS of the head plus UPOS of its deprel=flat children."""
    head_node = document.node(mention.head)
    tags = {head_node.upos}
    if not head_node.is_empty:
        sentence = document.sentences[mention.head.sent]
        for node in sentence.surface_nodes:
            if node.head == head_node.id.major and (
                    node.deprel == "flat" or node.deprel.startswith("flat:")):
                tags.add(node.upos)
    return tags


def filter_entities_by_upos(corpus: Corpus, upos: str) -> Corpus:
    """Keep only entities with at least one mention whose effective head
    UPOS set contains the tag."""
    documents = []
    for document in corpus.documents:
        kept = tuple(
            entity for entity in document.entities
            if any(upos in _effective_head_upos(m, document)
                   for m in entity.mentions))
        documents.append(Document(document.doc_id, document.sentences, kept))
    return Corpus(tuple(documents), corpus.violations)


def filter_mentions_by_upos(corpus: Corpus, upos: str) -> Corpus:
    """Delete mentions whose effective head UPOS set lacks the tag;
    entities left empty disappear (entities reduced to singletons are
    later removed by the singleton filter during scoring)."""
    documents = []
    for document in corpus.documents:
        entities = []
        for entity in document.entities:
            mentions = tuple(
                m for m in entity.mentions
                if upos in _effective_head_upos(m, document))
            if mentions:
                entities.append(Entity(entity.eid, mentions))
        documents.append(Document(document.doc_id, document.sentences,
                                  tuple(entities)))
    return Corpus(tuple(documents), corpus.violations)


# ---------------------------------------------------------------------------
# Error-type decomposition


@dataclass(frozen=True)
class ErrorProfile:
    """Counts of the fixes needed to turn a prediction into the gold data."""

    span_errors: int = 0
    extra_entity: int = 0
    extra_mention: int = 0
    conflated_entities: int = 0
    missing_entity: int = 0
    missing_mention: int = 0
    divided_entity: int = 0

    def total(self) -> int:
        return (self.span_errors + self.extra_entity + self.extra_mention
                + self.conflated_entities + self.missing_entity
                + self.missing_mention + self.divided_entity)

    def as_dict(self) -> dict[str, int]:
        return {
            "span_errors": self.span_errors,
            "extra_entity": self.extra_entity,
            "extra_mention": self.extra_mention,
            "conflated_entities": self.conflated_entities,
            "missing_entity": self.missing_entity,
            "missing_mention": self.missing_mention,
            "divided_entity": self.divided_entity,
        }


def _decompose_document(gold_doc: Document, pred_doc: Document,
                        counts: Counter) -> list[list[Mention]]:
    """Count and apply the fix sequence for one document.

    Returns the repaired predicted clustering (lists of gold mention
    objects), which equals the gold clustering once all fixes are applied.
    """
    gold_mentions = [m for e in gold_doc.entities for m in e.mentions]
    pred_mentions = [m for e in pred_doc.entities for m in e.mentions]

    gold_zeros = [m for m in gold_mentions if m.is_zero]
    pred_zeros = [m for m in pred_mentions if m.is_zero]
    gold_others = [m for m in gold_mentions if not m.is_zero]
    pred_others = [m for m in pred_mentions if not m.is_zero]
    alignment = Alignment.merge([
        align_zeros(gold_zeros, pred_zeros, ZeroMatching.DEPENDENCY),
        align_mentions(gold_others, pred_others, MatchStrategy.HEAD),
    ])
    pred_to_gold = alignment.pred_to_gold

    gold_entity_of: dict[Mention, int] = {}
    for gi, entity in enumerate(gold_doc.entities):
        for mention in entity.mentions:
            gold_entity_of[mention] = gi

    # 1. span errors: aligned mentions whose spans differ get the gold span
    for gold_m, pred_m in alignment.pairs:
        if gold_m.node_set != pred_m.node_set or gold_m.parts != pred_m.parts:
            counts["span_errors"] += 1

    clusters: list[list[Mention]] = []
    for entity in pred_doc.entities:
        aligned = [pred_to_gold[m] for m in entity.mentions
                   if m in pred_to_gold]
        extra = [m for m in entity.mentions if m not in pred_to_gold]
        if aligned:
            # 2. extra mentions inside partially correct entities
            counts["extra_mention"] += len(extra)
            clusters.append(aligned)
        else:
            # 3. entirely spurious entities
            counts["extra_entity"] += 1

    # 4. conflated entities: split clusters covering several gold entities
    split_clusters: list[list[Mention]] = []
    for cluster in clusters:
        groups: dict[int, list[Mention]] = {}
        for mention in cluster:
            groups.setdefault(gold_entity_of[mention], []).append(mention)
        counts["conflated_entities"] += len(groups) - 1
        split_clusters.extend(groups.values())

    # 5. divided entities: merge clusters belonging to one gold entity
    merged: dict[int, list[Mention]] = {}
    for cluster in split_clusters:
        gi = gold_entity_of[cluster[0]]
        if gi in merged:
            counts["divided_entity"] += 1
            merged[gi].extend(cluster)
        else:
            merged[gi] = list(cluster)

    # 6./7. missing mentions and entities
    final: list[list[Mention]] = []
    for gi, entity in enumerate(gold_doc.entities):
        if gi in merged:
            covered = {id(m) for m in merged[gi]}
            missing = [m for m in entity.mentions if id(m) not in covered]
            counts["missing_mention"] += len(missing)
            final.append(merged[gi] + missing)
        else:
            counts["missing_entity"] += 1
            final.append(list(entity.mentions))
    return final


def error_decomposition(gold: Corpus, pred: Corpus) -> ErrorProfile:
    """Kummerfeld–Klein style error profile of a prediction."""
    profile, _ = decompose_and_replay(gold, pred)
    return profile


def decompose_and_replay(gold: Corpus, pred: Corpus
                         ) -> tuple[ErrorProfile, Corpus]:
    """Error profile plus the prediction with all counted fixes applied."""
    doc_pairs = check_comparable(gold, pred)
    counts: Counter = Counter()
    documents = []
    for gold_doc, pred_doc in doc_pairs:
        clusters = _decompose_document(gold_doc, pred_doc, counts)
        entities = tuple(
            Entity(f"e{i + 1}", tuple(sorted(cluster, key=Mention.sort_key)))
            for i, cluster in enumerate(clusters))
        documents.append(Document(gold_doc.doc_id, gold_doc.sentences,
                                  entities))
    profile = ErrorProfile(**{k: counts.get(k, 0) for k in (
        "span_errors", "extra_entity", "extra_mention", "conflated_entities",
        "missing_entity", "missing_mention", "divided_entity")})
    return profile, Corpus(tuple(documents))


# ---------------------------------------------------------------------------
# Leaderboard


@dataclass(frozen=True)
class LeaderboardRow:
    system: str
    rank: int
    score: float
    per_dataset: Mapping[str, float | None]
    missing: tuple[str, ...] = ()


def macro_average(reports_by_system: Mapping[str, Sequence[ScoreReport]],
                  datasets: Sequence[str] | None = None
                  ) -> list[LeaderboardRow]:
    """Rank systems by the mean of their per-dataset primary scores.

    Every dataset weighs equally; a dataset missing for a system scores 0
    and is listed in the row's ``missing`` field.  Rows are sorted by
    score descending; systems with equal scores share a rank and keep
    their input order.
    """
    if datasets is None:
        seen: list[str] = []
        for reports in reports_by_system.values():
            for report in reports:
                if report.dataset_id not in seen:
                    seen.append(report.dataset_id)
        datasets = sorted(seen)

    rows = []
    for order, (system, reports) in enumerate(reports_by_system.items()):
        by_dataset = {r.dataset_id: r.conll_f1 for r in reports}
        missing = tuple(d for d in datasets if d not in by_dataset)
        values = [by_dataset.get(d, 0.0) for d in datasets]
        score = sum(values) / len(values) if values else 0.0
        rows.append((order, system, score,
                     {d: by_dataset.get(d) for d in datasets}, missing))

    rows.sort(key=lambda row: (-row[2], row[0]))
    out: list[LeaderboardRow] = []
    for position, (order, system, score, per_dataset, missing) in \
            enumerate(rows, 1):
        rank = position
        if out and out[-1].score == score:
            rank = out[-1].rank
        out.append(LeaderboardRow(system, rank, score, per_dataset, missing))
    return out
