"""Coreference evaluation metrics over an aligned mention universe.

All cluster metrics receive gold entities, predicted entities and a
one-to-one mention alignment.  Aligned predicted mentions are identified
with their gold counterparts; unaligned mentions exist only on their own
side (the standard treatment of imperfect mention detection).  The
cluster-level cores (``muc_clusters`` etc.) operate on plain collections
of hashable keys, so they can be checked against brute-force
implementations directly.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Iterable, Mapping, Sequence

from .align import (
    Alignment,
    MatchStrategy,
    ZeroMatching,
    _components,
    align_mentions,
    align_zeros,
    max_weight_assignment,
)
from .model import Corpus, Entity, Mention, NodeRef, ScoreTriple, drop_singletons

#: Cluster metrics contributing to the report, in display order.
CLUSTER_METRICS = ("muc", "b3", "ceafe", "blanc", "lea")


class DataMismatchError(Exception):
    """Gold and predicted corpora do not describe the same text."""


@dataclass(frozen=True)
class ScoreConfig:
    """Evaluation regime; the default is the primary one
    (head match, singletons excluded, dependency-based zero matching)."""

    strategy: MatchStrategy = MatchStrategy.HEAD
    keep_singletons: bool = False
    zero_matching: ZeroMatching = ZeroMatching.DEPENDENCY

    def to_dict(self) -> dict:
        return {
            "match": MatchStrategy(self.strategy).value,
            "keep_singletons": self.keep_singletons,
            "zero_match": ZeroMatching(self.zero_matching).value,
        }


PRIMARY_CONFIG = ScoreConfig()


@dataclass(frozen=True)
class ScoreReport:
    """All scores of one gold/predicted dataset pair."""

    dataset_id: str
    per_metric: Mapping[str, ScoreTriple]
    conll_f1: float
    mor: ScoreTriple
    zero_anaphora: ScoreTriple | None
    empty_nodes: ScoreTriple | None
    config: ScoreConfig
    diagnostics: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        def triple(t: ScoreTriple | None):
            if t is None:
                return None
            return {"recall": round(100 * t.recall, 2),
                    "precision": round(100 * t.precision, 2),
                    "f1": round(100 * t.f1, 2)}

        return {
            "dataset_id": self.dataset_id,
            "scores": {name: triple(t) for name, t in self.per_metric.items()},
            "conll_f1": round(100 * self.conll_f1, 2),
            "mor": triple(self.mor),
            "zero_anaphora": triple(self.zero_anaphora),
            "empty_nodes": triple(self.empty_nodes),
            "config": self.config.to_dict(),
            "diagnostics": list(self.diagnostics),
        }


# ---------------------------------------------------------------------------
# Cluster-level cores (keys are opaque hashables)


def _index_of(clusters: Sequence[Iterable[Hashable]]) -> dict[Hashable, int]:
    index: dict[Hashable, int] = {}
    for i, cluster in enumerate(clusters):
        for key in cluster:
            index[key] = i
    return index


def _vilain(a_clusters: Sequence[set], b_index: Mapping[Hashable, int]
            ) -> tuple[float, float]:
    num = den = 0
    for cluster in a_clusters:
        touched = {b_index[key] for key in cluster if key in b_index}
        missing = sum(1 for key in cluster if key not in b_index)
        num += len(cluster) - (len(touched) + missing)
        den += len(cluster) - 1
    return num, den


def muc_clusters(gold: Sequence[set], pred: Sequence[set]) -> ScoreTriple:
    r_num, r_den = _vilain(gold, _index_of(pred))
    p_num, p_den = _vilain(pred, _index_of(gold))
    return ScoreTriple.from_counts(r_num, r_den, p_num, p_den)


def _b3_one_side(a_clusters: Sequence[set], b_clusters: Sequence[set]
                 ) -> tuple[float, float]:
    b_index = _index_of(b_clusters)
    num = 0.0
    den = 0
    for cluster in a_clusters:
        den += len(cluster)
        counts = Counter(b_index[key] for key in cluster if key in b_index)
        num += sum(c * c for c in counts.values()) / len(cluster)
    return num, den


def b_cubed_clusters(gold: Sequence[set], pred: Sequence[set]) -> ScoreTriple:
    r_num, r_den = _b3_one_side(gold, pred)
    p_num, p_den = _b3_one_side(pred, gold)
    return ScoreTriple.from_counts(r_num, r_den, p_num, p_den)


def ceaf_e_clusters(gold: Sequence[set], pred: Sequence[set]) -> ScoreTriple:
    """Entity CEAF with the phi-4 similarity 2|K∩R| / (|K|+|R|)."""
    if not gold or not pred:
        return ScoreTriple.from_counts(0, len(gold), 0, len(pred))
    # only entity pairs sharing a mention can score; solve per component
    pred_index: dict[Hashable, list[int]] = {}
    for j, cluster in enumerate(pred):
        for key in cluster:
            pred_index.setdefault(key, []).append(j)
    edges: dict[tuple[int, int], float] = {}
    for i, cluster in enumerate(gold):
        overlap: Counter = Counter()
        for key in cluster:
            for j in pred_index.get(key, ()):
                overlap[j] += 1
        for j, inter in overlap.items():
            edges[(i, j)] = 2 * inter / (len(cluster) + len(pred[j]))
    total = 0.0
    for comp_gold, comp_pred in _components(edges, len(gold), len(pred)):
        weights = [[edges.get((i, j), 0.0) for j in comp_pred]
                   for i in comp_gold]
        assignment = max_weight_assignment(weights)
        total += sum(weights[a][b] for a, b in assignment)
    return ScoreTriple.from_counts(total, len(gold), total, len(pred))


def _coref_links(clusters: Sequence[set]) -> set[frozenset]:
    links = set()
    for cluster in clusters:
        for a, b in combinations(cluster, 2):
            links.add(frozenset((a, b)))
    return links


def blanc_clusters(gold: Sequence[set], pred: Sequence[set]) -> ScoreTriple:
    """BLANC extended to differing mention sets (Rand-style average of the
    coreference-link and non-coreference-link F-scores)."""
    gold_mentions = {key for cluster in gold for key in cluster}
    pred_mentions = {key for cluster in pred for key in cluster}
    c_gold = _coref_links(gold)
    c_pred = _coref_links(pred)

    def pair_count(n: int) -> int:
        return n * (n - 1) // 2

    n_gold = pair_count(len(gold_mentions))
    n_pred = pair_count(len(pred_mentions))
    nc_gold = n_gold - len(c_gold)
    nc_pred = n_pred - len(c_pred)

    common = gold_mentions & pred_mentions
    coref_agree = len(c_gold & c_pred)
    in_one = sum(1 for link in c_gold ^ c_pred if link <= common)
    nc_agree = pair_count(len(common)) - coref_agree - in_one

    coref = ScoreTriple.from_counts(coref_agree, len(c_gold),
                                    coref_agree, len(c_pred))
    noncoref = ScoreTriple.from_counts(nc_agree, nc_gold, nc_agree, nc_pred)
    if len(c_gold) + len(c_pred) == 0 and nc_gold + nc_pred == 0:
        return ScoreTriple(0.0, 0.0, 0.0)
    if len(c_gold) + len(c_pred) == 0:
        return noncoref
    if nc_gold + nc_pred == 0:
        return coref
    return ScoreTriple(
        recall=(coref.recall + noncoref.recall) / 2,
        precision=(coref.precision + noncoref.precision) / 2,
        f1=(coref.f1 + noncoref.f1) / 2,
    )


def _lea_one_side(a_clusters: Sequence[set], b_clusters: Sequence[set]
                  ) -> tuple[float, float]:
    b_index = _index_of(b_clusters)
    b_singletons = {next(iter(c)) for c in b_clusters if len(c) == 1}
    num = 0.0
    den = 0
    for cluster in a_clusters:
        size = len(cluster)
        den += size
        if size == 1:
            # self-link convention for singleton entities
            key = next(iter(cluster))
            num += size * (1.0 if key in b_singletons else 0.0)
            continue
        links = size * (size - 1) // 2
        resolved = sum(
            1 for a, b in combinations(cluster, 2)
            if a in b_index and b_index[a] == b_index.get(b))
        num += size * resolved / links
    return num, den


def lea_clusters(gold: Sequence[set], pred: Sequence[set]) -> ScoreTriple:
    r_num, r_den = _lea_one_side(gold, pred)
    p_num, p_den = _lea_one_side(pred, gold)
    return ScoreTriple.from_counts(r_num, r_den, p_num, p_den)


_CLUSTER_CORES = {
    "muc": muc_clusters,
    "b3": b_cubed_clusters,
    "ceafe": ceaf_e_clusters,
    "blanc": blanc_clusters,
    "lea": lea_clusters,
}


# ---------------------------------------------------------------------------
# Entity-level wrappers


def project_clusters(gold: Sequence[Entity], pred: Sequence[Entity],
                     alignment: Alignment) -> tuple[list[set], list[set]]:
    """Clusterings over a shared key space: aligned predicted mentions are
    replaced by their gold counterparts, everything else keys by itself."""
    pred_to_gold = alignment.pred_to_gold
    gold_clusters = [set(e.mentions) for e in gold]
    pred_clusters = [{pred_to_gold.get(m, m) for m in e.mentions}
                     for e in pred]
    return gold_clusters, pred_clusters


def muc(gold: Sequence[Entity], pred: Sequence[Entity],
        alignment: Alignment) -> ScoreTriple:
    return muc_clusters(*project_clusters(gold, pred, alignment))


def b_cubed(gold: Sequence[Entity], pred: Sequence[Entity],
            alignment: Alignment) -> ScoreTriple:
    return b_cubed_clusters(*project_clusters(gold, pred, alignment))


def ceaf_e(gold: Sequence[Entity], pred: Sequence[Entity],
           alignment: Alignment) -> ScoreTriple:
    return ceaf_e_clusters(*project_clusters(gold, pred, alignment))


def blanc(gold: Sequence[Entity], pred: Sequence[Entity],
          alignment: Alignment) -> ScoreTriple:
    return blanc_clusters(*project_clusters(gold, pred, alignment))


def lea(gold: Sequence[Entity], pred: Sequence[Entity],
        alignment: Alignment) -> ScoreTriple:
    return lea_clusters(*project_clusters(gold, pred, alignment))


def conll_f1(muc_score: ScoreTriple, b3_score: ScoreTriple,
             ceafe_score: ScoreTriple) -> float:
    """Unweighted mean of the MUC, B³ and CEAF-e F1 scores."""
    return (muc_score.f1 + b3_score.f1 + ceafe_score.f1) / 3


# ---------------------------------------------------------------------------
# Mention overlap ratio


def _mention_size(mention: Mention) -> int:
    return 1 if mention.is_zero else len(mention.nodes)


def mor_counts(gold_mentions: Sequence[Mention],
               pred_mentions: Sequence[Mention],
               zero_alignment: Alignment) -> tuple[float, int, int]:
    """(total overlap, gold size sum, pred size sum) for one document.

    Non-zero mentions are matched one-to-one maximizing total node
    overlap; zeros count as single units matched through the given zero
    alignment.
    """
    gold_sum = sum(_mention_size(m) for m in gold_mentions)
    pred_sum = sum(_mention_size(m) for m in pred_mentions)

    gold_ids = {id(m) for m in gold_mentions}
    pred_ids = {id(m) for m in pred_mentions}
    overlap = sum(1 for g, p in zero_alignment.pairs
                  if id(g) in gold_ids and id(p) in pred_ids)

    gold_nz = [m for m in gold_mentions if not m.is_zero]
    pred_nz = [m for m in pred_mentions if not m.is_zero]
    by_node: dict[NodeRef, list[int]] = {}
    for pj, mention in enumerate(pred_nz):
        for ref in mention.nodes:
            by_node.setdefault(ref, []).append(pj)
    edges: dict[tuple[int, int], float] = {}
    for gi, g in enumerate(gold_nz):
        seen: set[int] = set()
        for ref in g.nodes:
            for pj in by_node.get(ref, ()):
                if pj not in seen:
                    seen.add(pj)
                    edges[(gi, pj)] = float(
                        len(g.node_set & pred_nz[pj].node_set))
    for comp_gold, comp_pred in _components(edges, len(gold_nz),
                                            len(pred_nz)):
        weights = [[edges.get((gi, pj), 0.0) for pj in comp_pred]
                   for gi in comp_gold]
        assignment = max_weight_assignment(weights)
        overlap += sum(weights[a][b] for a, b in assignment)
    return overlap, gold_sum, pred_sum


def mor(gold_mentions: Sequence[Mention], pred_mentions: Sequence[Mention],
        zero_alignment: Alignment) -> ScoreTriple:
    """Mention overlap ratio of one document's mention sets."""
    num, gold_sum, pred_sum = mor_counts(gold_mentions, pred_mentions,
                                         zero_alignment)
    return ScoreTriple.from_counts(num, gold_sum, num, pred_sum)


# ---------------------------------------------------------------------------
# Zero anaphora (anaphor-decomposable score)


def _anaphoric_zeros(entities: Sequence[Entity]) -> list[tuple[Mention, Entity]]:
    out = []
    for entity in entities:
        for mention in entity.mentions:
            if not mention.is_zero:
                continue
            if any(other is not mention and other.start < mention.start
                   for other in entity.mentions):
                out.append((mention, entity))
    return out


def zero_anaphor_score(gold: Sequence[Entity], pred: Sequence[Entity],
                       zero_alignment: Alignment,
                       alignment: Alignment) -> ScoreTriple | None:
    """Per-anaphor correctness of antecedent linking for zeros.

    A gold anaphoric zero counts as resolved when its aligned predicted
    zero shares its predicted entity with an earlier predicted mention
    that aligns into the same gold entity.  Absent (None) when the gold
    side has no anaphoric zeros.
    """
    gold_anaphors = _anaphoric_zeros(gold)
    pred_anaphors = _anaphoric_zeros(pred)
    if not gold_anaphors:
        return None
    pred_entity_of: dict[Mention, Entity] = {}
    for entity in pred:
        for mention in entity.mentions:
            pred_entity_of[mention] = entity
    counterpart = dict(alignment.pred_to_gold)
    counterpart.update(zero_alignment.pred_to_gold)

    resolved = 0
    for zero, gold_entity in gold_anaphors:
        pred_zero = zero_alignment.gold_to_pred.get(zero)
        if pred_zero is None:
            continue
        pred_entity = pred_entity_of.get(pred_zero)
        if pred_entity is None:
            continue
        gold_members = set(gold_entity.mentions)
        for candidate in pred_entity.mentions:
            if candidate is pred_zero or not candidate.start < pred_zero.start:
                continue
            if counterpart.get(candidate) in gold_members:
                resolved += 1
                break
    return ScoreTriple.from_counts(resolved, len(gold_anaphors),
                                   resolved, len(pred_anaphors))


# ---------------------------------------------------------------------------
# Empty-node prediction quality


def _empty_node_signature(corpus: Corpus) -> Counter:
    signature: Counter = Counter()
    for di, document in enumerate(corpus.documents):
        for si, sentence in enumerate(document.sentences):
            for node in sentence.nodes:
                if not node.is_empty:
                    continue
                edge = node.deps[0] if node.deps else None
                signature[(di, si, node.id,
                           edge.head if edge else None,
                           edge.rel if edge else None)] += 1
    return signature


def empty_node_prf(gold: Corpus, pred: Corpus) -> ScoreTriple | None:
    """Empty-node prediction quality: a predicted empty node is correct
    when an unconsumed gold empty node in the same sentence has the
    identical enhanced head, relation and word-order position.  Absent
    when the gold corpus has no empty nodes."""
    gold_sig = _empty_node_signature(gold)
    pred_sig = _empty_node_signature(pred)
    gold_total = sum(gold_sig.values())
    pred_total = sum(pred_sig.values())
    if gold_total == 0:
        return None
    tp = sum((gold_sig & pred_sig).values())
    return ScoreTriple.from_counts(tp, gold_total, tp, pred_total)


# ---------------------------------------------------------------------------
# Dataset-level scoring


def check_comparable(gold: Corpus, pred: Corpus) -> list[tuple]:
    """Verify document ids and surface tokens match; return doc pairs."""
    pred_by_id = {}
    for document in pred.documents:
        if document.doc_id in pred_by_id:
            raise DataMismatchError(
                f"duplicate document id {document.doc_id!r} in prediction")
        pred_by_id[document.doc_id] = document
    gold_ids = [d.doc_id for d in gold.documents]
    if len(set(gold_ids)) != len(gold_ids):
        dup = next(i for i in gold_ids if gold_ids.count(i) > 1)
        raise DataMismatchError(f"duplicate document id {dup!r} in gold")
    if sorted(gold_ids) != sorted(pred_by_id):
        for document in gold.documents:
            if document.doc_id not in pred_by_id:
                raise DataMismatchError(
                    f"document {document.doc_id!r} missing from prediction")
        extra = sorted(set(pred_by_id) - set(gold_ids))
        raise DataMismatchError(
            f"document {extra[0]!r} not present in gold")
    pairs = []
    for gold_doc in gold.documents:
        pred_doc = pred_by_id[gold_doc.doc_id]
        if len(gold_doc.sentences) != len(pred_doc.sentences):
            raise DataMismatchError(
                f"document {gold_doc.doc_id!r}: sentence counts differ")
        for gs, ps in zip(gold_doc.sentences, pred_doc.sentences):
            gold_words = [n.form for n in gs.surface_nodes]
            pred_words = [n.form for n in ps.surface_nodes]
            if gold_words != pred_words:
                raise DataMismatchError(
                    f"document {gold_doc.doc_id!r}, sentence "
                    f"{gs.sent_id or '?'}: surface tokens differ")
        pairs.append((gold_doc, pred_doc))
    return pairs


def _split_zeros(mentions: Iterable[Mention]) -> tuple[list[Mention], list[Mention]]:
    zeros, others = [], []
    for mention in mentions:
        (zeros if mention.is_zero else others).append(mention)
    return zeros, others


def score_dataset(gold: Corpus, pred: Corpus,
                  config: ScoreConfig = PRIMARY_CONFIG,
                  dataset_id: str = "") -> ScoreReport:
    """Run the full metric battery on one gold/prediction pair."""
    doc_pairs = check_comparable(gold, pred)
    diagnostics: list[str] = []

    gold_entities: list[Entity] = []
    pred_entities: list[Entity] = []
    zero_alignments: list[Alignment] = []
    mention_alignments: list[Alignment] = []
    mor_num = 0.0
    mor_gold_den = 0
    mor_pred_den = 0

    for gold_doc, pred_doc in doc_pairs:
        gold_ents = list(gold_doc.entities)
        pred_ents = list(pred_doc.entities)
        if not config.keep_singletons:
            gold_ents = drop_singletons(gold_ents)
            pred_ents = drop_singletons(pred_ents)
        gold_entities.extend(gold_ents)
        pred_entities.extend(pred_ents)

        gold_mentions = [m for e in gold_ents for m in e.mentions]
        pred_mentions = [m for e in pred_ents for m in e.mentions]
        gold_zeros, gold_others = _split_zeros(gold_mentions)
        pred_zeros, pred_others = _split_zeros(pred_mentions)

        zero_alignment = align_zeros(gold_zeros, pred_zeros,
                                     config.zero_matching)
        mention_alignment = align_mentions(gold_others, pred_others,
                                           config.strategy)
        zero_alignments.append(zero_alignment)
        mention_alignments.append(mention_alignment)

        num, gden, pden = mor_counts(gold_mentions, pred_mentions,
                                     zero_alignment)
        mor_num += num
        mor_gold_den += gden
        mor_pred_den += pden

    zero_alignment = Alignment.merge(zero_alignments)
    mention_alignment = Alignment.merge(mention_alignments)
    full_alignment = Alignment.merge([zero_alignment, mention_alignment])

    if not gold_entities:
        diagnostics.append("gold: no entities after filtering")
    if not pred_entities:
        diagnostics.append("prediction: no entities after filtering")

    gold_clusters, pred_clusters = project_clusters(
        gold_entities, pred_entities, full_alignment)
    per_metric = {name: core(gold_clusters, pred_clusters)
                  for name, core in _CLUSTER_CORES.items()}
    if per_metric["muc"].recall == 0.0 and gold_entities and \
            all(len(e.mentions) < 2 for e in gold_entities):
        diagnostics.append("muc: gold has no coreference links")

    mor_score = ScoreTriple.from_counts(mor_num, mor_gold_den,
                                        mor_num, mor_pred_den)
    if mor_gold_den == 0:
        diagnostics.append("mor: no gold mentions")

    zero_score = zero_anaphor_score(gold_entities, pred_entities,
                                    zero_alignment, mention_alignment)
    empty_score = empty_node_prf(gold, pred)

    return ScoreReport(
        dataset_id=dataset_id,
        per_metric=per_metric,
        conll_f1=conll_f1(per_metric["muc"], per_metric["b3"],
                          per_metric["ceafe"]),
        mor=mor_score,
        zero_anaphora=zero_score,
        empty_nodes=empty_score,
        config=config,
        diagnostics=tuple(diagnostics),
    )
