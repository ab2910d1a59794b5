"""Deterministic corruption of gold corpora into synthetic predictions.

Used to generate regression fixtures with known error profiles: span
trimming, mention dropping, entity splitting and merging, and
displacement of empty nodes within their sentence.  Given the same seed
and rates the output is byte-identical, and it always validates clean.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .model import (
    Corpus,
    DepEdge,
    Document,
    Entity,
    Mention,
    Node,
    NodeId,
    NodeRef,
    Sentence,
    build_mention,
    derive_head,
    node_index,
)


@dataclass(frozen=True)
class PerturbRates:
    trim_span: float = 0.0
    drop_mention: float = 0.0
    split_entity: float = 0.0
    merge_entity: float = 0.0
    move_zero: float = 0.0

    def validate(self) -> None:
        for name, value in self.__dict__.items():
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"rate {name} must be in [0, 1], "
                                 f"got {value}")


def perturb_corpus(corpus: Corpus, rates: PerturbRates,
                   seed: int) -> Corpus:
    rates.validate()
    rng = random.Random(seed)
    documents = []
    for document in corpus.documents:
        document = _move_zeros(document, rates.move_zero, rng)
        document = _perturb_entities(document, rates, rng)
        documents.append(document)
    return Corpus(tuple(documents))


# ---------------------------------------------------------------------------
# Node-layer perturbation: displace empty nodes


def _move_zeros(document: Document, rate: float,
                rng: random.Random) -> Document:
    if rate <= 0.0:
        return document
    sentences = []
    ref_map: dict[NodeRef, NodeRef] = {}
    for si, sentence in enumerate(document.sentences):
        surface = sentence.surface_nodes
        n_words = len(surface)
        empties = sentence.empty_nodes
        if not empties or n_words < 2:
            sentences.append(sentence)
            continue
        # decide a new anchor word for every displaced empty node
        anchor: dict[NodeId, int] = {}
        moved_any = False
        for node in empties:
            major = node.id.major
            if rng.random() < rate:
                major = node.id.major + 1 if node.id.major < n_words \
                    else node.id.major - 1
                moved_any = True
            anchor[node.id] = major
        if not moved_any:
            sentences.append(sentence)
            continue
        # renumber all empty nodes per anchor word, in stable order
        order = sorted(empties, key=lambda n: (anchor[n.id], n.id))
        minor_counter: dict[int, int] = {}
        id_map: dict[NodeId, NodeId] = {}
        for node in order:
            major = anchor[node.id]
            minor_counter[major] = minor_counter.get(major, 0) + 1
            id_map[node.id] = NodeId(major, minor_counter[major])
        new_nodes = []
        for node in sentence.nodes:
            new_id = id_map.get(node.id, node.id)
            deps = tuple(
                DepEdge(id_map.get(edge.head, edge.head), edge.rel)
                for edge in node.deps)
            new_nodes.append(replace(node, id=new_id, deps=deps))
        new_nodes.sort(key=lambda n: n.id)
        for old, new in id_map.items():
            if old != new:
                ref_map[NodeRef(si, old)] = NodeRef(si, new)
        sentences.append(Sentence(sentence.sent_id, sentence.comments,
                                  tuple(new_nodes), sentence.mwts))
    if not ref_map:
        return document
    new_sentences = tuple(sentences)
    index = node_index(new_sentences)
    entities = []
    for entity in document.entities:
        mentions = tuple(
            build_mention(
                m.eid, [ref_map.get(ref, ref) for ref in m.nodes], index,
                etype=m.etype, declared_head=m.declared_head, other=m.other,
                parts=[[ref_map.get(r, r) for r in part]
                       for part in m.parts] if m.parts else None)
            for m in entity.mentions)
        entities.append(Entity(entity.eid, mentions))
    return Document(document.doc_id, new_sentences, tuple(entities))


# ---------------------------------------------------------------------------
# Mention- and entity-layer perturbation


def _trim_mention(mention: Mention, document: Document,
                  taken: set) -> Mention | None:
    """Drop one edge node of the span, keeping the derived head stable."""
    surface = [ref for ref in mention.nodes if not ref.id.is_empty]
    if mention.parts is not None or len(surface) < 2 or \
            len(mention.nodes) != len(surface):
        return None
    keep = list(mention.nodes)
    victim = keep[-1] if keep[-1] != mention.head else keep[0]
    keep.remove(victim)
    if derive_head(keep, document.node_index) != mention.head:
        return None
    if tuple(keep) in taken:
        return None
    declared = None
    if mention.declared_head is not None:
        declared = keep.index(mention.head) + 1
    return build_mention(mention.eid, keep, document.node_index,
                         etype=mention.etype, declared_head=declared,
                         other=mention.other)


def _perturb_entities(document: Document, rates: PerturbRates,
                      rng: random.Random) -> Document:
    clusters: list[list[Mention]] = []
    for entity in document.entities:
        mentions: list[Mention] = []
        spans_taken = {m.nodes for m in entity.mentions}
        for mention in entity.mentions:
            if rates.drop_mention > 0.0 and rng.random() < rates.drop_mention:
                continue
            if rates.trim_span > 0.0 and not mention.is_zero and \
                    rng.random() < rates.trim_span:
                trimmed = _trim_mention(mention, document, spans_taken)
                if trimmed is not None:
                    spans_taken.add(trimmed.nodes)
                    mentions.append(trimmed)
                    continue
            mentions.append(mention)
        if mentions:
            clusters.append(mentions)

    if rates.split_entity > 0.0:
        split: list[list[Mention]] = []
        for cluster in clusters:
            if len(cluster) >= 2 and rng.random() < rates.split_entity:
                cut = (len(cluster) + 1) // 2
                split.append(cluster[:cut])
                split.append(cluster[cut:])
            else:
                split.append(cluster)
        clusters = split

    if rates.merge_entity > 0.0:
        merged: list[list[Mention]] = []
        for cluster in clusters:
            if merged and rng.random() < rates.merge_entity:
                merged[-1].extend(cluster)
            else:
                merged.append(cluster)
        clusters = merged

    entities = []
    for i, cluster in enumerate(clusters, 1):
        eid = f"e{i}"
        mentions = tuple(
            replace(m, eid=eid) for m in
            sorted(cluster, key=Mention.sort_key))
        entities.append(Entity(eid, mentions))
    return Document(document.doc_id, document.sentences, tuple(entities))
