"""In-memory model of coreference-annotated Universal Dependencies corpora.

The model is value-oriented and immutable: parsing produces ``Corpus``,
``Document``, ``Sentence`` and ``Node`` objects that are never mutated in
place.  Operations that "modify" a corpus (stripping annotation, filtering,
perturbation) build new objects and share the rest, so anything here may be
used concurrently without locking.

Node positions come in two flavours: sentence-local ``NodeId`` (word index
plus a decimal suffix for empty nodes, e.g. ``4`` or ``4.1``) and
document-local ``NodeRef`` (sentence index plus ``NodeId``).  Mentions
reference nodes through ``NodeRef``s, which makes mentions of two parallel
corpora over the same surface text directly comparable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

_NODE_ID_RE = re.compile(r"^(\d+)(?:\.(\d+))?$")


@dataclass(frozen=True, order=True)
class NodeId:
    """Position of a node within its sentence.

    Surface words are plain indices ("4"); empty nodes carry a decimal
    suffix ("4.1") and sort after their anchor word and before the next
    surface word.
    """

    major: int
    minor: int = 0

    @property
    def is_empty(self) -> bool:
        return self.minor > 0

    @classmethod
    def parse(cls, text: str) -> "NodeId":
        m = _NODE_ID_RE.match(text)
        if m is None:
            raise ValueError(f"not a node id: {text!r}")
        return cls(int(m.group(1)), int(m.group(2) or 0))

    def __str__(self) -> str:
        if self.minor:
            return f"{self.major}.{self.minor}"
        return str(self.major)


#: Sentinel for the artificial root in HEAD/DEPS columns ("0").
ROOT = NodeId(0)


@dataclass(frozen=True, order=True)
class NodeRef:
    """Document-scoped node handle: sentence index plus node id."""

    sent: int
    id: NodeId

    def __str__(self) -> str:
        return f"{self.sent}:{self.id}"


@dataclass(frozen=True)
class DepEdge:
    """One enhanced-dependency edge (DEPS column entry)."""

    head: NodeId
    rel: str

    def __str__(self) -> str:
        return f"{self.head}:{self.rel}"


@dataclass(frozen=True)
class Node:
    """One CoNLL-U word or empty node.

    ``head`` is the basic-tree governor (surface word index, 0 for the
    root) and is ``None`` for empty nodes, whose syntax lives in ``deps``.
    ``misc`` holds the raw MISC items minus the Entity attribute, which is
    regenerated from the document's entities on serialization;
    ``entity_slot`` remembers where among the MISC items it sat.
    """

    id: NodeId
    form: str
    lemma: str = "_"
    upos: str = "_"
    xpos: str = "_"
    feats: str = "_"
    head: int | None = None
    deprel: str = "_"
    deps: tuple[DepEdge, ...] = ()
    misc: tuple[str, ...] = ()
    entity_slot: int = 0

    @property
    def is_empty(self) -> bool:
        return self.id.is_empty


@dataclass(frozen=True)
class MultiwordToken:
    """Multiword-token range row ("k-j")."""

    start: int
    end: int
    form: str
    misc: tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class Sentence:
    """One sentence: comments kept verbatim, nodes in NodeId order."""

    sent_id: str
    comments: tuple[str, ...]
    nodes: tuple[Node, ...]
    mwts: tuple[MultiwordToken, ...] = ()

    @cached_property
    def by_id(self) -> dict[NodeId, Node]:
        return {n.id: n for n in self.nodes}

    @property
    def surface_nodes(self) -> tuple[Node, ...]:
        return tuple(n for n in self.nodes if not n.is_empty)

    @property
    def empty_nodes(self) -> tuple[Node, ...]:
        return tuple(n for n in self.nodes if n.is_empty)


@dataclass(frozen=True, eq=False)
class Mention:
    """A span of nodes referring to a discourse entity.

    ``nodes`` is sorted and duplicate-free; ``head`` is derived from the
    dependency trees and always contained in ``nodes``.  ``parts`` is set
    only for discontinuous mentions and lists the bracketed sub-spans in
    order.  ``zero_edges`` caches the enhanced-dependency edges of zero
    mentions (used by the dependency-based zero matching).

    Mentions compare by identity: two mentions with equal spans in
    different entities are distinct objects.
    """

    eid: str
    nodes: tuple[NodeRef, ...]
    head: NodeRef
    etype: str | None = None
    declared_head: int | None = None
    other: str | None = None
    parts: tuple[tuple[NodeRef, ...], ...] | None = None
    zero_edges: frozenset[tuple[NodeId, str]] | None = None

    @cached_property
    def node_set(self) -> frozenset[NodeRef]:
        return frozenset(self.nodes)

    @property
    def is_zero(self) -> bool:
        return all(ref.id.is_empty for ref in self.nodes)

    @property
    def sentence(self) -> int:
        return self.nodes[0].sent

    @property
    def start(self) -> NodeRef:
        return self.nodes[0]

    @property
    def end(self) -> NodeRef:
        return self.nodes[-1]

    def sort_key(self) -> tuple:
        return (self.start, self.end, self.eid)


@dataclass(frozen=True, eq=False)
class Entity:
    """A coreference chain: all mentions of one referent."""

    eid: str
    mentions: tuple[Mention, ...]

    @property
    def is_singleton(self) -> bool:
        return len(self.mentions) == 1

    @property
    def etype(self) -> str | None:
        for m in self.mentions:
            if m.etype is not None:
                return m.etype
        return None


@dataclass(frozen=True, eq=False)
class Document:
    """One document: sentences plus the entities annotated on them."""

    doc_id: str
    sentences: tuple[Sentence, ...]
    entities: tuple[Entity, ...]

    @cached_property
    def node_index(self) -> dict[NodeRef, Node]:
        return node_index(self.sentences)

    def node(self, ref: NodeRef) -> Node:
        return self.node_index[ref]

    def mentions(self) -> Iterator[Mention]:
        for entity in self.entities:
            yield from entity.mentions


@dataclass(frozen=True, eq=False)
class Corpus:
    """A parsed file: documents in order, plus any violations found."""

    documents: tuple[Document, ...]
    violations: tuple = ()

    def document_ids(self) -> list[str]:
        return [d.doc_id for d in self.documents]


@dataclass(frozen=True)
class ScoreTriple:
    """Recall / precision / F1, all in [0, 1]."""

    recall: float
    precision: float
    f1: float

    @classmethod
    def from_rp(cls, recall: float, precision: float) -> "ScoreTriple":
        f1 = 0.0
        if recall + precision > 0:
            f1 = 2 * recall * precision / (recall + precision)
        return cls(recall, precision, f1)

    @classmethod
    def from_counts(cls, r_num: float, r_den: float,
                    p_num: float, p_den: float) -> "ScoreTriple":
        recall = r_num / r_den if r_den > 0 else 0.0
        precision = p_num / p_den if p_den > 0 else 0.0
        return cls.from_rp(recall, precision)


def node_index(sentences: Sequence[Sentence]) -> dict[NodeRef, Node]:
    """Map every NodeRef of the given sentences to its Node."""
    index: dict[NodeRef, Node] = {}
    for si, sentence in enumerate(sentences):
        for node in sentence.nodes:
            index[NodeRef(si, node.id)] = node
    return index


def _parent_of(ref: NodeRef, index: Mapping[NodeRef, Node]) -> NodeRef | None:
    """Governor of a node: basic-tree head for surface words, first
    enhanced parent for empty nodes, None for the root."""
    node = index.get(ref)
    if node is None:
        return None
    if node.is_empty:
        if not node.deps or node.deps[0].head == ROOT:
            return None
        return NodeRef(ref.sent, node.deps[0].head)
    if node.head is None or node.head == 0:
        return None
    return NodeRef(ref.sent, NodeId(node.head))


def derive_head(nodes: Sequence[NodeRef],
                index: Mapping[NodeRef, Node]) -> NodeRef:
    """Head of a span: the node whose governor lies outside the span.

    Among several such nodes the one governing the largest number of span
    nodes (transitively, within the span) wins; remaining ties go to the
    earliest position.  Spans whose internal edges form a cycle fall back
    to the first node.
    """
    if not nodes:
        raise ValueError("cannot derive the head of an empty mention")
    ordered = sorted(nodes)
    span = set(ordered)
    parent = {ref: _parent_of(ref, index) for ref in ordered}
    children: dict[NodeRef, list[NodeRef]] = {}
    candidates = []
    for ref in ordered:
        par = parent[ref]
        if par in span:
            children.setdefault(par, []).append(ref)
        else:
            candidates.append(ref)
    if not candidates:
        return ordered[0]

    def subtree_size(root: NodeRef) -> int:
        size = 0
        seen = {root}
        stack = [root]
        while stack:
            cur = stack.pop()
            size += 1
            for child in children.get(cur, ()):
                if child not in seen:
                    seen.add(child)
                    stack.append(child)
        return size

    return min(candidates, key=lambda ref: (-subtree_size(ref), ref))


def build_mention(eid: str,
                  refs: Iterable[NodeRef],
                  index: Mapping[NodeRef, Node],
                  *,
                  etype: str | None = None,
                  declared_head: int | None = None,
                  other: str | None = None,
                  parts: Sequence[Sequence[NodeRef]] | None = None) -> Mention:
    """Construct a mention, deriving its head and zero-dependency cache."""
    nodes = tuple(sorted(set(refs)))
    if not nodes:
        raise ValueError(f"mention {eid!r} has no nodes")
    head = derive_head(nodes, index)
    norm_parts = None
    if parts is not None and len(parts) > 1:
        norm_parts = tuple(tuple(sorted(set(p))) for p in parts)
    zero_edges = None
    if all(ref.id.is_empty for ref in nodes):
        edges = set()
        for ref in nodes:
            node = index.get(ref)
            if node is not None:
                edges.update((e.head, e.rel) for e in node.deps)
        zero_edges = frozenset(edges)
    return Mention(eid=eid, nodes=nodes, head=head, etype=etype,
                   declared_head=declared_head, other=other,
                   parts=norm_parts, zero_edges=zero_edges)


def drop_singletons(entities: Sequence[Entity]) -> list[Entity]:
    """Entities with at least two mentions, input order preserved."""
    return [e for e in entities if len(e.mentions) >= 2]


@dataclass(frozen=True)
class MentionShape:
    """Structural classification of a mention span."""

    with_empty: bool
    with_gap: bool
    non_treelet: bool
    length_words: int


def mention_shape(mention: Mention, document: Document) -> MentionShape:
    """Classify a mention: empty-node content, gaps, tree connectivity.

    ``length_words`` counts surface nodes only, so zero mentions have
    length 0.  A mention has a gap when a surface word lies strictly
    between two of its surface nodes without belonging to it.  A mention
    is a non-treelet when its nodes do not form a connected subgraph of
    the dependency forest.
    """
    index = document.node_index
    span = set(mention.nodes)
    surface = [ref for ref in mention.nodes if not ref.id.is_empty]

    with_gap = False
    if len(surface) >= 2:
        first, last = surface[0], surface[-1]
        for si in range(first.sent, last.sent + 1):
            for node in document.sentences[si].surface_nodes:
                ref = NodeRef(si, node.id)
                if first < ref < last and ref not in span:
                    with_gap = True
                    break
            if with_gap:
                break

    roots = sum(1 for ref in mention.nodes
                if _parent_of(ref, index) not in span)
    return MentionShape(
        with_empty=any(ref.id.is_empty for ref in mention.nodes),
        with_gap=with_gap,
        non_treelet=roots != 1,
        length_words=len(surface),
    )
