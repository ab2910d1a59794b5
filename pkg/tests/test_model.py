from __future__ import annotations

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from corefeval.model import (
    Entity,
    Mention,
    Node,
    NodeId,
    NodeRef,
    ScoreTriple,
    Sentence,
    derive_head,
    drop_singletons,
    mention_shape,
    node_index,
)

from conftest import load_fixture
from oracles import make_mention


def make_tree_sentence(parents: dict[int, int]) -> Sentence:
    """Sentence of n surface words with the given head map (0 = root)."""
    n = max(parents)
    nodes = tuple(
        Node(id=NodeId(i), form=f"w{i}", head=parents[i], deprel="dep")
        for i in range(1, n + 1))
    return Sentence("s", (), nodes)


def refs(*positions: int) -> list[NodeRef]:
    return [NodeRef(0, NodeId(p)) for p in positions]


# --- NodeId ordering ---------------------------------------------------


@given(st.lists(st.tuples(st.integers(1, 50), st.integers(0, 5)),
                min_size=1, max_size=30))
def test_node_id_total_order(pairs):
    ids = [NodeId(a, b) for a, b in pairs]
    ordered = sorted(ids)
    assert sorted(ordered) == ordered
    for left, right in zip(ordered, ordered[1:]):
        assert left <= right


def test_empty_node_sorts_between_words():
    assert NodeId(3) < NodeId(3, 1) < NodeId(3, 2) < NodeId(4)


def test_node_id_parse_and_str():
    assert NodeId.parse("7") == NodeId(7)
    assert NodeId.parse("7.2") == NodeId(7, 2)
    assert str(NodeId(7, 2)) == "7.2"
    assert str(NodeId(7)) == "7"


# --- derive_head --------------------------------------------------------


def test_head_internal_governor_wins():
    # span {3,4,5}: 4 governs 3 and 5, and is attached outside
    sentence = make_tree_sentence({1: 0, 2: 1, 3: 4, 4: 1, 5: 4})
    index = node_index([sentence])
    assert derive_head(refs(3, 4, 5), index) == NodeRef(0, NodeId(4))


def test_head_single_node_span():
    sentence = make_tree_sentence({1: 0, 2: 1, 3: 2, 4: 2, 5: 2, 6: 2, 7: 2})
    index = node_index([sentence])
    assert derive_head(refs(7), index) == NodeRef(0, NodeId(7))


def test_head_tie_breaks_to_earliest():
    # both 2 and 3 attach outside the span and govern nothing inside
    sentence = make_tree_sentence({1: 0, 2: 5, 3: 5, 4: 1, 5: 1})
    index = node_index([sentence])
    assert derive_head(refs(2, 3), index) == NodeRef(0, NodeId(2))


def test_head_cyclic_fragment_falls_back_to_first():
    nodes = (
        Node(id=NodeId(1), form="a", head=2, deprel="dep"),
        Node(id=NodeId(2), form="b", head=1, deprel="dep"),
        Node(id=NodeId(3), form="c", head=0, deprel="root"),
    )
    index = node_index([Sentence("s", (), nodes)])
    assert derive_head(refs(1, 2), index) == NodeRef(0, NodeId(1))


def test_head_is_deterministic_and_in_span_on_random_trees():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(2, 9)
        order = list(range(1, n + 1))
        rng.shuffle(order)
        parents = {order[0]: 0}
        for i, word in enumerate(order[1:], 1):
            parents[word] = order[rng.randrange(i)]
        sentence = make_tree_sentence(parents)
        index = node_index([sentence])
        k = rng.randint(1, n)
        span = rng.sample(range(1, n + 1), k)
        head = derive_head(refs(*span), index)
        assert head in set(refs(*span))
        assert derive_head(refs(*reversed(span)), index) == head


# --- drop_singletons ----------------------------------------------------


def _entity(eid, n_mentions):
    mentions = tuple(make_mention(eid, 0, [i + 1]) for i in range(n_mentions))
    return Entity(eid, mentions)


def test_drop_singletons_definition():
    one, two = _entity("e1", 1), _entity("e2", 2)
    assert drop_singletons([one, two]) == [two]
    assert drop_singletons([]) == []
    assert drop_singletons([one, _entity("e3", 1)]) == []


def test_drop_singletons_idempotent_and_order_preserving():
    entities = [_entity("e1", 2), _entity("e2", 1), _entity("e3", 3)]
    once = drop_singletons(entities)
    assert drop_singletons(once) == once
    assert [e.eid for e in once] == ["e1", "e3"]


# --- mention_shape -------------------------------------------------------


def test_shape_zero_mention():
    corpus = load_fixture("zeros.conllu")
    document = corpus.documents[0]
    zero = next(m for m in document.mentions() if m.is_zero)
    shape = mention_shape(zero, document)
    assert shape.with_empty and not shape.with_gap and not shape.non_treelet
    assert shape.length_words == 0


def test_shape_contiguous_catena():
    corpus = load_fixture("nested.conllu")
    document = corpus.documents[0]
    span = next(m for m in document.mentions() if len(m.nodes) == 4)
    shape = mention_shape(span, document)
    assert shape == type(shape)(False, False, False, 4)


def test_shape_gap():
    corpus = load_fixture("gapped.conllu")
    document = corpus.documents[0]
    gappy = next(m for m in document.mentions() if m.parts)
    shape = mention_shape(gappy, document)
    assert shape.with_gap
    assert shape.length_words == 4


def test_length_words_equals_nodes_minus_empties():
    for name in ("zeros.conllu", "gapped.conllu", "nested.conllu"):
        corpus = load_fixture(name)
        for document in corpus.documents:
            for mention in document.mentions():
                shape = mention_shape(mention, document)
                empties = sum(1 for r in mention.nodes if r.id.is_empty)
                assert shape.length_words == len(mention.nodes) - empties


def test_head_belongs_to_mention_on_fixtures():
    for name in ("basic.conllu", "zeros.conllu", "gapped.conllu",
                 "nested.conllu", "multidoc.conllu"):
        corpus = load_fixture(name)
        for document in corpus.documents:
            for mention in document.mentions():
                assert mention.head in mention.node_set


# --- ScoreTriple ---------------------------------------------------------


@given(st.floats(0, 1), st.floats(0, 1))
def test_score_triple_f1_definition(recall, precision):
    triple = ScoreTriple.from_rp(recall, precision)
    if recall + precision > 0:
        expected = 2 * recall * precision / (recall + precision)
        assert abs(triple.f1 - expected) < 1e-12
    else:
        assert triple.f1 == 0.0
    assert 0.0 <= triple.f1 <= 1.0
