from __future__ import annotations

import gzip

import pytest

from corefeval.conllu import (
    ParseError,
    ViolationCode,
    autofix,
    is_scoreable,
    parse_corpus,
    serialize_corpus,
    split_entity_events,
    strip_for_input,
    validate,
)
from corefeval.model import NodeId, NodeRef

from conftest import CANONICAL_FIXTURES, fixture_bytes


def conllu(*rows: str, doc: str = "d1", sent: str = "s1") -> str:
    lines = [f"# newdoc id = {doc}", f"# sent_id = {sent}"]
    lines.extend(rows)
    lines.append("")
    return "\n".join(lines) + "\n"


MINIMAL = conllu(
    "1\tJohn\tJohn\tPROPN\t_\t_\t2\tnsubj\t_\tEntity=(e1)",
    "2\tloves\tlove\tVERB\t_\t_\t0\troot\t_\t_",
    "3\tMary\tMary\tPROPN\t_\t_\t2\tobj\t_\tEntity=(e2)",
)


# --- parsing -------------------------------------------------------------


def test_parse_minimal_two_singletons():
    corpus = parse_corpus(MINIMAL)
    assert not corpus.violations
    (document,) = corpus.documents
    assert document.doc_id == "d1"
    assert [e.eid for e in document.entities] == ["e1", "e2"]
    assert all(e.is_singleton for e in document.entities)


def test_parse_empty_node_row():
    text = conllu(
        "1\tslept\tsleep\tVERB\t_\t_\t0\troot\t_\t_",
        "1.1\t_\t_\t_\t_\t_\t_\t_\t1:nsubj\t_",
        "2\t.\t.\tPUNCT\t_\t_\t1\tpunct\t_\t_",
    )
    corpus = parse_corpus(text)
    node = corpus.documents[0].sentences[0].nodes[1]
    assert node.id == NodeId(1, 1) and node.is_empty
    assert node.head is None
    assert [(str(e.head), e.rel) for e in node.deps] == [("1", "nsubj")]


def test_parse_nested_mentions():
    text = conllu(
        "1\ta\ta\tDET\t_\t_\t2\tdet\t_\tEntity=(e5-person-1(e6",
        "2\tb\tb\tNOUN\t_\t_\t0\troot\t_\tEntity=e6)e5)",
        "3\tc\tc\tNOUN\t_\t_\t2\tobj\t_\t_",
    )
    corpus = parse_corpus(text)
    entities = {e.eid: e for e in corpus.documents[0].entities}
    outer = entities["e5"].mentions[0]
    inner = entities["e6"].mentions[0]
    assert [r.id.major for r in outer.nodes] == [1, 2]
    assert [r.id.major for r in inner.nodes] == [1, 2]
    assert outer.etype == "person" and outer.declared_head == 1


def test_parse_accepts_crlf_and_gzip_and_bom():
    text = MINIMAL.replace("\n", "\r\n").encode("utf-8")
    corpus = parse_corpus(b"\xef\xbb\xbf" + text)
    assert corpus.documents[0].doc_id == "d1"
    corpus = parse_corpus(gzip.compress(MINIMAL.encode("utf-8")))
    assert corpus.documents[0].doc_id == "d1"


def test_parse_structural_errors_abort():
    with pytest.raises(ParseError) as info:
        parse_corpus(conllu("1\ta\ta\tX\t_\t_\t0\troot\t_"))
    assert info.value.violation.code is ViolationCode.COLUMNS

    with pytest.raises(ParseError) as info:
        parse_corpus(conllu(
            "1\ta\ta\tX\t_\t_\t0\troot\t_\t_",
            "3\tb\tb\tX\t_\t_\t1\tdep\t_\t_",
        ))
    assert info.value.violation.code is ViolationCode.ID_SEQUENCE


def test_parse_is_total_on_clean_fixtures():
    for name in CANONICAL_FIXTURES:
        violations = validate(fixture_bytes(name))
        assert violations == []


# --- round-trip ----------------------------------------------------------


@pytest.mark.parametrize("name", CANONICAL_FIXTURES)
def test_round_trip_byte_identity(name):
    data = fixture_bytes(name)
    assert serialize_corpus(parse_corpus(data)) == data


@pytest.mark.parametrize("name", CANONICAL_FIXTURES)
def test_reparse_after_serialize_is_stable(name):
    corpus = parse_corpus(fixture_bytes(name))
    again = parse_corpus(serialize_corpus(corpus))
    assert [d.doc_id for d in again.documents] == \
        [d.doc_id for d in corpus.documents]
    for before, after in zip(corpus.documents, again.documents):
        assert [e.eid for e in before.entities] == \
            [e.eid for e in after.entities]
        for eb, ea in zip(before.entities, after.entities):
            assert [m.nodes for m in eb.mentions] == \
                [m.nodes for m in ea.mentions]


def test_bracket_balance_on_fixtures():
    for name in CANONICAL_FIXTURES:
        text = fixture_bytes(name).decode("utf-8")
        opens = {}
        closes = {}
        for line in text.splitlines():
            if line.startswith("#") or "\t" not in line:
                continue
            misc = line.split("\t")[9]
            for item in misc.split("|"):
                if not item.startswith("Entity="):
                    continue
                events, err = split_entity_events(item[len("Entity="):])
                assert err is None
                for kind, spec in events:
                    eid = spec.split("-")[0]
                    if kind in ("open", "single"):
                        opens[eid] = opens.get(eid, 0) + 1
                    if kind in ("close", "single"):
                        closes[eid] = closes.get(eid, 0) + 1
        assert opens == closes


def test_serialize_discontinuous_parts():
    data = fixture_bytes("gapped.conllu")
    text = serialize_corpus(parse_corpus(data)).decode("utf-8")
    assert "Entity=(e1[1/2]-object-2" in text
    assert "Entity=e1[1/2])" in text
    assert "Entity=(e1[2/2]" in text


# --- validate ------------------------------------------------------------


def test_validate_clean_fixture():
    assert validate(fixture_bytes("basic.conllu")) == []


def test_validate_entity_on_mwt_is_fixable():
    violations = validate(fixture_bytes("invalid/mwt_entity.conllu"))
    assert [v.code for v in violations] == [ViolationCode.ENTITY_ON_MWT]
    assert violations[0].fixable
    assert not is_scoreable(violations)


def test_validate_unclosed_bracket_not_fixable():
    violations = validate(fixture_bytes("invalid/unclosed.conllu"))
    assert [v.code for v in violations] == [ViolationCode.UNCLOSED_MENTION]
    assert not violations[0].fixable


def test_validate_truncated_row():
    violations = validate(fixture_bytes("invalid/badcols.conllu"))
    assert any(v.code is ViolationCode.COLUMNS for v in violations)


def test_validate_close_without_open():
    text = conllu(
        "1\ta\ta\tX\t_\t_\t0\troot\t_\tEntity=e9)",
    )
    violations = validate(text)
    assert [v.code for v in violations] == [ViolationCode.CLOSE_WITHOUT_OPEN]


def test_validate_dangling_deps_is_warning_only():
    text = conllu(
        "1\ta\ta\tX\t_\t_\t0\troot\t2.1:nsubj\t_",
    )
    violations = validate(text)
    assert [v.code for v in violations] == [ViolationCode.UNRESOLVED_DEPS]
    assert is_scoreable(violations)


def test_validate_declared_head_mismatch_is_warning():
    text = conllu(
        "1\ta\ta\tDET\t_\t_\t2\tdet\t_\tEntity=(e1-thing-1",
        "2\tb\tb\tNOUN\t_\t_\t0\troot\t_\tEntity=e1)",
    )
    violations = validate(text)
    assert [v.code for v in violations] == [ViolationCode.HEAD_MISMATCH]
    assert is_scoreable(violations)


# --- autofix -------------------------------------------------------------


def test_autofix_moves_entity_to_first_word():
    fixed = autofix(fixture_bytes("invalid/mwt_entity.conllu"))
    assert fixed == fixture_bytes("invalid/mwt_entity_fixed.conllu")
    assert validate(fixed) == []


def test_autofix_identity_on_valid_file():
    data = fixture_bytes("basic.conllu")
    assert autofix(data) == data


def test_autofix_idempotent_and_keeps_row_count():
    data = fixture_bytes("invalid/mwt_entity.conllu")
    once = autofix(data)
    assert autofix(once) == once
    assert once.count(b"\n") == data.count(b"\n")


def test_autofix_two_mwt_rows():
    text = conllu(
        "1-2\tab\t_\t_\t_\t_\t_\t_\t_\tEntity=(e1)",
        "1\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_",
        "2\tb\tb\tNOUN\t_\t_\t1\tdep\t_\t_",
        "3-4\tcd\t_\t_\t_\t_\t_\t_\t_\tEntity=(e2)",
        "3\tc\tc\tNOUN\t_\t_\t1\tdep\t_\t_",
        "4\td\td\tNOUN\t_\t_\t1\tdep\t_\t_",
    )
    fixed = autofix(text).decode("utf-8")
    rows = [line.split("\t") for line in fixed.splitlines()
            if line and not line.startswith("#")]
    by_id = {row[0]: row[9] for row in rows}
    assert by_id["1-2"] == "_" and by_id["3-4"] == "_"
    assert by_id["1"] == "Entity=(e1)" and by_id["3"] == "Entity=(e2)"
    assert validate(fixed) == []


def test_autofix_never_leaves_fixable_violations():
    for name in ("invalid/mwt_entity.conllu", "invalid/unclosed.conllu",
                 "basic.conllu", "nested.conllu"):
        fixed = autofix(fixture_bytes(name))
        assert not any(v.fixable for v in validate(fixed))


# --- strip_for_input -----------------------------------------------------


def test_strip_removes_all_entities():
    corpus = parse_corpus(fixture_bytes("basic.conllu"))
    stripped = strip_for_input(corpus)
    assert all(not d.entities for d in stripped.documents)
    gold_forms = [n.form for d in corpus.documents for s in d.sentences
                  for n in s.surface_nodes]
    new_forms = [n.form for d in stripped.documents for s in d.sentences
                 for n in s.surface_nodes]
    assert gold_forms == new_forms


def test_strip_blinds_empty_node_forms():
    text = conllu(
        "1\tslept\tsleep\tVERB\t_\t_\t0\troot\t_\t_",
        "1.1\the\the\tPRON\t_\t_\t_\t_\t1:nsubj\t_",
    )
    stripped = strip_for_input(parse_corpus(text))
    node = stripped.documents[0].sentences[0].nodes[1]
    assert node.is_empty and node.form == "_"


def test_strip_drop_zeros_removes_rows_keeps_deps():
    text = conllu(
        "1\tslept\tsleep\tVERB\t_\t_\t0\troot\t_\t_",
        "1.1\t_\t_\t_\t_\t_\t_\t_\t1:nsubj\t_",
        "2\tsoundly\tsoundly\tADV\t_\t_\t1\tadvmod\t1.1:advmod\t_",
    )
    stripped = strip_for_input(parse_corpus(text), drop_zeros=True)
    sentence = stripped.documents[0].sentences[0]
    assert [str(n.id) for n in sentence.nodes] == ["1", "2"]
    assert str(sentence.nodes[1].deps[0]) == "1.1:advmod"
