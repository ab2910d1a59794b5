"""Reader and writer for CoNLL-U files with entity annotation in MISC.

The reader understands surface words, multiword-token ranges ("k-j"),
empty nodes ("k.m"), enhanced dependencies (DEPS) and the bracketed
Entity attribute, and reconstructs documents, mentions (including
discontinuous ones) and entities.  The writer emits a canonical form;
``serialize(parse(text)) == text`` holds byte-for-byte for files already
in that form.

Problems found in the input are collected as :class:`Violation` records.
Only structural damage (wrong column count, broken id sequences) aborts
parsing; everything else is reported and parsing continues.
"""

from __future__ import annotations

import gzip
import re
from dataclasses import dataclass, replace
from enum import Enum

from .model import (
    ROOT,
    Corpus,
    DepEdge,
    Document,
    Entity,
    Mention,
    MultiwordToken,
    Node,
    NodeId,
    NodeRef,
    Sentence,
    build_mention,
    node_index,
)

_NEWDOC_RE = re.compile(r"^#\s*newdoc(?:\s+id\s*=\s*(.*))?\s*$")
_SENT_ID_RE = re.compile(r"^#\s*sent_id\s*=\s*(.*)$")
_MWT_ID_RE = re.compile(r"^(\d+)-(\d+)$")
_EVENT_SPEC_RE = re.compile(
    r"^(?P<eid>[^-()\[\]]+)(?:\[(?P<pi>\d+)/(?P<pn>\d+)\])?"
    r"(?:-(?P<rest>.*))?$"
)


class ViolationCode(Enum):
    COLUMNS = "columns"
    ID_SEQUENCE = "id-sequence"
    DUPLICATE_ID = "duplicate-id"
    TREE = "tree"
    ENTITY_ON_MWT = "entity-on-mwt"
    UNCLOSED_MENTION = "unclosed-mention"
    CLOSE_WITHOUT_OPEN = "close-without-open"
    MISSING_PART = "missing-part"
    MALFORMED_ENTITY = "malformed-entity"
    UNRESOLVED_DEPS = "unresolved-deps"
    EMPTY_DEPS = "empty-deps"
    HEAD_MISMATCH = "head-mismatch"


#: Violations autofix knows how to repair.
FIXABLE_CODES = frozenset({ViolationCode.ENTITY_ON_MWT})

#: Violations that do not make a file unscoreable.
WARNING_CODES = frozenset({
    ViolationCode.UNRESOLVED_DEPS,
    ViolationCode.EMPTY_DEPS,
    ViolationCode.HEAD_MISMATCH,
})


@dataclass(frozen=True)
class Violation:
    """One problem found in a CoNLL-U file."""

    code: ViolationCode
    line: int
    message: str
    doc_id: str = ""
    sent_id: str = ""

    @property
    def fixable(self) -> bool:
        return self.code in FIXABLE_CODES

    @property
    def is_error(self) -> bool:
        return self.code not in WARNING_CODES

    def __str__(self) -> str:
        where = f"line {self.line}"
        if self.doc_id:
            where += f", doc {self.doc_id}"
        if self.sent_id:
            where += f", sent {self.sent_id}"
        return f"[{self.code.value}] {where}: {self.message}"


class ParseError(Exception):
    """Structural damage that prevents building the model."""

    def __init__(self, violation: Violation,
                 collected: list[Violation] | None = None):
        super().__init__(str(violation))
        self.violation = violation
        self.violations = list(collected or []) + [violation]


@dataclass(frozen=True)
class EntityEvent:
    """One bracket event of an Entity attribute value."""

    kind: str  # "open" | "close" | "single"
    eid: str
    part: tuple[int, int] | None = None
    etype: str | None = None
    head_index: int | None = None
    other: str | None = None


def _decode(data: bytes | str) -> str:
    if isinstance(data, bytes):
        if data[:2] == b"\x1f\x8b":
            data = gzip.decompress(data)
        text = data.decode("utf-8")
    else:
        text = data
    if text.startswith("﻿"):
        text = text[1:]
    return text


def split_entity_events(value: str) -> tuple[list[tuple[str, str]], str | None]:
    """Tokenize an Entity attribute value into (kind, spec) pairs.

    Returns the events plus an error message when the value does not
    follow the bracket grammar.
    """
    events: list[tuple[str, str]] = []
    i = 0
    while i < len(value):
        if value[i] == "(":
            j = i + 1
            while j < len(value) and value[j] not in "()":
                j += 1
            spec = value[i + 1:j]
            if not spec:
                return events, "empty open bracket"
            if j < len(value) and value[j] == ")":
                events.append(("single", spec))
                i = j + 1
            else:
                events.append(("open", spec))
                i = j
        else:
            j = value.find(")", i)
            if j < 0:
                return events, f"unterminated close event at {value[i:]!r}"
            spec = value[i:j]
            if not spec:
                return events, "empty close bracket"
            events.append(("close", spec))
            i = j + 1
    return events, None


def parse_event(kind: str, spec: str) -> EntityEvent | None:
    """Parse one event spec ("eid[-etype[-head[-other]]]", part suffix ok)."""
    if kind == "close":
        m = _EVENT_SPEC_RE.match(spec)
        if m is None or m.group("rest") is not None:
            return None
        part = None
        if m.group("pi"):
            part = (int(m.group("pi")), int(m.group("pn")))
        return EntityEvent("close", m.group("eid"), part)
    m = _EVENT_SPEC_RE.match(spec)
    if m is None:
        return None
    part = None
    if m.group("pi"):
        part = (int(m.group("pi")), int(m.group("pn")))
        if not (1 <= part[0] <= part[1]):
            return None
    etype = head_index = other = None
    rest = m.group("rest")
    if rest is not None:
        fields = rest.split("-", 2)
        etype = fields[0] or None
        if len(fields) > 1:
            head_field = fields[1]
            if head_field:
                if not head_field.isdigit() or int(head_field) < 1:
                    return None
                head_index = int(head_field)
        if len(fields) > 2:
            other = fields[2]
    return EntityEvent(kind, m.group("eid"), part, etype, head_index, other)


class _MentionDraft:
    __slots__ = ("event", "refs")

    def __init__(self, event: EntityEvent):
        self.event = event
        self.refs: list[NodeRef] = []


class _DocBuilder:
    """Accumulates one document: sentences plus entity bracket state."""

    def __init__(self, doc_id: str):
        self.doc_id = doc_id
        self.sentences: list[Sentence] = []
        self.open: list[_MentionDraft] = []
        # eid -> list of completed parts (event, refs), awaiting merge
        self.pending_parts: dict[str, list[tuple[EntityEvent, list[NodeRef]]]] = {}
        # ordered mention specs: (eid, refs, attrs..., parts)
        self.mention_specs: list[tuple] = []
        self.eid_order: list[str] = []

    def _remember_eid(self, eid: str) -> None:
        if eid not in self.eid_order:
            self.eid_order.append(eid)

    def handle_events(self, events: list[EntityEvent], ref: NodeRef,
                      report) -> None:
        opened_now: list[_MentionDraft] = []
        closers: list[EntityEvent] = []
        for event in events:
            if event.kind in ("open", "single"):
                draft = _MentionDraft(event)
                self.open.append(draft)
                opened_now.append(draft)
                if event.kind == "single":
                    closers.append(EntityEvent("close", event.eid, event.part))
            else:
                closers.append(event)
        for draft in self.open:
            draft.refs.append(ref)
        for event in closers:
            self._close(event, report)

    def _close(self, event: EntityEvent, report) -> None:
        for i in range(len(self.open) - 1, -1, -1):
            draft = self.open[i]
            if draft.event.eid != event.eid:
                continue
            if event.part is not None and draft.event.part != event.part:
                continue
            del self.open[i]
            self._complete(draft)
            return
        report(ViolationCode.CLOSE_WITHOUT_OPEN,
               f"close bracket {event.eid!r} without matching open")

    def _complete(self, draft: _MentionDraft) -> None:
        event = draft.event
        self._remember_eid(event.eid)
        if event.part is None:
            self.mention_specs.append((event, [draft.refs]))
            return
        parts = self.pending_parts.setdefault(event.eid, [])
        parts.append((event, draft.refs))
        if len(parts) == event.part[1]:
            parts.sort(key=lambda item: item[0].part[0])
            first = parts[0][0]
            self.mention_specs.append((first, [refs for _, refs in parts]))
            del self.pending_parts[event.eid]

    def finish(self, report) -> Document:
        for draft in self.open:
            report(ViolationCode.UNCLOSED_MENTION,
                   f"entity bracket {draft.event.eid!r} never closed")
        for eid, parts in self.pending_parts.items():
            have = sorted(p[0].part[0] for p in parts)
            report(ViolationCode.MISSING_PART,
                   f"mention {eid!r} has parts {have} of {parts[0][0].part[1]}")
        sentences = tuple(self.sentences)
        index = node_index(sentences)
        by_eid: dict[str, list[Mention]] = {eid: [] for eid in self.eid_order}
        for event, part_refs in self.mention_specs:
            refs = [ref for part in part_refs for ref in part]
            mention = build_mention(
                event.eid, refs, index,
                etype=event.etype, declared_head=event.head_index,
                other=event.other,
                parts=part_refs if len(part_refs) > 1 else None)
            if mention.declared_head is not None:
                declared_pos = mention.declared_head
                if not (1 <= declared_pos <= len(mention.nodes)) or \
                        mention.nodes[declared_pos - 1] != mention.head:
                    report(ViolationCode.HEAD_MISMATCH,
                           f"declared head {declared_pos} of mention "
                           f"{event.eid!r} differs from derived head "
                           f"{mention.head.id}")
            by_eid.setdefault(event.eid, []).append(mention)
        entities = []
        for eid in self.eid_order:
            mentions = by_eid.get(eid, [])
            if mentions:
                mentions.sort(key=lambda m: (m.start, m.end))
                entities.append(Entity(eid, tuple(mentions)))
        return Document(self.doc_id, sentences, tuple(entities))


class _SentenceBuilder:
    def __init__(self, first_line: int):
        self.first_line = first_line
        self.comments: list[str] = []
        self.rows: list[tuple[int, list[str]]] = []

    @property
    def empty(self) -> bool:
        return not self.comments and not self.rows

    @property
    def sent_id(self) -> str:
        for comment in self.comments:
            m = _SENT_ID_RE.match(comment)
            if m:
                return m.group(1)
        return ""

    def newdoc_id(self) -> str | None:
        for comment in self.comments:
            m = _NEWDOC_RE.match(comment)
            if m:
                return m.group(1) or ""
        return None


def parse_corpus(data: bytes | str) -> Corpus:
    """Parse CoNLL-U text (optionally gzipped bytes) into a Corpus.

    Violations are collected on the returned corpus; structural errors
    raise :class:`ParseError`.
    """
    text = _decode(data)
    violations: list[Violation] = []
    documents: list[Document] = []
    current_doc: _DocBuilder | None = None
    context = {"doc_id": "", "sent_id": ""}

    def report(code: ViolationCode, message: str, line: int) -> None:
        violations.append(Violation(code, line, message,
                                    context["doc_id"], context["sent_id"]))

    def fail(code: ViolationCode, message: str, line: int) -> None:
        raise ParseError(Violation(code, line, message,
                                   context["doc_id"], context["sent_id"]),
                         violations)

    def flush_sentence(builder: _SentenceBuilder) -> None:
        nonlocal current_doc
        newdoc = builder.newdoc_id()
        if newdoc is not None or current_doc is None:
            if current_doc is not None:
                documents.append(current_doc.finish(
                    lambda code, msg: report(code, msg, builder.first_line)))
            current_doc = _DocBuilder(newdoc or "")
            context["doc_id"] = current_doc.doc_id
        context["sent_id"] = builder.sent_id
        sent_index = len(current_doc.sentences)
        sentence, node_events = _build_sentence(builder, report, fail)
        current_doc.sentences.append(sentence)
        for node, line, events in node_events:
            ref = NodeRef(sent_index, node.id)
            current_doc.handle_events(events, ref,
                                      lambda code, msg, ln=line:
                                      report(code, msg, ln))

    pending = _SentenceBuilder(1)
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.rstrip("\r")
        if not line.strip():
            if not pending.empty:
                flush_sentence(pending)
            pending = _SentenceBuilder(lineno + 1)
            continue
        if line.startswith("#"):
            pending.comments.append(line)
            continue
        pending.rows.append((lineno, line.split("\t")))
    if not pending.empty:
        flush_sentence(pending)
    if current_doc is not None:
        documents.append(current_doc.finish(
            lambda code, msg: report(code, msg, lineno)))
    return Corpus(tuple(documents), tuple(violations))


def _split_misc(col: str) -> list[str]:
    if col == "_" or col == "":
        return []
    return col.split("|")


def _take_entity(items: list[str]) -> tuple[list[str], str | None, int]:
    """Split MISC items into (rest, entity value, original position)."""
    for i, item in enumerate(items):
        if item.startswith("Entity="):
            rest = items[:i] + items[i + 1:]
            return rest, item[len("Entity="):], i
    return items, None, 0


def _build_sentence(builder: _SentenceBuilder, report, fail):
    """Turn raw rows into a Sentence; returns (sentence, node event list)."""
    nodes: list[Node] = []
    mwts: list[MultiwordToken] = []
    node_events: list[tuple[Node, int, list]] = []
    seen_ids: set[NodeId] = set()
    last_word = 0
    last_empty_minor = 0
    mwt_until = 0

    for line, cols in builder.rows:
        if len(cols) != 10:
            fail(ViolationCode.COLUMNS,
                 f"expected 10 tab-separated columns, got {len(cols)}", line)
        raw_id, form, lemma, upos, xpos, feats, head_col, deprel, deps_col, \
            misc_col = cols
        mwt_match = _MWT_ID_RE.match(raw_id)
        if mwt_match:
            start, end = int(mwt_match.group(1)), int(mwt_match.group(2))
            if start <= 0 or end < start or start != last_word + 1:
                fail(ViolationCode.ID_SEQUENCE,
                     f"bad multiword token range {raw_id!r}", line)
            if start <= mwt_until:
                fail(ViolationCode.ID_SEQUENCE,
                     f"overlapping multiword token {raw_id!r}", line)
            mwt_until = end
            items = _split_misc(misc_col)
            if any(item.startswith("Entity=") for item in items):
                report(ViolationCode.ENTITY_ON_MWT,
                       f"Entity annotation on multiword token {raw_id!r}",
                       line)
            mwts.append(MultiwordToken(start, end, form, tuple(items)))
            continue
        try:
            node_id = NodeId.parse(raw_id)
        except ValueError:
            fail(ViolationCode.ID_SEQUENCE, f"unparseable id {raw_id!r}", line)
        if node_id in seen_ids:
            fail(ViolationCode.DUPLICATE_ID, f"duplicate id {raw_id!r}", line)
        seen_ids.add(node_id)
        if node_id.is_empty:
            if node_id.major != last_word:
                fail(ViolationCode.ID_SEQUENCE,
                     f"empty node {raw_id!r} not anchored at previous word",
                     line)
            if node_id.minor != last_empty_minor + 1:
                fail(ViolationCode.ID_SEQUENCE,
                     f"empty node {raw_id!r} out of sequence", line)
            last_empty_minor = node_id.minor
        else:
            if node_id.major != last_word + 1:
                fail(ViolationCode.ID_SEQUENCE,
                     f"word id {raw_id!r} out of sequence", line)
            last_word = node_id.major
            last_empty_minor = 0

        head: int | None = None
        if node_id.is_empty:
            if head_col not in ("_", ""):
                report(ViolationCode.TREE,
                       f"empty node {raw_id!r} must have '_' HEAD", line)
        elif head_col in ("_", ""):
            report(ViolationCode.TREE,
                   f"word {raw_id!r} lacks a basic-tree head", line)
        else:
            try:
                head = int(head_col)
            except ValueError:
                fail(ViolationCode.ID_SEQUENCE,
                     f"unparseable HEAD {head_col!r}", line)

        deps: list[DepEdge] = []
        if deps_col not in ("_", ""):
            for chunk in deps_col.split("|"):
                if ":" not in chunk:
                    report(ViolationCode.UNRESOLVED_DEPS,
                           f"malformed DEPS entry {chunk!r}", line)
                    continue
                head_part, rel = chunk.split(":", 1)
                try:
                    dep_head = NodeId.parse(head_part)
                except ValueError:
                    report(ViolationCode.UNRESOLVED_DEPS,
                           f"unparseable DEPS head {head_part!r}", line)
                    continue
                deps.append(DepEdge(dep_head, rel))
        if node_id.is_empty and not deps:
            report(ViolationCode.EMPTY_DEPS,
                   f"empty node {raw_id!r} has no enhanced dependencies",
                   line)

        items = _split_misc(misc_col)
        rest, entity_value, slot = _take_entity(items)
        events: list[EntityEvent] = []
        if entity_value is not None:
            raw_events, err = split_entity_events(entity_value)
            if err is not None:
                report(ViolationCode.MALFORMED_ENTITY,
                       f"bad Entity value {entity_value!r}: {err}", line)
            for kind, spec in raw_events:
                event = parse_event(kind, spec)
                if event is None:
                    report(ViolationCode.MALFORMED_ENTITY,
                           f"bad Entity event {spec!r}", line)
                else:
                    events.append(event)
        node = Node(node_id, form, lemma, upos, xpos, feats, head, deprel,
                    tuple(deps), tuple(rest), slot)
        nodes.append(node)
        node_events.append((node, line, events))

    _check_tree(nodes, builder, report)
    _check_deps_targets(nodes, builder, report)
    sentence = Sentence(builder.sent_id, tuple(builder.comments),
                        tuple(nodes), tuple(mwts))
    return sentence, node_events


def _check_tree(nodes, builder, report) -> None:
    surface = [n for n in nodes if not n.is_empty]
    if not surface:
        return
    n = len(surface)
    roots = [w for w in surface if w.head == 0]
    line = builder.first_line
    if len(roots) != 1:
        report(ViolationCode.TREE,
               f"sentence has {len(roots)} roots, expected 1", line)
    for word in surface:
        if word.head is not None and not (0 <= word.head <= n):
            report(ViolationCode.TREE,
                   f"HEAD {word.head} of word {word.id} out of range", line)
    # cycle check over in-range heads
    state: dict[int, int] = {}
    for word in surface:
        path = []
        cur = word.id.major
        while cur and state.get(cur, 0) == 0:
            state[cur] = 1
            path.append(cur)
            head = surface[cur - 1].head if cur - 1 < n else None
            cur = head if head is not None and 0 <= head <= n else 0
        if cur and state.get(cur) == 1:
            report(ViolationCode.TREE,
                   f"cycle in basic tree involving word {cur}", line)
        for visited in path:
            state[visited] = 2


def _check_deps_targets(nodes, builder, report) -> None:
    known = {n.id for n in nodes}
    known.add(ROOT)
    for node in nodes:
        for edge in node.deps:
            if edge.head not in known:
                report(ViolationCode.UNRESOLVED_DEPS,
                       f"DEPS head {edge.head} of node {node.id} "
                       "does not exist", builder.first_line)


# ---------------------------------------------------------------------------
# Serialization


def _open_string(entity: Entity, mention: Mention, part_tok: str,
                 first_part: bool) -> str:
    if not first_part:
        return "(" + part_tok
    fields = [part_tok]
    has_head = mention.declared_head is not None
    has_other = mention.other is not None
    if mention.etype is not None or has_head or has_other:
        fields.append(mention.etype or "")
    if has_head or has_other:
        fields.append(str(mention.declared_head) if has_head else "")
    if has_other:
        fields.append(mention.other)
    return "(" + "-".join(fields)


def _entity_strings(document: Document) -> dict[NodeRef, str]:
    """Entity attribute value for every node that carries brackets."""
    opens_at: dict[NodeRef, list] = {}
    for ei, entity in enumerate(document.entities):
        for mi, mention in enumerate(entity.mentions):
            parts = mention.parts or (mention.nodes,)
            n_parts = len(parts)
            for pi, part in enumerate(parts, 1):
                part_tok = entity.eid
                if n_parts > 1:
                    part_tok += f"[{pi}/{n_parts}]"
                record = {
                    "start": part[0],
                    "end": part[-1],
                    "open": _open_string(entity, mention, part_tok, pi == 1),
                    "close": part_tok + ")",
                    "order": (ei, mi, pi),
                }
                opens_at.setdefault(part[0], []).append(record)

    values: dict[NodeRef, str] = {}
    stack: list[dict] = []
    for si, sentence in enumerate(document.sentences):
        for node in sentence.nodes:
            ref = NodeRef(si, node.id)
            chunks: list[str] = []
            if stack:
                closing = [rec for rec in reversed(stack)
                           if rec["end"] == ref]
                for rec in closing:
                    chunks.append(rec["close"])
                    stack.remove(rec)
            here = opens_at.get(ref)
            if here:
                here.sort(key=lambda rec: rec["order"])
                here.sort(key=lambda rec: rec["end"], reverse=True)
                for rec in here:
                    if rec["end"] == ref:
                        chunks.append(rec["open"] + ")")
                    else:
                        chunks.append(rec["open"])
                        stack.append(rec)
            if chunks:
                values[ref] = "".join(chunks)
    return values


def _misc_column(items: tuple[str, ...], entity_value: str | None,
                 slot: int) -> str:
    merged = list(items)
    if entity_value is not None:
        merged.insert(min(slot, len(merged)), "Entity=" + entity_value)
    return "|".join(merged) if merged else "_"


def serialize_corpus(corpus: Corpus) -> bytes:
    """Emit the canonical CoNLL-U form of a corpus (UTF-8, LF endings)."""
    out: list[str] = []
    for document in corpus.documents:
        entity_values = _entity_strings(document)
        for si, sentence in enumerate(document.sentences):
            out.extend(sentence.comments)
            mwt_by_start = {m.start: m for m in sentence.mwts}
            for node in sentence.nodes:
                if not node.is_empty and node.id.major in mwt_by_start:
                    mwt = mwt_by_start[node.id.major]
                    out.append("\t".join([
                        f"{mwt.start}-{mwt.end}", mwt.form, "_", "_", "_",
                        "_", "_", "_", "_",
                        "|".join(mwt.misc) if mwt.misc else "_",
                    ]))
                ref = NodeRef(si, node.id)
                head_col = "_" if node.head is None else str(node.head)
                deps_col = "|".join(str(e) for e in node.deps) or "_"
                misc_col = _misc_column(node.misc, entity_values.get(ref),
                                        node.entity_slot)
                out.append("\t".join([
                    str(node.id), node.form, node.lemma, node.upos,
                    node.xpos, node.feats, head_col, node.deprel, deps_col,
                    misc_col,
                ]))
            out.append("")
    return ("\n".join(out) + "\n").encode("utf-8") if out else b""


# ---------------------------------------------------------------------------
# Validation and fixing


def validate(data: bytes | str) -> list[Violation]:
    """All violations of a file; an empty error-free list means scoreable."""
    try:
        corpus = parse_corpus(data)
    except ParseError as exc:
        return exc.violations
    return list(corpus.violations)


def is_scoreable(violations: list[Violation]) -> bool:
    return not any(v.is_error for v in violations)


def autofix(data: bytes | str) -> bytes:
    """Repair fixable violations at the text level.

    Entity annotations sitting on multiword-token rows are moved to the
    first word of their range.  The transformation is idempotent, keeps
    the row count, and leaves already-valid files byte-identical.
    """
    text = _decode(data)
    lines = text.split("\n")
    fixed: list[str] = []
    carry: dict[str, str] = {}  # target word id -> entity value to prepend

    for line in lines:
        line = line.rstrip("\r")
        if not line.strip() or line.startswith("#"):
            carry.clear()
            fixed.append(line)
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            fixed.append(line)
            continue
        raw_id = cols[0]
        mwt_match = _MWT_ID_RE.match(raw_id)
        items = _split_misc(cols[9])
        rest, entity_value, slot = _take_entity(items)
        if mwt_match and entity_value is not None:
            carry[mwt_match.group(1)] = \
                carry.get(mwt_match.group(1), "") + entity_value
            cols[9] = "|".join(rest) if rest else "_"
            fixed.append("\t".join(cols))
            continue
        if raw_id in carry:
            moved = carry.pop(raw_id)
            merged_value = moved + (entity_value or "")
            cols[9] = _misc_column(tuple(rest), merged_value,
                                   slot if entity_value is not None else 0)
            fixed.append("\t".join(cols))
            continue
        fixed.append(line)
    return "\n".join(fixed).encode("utf-8")


def strip_for_input(corpus: Corpus, drop_zeros: bool = False) -> Corpus:
    """Simulate shared-task input data: no entities, blinded empty nodes.

    Removes all entity annotation and replaces every empty node's form
    with "_"; with ``drop_zeros`` the empty-node rows are removed
    entirely (enhanced-dependency references pointing at them from other
    nodes are left as they are).
    """
    documents = []
    for document in corpus.documents:
        sentences = []
        for sentence in document.sentences:
            nodes = []
            for node in sentence.nodes:
                if node.is_empty:
                    if drop_zeros:
                        continue
                    node = replace(node, form="_", entity_slot=0)
                else:
                    node = replace(node, entity_slot=0)
                nodes.append(node)
            sentences.append(Sentence(sentence.sent_id, sentence.comments,
                                      tuple(nodes), sentence.mwts))
        documents.append(Document(document.doc_id, tuple(sentences), ()))
    return Corpus(tuple(documents), corpus.violations)


def load_corpus(path) -> Corpus:
    """Read a CoNLL-U file (plain or gzipped) from disk."""
    with open(path, "rb") as handle:
        return parse_corpus(handle.read())
