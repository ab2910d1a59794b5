"""Gold/predicted mention alignment.

Non-zero mentions are aligned one-to-one under a matching strategy
(exact, partial or head match); among maximum-cardinality matchings the
one with the largest total span overlap wins, which disambiguates
multiple mentions sharing a head.  Zero mentions are aligned separately,
either by identical position (linear) or by solving a maximum-weight
bipartite assignment over the agreement of their enhanced dependencies
(dependency-based).  All alignments are deterministic: ties are broken
in favour of earlier mentions in document order.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .model import Mention


class MatchStrategy(str, Enum):
    EXACT = "exact"
    PARTIAL = "partial"
    HEAD = "head"


class ZeroMatching(str, Enum):
    DEPENDENCY = "dependency"
    LINEAR = "linear"


@dataclass(eq=False)
class Alignment:
    """A one-to-one partial mapping between gold and predicted mentions."""

    pairs: tuple[tuple[Mention, Mention], ...]
    unmatched_gold: tuple[Mention, ...]
    unmatched_pred: tuple[Mention, ...]

    @classmethod
    def build(cls, pairs: Sequence[tuple[Mention, Mention]],
              gold: Sequence[Mention],
              pred: Sequence[Mention]) -> "Alignment":
        matched_gold = {id(g) for g, _ in pairs}
        matched_pred = {id(p) for _, p in pairs}
        return cls(
            pairs=tuple(pairs),
            unmatched_gold=tuple(m for m in gold if id(m) not in matched_gold),
            unmatched_pred=tuple(m for m in pred if id(m) not in matched_pred),
        )

    @classmethod
    def merge(cls, alignments: Iterable["Alignment"]) -> "Alignment":
        pairs: list = []
        ug: list = []
        up: list = []
        for alignment in alignments:
            pairs.extend(alignment.pairs)
            ug.extend(alignment.unmatched_gold)
            up.extend(alignment.unmatched_pred)
        return cls(tuple(pairs), tuple(ug), tuple(up))

    @cached_property
    def gold_to_pred(self) -> dict[Mention, Mention]:
        return {g: p for g, p in self.pairs}

    @cached_property
    def pred_to_gold(self) -> dict[Mention, Mention]:
        return {p: g for g, p in self.pairs}


def match_exact(gold: Mention, pred: Mention) -> bool:
    """Identical node sets including part structure."""
    return gold.node_set == pred.node_set and gold.parts == pred.parts


def match_partial(gold: Mention, pred: Mention) -> bool:
    """Predicted span contained in gold and covering the gold head."""
    return pred.node_set <= gold.node_set and gold.head in pred.node_set


def match_head(gold: Mention, pred: Mention) -> bool:
    """Derived heads fall on the identical token."""
    return gold.head == pred.head


_PREDICATES: dict[MatchStrategy, Callable[[Mention, Mention], bool]] = {
    MatchStrategy.EXACT: match_exact,
    MatchStrategy.PARTIAL: match_partial,
    MatchStrategy.HEAD: match_head,
}


def max_weight_assignment(weights: Sequence[Sequence[float]]
                          ) -> list[tuple[int, int]]:
    """Maximum-weight one-to-one matching; zero-weight pairs excluded.

    Solved exactly; among equal-weight optima the result is canonicalized
    so that earlier rows pair with earlier columns.
    """
    n = len(weights)
    m = len(weights[0]) if n else 0
    if n == 0 or m == 0:
        return []
    matrix = np.asarray(weights, dtype=float)
    rows, cols = linear_sum_assignment(matrix, maximize=True)
    match = {int(i): int(j) for i, j in zip(rows, cols)
             if matrix[i, j] > 0.0}
    _canonicalize(matrix, match, n, m)
    return sorted(match.items())


def _canonicalize(matrix: np.ndarray, match: dict[int, int],
                  n: int, m: int) -> None:
    """Resolve weight ties toward earlier rows and columns."""
    w = matrix
    for _ in range(n * m + 1):
        changed = False
        used_cols = set(match.values())
        # prefer the earliest row for every matched column
        for i1 in sorted(match):
            j1 = match[i1]
            for i2 in range(i1):
                if i2 not in match and w[i2, j1] == w[i1, j1]:
                    del match[i1]
                    match[i2] = j1
                    changed = True
                    break
            if changed:
                break
        if changed:
            continue
        # prefer the earliest column for every matched row
        back = {j: i for i, j in match.items()}
        for i1 in sorted(match):
            j1 = match[i1]
            for j2 in range(j1):
                if j2 not in used_cols:
                    if w[i1, j2] == w[i1, j1]:
                        match[i1] = j2
                        changed = True
                        break
                else:
                    i2 = back[j2]
                    if i2 > i1 and \
                            w[i1, j2] + w[i2, j1] == w[i1, j1] + w[i2, j2] \
                            and w[i1, j2] > 0.0 and w[i2, j1] > 0.0:
                        match[i1], match[i2] = j2, j1
                        changed = True
                        break
            if changed:
                break
        if not changed:
            return


def _mention_order(mentions: Iterable[Mention]) -> list[Mention]:
    return sorted(mentions, key=Mention.sort_key)


def _components(edges: dict[tuple[int, int], float],
                n_gold: int, n_pred: int) -> list[tuple[list[int], list[int]]]:
    """Connected components of the bipartite candidate graph."""
    parent = list(range(n_gold + n_pred))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (gi, pj) in edges:
        ia, ib = find(gi), find(n_gold + pj)
        if ia != ib:
            parent[ib] = ia
    groups: dict[int, tuple[list[int], list[int]]] = {}
    for gi in range(n_gold):
        groups.setdefault(find(gi), ([], []))[0].append(gi)
    for pj in range(n_pred):
        groups.setdefault(find(n_gold + pj), ([], []))[1].append(pj)
    return [grp for _, grp in sorted(groups.items())
            if grp[0] and grp[1]]


def align_mentions(gold: Sequence[Mention], pred: Sequence[Mention],
                   strategy: MatchStrategy) -> Alignment:
    """Align non-zero mentions one-to-one under the given strategy.

    The matching has maximum cardinality; among those, total span overlap
    is maximized, and remaining ties prefer earlier mentions.
    """
    for mention in list(gold) + list(pred):
        if mention.is_zero:
            raise ValueError("zero mentions must be aligned separately")
    predicate = _PREDICATES[MatchStrategy(strategy)]
    gold_list = _mention_order(gold)
    pred_list = _mention_order(pred)

    # candidate pairs share at least one node under every strategy
    by_node: dict = {}
    for pj, mention in enumerate(pred_list):
        for ref in mention.nodes:
            by_node.setdefault(ref, []).append(pj)
    edges: dict[tuple[int, int], float] = {}
    for gi, g in enumerate(gold_list):
        seen: set[int] = set()
        for ref in g.nodes:
            for pj in by_node.get(ref, ()):
                if pj in seen:
                    continue
                seen.add(pj)
                if predicate(g, pred_list[pj]):
                    overlap = len(g.node_set & pred_list[pj].node_set)
                    edges[(gi, pj)] = float(overlap)

    pairs: list[tuple[Mention, Mention]] = []
    for comp_gold, comp_pred in _components(edges, len(gold_list),
                                            len(pred_list)):
        # one extra matched pair outweighs any possible overlap total
        base = 1.0 + sum(len(gold_list[gi].nodes) for gi in comp_gold)
        weights = [[0.0] * len(comp_pred) for _ in comp_gold]
        for a, gi in enumerate(comp_gold):
            for b, pj in enumerate(comp_pred):
                if (gi, pj) in edges:
                    weights[a][b] = base + edges[(gi, pj)]
        for a, b in max_weight_assignment(weights):
            pairs.append((gold_list[comp_gold[a]], pred_list[comp_pred[b]]))
    pairs.sort(key=lambda gp: gp[0].sort_key())
    return Alignment.build(pairs, gold_list, pred_list)


def _edge_fscore(gold_edges: frozenset, pred_edges: frozenset) -> float:
    tp = len(gold_edges & pred_edges)
    denom = len(gold_edges) + len(pred_edges)
    return 2 * tp / denom if denom else 0.0


def zero_pair_weight(gold: Mention, pred: Mention) -> float:
    """Agreement weight of a gold/predicted zero-mention pair.

    Zero unless both zeros sit in the same sentence; otherwise a weighted
    sum of the labeled (parent plus relation, weight 10) and unlabeled
    (parent only, weight 1) F-scores of the gold zero's enhanced
    dependencies recognized in the predicted zero.
    """
    if gold.zero_edges is None or pred.zero_edges is None:
        raise ValueError("zero_pair_weight expects zero mentions")
    if gold.sentence != pred.sentence:
        return 0.0
    labeled = _edge_fscore(gold.zero_edges, pred.zero_edges)
    gold_heads = frozenset(head for head, _ in gold.zero_edges)
    pred_heads = frozenset(head for head, _ in pred.zero_edges)
    unlabeled = _edge_fscore(gold_heads, pred_heads)
    return 10.0 * labeled + 1.0 * unlabeled


def align_zeros_dependency(gold_zeros: Sequence[Mention],
                           pred_zeros: Sequence[Mention]) -> Alignment:
    """Pair zeros within each sentence, maximizing total dependency
    agreement; pairs of weight zero stay unmatched."""
    gold_list = _mention_order(gold_zeros)
    pred_list = _mention_order(pred_zeros)
    by_sentence: dict[int, tuple[list[Mention], list[Mention]]] = {}
    for mention in gold_list:
        by_sentence.setdefault(mention.sentence, ([], []))[0].append(mention)
    for mention in pred_list:
        by_sentence.setdefault(mention.sentence, ([], []))[1].append(mention)

    pairs: list[tuple[Mention, Mention]] = []
    for sentence in sorted(by_sentence):
        golds, preds = by_sentence[sentence]
        if not golds or not preds:
            continue
        weights = [[zero_pair_weight(g, p) for p in preds] for g in golds]
        for a, b in max_weight_assignment(weights):
            pairs.append((golds[a], preds[b]))
    pairs.sort(key=lambda gp: gp[0].sort_key())
    return Alignment.build(pairs, gold_list, pred_list)


def align_zeros_linear(gold_zeros: Sequence[Mention],
                       pred_zeros: Sequence[Mention]) -> Alignment:
    """Pair exactly those zeros whose word indices are identical."""
    gold_list = _mention_order(gold_zeros)
    pred_list = _mention_order(pred_zeros)
    by_position = {}
    for mention in pred_list:
        by_position.setdefault(mention.nodes, mention)
    pairs = []
    used: set[int] = set()
    for gold in gold_list:
        pred = by_position.get(gold.nodes)
        if pred is not None and id(pred) not in used:
            used.add(id(pred))
            pairs.append((gold, pred))
    return Alignment.build(pairs, gold_list, pred_list)


def align_zeros(gold_zeros: Sequence[Mention], pred_zeros: Sequence[Mention],
                method: ZeroMatching) -> Alignment:
    if ZeroMatching(method) is ZeroMatching.DEPENDENCY:
        return align_zeros_dependency(gold_zeros, pred_zeros)
    return align_zeros_linear(gold_zeros, pred_zeros)
