"""Brute-force reference implementations used only by the tests.

These deliberately take the slow road: explicit link and pair
enumeration, breadth-first component counting, exhaustive search over
assignments.  They stay independent of the library code they check.
"""

from __future__ import annotations

import random
from itertools import combinations, permutations

from corefeval.model import Mention, NodeId, NodeRef, ScoreTriple


# ---------------------------------------------------------------------------
# Cluster metrics over plain clusterings (lists of sets of hashable keys)


def _key_to_cluster(clusters):
    out = {}
    for i, cluster in enumerate(clusters):
        for key in cluster:
            out[key] = i
    return out


def _muc_one_side(a_clusters, b_clusters):
    b_of = _key_to_cluster(b_clusters)
    num = den = 0
    for cluster in a_clusters:
        members = list(cluster)
        # count connected components under "same b-cluster" edges
        seen = set()
        components = 0
        for start in members:
            if start in seen:
                continue
            components += 1
            queue = [start]
            seen.add(start)
            while queue:
                cur = queue.pop()
                for other in members:
                    if other in seen:
                        continue
                    if cur in b_of and other in b_of and \
                            b_of[cur] == b_of[other]:
                        seen.add(other)
                        queue.append(other)
        num += len(members) - components
        den += len(members) - 1
    return num, den


def brute_muc(gold, pred) -> ScoreTriple:
    r_num, r_den = _muc_one_side(gold, pred)
    p_num, p_den = _muc_one_side(pred, gold)
    return ScoreTriple.from_counts(r_num, r_den, p_num, p_den)


def _b3_one_side(a_clusters, b_clusters):
    b_of = _key_to_cluster(b_clusters)
    num = 0.0
    den = 0
    for cluster in a_clusters:
        for m in cluster:
            den += 1
            if m not in b_of:
                continue
            shared = sum(1 for other in cluster
                         if other in b_of and b_of[other] == b_of[m])
            num += shared / len(cluster)
    return num, den


def brute_b3(gold, pred) -> ScoreTriple:
    r_num, r_den = _b3_one_side(gold, pred)
    p_num, p_den = _b3_one_side(pred, gold)
    return ScoreTriple.from_counts(r_num, r_den, p_num, p_den)


def _phi4(a, b) -> float:
    return 2 * len(a & b) / (len(a) + len(b))


def brute_ceafe(gold, pred) -> ScoreTriple:
    if not gold or not pred:
        return ScoreTriple.from_counts(0, len(gold), 0, len(pred))
    if len(gold) <= len(pred):
        best = max(
            sum(_phi4(gold[i], pred[j]) for i, j in enumerate(perm))
            for perm in permutations(range(len(pred)), len(gold)))
    else:
        best = max(
            sum(_phi4(gold[j], pred[i]) for i, j in enumerate(perm))
            for perm in permutations(range(len(gold)), len(pred)))
    return ScoreTriple.from_counts(best, len(gold), best, len(pred))


def brute_blanc(gold, pred) -> ScoreTriple:
    def links(clusters):
        mentions = {m for c in clusters for m in c}
        coref = {frozenset(p) for c in clusters for p in combinations(c, 2)}
        noncoref = {frozenset(p) for p in combinations(sorted(mentions, key=id), 2)
                    if frozenset(p) not in coref}
        return coref, noncoref

    c_gold, n_gold = links(gold)
    c_pred, n_pred = links(pred)
    coref = ScoreTriple.from_counts(len(c_gold & c_pred), len(c_gold),
                                    len(c_gold & c_pred), len(c_pred))
    noncoref = ScoreTriple.from_counts(len(n_gold & n_pred), len(n_gold),
                                       len(n_gold & n_pred), len(n_pred))
    if not c_gold and not c_pred and not n_gold and not n_pred:
        return ScoreTriple(0.0, 0.0, 0.0)
    if not c_gold and not c_pred:
        return noncoref
    if not n_gold and not n_pred:
        return coref
    return ScoreTriple((coref.recall + noncoref.recall) / 2,
                       (coref.precision + noncoref.precision) / 2,
                       (coref.f1 + noncoref.f1) / 2)


def _lea_one_side(a_clusters, b_clusters):
    b_of = _key_to_cluster(b_clusters)
    b_sizes = [len(c) for c in b_clusters]
    num = 0.0
    den = 0
    for cluster in a_clusters:
        size = len(cluster)
        den += size
        if size == 1:
            key = next(iter(cluster))
            ok = key in b_of and b_sizes[b_of[key]] == 1
            num += 1.0 if ok else 0.0
            continue
        resolved = 0
        total = 0
        for a, b in combinations(cluster, 2):
            total += 1
            if a in b_of and b in b_of and b_of[a] == b_of[b]:
                resolved += 1
        num += size * resolved / total
    return num, den


def brute_lea(gold, pred) -> ScoreTriple:
    r_num, r_den = _lea_one_side(gold, pred)
    p_num, p_den = _lea_one_side(pred, gold)
    return ScoreTriple.from_counts(r_num, r_den, p_num, p_den)


BRUTE_METRICS = {
    "muc": brute_muc,
    "b3": brute_b3,
    "ceafe": brute_ceafe,
    "blanc": brute_blanc,
    "lea": brute_lea,
}


# ---------------------------------------------------------------------------
# Exhaustive assignment


def brute_max_assignment(weights) -> float:
    """Best total weight over all injective row->column maps (small only)."""
    n = len(weights)
    m = len(weights[0]) if n else 0
    if n == 0 or m == 0:
        return 0.0
    best = 0.0
    if n <= m:
        for perm in permutations(range(m), n):
            total = sum(weights[i][j] for i, j in enumerate(perm)
                        if weights[i][j] > 0)
            best = max(best, total)
    else:
        for perm in permutations(range(n), m):
            total = sum(weights[i][j] for j, i in enumerate(perm)
                        if weights[i][j] > 0)
            best = max(best, total)
    return best


# ---------------------------------------------------------------------------
# Random instances


def random_clusterings(rng: random.Random):
    """A random micro-instance: two clusterings over partially shared keys
    (at most 5 mentions and 3 entities per side)."""
    shared = rng.randint(0, 4)
    keys_shared = [f"s{i}" for i in range(shared)]
    gold_keys = keys_shared + [f"g{i}" for i in
                               range(rng.randint(0, 5 - shared))]
    pred_keys = keys_shared + [f"p{i}" for i in
                               range(rng.randint(0, 5 - shared))]

    def partition(keys):
        if not keys:
            return []
        n_clusters = rng.randint(1, 3)
        clusters = [set() for _ in range(n_clusters)]
        for key in keys:
            clusters[rng.randrange(n_clusters)].add(key)
        return [c for c in clusters if c]

    return partition(gold_keys), partition(pred_keys)


def make_mention(eid: str, sent: int, positions, head_pos=None,
                 zero_edges=None) -> Mention:
    """Hand-rolled mention for synthetic tests (no document needed)."""
    refs = tuple(sorted(
        NodeRef(sent, p if isinstance(p, NodeId) else NodeId(p))
        for p in positions))
    if head_pos is None:
        head = refs[0]
    else:
        head = NodeRef(sent, head_pos if isinstance(head_pos, NodeId)
                       else NodeId(head_pos))
    return Mention(eid=eid, nodes=refs, head=head,
                   zero_edges=zero_edges)


def make_zero(eid: str, sent: int, node: NodeId, edges) -> Mention:
    return Mention(eid=eid, nodes=(NodeRef(sent, node),),
                   head=NodeRef(sent, node),
                   zero_edges=frozenset(edges))
