"""Retrieval effectiveness metrics and a rank-distance for list comparison."""

from __future__ import annotations

import math

from .collection import Qrels
from .engines import RankedList


class MetricError(ValueError):
    pass


def _require_judged(qrels: Qrels, query_id: str) -> None:
    if not any(qid == query_id for qid, _ in qrels.judgments):
        raise MetricError(f"query {query_id!r} absent from qrels")


def average_precision(ranked: RankedList, qrels: Qrels, query_id: str) -> float:
    """Binary AP (grade > 0 counts as relevant), denominator = total relevant."""
    _require_judged(qrels, query_id)
    total_relevant = len(qrels.relevant_docs(query_id))
    if total_relevant == 0:
        return 0.0
    hits, acc = 0, 0.0
    for rank, item in enumerate(ranked.items, start=1):
        if qrels.grade(query_id, item.doc_id) > 0:
            hits += 1
            acc += hits / rank
    return acc / total_relevant


def precision_at(ranked: RankedList, qrels: Qrels, query_id: str, k: int = 10) -> float:
    """Relevant in top-k over k; short lists count as padded with non-relevant."""
    _require_judged(qrels, query_id)
    if k <= 0:
        raise MetricError("k must be positive")
    hits = sum(
        1 for item in ranked.items[:k] if qrels.grade(query_id, item.doc_id) > 0
    )
    return hits / k


def dcg(grades: list[int], k: int) -> float:
    return sum(g / math.log2(r + 1) for r, g in enumerate(grades[:k], start=1))


def ndcg_at(ranked: RankedList, qrels: Qrels, query_id: str, k: int = 100) -> float:
    """Linear-gain nDCG; ideal DCG is taken over all judged documents."""
    _require_judged(qrels, query_id)
    ideal = sorted(
        (grade for (qid, _), grade in qrels.judgments.items() if qid == query_id),
        reverse=True,
    )
    idcg = dcg(ideal, k)
    if idcg == 0.0:
        raise MetricError(f"query {query_id!r} has zero ideal DCG")
    got = dcg([qrels.grade(query_id, it.doc_id) for it in ranked.items], k)
    return got / idcg


def kendall_tau_distance(a: RankedList, b: RankedList, k: int = 100) -> float:
    """Discordant pairs over the union of both top-k sets.

    Items absent from a list rank after all its present items, tied with each
    other; a pair tied in one list but ordered in the other counts 0.5, so
    the distance is half-integer valued.
    """
    pos_a = {it.doc_id: it.rank for it in a.items[:k]}
    pos_b = {it.doc_id: it.rank for it in b.items[:k]}
    union = sorted(set(pos_a) | set(pos_b))
    big = len(union) + max(len(pos_a), len(pos_b)) + 1
    dist = 0.0
    for i in range(len(union)):
        for j in range(i + 1, len(union)):
            x, y = union[i], union[j]
            ax, ay = pos_a.get(x, big), pos_a.get(y, big)
            bx, by = pos_b.get(x, big), pos_b.get(y, big)
            if ax == ay or bx == by:
                # tied (both absent) in one list, ordered in the other
                if ax != ay or bx != by:
                    dist += 0.5
            elif (ax < ay) != (bx < by):
                dist += 1.0
    return dist


def metrics_tsv(rows: list[tuple[str, float, float, float]]) -> str:
    """Per-query metric table (query_id, AP, P@10, nDCG@100) with a mean row."""
    lines = ["query_id\tap\tp_at_10\tndcg_at_100"]
    for qid, ap, p10, ndcg in rows:
        lines.append(f"{qid}\t{ap:.6f}\t{p10:.6f}\t{ndcg:.6f}")
    if rows:
        n = len(rows)
        means = [sum(r[i] for r in rows) / n for i in (1, 2, 3)]
        lines.append("mean\t" + "\t".join(f"{m:.6f}" for m in means))
    return "\n".join(lines) + "\n"
