"""Ranked-list genderedness and the stereotype-reinforcement slope statistic."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .collection import Collection, Qrels
from .embeddings import EmbeddingStore
from .engines import RankedList, RunSet, perfect_engine, truncate_to_k
from .gender import GenderDirection
from .text import StopList, document_genderedness, query_genderedness, tokenize


class GsrError(ValueError):
    pass


@dataclass(frozen=True)
class GsrPoint:
    query_id: str
    gq: float
    gl: float
    k_used: int


@dataclass
class GsrResult:
    points: list[GsrPoint]
    slope: float
    intercept: float
    mu_q: float
    sigma2_q: float
    mu_ql: float
    n: int
    relative_pct: float | None = None
    skipped_queries: list[str] = field(default_factory=list)


def rank_weight(rank: int) -> float:
    return 1.0 / math.log2(rank + 1)


def list_genderedness(
    doc_texts: list[str],
    query_bag: list[str],
    store: EmbeddingStore,
    direction: GenderDirection,
    stops: StopList,
) -> float | None:
    """Log-discounted weighted mean of per-document genderedness down the list.

    Documents whose genderedness is undefined are skipped and the weight
    normalization is recomputed over the remainder.
    """
    num, denom = 0.0, 0.0
    for rank, text in enumerate(doc_texts, start=1):
        gd = document_genderedness(tokenize(text, stops), query_bag, store, direction)
        if gd is None:
            continue
        w = rank_weight(rank)
        num += w * gd
        denom += w
    if denom == 0.0:
        return None
    return num / denom


def gsr_slope(points: list[GsrPoint]) -> GsrResult:
    """Slope of the linear fit of list genderedness against query genderedness.

    Population (1/N) moments throughout.
    """
    n = len(points)
    if n < 2:
        raise GsrError("need at least 2 points")
    xs = [p.gq for p in points]
    ys = [p.gl for p in points]
    mu_q = sum(xs) / n
    mu_ql = sum(ys) / n
    sigma2 = sum((x - mu_q) ** 2 for x in xs) / n
    if sigma2 == 0.0:
        raise GsrError("degenerate query-genderedness variance")
    cov = sum((x - mu_q) * (y - mu_ql) for x, y in zip(xs, ys)) / n
    slope = cov / sigma2
    return GsrResult(
        points=list(points),
        slope=slope,
        intercept=mu_ql - slope * mu_q,
        mu_q=mu_q,
        sigma2_q=sigma2,
        mu_ql=mu_ql,
        n=n,
    )


def relative_gsr(sys_result: GsrResult, perfect_result: GsrResult) -> float:
    """Deviation from the perfect-engine slope, as a percentage of it."""
    if perfect_result.slope == 0.0:
        raise GsrError("perfect-engine slope is zero")
    return 100.0 * (sys_result.slope - perfect_result.slope) / perfect_result.slope


def _points_for_run(
    runs: RunSet,
    collection: Collection,
    qrels: Qrels,
    store: EmbeddingStore,
    direction: GenderDirection,
    stops: StopList,
    truncate_to_relevant: bool,
) -> tuple[list[GsrPoint], list[str]]:
    docs = collection.doc_map()
    points, skipped = [], []
    for topic in collection.queries:
        ranked = runs.lists.get(topic.id)
        if ranked is None or not ranked.items:
            skipped.append(topic.id)
            continue
        if truncate_to_relevant:
            k = len(qrels.relevant_docs(topic.id))
            ranked = truncate_to_k(ranked, k)
            if not ranked.items:
                skipped.append(topic.id)
                continue
        qbag = tokenize(topic.title, stops)
        gq = query_genderedness(qbag, store, direction)
        texts = [docs[it.doc_id].text for it in ranked.items if it.doc_id in docs]
        gl = list_genderedness(texts, qbag, store, direction, stops)
        if gq is None or gl is None:
            skipped.append(topic.id)
            continue
        points.append(GsrPoint(topic.id, gq, gl, len(ranked)))
    return points, skipped


def audit(
    runs: RunSet,
    collection: Collection,
    qrels: Qrels,
    store: EmbeddingStore,
    direction: GenderDirection,
    stops: StopList | None = None,
    truncate_to_relevant: bool = True,
) -> tuple[GsrResult, GsrResult]:
    """Fit the system and perfect-engine slopes; (system, perfect) results.

    Per query, the system list is truncated to the number of judged-relevant
    documents so both fits are directly comparable. Queries dropped from
    either fit are enumerated, never silently excluded.
    """
    if stops is None:
        stops = StopList.default()
    sys_points, sys_skipped = _points_for_run(
        runs, collection, qrels, store, direction, stops, truncate_to_relevant
    )
    if len(sys_points) < 2:
        raise GsrError(f"fewer than 2 usable queries (skipped: {sys_skipped})")
    perfect_runs = RunSet(tag="perfect")
    for topic in collection.queries:
        perfect_runs.add(perfect_engine(qrels, topic.id))
    perf_points, perf_skipped = _points_for_run(
        perfect_runs, collection, qrels, store, direction, stops, False
    )
    if len(perf_points) < 2:
        raise GsrError(f"perfect engine has fewer than 2 usable queries ({perf_skipped})")
    sys_result = gsr_slope(sys_points)
    perf_result = gsr_slope(perf_points)
    if perf_result.slope != 0.0:
        sys_result.relative_pct = relative_gsr(sys_result, perf_result)
    sys_result.skipped_queries = sys_skipped
    perf_result.skipped_queries = perf_skipped
    return sys_result, perf_result


def report_tsv(result: GsrResult) -> str:
    """TSV report: per-query rows plus a slope/intercept footer block."""
    lines = ["query_id\tg_q\tg_L\tk_used"]
    for p in result.points:
        lines.append(f"{p.query_id}\t{p.gq:.10g}\t{p.gl:.10g}\t{p.k_used}")
    lines.append(f"#slope\t{result.slope:.10g}")
    lines.append(f"#intercept\t{result.intercept:.10g}")
    lines.append(f"#n\t{result.n}")
    if result.relative_pct is not None:
        lines.append(f"#relative_pct\t{result.relative_pct:.10g}")
    if result.skipped_queries:
        lines.append("#skipped\t" + ",".join(result.skipped_queries))
    return "\n".join(lines) + "\n"


def scatter_csv(result: GsrResult) -> str:
    lines = ["g_q,g_L"]
    for p in result.points:
        lines.append(f"{p.gq:.10g},{p.gl:.10g}")
    return "\n".join(lines) + "\n"
