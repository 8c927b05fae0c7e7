"""Lexical and embedding-based retrieval models, plus reference systems."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .collection import Document, Qrels
from .embeddings import EmbeddingStore
from .text import StopList, tokenize


class EngineError(ValueError):
    pass


@dataclass(frozen=True)
class RankedItem:
    doc_id: str
    score: float
    rank: int


@dataclass
class RankedList:
    query_id: str
    items: list[RankedItem]

    def __post_init__(self):
        ids = [it.doc_id for it in self.items]
        if len(set(ids)) != len(ids):
            raise EngineError(f"duplicate doc ids in ranked list for {self.query_id}")
        for i, it in enumerate(self.items):
            if it.rank != i + 1:
                raise EngineError("ranks must be consecutive from 1")
            if i > 0 and it.score > self.items[i - 1].score:
                raise EngineError("scores must be non-increasing with rank")

    def doc_ids(self) -> list[str]:
        return [it.doc_id for it in self.items]

    def __len__(self) -> int:
        return len(self.items)


def ranked_from_scores(query_id: str, scores: dict[str, float]) -> RankedList:
    """Sort by score descending; ties broken by ascending doc id (global rule)."""
    ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return RankedList(
        query_id,
        [RankedItem(doc, s, i + 1) for i, (doc, s) in enumerate(ordered)],
    )


def truncate_to_k(ranked: RankedList, k: int) -> RankedList:
    if k < 0:
        raise EngineError("k must be >= 0")
    return RankedList(ranked.query_id, ranked.items[:k])


@dataclass
class InvertedIndex:
    postings: dict[str, list[tuple[str, int]]]
    doc_lengths: dict[str, int]
    collection_term_counts: dict[str, int]
    total_tokens: int
    doc_bags: dict[str, list[str]]

    @property
    def doc_count(self) -> int:
        return len(self.doc_lengths)

    @property
    def avg_doc_length(self) -> float:
        return self.total_tokens / self.doc_count

    def df(self, term: str) -> int:
        return len(self.postings.get(term, ()))


def build_index(docs: list[Document], stops: StopList) -> InvertedIndex:
    if not docs:
        raise EngineError("cannot index an empty corpus")
    postings: dict[str, list[tuple[str, int]]] = {}
    doc_lengths: dict[str, int] = {}
    coll_counts: dict[str, int] = {}
    doc_bags: dict[str, list[str]] = {}
    for doc in docs:
        if doc.id in doc_lengths:
            raise EngineError(f"duplicate doc id {doc.id!r}")
        bag = tokenize(doc.text, stops)
        doc_bags[doc.id] = bag
        doc_lengths[doc.id] = len(bag)
        tf: dict[str, int] = {}
        for tok in bag:
            tf[tok] = tf.get(tok, 0) + 1
            coll_counts[tok] = coll_counts.get(tok, 0) + 1
        for term, count in tf.items():
            postings.setdefault(term, []).append((doc.id, count))
    return InvertedIndex(
        postings=postings,
        doc_lengths=doc_lengths,
        collection_term_counts=coll_counts,
        total_tokens=sum(doc_lengths.values()),
        doc_bags=doc_bags,
    )


def _query_tf(query_bag: list[str]) -> dict[str, int]:
    tf: dict[str, int] = {}
    for tok in query_bag:
        tf[tok] = tf.get(tok, 0) + 1
    return tf


def score_tfidf(index: InvertedIndex, query_bag: list[str], query_id: str = "") -> RankedList:
    """Cosine similarity of tf.idf vectors, idf = ln(N/df)."""
    n = index.doc_count
    qtf = _query_tf(query_bag)
    q_weights = {
        t: c * math.log(n / index.df(t)) for t, c in qtf.items() if index.df(t) > 0
    }
    q_norm = math.sqrt(sum(w * w for w in q_weights.values()))
    if q_norm == 0.0:
        return RankedList(query_id, [])
    doc_norms: dict[str, float] = {d: 0.0 for d in index.doc_lengths}
    for term, plist in index.postings.items():
        idf = math.log(n / len(plist))
        for doc, tf in plist:
            doc_norms[doc] += (tf * idf) ** 2
    dots: dict[str, float] = {}
    for term, qw in q_weights.items():
        idf = math.log(n / index.df(term))
        for doc, tf in index.postings[term]:
            dots[doc] = dots.get(doc, 0.0) + qw * tf * idf
    scores = {
        doc: dot / (q_norm * math.sqrt(doc_norms[doc]))
        for doc, dot in dots.items()
        if dot != 0.0 and doc_norms[doc] > 0.0
    }
    return ranked_from_scores(query_id, scores)


def score_bm25(
    index: InvertedIndex,
    query_bag: list[str],
    query_id: str = "",
    k1: float = 1.2,
    b: float = 0.75,
) -> RankedList:
    if k1 < 0 or not 0 <= b <= 1:
        raise EngineError("require k1 >= 0 and 0 <= b <= 1")
    n = index.doc_count
    avgdl = index.avg_doc_length
    scores: dict[str, float] = {}
    for term, qcount in _query_tf(query_bag).items():
        df = index.df(term)
        if df == 0:
            continue
        idf = math.log((n - df + 0.5) / (df + 0.5) + 1.0)
        for doc, tf in index.postings[term]:
            dl = index.doc_lengths[doc]
            sat = tf * (k1 + 1) / (tf + k1 * (1 - b + b * dl / avgdl))
            scores[doc] = scores.get(doc, 0.0) + qcount * idf * sat
    return ranked_from_scores(query_id, {d: s for d, s in scores.items() if s != 0.0})


def score_qlm(
    index: InvertedIndex,
    query_bag: list[str],
    query_id: str = "",
    mu: float = 1000.0,
) -> RankedList:
    """Query likelihood with Dirichlet smoothing; docs sharing no query term omitted."""
    if mu <= 0:
        raise EngineError("mu must be > 0")
    qtf = _query_tf(query_bag)
    seen_terms = [t for t in qtf if index.collection_term_counts.get(t, 0) > 0]
    if not seen_terms:
        return RankedList(query_id, [])
    candidates: set[str] = set()
    for term in seen_terms:
        candidates.update(doc for doc, _ in index.postings.get(term, ()))
    scores: dict[str, float] = {}
    for doc in candidates:
        dl = index.doc_lengths[doc]
        s = 0.0
        for term in seen_terms:
            tf = next((c for d, c in index.postings[term] if d == doc), 0)
            p_coll = index.collection_term_counts[term] / index.total_tokens
            s += qtf[term] * math.log((tf + mu * p_coll) / (dl + mu))
        scores[doc] = s
    return ranked_from_scores(query_id, scores)


class EmbeddingScorer:
    """Mean (or self-information weighted) embedding retrieval over a corpus.

    Document vectors are computed once per (store, weighting) and cached.
    """

    def __init__(
        self,
        store: EmbeddingStore,
        docs: list[Document],
        stops: StopList,
        index: InvertedIndex | None = None,
        self_information: bool = False,
    ):
        if self_information and index is None:
            raise EngineError("self-information weighting needs an index")
        self.store = store
        self.stops = stops
        self.self_information = self_information
        self._si_max = 0.0
        self._index = index
        if self_information:
            total = index.total_tokens
            self._si = {
                t: -math.log(c / total)
                for t, c in index.collection_term_counts.items()
                if c > 0
            }
            self._si_max = max(self._si.values()) if self._si else 1.0
        self._doc_vecs: dict[str, np.ndarray] = {}
        for doc in docs:
            vec = self._mean_vector(tokenize(doc.text, stops))
            if vec is not None:
                self._doc_vecs[doc.id] = vec

    def _weight(self, token: str) -> float:
        if not self.self_information:
            return 1.0
        return self._si.get(token, self._si_max)

    def _mean_vector(self, bag: list[str]) -> np.ndarray | None:
        acc = None
        total_w = 0.0
        for tok in bag:
            hit = self.store.lookup(tok)
            if hit is None:
                continue
            w = self._weight(tok)
            acc = hit.vector * w if acc is None else acc + hit.vector * w
            total_w += w
        if acc is None or total_w == 0.0:
            return None
        return acc / total_w

    def score(self, query_bag: list[str], query_id: str = "") -> RankedList:
        qvec = self._mean_vector(query_bag)
        if qvec is None:
            raise EngineError(f"no query token resolves to a vector: {query_bag}")
        qn = np.linalg.norm(qvec)
        if qn == 0.0:
            raise EngineError("query vector is zero")
        scores: dict[str, float] = {}
        for doc_id, dvec in self._doc_vecs.items():
            dn = np.linalg.norm(dvec)
            if dn == 0.0:
                continue
            scores[doc_id] = float(np.dot(qvec, dvec) / (qn * dn))
        return ranked_from_scores(query_id, scores)


def score_emb_add(
    store: EmbeddingStore,
    docs: list[Document],
    query_bag: list[str],
    stops: StopList,
    query_id: str = "",
) -> RankedList:
    return EmbeddingScorer(store, docs, stops).score(query_bag, query_id)


def score_emb_si(
    store: EmbeddingStore,
    index: InvertedIndex,
    docs: list[Document],
    query_bag: list[str],
    stops: StopList,
    query_id: str = "",
) -> RankedList:
    scorer = EmbeddingScorer(store, docs, stops, index=index, self_information=True)
    return scorer.score(query_bag, query_id)


def perfect_engine(qrels: Qrels, query_id: str) -> RankedList:
    """All docs judged relevant, best grade first; grade ties by ascending doc id."""
    relevant = qrels.relevant_docs(query_id)
    ordered = sorted(relevant, key=lambda dg: (-dg[1], dg[0]))
    return RankedList(
        query_id,
        [RankedItem(doc, float(grade), i + 1) for i, (doc, grade) in enumerate(ordered)],
    )


def random_engine(
    doc_ids: list[str], k: int, seed: int, query_id: str = ""
) -> RankedList:
    if k > len(doc_ids):
        raise EngineError(f"k={k} exceeds corpus size {len(doc_ids)}")
    rng = np.random.default_rng(seed)
    chosen = rng.choice(len(doc_ids), size=k, replace=False)
    return RankedList(
        query_id,
        [
            RankedItem(doc_ids[int(j)], float(k - i), i + 1)
            for i, j in enumerate(chosen)
        ],
    )


@dataclass
class RunSet:
    """Per-query ranked lists, as read from or written to a TREC run file."""

    lists: dict[str, RankedList] = field(default_factory=dict)
    tag: str = "gsr_audit"

    def add(self, ranked: RankedList) -> None:
        self.lists[ranked.query_id] = ranked


def write_run(runs: RunSet, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for qid in runs.lists:
            for item in runs.lists[qid].items:
                fh.write(f"{qid} Q0 {item.doc_id} {item.rank} {item.score:.6g} {runs.tag}\n")


def read_run(path: str | Path) -> RunSet:
    """6-column TREC run format: query_id Q0 doc_id rank score tag."""
    by_query: dict[str, list[tuple[int, str, float]]] = {}
    tag = "run"
    for lineno, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 6:
            raise EngineError(f"{path}:{lineno}: expected 6 fields")
        qid, _, doc, rank, score, tag = parts
        by_query.setdefault(qid, []).append((int(rank), doc, float(score)))
    runs = RunSet(tag=tag)
    for qid, rows in by_query.items():
        rows.sort()
        runs.add(
            RankedList(
                qid,
                [RankedItem(doc, score, i + 1) for i, (_, doc, score) in enumerate(rows)],
            )
        )
    return runs
