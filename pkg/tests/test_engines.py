import math

import numpy as np
import pytest

from gsr_audit.collection import Document, Qrels
from gsr_audit.engines import (
    EngineError,
    RankedItem,
    RankedList,
    RunSet,
    build_index,
    perfect_engine,
    random_engine,
    ranked_from_scores,
    read_run,
    score_bm25,
    score_emb_add,
    score_qlm,
    score_tfidf,
    truncate_to_k,
    write_run,
)
from gsr_audit.text import StopList

from conftest import make_store

DOCS = [
    Document("d1", "cat dog"),
    Document("d2", "cat cat fish"),
    Document("d3", "bird"),
]


@pytest.fixture
def index():
    return build_index(DOCS, StopList.empty())


def test_ranked_from_scores_ties_by_doc_id():
    ranked = ranked_from_scores("q", {"b": 1.0, "a": 1.0, "c": 2.0})
    assert ranked.doc_ids() == ["c", "a", "b"]


def test_ranked_list_validation():
    with pytest.raises(EngineError):
        RankedList("q", [RankedItem("a", 1.0, 2)])
    with pytest.raises(EngineError):
        RankedList("q", [RankedItem("a", 1.0, 1), RankedItem("a", 1.0, 2)])
    with pytest.raises(EngineError):
        RankedList("q", [RankedItem("a", 1.0, 1), RankedItem("b", 2.0, 2)])


def test_truncate():
    ranked = ranked_from_scores("q", {"a": 3.0, "b": 2.0, "c": 1.0})
    assert truncate_to_k(ranked, 2).doc_ids() == ["a", "b"]
    with pytest.raises(EngineError):
        truncate_to_k(ranked, -1)


def test_tfidf_matches_dense_oracle(index):
    n = 3
    vocab = sorted(index.postings)
    idf = {t: math.log(n / index.df(t)) for t in vocab}

    def vec(tf_map):
        return np.array([tf_map.get(t, 0) * idf[t] for t in vocab])

    doc_tf = {
        "d1": {"cat": 1, "dog": 1},
        "d2": {"cat": 2, "fish": 1},
        "d3": {"bird": 1},
    }
    q = vec({"cat": 1, "dog": 1})
    expected = {}
    for doc, tf_map in doc_tf.items():
        d = vec(tf_map)
        dot = float(q @ d)
        if dot != 0.0:
            expected[doc] = dot / (np.linalg.norm(q) * np.linalg.norm(d))
    got = score_tfidf(index, ["cat", "dog"], "q")
    assert got.doc_ids() == sorted(expected, key=lambda k: (-expected[k], k))
    for item in got.items:
        assert item.score == pytest.approx(expected[item.doc_id], rel=1e-12)


def test_bm25_matches_formula(index):
    k1, b = 1.2, 0.75
    n, avgdl = 3, index.avg_doc_length

    def idf(t):
        df = index.df(t)
        return math.log((n - df + 0.5) / (df + 0.5) + 1.0)

    def part(t, tf, dl):
        return idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * dl / avgdl))

    expected_d1 = part("cat", 1, 2) + part("dog", 1, 2)
    expected_d2 = part("cat", 2, 3)
    got = score_bm25(index, ["cat", "dog"], "q")
    scores = {it.doc_id: it.score for it in got.items}
    assert scores["d1"] == pytest.approx(expected_d1, rel=1e-12)
    assert scores["d2"] == pytest.approx(expected_d2, rel=1e-12)
    assert "d3" not in scores


def test_qlm_smoothing_covers_absent_terms(index):
    mu = 2.0
    total = index.total_tokens
    p_cat, p_dog = 3 / total, 1 / total
    expected_d2 = math.log((2 + mu * p_cat) / (3 + mu)) + math.log(
        (0 + mu * p_dog) / (3 + mu)
    )
    got = score_qlm(index, ["cat", "dog"], "q", mu=mu)
    scores = {it.doc_id: it.score for it in got.items}
    assert scores["d2"] == pytest.approx(expected_d2, rel=1e-12)
    assert "d3" not in scores  # shares no query term


def test_qlm_unseen_query_returns_empty(index):
    assert len(score_qlm(index, ["unseen"], "q")) == 0


def test_embedding_engine_ranks_by_cosine():
    store = make_store(
        {
            "cat": [1.0, 0.0],
            "dog": [0.9, 0.1],
            "fish": [0.0, 1.0],
            "bird": [-1.0, 0.0],
        }
    )
    got = score_emb_add(store, DOCS, ["cat"], StopList.empty(), "q")
    assert got.doc_ids()[0] in ("d1", "d2")
    assert got.doc_ids()[-1] == "d3"


def test_perfect_engine_order_and_ties():
    qrels = Qrels(
        judgments={
            ("q", "b"): 1,
            ("q", "a"): 2,
            ("q", "c"): 2,
            ("q", "z"): 0,
        }
    )
    ranked = perfect_engine(qrels, "q")
    assert ranked.doc_ids() == ["a", "c", "b"]


def test_random_engine_seeded_and_bounded():
    ids = [f"d{i}" for i in range(30)]
    r1 = random_engine(ids, 5, seed=42, query_id="q")
    r2 = random_engine(ids, 5, seed=42, query_id="q")
    r3 = random_engine(ids, 5, seed=43, query_id="q")
    assert r1.doc_ids() == r2.doc_ids()
    assert len(set(r1.doc_ids())) == 5
    assert r1.doc_ids() != r3.doc_ids()
    with pytest.raises(EngineError):
        random_engine(ids, 31, seed=0)


def test_run_file_round_trip(tmp_path):
    runs = RunSet(tag="mytag")
    runs.add(ranked_from_scores("1", {"a": 2.0, "b": 1.0}))
    runs.add(ranked_from_scores("2", {"c": 0.5}))
    p = tmp_path / "run.txt"
    write_run(runs, p)
    loaded = read_run(p)
    assert loaded.tag == "mytag"
    assert loaded.lists["1"].doc_ids() == ["a", "b"]
    assert loaded.lists["2"].doc_ids() == ["c"]


def test_read_run_rejects_malformed(tmp_path):
    p = tmp_path / "run.txt"
    p.write_text("1 Q0 a 1 2.0\n")
    with pytest.raises(EngineError, match="6 fields"):
        read_run(p)


def test_build_index_rejects_empty_and_duplicates():
    with pytest.raises(EngineError):
        build_index([], StopList.empty())
    with pytest.raises(EngineError):
        build_index([Document("d", "a"), Document("d", "b")], StopList.empty())
