import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gsr_audit.collection import Collection, Document, Topic
from gsr_audit.engines import RunSet, ranked_from_scores
from gsr_audit.gender import DefinitionalPairs, extract_direction
from gsr_audit.stereotype import (
    EntityLexicons,
    StereotypeError,
    bins_tsv,
    delta_gap_analysis,
    gap,
    intrinsic_genderedness,
)
from gsr_audit.text import StopList

from conftest import make_store


def test_default_lexicons_disjoint_and_spotchecks():
    lex = EntityLexicons.default()
    assert "aunt" in lex.female
    assert "pregnancy" not in lex.female and "pregnancy" not in lex.male
    assert not (lex.male & lex.female)


def test_intrinsic_majority():
    lex = EntityLexicons(frozenset({"he", "him"}), frozenset({"she", "her"}))
    assert intrinsic_genderedness(["he", "he", "she"], lex) == "male"
    assert intrinsic_genderedness(["she", "she", "he"], lex) == "female"
    assert intrinsic_genderedness(["nurse", "plumber"], lex) == "neutral"
    assert intrinsic_genderedness(["he", "she"], lex) == "neutral"
    assert intrinsic_genderedness([], lex) == "neutral"


@settings(max_examples=40, deadline=None)
@given(
    doc=st.lists(st.sampled_from(["he", "she", "it", "they", "rock"]), max_size=12)
)
def test_intrinsic_symmetric_under_lexicon_swap(doc):
    lex = EntityLexicons(frozenset({"he"}), frozenset({"she"}))
    swapped = EntityLexicons(frozenset({"she"}), frozenset({"he"}))
    first = intrinsic_genderedness(doc, lex)
    second = intrinsic_genderedness(doc, swapped)
    flip = {"male": "female", "female": "male", "neutral": "neutral"}
    assert second == flip[first]


def test_lexicons_must_be_disjoint_and_nonempty():
    with pytest.raises(StereotypeError):
        EntityLexicons(frozenset({"x"}), frozenset({"x"}))
    with pytest.raises(StereotypeError):
        EntityLexicons(frozenset(), frozenset({"x"}))


def test_gap_arithmetic():
    assert gap(3, 0, 0.5) == pytest.approx(7.0)
    assert gap(4, 2, 0.0) == pytest.approx(2.0)
    with pytest.raises(StereotypeError):
        gap(3, 0, 0.0)
    with pytest.raises(StereotypeError):
        gap(-1, 0)


def test_gap_converges_to_raw_ratio():
    for eps in (0.1, 0.01, 0.001):
        assert gap(6, 3, eps) == pytest.approx(2.0, abs=eps)


@settings(max_examples=40, deadline=None)
@given(
    m1=st.integers(1, 20),
    f1=st.integers(1, 20),
    m2=st.integers(1, 20),
    f2=st.integers(1, 20),
)
def test_delta_gap_sign_stable_under_epsilon(m1, f1, m2, f2):
    raw = m1 / f1 - m2 / f2
    if abs(raw) < 0.05:
        return
    for eps in (0.25, 0.5, 1.0):
        delta = gap(m1, f1, eps) - gap(m2, f2, eps)
        if (delta > 0) != (raw > 0):
            return  # smoothing may legitimately flip near-zero margins
    assert (gap(m1, f1, 0.5) - gap(m2, f2, 0.5) > 0) == (raw > 0)


def _world():
    store = make_store(
        {
            "she": [1.0, 0.0],
            "he": [-1.0, 0.0],
            "king": [-0.8, 0.2],
            "queen": [0.8, 0.2],
            "law": [0.05, 1.0],
            "rock": [-0.05, 1.0],
        }
    )
    direction = extract_direction(
        store, DefinitionalPairs((("she", "he"), ("she", "he")))
    )
    docs = [
        Document("dm1", "he he story"),
        Document("dm2", "he him story"),
        Document("df1", "she she story"),
        Document("dn1", "story only"),
    ]
    topics = [Topic("q1", "law"), Topic("q2", "rock")]
    return store, direction, Collection(topics, docs)


def _runs(mapping):
    runs = RunSet()
    for qid, ids in mapping.items():
        runs.add(
            ranked_from_scores(qid, {d: float(len(ids) - i) for i, d in enumerate(ids)})
        )
    return runs


def test_identical_runs_all_neutral():
    store, direction, collection = _world()
    runs = _runs({"q1": ["dm1", "df1"], "q2": ["dn1"]})
    table = delta_gap_analysis(
        runs, runs, collection, store, direction, stops=StopList.empty()
    )
    assert all(r.delta_gap_sign == 0 for r in table.records)
    for row in table.bins:
        if row.n_queries:
            assert row.pct_neutral == pytest.approx(100.0)


def test_hand_fixture_recount():
    store, direction, collection = _world()
    sys_runs = _runs({"q1": ["dm1", "dm2"], "q2": ["df1"]})
    perfect = _runs({"q1": ["dm1", "df1"], "q2": ["df1"]})
    table = delta_gap_analysis(
        sys_runs, perfect, collection, store, direction, stops=StopList.empty()
    )
    recs = {r.query_id: r for r in table.records}
    # q1 sys: m=2, f=0 -> gap 5.0; perfect: m=1, f=1 -> 1.0; male-favoring
    assert recs["q1"].m == 2 and recs["q1"].f == 0
    assert recs["q1"].gap == pytest.approx(5.0)
    assert recs["q1"].delta_gap_sign == 1
    # q2 identical answers -> neutral
    assert recs["q2"].delta_gap_sign == 0
    # g(law) > 0 in bin (0, 0.05]; g(rock) < 0 in bin (-0.05, 0]
    by_bin = {(row.lo, row.hi): row for row in table.bins}
    assert by_bin[(0.0, 0.05)].pct_male == pytest.approx(100.0)
    assert by_bin[(-0.05, 0.0)].pct_neutral == pytest.approx(100.0)


def test_empty_bins_reported_empty():
    store, direction, collection = _world()
    runs = _runs({"q1": ["dm1"], "q2": ["df1"]})
    table = delta_gap_analysis(
        runs, runs, collection, store, direction, stops=StopList.empty()
    )
    empty_rows = [r for r in table.bins if r.n_queries == 0]
    assert empty_rows and all(r.pct_male is None for r in empty_rows)
    tsv = bins_tsv(table)
    assert "empty" in tsv


def test_percentages_sum_to_100():
    store, direction, collection = _world()
    sys_runs = _runs({"q1": ["dm1", "dm2"], "q2": ["df1"]})
    perfect = _runs({"q1": ["df1"], "q2": ["dm1"]})
    table = delta_gap_analysis(
        sys_runs, perfect, collection, store, direction, stops=StopList.empty()
    )
    for row in table.bins:
        if row.n_queries:
            assert row.pct_male + row.pct_female + row.pct_neutral == pytest.approx(
                100.0, abs=1e-9
            )


def test_mismatched_query_sets_error():
    store, direction, collection = _world()
    with pytest.raises(StereotypeError):
        delta_gap_analysis(
            _runs({"q1": ["dm1"]}),
            _runs({"q2": ["dm1"]}),
            collection,
            store,
            direction,
            stops=StopList.empty(),
        )
