import math

import numpy as np
import pytest

from gsr_audit.collection import Collection, Qrels
from gsr_audit.engines import RunSet, ranked_from_scores
from gsr_audit.gender import DefinitionalPairs, extract_direction
from gsr_audit.gsr import (
    GsrError,
    GsrPoint,
    audit,
    gsr_slope,
    list_genderedness,
    rank_weight,
    relative_gsr,
)
from gsr_audit.synthetic import build_toy_collection
from gsr_audit.text import StopList

from conftest import make_store


def points_from(xs, ys):
    return [GsrPoint(str(i), x, y, 1) for i, (x, y) in enumerate(zip(xs, ys))]


def test_slope_on_exact_line():
    res = gsr_slope(points_from([0, 1, 2, 3], [1, 3, 5, 7]))
    assert res.slope == pytest.approx(2.0, abs=1e-12)
    assert res.intercept == pytest.approx(1.0, abs=1e-12)


def test_slope_matches_normal_equation_oracle():
    rng = np.random.default_rng(0)
    for _ in range(200):
        n = int(rng.integers(2, 40))
        x = rng.normal(size=n)
        while np.var(x) == 0:
            x = rng.normal(size=n)
        y = rng.normal(size=n)
        res = gsr_slope(points_from(x, y))
        expected = float(np.polyfit(x, y, 1)[0])
        assert res.slope == pytest.approx(expected, rel=1e-10, abs=1e-12)


def test_slope_uses_population_moments():
    x = [0.0, 1.0]
    y = [0.0, 3.0]
    res = gsr_slope(points_from(x, y))
    # cov/var with 1/N moments: ((0-.5)(0-1.5)+(.5)(1.5))/2 over ((.25+.25)/2)
    assert res.sigma2_q == pytest.approx(0.25)
    assert res.slope == pytest.approx(3.0)


def test_slope_degenerate_variance():
    with pytest.raises(GsrError):
        gsr_slope(points_from([1.0, 1.0, 1.0], [0.0, 1.0, 2.0]))
    with pytest.raises(GsrError):
        gsr_slope(points_from([1.0], [0.0]))


def test_relative_gsr():
    sys_res = gsr_slope(points_from([0, 1, 2], [0, 2, 4]))
    perf = gsr_slope(points_from([0, 1, 2], [0, 1, 2]))
    assert relative_gsr(sys_res, perf) == pytest.approx(100.0)
    assert relative_gsr(perf, perf) == pytest.approx(0.0)


def small_world():
    store = make_store(
        {
            "she": [1.0, 0.0],
            "he": [-1.0, 0.0],
            "alpha": [0.8, 0.6],
            "beta": [-0.6, 0.8],
            "gamma": [0.2, 0.9],
        }
    )
    d = extract_direction(store, DefinitionalPairs((("she", "he"), ("she", "he"))))
    return store, d


def test_list_genderedness_log_discount_weights():
    store, d = small_world()
    stops = StopList.empty()
    got = list_genderedness(["alpha", "beta"], [], store, d, stops)
    w1, w2 = rank_weight(1), rank_weight(2)
    g_alpha, g_beta = 0.8, -0.6
    expected = (w1 * g_alpha + w2 * g_beta) / (w1 + w2)
    assert got == pytest.approx(expected, rel=1e-6)  # vectors stored as float32
    assert rank_weight(1) == 1.0
    assert rank_weight(3) == pytest.approx(1 / math.log2(4))


def test_list_genderedness_skips_undefined_and_renormalizes():
    store, d = small_world()
    stops = StopList.empty()
    with_gap = list_genderedness(["alpha", "zzz", "beta"], [], store, d, stops)
    w1, w3 = rank_weight(1), rank_weight(3)
    expected = (w1 * 0.8 + w3 * -0.6) / (w1 + w3)
    assert with_gap == pytest.approx(expected, rel=1e-6)
    assert list_genderedness(["zzz"], [], store, d, stops) is None


def test_audit_perfect_engine_relative_zero(aligned_fixture):
    store, direction, jobs, _ = aligned_fixture
    collection = build_toy_collection(jobs)
    # the stereotyped document is the only relevant one per query, so the
    # perfect slope is nonzero and a perfect-copy system sits at relative 0%
    stereo = {
        j.name: f"{j.name}_{'man' if j.polarity == 'male' else 'woman'}"
        for j in jobs.jobs
    }
    qrels = Qrels(judgments={(q, d): 1 for q, d in stereo.items()})
    runs = RunSet(tag="perfect-copy")
    for j in jobs.jobs:
        runs.add(ranked_from_scores(j.name, {stereo[j.name]: 1.0}))
    sys_res, perf_res = audit(runs, collection, qrels, store, direction)
    assert perf_res.slope != 0.0
    assert sys_res.relative_pct == pytest.approx(0.0, abs=1e-9)
    assert sys_res.slope == pytest.approx(perf_res.slope, rel=1e-12)


def test_audit_truncates_to_relevant_count(aligned_fixture):
    store, direction, jobs, _ = aligned_fixture
    collection = build_toy_collection(jobs)
    # only the man-doc is relevant: system lists get truncated to K=1
    qrels = Qrels(judgments={(j.name, f"{j.name}_man"): 1 for j in jobs.jobs})
    runs = RunSet(tag="both")
    for j in jobs.jobs:
        runs.add(
            ranked_from_scores(
                j.name, {f"{j.name}_man": 2.0, f"{j.name}_woman": 1.0}
            )
        )
    sys_res, perf_res = audit(runs, collection, qrels, store, direction)
    assert all(p.k_used == 1 for p in sys_res.points)
    assert sys_res.slope == pytest.approx(perf_res.slope, rel=1e-12)
