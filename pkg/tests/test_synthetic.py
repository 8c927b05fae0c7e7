import numpy as np
import pytest

from gsr_audit.synthetic import (
    JobTable,
    SyntheticError,
    TraitTable,
    build_synthetic_collection,
    build_toy_collection,
    evaluate_parity_solution,
    parity_experiment,
    run_synthetic_gsr,
    run_toy_gsr,
    simulate_engine,
)

from conftest import random_gendered_store


def test_default_tables_shape():
    jobs = JobTable.default()
    traits = TraitTable.default()
    assert len(jobs.jobs) == 20
    assert len(jobs.male_jobs) == 10 and len(jobs.female_jobs) == 10
    assert len(traits.agency) == 15 and len(traits.communion) == 12
    assert jobs.polarity("electrician") == "male"
    assert jobs.polarity("nurse") == "female"


def test_toy_collection_shape_and_template():
    c = build_toy_collection()
    assert len(c.queries) == 20 and len(c.documents) == 40
    by_id = c.doc_map()
    assert by_id["plumber_man"].text == "The man is a plumber"
    assert by_id["plumber_woman"].text == "The woman is a plumber"
    containing = [d for d in c.documents if "plumber" in d.text.split()]
    assert len(containing) == 2
    for d in c.documents:
        job, person = d.id.rsplit("_", 1)
        assert d.text == f"The {person} is a {job}"


def test_synthetic_collection_shape():
    c = build_synthetic_collection()
    assert len(c.documents) == 540
    assert any(d.text == "The plumber is hardworking" for d in c.documents)
    per_query = [d for d in c.documents if d.id.startswith("plumber_")]
    assert len(per_query) == 27


def test_builders_deterministic():
    a, b = build_toy_collection(), build_toy_collection()
    assert a.documents == b.documents and a.queries == b.queries


def test_simulate_toy_engines():
    jobs = JobTable.default()
    c = build_toy_collection(jobs)
    s = simulate_engine("S", c, jobs)
    n = simulate_engine("N", c, jobs)
    cs = simulate_engine("CS", c, jobs)
    assert s.lists["plumber"].doc_ids() == ["plumber_man"]
    assert cs.lists["plumber"].doc_ids() == ["plumber_woman"]
    assert n.lists["plumber"].doc_ids() == ["plumber_man", "plumber_woman"]
    assert s.lists["nurse"].doc_ids() == ["nurse_woman"]


def test_simulate_synthetic_engines():
    jobs, traits = JobTable.default(), TraitTable.default()
    c = build_synthetic_collection(jobs, traits)
    cs = simulate_engine("CS", c, jobs, traits)
    assert cs.lists["nurse"].doc_ids() == [f"nurse_{a}" for a in traits.agency]
    n = simulate_engine("N", c, jobs, traits)
    assert len(n.lists["nurse"]) == 27


def test_simulate_rejects_unknown_kind_and_shape():
    jobs = JobTable.default()
    c = build_toy_collection(jobs)
    with pytest.raises(SyntheticError):
        simulate_engine("X", c, jobs)
    with pytest.raises(SyntheticError):
        simulate_engine("S", build_synthetic_collection(jobs), jobs, None)


def test_toy_neutral_slope_is_zero(gendered_fixture):
    store, direction, jobs, _ = gendered_fixture
    results = run_toy_gsr(store, direction, jobs)
    assert abs(results["N"].slope) < 1e-12


def test_synthetic_neutral_slope_is_zero(gendered_fixture):
    store, direction, jobs, traits = gendered_fixture
    results = run_synthetic_gsr(store, direction, jobs, traits)
    assert abs(results["N"].slope) < 1e-12


def test_antisymmetry_on_random_fixtures():
    for seed in range(10):
        store, direction, jobs, traits = random_gendered_store(seed)
        toy = run_toy_gsr(store, direction, jobs)
        assert toy["S"].slope == pytest.approx(-toy["CS"].slope, abs=1e-9)
        syn = run_synthetic_gsr(store, direction, jobs, traits)
        assert syn["S"].slope == pytest.approx(-syn["CS"].slope, abs=1e-9)


def test_aligned_fixture_slope_signs(aligned_fixture):
    store, direction, jobs, _ = aligned_fixture
    toy = run_toy_gsr(store, direction, jobs)
    assert toy["S"].slope > 0 > toy["CS"].slope


def test_parity_boundaries(aligned_fixture):
    store, direction, jobs, _ = aligned_fixture
    toy = run_toy_gsr(store, direction, jobs)
    gsr_all_s, pct_all_s = evaluate_parity_solution(
        store, direction, [0] * 20, jobs
    )
    assert pct_all_s == pytest.approx(100.0)
    assert gsr_all_s == pytest.approx(toy["S"].slope, rel=1e-9)
    _, pct_both = evaluate_parity_solution(store, direction, [2] * 20, jobs)
    assert pct_both == pytest.approx(50.0)


def test_parity_experiment_decomposition_and_reproducibility(aligned_fixture):
    store, direction, jobs, _ = aligned_fixture
    r1 = parity_experiment(store, direction, jobs, n_samples=500, seed=2)
    r2 = parity_experiment(store, direction, jobs, n_samples=500, seed=2)
    assert np.array_equal(r1.gsr, r2.gsr)
    assert r1.max_decomposition_residual < 1e-9
    assert r1.r > 0.5  # aligned fixture: parity tracks GSR
    with pytest.raises(SyntheticError):
        parity_experiment(store, direction, jobs, n_samples=10)
