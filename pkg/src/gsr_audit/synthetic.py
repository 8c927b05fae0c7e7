"""Toy and synthetic collections, simulated engines, and the parity experiment."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .collection import Collection, Document, Topic
from .embeddings import EmbeddingStore
from .engines import RankedItem, RankedList, RunSet
from .gender import GenderDirection
from .gsr import GsrPoint, GsrResult, gsr_slope, list_genderedness, rank_weight
from .stats import pearson
from .text import StopList, document_genderedness, query_genderedness, tokenize


class SyntheticError(ValueError):
    pass


S, N, CS = "S", "N", "CS"
ENGINE_KINDS = (S, N, CS)


@dataclass(frozen=True)
class Job:
    name: str
    polarity: str  # "male" | "female": which group dominates the occupation
    pct_female: float
    pct_male: float

    def __post_init__(self):
        if self.polarity not in ("male", "female"):
            raise SyntheticError(f"bad polarity {self.polarity!r}")
        if not (0 <= self.pct_female <= 100 and 0 <= self.pct_male <= 100):
            raise SyntheticError(f"shares out of range for {self.name!r}")
        if abs(self.pct_female + self.pct_male - 100.0) > 1e-6:
            raise SyntheticError(f"shares do not sum to 100 for {self.name!r}")


@dataclass(frozen=True)
class JobTable:
    jobs: tuple[Job, ...]

    def __post_init__(self):
        names = [j.name for j in self.jobs]
        if len(set(names)) != len(names):
            raise SyntheticError("duplicate job names")
        if len(self.male_jobs) != 10 or len(self.female_jobs) != 10:
            raise SyntheticError("expected 10 male and 10 female occupations")

    @property
    def male_jobs(self) -> tuple[str, ...]:
        return tuple(j.name for j in self.jobs if j.polarity == "male")

    @property
    def female_jobs(self) -> tuple[str, ...]:
        return tuple(j.name for j in self.jobs if j.polarity == "female")

    def polarity(self, job: str) -> str:
        for j in self.jobs:
            if j.name == job:
                return j.polarity
        raise SyntheticError(f"unknown job {job!r}")

    @staticmethod
    def default() -> "JobTable":
        return load_jobs(resources.files("gsr_audit.data") / "jobs.csv")


@dataclass(frozen=True)
class TraitTable:
    agency: tuple[str, ...]
    communion: tuple[str, ...]

    def __post_init__(self):
        if set(self.agency) & set(self.communion):
            raise SyntheticError("agency and communion adjectives must be disjoint")
        if not self.agency or not self.communion:
            raise SyntheticError("both trait lists must be non-empty")

    @property
    def all_adjectives(self) -> tuple[str, ...]:
        return self.agency + self.communion

    @staticmethod
    def default() -> "TraitTable":
        return load_traits(resources.files("gsr_audit.data") / "traits.csv")


def _read_csv_rows(path, n_fields: int) -> list[list[str]]:
    rows = []
    for line in Path(str(path)).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != n_fields or not all(parts):
            raise SyntheticError(f"malformed row in {path}: {line!r}")
        rows.append(parts)
    return rows


def load_jobs(path) -> JobTable:
    jobs = tuple(
        Job(name, pol, float(pf), float(pm))
        for name, pol, pf, pm in _read_csv_rows(path, 4)
    )
    return JobTable(jobs)


def load_traits(path) -> TraitTable:
    agency, communion = [], []
    for adjective, construct in _read_csv_rows(path, 2):
        if construct == "agency":
            agency.append(adjective)
        elif construct == "communion":
            communion.append(adjective)
        else:
            raise SyntheticError(f"unknown construct {construct!r}")
    return TraitTable(tuple(agency), tuple(communion))


PERSONS = ("man", "woman")


def build_toy_collection(jobs: JobTable | None = None) -> Collection:
    """20 one-word queries and 40 'The <person> is a <job>' documents."""
    if jobs is None:
        jobs = JobTable.default()
    queries = [Topic(j.name, j.name) for j in jobs.jobs]
    docs = [
        Document(f"{j.name}_{person}", f"The {person} is a {j.name}")
        for j in jobs.jobs
        for person in PERSONS
    ]
    return Collection(queries, docs)


def build_synthetic_collection(
    jobs: JobTable | None = None, traits: TraitTable | None = None
) -> Collection:
    """20 queries and 'The <job> is <adjective>' documents over all pairings."""
    if jobs is None:
        jobs = JobTable.default()
    if traits is None:
        traits = TraitTable.default()
    queries = [Topic(j.name, j.name) for j in jobs.jobs]
    docs = [
        Document(f"{j.name}_{adj}", f"The {j.name} is {adj}")
        for j in jobs.jobs
        for adj in traits.all_adjectives
    ]
    return Collection(queries, docs)


def _toy_answer(kind: str, job: Job) -> list[str]:
    stereo = "man" if job.polarity == "male" else "woman"
    counter = "woman" if stereo == "man" else "man"
    if kind == S:
        return [f"{job.name}_{stereo}"]
    if kind == CS:
        return [f"{job.name}_{counter}"]
    return [f"{job.name}_man", f"{job.name}_woman"]


def _synthetic_answer(kind: str, job: Job, traits: TraitTable) -> list[str]:
    stereo = traits.agency if job.polarity == "male" else traits.communion
    counter = traits.communion if job.polarity == "male" else traits.agency
    if kind == S:
        picked = stereo
    elif kind == CS:
        picked = counter
    else:
        picked = traits.all_adjectives
    return [f"{job.name}_{adj}" for adj in picked]


def simulate_engine(
    kind: str,
    collection: Collection,
    jobs: JobTable,
    traits: TraitTable | None = None,
) -> RunSet:
    """Stereotypical / neutral / counter-stereotypical reference engine."""
    if kind not in ENGINE_KINDS:
        raise SyntheticError(f"unknown engine kind {kind!r}")
    n_docs = len(collection.documents)
    if n_docs == 2 * len(jobs.jobs):
        make = lambda job: _toy_answer(kind, job)
    elif traits is not None and n_docs == len(jobs.jobs) * len(traits.all_adjectives):
        make = lambda job: _synthetic_answer(kind, job, traits)
    else:
        raise SyntheticError("collection shape matches neither builder")
    runs = RunSet(tag=f"sim_{kind}")
    known = {d.id for d in collection.documents}
    for job in jobs.jobs:
        ids = make(job)
        missing = [d for d in ids if d not in known]
        if missing:
            raise SyntheticError(f"simulated answer names unknown docs {missing}")
        runs.add(
            RankedList(
                job.name,
                [RankedItem(d, float(len(ids) - i), i + 1) for i, d in enumerate(ids)],
            )
        )
    return runs


def gsr_for_runs(
    runs: RunSet,
    collection: Collection,
    store: EmbeddingStore,
    direction: GenderDirection,
    stops: StopList | None = None,
) -> GsrResult:
    """Fit the slope for a run over a qrels-free collection (all queries used)."""
    if stops is None:
        stops = StopList.default()
    docs = collection.doc_map()
    points = []
    skipped = []
    for topic in collection.queries:
        ranked = runs.lists.get(topic.id)
        if ranked is None or not ranked.items:
            skipped.append(topic.id)
            continue
        qbag = tokenize(topic.title, stops)
        gq = query_genderedness(qbag, store, direction)
        texts = [docs[it.doc_id].text for it in ranked.items]
        gl = list_genderedness(texts, qbag, store, direction, stops)
        if gq is None or gl is None:
            skipped.append(topic.id)
            continue
        points.append(GsrPoint(topic.id, gq, gl, len(ranked)))
    if len(points) < 2:
        raise SyntheticError(f"fewer than 2 usable queries (skipped: {skipped})")
    result = gsr_slope(points)
    result.skipped_queries = skipped
    return result


def _run_three(
    collection: Collection,
    jobs: JobTable,
    traits: TraitTable | None,
    store: EmbeddingStore,
    direction: GenderDirection,
    stops: StopList | None,
) -> dict[str, GsrResult]:
    return {
        kind: gsr_for_runs(
            simulate_engine(kind, collection, jobs, traits),
            collection,
            store,
            direction,
            stops,
        )
        for kind in ENGINE_KINDS
    }


def run_toy_gsr(
    store: EmbeddingStore,
    direction: GenderDirection,
    jobs: JobTable | None = None,
    stops: StopList | None = None,
) -> dict[str, GsrResult]:
    if jobs is None:
        jobs = JobTable.default()
    return _run_three(build_toy_collection(jobs), jobs, None, store, direction, stops)


def run_synthetic_gsr(
    store: EmbeddingStore,
    direction: GenderDirection,
    jobs: JobTable | None = None,
    traits: TraitTable | None = None,
    stops: StopList | None = None,
) -> dict[str, GsrResult]:
    if jobs is None:
        jobs = JobTable.default()
    if traits is None:
        traits = TraitTable.default()
    collection = build_synthetic_collection(jobs, traits)
    return _run_three(collection, jobs, traits, store, direction, stops)


@dataclass
class ParityResult:
    """Sampled (GSR, % stereotypical) scatter with its Pearson correlation."""

    gsr: np.ndarray
    pct_stereotypical: np.ndarray
    gsr_s_term: np.ndarray  # stereotypical-partition contribution to each GSR
    gsr_cs_term: np.ndarray
    r: float
    p: float
    seed: int
    n_samples: int

    @property
    def max_decomposition_residual(self) -> float:
        return float(np.max(np.abs(self.gsr - self.gsr_s_term - self.gsr_cs_term)))


@dataclass
class ParityTables:
    """Per-query, per-option precomputation for the four admissible answers.

    Option order: stereotypical only, counter only, (S, CS), (CS, S).
    """

    x: np.ndarray  # query genderedness
    gl: np.ndarray  # (nq, 4) list genderedness
    y_s: np.ndarray  # stereotypical-partition share of gl
    y_cs: np.ndarray
    n_stereo: np.ndarray
    n_total: np.ndarray


def _parity_tables(
    store: EmbeddingStore,
    direction: GenderDirection,
    jobs: JobTable,
    stops: StopList,
) -> ParityTables:
    collection = build_toy_collection(jobs)
    docs = collection.doc_map()
    nq = len(jobs.jobs)
    x = np.empty(nq)
    gl = np.empty((nq, 4))
    y_s = np.empty((nq, 4))
    y_cs = np.empty((nq, 4))
    n_stereo = np.empty((nq, 4))
    n_total = np.empty((nq, 4))
    w1, w2 = rank_weight(1), rank_weight(2)
    for qi, job in enumerate(jobs.jobs):
        qbag = tokenize(job.name, stops)
        gq = query_genderedness(qbag, store, direction)
        if gq is None:
            raise SyntheticError(f"query {job.name!r} has undefined genderedness")
        x[qi] = gq
        stereo = "man" if job.polarity == "male" else "woman"
        counter = "woman" if stereo == "man" else "man"
        g_vals = {}
        for person in (stereo, counter):
            gd = document_genderedness(
                tokenize(docs[f"{job.name}_{person}"].text, stops),
                qbag,
                store,
                direction,
            )
            if gd is None:
                raise SyntheticError(f"document for {job.name!r} has undefined g")
            g_vals[person] = gd
        gs, gc = g_vals[stereo], g_vals[counter]
        options = [
            ([(gs, w1)], None),
            ([(gc, w1)], None),
            ([(gs, w1), (gc, w2)], None),
            ([(gc, w1), (gs, w2)], None),
        ]
        for oi, (weighted, _) in enumerate(options):
            total_w = sum(w for _, w in weighted)
            s_sum = sum(g * w for g, w in weighted if np.sign(g) == np.sign(gq))
            c_sum = sum(g * w for g, w in weighted if np.sign(g) != np.sign(gq))
            y_s[qi, oi] = s_sum / total_w
            y_cs[qi, oi] = c_sum / total_w
            gl[qi, oi] = (s_sum + c_sum) / total_w
            n_stereo[qi, oi] = sum(
                1 for g, _ in weighted if np.sign(g) == np.sign(gq)
            )
            n_total[qi, oi] = len(weighted)
    return ParityTables(x, gl, y_s, y_cs, n_stereo, n_total)


def _solution_stats(
    tables: ParityTables, choices: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(gsr, s_term, cs_term, pct) for each row of option choices."""
    nq = len(tables.x)
    rows = np.arange(nq)
    xc = tables.x - tables.x.mean()
    var = float(xc @ xc) / nq

    def slopes(table: np.ndarray) -> np.ndarray:
        y = table[rows[None, :], choices]
        yc = y - y.mean(axis=1, keepdims=True)
        return (yc @ xc) / (nq * var)

    stereo = tables.n_stereo[rows[None, :], choices].sum(axis=1)
    totals = tables.n_total[rows[None, :], choices].sum(axis=1)
    return (
        slopes(tables.gl),
        slopes(tables.y_s),
        slopes(tables.y_cs),
        100.0 * stereo / totals,
    )


def evaluate_parity_solution(
    store: EmbeddingStore,
    direction: GenderDirection,
    choices,
    jobs: JobTable | None = None,
    stops: StopList | None = None,
) -> tuple[float, float]:
    """(GSR, % stereotypical) of one fixed per-query answer assignment."""
    if jobs is None:
        jobs = JobTable.default()
    if stops is None:
        stops = StopList.default()
    tables = _parity_tables(store, direction, jobs, stops)
    arr = np.asarray(choices, dtype=np.int64).reshape(1, -1)
    if arr.shape[1] != len(jobs.jobs) or arr.min() < 0 or arr.max() > 3:
        raise SyntheticError("choices must assign one of options 0-3 per query")
    gsr_vals, _, _, pct = _solution_stats(tables, arr)
    return float(gsr_vals[0]), float(pct[0])


def parity_experiment(
    store: EmbeddingStore,
    direction: GenderDirection,
    jobs: JobTable | None = None,
    n_samples: int = 10_000,
    seed: int = 0,
    stops: StopList | None = None,
) -> ParityResult:
    """Sample admissible toy answer sets and correlate GSR with parity.

    Per query the four admissible answers are: the stereotypical document
    alone, the counter-stereotypical one alone, or both in either order
    (empty answers are not admissible). A document counts as stereotypical
    when its genderedness shares the sign of the query's. The per-sample
    slope is also split into the two partition contributions; their sum
    reconstructs it identically.
    """
    if n_samples < 100:
        raise SyntheticError("need at least 100 samples")
    if jobs is None:
        jobs = JobTable.default()
    if stops is None:
        stops = StopList.default()
    tables = _parity_tables(store, direction, jobs, stops)
    rng = np.random.default_rng(seed)
    choices = rng.integers(0, 4, size=(n_samples, len(jobs.jobs)))
    gsr_vals, s_terms, cs_terms, pct = _solution_stats(tables, choices)
    r, p = pearson(gsr_vals, pct)
    return ParityResult(gsr_vals, pct, s_terms, cs_terms, r, p, seed, n_samples)


def parity_scatter_csv(result: ParityResult) -> str:
    lines = ["gsr,pct_stereotypical"]
    for g, pc in zip(result.gsr, result.pct_stereotypical):
        lines.append(f"{g:.10g},{pc:.10g}")
    return "\n".join(lines) + "\n"
