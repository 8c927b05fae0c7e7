import numpy as np
import pytest

from gsr_audit.embeddings import EmbeddingStore
from gsr_audit.gender import DefinitionalPairs, extract_direction
from gsr_audit.synthetic import JobTable, TraitTable


def make_store(vectors: dict[str, list[float]]) -> EmbeddingStore:
    tokens = [t.encode("utf-8") for t in vectors]
    mat = np.array(list(vectors.values()), dtype=np.float32)
    return EmbeddingStore(tokens, mat)


def _vocab(jobs: JobTable, traits: TraitTable, pairs: DefinitionalPairs) -> list[str]:
    vocab: set[str] = {"man", "woman"}
    for f, m in pairs.pairs:
        vocab |= {f.lower(), m.lower()}
    vocab |= {j.name for j in jobs.jobs}
    vocab |= {a.lower() for a in traits.all_adjectives}
    return sorted(vocab)


def random_gendered_store(seed: int, dim: int = 12, aligned: bool = False):
    """Random store whose axis 0 is gender-loaded; female side positive.

    With aligned=True, job and adjective vectors also lean toward their
    stereotyped gender, so stereotype signs match table polarity.
    """
    rng = np.random.default_rng(seed)
    jobs = JobTable.default()
    traits = TraitTable.default()
    pairs = DefinitionalPairs.default()
    vocab = _vocab(jobs, traits, pairs)
    mat = rng.normal(scale=0.5, size=(len(vocab), dim)).astype(np.float32)
    fem = {f.lower() for f, _ in pairs.pairs} | {"woman"}
    mal = {m.lower() for _, m in pairs.pairs} | {"man"}
    fem_jobs = set(jobs.female_jobs)
    mal_jobs = set(jobs.male_jobs)
    fem_adj = {a.lower() for a in traits.communion}
    mal_adj = {a.lower() for a in traits.agency}
    for i, tok in enumerate(vocab):
        # varied magnitudes keep the gender axis dominant after centering;
        # damped off-axis noise keeps the extracted direction close to axis 0
        if tok in fem:
            mat[i, 0] = 2.0 + 3.0 * rng.random()
            mat[i, 1:] *= 0.05
        elif tok in mal:
            mat[i, 0] = -2.0 - 3.0 * rng.random()
            mat[i, 1:] *= 0.05
        elif aligned and tok in fem_jobs | fem_adj:
            mat[i, 0] = abs(mat[i, 0]) + 0.5
        elif aligned and tok in mal_jobs | mal_adj:
            mat[i, 0] = -abs(mat[i, 0]) - 0.5
    store = EmbeddingStore([t.encode() for t in vocab], mat)
    direction = extract_direction(store, pairs)
    return store, direction, jobs, traits


@pytest.fixture
def gendered_fixture():
    return random_gendered_store(7)


@pytest.fixture
def aligned_fixture():
    return random_gendered_store(11, aligned=True)
