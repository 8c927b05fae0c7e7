"""Shared helper: a small synthetic embedding with a planted gender axis.

The real experiments use the published 300-dimensional Google News
word2vec binary (see the top-level README). These demos plant a gender
axis in a low-dimensional random embedding instead, so every script runs
in milliseconds with no downloads; the geometry of the pipeline is the
same, only the learned word statistics are missing.
"""

import numpy as np

from gsr_audit import DefinitionalPairs, EmbeddingStore, extract_direction
from gsr_audit.synthetic import JobTable, TraitTable


def build_demo_store(seed: int = 11, dim: int = 12):
    rng = np.random.default_rng(seed)
    jobs = JobTable.default()
    traits = TraitTable.default()
    pairs = DefinitionalPairs.default()
    vocab = {"man", "woman"}
    for f, m in pairs.pairs:
        vocab |= {f.lower(), m.lower()}
    vocab |= {j.name for j in jobs.jobs}
    vocab |= {a.lower() for a in traits.all_adjectives}
    vocab = sorted(vocab)
    mat = rng.normal(scale=0.5, size=(len(vocab), dim)).astype(np.float32)
    fem = {f.lower() for f, _ in pairs.pairs} | {"woman"}
    mal = {m.lower() for _, m in pairs.pairs} | {"man"}
    fem_lean = set(jobs.female_jobs) | {a.lower() for a in traits.communion}
    mal_lean = set(jobs.male_jobs) | {a.lower() for a in traits.agency}
    for i, tok in enumerate(vocab):
        if tok in fem:
            mat[i, 0] = 2.0 + 3.0 * rng.random()
            mat[i, 1:] *= 0.05
        elif tok in mal:
            mat[i, 0] = -2.0 - 3.0 * rng.random()
            mat[i, 1:] *= 0.05
        elif tok in fem_lean:
            mat[i, 0] = abs(mat[i, 0]) + 0.5
        elif tok in mal_lean:
            mat[i, 0] = -abs(mat[i, 0]) - 0.5
    store = EmbeddingStore([t.encode() for t in vocab], mat, source_tag="demo")
    direction = extract_direction(store, pairs)
    return store, direction, jobs, traits
