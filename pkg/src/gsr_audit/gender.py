"""Gender subspace extraction, word genderedness scoring, and debiasing."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .embeddings import EmbeddingStore


class GenderGeometryError(ValueError):
    pass


@dataclass(frozen=True)
class DefinitionalPairs:
    """Ordered (female_token, male_token) pairs defining the gender subspace."""

    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self):
        if len(self.pairs) < 2:
            raise GenderGeometryError("need at least 2 definitional pairs")

    @staticmethod
    def default() -> "DefinitionalPairs":
        return load_pairs(resources.files("gsr_audit.data") / "definitional_pairs.csv")


def load_pairs(path) -> DefinitionalPairs:
    """Read a pairs file: one 'female,male' per line, '#' comments allowed."""
    pairs = []
    for line in Path(str(path)).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2 or not all(parts):
            raise GenderGeometryError(f"malformed pair line: {line!r}")
        pairs.append((parts[0], parts[1]))
    return DefinitionalPairs(tuple(pairs))


@dataclass(frozen=True)
class GenderDirection:
    """Unit vector spanning the gender subspace, with extraction provenance."""

    w_g: np.ndarray
    explained_variance_ratio: float
    sign_anchor: str
    pairs_used: DefinitionalPairs
    pairs_dropped: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        norm = float(np.linalg.norm(self.w_g))
        if abs(norm - 1.0) > 1e-9:
            raise GenderGeometryError(f"direction norm {norm} is not 1")


def extract_direction(
    store: EmbeddingStore,
    pairs: DefinitionalPairs | None = None,
    sign_anchor: str = "she",
    center: bool = True,
    normalize_differences: bool = False,
) -> GenderDirection:
    """First principal component of the female-minus-male difference vectors.

    Differences are centered against their mean by default. When the centered
    matrix is numerically zero (all differences identical), the common
    difference direction itself is the subspace, reported with ratio 1.0.
    The result is re-signed so the anchor token projects positively.
    """
    if pairs is None:
        pairs = DefinitionalPairs.default()
    used, dropped, diffs = [], [], []
    for fem, mal in pairs.pairs:
        fv, mv = store.lookup(fem), store.lookup(mal)
        if fv is None or mv is None:
            dropped.append((fem, mal))
            continue
        used.append((fem, mal))
        d = fv.vector - mv.vector
        if normalize_differences:
            n = np.linalg.norm(d)
            if n > 0:
                d = d / n
        diffs.append(d)
    if len(diffs) < 2:
        raise GenderGeometryError(
            f"only {len(diffs)} resolvable pairs (dropped: {dropped})"
        )
    mat = np.array(diffs, dtype=np.float64)
    scale = float(np.max(np.abs(mat)))
    if scale == 0.0:
        raise GenderGeometryError("degenerate pair matrix: all differences zero")
    centered = mat - mat.mean(axis=0) if center else mat
    if np.max(np.abs(centered)) <= 1e-12 * scale:
        # all differences identical: the shared direction carries everything
        w = mat.mean(axis=0)
        w = w / np.linalg.norm(w)
        ratio = 1.0
    else:
        _, s, vt = np.linalg.svd(centered, full_matrices=False)
        w = vt[0]
        ratio = float(s[0] ** 2 / np.sum(s**2))
    anchor = store.lookup(sign_anchor)
    if anchor is None:
        raise GenderGeometryError(f"sign anchor {sign_anchor!r} not in store")
    if float(np.dot(anchor.vector, w)) < 0:
        w = -w
    w = w / np.linalg.norm(w)
    return GenderDirection(
        w_g=w,
        explained_variance_ratio=ratio,
        sign_anchor=sign_anchor,
        pairs_used=DefinitionalPairs(tuple(used)),
        pairs_dropped=tuple(dropped),
    )


def genderedness(
    store: EmbeddingStore, direction: GenderDirection, token: str
) -> float | None:
    """Normalized projection of a token's vector onto the gender direction.

    None when the token is unresolvable or its vector is zero.
    """
    hit = store.lookup(token)
    if hit is None:
        return None
    norm = float(np.linalg.norm(hit.vector))
    if norm == 0.0:
        return None
    return float(np.dot(hit.vector, direction.w_g) / norm)


@dataclass(frozen=True)
class GenderedWordSet:
    """Tokens exempt from regular debiasing (intrinsically gendered words)."""

    tokens: frozenset[str]

    @staticmethod
    def default(pairs: DefinitionalPairs | None = None) -> "GenderedWordSet":
        if pairs is None:
            pairs = DefinitionalPairs.default()
        toks = {t for pair in pairs.pairs for t in pair}
        data = resources.files("gsr_audit.data")
        for name in ("male_entities.txt", "female_entities.txt"):
            toks.update(load_token_file(data / name))
        return GenderedWordSet(frozenset(toks))


def load_token_file(path) -> set[str]:
    """One token per line, '#' comments."""
    out = set()
    for line in Path(str(path)).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.add(line)
    return out


def _exempt_keys(store: EmbeddingStore, exempt: frozenset[str]) -> set[bytes]:
    keys = set()
    for tok in exempt:
        hit = store.lookup(tok)
        if hit is not None:
            keys.add(hit.matched.encode("utf-8"))
    return keys


def debias_regular(
    store: EmbeddingStore, direction: GenderDirection, exempt: GenderedWordSet
) -> EmbeddingStore:
    """Remove the gender component from every non-exempt vector."""
    if not exempt.tokens:
        raise GenderGeometryError("regular debiasing requires a non-empty exempt set")
    return _debias(store, direction, _exempt_keys(store, exempt.tokens))


def debias_strong(store: EmbeddingStore, direction: GenderDirection) -> EmbeddingStore:
    """Remove the gender component from every vector, gendered words included."""
    return _debias(store, direction, set())


def _debias(
    store: EmbeddingStore, direction: GenderDirection, exempt_keys: set[bytes]
) -> EmbeddingStore:
    w = direction.w_g
    n = len(store)
    out32 = np.empty_like(store.matrix)
    # chunked so multi-million-row vocabularies never need a float64 copy
    step = 200_000
    for lo in range(0, n, step):
        block = store.matrix[lo : lo + step].astype(np.float64)
        out32[lo : lo + step] = (block - np.outer(block @ w, w)).astype(np.float32)
    if exempt_keys:
        for i, tok in enumerate(store.raw_tokens()):
            if tok in exempt_keys:
                out32[i] = store.matrix[i]  # bitwise copy of the original row
    return store.replace_matrix(out32, source_tag=store.source_tag + "+debiased")
