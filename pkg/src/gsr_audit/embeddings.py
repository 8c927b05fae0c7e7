"""Word-vector storage and the word2vec binary / whitespace text file formats."""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class EmbeddingFormatError(ValueError):
    """Raised when an embedding file violates its format contract."""


@dataclass(frozen=True)
class Lookup:
    """Result of a successful token lookup."""

    vector: np.ndarray
    matched: str  # the surface form that hit (exact or lowercased)
    exact: bool


class EmbeddingStore:
    """Immutable token -> dense vector map.

    Tokens are keyed on raw bytes (binary files may contain non-UTF-8 tokens);
    vectors are held as float32 rows and promoted to float64 on access.
    Insertion order is preserved for byte-exact re-serialization.
    """

    def __init__(self, tokens: list[bytes], matrix: np.ndarray, source_tag: str = ""):
        if matrix.ndim != 2:
            raise EmbeddingFormatError("vector matrix must be 2-dimensional")
        if len(tokens) != matrix.shape[0]:
            raise EmbeddingFormatError("token count does not match matrix rows")
        if matrix.shape[0] > 0 and not np.all(np.isfinite(matrix)):
            raise EmbeddingFormatError("non-finite vector component in store")
        self._tokens = list(tokens)
        self._matrix = np.ascontiguousarray(matrix, dtype=np.float32)
        self._matrix.setflags(write=False)
        self.source_tag = source_tag
        self._index: dict[bytes, int] = {}
        for i, tok in enumerate(self._tokens):
            if tok in self._index:
                raise EmbeddingFormatError(
                    f"duplicate token {tok.decode('utf-8', 'replace')!r}"
                )
            self._index[tok] = i

    @property
    def dim(self) -> int:
        return int(self._matrix.shape[1])

    def __len__(self) -> int:
        return len(self._tokens)

    def __contains__(self, token: str | bytes) -> bool:
        return self._key(token) in self._index

    @staticmethod
    def _key(token: str | bytes) -> bytes:
        return token.encode("utf-8") if isinstance(token, str) else token

    def tokens(self) -> list[str]:
        return [t.decode("utf-8", "replace") for t in self._tokens]

    def raw_tokens(self) -> list[bytes]:
        return list(self._tokens)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    def row(self, i: int) -> np.ndarray:
        return self._matrix[i].astype(np.float64)

    def vector(self, token: str | bytes) -> np.ndarray | None:
        """Exact-match vector as float64, or None."""
        i = self._index.get(self._key(token))
        return None if i is None else self.row(i)

    def lookup(self, token: str | bytes) -> Lookup | None:
        """Exact match first, then lowercased fallback. None on miss.

        Never fabricates a vector for an absent token.
        """
        key = self._key(token)
        i = self._index.get(key)
        if i is not None:
            return Lookup(self.row(i), key.decode("utf-8", "replace"), True)
        lowered = key.decode("utf-8", "replace").lower().encode("utf-8")
        if lowered != key:
            i = self._index.get(lowered)
            if i is not None:
                return Lookup(self.row(i), lowered.decode("utf-8"), False)
        return None

    def equal_to(self, other: "EmbeddingStore") -> bool:
        return (
            self._tokens == other._tokens
            and self.dim == other.dim
            and np.array_equal(self._matrix, other._matrix)
        )

    def replace_matrix(self, matrix: np.ndarray, source_tag: str | None = None) -> "EmbeddingStore":
        return EmbeddingStore(
            self._tokens,
            matrix,
            self.source_tag if source_tag is None else source_tag,
        )


def _parse_header(first: bytes, where: str) -> tuple[int, int]:
    parts = first.split()
    if len(parts) != 2:
        raise EmbeddingFormatError(f"{where}: malformed header {first!r}")
    try:
        vocab, dim = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise EmbeddingFormatError(f"{where}: non-numeric header {first!r}") from exc
    if vocab < 0 or dim <= 0:
        raise EmbeddingFormatError(f"{where}: implausible header {first!r}")
    return vocab, dim


def load_binary(path: str | Path) -> EmbeddingStore:
    """Load the word2vec binary format: ASCII header then token<SP>float32[dim] records."""
    path = Path(path)
    data = path.read_bytes()
    nl = data.find(b"\n")
    if nl < 0:
        raise EmbeddingFormatError(f"{path}: missing header line")
    vocab, dim = _parse_header(data[:nl], str(path))
    pos = nl + 1
    vec_bytes = 4 * dim
    tokens: list[bytes] = []
    rows = np.empty((vocab, dim), dtype=np.float32)
    for n in range(vocab):
        sp = data.find(b" ", pos)
        if sp < 0:
            raise EmbeddingFormatError(f"{path}: truncated at entry {n}")
        tokens.append(data[pos:sp])
        pos = sp + 1
        if pos + vec_bytes > len(data):
            raise EmbeddingFormatError(f"{path}: truncated vector at entry {n}")
        rows[n] = np.frombuffer(data, dtype="<f4", count=dim, offset=pos)
        pos += vec_bytes
        if pos < len(data) and data[pos : pos + 1] == b"\n":
            pos += 1
    return EmbeddingStore(tokens, rows, source_tag=str(path))


def save_binary(store: EmbeddingStore, path: str | Path) -> None:
    if len(store) == 0:
        raise EmbeddingFormatError("refusing to save an empty store")
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(f"{len(store)} {store.dim}\n".encode("ascii"))
        matrix = store.matrix
        for i, tok in enumerate(store.raw_tokens()):
            if b" " in tok:
                raise EmbeddingFormatError(
                    f"token {tok!r} contains the binary delimiter (space)"
                )
            fh.write(tok)
            fh.write(b" ")
            fh.write(matrix[i].astype("<f4").tobytes())
            fh.write(b"\n")


def load_text(path: str | Path) -> EmbeddingStore:
    """Load the whitespace text format (fastText .vec); header line optional."""
    path = Path(path)
    try:
        raw_lines = path.read_text(encoding="utf-8").splitlines()
    except UnicodeDecodeError as exc:
        raise EmbeddingFormatError(f"{path}: not valid UTF-8") from exc
    lines = [(i + 1, ln) for i, ln in enumerate(raw_lines) if ln.strip()]
    declared = None
    if lines:
        parts = lines[0][1].split()
        if len(parts) == 2:
            try:
                declared = (int(parts[0]), int(parts[1]))
                lines = lines[1:]
            except ValueError:
                declared = None
    tokens: list[bytes] = []
    vectors: list[np.ndarray] = []
    dim = declared[1] if declared else None
    for lineno, line in lines:
        parts = line.split()
        if dim is None:
            dim = len(parts) - 1
            if dim <= 0:
                raise EmbeddingFormatError(f"{path}:{lineno}: no vector components")
        if len(parts) != dim + 1:
            raise EmbeddingFormatError(
                f"{path}:{lineno}: expected {dim} components, got {len(parts) - 1}"
            )
        try:
            vec = np.array([float(x) for x in parts[1:]], dtype=np.float32)
        except ValueError as exc:
            raise EmbeddingFormatError(f"{path}:{lineno}: non-numeric component") from exc
        tokens.append(parts[0].encode("utf-8"))
        vectors.append(vec)
    if dim is None:
        raise EmbeddingFormatError(f"{path}: empty embedding file")
    if declared is not None and declared[0] != len(tokens):
        raise EmbeddingFormatError(
            f"{path}: header declares {declared[0]} entries, found {len(tokens)}"
        )
    return EmbeddingStore(tokens, np.vstack(vectors), source_tag=str(path))


def save_text(store: EmbeddingStore, path: str | Path) -> None:
    if len(store) == 0:
        raise EmbeddingFormatError("refusing to save an empty store")
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(store)} {store.dim}\n")
        matrix = store.matrix
        for i, tok in enumerate(store.raw_tokens()):
            text = tok.decode("utf-8", "replace")
            comps = " ".join(repr(float(x)) for x in matrix[i])
            fh.write(f"{text} {comps}\n")
