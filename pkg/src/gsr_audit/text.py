"""Tokenization, stop-word handling, and query/document genderedness."""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .embeddings import EmbeddingStore
from .gender import GenderDirection, genderedness, load_token_file

_SPLIT = re.compile(r"[^0-9a-z]+")
_NUMERIC = re.compile(r"^[0-9]+$")


@dataclass(frozen=True)
class StopList:
    tokens: frozenset[str]

    def __contains__(self, token: str) -> bool:
        return token.lower() in self.tokens

    @staticmethod
    def default() -> "StopList":
        words = load_token_file(resources.files("gsr_audit.data") / "stoplist.txt")
        return StopList(frozenset(w.lower() for w in words))

    @staticmethod
    def from_file(path) -> "StopList":
        return StopList(frozenset(w.lower() for w in load_token_file(path)))

    @staticmethod
    def empty() -> "StopList":
        return StopList(frozenset())


def tokenize(text: str, stops: StopList) -> list[str]:
    """Lowercase, split on non-alphanumeric runs, drop pure numbers and stops.

    The result is a bag of words in occurrence order (multiset semantics).
    """
    out = []
    for tok in _SPLIT.split(text.lower()):
        if not tok or _NUMERIC.match(tok) or tok in stops.tokens:
            continue
        out.append(tok)
    return out


def query_genderedness(
    query_bag: list[str], store: EmbeddingStore, direction: GenderDirection
) -> float | None:
    """Mean genderedness over query tokens that resolve to vectors; None if none do."""
    scores = [genderedness(store, direction, t) for t in query_bag]
    scores = [s for s in scores if s is not None]
    if not scores:
        return None
    return sum(scores) / len(scores)


def document_genderedness(
    doc_bag: list[str],
    query_bag: list[str],
    store: EmbeddingStore,
    direction: GenderDirection,
) -> float | None:
    """Mean genderedness over document tokens, with every query-term occurrence removed."""
    qset = set(query_bag)
    remaining = [t for t in doc_bag if t not in qset]
    return query_genderedness(remaining, store, direction)
