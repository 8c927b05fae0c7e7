"""Collections: TREC-style topics, qrels, documents, and a JSONL corpus format."""

from __future__ import annotations

import html
import json
import re
from dataclasses import dataclass, field
from pathlib import Path


class CollectionFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Topic:
    id: str
    title: str


@dataclass(frozen=True)
class Document:
    id: str
    text: str


@dataclass
class Collection:
    queries: list[Topic]
    documents: list[Document]

    def doc_map(self) -> dict[str, Document]:
        return {d.id: d for d in self.documents}


@dataclass
class Qrels:
    """(query_id, doc_id) -> non-negative relevance grade."""

    judgments: dict[tuple[str, str], int] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def grade(self, query_id: str, doc_id: str) -> int:
        return self.judgments.get((query_id, doc_id), 0)

    def relevant_docs(self, query_id: str) -> list[tuple[str, int]]:
        """(doc_id, grade) for grade > 0 under this query."""
        return [
            (doc, grade)
            for (qid, doc), grade in self.judgments.items()
            if qid == query_id and grade > 0
        ]

    def query_ids(self) -> list[str]:
        seen: dict[str, None] = {}
        for qid, _ in self.judgments:
            seen.setdefault(qid, None)
        return list(seen)


_ENTITIES = {"&amp;": "&", "&lt;": "<", "&gt;": ">", "&quot;": '"', "&apos;": "'"}


def _decode_entities(text: str) -> str:
    for ent, ch in _ENTITIES.items():
        text = text.replace(ent, ch)
    return text


_TOP_RE = re.compile(r"<top>(.*?)</top>", re.S | re.I)
_NUM_RE = re.compile(r"<num>\s*(?:Number\s*:)?\s*([^<\n]*)", re.I)
_TITLE_RE = re.compile(r"<title>\s*(?:Topic\s*:)?\s*(.*?)\s*(?=<|\Z)", re.S | re.I)


def parse_topics(path: str | Path) -> list[Topic]:
    """Extract (num, title) from TREC topic SGML blocks."""
    text = Path(path).read_text(encoding="utf-8", errors="replace")
    topics = []
    for ordinal, m in enumerate(_TOP_RE.finditer(text), start=1):
        block = m.group(1)
        num_m = _NUM_RE.search(block)
        title_m = _TITLE_RE.search(block)
        num = "".join(re.findall(r"\d", num_m.group(1))) if num_m else ""
        title = " ".join(title_m.group(1).split()) if title_m else ""
        if not num or not title:
            raise CollectionFormatError(f"topic block {ordinal}: missing num or title")
        topics.append(Topic(num, _decode_entities(title)))
    return topics


def parse_qrels(path: str | Path) -> Qrels:
    """Standard 4-column qrels: 'topic 0 docno rel'. Negative grades clamp to 0."""
    qrels = Qrels()
    for lineno, line in enumerate(
        Path(path).read_text(encoding="utf-8", errors="replace").splitlines(), start=1
    ):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 4:
            raise CollectionFormatError(f"{path}:{lineno}: expected 4 fields")
        qid, _, doc, rel = parts
        try:
            grade = int(rel)
        except ValueError as exc:
            raise CollectionFormatError(f"{path}:{lineno}: non-integer grade") from exc
        if grade < 0:
            qrels.warnings.append(f"line {lineno}: negative grade {grade} clamped to 0")
            grade = 0
        if (qid, doc) in qrels.judgments:
            raise CollectionFormatError(f"{path}:{lineno}: duplicate judgment ({qid}, {doc})")
        qrels.judgments[(qid, doc)] = grade
    return qrels


_DOC_RE = re.compile(r"<DOC>(.*?)</DOC>", re.S | re.I)
_DOCNO_RE = re.compile(r"<DOCNO>\s*(.*?)\s*</DOCNO>", re.S | re.I)
_TEXT_RE = re.compile(r"<TEXT>(.*?)</TEXT>", re.S | re.I)


def parse_trec_docs(path: str | Path) -> list[Document]:
    """TREC SGML documents; all <TEXT> segments of a DOC are space-joined."""
    raw = Path(path).read_text(encoding="utf-8", errors="replace")
    docs, seen = [], set()
    for ordinal, m in enumerate(_DOC_RE.finditer(raw), start=1):
        block = m.group(1)
        no = _DOCNO_RE.search(block)
        if not no:
            raise CollectionFormatError(f"doc block {ordinal}: missing DOCNO")
        doc_id = no.group(1).strip()
        if doc_id in seen:
            raise CollectionFormatError(f"duplicate doc id {doc_id!r}")
        seen.add(doc_id)
        segments = [" ".join(t.split()) for t in _TEXT_RE.findall(block)]
        docs.append(Document(doc_id, _decode_entities(" ".join(s for s in segments if s))))
    return docs


def parse_jsonl_docs(path: str | Path) -> list[Document]:
    """One JSON object per line with string fields 'id' and 'text'."""
    docs, seen = [], set()
    for lineno, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CollectionFormatError(f"{path}:{lineno}: invalid JSON") from exc
        if not isinstance(obj, dict) or not isinstance(obj.get("id"), str) or not isinstance(
            obj.get("text"), str
        ):
            raise CollectionFormatError(
                f"{path}:{lineno}: object must have string 'id' and 'text'"
            )
        doc_id = obj["id"].strip()
        if doc_id in seen:
            raise CollectionFormatError(f"{path}:{lineno}: duplicate doc id {doc_id!r}")
        seen.add(doc_id)
        docs.append(Document(doc_id, obj["text"]))
    return docs


def write_jsonl_docs(docs: list[Document], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for d in docs:
            fh.write(json.dumps({"id": d.id, "text": d.text}) + "\n")
