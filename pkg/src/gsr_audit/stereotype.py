"""Intrinsic document gender via entity lexicons and the gap / delta-gap table."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .collection import Collection
from .embeddings import EmbeddingStore
from .engines import RunSet
from .gender import GenderDirection, load_token_file
from .text import StopList, query_genderedness, tokenize


class StereotypeError(ValueError):
    pass


MALE, FEMALE, NEUTRAL = "male", "female", "neutral"

DEFAULT_BIN_EDGES = (-0.1, -0.05, 0.0, 0.05, 0.1)


@dataclass(frozen=True)
class EntityLexicons:
    male: frozenset[str]
    female: frozenset[str]

    def __post_init__(self):
        if not self.male or not self.female:
            raise StereotypeError("both lexicons must be non-empty")
        if self.male & self.female:
            raise StereotypeError(
                f"lexicons overlap: {sorted(self.male & self.female)[:5]}"
            )

    @staticmethod
    def default(
        male_names_path=None, female_names_path=None
    ) -> "EntityLexicons":
        data = resources.files("gsr_audit.data")
        male = {t.lower() for t in load_token_file(data / "male_entities.txt")}
        female = {t.lower() for t in load_token_file(data / "female_entities.txt")}
        if male_names_path is not None:
            male |= {t.lower() for t in load_token_file(male_names_path)}
        if female_names_path is not None:
            female |= {t.lower() for t in load_token_file(female_names_path)}
        return EntityLexicons(frozenset(male), frozenset(female))


def intrinsic_genderedness(doc_bag: list[str], lex: EntityLexicons) -> str:
    """Strict majority of lexicon-token occurrences; ties (including 0-0) are neutral."""
    m = sum(1 for t in doc_bag if t.lower() in lex.male)
    f = sum(1 for t in doc_bag if t.lower() in lex.female)
    if m > f:
        return MALE
    if f > m:
        return FEMALE
    return NEUTRAL


def gap(m: int, f: int, epsilon: float = 0.5) -> float:
    """Smoothed male/female representation ratio (m + eps)/(f + eps)."""
    if m < 0 or f < 0:
        raise StereotypeError("counts must be non-negative")
    if epsilon < 0:
        raise StereotypeError("epsilon must be >= 0")
    if epsilon == 0 and f == 0:
        raise StereotypeError("raw gap undefined at f = 0; use epsilon > 0")
    return (m + epsilon) / (f + epsilon)


@dataclass(frozen=True)
class GapRecord:
    query_id: str
    f: int
    m: int
    gap: float
    delta_gap_sign: int  # vs the perfect reference: +1 male-favoring, -1 female


@dataclass(frozen=True)
class BinRow:
    lo: float  # -inf for the leftmost bin
    hi: float  # +inf for the rightmost
    n_queries: int
    pct_male: float | None  # None when the bin is empty
    pct_female: float | None
    pct_neutral: float | None


@dataclass
class DeltaGapTable:
    records: list[GapRecord]
    bins: list[BinRow]


def _count_intrinsic(
    doc_ids: list[str],
    docs: dict[str, "object"],
    lex: EntityLexicons,
    stops: StopList,
    cache: dict[str, str],
) -> tuple[int, int]:
    m = f = 0
    for doc_id in doc_ids:
        doc = docs.get(doc_id)
        if doc is None:
            continue
        label = cache.get(doc_id)
        if label is None:
            label = intrinsic_genderedness(tokenize(doc.text, stops), lex)
            cache[doc_id] = label
        if label == MALE:
            m += 1
        elif label == FEMALE:
            f += 1
    return m, f


def _bin_index(g: float, edges: tuple[float, ...]) -> int:
    """Half-open-from-above bins: (-inf, e0], (e0, e1], ..., (e_last, inf)."""
    for i, edge in enumerate(edges):
        if g <= edge:
            return i
    return len(edges)


def delta_gap_analysis(
    sys_runs: RunSet,
    perfect_runs: RunSet,
    collection: Collection,
    store: EmbeddingStore,
    direction: GenderDirection,
    lex: EntityLexicons | None = None,
    bin_edges: tuple[float, ...] = DEFAULT_BIN_EDGES,
    epsilon: float = 0.5,
    stops: StopList | None = None,
) -> DeltaGapTable:
    """Per-query sgn(delta gap) vs the perfect run, aggregated per g(q) bin."""
    if lex is None:
        lex = EntityLexicons.default()
    if stops is None:
        stops = StopList.default()
    if set(sys_runs.lists) != set(perfect_runs.lists):
        raise StereotypeError("system and perfect runs cover different query sets")
    docs = collection.doc_map()
    titles = {t.id: t.title for t in collection.queries}
    cache: dict[str, str] = {}
    records: list[GapRecord] = []
    tallies: list[dict[str, int]] = [
        {MALE: 0, FEMALE: 0, NEUTRAL: 0} for _ in range(len(bin_edges) + 1)
    ]
    for qid in sorted(sys_runs.lists):
        if qid not in titles:
            raise StereotypeError(f"run query {qid!r} missing from collection")
        m_s, f_s = _count_intrinsic(
            sys_runs.lists[qid].doc_ids(), docs, lex, stops, cache
        )
        m_p, f_p = _count_intrinsic(
            perfect_runs.lists[qid].doc_ids(), docs, lex, stops, cache
        )
        gap_s = gap(m_s, f_s, epsilon)
        gap_p = gap(m_p, f_p, epsilon)
        delta = gap_s - gap_p
        sign = 0 if delta == 0 else (1 if delta > 0 else -1)
        records.append(GapRecord(qid, f_s, m_s, gap_s, sign))
        gq = query_genderedness(tokenize(titles[qid], stops), store, direction)
        if gq is None:
            continue
        label = MALE if sign > 0 else FEMALE if sign < 0 else NEUTRAL
        tallies[_bin_index(gq, bin_edges)][label] += 1
    rows = []
    edges = (float("-inf"),) + tuple(bin_edges) + (float("inf"),)
    for i, tally in enumerate(tallies):
        n = sum(tally.values())
        if n == 0:
            rows.append(BinRow(edges[i], edges[i + 1], 0, None, None, None))
        else:
            rows.append(
                BinRow(
                    edges[i],
                    edges[i + 1],
                    n,
                    100.0 * tally[MALE] / n,
                    100.0 * tally[FEMALE] / n,
                    100.0 * tally[NEUTRAL] / n,
                )
            )
    return DeltaGapTable(records, rows)


def bins_tsv(table: DeltaGapTable) -> str:
    lines = ["bin_lo\tbin_hi\tpct_male\tpct_female\tpct_neutral\tn_queries"]
    for row in table.bins:
        if row.n_queries == 0:
            lines.append(f"{row.lo:g}\t{row.hi:g}\tempty\tempty\tempty\t0")
        else:
            lines.append(
                f"{row.lo:g}\t{row.hi:g}\t{row.pct_male:.4f}\t"
                f"{row.pct_female:.4f}\t{row.pct_neutral:.4f}\t{row.n_queries}"
            )
    return "\n".join(lines) + "\n"
