"""Direct stereotype: entity-lexicon counts and the delta-gap bin table.

Documents are classified male/female/neutral by majority vote over
intrinsically gendered entity mentions; gap(q) is the smoothed
male-to-female document ratio in a query's results, and the sign of its
difference from the perfect run says which gender a system over-serves.
"""

from gsr_audit import (
    Collection,
    Document,
    EntityLexicons,
    Topic,
    delta_gap_analysis,
    intrinsic_genderedness,
)
from gsr_audit.engines import RunSet, ranked_from_scores
from gsr_audit.stereotype import bins_tsv
from gsr_audit.text import StopList

from demo_embeddings import build_demo_store


def main():
    lex = EntityLexicons.default()
    for text in ("he said he would call him", "my aunt and her sister", "a rock"):
        label = intrinsic_genderedness(text.split(), lex)
        print(f"  {text!r} -> {label}")
    print()

    store, direction, _, _ = build_demo_store()
    docs = [
        Document("d_m1", "the man and his brother work as plumber"),
        Document("d_m2", "he is a carpenter like his father"),
        Document("d_f1", "she is a nurse and a mother"),
        Document("d_n1", "the job pays well"),
    ]
    topics = [Topic("q1", "plumber"), Topic("q2", "nurse")]
    collection = Collection(topics, docs)
    sys_runs = RunSet()
    sys_runs.add(ranked_from_scores("q1", {"d_m1": 2.0, "d_m2": 1.0}))
    sys_runs.add(ranked_from_scores("q2", {"d_f1": 2.0, "d_m2": 1.0}))
    perfect = RunSet()
    perfect.add(ranked_from_scores("q1", {"d_m1": 2.0, "d_f1": 1.0}))
    perfect.add(ranked_from_scores("q2", {"d_f1": 1.0}))
    table = delta_gap_analysis(
        sys_runs, perfect, collection, store, direction, lex,
        stops=StopList.default(),
    )
    for rec in table.records:
        print(f"  {rec.query_id}: m={rec.m} f={rec.f} gap={rec.gap:.2f} "
              f"sign={rec.delta_gap_sign:+d}")
    print()
    print(bins_tsv(table))


if __name__ == "__main__":
    main()
