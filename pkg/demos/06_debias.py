"""Debiasing: remove the gender component and watch rankings move.

Regular debiasing zeroes the gender projection of every word except the
intrinsically gendered exemptions (pronouns, kinship terms, ...); strong
debiasing zeroes everyone's. The Kendall tau distance between a ranking
computed before and after quantifies how much retrieval actually changed.
"""

from gsr_audit import (
    GenderedWordSet,
    build_toy_collection,
    debias_regular,
    debias_strong,
    genderedness,
    kendall_tau_distance,
    score_emb_add,
)
from gsr_audit.text import StopList, tokenize

from demo_embeddings import build_demo_store


def main():
    store, direction, jobs, _ = build_demo_store()
    regular = debias_regular(store, direction, GenderedWordSet.default())
    strong = debias_strong(store, direction)
    print(f"{'word':12s} {'original':>9s} {'regular':>9s} {'strong':>9s}")
    for w in ("she", "man", "nurse", "plumber"):
        row = [genderedness(s, direction, w) for s in (store, regular, strong)]
        print(f"{w:12s} " + " ".join(f"{g:+9.4f}" for g in row))
    print()

    collection = build_toy_collection(jobs)
    stops = StopList.default()
    qbag = tokenize("nurse", stops)
    before = score_emb_add(store, collection.documents, qbag, stops, "nurse")
    after = score_emb_add(strong, collection.documents, qbag, stops, "nurse")
    dist = kendall_tau_distance(before, after, k=10)
    print(f"Kendall tau distance, 'nurse' top-10 before vs after strong "
          f"debias: {dist}")


if __name__ == "__main__":
    main()
