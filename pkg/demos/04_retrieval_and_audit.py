"""End-to-end audit: index a corpus, retrieve, and compare against the oracle.

The perfect engine returns exactly the judged-relevant documents, so its
slope captures how gendered the relevant material inherently is; a
system's relative GSR is its deviation from that baseline.
"""

from gsr_audit import (
    Collection,
    Qrels,
    RunSet,
    audit,
    average_precision,
    build_index,
    build_toy_collection,
    ndcg_at,
    precision_at,
    score_bm25,
    score_tfidf,
)
from gsr_audit.text import StopList, tokenize

from demo_embeddings import build_demo_store


def main():
    store, direction, jobs, _ = build_demo_store()
    collection = build_toy_collection(jobs)
    stops = StopList.default()
    # the gender-matching document is the judged-relevant one per query
    qrels = Qrels(
        judgments={
            (j.name, f"{j.name}_{'man' if j.polarity == 'male' else 'woman'}"): 1
            for j in jobs.jobs
        }
    )
    index = build_index(collection.documents, stops)
    for name, scorer in (("tfidf", score_tfidf), ("bm25", score_bm25)):
        runs = RunSet(tag=name)
        for topic in collection.queries:
            runs.add(scorer(index, tokenize(topic.title, stops), topic.id))
        sys_res, perf_res = audit(
            runs, collection, qrels, store, direction, stops
        )
        ap = sum(
            average_precision(runs.lists[t.id], qrels, t.id)
            for t in collection.queries
        ) / len(collection.queries)
        print(f"{name}:")
        print(f"  slope         = {sys_res.slope:+.4f}")
        print(f"  perfect slope = {perf_res.slope:+.4f}")
        print(f"  relative GSR  = {sys_res.relative_pct:+.1f}%")
        print(f"  MAP           = {ap:.3f}")
        print()


if __name__ == "__main__":
    main()
