"""Cluster separation checks: trait and occupation genderedness.

Each dichotomy pairs a female-stereotyped cluster against a
male-stereotyped one; a one-tailed permutation test asks whether the
female cluster really sits higher along the gender direction.
"""

from gsr_audit import genderedness, permutation_test_one_tailed

from demo_embeddings import build_demo_store


def cluster_scores(store, direction, terms):
    vals = [genderedness(store, direction, t.lower()) for t in terms]
    return [v for v in vals if v is not None]


def main():
    store, direction, jobs, traits = build_demo_store()
    dichotomies = [
        ("communion vs agency", traits.communion, traits.agency),
        ("female vs male jobs", jobs.female_jobs, jobs.male_jobs),
    ]
    for name, fem_terms, mal_terms in dichotomies:
        fem = cluster_scores(store, direction, fem_terms)
        mal = cluster_scores(store, direction, mal_terms)
        p = permutation_test_one_tailed(fem, mal, seed=0)
        print(f"{name}:")
        print(f"  mean g female cluster = {sum(fem) / len(fem):+.3f} (n={len(fem)})")
        print(f"  mean g male cluster   = {sum(mal) / len(mal):+.3f} (n={len(mal)})")
        print(f"  one-tailed permutation p = {p:.2e}")
        print()


if __name__ == "__main__":
    main()
