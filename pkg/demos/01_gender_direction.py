"""Extract a gender direction and score words along it.

Genderedness g(w) is the cosine of a word vector with the gender
direction; positive means stereotypically female under this library's
sign convention (the anchor "she" projects positively).
"""

from gsr_audit import genderedness

from demo_embeddings import build_demo_store


def main():
    store, direction, jobs, _ = build_demo_store()
    print(f"explained variance of first component: "
          f"{direction.explained_variance_ratio:.3f}")
    print(f"pairs used: {len(direction.pairs_used.pairs)}, "
          f"dropped: {len(direction.pairs_dropped)}")
    print()
    words = ["she", "he", "woman", "man", "nurse", "plumber", "electrician"]
    for w in words:
        g = genderedness(store, direction, w)
        print(f"  g({w:12s}) = {g:+.3f}")
    print()
    print("occupations, most male to most female:")
    scored = sorted(
        (genderedness(store, direction, j.name), j.name) for j in jobs.jobs
    )
    for g, name in scored:
        bar = "#" * int(20 * abs(g))
        side = "F" if g > 0 else "M"
        print(f"  {name:18s} {g:+.3f} {side} {bar}")


if __name__ == "__main__":
    main()
