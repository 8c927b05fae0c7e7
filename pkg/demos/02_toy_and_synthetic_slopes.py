"""The toy and synthetic laboratories: three reference engines, three slopes.

A stereotypical engine (S) answers each occupation query with the
gender-matching document, the counter-stereotypical engine (CS) with the
opposite one, and the neutral engine (N) with both. The GSR slope
separates them cleanly: S positive, N zero, CS the exact negative of S.
"""

from gsr_audit import run_synthetic_gsr, run_toy_gsr

from demo_embeddings import build_demo_store


def main():
    store, direction, jobs, traits = build_demo_store()

    print("toy collection ('The <person> is a <job>', 40 docs):")
    toy = run_toy_gsr(store, direction, jobs)
    for kind in ("S", "N", "CS"):
        print(f"  slope_{kind:2s} = {toy[kind].slope:+.4f}")
    print(f"  antisymmetry |S + CS| = "
          f"{abs(toy['S'].slope + toy['CS'].slope):.2e}")

    print()
    print("synthetic collection ('The <job> is <adjective>', 540 docs):")
    syn = run_synthetic_gsr(store, direction, jobs, traits)
    for kind in ("S", "N", "CS"):
        print(f"  slope_{kind:2s} = {syn[kind].slope:+.4f}")


if __name__ == "__main__":
    main()
