"""Command-line surface: one subcommand per experiment plus generic auditing."""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
from importlib import resources
from pathlib import Path

from . import collection as cio
from . import engines, gender, gsr, metrics, stats, stereotype, synthetic
from .embeddings import EmbeddingStore, load_binary, load_text
from .text import StopList, tokenize


def _file_sha(path: str | Path, prefix: int = 12) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()[:prefix]


def _stoplist_sha() -> str:
    data = (resources.files("gsr_audit.data") / "stoplist.txt").read_bytes()
    return hashlib.sha256(data).hexdigest()[:12]


def _load_store(args) -> EmbeddingStore:
    if args.embeddings is None:
        raise SystemExit("error: --embeddings is required for this command")
    loader = load_binary if args.format == "binary" else load_text
    return loader(args.embeddings)


def _load_direction(store: EmbeddingStore, args) -> gender.GenderDirection:
    pairs = gender.load_pairs(args.pairs) if args.pairs else None
    return gender.extract_direction(store, pairs, sign_anchor=args.anchor)


def _header(args, extra: dict | None = None) -> str:
    """Configuration fingerprint block embedded at the top of every report."""
    rows = {
        "command": args.command,
        "stoplist_sha256": _stoplist_sha(),
        "seed": getattr(args, "seed", None),
        "workers": args.workers,
    }
    if getattr(args, "embeddings", None):
        rows["embeddings"] = f"{args.embeddings} sha256:{_file_sha(args.embeddings)}"
    if extra:
        rows.update(extra)
    return "".join(
        f"# {k}\t{v}\n" for k, v in rows.items() if v is not None
    )


def _write(path: str, content: str) -> None:
    Path(path).write_text(content, encoding="utf-8")
    print(f"wrote {path}")


def _add_embedding_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--embeddings", help="embedding file path")
    p.add_argument("--format", choices=("binary", "text"), default="binary")
    p.add_argument("--pairs", help="definitional pairs CSV (default: bundled)")
    p.add_argument("--anchor", default="she", help="positive-sign anchor token")


def _fmt_p(p: float, resolution: float) -> str:
    if p <= resolution * 1.5:
        return f"{p:.3e} (at or below test resolution {resolution:.1e})"
    return f"{p:.3e}"


def cmd_direction(args) -> int:
    store = _load_store(args)
    direction = _load_direction(store, args)
    print(f"explained_variance\t{direction.explained_variance_ratio:.4f}")
    print(f"sign_anchor\t{direction.sign_anchor}")
    for fem, mal in direction.pairs_used.pairs:
        gf = gender.genderedness(store, direction, fem)
        gm = gender.genderedness(store, direction, mal)
        print(f"pair\t{fem}={gf:.4f}\t{mal}={gm:.4f}")
    for fem, mal in direction.pairs_dropped:
        print(f"dropped\t{fem},{mal}")
    return 0


def cmd_score(args) -> int:
    store = _load_store(args)
    direction = _load_direction(store, args)
    stops = StopList.default()
    terms = list(args.terms)
    if args.file:
        terms.extend(
            ln.strip()
            for ln in Path(args.file).read_text(encoding="utf-8").splitlines()
            if ln.strip()
        )
    if not terms:
        raise SystemExit("error: no terms given (positional or --file)")
    scored = []
    for term in terms:
        toks = tokenize(term, stops)
        if not toks:
            print(f"{term}\tstopped")
            continue
        for tok in toks:
            g = gender.genderedness(store, direction, tok)
            if g is None:
                print(f"{tok}\tundefined")
            else:
                print(f"{tok}\t{g:.4f}")
                scored.append(g)
    if scored:
        print(f"aggregate\t{sum(scored) / len(scored):.4f}")
    else:
        print("aggregate\tundefined (no scorable terms)")
    return 0


def cmd_queries_report(args) -> int:
    store = _load_store(args)
    direction = _load_direction(store, args)
    stops = StopList.default()
    topics = cio.parse_topics(args.topics)
    scored, undefined = [], []
    for t in topics:
        bag = tokenize(t.title, stops)
        g = gsr.query_genderedness(bag, store, direction)
        if g is None:
            undefined.append(t.id)
        else:
            per_term = ", ".join(
                f"{tok}={gender.genderedness(store, direction, tok):.3f}"
                for tok in bag
                if gender.genderedness(store, direction, tok) is not None
            )
            scored.append((g, t, per_term))
    scored.sort(key=lambda row: (-row[0], row[1].id))
    n = args.n
    if len(scored) < 2 * n:
        print(f"warning: only {len(scored)} scorable topics; emitting all")
    print("== most female (highest g) ==")
    for g, t, per_term in scored[:n]:
        print(f"{t.id}\t{g:.4f}\t{t.title}\t[{per_term}]")
    print("== most male (lowest g) ==")
    for g, t, per_term in scored[-n:][::-1]:
        print(f"{t.id}\t{g:.4f}\t{t.title}\t[{per_term}]")
    if undefined:
        print(f"undefined: {','.join(undefined)}")
    return 0


def _load_collection(args) -> tuple[cio.Collection, cio.Qrels]:
    topics = cio.parse_topics(args.topics)
    if args.docs_format == "trec":
        docs = cio.parse_trec_docs(args.docs)
    else:
        docs = cio.parse_jsonl_docs(args.docs)
    qrels = cio.parse_qrels(args.qrels)
    for w in qrels.warnings:
        print(f"qrels warning: {w}", file=sys.stderr)
    return cio.Collection(topics, docs), qrels


def _build_runs(args, collection, qrels, store, stops) -> engines.RunSet:
    name = args.engine
    if name == "runfile":
        if not args.run:
            raise SystemExit("error: --engine runfile requires --run")
        return engines.read_run(args.run)
    if name == "perfect":
        runs = engines.RunSet(tag="perfect")
        for t in collection.queries:
            runs.add(engines.perfect_engine(qrels, t.id))
        return runs
    if name == "random":
        runs = engines.RunSet(tag="random")
        ids = [d.id for d in collection.documents]
        k = min(1000, len(ids))
        for i, t in enumerate(collection.queries):
            runs.add(engines.random_engine(ids, k, args.seed + i, t.id))
        return runs
    index = engines.build_index(collection.documents, stops)
    runs = engines.RunSet(tag=name)
    scorers = {
        "tfidf": lambda bag, qid: engines.score_tfidf(index, bag, qid),
        "bm25": lambda bag, qid: engines.score_bm25(index, bag, qid),
        "qlm": lambda bag, qid: engines.score_qlm(index, bag, qid),
    }
    if name in scorers:
        for t in collection.queries:
            runs.add(scorers[name](tokenize(t.title, stops), t.id))
        return runs
    scorer = engines.EmbeddingScorer(
        store,
        collection.documents,
        stops,
        index=index,
        self_information=(name == "emb-si"),
    )
    for t in collection.queries:
        runs.add(scorer.score(tokenize(t.title, stops), t.id))
    return runs


def cmd_audit(args) -> int:
    store = _load_store(args)
    direction = _load_direction(store, args)
    stops = StopList.default()
    collection, qrels = _load_collection(args)
    retrieval_store = store
    if args.debias == "regular":
        retrieval_store = gender.debias_regular(
            store, direction, gender.GenderedWordSet.default()
        )
    elif args.debias == "strong":
        retrieval_store = gender.debias_strong(store, direction)
    runs = _build_runs(args, collection, qrels, retrieval_store, stops)
    sys_res, perf_res = gsr.audit(runs, collection, qrels, store, direction, stops)
    header = _header(args, {"engine": args.engine, "debias": args.debias})
    _write(f"{args.out}.report.tsv", header + gsr.report_tsv(sys_res))
    _write(f"{args.out}.perfect.tsv", header + gsr.report_tsv(perf_res))
    _write(f"{args.out}.scatter.csv", gsr.scatter_csv(sys_res))
    rows = []
    for t in collection.queries:
        ranked = runs.lists.get(t.id)
        if ranked is None or not qrels.relevant_docs(t.id):
            continue
        rows.append(
            (
                t.id,
                metrics.average_precision(ranked, qrels, t.id),
                metrics.precision_at(ranked, qrels, t.id),
                metrics.ndcg_at(ranked, qrels, t.id),
            )
        )
    _write(f"{args.out}.metrics.tsv", header + metrics.metrics_tsv(rows))
    print(f"slope\t{sys_res.slope:.6g}")
    print(f"perfect_slope\t{perf_res.slope:.6g}")
    if sys_res.relative_pct is not None:
        print(f"relative_pct\t{sys_res.relative_pct:.4g}")
    return 0


def _print_three(results: dict[str, gsr.GsrResult]) -> None:
    for kind in ("S", "N", "CS"):
        print(f"slope_{kind}\t{results[kind].slope:.6g}")


def cmd_toy(args) -> int:
    store = _load_store(args)
    direction = _load_direction(store, args)
    jobs = synthetic.load_jobs(args.jobs) if args.jobs else None
    _print_three(synthetic.run_toy_gsr(store, direction, jobs))
    return 0


def cmd_synthetic(args) -> int:
    store = _load_store(args)
    direction = _load_direction(store, args)
    jobs = synthetic.load_jobs(args.jobs) if args.jobs else None
    traits = synthetic.load_traits(args.traits) if args.traits else None
    _print_three(synthetic.run_synthetic_gsr(store, direction, jobs, traits))
    return 0


def cmd_parity(args) -> int:
    store = _load_store(args)
    direction = _load_direction(store, args)
    jobs = synthetic.load_jobs(args.jobs) if args.jobs else None
    result = synthetic.parity_experiment(
        store, direction, jobs, n_samples=args.samples, seed=args.seed
    )
    header = _header(args, {"n_samples": result.n_samples, "pearson_r": f"{result.r:.4f}"})
    _write(args.out, header + synthetic.parity_scatter_csv(result))
    print(f"pearson_r\t{result.r:.4f}")
    print(f"max_decomposition_residual\t{result.max_decomposition_residual:.3e}")
    return 0


def _dichotomies(args):
    data = resources.files("gsr_audit.data")
    traits = synthetic.load_traits(args.traits) if args.traits else synthetic.TraitTable.default()
    jobs = synthetic.load_jobs(args.jobs) if args.jobs else synthetic.JobTable.default()

    def clusters(path):
        rows = synthetic._read_csv_rows(path, 2)
        out: dict[str, list[str]] = {}
        for term, cluster in rows:
            out.setdefault(cluster, []).append(term)
        return out

    sa = clusters(data / "science_arts.csv")
    cf = clusters(data / "career_family.csv")
    # (name, female-associated cluster, male-associated cluster)
    return [
        ("communion/agency", list(traits.communion), list(traits.agency)),
        ("arts/science", sa["arts"], sa["science"]),
        ("family/career", cf["family"], cf["career"]),
        ("jobs_f/jobs_m", list(jobs.female_jobs), list(jobs.male_jobs)),
    ]


def cmd_validate(args) -> int:
    store = _load_store(args)
    direction = _load_direction(store, args)
    for name, fem_terms, mal_terms in _dichotomies(args):
        fem = [
            g
            for g in (gender.genderedness(store, direction, t) for t in fem_terms)
            if g is not None
        ]
        mal = [
            g
            for g in (gender.genderedness(store, direction, t) for t in mal_terms)
            if g is not None
        ]
        if not fem or not mal:
            print(f"{name}\tundefined (unresolvable terms)")
            continue
        from math import comb

        n, na = len(fem) + len(mal), len(fem)
        exact = comb(n, na) <= stats.EXACT_PERMUTATION_LIMIT
        resolution = (1 / comb(n, na)) if exact else 1 / (args.trials + 1)
        p = stats.permutation_test_one_tailed(
            fem, mal, trials=args.trials, seed=args.seed
        )
        mean_f = sum(fem) / len(fem)
        mean_m = sum(mal) / len(mal)
        print(
            f"{name}\tmean_female_cluster={mean_f:.4f}\t"
            f"mean_male_cluster={mean_m:.4f}\tp={_fmt_p(p, resolution)}"
        )
    return 0


def cmd_direct(args) -> int:
    store = _load_store(args)
    direction = _load_direction(store, args)
    collection, qrels = _load_collection(args)
    sys_runs = engines.read_run(args.run)
    perfect_runs = engines.RunSet(tag="perfect")
    for qid in sys_runs.lists:
        perfect_runs.add(engines.perfect_engine(qrels, qid))
    table = stereotype.delta_gap_analysis(
        sys_runs, perfect_runs, collection, store, direction, epsilon=args.epsilon
    )
    out = _header(args, {"epsilon": args.epsilon}) + stereotype.bins_tsv(table)
    if args.out:
        _write(args.out, out)
    print(out, end="")
    return 0


def _read_named_values(path) -> dict[str, float]:
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, value = line.split("\t")
        out[name] = float(value)
    return out


def cmd_compare(args) -> int:
    a = _read_named_values(args.report_a)
    b = _read_named_values(args.report_b)
    shared = sorted(set(a) & set(b))
    if len(shared) < 3:
        raise SystemExit("error: need at least 3 shared systems to correlate")
    xs = [a[s] for s in shared]
    ys = [b[s] for s in shared]
    r, rp = stats.pearson(xs, ys)
    rho, sp = stats.spearman(xs, ys)
    print(f"n\t{len(shared)}")
    print(f"pearson_r\t{r:.4f}\tp={rp:.3e}")
    print(f"spearman_rho\t{rho:.4f}\tp={sp:.3e}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gsr-audit",
        description="Audit ranking systems for gender stereotype reinforcement.",
    )
    parser.add_argument(
        "--workers",
        type=int,
        default=os.cpu_count() or 1,
        help="worker pool size (accepted for interface stability; execution "
        "is sequential and deterministic)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("direction", help="extract the gender direction")
    _add_embedding_flags(p)
    p.set_defaults(func=cmd_direction)

    p = sub.add_parser("score", help="genderedness of words or queries")
    _add_embedding_flags(p)
    p.add_argument("terms", nargs="*")
    p.add_argument("--file", help="file with one term per line")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("queries-report", help="rank topics by genderedness")
    _add_embedding_flags(p)
    p.add_argument("--topics", required=True)
    p.add_argument("--n", type=int, default=10)
    p.set_defaults(func=cmd_queries_report)

    p = sub.add_parser("audit", help="GSR audit of a retrieval system")
    _add_embedding_flags(p)
    p.add_argument(
        "--engine",
        required=True,
        choices=("tfidf", "bm25", "qlm", "emb-add", "emb-si", "perfect", "random", "runfile"),
    )
    p.add_argument("--run", help="TREC run file (for --engine runfile)")
    p.add_argument("--topics", required=True)
    p.add_argument("--qrels", required=True)
    p.add_argument("--docs", required=True)
    p.add_argument("--docs-format", choices=("trec", "jsonl"), default="trec")
    p.add_argument("--debias", choices=("none", "regular", "strong"), default="none")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("toy", help="toy collection S/N/CS slopes")
    _add_embedding_flags(p)
    p.add_argument("--jobs")
    p.set_defaults(func=cmd_toy)

    p = sub.add_parser("synthetic", help="synthetic collection S/N/CS slopes")
    _add_embedding_flags(p)
    p.add_argument("--jobs")
    p.add_argument("--traits")
    p.set_defaults(func=cmd_synthetic)

    p = sub.add_parser("parity", help="GSR vs statistical-parity sampling")
    _add_embedding_flags(p)
    p.add_argument("--jobs")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="scatter CSV path")
    p.set_defaults(func=cmd_parity)

    p = sub.add_parser("validate", help="cluster means and permutation tests")
    _add_embedding_flags(p)
    p.add_argument("--jobs")
    p.add_argument("--traits")
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("direct", help="delta-gap bin table vs the perfect run")
    _add_embedding_flags(p)
    p.add_argument("--run", required=True)
    p.add_argument("--topics", required=True)
    p.add_argument("--qrels", required=True)
    p.add_argument("--docs", required=True)
    p.add_argument("--docs-format", choices=("trec", "jsonl"), default="trec")
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--out")
    p.set_defaults(func=cmd_direct)

    p = sub.add_parser("compare", help="correlate two per-system report files")
    p.add_argument("report_a")
    p.add_argument("report_b")
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
