"""Command-line pipeline: sim / ingest / analyze / rank / synth.

Every run is deterministic: the same inputs, flags, and seed produce
byte-identical output files regardless of --threads (computation is
single-threaded; the flag is validated and reserved).  Exit codes: 0 success
(all checks passed), 1 input error, 2 verification failure, 3 combinatorial
budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

from . import analytics, expansion, families, interest, synth
from .corpus import CorpusError, build_graph, load_corpus, load_graph, save_graph
from .monoid import LatticeBudgetError, Word, abelian, free

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERIFY = 2
EXIT_BUDGET = 3


class InputError(ValueError):
    pass


def _to_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise InputError(f"not a boolean: {text!r}")


def _s_range(text: str) -> list[int]:
    """Either a single s or an inclusive lo:hi range."""
    if ":" in text:
        lo, hi = text.split(":", 1)
        lo, hi = int(lo), int(hi)
        if lo < 1 or hi < lo:
            raise InputError(f"bad s range {text!r}")
        return list(range(lo, hi + 1))
    s = int(text)
    if s < 1:
        raise InputError("s must be >= 1")
    return [s]


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


def _float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part]


def read_config(path: str | None) -> dict[str, str]:
    """key=value lines; '#' starts a comment; keys use option names with
    underscores (e.g. r_max=100)."""
    if path is None:
        return {}
    cfg: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise InputError(f"{path}:{lineno}: expected key=value")
                key, value = line.split("=", 1)
                cfg[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    return cfg


def _merge(args: argparse.Namespace, spec: dict[str, tuple]) -> dict:
    """Flags beat config, config beats defaults."""
    cfg = read_config(getattr(args, "config", None))
    out = {}
    for key, (conv, default) in spec.items():
        val = getattr(args, key, None)
        if val is None and key in cfg:
            val = conv(cfg[key])
        if val is None:
            val = default
        out[key] = val
    return out


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(["" if v is None else _cell(v) for v in row])


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_jsonl(path: str, records: list[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")


def _ensure_out(out: str) -> str:
    os.makedirs(out, exist_ok=True)
    return out


# --- sim ---

_SIM_SPEC = {
    "regime": (str, None),
    "monoid": (str, "abelian"),
    "n": (int, 1),
    "b": (int, None),
    "k": (int, None),
    "c": (float, None),
    "p": (float, None),
    "big_b": (float, 8.0),
    "big_c": (float, 4.0),
    "s": (_s_range, None),
    "r_max": (int, None),
    "word": (lambda t: t.split(";"), None),
    "sampler": (str, "lex"),
    "trials": (int, 1000),
    "mc_r": (_int_list, [64, 128, 256]),
    "min_halving_rate": (float, 0.99),
    "seed": (int, 0),
    "out": (str, "."),
    "threads": (int, None),
    "word_budget": (int, expansion.DEFAULT_WORD_BUDGET),
    "lattice_budget": (int, expansion.DEFAULT_LATTICE_BUDGET),
}


def _parse_finite_words(texts: list[str], monoid_name: str, n: int) -> list[Word]:
    words = []
    for text in texts:
        text = text.strip()
        if monoid_name == "abelian":
            mults = [int(x) for x in text.split(",")]
            if len(mults) != n:
                raise InputError(f"word {text!r} needs {n} multiplicities")
            words.append(Word(abelian(n), tuple(mults)))
        else:
            words.append(Word(free(n), expansion.letters_of_str(text)))
    return words


def _family_spec(opts: dict) -> families.FamilySpec:
    regime = opts["regime"]
    n = opts["n"]
    r_max = opts["r_max"]
    if regime is None:
        raise InputError("sim needs --regime")
    if regime in ("place", "waring", "double-log", "poly-free", "finite") and r_max is None:
        raise InputError("this regime needs --r-max")
    if regime == "place":
        if opts["b"] is None:
            raise InputError("place notation needs --b")
        return families.FamilySpec.place_notation(opts["b"], n, r_max)
    if regime == "waring":
        if opts["k"] is None:
            raise InputError("power sums need --k")
        return families.FamilySpec.waring(opts["k"], n, r_max)
    if regime == "double-log":
        if opts["b"] is None:
            raise InputError("double-log towers need --b")
        return families.FamilySpec.double_log(opts["b"], r_max)
    if regime == "finite":
        words = _parse_finite_words(opts["word"] or [], opts["monoid"], n)
        mon = abelian(n) if opts["monoid"] == "abelian" else free(n)
        return families.FamilySpec.finite(words, r_max, monoid=mon)
    if regime == "poly-free":
        if opts["c"] is None or opts["p"] is None:
            raise InputError("polynomial density needs --c and --p")
        return families.FamilySpec.poly_density_free(
            opts["c"], opts["p"], n, r_max, seed=opts["seed"], sampler=opts["sampler"])
    if regime == "prob-free":
        return families.FamilySpec.probabilistic_free(
            opts["big_b"], opts["big_c"], n, r_max if r_max is not None else 1, opts["seed"])
    raise InputError(f"unknown regime {regime!r}")


def _bound_rows(report: expansion.BoundReport) -> list[list]:
    rows = []
    for row in report.rows:
        rows.append([
            report.regime, report.params, row.s, row.lower,
            "exact" if row.measured.exact else "at_least", row.measured.value,
            row.upper, row.passed, row.note,
        ])
    return rows


def cmd_sim(args: argparse.Namespace) -> int:
    opts = _merge(args, _SIM_SPEC)
    out = _ensure_out(opts["out"])
    spec = _family_spec(opts)

    if spec.regime == "prob_free":
        return _sim_probabilistic(spec, opts, out)

    if opts["s"] is None:
        raise InputError("sim needs --s (a value or lo:hi range)")
    M = families.build_macro_family(spec)
    try:
        profile = expansion.expansion_profile(
            M, opts["s"], spec.r_max, spec=spec,
            word_budget=opts["word_budget"], lattice_budget=opts["lattice_budget"])
    except expansion.SphereBudgetError as exc:
        _write_jsonl(os.path.join(out, "report.jsonl"), [
            {"format": "macrolab-sim", "version": 1},
            {"status": "budget_exceeded", "largest_completed_radius": exc.largest_completed,
             "budget": exc.budget, "regime": spec.regime},
        ])
        print(f"budget exceeded; largest completed radius {exc.largest_completed}",
              file=sys.stderr)
        return EXIT_BUDGET

    reports = [expansion.verify_bounds(profile, spec)]
    if spec.regime in ("place", "double_log"):
        reports.append(expansion.quasi_exponential_upper_report(
            profile, q=1.0, n=spec.monoid.n))

    _write_csv(
        os.path.join(out, "profile.csv"),
        ["regime", "params", "s", "kind", "value"],
        [[spec.regime, reports[0].params, s, "exact" if v.exact else "at_least", v.value]
         for s, v in sorted(profile.entries.items())],
    )
    _write_csv(
        os.path.join(out, "bounds.csv"),
        ["regime", "params", "s", "lower", "measured_kind", "measured_value",
         "upper", "pass", "note"],
        [row for rep in reports for row in _bound_rows(rep)],
    )
    records = [{"format": "macrolab-sim", "version": 1}]
    for rep in reports:
        records.append({
            "regime": rep.regime, "params": rep.params, "all_passed": rep.all_passed,
            "constants": rep.constants,
        })
    all_passed = all(rep.all_passed for rep in reports)
    records.append({"status": "ok" if all_passed else "bound_violation"})
    _write_jsonl(os.path.join(out, "report.jsonl"), records)
    for rep in reports:
        print(f"{rep.regime}: {'pass' if rep.all_passed else 'FAIL'} "
              f"({len(rep.rows)} rows)")
    return EXIT_OK if all_passed else EXIT_VERIFY


def _sim_probabilistic(spec: families.FamilySpec, opts: dict, out: str) -> int:
    M = families.build_macro_family(spec)
    rates = [
        expansion.sampled_rates(M, r, opts["trials"], opts["seed"])
        for r in opts["mc_r"]
    ]
    fitted_k = expansion.fit_parse_constant(rates)
    _write_csv(
        os.path.join(out, "mc_halving.csv"),
        ["r", "trials", "successes", "rate"],
        [[sr.r, sr.trials, sr.halving_successes, sr.halving_rate] for sr in rates],
    )
    _write_csv(
        os.path.join(out, "mc_parse.csv"),
        ["r", "trial", "token_count"],
        [[sr.r, i, count] for sr in rates for i, count in enumerate(sr.parse_counts)],
    )
    ok = all(sr.halving_rate >= opts["min_halving_rate"] for sr in rates) and all(
        sr.parse_failures == 0 for sr in rates)
    failure_free = [sr.r for sr in rates if sr.halving_successes == sr.trials]
    _write_jsonl(os.path.join(out, "report.jsonl"), [
        {"format": "macrolab-sim", "version": 1},
        {"regime": spec.regime, "params": expansion._params_str(spec),
         "fitted_parse_constant": fitted_k,
         "min_halving_rate": opts["min_halving_rate"],
         "smallest_failure_free_r": min(failure_free) if failure_free else None,
         "rates": [{"r": sr.r, "rate": sr.halving_rate,
                    "parse_failures": sr.parse_failures} for sr in rates],
         "all_passed": ok},
        {"status": "ok" if ok else "bound_violation"},
    ])
    for sr in rates:
        print(f"r={sr.r}: halving rate {sr.halving_rate:.4f}, "
              f"{sr.parse_failures} parse failures")
    print(f"fitted parse constant K={fitted_k:.4f}")
    return EXIT_OK if ok else EXIT_VERIFY


# --- ingest ---

_INGEST_SPEC = {
    "inp": (str, None),
    "format": (str, "corpus"),
    "out": (str, "."),
    "threads": (int, None),
    "seed": (int, 0),
}


def cmd_ingest(args: argparse.Namespace) -> int:
    opts = _merge(args, _INGEST_SPEC)
    if opts["inp"] is None:
        raise InputError("ingest needs --in")
    out = _ensure_out(opts["out"])
    if opts["format"] == "corpus":
        graph = build_graph(load_corpus(opts["inp"]))
    elif opts["format"] == "graph":
        graph = load_graph(opts["inp"])
    else:
        raise InputError(f"unknown ingest format {opts['format']!r}")
    path = os.path.join(out, "graph.jsonl")
    save_graph(graph, path)
    print(f"{len(graph)} elements, {graph.total_edge_weight()} total edge weight -> {path}")
    return EXIT_OK


# --- analyze ---

_ANALYZE_SPEC = {
    "graph": (str, None),
    "out": (str, "."),
    "wrapped_metric": (str, "auto"),
    "bin_log2": (float, 5.0),
    "bin_wrapped": (float, 10.0),
    "bin_depth": (float, 1.0),
    "fit_lo": (float, None),
    "fit_hi": (float, None),
    "filter_percentile": (float, None),
    "filter_kinds": (lambda t: t.split(","), None),
    "full_unwrapped": (_to_bool, False),
    "min_distinct_x": (int, 8),
    "flat_slope": (float, 0.05),
    "min_x_span": (float, 0.0),
    "threads": (int, None),
    "seed": (int, 0),
}


def _resolve_metric(metric: str, metrics: dict) -> str:
    if metric in ("tokens", "refs"):
        return metric
    if metric != "auto":
        raise InputError(f"unknown wrapped metric {metric!r}")
    has_tokens = any(m.wrapped_tokens is not None for m in metrics.values())
    return "tokens" if has_tokens else "refs"


def _wrapped_of(m: analytics.NodeMetrics, metric: str) -> int | None:
    if metric == "tokens":
        if m.generated:
            return None
        return m.wrapped_tokens
    return m.wrapped_refs


def cmd_analyze(args: argparse.Namespace) -> int:
    opts = _merge(args, _ANALYZE_SPEC)
    if opts["graph"] is None:
        raise InputError("analyze needs --graph")
    out = _ensure_out(opts["out"])
    graph = load_graph(opts["graph"])
    if len(graph) == 0:
        raise InputError("graph has no elements")
    cg = analytics.condense_scc(graph)
    if opts["filter_kinds"]:
        cg = analytics.filter_macro_set(
            cg, analytics.FilterPolicy("kind", kinds=frozenset(opts["filter_kinds"])))
    if opts["filter_percentile"] is not None:
        cg = analytics.filter_macro_set(
            cg, analytics.FilterPolicy("indegree_percentile",
                                       percentile=opts["filter_percentile"]))
    metrics = analytics.node_metrics(graph, cg)
    metric_name = _resolve_metric(opts["wrapped_metric"], metrics)

    header = ["name", "kind", "wrapped_tokens", "wrapped_refs", "log2_unwrapped",
              "unwrapped_decimal_digits", "depth"]
    if opts["full_unwrapped"]:
        header.append("unwrapped")
    rows = []
    for name in sorted(metrics):
        m = metrics[name]
        row = [m.name, m.kind, m.wrapped_tokens, m.wrapped_refs,
               m.log2_unwrapped, len(str(m.unwrapped)), m.depth]
        if opts["full_unwrapped"]:
            row.append(m.unwrapped)
        rows.append(row)
    _write_csv(os.path.join(out, "metrics.csv"), header, rows)

    pairs = []
    for name in sorted(metrics):
        m = metrics[name]
        wrapped = _wrapped_of(m, metric_name)
        if wrapped is None:
            continue
        pairs.append((m.depth, wrapped, m.log2_unwrapped))

    def _hist(values, width, path):
        bins = analytics.histogram(values, width)
        _write_csv(path, ["lo", "hi", "count"],
                   [[b.lo, b.hi, b.count] for b in bins])

    _hist([m.log2_unwrapped for m in metrics.values()], opts["bin_log2"],
          os.path.join(out, "hist_log2_unwrapped.csv"))
    _hist([w for _, w, _ in pairs], opts["bin_wrapped"],
          os.path.join(out, "hist_wrapped.csv"))
    _hist([m.depth for m in metrics.values()], opts["bin_depth"],
          os.path.join(out, "hist_depth.csv"))

    curves = {
        "log2_unwrapped_vs_depth": analytics.median_curve((d, u) for d, _, u in pairs),
        "wrapped_vs_depth": analytics.median_curve((d, w) for d, w, _ in pairs),
        "log2_unwrapped_vs_wrapped": analytics.median_curve((w, u) for _, w, u in pairs),
    }
    for name, curve in curves.items():
        _write_csv(os.path.join(out, f"curve_{name}.csv"),
                   ["x", "median", "count"],
                   [[x, m, c] for x, m, c in zip(curve.xs, curve.medians, curve.counts)])

    fit_range = None
    if opts["fit_lo"] is not None or opts["fit_hi"] is not None:
        fit_range = (opts["fit_lo"] if opts["fit_lo"] is not None else -math.inf,
                     opts["fit_hi"] if opts["fit_hi"] is not None else math.inf)
    for name, curve in curves.items():
        scopes = [("full", None)]
        if fit_range is not None:
            scopes.append(("window", fit_range))
        fit_rows = []
        for scope, rng in scopes:
            try:
                fit = analytics.slope_fit(curve, rng)
                fit_rows.append([scope, fit.slope, fit.intercept, fit.r_squared,
                                 fit.x_lo, fit.x_hi, fit.points, ""])
            except analytics.DegenerateFitError as exc:
                fit_rows.append([scope, None, None, None, None, None, 0, str(exc)])
        _write_csv(os.path.join(out, f"fit_{name}.csv"),
                   ["scope", "slope", "intercept", "r_squared", "x_lo", "x_hi",
                    "points", "note"],
                   fit_rows)

    cfg = analytics.ClassifyConfig(opts["min_distinct_x"], opts["flat_slope"],
                                   opts["min_x_span"])
    verdict = analytics.regime_classify(
        curves["log2_unwrapped_vs_depth"], curves["wrapped_vs_depth"],
        curves["log2_unwrapped_vs_wrapped"], cfg)
    _write_csv(os.path.join(out, "regime.csv"),
               ["log2_unwrapped_vs_depth", "wrapped_vs_depth",
                "log2_unwrapped_vs_wrapped", "matches"],
               [[*verdict.labels, ";".join(verdict.matches)]])
    print(f"{len(metrics)} elements ({metric_name} wrapped metric); "
          f"labels {verdict.labels}, matches: {verdict.matches or 'none'}")
    return EXIT_OK


# --- rank ---

_RANK_SPEC = {
    "graph": (str, None),
    "out": (str, "."),
    "alpha": (float, 0.85),
    "beta": (float, 0.5),
    "tolerance": (float, 1e-12),
    "max_iter": (int, 10_000),
    "wrapped_metric": (str, "auto"),
    "sweep": (_float_list, None),
    "alt_deductive": (_to_bool, False),
    "threads": (int, None),
    "seed": (int, 0),
}


def _rank_rows(graph, splits, params, alt) -> list[list]:
    scores = interest.compression_scores(splits, params.beta)
    result = interest.pagerank(graph, {k: v.j0 for k, v in scores.items()}, params)
    order = sorted(result.pi, key=lambda name: (-result.pi[name], name))
    rows = []
    for rank, name in enumerate(order, start=1):
        sc = scores[name]
        row = [name, sc.t0, sc.i0, sc.j0, result.pi[name], rank]
        if alt is not None:
            row.append(alt[name])
        rows.append(row)
    return rows


def cmd_rank(args: argparse.Namespace) -> int:
    opts = _merge(args, _RANK_SPEC)
    if opts["graph"] is None:
        raise InputError("rank needs --graph")
    out = _ensure_out(opts["out"])
    graph = load_graph(opts["graph"])
    cg = analytics.condense_scc(graph)
    metrics = analytics.node_metrics(graph, cg)
    metric_name = _resolve_metric(opts["wrapped_metric"], metrics)
    splits = interest.element_splits(graph, cg, metric_name)
    alt = interest.alt_deductive_scores(splits) if opts["alt_deductive"] else None

    params = interest.RankParams(opts["alpha"], opts["beta"], opts["tolerance"],
                                 opts["max_iter"])
    header = ["name", "t0", "i0", "j0", "pi", "rank"]
    if alt is not None:
        header.append("i0_alt")
    _write_csv(os.path.join(out, "rank.csv"), header,
               _rank_rows(graph, splits, params, alt))
    if opts["sweep"]:
        sweep_rows = []
        for alpha in opts["sweep"]:
            p = interest.RankParams(alpha, opts["beta"], opts["tolerance"],
                                    opts["max_iter"])
            for row in _rank_rows(graph, splits, p, alt):
                sweep_rows.append([alpha, *row])
        _write_csv(os.path.join(out, "rank_sweep.csv"), ["alpha", *header], sweep_rows)
    print(f"ranked {len(graph)} elements ({metric_name} wrapped metric)")
    return EXIT_OK


# --- synth ---

_SYNTH_SPEC = {
    "kind": (str, None),
    "b": (int, 2),
    "height": (int, 10),
    "fanout": (int, 4),
    "nodes": (int, 1000),
    "primitives": (int, 20),
    "macros": (int, 50),
    "max_weight": (int, 5),
    "seed": (int, 0),
    "out": (str, "."),
    "threads": (int, None),
}


def cmd_synth(args: argparse.Namespace) -> int:
    opts = _merge(args, _SYNTH_SPEC)
    out = _ensure_out(opts["out"])
    if opts["kind"] == "hierarchy":
        graph = synth.synth_hierarchy(opts["b"], opts["height"])
    elif opts["kind"] == "flat":
        graph = synth.synth_flat(opts["primitives"], opts["macros"], opts["fanout"],
                                 opts["seed"])
    elif opts["kind"] == "mixed":
        graph = synth.synth_mixed(opts["nodes"], opts["primitives"], opts["fanout"],
                                  opts["max_weight"], opts["seed"])
    else:
        raise InputError("synth needs --kind hierarchy|flat|mixed")
    path = os.path.join(out, "graph.jsonl")
    save_graph(graph, path)
    print(f"{len(graph)} elements -> {path}")
    return EXIT_OK


# --- parser assembly ---


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--out", type=str, default=None, help="output directory")
    sp.add_argument("--seed", type=int, default=None, help="base seed for all streams")
    sp.add_argument("--threads", type=int, default=None,
                    help="parallelism cap (reserved; results never depend on it)")
    sp.add_argument("--config", type=str, default=None,
                    help="key=value defaults file; flags override")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="macrolab",
        description="macro-set expansion simulations and dependency-graph compression analytics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("sim", help="expansion profile and bound checks for one macro family")
    sim.add_argument("--regime", choices=["place", "waring", "double-log", "finite",
                                          "poly-free", "prob-free"])
    sim.add_argument("--monoid", choices=["abelian", "free"], default=None)
    sim.add_argument("--n", type=int, default=None, help="number of primitive generators")
    sim.add_argument("--b", type=int, default=None)
    sim.add_argument("--k", type=int, default=None)
    sim.add_argument("--c", type=float, default=None)
    sim.add_argument("--p", type=float, default=None)
    sim.add_argument("--big-b", dest="big_b", type=float, default=None)
    sim.add_argument("--big-c", dest="big_c", type=float, default=None)
    sim.add_argument("--s", type=_s_range, default=None, help="budget s or lo:hi range")
    sim.add_argument("--r-max", dest="r_max", type=int, default=None)
    sim.add_argument("--word", type=lambda t: t.split(";"), default=None,
                     help="finite-regime definitions, ';'-separated")
    sim.add_argument("--sampler", choices=["lex", "random"], default=None)
    sim.add_argument("--trials", type=int, default=None)
    sim.add_argument("--mc-r", dest="mc_r", type=_int_list, default=None)
    sim.add_argument("--min-halving-rate", dest="min_halving_rate", type=float,
                     default=None)
    sim.add_argument("--word-budget", dest="word_budget", type=int, default=None)
    sim.add_argument("--lattice-budget", dest="lattice_budget", type=int, default=None)
    _add_common(sim)
    sim.set_defaults(func=cmd_sim)

    ing = sub.add_parser("ingest", help="corpus or edge-list file -> canonical graph file")
    ing.add_argument("--in", dest="inp", type=str, default=None)
    ing.add_argument("--format", choices=["corpus", "graph"], default=None)
    _add_common(ing)
    ing.set_defaults(func=cmd_ingest)

    ana = sub.add_parser("analyze", help="metrics, histograms, median curves, regime labels")
    ana.add_argument("--graph", type=str, default=None)
    ana.add_argument("--wrapped-metric", dest="wrapped_metric",
                     choices=["auto", "tokens", "refs"], default=None)
    ana.add_argument("--bin-log2", dest="bin_log2", type=float, default=None)
    ana.add_argument("--bin-wrapped", dest="bin_wrapped", type=float, default=None)
    ana.add_argument("--bin-depth", dest="bin_depth", type=float, default=None)
    ana.add_argument("--fit-lo", dest="fit_lo", type=float, default=None)
    ana.add_argument("--fit-hi", dest="fit_hi", type=float, default=None)
    ana.add_argument("--filter-percentile", dest="filter_percentile", type=float,
                     default=None)
    ana.add_argument("--filter-kinds", dest="filter_kinds",
                     type=lambda t: t.split(","), default=None)
    ana.add_argument("--full-unwrapped", dest="full_unwrapped", action="store_const",
                     const=True, default=None)
    ana.add_argument("--min-distinct-x", dest="min_distinct_x", type=int, default=None)
    ana.add_argument("--flat-slope", dest="flat_slope", type=float, default=None)
    ana.add_argument("--min-x-span", dest="min_x_span", type=float, default=None)
    _add_common(ana)
    ana.set_defaults(func=cmd_analyze)

    rank = sub.add_parser("rank", help="compression scores and walk-based ranking")
    rank.add_argument("--graph", type=str, default=None)
    rank.add_argument("--alpha", type=float, default=None)
    rank.add_argument("--beta", type=float, default=None)
    rank.add_argument("--tolerance", type=float, default=None)
    rank.add_argument("--max-iter", dest="max_iter", type=int, default=None)
    rank.add_argument("--wrapped-metric", dest="wrapped_metric",
                      choices=["auto", "tokens", "refs"], default=None)
    rank.add_argument("--sweep", type=_float_list, default=None,
                      help="comma-separated alphas for a sweep file")
    rank.add_argument("--alt-deductive", dest="alt_deductive", action="store_const",
                      const=True, default=None,
                      help="add the unwrapped body-to-signature ratio column")
    _add_common(rank)
    rank.set_defaults(func=cmd_rank)

    syn = sub.add_parser("synth", help="generate a synthetic corpus graph")
    syn.add_argument("--kind", choices=["hierarchy", "flat", "mixed"], default=None)
    syn.add_argument("--b", type=int, default=None)
    syn.add_argument("--height", type=int, default=None)
    syn.add_argument("--fanout", type=int, default=None)
    syn.add_argument("--nodes", type=int, default=None)
    syn.add_argument("--primitives", type=int, default=None)
    syn.add_argument("--macros", type=int, default=None)
    syn.add_argument("--max-weight", dest="max_weight", type=int, default=None)
    _add_common(syn)
    syn.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, CorpusError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (expansion.SphereBudgetError, LatticeBudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except interest.PowerIterationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
