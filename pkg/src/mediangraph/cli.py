"""Command-line front end: ``simulate``, ``estimate``, ``evaluate``, ``compare``, ``bench``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure,
4 non-identifiable median (tie at rank s under the ``error`` policy).
Failures print one JSON object on stderr.

A ``--config`` file holds ``key = value`` lines in one ``[section]`` per
subcommand; its values become defaults that explicit flags override.
"""
from __future__ import annotations

import argparse
import configparser
import json
import sys
from pathlib import Path

from . import __version__
from .bench import ALL_KINDS, bench_scenario, pilot_lambdas
from .errors import DataError, MedianGraphError, NumericalError, TieAtRankS
from .evaluation import confusion, diff_summary, f1_score, format_diff_table, roc_sweep
from .graph import BinaryGraph, hamming_distance, parse_edge_list, read_edge_list, write_edge_list
from .io import dump_json, load_json, read_datasets, write_dataset_csv
from .median import TiePolicy, median_from_json
from .pipeline import PipelineKind, ranking_source, run_pipeline
from .stars import StarsConfig, default_lambda_grid
from .synthetic import PATTERNS, GraphPattern, SyntheticScenario, read_scenarios, simulate

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERICAL, EXIT_TIE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- argument groups ------------------------------------------------------------

def _scenario_args(p):
    p.add_argument("--pattern", choices=PATTERNS, default="banded")
    p.add_argument("--d", type=int, default=40)
    p.add_argument("--t", type=int, default=10)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--perturb-edges", type=int, default=10)
    p.add_argument("--off-value", type=float, default=0.3)
    p.add_argument("--sigma-fill", type=float, default=0.1)
    p.add_argument("--transform", choices=("npn", "gaussian"), default="npn")
    p.add_argument("--bandwidth", type=int, default=1)
    p.add_argument("--groups", type=int, default=5)
    p.add_argument("--within-prob", type=float, default=0.3)
    p.add_argument("--hub-count", type=int)
    p.add_argument("--edge-prob", type=float)
    p.add_argument("--scenario-file", help="INI file of named scenarios")
    p.add_argument("--scenario", help="section of --scenario-file to use")


def _tuning_args(p):
    p.add_argument("--lambda", dest="lam", type=float, help="fixed lambda for every dataset (skips StARS)")
    p.add_argument("--stars-n", type=int, default=20)
    p.add_argument("--stars-b", type=int)
    p.add_argument("--stars-beta", type=float, default=0.05)
    p.add_argument("--lambda-grid", default="0.01,1,30", help="min,max,count")


def _estimation_args(p):
    _tuning_args(p)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--zero-tol", type=float, default=1e-8)
    p.add_argument("--tie-policy", choices=[t.value for t in TiePolicy], default=TiePolicy.ERROR.value)
    p.add_argument("--threads", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mediangraph", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key=value config file with one section per subcommand")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("simulate", help="write a synthetic scenario: datasets, graphs and manifest")
    _scenario_args(p)
    p.add_argument("--s", type=int, help="expected edge count of the median graph (checked)")
    p.add_argument("--out", required=True)

    p = sub.add_parser("estimate", help="run one pipeline on CSV datasets")
    p.add_argument("--pipeline", choices=[k.value for k in PipelineKind], required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--inputs", nargs="+", required=True)
    p.add_argument("--out", required=True, help="result JSON path")
    p.add_argument("--seed", type=int, default=0)
    _estimation_args(p)

    p = sub.add_parser("evaluate", help="score an estimate, or run an ROC sweep, against a truth graph")
    p.add_argument("--truth", required=True, help="simulate manifest.json or an edge-list file")
    p.add_argument("--estimate", help="result JSON or edge list to score")
    p.add_argument("--pipeline", choices=[k.value for k in PipelineKind], help="run an ROC sweep with this pipeline")
    p.add_argument("--inputs", nargs="+", help="datasets for the ROC sweep (default: those in the manifest)")
    p.add_argument("--out", help="ROC CSV path (default: stdout)")
    p.add_argument("--seed", type=int, default=0)
    _estimation_args(p)

    p = sub.add_parser("compare", help="run all three pipelines; ROC CSVs and an edge-difference table")
    p.add_argument("--truth", required=True, help="simulate manifest.json or an edge-list file")
    p.add_argument("--inputs", nargs="+", help="datasets (default: those in the manifest)")
    p.add_argument("--s", type=int, help="sparsity (default: edge count of the truth graph)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0)
    _estimation_args(p)

    p = sub.add_parser("bench", help="repeat a scenario over seeds and summarize AUC per pipeline")
    _scenario_args(p)
    _tuning_args(p)
    p.add_argument("--seeds", type=int, default=10, help="number of seeds, starting at --seed")
    p.add_argument("--pipelines", default="kendall,pearson,np")
    p.add_argument("--threads", type=int)
    p.add_argument("--out", help="JSON summary path (default: stdout)")
    return parser


# -- helpers ------------------------------------------------------------------

def _prescan(argv):
    """``(config path, subcommand)`` found in ``argv`` without a full parse."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    command = next((tok for tok in rest if tok in COMMANDS), None)
    return known.config, command


def _apply_config(parser, argv):
    """Parse ``argv`` with defaults taken from the config section of the chosen subcommand."""
    config, command = _prescan(argv)
    if config and command:
        cp = configparser.ConfigParser()
        try:
            with open(config, encoding="utf-8") as fh:
                cp.read_file(fh)
        except OSError as exc:
            raise DataError(f"cannot read config {config}: {exc}") from exc
        if cp.has_section(command):
            _set_config_defaults(parser, command, cp[command], config)
    return parser.parse_args(argv)


def _set_config_defaults(parser, command, section, source):
    subparser = parser._subparsers._group_actions[0].choices[command]
    actions = {a.dest: a for a in subparser._actions}
    defaults = {}
    for key, raw in section.items():
        dest = "lam" if key == "lambda" else key.replace("-", "_")
        action = actions.get(dest)
        if action is None:
            raise UsageError(f"unknown key {key!r} in [{command}] of {source}")
        try:
            if action.nargs in ("+", "*"):
                value = raw.split()
            else:
                value = action.type(raw) if action.type else raw
        except ValueError as exc:
            raise UsageError(f"invalid value {raw!r} for {key!r} in {source}") from exc
        if action.choices is not None and value not in action.choices:
            raise UsageError(f"invalid value {raw!r} for {key!r} in {source}")
        action.required = False
        defaults[dest] = value
    subparser.set_defaults(**defaults)


def _scenario_from_args(a) -> SyntheticScenario:
    if a.scenario_file:
        scenarios = read_scenarios(a.scenario_file)
        name = a.scenario or (next(iter(scenarios)) if len(scenarios) == 1 else None)
        if name not in scenarios:
            raise UsageError(f"choose --scenario from {sorted(scenarios)}")
        return scenarios[name]
    pattern = GraphPattern(a.pattern, a.bandwidth, a.groups, a.within_prob, a.hub_count, a.edge_prob)
    return SyntheticScenario(a.d, a.t, a.n, pattern, a.perturb_edges, a.off_value, a.sigma_fill,
                             a.seed, a.transform)


def _stars_from_args(a) -> StarsConfig:
    try:
        lo, hi, count = a.lambda_grid.split(",")
        grid = default_lambda_grid(int(count), float(lo), float(hi))
    except ValueError as exc:
        raise UsageError(f"--lambda-grid expects min,max,count, got {a.lambda_grid!r}") from exc
    return StarsConfig(a.stars_n, a.stars_b, a.stars_beta, grid)


def _tuning_from_args(a):
    return a.lam if a.lam is not None else _stars_from_args(a)


def _load_truth(path):
    """Truth graph plus the dataset paths listed by a simulate manifest (empty for an edge list)."""
    path = Path(path)
    if path.suffix == ".json":
        manifest = load_json(path)
        base = path.parent
        graph = read_edge_list(base / manifest["truth"])
        return graph, [str(base / f) for f in manifest["datasets"]]
    return read_edge_list(path), []


def _load_estimate(path) -> BinaryGraph:
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        return median_from_json(text)[0]
    return parse_edge_list(text)


def _inputs_for(a, manifest_inputs):
    inputs = a.inputs or manifest_inputs
    if not inputs:
        raise UsageError("no datasets: pass --inputs or a simulate manifest as --truth")
    return inputs


def run_manifest(a, kind, inputs, result, outputs) -> dict:
    return {
        "version": __version__,
        "command": a.command,
        "pipeline": PipelineKind(kind).value,
        "seed": a.seed,
        "inputs": [str(p) for p in inputs],
        "s": result.s,
        "lambda": list(result.lambdas),
        "tuning": "fixed" if a.lam is not None else "stars",
        "tie_policy": a.tie_policy,
        "gamma": a.gamma,
        "outputs": [str(p) for p in outputs],
    }


def _edges_path(out: Path) -> Path:
    return out.with_suffix(".edges")


# -- subcommands -----------------------------------------------------------------

def cmd_simulate(a):
    scenario = _scenario_from_args(a)
    sim = simulate(scenario)
    if a.s is not None and a.s != sim.s:
        raise DataError(f"--s {a.s} does not match the generated median graph with {sim.s} edges")
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for t, x in enumerate(sim.datasets):
        name = f"dataset_{t + 1:02d}.csv"
        write_dataset_csv(x, out / name)
        write_edge_list(sim.graphs[t], out / f"dataset_{t + 1:02d}.edges")
        files.append(name)
    write_edge_list(sim.median_graph, out / "truth.edges")
    dump_json({"version": __version__, "scenario": scenario.to_dict(), "s": sim.s,
               "datasets": files, "truth": "truth.edges",
               "dataset_graphs": [f"dataset_{t + 1:02d}.edges" for t in range(len(files))]},
              out / "manifest.json")
    return EXIT_OK


def cmd_estimate(a):
    data = read_datasets(a.inputs)
    result = run_pipeline(data, a.pipeline, a.s, _tuning_from_args(a), a.tie_policy, a.gamma, a.zero_tol,
                          a.seed, a.threads)
    out = Path(a.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(result.to_json(), encoding="utf-8")
    write_edge_list(result.graph, _edges_path(out))
    manifest = out.with_name(out.stem + ".manifest.json")
    dump_json(run_manifest(a, a.pipeline, a.inputs, result, [out, _edges_path(out)]), manifest)
    return EXIT_OK


def cmd_evaluate(a):
    truth, manifest_inputs = _load_truth(a.truth)
    if a.pipeline is None:
        if not a.estimate:
            raise UsageError("evaluate needs --estimate or --pipeline")
        est = _load_estimate(a.estimate)
        tp, fp, fn, tn = confusion(est, truth)
        report = {"tp": tp, "fp": fp, "fn": fn, "tn": tn, "f1": f1_score(est, truth),
                  "hamming": hamming_distance(est, truth)}
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    inputs = _inputs_for(a, manifest_inputs)
    result = run_pipeline(read_datasets(inputs), a.pipeline, truth.edge_count, _tuning_from_args(a),
                          a.tie_policy, a.gamma, a.zero_tol, a.seed, a.threads)
    csv_text = roc_sweep(ranking_source(result, a.pipeline), truth).to_csv()
    if a.out:
        Path(a.out).write_text(csv_text, encoding="utf-8")
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def cmd_compare(a):
    truth, manifest_inputs = _load_truth(a.truth)
    inputs = _inputs_for(a, manifest_inputs)
    data = read_datasets(inputs)
    s = truth.edge_count if a.s is None else a.s
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    results = {}
    for kind in ALL_KINDS:
        result = run_pipeline(data, kind, s, _tuning_from_args(a), a.tie_policy, a.gamma, a.zero_tol,
                              a.seed, a.threads)
        results[kind.value] = result
        (out / f"roc_{kind.value}.csv").write_text(roc_sweep(ranking_source(result, kind), truth).to_csv(),
                                                  encoding="utf-8")
        write_edge_list(result.graph, out / f"median_{kind.value}.edges")
        dump_json(run_manifest(a, kind, inputs, result, [f"roc_{kind.value}.csv", f"median_{kind.value}.edges"]),
                  out / f"manifest_{kind.value}.json")
    rows = []
    names = [k.value for k in ALL_KINDS]
    for i, k1 in enumerate(names):
        for k2 in names[i + 1:]:
            rows.append(("estimate", diff_summary(results[k1].graph, k1, results[k2].graph, k2)))
    for k in names:
        rows.append(("truth", diff_summary(results[k].graph, k, truth, "truth")))
    (out / "diff.txt").write_text(format_diff_table(rows), encoding="utf-8")
    return EXIT_OK


def cmd_bench(a):
    scenario = _scenario_from_args(a)
    kinds = [PipelineKind(k.strip()) for k in a.pipelines.split(",") if k.strip()]
    if a.seeds < 1:
        raise UsageError("--seeds must be >= 1")
    lambdas = {k.value: a.lam for k in kinds} if a.lam is not None else pilot_lambdas(scenario, kinds, _stars_from_args(a))
    result = bench_scenario(scenario, range(scenario.seed, scenario.seed + a.seeds), kinds, lambdas,
                            threads=a.threads)
    text = json.dumps(result.to_dict(), indent=2, sort_keys=True) + "\n"
    if a.out:
        Path(a.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "estimate": cmd_estimate, "evaluate": cmd_evaluate,
            "compare": cmd_compare, "bench": cmd_bench}


def _error_payload(exc, code):
    payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    for attr in ("column", "dataset", "s"):
        value = getattr(exc, attr, None)
        if isinstance(value, int):
            payload[attr] = value + 1 if attr in ("column", "dataset") else value
    if isinstance(exc, TieAtRankS):
        payload["pairs"] = [[j + 1, k + 1] for j, k in exc.pairs]
    return payload


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, sys.argv[1:] if argv is None else list(argv))
        if not args.command:
            raise UsageError("a subcommand is required: " + ", ".join(COMMANDS))
        return COMMANDS[args.command](args)
    except Exception as exc:  # noqa: BLE001 - mapped to an exit code below
        code = _exit_code(exc)
        if code is None:
            raise
        sys.stderr.write(json.dumps(_error_payload(exc, code), sort_keys=True) + "\n")
        return code


def _exit_code(exc):
    if isinstance(exc, UsageError):
        return EXIT_USAGE
    if isinstance(exc, TieAtRankS):
        return EXIT_TIE
    if isinstance(exc, NumericalError):
        return EXIT_NUMERICAL
    if isinstance(exc, (MedianGraphError, OSError, json.JSONDecodeError, KeyError)):
        return EXIT_DATA
    if isinstance(exc, ValueError):
        return EXIT_USAGE
    return None

if __name__ == "__main__":
    sys.exit(main())
