"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line with its measurements."""
import itertools
import json
import time
import warnings

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from mediangraph.bench import bench_scenario
from mediangraph.cli import main
from mediangraph.clime import clime_estimate
from mediangraph.errors import Infeasible, NoStableLambda, TieAtRankS
from mediangraph.graph import BinaryGraph, hamming_distance
from mediangraph.median import sparse_median, verify_median_oracle
from mediangraph.pipeline import pilot_lambda, run_pipeline
from mediangraph.rank import concordance_score, kendall_tau_matrix, skeptic_correlation
from mediangraph.synthetic import (
    PATTERNS,
    SyntheticScenario,
    check_transform_constants,
    npn_transform_inverse,
    rng_for,
    simulate,
)


def report(number, title, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}  ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def quadratic_score(x, y):
    sx = np.sign(x[:, None] - x[None, :])
    sy = np.sign(y[:, None] - y[None, :])
    return int(np.triu(sx * sy, 1).sum())


def test_1_kendall_fast_matches_quadratic():
    rng = np.random.default_rng(20)
    start = time.perf_counter()
    mismatches = 0
    tied = 0
    for i in range(1000):
        n = int(rng.integers(2, 501))
        if i % 2:
            x = rng.integers(0, max(2, n // 4), n).astype(float)
            y = rng.integers(0, 5, n).astype(float)
            tied += 1
        else:
            x, y = rng.standard_normal(n), rng.standard_normal(n)
        mismatches += concordance_score(x, y) != quadratic_score(x, y)
    elapsed = time.perf_counter() - start
    report(1, "Kendall O(n log n) == O(n^2) oracle", mismatches == 0 and elapsed < 10,
           f"1000 pairs, {tied} with ties, {mismatches} mismatches, {elapsed:.1f}s")


def random_correlation(rng, d):
    while True:
        a = rng.standard_normal((d, d + 3))
        cov = a @ a.T + 0.5 * np.eye(d)
        s = np.sqrt(np.diag(cov))
        r = cov / np.outer(s, s)
        r = (r + r.T) / 2
        np.fill_diagonal(r, 1.0)
        if np.linalg.cond(r) < 1e3:
            return r


def test_2_clime_lambda_zero_is_inverse():
    rng = np.random.default_rng(21)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        r = random_correlation(rng, int(rng.integers(2, 11)))
        worst = max(worst, float(np.max(np.abs(np.asarray(clime_estimate(r, 0.0)) - np.linalg.inv(r)))))
    elapsed = time.perf_counter() - start
    report(2, "CLIME(R, 0) == inv(R)", worst <= 1e-6 and elapsed < 30,
           f"50 matrices d<=10, max error {worst:.2e}, {elapsed:.1f}s")


def test_3_clime_feasibility_and_shrinkage():
    rng = np.random.default_rng(22)
    grid = np.linspace(0.0, 0.9, 10)
    matrices = [random_correlation(rng, 8) for _ in range(5)]
    matrices += [np.asarray(skeptic_correlation(rng.standard_normal((40, 10)))) for _ in range(5)]
    worst_violation = -np.inf
    monotone = True
    solves = 0
    for r in matrices:
        previous = None
        for lam in grid:
            try:
                est = clime_estimate(r, lam)
            except Infeasible:  # small lambda on an indefinite sample matrix
                continue
            solves += 1
            resid = np.max(np.abs(r @ est.raw - np.eye(r.shape[0])), axis=0)
            worst_violation = max(worst_violation, float(np.max(resid - lam)))
            if previous is not None and np.any(est.objective > previous + 1e-9):
                monotone = False
            previous = est.objective
    ok = worst_violation <= 1e-8 and monotone and solves >= 90
    report(3, "CLIME constraints hold and l1 objective shrinks with lambda", ok,
           f"{solves} solves, worst violation {worst_violation:.1e}, monotone={monotone}")


def test_4_median_closed_form_vs_enumeration():
    rng = np.random.default_rng(23)
    start = time.perf_counter()
    agreed = ties_raised = ties_seen = checked = 0
    while checked < 100:
        d = int(rng.integers(2, 7))
        T = int(rng.integers(1, 6))
        pairs = list(itertools.combinations(range(d), 2))
        graphs = [BinaryGraph(d, frozenset(p for p in pairs if rng.random() < 0.5)) for _ in range(T)]
        s = int(rng.integers(0, len(pairs) + 1))
        counts = sorted((sum(p in g for g in graphs) for p in pairs), reverse=True)
        tie = 0 < s < len(pairs) and counts[s - 1] == counts[s]
        if tie:
            ties_seen += 1
            try:
                sparse_median(graphs, s)
            except TieAtRankS:
                ties_raised += 1
            continue
        checked += 1
        agreed += verify_median_oracle(graphs, s, sparse_median(graphs, s).graph)
    elapsed = time.perf_counter() - start
    ok = agreed == 100 and ties_raised == ties_seen and elapsed < 60
    report(4, "sparse median == exhaustive minimizer; boundary ties raise", ok,
           f"{agreed}/100 agree, {ties_raised}/{ties_seen} tie instances raised, {elapsed:.1f}s")


def test_5_transform_normalization():
    diffs = check_transform_constants()
    z = np.random.default_rng(25).standard_normal(1_000_000)
    moments = {k: (float(np.mean(npn_transform_inverse(k, z))), float(np.var(npn_transform_inverse(k, z))))
               for k in range(1, 6)}
    ok = max(diffs.values()) <= 1e-8 and all(abs(m) <= 0.05 and abs(v - 1) <= 0.05 for m, v in moments.values())
    detail = f"max constant error {max(diffs.values()):.1e}; " + ", ".join(
        f"h{k}: {m:+.4f}/{v:.4f}" for k, (m, v) in moments.items())
    report(5, "transform constants and standardized moments", ok, detail)


def test_6_monotone_invariance_on_sampled_data():
    checked = equal = 0
    for pattern in PATTERNS:
        for seed in range(3):
            sim = simulate(SyntheticScenario(d=20, T=2, n=100, pattern=pattern, seed=seed), keep_latent=True)
            for x, z in zip(sim.datasets, sim.latent):
                checked += 1
                equal += np.array_equal(kendall_tau_matrix(x).taus, kendall_tau_matrix(z).taus)
    report(6, "Kendall matrix of observed == latent data", equal == checked,
           f"{equal}/{checked} datasets identical, 5 patterns x 3 seeds")


def test_7_desk_scale_roc_ordering():
    start = time.perf_counter()
    means = {"kendall": [], "pearson": [], "np": []}
    per_pattern = []
    for pattern in PATTERNS:
        res = bench_scenario(SyntheticScenario(d=40, T=10, n=100, pattern=pattern, perturb_edges=10), range(10))
        for k in means:
            means[k].append(res.mean(k))
        per_pattern.append(f"{pattern} " + "/".join(f"{res.mean(k):.4f}" for k in means))
    auc = {k: float(np.mean(v)) for k, v in means.items()}
    gap = auc["kendall"] - auc["pearson"]
    elapsed = time.perf_counter() - start
    ok = auc["kendall"] > auc["pearson"] > auc["np"] and gap >= 0.02 and elapsed < 900
    report(7, "AUC Kendall > Pearson > NP with Kendall-Pearson gap >= 0.02", ok,
           f"K/P/NP = {auc['kendall']:.4f}/{auc['pearson']:.4f}/{auc['np']:.4f}, gap {gap:.4f}, "
           f"{elapsed:.0f}s; " + "; ".join(per_pattern))


def test_8_exact_median_recovery():
    base = SyntheticScenario(d=20, T=5, n=500, pattern="banded", transform="gaussian")
    pilot = simulate(base.with_seed(1000))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NoStableLambda)
        lam = pilot_lambda(pilot.datasets, "kendall", seed=1000).lam
    recovered = 0
    for seed in range(20):
        sim = simulate(base.with_seed(seed))
        assert sim.s == 19
        res = run_pipeline(sim.datasets, "kendall", 19, tuning=lam, tie_policy="score")
        recovered += res.graph == sim.median_graph
    report(8, "exact median recovery in >= 90% of seeds", recovered >= 18,
           f"{recovered}/20 recovered, pilot lambda {lam:.4f}")


def test_9_compare_is_deterministic(tmp_path):
    data = tmp_path / "data"
    assert main(["simulate", "--pattern", "scalefree", "--d", "15", "--t", "3", "--n", "60", "--perturb-edges", "4",
                 "--seed", "9", "--out", str(data)]) == 0
    args = ["compare", "--truth", str(data / "manifest.json"), "--tie-policy", "score", "--seed", "9",
            "--stars-n", "5", "--lambda-grid", "0.05,0.8,8"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    files = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*") if p.is_file())
    same = [(tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes() for f in files]
    tree_b = sorted(p.relative_to(tmp_path / "b") for p in (tmp_path / "b").rglob("*") if p.is_file())
    report(9, "compare output trees byte-identical", all(same) and files == tree_b and len(files) == 10,
           f"{sum(same)}/{len(files)} files identical (StARS tuning)")


def test_10_hamming_error_nonincreasing_in_n():
    medians, means, lams = [], [], []
    for n in (100, 200, 400):
        base = SyntheticScenario(d=40, T=10, n=n, pattern="banded")
        pilot = simulate(base.with_seed(1000))
        lam = pilot_lambda(pilot.datasets, "kendall", seed=1000).lam
        errs = []
        for seed in range(10):
            sim = simulate(base.with_seed(seed))
            res = run_pipeline(sim.datasets, "kendall", sim.s, tuning=lam, tie_policy="score")
            errs.append(hamming_distance(res.graph, sim.median_graph))
        medians.append(float(np.median(errs)))
        means.append(float(np.mean(errs)))
        lams.append(lam)
    ok = medians[0] >= medians[1] >= medians[2]
    report(10, "median Hamming error nonincreasing over n = 100, 200, 400", ok,
           f"medians {medians}, means {means}, lambdas {[round(v, 4) for v in lams]}")
