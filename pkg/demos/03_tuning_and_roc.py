"""Choosing lambda with StARS, then comparing the three pipelines by ROC.

Run: python3 demos/03_tuning_and_roc.py   (about a minute)
"""
from mediangraph import SyntheticScenario
from mediangraph.bench import bench_scenario, pilot_lambdas

scenario = SyntheticScenario(d=30, T=6, n=100, pattern="scalefree", perturb_edges=6)

# one StARS run per pipeline on a separate pilot draw fixes lambda for the whole batch
lams = pilot_lambdas(scenario)
print("pilot lambda:", {k: round(v, 4) for k, v in lams.items()})

result = bench_scenario(scenario, seeds=range(3), lambdas=lams)
for kind in ("kendall", "pearson", "np"):
    print(f"{kind:8s} AUC mean {result.mean(kind):.4f}  sd {result.sd(kind):.4f}")
