"""Synthetic multi-dataset nonparanormal benchmark.

A scenario draws one sparse median graph from a pattern, turns it into a
latent correlation matrix, and derives ``T`` dataset models by adding
``perturb_edges`` random edges per dataset and overwriting the matching
correlation entries with ``sigma_fill``. Each dataset is sampled from the
latent Gaussian and pushed through five monotone marginal transforms that
repeat with period 5 over the coordinates.

Random streams are keyed as ``SeedSequence([seed, stream, t])`` so that
dataset ``t`` does not depend on how many datasets come after it.
"""
from __future__ import annotations

import configparser
import functools
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import integrate, special

from .errors import InvalidPattern, InvalidPerturbation, NotPositiveDefinite, DataError
from .graph import BinaryGraph, CorrelationMatrix, DatasetCollection, n_pairs

log = logging.getLogger(__name__)

PATTERNS = ("banded", "clustered", "hub", "random", "scalefree")

_STREAM_GRAPH = 0
_STREAM_PERTURB = 1
_STREAM_SAMPLE = 2


def rng_for(seed: int, stream: int, t: int = 0) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), stream, t]))


# -- graph patterns -----------------------------------------------------------

@dataclass(frozen=True)
class GraphPattern:
    """Generator for the median graph.

    Unset parameters take dimension-dependent defaults: ``hub_count =
    ceil(d / 20)`` and ``edge_prob = 3 / d``.
    """

    kind: str
    bandwidth: int = 1
    groups: int = 5
    within_prob: float = 0.3
    hub_count: int | None = None
    edge_prob: float | None = None

    def __post_init__(self):
        kind = self.kind.lower().replace("-", "").replace("_", "")
        if kind not in PATTERNS:
            raise InvalidPattern(f"unknown pattern {self.kind!r}; expected one of {PATTERNS}")
        object.__setattr__(self, "kind", kind)
        if self.bandwidth < 1:
            raise InvalidPattern("bandwidth must be >= 1")
        if self.groups < 1:
            raise InvalidPattern("groups must be >= 1")
        if not 0 < self.within_prob <= 1:
            raise InvalidPattern("within_prob must lie in (0, 1]")
        if self.hub_count is not None and self.hub_count < 1:
            raise InvalidPattern("hub_count must be >= 1")
        if self.edge_prob is not None and not 0 < self.edge_prob <= 1:
            raise InvalidPattern("edge_prob must lie in (0, 1]")

    def describe(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "banded":
            out["bandwidth"] = self.bandwidth
        elif self.kind == "clustered":
            out.update(groups=self.groups, within_prob=self.within_prob)
        elif self.kind == "hub" and self.hub_count is not None:
            out["hub_count"] = self.hub_count
        elif self.kind == "random" and self.edge_prob is not None:
            out["edge_prob"] = self.edge_prob
        return out


def _blocks(d, count):
    return np.array_split(np.arange(d), count)


def generate_pattern(pattern: GraphPattern | str, d: int, rng: np.random.Generator) -> BinaryGraph:
    if isinstance(pattern, str):
        pattern = GraphPattern(pattern)
    if d < 2:
        raise InvalidPattern("patterns need d >= 2")
    kind = pattern.kind
    edges = []
    if kind == "banded":
        edges = [(j, k) for j in range(d) for k in range(j + 1, min(d, j + pattern.bandwidth + 1))]
    elif kind == "clustered":
        if pattern.groups > d:
            raise InvalidPattern(f"{pattern.groups} groups do not fit in d={d}")
        for block in _blocks(d, pattern.groups):
            for a in range(len(block)):
                for b in range(a + 1, len(block)):
                    if rng.random() < pattern.within_prob:
                        edges.append((int(block[a]), int(block[b])))
    elif kind == "hub":
        hubs = pattern.hub_count if pattern.hub_count is not None else math.ceil(d / 20)
        if hubs > d:
            raise InvalidPattern(f"{hubs} hubs do not fit in d={d}")
        for block in _blocks(d, hubs):
            edges.extend((int(block[0]), int(k)) for k in block[1:])
    elif kind == "random":
        p = pattern.edge_prob if pattern.edge_prob is not None else min(1.0, 3.0 / d)
        upper = np.triu(rng.random((d, d)) < p, k=1)
        edges = list(zip(*map(np.ndarray.tolist, np.nonzero(upper))))
    elif kind == "scalefree":
        degree = np.zeros(d)
        edges.append((0, 1))
        degree[:2] = 1
        for node in range(2, d):
            target = int(rng.choice(node, p=degree[:node] / degree[:node].sum()))
            edges.append((target, node))
            degree[target] += 1
            degree[node] += 1
    return BinaryGraph.from_edges(d, edges)


# -- covariance construction -------------------------------------------------

def _to_correlation(cov):
    scale = np.sqrt(np.diag(cov))
    corr = cov / np.outer(scale, scale)
    corr = (corr + corr.T) / 2.0
    np.fill_diagonal(corr, 1.0)
    return corr


def precision_from_graph(g: BinaryGraph, off_value: float = 0.3) -> np.ndarray:
    """``v * A + delta * I`` with ``delta = |lambda_min(v * A)| + 0.1``."""
    if off_value == 0:
        raise DataError("off_value must be nonzero")
    weighted = off_value * g.adjacency(dtype=float)
    delta = abs(np.linalg.eigvalsh(weighted)[0]) + 0.1
    return weighted + delta * np.eye(g.dim)


def covariance_from_graph(g: BinaryGraph, off_value: float = 0.3) -> CorrelationMatrix:
    """Latent correlation whose inverse has exactly the support of ``g``."""
    omega = precision_from_graph(g, off_value)
    return CorrelationMatrix(_to_correlation(np.linalg.inv(omega)))


def repair_correlation(sigma, floor: float = 1e-3) -> tuple[np.ndarray, float]:
    """Clip eigenvalues at ``floor`` and rescale to unit diagonal.

    Returns the repaired matrix and the largest eigenvalue adjustment
    (0.0, with the input returned untouched, when nothing needed fixing).
    """
    sigma = np.asarray(sigma, dtype=float)
    w, v = np.linalg.eigh(sigma)
    if w[0] >= floor:
        return sigma.copy(), 0.0
    clipped = np.maximum(w, floor)
    fixed = (v * clipped) @ v.T
    return _to_correlation(fixed), float(np.max(clipped - w))


def perturb_dataset_model(
    base_graph: BinaryGraph,
    base_sigma,
    k: int,
    sigma_fill: float = 0.1,
    rng: np.random.Generator | None = None,
    eig_floor: float = 1e-3,
) -> tuple[BinaryGraph, CorrelationMatrix]:
    """Add ``k`` random non-edges to the graph and set their correlations to ``sigma_fill``."""
    if k < 0:
        raise InvalidPerturbation("k must be nonnegative")
    sigma = np.array(base_sigma, dtype=float)
    if k == 0:
        return base_graph, CorrelationMatrix(sigma)
    if rng is None:
        raise ValueError("an rng is required when k > 0")
    non_edges = base_graph.complement().sorted_edges()
    if len(non_edges) < k:
        raise InvalidPerturbation(f"only {len(non_edges)} non-edges available, {k} requested")
    picked = [non_edges[i] for i in sorted(rng.choice(len(non_edges), size=k, replace=False))]
    for j, l in picked:
        sigma[j, l] = sigma[l, j] = sigma_fill
    sigma, adjustment = repair_correlation(sigma, eig_floor)
    if adjustment > 0:
        log.info("perturbed correlation repaired: max eigenvalue adjustment %.3e", adjustment)
    graph = BinaryGraph(base_graph.dim, base_graph.edges | frozenset(picked))
    return graph, CorrelationMatrix(sigma)


# -- marginal transforms -----------------------------------------------------

def transform_constants() -> dict[str, float]:
    """Closed forms of the normalizing constants of the five inverse transforms."""
    return {
        "c2": (2.0 / math.pi) ** 0.25,
        "c3": math.sqrt(1.0 / 12.0),
        "c4": math.sqrt(15.0),
        "c5a": math.exp(0.5),
        "c5b": math.sqrt(math.e**2 - math.e),
    }


def _gauss_integral(f):
    phi = lambda t: math.exp(-0.5 * t * t) / math.sqrt(2.0 * math.pi)  # noqa: E731
    # |t| > 40 contributes below 1e-300 for every integrand used here
    val, _ = integrate.quad(lambda t: f(t) * phi(t), -40.0, 40.0, points=(-8.0, -3.0, 0.0, 1.0, 3.0, 8.0),
                            epsabs=1e-14, epsrel=1e-13, limit=400)
    return val


def quadrature_constants() -> dict[str, float]:
    """The same constants evaluated as Gaussian integrals by adaptive quadrature."""
    Phi = lambda t: 0.5 * math.erfc(-t / math.sqrt(2.0))  # noqa: E731
    mean3 = _gauss_integral(Phi)
    mean5 = _gauss_integral(math.exp)
    return {
        "c2": math.sqrt(_gauss_integral(abs)),
        "c3": math.sqrt(_gauss_integral(lambda y: (Phi(y) - mean3) ** 2)),
        "c4": math.sqrt(_gauss_integral(lambda t: t**6)),
        "c5a": mean5,
        "c5b": math.sqrt(_gauss_integral(lambda y: (math.exp(y) - mean5) ** 2)),
    }


@functools.lru_cache(maxsize=None)
def check_transform_constants(tol: float = 1e-8) -> dict[str, float]:
    """Verify the closed forms against quadrature once; return the absolute differences."""
    closed, quad = transform_constants(), quadrature_constants()
    diffs = {key: abs(closed[key] - quad[key]) for key in closed}
    bad = {k: v for k, v in diffs.items() if v > tol}
    if bad:
        raise RuntimeError(f"transform constants disagree with quadrature: {bad}")
    return diffs


_C = transform_constants()


def npn_transform_inverse(k: int, x):
    """Apply the ``k``-th (1..5) standardized monotone transform to latent values ``x``."""
    x = np.asarray(x, dtype=float)
    if k == 1:
        return x.copy()
    if k == 2:
        return np.sign(x) * np.sqrt(np.abs(x)) / _C["c2"]
    if k == 3:
        return (special.ndtr(x) - 0.5) / _C["c3"]
    if k == 4:
        return x**3 / _C["c4"]
    if k == 5:
        return (np.exp(x) - _C["c5a"]) / _C["c5b"]
    raise ValueError(f"transform index must be in 1..5, got {k}")


def transform_index(column: int) -> int:
    """1-based transform index used for 0-based ``column``."""
    return column % 5 + 1


def sample_dataset(sigma_t, n: int, rng: np.random.Generator, transform: str = "npn", return_latent: bool = False):
    """Draw ``n`` rows ``x = h^{-1}(z)`` with ``z ~ N(0, sigma_t)``.

    ``transform="gaussian"`` skips the marginal transforms.
    """
    sigma = np.asarray(sigma_t, dtype=float)
    try:
        chol = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite("latent correlation is not positive definite") from exc
    z = rng.standard_normal((n, sigma.shape[0])) @ chol.T
    if transform == "gaussian":
        x = z.copy()
    elif transform == "npn":
        check_transform_constants()
        x = np.empty_like(z)
        for j in range(z.shape[1]):
            x[:, j] = npn_transform_inverse(transform_index(j), z[:, j])
    else:
        raise ValueError(f"unknown transform {transform!r}")
    return (x, z) if return_latent else x


# -- scenarios ----------------------------------------------------------------

@dataclass(frozen=True)
class SyntheticScenario:
    d: int
    T: int
    n: int
    pattern: GraphPattern = field(default_factory=lambda: GraphPattern("banded"))
    perturb_edges: int = 10
    off_value: float = 0.3
    sigma_fill: float = 0.1
    seed: int = 0
    transform: str = "npn"
    eig_floor: float = 1e-3

    def __post_init__(self):
        if isinstance(self.pattern, str):
            object.__setattr__(self, "pattern", GraphPattern(self.pattern))
        if self.d < 2 or self.T < 1 or self.n < 2:
            raise DataError("scenario needs d >= 2, T >= 1 and n >= 2")
        if self.perturb_edges < 0:
            raise DataError("perturb_edges must be >= 0")
        if not -1 < self.sigma_fill < 1:
            raise DataError("sigma_fill must lie in (-1, 1)")
        if self.off_value == 0:
            raise DataError("off_value must be nonzero")
        if self.transform not in ("npn", "gaussian"):
            raise DataError(f"unknown transform {self.transform!r}")

    def with_seed(self, seed: int) -> "SyntheticScenario":
        return replace(self, seed=seed)

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "T": self.T,
            "n": self.n,
            "pattern": self.pattern.describe(),
            "perturb_edges": self.perturb_edges,
            "off_value": self.off_value,
            "sigma_fill": self.sigma_fill,
            "seed": self.seed,
            "transform": self.transform,
        }


@dataclass(frozen=True)
class SyntheticData:
    scenario: SyntheticScenario
    median_graph: BinaryGraph
    base_sigma: CorrelationMatrix
    graphs: tuple
    sigmas: tuple
    datasets: DatasetCollection
    latent: tuple = ()

    @property
    def s(self) -> int:
        return self.median_graph.edge_count


def simulate(scenario: SyntheticScenario, keep_latent: bool = False) -> SyntheticData:
    base = generate_pattern(scenario.pattern, scenario.d, rng_for(scenario.seed, _STREAM_GRAPH))
    base_sigma = covariance_from_graph(base, scenario.off_value)
    graphs, sigmas, data, latent = [], [], [], []
    for t in range(scenario.T):
        g_t, sigma_t = perturb_dataset_model(
            base, base_sigma, scenario.perturb_edges, scenario.sigma_fill,
            rng_for(scenario.seed, _STREAM_PERTURB, t), scenario.eig_floor,
        )
        x, z = sample_dataset(sigma_t, scenario.n, rng_for(scenario.seed, _STREAM_SAMPLE, t),
                              scenario.transform, return_latent=True)
        graphs.append(g_t)
        sigmas.append(sigma_t)
        data.append(x)
        if keep_latent:
            latent.append(z)
    labels = [f"dataset_{t + 1:02d}" for t in range(scenario.T)]
    return SyntheticData(scenario, base, base_sigma, tuple(graphs), tuple(sigmas),
                         DatasetCollection(tuple(data), labels), tuple(latent))


_PATTERN_KEYS = {"bandwidth": int, "groups": int, "within_prob": float, "hub_count": int, "edge_prob": float}
_SCENARIO_KEYS = {"d": int, "t": int, "n": int, "perturb_edges": int, "off_value": float,
                  "sigma_fill": float, "seed": int, "transform": str}


def scenario_from_mapping(values) -> SyntheticScenario:
    values = {k.lower(): v for k, v in values.items()}
    unknown = set(values) - set(_PATTERN_KEYS) - set(_SCENARIO_KEYS) - {"pattern"}
    if unknown:
        raise DataError(f"unknown scenario keys: {sorted(unknown)}")
    pattern = GraphPattern(values.get("pattern", "banded"),
                           **{k: f(values[k]) for k, f in _PATTERN_KEYS.items() if k in values})
    kw = {("T" if k == "t" else k): f(values[k]) for k, f in _SCENARIO_KEYS.items() if k in values}
    return SyntheticScenario(pattern=pattern, **kw)


def read_scenarios(path) -> dict[str, SyntheticScenario]:
    """Parse an INI-style file: one ``[section]`` of ``key = value`` lines per scenario."""
    parser = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    return {name: scenario_from_mapping(dict(parser[name])) for name in parser.sections()}
