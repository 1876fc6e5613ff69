"""Benchmark sweep: four methods across k and epsilon grids, CSV output.

Each (method, k, epsilon, seed) cell solves the same k-medians instance;
cells are seeded independently from the master seed so any execution order
produces identical output files.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .accounting import PrivacyParams
from .data import PointCloud, load_points_csv, make_grid, synth_mixture
from .noise import GUMBEL, LAPLACE, derive_seed
from .objectives import kmedians_oracle
from .streaming import (
    PssmConfig,
    build_guess_ladder,
    pssm,
    threshold_stream_with_tail_fill,
)

METHODS = ("laplace", "gumbel", "nonprivate", "random")

_DATA_TAG = 101
_SHUFFLE_TAG = 102


@dataclass(frozen=True)
class ExperimentConfig:
    """Sweep definition; every field can be set from the config file or CLI."""

    dataset: str = "synthetic"
    components: int = 10
    points_per_component: int = 500
    box_side: float = 20.0
    csv_path: str | None = None
    x_column: str = "x"
    y_column: str = "y"
    max_rows: int | None = None
    grid_side: int = 30
    k_values: tuple[int, ...] = (5, 10, 20)
    epsilon_values: tuple[float, ...] = (0.1, 1.0)
    theta: float = 0.2
    delta: float | None = None  # None -> 1/|P|^1.5
    repetitions: int = 20
    composition: str = "basic"
    master_seed: int = 0
    methods: tuple[str, ...] = METHODS
    shuffle_stream: bool = False
    eta: float = 0.1
    out_dir: str = "results"
    prefix: str = ""

    def __post_init__(self):
        if self.dataset not in ("synthetic", "csv"):
            raise ValueError(f"unknown dataset kind {self.dataset!r}")
        if self.dataset == "csv" and not self.csv_path:
            raise ValueError("csv dataset requires csv_path")
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")
        if not 0 < self.theta < 1:
            raise ValueError(f"theta must lie in (0, 1), got {self.theta}")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods {sorted(unknown)}")


@dataclass
class CellStats:
    """Aggregated outcome of one (method, k, epsilon) cell."""

    method: str
    k: int
    epsilon: float
    mean_cost: float = math.nan
    std_cost: float = math.nan
    mean_retained: float = 0.0
    mean_marginal_calls: float = 0.0
    wall_time_s: float = 0.0
    n_seeds: int = 0
    resource_ok: bool = True
    error: str | None = None


@dataclass
class RunReport:
    """All cell statistics of one sweep plus the shared instance facts."""

    cells: list[CellStats] = field(default_factory=list)
    client_count: int = 0
    grid_points: int = 0
    delta: float = math.nan

    def cell(self, method: str, k: int, epsilon: float) -> CellStats | None:
        for c in self.cells:
            if c.method == method and c.k == k and c.epsilon == epsilon:
                return c
        return None

    @property
    def failed_cells(self) -> list[CellStats]:
        return [c for c in self.cells if c.error is not None]


def _load_clients(cfg: ExperimentConfig) -> PointCloud:
    if cfg.dataset == "csv":
        return load_points_csv(cfg.csv_path, cfg.x_column, cfg.y_column, cfg.max_rows)
    rng = np.random.default_rng(derive_seed(cfg.master_seed, _DATA_TAG))
    return synth_mixture(cfg.components, cfg.points_per_component, cfg.box_side, rng)


def _build_stream(cfg: ExperimentConfig, clients: PointCloud) -> list[tuple[float, float]]:
    grid = make_grid(clients.bounding_box, cfg.grid_side)
    return [tuple(p) for p in grid.points]


def _stream_for_rep(cfg: ExperimentConfig, base_stream: list, rep: int) -> list:
    # With shuffling on, every repetition streams the candidates in a fresh
    # seeded order, shared by all methods of that repetition, so reported
    # means average over stream orders instead of baking one order in.
    if not cfg.shuffle_stream:
        return base_stream
    rng = np.random.default_rng(derive_seed(cfg.master_seed, _SHUFFLE_TAG, rep))
    return [base_stream[i] for i in rng.permutation(len(base_stream))]


def _run_private(oracle, stream, cfg, method, k, epsilon, delta, seed):
    run_cfg = PssmConfig(
        k=k,
        theta=cfg.theta,
        privacy=PrivacyParams(epsilon, delta, cfg.composition),
        noise_kind=LAPLACE if method == "laplace" else GUMBEL,
        m_bound=oracle.num_agents,
        n_bound=len(stream),
        eta=cfg.eta,
        master_seed=seed,
    )
    selected, diag = pssm(oracle, stream, run_cfg)
    resource_ok = (
        diag.retained_total <= k * diag.num_guesses
        and diag.stream_length == len(stream)
        and diag.stream_passes == 1
    )
    return selected, diag.retained_total, diag.marginal_calls, resource_ok


def _run_nonprivate(oracle, stream, cfg, k, epsilon):
    # E additionally capped by the best singleton so the baseline's ladder
    # has at least as many rungs as the private runs.
    n = len(stream)
    best_singleton = max(oracle.evaluate([e]) for e in stream)
    E = min(best_singleton, k * math.log(max(n, 2)) / epsilon, oracle.num_agents / 2.0)
    ladder = build_guess_ladder(E, float(oracle.num_agents), cfg.theta)
    best_set: list = []
    best_value = -math.inf
    retained = 0
    for guess in ladder.guesses:
        S = threshold_stream_with_tail_fill(oracle, stream, k, guess)
        retained += len(S)
        value = oracle.evaluate(S)
        if value > best_value:
            best_value = value
            best_set = S
    return best_set, retained


def _run_random(stream, k, seed):
    if k >= len(stream):
        return list(stream)
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(stream), size=k, replace=False)
    return [stream[i] for i in idx]


def run_experiment(cfg: ExperimentConfig) -> RunReport:
    """Run the full sweep. Infeasible cells are recorded with their error and
    the sweep continues; everything else is aggregated over the repetitions.
    """
    clients = _load_clients(cfg)
    stream = _build_stream(cfg, clients)
    delta = cfg.delta if cfg.delta is not None else 1.0 / len(clients) ** 1.5
    oracle = kmedians_oracle(clients.points, stream)

    report = RunReport(client_count=len(clients), grid_points=len(stream), delta=delta)
    for method in METHODS:
        if method not in cfg.methods:
            continue
        method_idx = METHODS.index(method)
        for k_idx, k in enumerate(cfg.k_values):
            for eps_idx, epsilon in enumerate(cfg.epsilon_values):
                cell = CellStats(method=method, k=k, epsilon=epsilon)
                start = time.perf_counter()
                costs = []
                retained = []
                calls = []
                try:
                    if method == "nonprivate" and not cfg.shuffle_stream:
                        # Deterministic given data and order: solve once, the
                        # repetition axis would only repeat the same value.
                        S, kept = _run_nonprivate(oracle, stream, cfg, k, epsilon)
                        costs = [oracle.clustering_cost(S)] * cfg.repetitions
                        retained = [kept] * cfg.repetitions
                        calls = [0] * cfg.repetitions
                    else:
                        for rep in range(cfg.repetitions):
                            rep_stream = _stream_for_rep(cfg, stream, rep)
                            seed = derive_seed(
                                cfg.master_seed, method_idx, k_idx, eps_idx, rep
                            )
                            if method == "nonprivate":
                                S, kept = _run_nonprivate(
                                    oracle, rep_stream, cfg, k, epsilon
                                )
                                ncalls = 0
                            elif method == "random":
                                S = _run_random(rep_stream, k, seed)
                                kept, ncalls = len(S), 0
                            else:
                                S, kept, ncalls, ok = _run_private(
                                    oracle, rep_stream, cfg, method, k, epsilon,
                                    delta, seed,
                                )
                                cell.resource_ok = cell.resource_ok and ok
                            costs.append(oracle.clustering_cost(S))
                            retained.append(kept)
                            calls.append(ncalls)
                except Exception as exc:  # noqa: BLE001 - cell isolation
                    cell.error = f"{type(exc).__name__}: {exc}"
                else:
                    cell.mean_cost = float(np.mean(costs))
                    if len(costs) > 1 and max(costs) > min(costs):
                        cell.std_cost = float(np.std(costs, ddof=1))
                    else:
                        cell.std_cost = 0.0
                    cell.mean_retained = float(np.mean(retained))
                    cell.mean_marginal_calls = float(np.mean(calls))
                    cell.n_seeds = len(costs)
                cell.wall_time_s = time.perf_counter() - start
                report.cells.append(cell)
    return report


CSV_HEADER = "Params,Laplace,LaplaceEB,Ours,OursEB,Non-private,Non-privateEB,Random,RandomEB"

_CSV_COLUMNS = (("laplace", "Laplace"), ("gumbel", "Ours"),
                ("nonprivate", "Non-private"), ("random", "Random"))


def format_eps(epsilon: float) -> str:
    """Compact scientific label for file names: 0.1 -> '1E-1', 1.0 -> '1E0'."""
    mantissa, exponent = f"{epsilon:E}".split("E")
    mantissa = mantissa.rstrip("0").rstrip(".")
    return f"{mantissa}E{int(exponent)}"


def emit_csv(report: RunReport, out_dir, prefix: str = "") -> list[Path]:
    """Write one plot-ready CSV per epsilon; returns the paths written.

    Rows are k values; per method the columns carry mean cost and its
    standard deviation, empty when the method was not run (or failed).
    """
    if not report.cells:
        raise ValueError("cannot emit an empty report")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    epsilons = sorted({c.epsilon for c in report.cells})
    ks = sorted({c.k for c in report.cells})
    paths = []
    for epsilon in epsilons:
        path = out_dir / f"{prefix}eps_{format_eps(epsilon)}.csv"
        lines = [CSV_HEADER]
        for k in ks:
            row = [str(k)]
            for method, _ in _CSV_COLUMNS:
                cell = report.cell(method, k, epsilon)
                if cell is None or cell.error is not None or cell.n_seeds == 0:
                    row += ["", ""]
                else:
                    row += [repr(cell.mean_cost), repr(cell.std_cost)]
            lines.append(",".join(row))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        paths.append(path)
    return paths


def read_report_csv(path) -> dict[tuple[int, str], tuple[float, float]]:
    """Parse a file written by emit_csv back into {(k, column): (mean, std)}."""
    lines = Path(path).read_text(encoding="utf-8").strip().splitlines()
    if lines[0] != CSV_HEADER:
        raise ValueError(f"{path}: unexpected header {lines[0]!r}")
    out = {}
    names = [label for _, label in _CSV_COLUMNS]
    for line in lines[1:]:
        fields = line.split(",")
        k = int(fields[0])
        for j, label in enumerate(names):
            mean_s, std_s = fields[1 + 2 * j], fields[2 + 2 * j]
            if mean_s:
                out[(k, label)] = (float(mean_s), float(std_s))
    return out


_LIST_FIELDS = {"k_values": int, "epsilon_values": float, "methods": str}
_SCALAR_PARSERS = {
    "dataset": str, "components": int, "points_per_component": int,
    "box_side": float, "csv_path": str, "x_column": str, "y_column": str,
    "max_rows": int, "grid_side": int, "theta": float, "repetitions": int,
    "composition": str, "master_seed": int, "shuffle_stream": None,
    "eta": float, "out_dir": str, "prefix": str, "delta": None,
}


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key in _LIST_FIELDS:
        cast = _LIST_FIELDS[key]
        return tuple(cast(part.strip()) for part in raw.split(",") if part.strip())
    if key == "shuffle_stream":
        if raw.lower() in ("true", "yes", "1"):
            return True
        if raw.lower() in ("false", "no", "0"):
            return False
        raise ValueError(f"shuffle_stream must be a boolean, got {raw!r}")
    if key == "delta":
        if raw.lower() in ("auto", "inverse_n_1p5"):
            return None
        return float(raw)
    parser = _SCALAR_PARSERS.get(key)
    if parser is None:
        raise ValueError(f"unknown config key {key!r}")
    return parser(raw)


def parse_config_text(text: str) -> dict:
    """Parse the flat ``key = value`` config format (# starts a comment)."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = line.split("=", 1)
        key = key.strip()
        values[key] = _parse_value(key, raw)
    return values


def load_config(path, overrides: dict | None = None) -> ExperimentConfig:
    """Read a config file and apply ``key=value`` overrides on top."""
    values = parse_config_text(Path(path).read_text(encoding="utf-8"))
    if overrides:
        for key, raw in overrides.items():
            values[key] = _parse_value(key, raw)
    return ExperimentConfig(**values)


def override_config(cfg: ExperimentConfig, overrides: dict) -> ExperimentConfig:
    parsed = {key: _parse_value(key, raw) for key, raw in overrides.items()}
    return replace(cfg, **parsed)
