"""Concrete objective families: k-medians coverage and max-coverage.

The k-medians objective treats every client as one agent whose utility of a
set S of open facilities is 1 - d(client, S)/G under the Manhattan metric,
with d(client, empty) = G, so each agent's utility lies in [0, 1] and the
total is monotone, submodular and decomposable. Minimizing the clustering
cost sum_p d(p, S) is equivalent to maximizing this objective.
"""
from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .submodular import DecomposableObjective, OracleState


def manhattan(a, b) -> float:
    """L1 distance between two 2-D points."""
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def _max_pairwise_l1(clients: np.ndarray, candidates: np.ndarray) -> float:
    # max_{p,v} |px-vx|+|py-vy| via the four sign corners of the l1 ball:
    # max over s in {-1,1}^2 of max_v(s.v) + max_p(-s.p); exact and O(n).
    worst = 0.0
    for sx in (-1.0, 1.0):
        for sy in (-1.0, 1.0):
            cand_part = (sx * candidates[:, 0] + sy * candidates[:, 1]).max()
            client_part = (-sx * clients[:, 0] - sy * clients[:, 1]).max()
            worst = max(worst, cand_part + client_part)
    return float(worst)


def bounding_box_l1_diameter(points: np.ndarray) -> float:
    """L1 diameter of the axis-aligned bounding box of the points."""
    mins = points.min(axis=0)
    maxs = points.max(axis=0)
    return float((maxs - mins).sum())


class _KMediansState(OracleState):
    # Owns a per-client nearest-distance vector; accept() tightens it in
    # place, so marginals cost one vectorized pass over the clients.

    def __init__(self, oracle):
        super().__init__(oracle)
        self._dmin = np.full(oracle.num_agents, oracle.normalizer)

    def marginal(self, e) -> float:
        if e in self._selected_set:
            return 0.0
        col = self.oracle._column(e)
        return float(np.maximum(self._dmin - col, 0.0).sum() / self.oracle.normalizer)

    def accept(self, e) -> None:
        gain = self.marginal(e)
        np.minimum(self._dmin, self.oracle._column(e), out=self._dmin)
        self.selected.append(e)
        self._selected_set.add(e)
        self.value += gain


class KMediansObjective(DecomposableObjective):
    """Decomposable k-medians facility objective over 2-D points.

    clients: private demand points, one agent each.
    candidates: public facility locations (the stream's element domain).
    normalizer: public constant G >= every client-candidate distance; defaults
        to the L1 diameter of the joint bounding box.
    """

    def __init__(self, clients, candidates, normalizer: float | None = None):
        clients = np.asarray(clients, dtype=float)
        if clients.ndim != 2 or clients.shape[1] != 2 or len(clients) == 0:
            raise ValueError("clients must be a non-empty (n, 2) array")
        super().__init__(num_agents=len(clients))
        self.clients = clients
        self.candidates = [tuple(map(float, v)) for v in candidates]
        if not self.candidates:
            raise ValueError("candidate set must be non-empty")
        cand_arr = np.asarray(self.candidates, dtype=float)
        required = _max_pairwise_l1(clients, cand_arr)
        if normalizer is None:
            normalizer = bounding_box_l1_diameter(np.vstack([clients, cand_arr]))
        if normalizer < required - 1e-9:
            raise ValueError(
                f"normalizer {normalizer} is below the maximum client-candidate "
                f"distance {required}; per-agent utilities would leave [0, 1]"
            )
        self.normalizer = float(normalizer)
        self._columns: dict = {}

    def _column(self, e) -> np.ndarray:
        col = self._columns.get(e)
        if col is None:
            col = np.abs(self.clients - np.asarray(e, dtype=float)).sum(axis=1)
            self._columns[e] = col
        return col

    def _min_distances(self, S) -> np.ndarray:
        cols = [self._column(e) for e in S]
        if not cols:
            return np.full(self.num_agents, self.normalizer)
        return np.minimum.reduce(cols)

    def evaluate(self, S) -> float:
        S = set(S)
        if not S:
            return 0.0
        dmin = self._min_distances(S)
        return float(self.num_agents - dmin.sum() / self.normalizer)

    def marginal(self, e, S) -> float:
        S = set(S)
        if e in S:
            self.duplicate_marginal_queries += 1
            return 0.0
        dmin = self._min_distances(S)
        gains = np.maximum(dmin - self._column(e), 0.0)
        return float(gains.sum() / self.normalizer)

    def agent_values(self, S) -> np.ndarray:
        return 1.0 - self._min_distances(set(S)) / self.normalizer

    def clustering_cost(self, S) -> float:
        """sum_p d(p, S) with d(p, empty) = G; the quantity the benchmark reports."""
        return float(self._min_distances(set(S)).sum())

    def make_state(self) -> _KMediansState:
        return _KMediansState(self)


def kmedians_oracle(clients, candidates, normalizer: float | None = None) -> KMediansObjective:
    """Build the decomposable k-medians objective (see KMediansObjective)."""
    return KMediansObjective(clients, candidates, normalizer)


class _CoverageState(OracleState):
    def marginal(self, e) -> float:
        if e in self._selected_set:
            return 0.0
        return float(self.oracle._counts.get(e, 0))

    def accept(self, e) -> None:
        self.value += self.marginal(e)
        self.selected.append(e)
        self._selected_set.add(e)


class CoverageObjective(DecomposableObjective):
    """Multiset coverage by singletons: f(T) counts records whose label is in T.

    One agent per record with utility in {0, 1}, so the objective is
    decomposable with sensitivity 1.
    """

    def __init__(self, records):
        records = list(records)
        super().__init__(num_agents=len(records))
        self.records = records
        self._counts = Counter(records)

    def evaluate(self, S) -> float:
        return float(sum(self._counts.get(e, 0) for e in set(S)))

    def marginal(self, e, S) -> float:
        if e in set(S):
            self.duplicate_marginal_queries += 1
            return 0.0
        return float(self._counts.get(e, 0))

    def agent_values(self, S) -> np.ndarray:
        chosen = set(S)
        return np.array([1.0 if r in chosen else 0.0 for r in self.records])

    def make_state(self) -> _CoverageState:
        return _CoverageState(self)


def coverage_oracle(records) -> CoverageObjective:
    """Build the multiset coverage objective (see CoverageObjective)."""
    return CoverageObjective(records)


@dataclass(frozen=True)
class HardCoverageInstance:
    """A worst-case coverage data set: a hidden k-subset repeated L times.

    The set family is all singletons of the universe, so the unique optimum
    covers exactly the hidden subset and achieves k*L.
    """

    universe: tuple
    target: tuple
    multiplicity: int
    dataset: tuple

    @property
    def opt_value(self) -> int:
        return len(self.target) * self.multiplicity

    def oracle(self) -> CoverageObjective:
        return CoverageObjective(self.dataset)


def generate_hard_instance(
    universe_size: int, k: int, epsilon: float, delta: float, c: float, rng
) -> HardCoverageInstance:
    """Sample a hard coverage instance for privacy/utility trade-off probing.

    The hidden target is a uniform k-subset of the universe and every target
    element is repeated L = ceil(ln(c*(e^eps - 1)/delta) / (2*eps)) times.
    Warns (does not fail) when the data set is smaller than the
    k*(e^eps - 1)/delta regime the hardness argument assumes. Note the
    hardness statement is sometimes quoted with e^eps and sometimes with
    e^(2*eps) constants; this generator uses the chain-of-neighbors form
    (2*eps exponent steps) throughout.
    """
    if not 1 <= k <= universe_size:
        raise ValueError(f"need 1 <= k <= universe_size, got k={k}, |U|={universe_size}")
    if not epsilon > 0 or not 0 < delta < 1 or not c > 0:
        raise ValueError("require epsilon > 0, delta in (0, 1), c > 0")
    multiplicity = max(1, math.ceil(math.log(c * math.expm1(epsilon) / delta) / (2 * epsilon)))
    if k * multiplicity < k * math.expm1(epsilon) / delta:
        warnings.warn(
            f"instance size k*L = {k * multiplicity} is below the hardness "
            f"regime k*(e^eps - 1)/delta = {k * math.expm1(epsilon) / delta:.1f}",
            stacklevel=2,
        )
    universe = tuple(range(universe_size))
    target = tuple(sorted(int(i) for i in rng.choice(universe_size, size=k, replace=False)))
    dataset = tuple(e for e in target for _ in range(multiplicity))
    return HardCoverageInstance(
        universe=universe, target=target, multiplicity=multiplicity, dataset=dataset
    )
