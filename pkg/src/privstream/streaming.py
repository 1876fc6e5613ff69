"""Threshold streaming for submodular maximization, private and not.

One pass, cardinality k: a guess ladder covers the unknown optimum with
geometrically spaced values, each guess runs an independent threshold
instance (accept e when its marginal gain beats guess/(2k)), and a private
argmax picks among the finished sets. Privacy comes from noising both sides
of every threshold comparison: Laplace noise for arbitrary sensitivity-1
objectives, Gumbel noise for decomposable ones.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .accounting import BudgetSplit, PrivacyParams, split_budget
from .noise import (
    GUMBEL,
    LAPLACE,
    ZERO_FOR_TEST,
    NoiseSource,
    ScoredCandidate,
    private_argmax,
)
from .submodular import ObjectiveOracle, brute_force_opt


@dataclass(frozen=True)
class GuessLadder:
    """Geometric guesses {E, (1+theta)E, ...} capped and completed by m.

    For every x in [E, m] some guess O satisfies x <= O <= (1+theta)x.
    """

    E: float
    m: float
    theta: float
    guesses: tuple[float, ...]

    @property
    def T(self) -> int:
        return len(self.guesses)


def build_guess_ladder(E: float, m: float, theta: float) -> GuessLadder:
    """Build the guess ladder; collapses to the single guess {m} when E >= m."""
    if not 0 < theta < 1:
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    if not E > 0 or not m > 0:
        raise ValueError(f"E and m must be positive, got E={E}, m={m}")
    if E >= m:
        return GuessLadder(E=E, m=m, theta=theta, guesses=(m,))
    guesses = []
    # The 1e-9 nudge keeps exact powers (e.g. m/E = 2^j) from losing their
    # top rung to floating-point log round-off.
    top = int(math.floor(math.log(m / E) / math.log(1.0 + theta) + 1e-9))
    for i in range(top + 1):
        value = E * (1.0 + theta) ** i
        if value >= m * (1.0 - 1e-12):
            break
        guesses.append(value)
    guesses.append(float(m))
    return GuessLadder(E=E, m=m, theta=theta, guesses=tuple(guesses))


def threshold_stream(f: ObjectiveOracle, V, k: int, O: float) -> list:
    """One noiseless pass: accept e while |S| < k and f(e|S) >= O/(2k).

    The result satisfies f(S) >= min(O/2, f(OPT) - O/2).
    """
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    if not O > 0:
        raise ValueError(f"guess O must be positive, got {O}")
    state = f.make_state()
    bar = O / (2.0 * k)
    for e in V:
        if len(state) >= k:
            break
        if state.marginal(e) >= bar:
            state.accept(e)
    return state.selected


def threshold_stream_with_tail_fill(f: ObjectiveOracle, V, k: int, O: float) -> list:
    """Threshold pass that tops the set up to k from the stream tail.

    Once the elements left in the stream no longer exceed the free slots,
    every remaining element is accepted outright. Only sensible without
    noise; the benchmark's non-private baseline uses it.
    """
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    if not O > 0:
        raise ValueError(f"guess O must be positive, got {O}")
    V = list(V)
    state = f.make_state()
    bar = O / (2.0 * k)
    for i, e in enumerate(V):
        if len(state) >= k:
            break
        if len(V) - i <= k - len(state):
            if e not in state._selected_set:
                state.accept(e)
        elif state.marginal(e) >= bar:
            state.accept(e)
    return state.selected


class SparseInstance:
    """One noisy above-threshold instance with a Top-answer budget of k.

    Answers Top when query + score_noise >= threshold + threshold_noise.
    The threshold noise is redrawn after every Top (each of the up-to-k
    acceptances compares against an independent noisy threshold) and the
    instance halts permanently after the k-th Top.
    """

    __slots__ = ("guess", "threshold", "capacity", "count", "selected", "halted",
                 "threshold_noise", "score_noise", "_alpha")

    def __init__(self, threshold: float, capacity: int, threshold_noise, score_noise,
                 guess: float | None = None):
        self.guess = guess
        self.threshold = float(threshold)
        self.capacity = int(capacity)
        self.count = 0
        self.selected: list = []
        self.threshold_noise = threshold_noise
        self.score_noise = score_noise
        self.halted = self.capacity <= 0
        self._alpha = threshold_noise.draw() if not self.halted else 0.0

    def step(self, query_value: float) -> bool:
        """Answer one query; True means Top. Halted instances always answer
        Bottom without touching any noise stream."""
        if self.halted:
            return False
        beta = self.score_noise.draw()
        if query_value + beta >= self.threshold + self._alpha:
            self.count += 1
            if self.count >= self.capacity:
                self.halted = True
            else:
                self._alpha = self.threshold_noise.draw()
            return True
        return False


@dataclass
class PssmConfig:
    """Inputs of one private streaming maximization run.

    m_bound/n_bound are public upper bounds on the number of agents and the
    stream length; m_bound defaults to the oracle's agent count for
    decomposable objectives, n_bound to len(V). eta is the failure
    probability quoted in the reported theoretical error bound; it does not
    change the algorithm's behavior.
    """

    k: int
    theta: float
    privacy: PrivacyParams
    noise_kind: str = GUMBEL
    m_bound: float | None = None
    n_bound: int | None = None
    eta: float = 0.1
    master_seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k}")
        if not 0 < self.theta < 1:
            raise ValueError(f"theta must lie in (0, 1), got {self.theta}")
        if self.noise_kind not in (LAPLACE, GUMBEL, ZERO_FOR_TEST):
            raise ValueError(f"unknown noise kind {self.noise_kind!r}")
        if not 0 < self.eta < 1:
            raise ValueError(f"eta must lie in (0, 1), got {self.eta}")


@dataclass
class RunDiagnostics:
    """Resource and selection bookkeeping for one maximizer run."""

    guesses: tuple[float, ...]
    per_guess_sizes: tuple[int, ...]
    per_guess_values: tuple[float, ...]
    chosen_index: int
    lower_estimate: float
    stream_length: int
    marginal_calls: int
    retained_total: int
    stream_passes: int = 1
    budget: BudgetSplit | None = None
    eta: float | None = None
    reported_error_bound: float | None = None

    @property
    def num_guesses(self) -> int:
        return len(self.guesses)


def _reported_error_bound(noise_kind, scale, k, n, T, eta, selection_epsilon) -> float:
    # Additive error quoted at failure probability eta: the k accepted checks
    # each pay their eta-quantile score/threshold noise, plus the private
    # selection's utility tail. Reporting only; never drives behavior.
    n = max(n, 2)
    if noise_kind == LAPLACE:
        score_tail = 2.0 * scale * math.log(2 * n * T / eta)
        threshold_tail = scale * math.log(2 * k * T / eta)
    else:
        score_tail = scale * math.log(2 * n * T / eta)
        threshold_tail = scale * math.log(max(math.log(2 * k * T / eta), math.e))
    selection_tail = (2.0 / selection_epsilon) * math.log(2 * T / eta)
    return k * (score_tail + threshold_tail) + selection_tail


def pssm(f: ObjectiveOracle, V, cfg: PssmConfig) -> tuple[list, RunDiagnostics]:
    """Private streaming submodular maximization under a cardinality constraint.

    Runs one noisy threshold instance per ladder guess over a single pass of
    V, then privately selects among the per-guess sets with half the epsilon
    budget. With Laplace noise any sensitivity-1 oracle is accepted; Gumbel
    noise requires a decomposable oracle. The ``zero`` noise kind runs the
    noiseless limit (exact threshold checks and exact argmax) and reports no
    privacy guarantee.
    """
    private = cfg.noise_kind != ZERO_FOR_TEST
    if private and f.sensitivity != 1:
        raise ValueError(
            f"private runs require a sensitivity-1 oracle, got {f.sensitivity}"
        )
    if cfg.noise_kind == GUMBEL and not f.decomposable:
        raise ValueError("gumbel noise calibration requires a decomposable oracle")

    if cfg.m_bound is not None:
        m = float(cfg.m_bound)
    elif f.decomposable:
        m = float(f.num_agents)
    else:
        raise ValueError("m_bound is required for non-decomposable oracles")
    V = list(V) if cfg.n_bound is None else V
    n = cfg.n_bound if cfg.n_bound is not None else len(V)

    epsilon = cfg.privacy.epsilon
    E = min(cfg.k * math.log(max(n, 2)) / epsilon, m / 2.0)
    ladder = build_guess_ladder(E, m, cfg.theta)
    T = ladder.T

    budget = None
    if cfg.noise_kind == LAPLACE:
        budget = split_budget(cfg.privacy, T, "laplace", k=cfg.k)
        scale = budget.laplace_scale

        def make_sources(i):
            return (
                NoiseSource(LAPLACE, scale, seed=(cfg.master_seed, i, 0)),
                NoiseSource(LAPLACE, 2.0 * scale, seed=(cfg.master_seed, i, 1)),
            )
    elif cfg.noise_kind == GUMBEL:
        budget = split_budget(cfg.privacy, T, "gumbel")
        scale = budget.gumbel_scale

        def make_sources(i):
            return (
                NoiseSource(GUMBEL, scale, seed=(cfg.master_seed, i, 0)),
                NoiseSource(GUMBEL, scale, seed=(cfg.master_seed, i, 1)),
            )
    else:
        scale = 0.0

        def make_sources(i):
            return (
                NoiseSource(ZERO_FOR_TEST, 0.0, seed=(cfg.master_seed, i, 0)),
                NoiseSource(ZERO_FOR_TEST, 0.0, seed=(cfg.master_seed, i, 1)),
            )

    instances = []
    states = []
    for i, guess in enumerate(ladder.guesses):
        threshold_noise, score_noise = make_sources(i)
        inst = SparseInstance(
            threshold=guess / (2.0 * cfg.k),
            capacity=cfg.k,
            threshold_noise=threshold_noise,
            score_noise=score_noise,
            guess=guess,
        )
        state = f.make_state()
        inst.selected = state.selected
        instances.append(inst)
        states.append(state)

    marginal_calls = 0
    streamed = 0
    for e in V:
        streamed += 1
        if streamed > n:
            raise ValueError(
                f"stream exceeds the declared n_bound of {n}; the lower "
                "estimate E depends on it"
            )
        for inst, state in zip(instances, states):
            if inst.halted:
                continue
            marginal_calls += 1
            if inst.step(state.marginal(e)):
                state.accept(e)

    values = tuple(f.evaluate(state.selected) for state in states)
    candidates = [ScoredCandidate(i, v) for i, v in enumerate(values)]
    selection_kind = GUMBEL if private else ZERO_FOR_TEST
    selection_source = NoiseSource(selection_kind, 1.0, seed=(cfg.master_seed, T, 2))
    selection_epsilon = epsilon / 2.0
    chosen = private_argmax(candidates, selection_epsilon, f.sensitivity if private else 1.0,
                            selection_source)

    sizes = tuple(inst.count for inst in instances)
    diagnostics = RunDiagnostics(
        guesses=ladder.guesses,
        per_guess_sizes=sizes,
        per_guess_values=values,
        chosen_index=chosen,
        lower_estimate=E,
        stream_length=streamed,
        marginal_calls=marginal_calls,
        retained_total=sum(len(set(state.selected)) for state in states),
        budget=budget,
        eta=cfg.eta,
        reported_error_bound=(
            _reported_error_bound(cfg.noise_kind, scale, cfg.k, streamed, T,
                                  cfg.eta, selection_epsilon)
            if private else 0.0
        ),
    )
    return list(states[chosen].selected), diagnostics


class _BoundedUniformNoise:
    # Duck-typed stand-in source whose draws stay inside [lo, hi].
    kind = "bounded-uniform"

    def __init__(self, lo, hi, rng):
        self.lo = lo
        self.hi = hi
        self._rng = rng

    def draw(self) -> float:
        return self._rng.uniform(self.lo, self.hi)


def bounded_noise_utility_check(f: ObjectiveOracle, V, k: int, O: float,
                                a_l: float, a_u: float, b_l: float, b_u: float,
                                rng) -> bool:
    """Verify the utility floor of one noisy threshold instance under bounded
    noise: threshold noise in [a_l, a_u], score noise in [b_l, b_u].

    Every accepted element clears its check despite worst-case noise, giving
    f(S) >= O/2 - k*b_u + k*a_l when the instance fills, and every rejected
    optimum element was nearly worthless, giving
    f(S) >= f(OPT) - O/2 - k*max(a_u - b_l, 0) otherwise; the check asserts
    the min of both floors against the exact optimum. With zero-width bounds
    it is exactly the noiseless threshold guarantee.
    """
    if a_l > a_u or b_l > b_u:
        raise ValueError("noise bounds must be ordered: a_l <= a_u, b_l <= b_u")
    V = list(V)
    inst = SparseInstance(
        threshold=O / (2.0 * k),
        capacity=k,
        threshold_noise=_BoundedUniformNoise(a_l, a_u, rng),
        score_noise=_BoundedUniformNoise(b_l, b_u, rng),
        guess=O,
    )
    state = f.make_state()
    for e in V:
        if inst.halted:
            break
        if inst.step(state.marginal(e)):
            state.accept(e)
    _, opt_value = brute_force_opt(f, V, k)
    floor = min(
        O / 2.0 - k * b_u + k * a_l,
        opt_value - O / 2.0 - k * max(a_u - b_l, 0.0),
    )
    achieved = f.evaluate(state.selected)
    return achieved >= floor - 1e-9 * max(1.0, abs(floor))
