"""Monte Carlo box experiment: a peg board decides the cat, a channel decides
whether anyone gets to see it.

Death rule: the ball takes ``peg_depth`` left/right steps; its final offset is
``rights - lefts``. A positive offset kills the cat, zero or negative spares
it (ties at even depth go to "alive").

Stream splitting: trials are cut into blocks of ``BLOCK_SIZE``. Block ``k``
draws from ``default_rng(SeedSequence(seed, spawn_key=(k,)))`` a single
C-ordered ``(m, peg_depth + 1)`` array of uniforms: row ``t`` holds trial
``t``'s peg draws followed by its observability draw. Per-trial values thus
depend only on (seed, trial index); any block can be generated on its own, in
any order or process, and reproduces a sequential run exactly.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

from .errors import InvalidConfig, NoObservableTrials

BLOCK_SIZE = 1 << 16


@dataclass(frozen=True)
class Always:
    kind = "always"


@dataclass(frozen=True)
class Independent:
    prob: float
    kind = "independent"


@dataclass(frozen=True)
class Granular:
    """A flash reaches the observer with probability 1 - exp(-flash_rate)."""

    flash_rate: float
    kind = "granular"


@dataclass(frozen=True)
class Coupled:
    """Observability that depends on the outcome itself."""

    open_if_alive: float
    open_if_dead: float
    kind = "coupled"


OpenModel = Union[Always, Independent, Granular, Coupled]


def open_probability(model: OpenModel, alive: bool) -> float:
    if isinstance(model, Always):
        return 1.0
    if isinstance(model, Independent):
        return model.prob
    if isinstance(model, Granular):
        return -math.expm1(-model.flash_rate) if math.isfinite(model.flash_rate) else 1.0
    if isinstance(model, Coupled):
        return model.open_if_alive if alive else model.open_if_dead
    raise InvalidConfig(f"unknown open model {model!r}")


def _check_prob(name: str, p: float) -> None:
    if not (0.0 <= p <= 1.0):
        raise InvalidConfig(f"{name} must be in [0, 1], got {p!r}")


@dataclass(frozen=True)
class BoxExperimentConfig:
    peg_depth: int = 1
    right_bias: Union[float, tuple[float, ...]] = 0.5
    open_model: OpenModel = field(default_factory=Always)
    trials: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.peg_depth < 1:
            raise InvalidConfig("peg_depth must be >= 1")
        if self.trials < 1:
            raise InvalidConfig("trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise InvalidConfig("seed must be a 64-bit unsigned integer")
        bias = self.right_bias
        if isinstance(bias, (int, float)):
            bias = (float(bias),) * self.peg_depth
        bias = tuple(float(b) for b in bias)
        if len(bias) != self.peg_depth:
            raise InvalidConfig(f"need {self.peg_depth} row biases, got {len(bias)}")
        for b in bias:
            _check_prob("right_bias", b)
        object.__setattr__(self, "right_bias", bias)
        m = self.open_model
        if isinstance(m, Independent):
            _check_prob("prob", m.prob)
        elif isinstance(m, Coupled):
            _check_prob("open_if_alive", m.open_if_alive)
            _check_prob("open_if_dead", m.open_if_dead)
        elif isinstance(m, Granular):
            if not m.flash_rate > 0:
                raise InvalidConfig("flash_rate must be > 0")
        elif not isinstance(m, Always):
            raise InvalidConfig(f"unknown open model {m!r}")


class TrialRecord(NamedTuple):
    outcome: bool
    observable: bool


class TrialRecords(Sequence[TrialRecord]):
    """Column storage for a run; iterating yields ``TrialRecord``s."""

    def __init__(self, outcome: np.ndarray, observable: np.ndarray):
        self.outcome = np.asarray(outcome, dtype=bool)
        self.observable = np.asarray(observable, dtype=bool)

    def __len__(self) -> int:
        return self.outcome.size

    def __getitem__(self, k):
        if isinstance(k, slice):
            return TrialRecords(self.outcome[k], self.observable[k])
        return TrialRecord(bool(self.outcome[k]), bool(self.observable[k]))

    def __eq__(self, other):
        if not isinstance(other, TrialRecords):
            return NotImplemented
        return np.array_equal(self.outcome, other.outcome) and np.array_equal(self.observable, other.observable)

    def alive_fraction(self) -> float:
        return float(self.outcome.mean())


def block_count(trials: int) -> int:
    return -(-trials // BLOCK_SIZE)


def simulate_block(config: BoxExperimentConfig, k: int) -> tuple[np.ndarray, np.ndarray]:
    start = k * BLOCK_SIZE
    m = min(BLOCK_SIZE, config.trials - start)
    if m <= 0:
        raise IndexError(f"block {k} is past the last trial")
    rng = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(k,)))
    u = rng.random((m, config.peg_depth + 1))
    pegs, u_open = u[:, :-1], u[:, -1]
    rights = (pegs < np.asarray(config.right_bias)).sum(axis=1)
    alive = 2 * rights <= config.peg_depth
    model = config.open_model
    p_open = np.where(alive, open_probability(model, True), open_probability(model, False))
    return alive, u_open < p_open


def simulate(config: BoxExperimentConfig, workers: int = 1) -> TrialRecords:
    blocks = range(block_count(config.trials))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda k: simulate_block(config, k), blocks))
    else:
        parts = [simulate_block(config, k) for k in blocks]
    return TrialRecords(np.concatenate([a for a, _ in parts]), np.concatenate([o for _, o in parts]))


@dataclass(frozen=True)
class FrequencyEstimate:
    numerator: int
    denominator: int
    estimate: float
    stderr: float


def estimate_frequency(records: Union[TrialRecords, Iterable[TrialRecord]]) -> FrequencyEstimate:
    """Fraction alive among observable trials; unobservable ones are ignored."""
    if isinstance(records, TrialRecords):
        num = int(np.count_nonzero(records.outcome & records.observable))
        den = int(np.count_nonzero(records.observable))
    else:
        num = den = 0
        for r in records:
            if r.observable:
                den += 1
                num += bool(r.outcome)
    if den == 0:
        raise NoObservableTrials("no trial was observable")
    est = num / den
    return FrequencyEstimate(num, den, est, math.sqrt(est * (1.0 - est) / den))


def alive_probability(right_bias: Sequence[float]) -> float:
    """Exact |alive| from the distribution of right deflections."""
    dist = np.array([1.0])
    for b in right_bias:
        dist = np.convolve(dist, [1.0 - b, b])
    depth = len(right_bias)
    return float(dist[: depth // 2 + 1].sum())


def analytic_frequencies(config: BoxExperimentConfig) -> tuple[float, float]:
    """(|alive|, [alive]); [alive] is NaN when nothing is ever observable."""
    p = alive_probability(config.right_bias)
    oa = open_probability(config.open_model, True)
    od = open_probability(config.open_model, False)
    if oa == od:
        # outcome-independent channel: conditioning cannot move the mean
        return p, (p if oa > 0 else math.nan)
    den = p * oa + (1.0 - p) * od
    return p, (p * oa / den if den > 0 else math.nan)


@dataclass(frozen=True)
class ScanRow:
    config_id: str
    trials: int
    observable_count: int
    estimate: float
    stderr: float
    analytic_p: float
    analytic_bracket_p: float
    gap: float

    @property
    def analytic_gap(self) -> float:
        return self.analytic_bracket_p - self.analytic_p


CSV_COLUMNS = (
    "config_id",
    "trials",
    "observable_count",
    "estimate",
    "stderr",
    "analytic_p",
    "analytic_bracket_p",
    "gap",
)


def scan_row(config_id: str, config: BoxExperimentConfig, records: TrialRecords | None = None) -> ScanRow:
    if records is None:
        records = simulate(config)
    p, bracket = analytic_frequencies(config)
    try:
        est = estimate_frequency(records)
        estimate, stderr, observed = est.estimate, est.stderr, est.denominator
    except NoObservableTrials:
        estimate, stderr, observed = math.nan, math.nan, 0
    return ScanRow(config_id, config.trials, observed, estimate, stderr, p, bracket, estimate - p)


def sweep(base: BoxExperimentConfig, models: Iterable[OpenModel]) -> list[BoxExperimentConfig]:
    return [replace(base, open_model=m) for m in models]


def deviation_scan(configs: Sequence[BoxExperimentConfig]) -> list[ScanRow]:
    """Simulate each configuration and compare measured, |p| and [p].

    ``gap`` is the measured frequency minus the unconditional |alive|; it
    tracks ``analytic_bracket_p - analytic_p`` and vanishes whenever
    observability is independent of the outcome.
    """
    if not configs:
        raise InvalidConfig("sweep must be non-empty")
    return [scan_row(f"cfg{k}", c) for k, c in enumerate(configs)]
