"""Seeded Monte Carlo estimation of logical error rates and pseudo-thresholds.

Trial k of every point draws from its own ``Philox`` substream keyed by
(seed, k), so points on a curve, decoders and arrangements all see common
random numbers, and results never depend on how trials are split between
worker threads.
"""

import concurrent.futures
import logging
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field, replace

import numpy as np
from statsmodels.stats.proportion import proportion_confint

from cli.constants import (
    CI_HIGH_FACTOR,
    CI_LOW_FACTOR,
    DEFAULT_TRIALS,
    MIN_FAILURES,
    NOISE_IID,
    RULE_OF_THREE,
    TRIAL_CHUNK,
    WILSON_ALPHA,
)
from cli.conversions import coefficient_of_variation, loglog_crossing
from cli.decoder import Decoder, LogicalClass
from cli.lattice import PlanarLattice
from cli.layout import Arrangement, random_arrangement
from cli.noise import (
    ChannelConfig,
    QubitSpec,
    mean_parameters,
    physical_error_probability,
    sample_error,
    solve_time_for_p,
    trial_rng,
)

__all__ = [
    "CurvePoint",
    "EnsembleStats",
    "NotBracketedError",
    "SweepConfig",
    "SweepResult",
    "arrangement_ensemble_stats",
    "coefficient_of_variation",
    "confidence_interval",
    "estimate_pseudothreshold",
    "run_point",
    "sweep",
    "sweep_times",
]

FAILURE_CLASSES = (
    LogicalClass.X_L,
    LogicalClass.Z_L,
    LogicalClass.Y_L,
    LogicalClass.DETECTED,
)


class NotBracketedError(ValueError):
    """The sampled curve never crosses P_L = p from below."""

    def __init__(self, first_sign: str, last_sign: str) -> None:
        self.first_sign = first_sign
        self.last_sign = last_sign
        super().__init__(
            "pseudo-threshold not bracketed: P_L - p is "
            f"{first_sign} at the first grid point and {last_sign} at the last"
        )


@dataclass(frozen=True)
class CurvePoint:
    """One estimate of P_L. ``p_physical`` is the mean-parameter p of the grid
    point; ``p_qubit_mean`` averages the per-qubit p values."""

    p_physical: float
    t_us: float
    p_l_hat: float
    n_trials: int
    ci_low: float
    ci_high: float
    p_qubit_mean: float | None = None
    breakdown: dict[str, int] = field(default_factory=dict)

    @property
    def n_failures(self) -> int:
        return round(self.p_l_hat * self.n_trials)

    @property
    def low_confidence(self) -> bool:
        """Fewer than 100 failures, i.e. n_trials < 100 / P_L."""
        return self.n_failures < MIN_FAILURES


@dataclass(frozen=True)
class SweepResult:
    points: tuple[CurvePoint, ...]
    distance: int
    decoder_mode: str
    noise_model: str
    arrangement: str
    seed: int

    def __post_init__(self) -> None:
        ps = [pt.p_physical for pt in self.points]
        if any(b <= a for a, b in zip(ps, ps[1:])):
            raise ValueError("sweep points must be strictly ascending in p")

    @property
    def label(self) -> str:
        return f"d={self.distance} {self.decoder_mode} {self.noise_model}"


@dataclass(frozen=True)
class SweepConfig:
    """Everything one curve needs besides its grid."""

    lattice: PlanarLattice
    arrangement: Arrangement
    noise_model: str
    decoder_mode: str
    seed: int
    n_trials: int = DEFAULT_TRIALS
    workers: int = 1
    adaptive: bool = False
    max_trials: int | None = None


@dataclass(frozen=True)
class EnsembleStats:
    mean: float
    std: float
    samples: tuple[float, ...]
    excluded: int
    seeds: tuple[int, ...] = ()


def confidence_interval(n_failures: int, n_trials: int) -> tuple[float, float]:
    """Rule of three with no failures, (0.8, 1.25)xP once N >= 100/P,
    otherwise the Wilson score interval."""
    if n_trials < 1:
        raise ValueError("confidence interval needs at least one trial")
    if n_failures == 0:
        return 0.0, min(1.0, RULE_OF_THREE / n_trials)
    p_hat = n_failures / n_trials
    if n_failures >= MIN_FAILURES:
        return CI_LOW_FACTOR * p_hat, min(1.0, CI_HIGH_FACTOR * p_hat)
    lo, hi = proportion_confint(
        n_failures, n_trials, alpha=WILSON_ALPHA, method="wilson"
    )
    return min(float(lo), p_hat), max(float(hi), p_hat)


def _decoder_specs(channel: ChannelConfig) -> Sequence[QubitSpec]:
    """Specs the reweighted decoder believes in: the mean-parameter qubit under
    iid noise, each qubit's own parameters otherwise."""
    if channel.model != NOISE_IID:
        return channel.specs
    mu_t1, mu_t2 = channel.means
    return [QubitSpec(s.id, mu_t1, mu_t2) for s in channel.specs]


def _run_trials(
    decoder: Decoder, channel: ChannelConfig, seed: int, start: int, stop: int
) -> Counter:
    counts: Counter = Counter()
    for trial in range(start, stop):
        error = sample_error(channel, trial_rng(seed, trial))
        if not error.weight:
            counts[LogicalClass.NONE] += 1
            continue
        counts[decoder.run(error).logical_class] += 1
    return counts


def _run_range(
    decoder: Decoder,
    channel: ChannelConfig,
    seed: int,
    start: int,
    stop: int,
    workers: int,
) -> Counter:
    chunks = [
        (lo, min(lo + TRIAL_CHUNK, stop)) for lo in range(start, stop, TRIAL_CHUNK)
    ]
    total: Counter = Counter()
    if workers <= 1 or len(chunks) == 1:
        for lo, hi in chunks:
            total.update(_run_trials(decoder, channel, seed, lo, hi))
        return total
    with concurrent.futures.ThreadPoolExecutor(
        max_workers=min(workers, len(chunks))
    ) as ex:
        futures = [
            ex.submit(_run_trials, decoder, channel, seed, lo, hi) for lo, hi in chunks
        ]
        for fut in concurrent.futures.as_completed(futures):
            total.update(fut.result())
    return total


def run_point(
    lattice: PlanarLattice,
    arrangement: Arrangement,
    channel: ChannelConfig,
    decoder_mode: str,
    n_trials: int,
    seed: int,
    workers: int = 1,
    adaptive: bool = False,
    max_trials: int | None = None,
    p_physical: float | None = None,
) -> CurvePoint:
    """Estimate P_L at one exposure time.

    With ``adaptive`` the point keeps adding batches of ``n_trials`` until it
    has seen enough failures for N >= 100/P_L or reaches ``max_trials``.
    """
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials}")
    if channel.n_qubits != lattice.n_qubits:
        raise ValueError("channel and lattice disagree on the qubit count")
    if tuple(channel.specs) != tuple(arrangement.specs):
        raise ValueError("channel is not built on this arrangement")

    decoder = Decoder(lattice, decoder_mode, _decoder_specs(channel), channel.t)
    counts = _run_range(decoder, channel, seed, 0, n_trials, workers)
    done = n_trials
    if adaptive:
        cap = max_trials if max_trials is not None else 100 * n_trials
        while done < cap and _failures(counts) < MIN_FAILURES:
            batch = min(n_trials, cap - done)
            counts.update(
                _run_range(decoder, channel, seed, done, done + batch, workers)
            )
            done += batch

    failures = _failures(counts)
    ci_low, ci_high = confidence_interval(failures, done)
    point = CurvePoint(
        p_physical=(
            channel.physical_error_probability() if p_physical is None else p_physical
        ),
        t_us=channel.t,
        p_l_hat=failures / done,
        n_trials=done,
        ci_low=ci_low,
        ci_high=ci_high,
        p_qubit_mean=channel.physical_error_probability(),
        breakdown={cls.value: counts.get(cls, 0) for cls in FAILURE_CLASSES},
    )
    if point.low_confidence:
        logging.info(
            "d=%d %s p=%.4g: %d failures in %d trials (low confidence)",
            lattice.distance,
            decoder_mode,
            point.p_physical,
            failures,
            done,
        )
    return point


def _failures(counts: Counter) -> int:
    return sum(n for cls, n in counts.items() if cls is not LogicalClass.NONE)


def _result(config: SweepConfig, points: list[CurvePoint]) -> SweepResult:
    return SweepResult(
        points=tuple(points),
        distance=config.lattice.distance,
        decoder_mode=config.decoder_mode,
        noise_model=config.noise_model,
        arrangement=config.arrangement.strategy,
        seed=config.seed,
    )


def _point(config: SweepConfig, t: float, p: float) -> CurvePoint:
    channel = ChannelConfig(config.noise_model, config.arrangement.specs, t)
    return run_point(
        config.lattice,
        config.arrangement,
        channel,
        config.decoder_mode,
        config.n_trials,
        config.seed,
        workers=config.workers,
        adaptive=config.adaptive,
        max_trials=config.max_trials,
        p_physical=p,
    )


def sweep(config: SweepConfig, p_grid: Sequence[float]) -> SweepResult:
    """One curve over target physical error probabilities.

    Each p fixes the exposure time of the mean-parameter channel; every qubit
    then idles for that same time.
    """
    mu_t1, mu_t2 = mean_parameters(config.arrangement.specs)
    points = []
    for p in sorted(set(p_grid)):
        t = solve_time_for_p(p, mu_t1, mu_t2)
        points.append(_point(config, t, p))
    return _result(config, points)


def sweep_times(config: SweepConfig, t_grid: Sequence[float]) -> SweepResult:
    """One curve over exposure times instead of target p."""
    means = mean_parameters(config.arrangement.specs)
    points = []
    for t in sorted(set(t_grid)):
        if t < 0:
            raise ValueError(f"exposure time must be >= 0, got {t}")
        points.append(_point(config, t, physical_error_probability(means, t)))
    return _result(config, points)


def _sign(g: float) -> str:
    return "positive" if g > 0 else "negative" if g < 0 else "zero"


def estimate_pseudothreshold(result: SweepResult) -> float:
    """Where the curve meets the uncoded line P_L = p.

    Interpolates in log-log between the first pair of neighbours that goes
    from below the line to above it; linear when the lower point saw no
    failures. Points at p = 0 carry no information and are skipped.
    """
    points = [pt for pt in result.points if pt.p_physical > 0]
    if not points:
        raise NotBracketedError("undefined", "undefined")
    gaps = [pt.p_l_hat - pt.p_physical for pt in points]

    if all(g == 0 for g in gaps):
        logging.warning(
            "%s: curve lies on P_L = p everywhere; reporting the smallest p",
            result.label,
        )
        return points[0].p_physical
    for i, (pt, g) in enumerate(zip(points, gaps)):
        # A point on the line counts only where the curve arrives from below.
        if g == 0 and (i == 0 or gaps[i - 1] < 0):
            return pt.p_physical

    for (a, ga), (b, gb) in zip(zip(points, gaps), zip(points[1:], gaps[1:])):
        if ga < 0 < gb:
            return loglog_crossing(a.p_physical, a.p_l_hat, b.p_physical, b.p_l_hat)

    logging.warning("%s: pseudo-threshold not bracketed by the grid", result.label)
    raise NotBracketedError(_sign(gaps[0]), _sign(gaps[-1]))


def _member_seeds(seed: int, n: int) -> list[int]:
    return [
        int(child.generate_state(1)[0])
        for child in np.random.SeedSequence(seed).spawn(n)
    ]


def arrangement_ensemble_stats(
    config: SweepConfig,
    specs: Sequence[QubitSpec],
    p_grid: Sequence[float],
    n_arrangements: int,
    seed: int,
    workers: int = 1,
) -> EnsembleStats:
    """Mean and population std of the pseudo-threshold over random placements.

    ``config.arrangement`` is replaced per member; trials keep ``config.seed``
    so members differ only in where the qubits sit. Members whose curve is
    not bracketed are excluded and counted.
    """
    if n_arrangements < 2:
        raise ValueError("an ensemble needs at least two arrangements")
    seeds = _member_seeds(seed, n_arrangements)
    member_config = replace(config, workers=1)

    def _member(member_seed: int) -> float:
        arrangement = random_arrangement(config.lattice, specs, member_seed)
        curve = sweep(replace(member_config, arrangement=arrangement), p_grid)
        return estimate_pseudothreshold(curve)

    results: dict[int, float] = {}
    excluded = 0
    with concurrent.futures.ThreadPoolExecutor(
        max_workers=max(1, min(workers, n_arrangements))
    ) as ex:
        futures = {ex.submit(_member, s): i for i, s in enumerate(seeds)}
        for fut in concurrent.futures.as_completed(futures):
            i = futures[fut]
            try:
                results[i] = fut.result()
            except NotBracketedError as e:
                excluded += 1
                logging.warning("Arrangement %d excluded: %s", i, e)

    if excluded:
        logging.warning("%d of %d arrangements excluded", excluded, n_arrangements)
    samples = tuple(results[i] for i in sorted(results))
    if not samples:
        raise RuntimeError("no arrangement produced a bracketed pseudo-threshold")
    arr = np.asarray(samples)
    return EnsembleStats(
        mean=float(arr.mean()),
        std=float(arr.std()),
        samples=samples,
        excluded=excluded,
        seeds=tuple(seeds[i] for i in sorted(results)),
    )
