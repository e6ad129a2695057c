"""Pauli-twirled amplitude/phase damping (PTA) noise.

Each qubit idling for t microseconds suffers X, Y or Z with

    p_X = p_Y = (1 - e^{-t/T1}) / 4
    p_Z = (1 + e^{-t/T1} - 2 e^{-t/T2}) / 4

The iid channel gives every qubit the mean (T1, T2) of the qubits placed on the
lattice; the inid channel keeps each qubit's own parameters.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.optimize import brentq

from cli.constants import (
    NOISE_IID,
    NOISE_INID,
    NOISE_MODELS,
    RAMSEY_FACTOR,
    SOLVE_RTOL,
    SOLVE_XTOL,
)
from cli.lattice import PauliOperator

# p(t) -> 3/4 as t -> infinity for every (T1, T2).
P_LIMIT = 0.75


def clamp_ramsey(t1: float, t2: float, qubit_id: int | None = None) -> float:
    """T2 clamped to the Ramsey limit 2*T1."""
    if t1 <= 0 or t2 <= 0:
        raise ValueError(f"T1 and T2 must be positive, got T1={t1}, T2={t2}")
    limit = RAMSEY_FACTOR * t1
    if t2 > limit:
        logging.warning(
            "Qubit %s violates T2 <= 2*T1 (T1=%s, T2=%s); clamping T2 to %s",
            "?" if qubit_id is None else qubit_id,
            t1,
            t2,
            limit,
        )
        return limit
    return t2


@dataclass(frozen=True)
class QubitSpec:
    """One physical qubit. ``t2_raw`` keeps the pre-clamp reading and ``text``
    the calibration fields as written."""

    id: int
    t1: float
    t2: float
    t2_raw: float | None = None
    text: tuple[str, str, str] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.t1 <= 0 or self.t2 <= 0:
            raise ValueError(f"qubit {self.id}: T1 and T2 must be positive")
        if self.t2 > RAMSEY_FACTOR * self.t1:
            raise ValueError(f"qubit {self.id}: T2={self.t2} exceeds 2*T1")

    @classmethod
    def calibrated(
        cls,
        qubit_id: int,
        t1: float,
        t2: float,
        text: tuple[str, str, str] | None = None,
    ) -> "QubitSpec":
        """Build from a raw calibration reading, clamping T2 if needed."""
        return cls(qubit_id, t1, clamp_ramsey(t1, t2, qubit_id), t2_raw=t2, text=text)

    @property
    def reported_t2(self) -> float:
        return self.t2 if self.t2_raw is None else self.t2_raw


@dataclass(frozen=True)
class PauliProbs:
    p_i: float
    p_x: float
    p_y: float
    p_z: float

    @property
    def p(self) -> float:
        return self.p_x + self.p_y + self.p_z


def _pta_arrays(t: float, t1, t2) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised (p_X, p_Z) for arrays of T1/T2."""
    e1 = np.exp(-t / np.asarray(t1, dtype=float))
    e2 = np.exp(-t / np.asarray(t2, dtype=float))
    p_x = 0.25 * (1.0 - e1)
    p_z = 0.25 * (1.0 + e1 - 2.0 * e2)
    return p_x, np.maximum(p_z, 0.0)


def pta_probabilities(t: float, spec: QubitSpec) -> PauliProbs:
    if t < 0:
        raise ValueError(f"exposure time must be >= 0, got {t}")
    p_x, p_z = (float(v) for v in _pta_arrays(t, spec.t1, spec.t2))
    return PauliProbs(p_i=1.0 - 2.0 * p_x - p_z, p_x=p_x, p_y=p_x, p_z=p_z)


def _p_total(t: float, t1: float, t2: float) -> float:
    return 0.75 - 0.25 * np.exp(-t / t1) - 0.5 * np.exp(-t / t2)


def physical_error_probability(
    source: QubitSpec | tuple[float, float], t: float
) -> float:
    """p = p_X + p_Y + p_Z for one qubit or for a (mean T1, mean T2) pair."""
    if t < 0:
        raise ValueError(f"exposure time must be >= 0, got {t}")
    t1, t2 = (source.t1, source.t2) if isinstance(source, QubitSpec) else source
    return float(_p_total(t, t1, t2))


def mean_physical_error_probability(specs: Sequence[QubitSpec], t: float) -> float:
    """Arithmetic mean of the per-qubit p values."""
    if not specs:
        raise ValueError("no qubit specs")
    return float(np.mean([physical_error_probability(s, t) for s in specs]))


def mean_parameters(specs: Sequence[QubitSpec]) -> tuple[float, float]:
    if not specs:
        raise ValueError("no qubit specs")
    return (
        float(np.mean([s.t1 for s in specs])),
        float(np.mean([s.t2 for s in specs])),
    )


def solve_time_for_p(target_p: float, mu_t1: float, mu_t2: float) -> float:
    """Exposure time at which the mean-parameter channel reaches ``target_p``."""
    if mu_t1 <= 0 or mu_t2 <= 0:
        raise ValueError("mean T1 and T2 must be positive")
    if target_p == 0:
        return 0.0
    if not 0 < target_p < P_LIMIT:
        raise ValueError(f"target p={target_p} outside achievable range (0, 0.75)")
    hi = max(mu_t1, mu_t2)
    while _p_total(hi, mu_t1, mu_t2) < target_p:
        hi *= 2.0
    return float(
        brentq(
            lambda t: _p_total(t, mu_t1, mu_t2) - target_p,
            0.0,
            hi,
            xtol=SOLVE_XTOL,
            rtol=SOLVE_RTOL,
        )
    )


@dataclass(frozen=True)
class ChannelConfig:
    """Noise over the n lattice qubits; ``specs[j]`` sits at lattice index j."""

    model: str
    specs: tuple[QubitSpec, ...]
    t: float

    def __post_init__(self) -> None:
        if self.model not in NOISE_MODELS:
            raise ValueError(f"unknown noise model {self.model!r}")
        if not self.specs:
            raise ValueError("channel needs at least one qubit")
        if self.t < 0:
            raise ValueError(f"exposure time must be >= 0, got {self.t}")

    @property
    def n_qubits(self) -> int:
        return len(self.specs)

    @cached_property
    def means(self) -> tuple[float, float]:
        return mean_parameters(self.specs)

    @cached_property
    def qubit_probs(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-qubit (p_X, p_Z); p_Y equals p_X."""
        if self.model == NOISE_IID:
            mu_t1, mu_t2 = self.means
            p_x, p_z = _pta_arrays(self.t, mu_t1, mu_t2)
            return np.full(self.n_qubits, p_x), np.full(self.n_qubits, p_z)
        return _pta_arrays(
            self.t, [s.t1 for s in self.specs], [s.t2 for s in self.specs]
        )

    @cached_property
    def thresholds(self) -> np.ndarray:
        """Cumulative (p_X, p_X+p_Y, p_X+p_Y+p_Z) per qubit, shape (n, 3)."""
        p_x, p_z = self.qubit_probs
        return np.stack([p_x, 2.0 * p_x, 2.0 * p_x + p_z], axis=1)

    def physical_error_probability(self) -> float:
        """Mean-parameter p for iid; mean of per-qubit p for inid."""
        if self.model == NOISE_INID:
            return mean_physical_error_probability(self.specs, self.t)
        return physical_error_probability(self.means, self.t)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Counter-based substream for one trial, independent of scheduling."""
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(seed, spawn_key=(trial,)))
    )


def sample_error(config: ChannelConfig, rng: np.random.Generator) -> PauliOperator:
    """One uniform draw per qubit, bucketed into I/X/Y/Z."""
    u = rng.random(config.n_qubits)
    cum = config.thresholds
    x = u < cum[:, 1]
    z = (u >= cum[:, 0]) & (u < cum[:, 2])
    return PauliOperator(x.astype(np.uint8), z.astype(np.uint8))
