"""Energy observables: error series, the oscillation functional and a
length-like surrogate over parareal iterations.

The surrogate sums, over iterations, the oscillation across nodes of the
energy change made by each update. It is a computable stand-in for the
length of the iteration path and is not the Hofer distance.
"""
import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from ..errors import ArgumentError
from ..integrators.splitting import Trajectory
from ..systems import SeparableSystem

if TYPE_CHECKING:
    from ..parareal.engine import IterationRecord, PararealRun

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnergySeries:
    times: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise ArgumentError(
                f"times and values differ in length ({len(self.times)} vs {len(self.values)})"
            )
        steps = np.diff(np.asarray(self.times, dtype=float))
        if not (np.all(steps > 0) or np.all(steps < 0)):
            raise ArgumentError("times must be strictly monotone")

    def __len__(self) -> int:
        return len(self.values)

    def oscillation(self) -> float:
        return oscillation(self.values)


def oscillation(series: Sequence[float]) -> float:
    """max - min of a non-empty list of finite values."""
    values = np.asarray(series, dtype=float)
    if values.size == 0:
        raise ArgumentError("oscillation of an empty series")
    if not np.all(np.isfinite(values)):
        raise ArgumentError("oscillation of a series with non-finite values")
    return float(values.max() - values.min())


def energy_error_series(trajectory: Trajectory, system: SeparableSystem) -> EnergySeries:
    h0 = system.energy(trajectory.states[0])
    values = tuple(system.energy(s) - h0 for s in trajectory.states)
    return EnergySeries(times=tuple(float(t) for t in trajectory.times), values=values)


def drift_rate(series: EnergySeries) -> float:
    """Least-squares slope of the energy error against time."""
    if len(series) < 2:
        raise ArgumentError("drift rate needs at least two samples")
    slope, _ = np.polyfit(np.asarray(series.times), np.asarray(series.values), 1)
    return float(slope)


def iteration_energy_oscillation(record: "IterationRecord") -> float:
    """Oscillation of H(y_n) - H(y_0) across the nodes of one iterate."""
    return oscillation(record.energy_series)


def hofer_surrogate_terms(run: "PararealRun", system: SeparableSystem) -> list[float]:
    """Per-iteration terms osc_n(H(y_n^k) - H(y_n^(k-1))) for k = 1..K."""
    if len(run.iterations) < 2:
        raise ArgumentError("the surrogate length needs at least two iterates")
    energies = [
        np.array([system.energy(s) for s in record.node_states])
        for record in run.iterations
    ]
    return [oscillation(curr - prev) for prev, curr in zip(energies, energies[1:])]


def hofer_surrogate_length(run: "PararealRun", system: SeparableSystem) -> float:
    terms = hofer_surrogate_terms(run, system)
    logger.debug("surrogate length over %d iterations: %r", len(terms), sum(terms))
    return float(sum(terms))
