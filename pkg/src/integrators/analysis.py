import logging
import math
from typing import Sequence

import numpy as np

from ..errors import ArgumentError, ConfigurationError
from ..geometry import PhaseState
from ..systems import SeparableSystem
from .splitting import SplittingScheme, integrate, propagate

logger = logging.getLogger(__name__)

DIVISIBILITY_TOL = 1e-9


def steps_for(t_end: float, tau: float) -> int:
    """Number of steps of size tau covering t_end; tau must divide t_end."""
    if not (tau > 0 and math.isfinite(tau)):
        raise ConfigurationError(f"step size must be positive and finite, got {tau!r}")
    ratio = t_end / tau
    if not math.isfinite(ratio):
        raise ConfigurationError(f"tau={tau!r} is too small for t_end={t_end!r}")
    n = round(ratio)
    if n < 1 or abs(n * tau - t_end) > DIVISIBILITY_TOL * max(1.0, abs(t_end)):
        raise ConfigurationError(f"tau={tau!r} does not divide t_end={t_end!r}")
    return int(n)


def fit_slope(taus: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(tau)."""
    errors = np.asarray(errors, dtype=float)
    if np.any(~np.isfinite(errors)) or np.any(errors <= 0):
        raise ArgumentError(f"errors must be positive and finite for a log-log fit, got {errors}")
    slope, _ = np.polyfit(np.log(np.asarray(taus, dtype=float)), np.log(errors), 1)
    return float(slope)


def convergence_errors(
    scheme: SplittingScheme,
    system: SeparableSystem,
    initial: PhaseState,
    t_end: float,
    taus: Sequence[float],
) -> tuple[list[float], list[float]]:
    """Final-state errors at t_end for each tau, sorted by decreasing tau.

    The reference is the system's exact flow when it has one, otherwise the
    same scheme at tau_min / 10.
    """
    taus = sorted({float(t) for t in taus}, reverse=True)
    if len(taus) < 3:
        raise ArgumentError(f"need at least 3 distinct step sizes, got {taus}")
    n_steps = [steps_for(t_end, tau) for tau in taus]

    if system.has_exact_flow:
        reference = system.exact_flow(initial, t_end)
    else:
        tau_ref = taus[-1] / 10.0
        if not tau_ref > 0:
            raise ConfigurationError(f"reference step tau_min/10 underflows for tau_min={taus[-1]!r}")
        reference = propagate(scheme, system, initial, tau_ref, n_steps[-1] * 10)
        logger.debug("self-convergence reference with tau=%r", tau_ref)

    errors = []
    for tau, n in zip(taus, n_steps):
        final = propagate(scheme, system, initial, tau, n)
        errors.append(final.distance(reference))
    return taus, errors


def empirical_order(
    scheme: SplittingScheme,
    system: SeparableSystem,
    initial: PhaseState,
    t_end: float,
    taus: Sequence[float],
) -> float:
    """Observed global order: slope of log(error) vs log(tau)."""
    taus, errors = convergence_errors(scheme, system, initial, t_end, taus)
    slope = fit_slope(taus, errors)
    logger.info("%s on %s: empirical order %.3f (nominal %d)",
                scheme.name, system.name, slope, scheme.nominal_order)
    return slope


def energy_oscillation(
    scheme: SplittingScheme,
    system: SeparableSystem,
    initial: PhaseState,
    tau: float,
    n_steps: int,
) -> float:
    """max - min of H(state) - H(initial) along the trajectory."""
    trajectory = integrate(scheme, system, initial, tau, n_steps)
    h0 = system.energy(initial)
    errors = np.array([system.energy(s) - h0 for s in trajectory.states])
    return float(np.max(errors) - np.min(errors))
