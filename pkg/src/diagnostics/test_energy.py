import numpy as np
import pytest

from src.errors import ArgumentError
from src.geometry import PhaseState
from src.diagnostics import (
    EnergySeries,
    drift_rate,
    energy_error_series,
    hofer_surrogate_length,
    hofer_surrogate_terms,
    iteration_energy_oscillation,
    oscillation,
)
from src.integrators import Trajectory, builtin_scheme, integrate
from src.parareal import PropagatorPair, TwoLevelGrid, parareal_iterate, run
from src.systems import make_harmonic_oscillator, make_pendulum

LEAPFROG = builtin_scheme("leapfrog")
START = PhaseState([0.8], [0.0])

# largest C with osc <= C tau^2 for leapfrog on the pendulum from (0.8, 0), rounded up;
# measured by others/calibrate_bounds.py
PENDULUM_LEAPFROG_BOUND = 0.0075


def test_oscillation():
    assert oscillation([2.5, 2.5, 2.5]) == 0.0
    assert oscillation([0.0, 3.0, 1.0]) == 3.0
    assert oscillation([-1e-3]) == 0.0
    with pytest.raises(ArgumentError):
        oscillation([])
    with pytest.raises(ArgumentError):
        oscillation([0.0, float("nan")])


def test_oscillation_ignores_constant_offsets():
    rng = np.random.default_rng(3)
    values = rng.normal(size=40)
    assert oscillation(values + 7.0) == pytest.approx(oscillation(values), abs=1e-14)


def test_energy_series_validation():
    with pytest.raises(ArgumentError):
        EnergySeries(times=(0.0, 1.0), values=(0.0,))
    with pytest.raises(ArgumentError):
        EnergySeries(times=(0.0, 1.0, 1.0), values=(0.0, 0.0, 0.0))
    with pytest.raises(ArgumentError):
        EnergySeries(times=(0.0, 1.0, 0.5), values=(0.0, 0.0, 0.0))
    assert len(EnergySeries(times=(2.0, 1.0, 0.0), values=(0.0, 0.1, 0.0))) == 3


def test_exact_flow_conserves_energy():
    system = make_harmonic_oscillator()
    states = tuple(system.exact_flow(START, 0.1 * k) for k in range(100))
    series = energy_error_series(Trajectory(states=states, step=0.1), system)
    assert len(series) == 100
    assert series.oscillation() <= 1e-13


def test_single_state_has_zero_error():
    system = make_pendulum()
    series = energy_error_series(integrate(LEAPFROG, system, START, 0.1, 0), system)
    assert series.values == (0.0,)
    assert series.oscillation() == 0.0


def test_leapfrog_energy_oscillation_is_bounded():
    system = make_pendulum(0.1)
    tau = 0.1
    series = energy_error_series(integrate(LEAPFROG, system, START, tau, 10_000), system)
    assert series.oscillation() <= PENDULUM_LEAPFROG_BOUND * tau ** 2


def test_leapfrog_energy_error_does_not_drift():
    system = make_pendulum(0.1)
    series = energy_error_series(integrate(LEAPFROG, system, START, 0.1, 100_000), system)
    assert abs(drift_rate(series)) <= 1e-10


def test_energy_oscillation_halves_quadratically():
    system = make_pendulum(0.1)
    coarse = energy_error_series(integrate(LEAPFROG, system, START, 0.1, 1000), system)
    fine = energy_error_series(integrate(LEAPFROG, system, START, 0.05, 2000), system)
    assert coarse.oscillation() / fine.oscillation() == pytest.approx(4.0, abs=0.5)


def test_time_reversal_keeps_oscillation():
    system = make_pendulum(0.1)
    forward = integrate(LEAPFROG, system, START, 0.1, 1000)
    backward = integrate(LEAPFROG, system, forward.final, -0.1, 1000)
    back_series = energy_error_series(backward, system)
    assert back_series.times[0] > back_series.times[-1]
    assert energy_error_series(forward, system).oscillation() == pytest.approx(
        back_series.oscillation(), abs=1e-12
    )


def test_drift_rate_needs_two_samples():
    with pytest.raises(ArgumentError):
        drift_rate(EnergySeries(times=(0.0,), values=(0.0,)))
    assert drift_rate(EnergySeries(times=(0.0, 1.0, 2.0), values=(0.0, 0.5, 1.0))) == pytest.approx(0.5)


def test_iteration_energy_oscillation():
    system = make_harmonic_oscillator()
    grid = TwoLevelGrid(t_end=5.0, n_branches=10, n_fine=50)
    result = run(PropagatorPair.matched(LEAPFROG, grid), system, START, grid)
    for record in result.iterations:
        assert record.energy_series[0] == 0.0
        assert iteration_energy_oscillation(record) == oscillation(record.energy_series)


def test_surrogate_vanishes_for_identical_propagators():
    system = make_harmonic_oscillator()
    grid = TwoLevelGrid(t_end=2.0, n_branches=4, n_fine=8)
    pair = PropagatorPair(LEAPFROG, LEAPFROG, coarse_substeps=8)
    result = run(pair, system, PhaseState([1.0], [0.0]), grid)
    assert hofer_surrogate_terms(result, system) == [0.0]
    assert hofer_surrogate_length(result, system) == 0.0


def test_surrogate_term_after_exact_convergence_is_zero():
    """iterating past k = N leaves the nodes unchanged"""
    system = make_harmonic_oscillator()
    grid = TwoLevelGrid(t_end=3.0, n_branches=3, n_fine=20)
    pair = PropagatorPair.matched(LEAPFROG, grid)
    result = run(pair, system, START, grid, tol=1e-300)
    result.iterations.append(parareal_iterate(pair, system, result.final, grid))
    terms = hofer_surrogate_terms(result, system)
    assert len(terms) == len(result.iterations) - 1
    assert terms[-1] == 0.0
    assert hofer_surrogate_length(result, system) == pytest.approx(sum(terms))


def test_surrogate_needs_two_iterates():
    system = make_harmonic_oscillator()
    grid = TwoLevelGrid(t_end=1.0, n_branches=1, n_fine=4)
    result = run(PropagatorPair.matched(LEAPFROG, grid), system, START, grid)
    del result.iterations[1:]
    with pytest.raises(ArgumentError):
        hofer_surrogate_terms(result, system)
