import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from src.errors import CatalogError, NumericalOverflowError, ParameterError
from src.geometry import PhaseState, gradient, poisson_bracket, symplecticity_defect
from src.systems import (
    SpinOrbitParams,
    available_systems,
    drift,
    kick,
    make_harmonic_oscillator,
    make_pendulum,
    make_spin_orbit,
    make_system,
)


def _spin_orbit_energy(q, p, eps=0.1, alpha=0.01, theta=0.2):
    # written out independently of the catalog
    return p * p / 2 - eps * math.cos(2 * q) - eps * alpha * math.cos(2 * q + theta) \
        + 7 * eps * alpha * math.cos(2 * q - theta)


def test_harmonic_energy():
    assert make_harmonic_oscillator(1.0).energy(PhaseState([1.0], [0.0])) == 0.5
    assert make_harmonic_oscillator(2.0).energy(PhaseState([0.5], [0.5])) == pytest.approx(0.625)


def test_harmonic_exact_flow_quarter_turn():
    system = make_harmonic_oscillator(1.0)
    state = system.exact_flow(PhaseState([1.0], [0.0]), math.pi / 2)
    assert_allclose(state.vector, [0.0, -1.0], atol=1e-15)
    assert state.t == pytest.approx(math.pi / 2)


@pytest.mark.parametrize("omega", [0.0, -1.0, float("nan")])
def test_harmonic_rejects_bad_frequency(omega):
    with pytest.raises(ParameterError):
        make_harmonic_oscillator(omega)


def test_pendulum_values():
    system = make_pendulum(0.1)
    assert system.energy(PhaseState([0.0], [0.0])) == pytest.approx(-0.1)
    assert_allclose(system.grad_potential(np.array([0.8])), [0.2 * math.sin(1.6)], rtol=1e-15)


def test_pendulum_without_coupling_is_free():
    system = make_pendulum(0.0)
    rng = np.random.default_rng(0)
    for q in rng.uniform(-5.0, 5.0, size=20):
        assert system.potential(np.array([q])) == 0.0


def test_spin_orbit_reduces_to_pendulum():
    spin_orbit = make_spin_orbit(SpinOrbitParams(epsilon=0.1, alpha=0.0, theta=0.2))
    pendulum = make_pendulum(0.1)
    rng = np.random.default_rng(1)
    for q in rng.uniform(-4.0, 4.0, size=50):
        x = np.array([q])
        assert spin_orbit.potential(x) == pendulum.potential(x)
        assert_array_equal(spin_orbit.grad_potential(x), pendulum.grad_potential(x))


def test_spin_orbit_energy_matches_direct_transcription():
    system = make_spin_orbit(SpinOrbitParams(epsilon=0.1, alpha=0.01, theta=0.2))
    value = system.energy(PhaseState([0.8], [0.0]))
    assert value == pytest.approx(_spin_orbit_energy(0.8, 0.0), abs=1e-15)


@pytest.mark.parametrize("name", ["harmonic", "pendulum", "spin-orbit"])
def test_gradients_match_finite_differences(name):
    """analytic gradients agree with central differences of the energies"""
    system = make_system(name)
    rng = np.random.default_rng(5)
    for q, p in rng.uniform(-2.0, 2.0, size=(100, 2)):
        z = PhaseState([q], [p])
        numeric = gradient(system.hamiltonian_field(), z)
        assert_allclose(numeric[:1], system.grad_potential(z.q), atol=1e-8)
        assert_allclose(numeric[1:], system.grad_kinetic(z.p), atol=1e-8)
        assert math.isfinite(system.energy(z))


def test_spin_orbit_params_validation():
    with pytest.raises(ParameterError):
        SpinOrbitParams(epsilon=-0.1)
    with pytest.raises(ParameterError):
        SpinOrbitParams(theta=float("inf"))


def test_drift():
    system = make_harmonic_oscillator()
    state = PhaseState([1.0], [2.0], t=3.0)
    moved = drift(system, state, 0.5)
    assert_array_equal(moved.vector, [2.0, 2.0])
    assert moved.t == 3.0
    assert_array_equal(drift(system, state, 0.0).vector, state.vector)

    halves = drift(system, drift(system, state, 0.25), 0.25)
    assert_allclose(halves.vector, moved.vector, atol=1e-15)


def test_kick():
    system = make_harmonic_oscillator()
    state = PhaseState([1.0], [0.0])
    assert_allclose(kick(system, state, 0.1).vector, [1.0, -0.1], atol=1e-15)
    assert_array_equal(kick(system, state, 0.0).vector, state.vector)
    halves = kick(system, kick(system, state, 0.05), 0.05)
    assert_allclose(halves.vector, kick(system, state, 0.1).vector, atol=1e-15)


def test_drift_overflow():
    system = make_harmonic_oscillator()
    with np.errstate(over="ignore"), pytest.raises(NumericalOverflowError):
        drift(system, PhaseState([1.0], [1e308]), 10.0)


def test_registry():
    assert available_systems() == ["harmonic", "pendulum", "spin-orbit"]
    assert make_system("harmonic", omega=2.0).params["omega"] == 2.0
    assert make_system("spin-orbit", epsilon=0.2, alpha=None).params["alpha"] == 0.01
    with pytest.raises(CatalogError, match="Available"):
        make_system("kepler")
    with pytest.raises(ParameterError):
        make_system("harmonic", epsilon=0.1)


@pytest.mark.parametrize("name", ["harmonic", "pendulum", "spin-orbit"])
def test_drift_and_kick_are_symplectic(name):
    system = make_system(name)
    rng = np.random.default_rng(9)
    for q, p in rng.uniform(-2.0, 2.0, size=(20, 2)):
        z = PhaseState([q], [p])
        assert symplecticity_defect(lambda s: drift(system, s, 0.3), z) <= 1e-7
        assert symplecticity_defect(lambda s: kick(system, s, 0.3), z) <= 1e-7


@pytest.mark.parametrize("name", ["harmonic", "pendulum", "spin-orbit"])
def test_sub_flows_preserve_their_own_energy(name):
    """T is unchanged by a drift and V by a kick, bit for bit"""
    system = make_system(name)
    kinetic, potential = system.kinetic_field(), system.potential_field()
    rng = np.random.default_rng(10)
    for q, p in rng.uniform(-2.0, 2.0, size=(20, 2)):
        z = PhaseState([q], [p])
        assert kinetic(drift(system, z, 0.7)) == kinetic(z)
        assert potential(kick(system, z, 0.7)) == potential(z)


def test_spin_orbit_sub_flows_do_not_commute():
    system = make_spin_orbit(SpinOrbitParams(epsilon=0.1, alpha=0.01, theta=0.2))
    z = PhaseState([0.8], [0.3])
    bracket = poisson_bracket(system.kinetic_field(), system.potential_field(), z)
    assert abs(bracket) > 0.01
    assert bracket == pytest.approx(-0.3 * system.grad_potential(z.q)[0], abs=1e-8)
