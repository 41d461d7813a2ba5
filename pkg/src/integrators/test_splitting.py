import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from src.errors import ArgumentError, CatalogError, NumericalOverflowError, SchemeError
from src.geometry import PhaseState, symplecticity_defect
from src.integrators import (
    DRIFT,
    KICK,
    SplittingScheme,
    Trajectory,
    adjoint,
    available_schemes,
    builtin_scheme,
    integrate,
    is_symmetric,
    propagate,
    step,
    yoshida_compose,
)
from src.systems import available_systems, drift, kick, make_harmonic_oscillator, make_system

SYMMETRIC = ["leapfrog", "sbab1", "saba2", "sbab2", "yoshida4", "yoshida6", "yoshida8"]


def _random_scheme(rng, name="random"):
    a = rng.uniform(0.1, 0.5, size=3)
    b = rng.uniform(0.1, 0.5, size=3)
    a[-1] = 1.0 - a[0] - a[1]
    b[-1] = 1.0 - b[0] - b[1]
    return SplittingScheme(name, a=tuple(a), b=tuple(b), nominal_order=1)


def test_scheme_validation():
    with pytest.raises(SchemeError):
        SplittingScheme("uneven", a=(0.5, 0.5), b=(1.0,), nominal_order=1)
    with pytest.raises(SchemeError):
        SplittingScheme("empty", a=(), b=(), nominal_order=1)
    with pytest.raises(SchemeError):
        SplittingScheme("inconsistent", a=(0.5, 0.4), b=(1.0, 0.0), nominal_order=1)
    with pytest.raises(SchemeError):
        SplittingScheme("order0", a=(1.0,), b=(1.0,), nominal_order=0)


def test_word_normalization():
    scheme = SplittingScheme.from_word(
        "merged", [(DRIFT, 0.25), (DRIFT, 0.25), (KICK, 0.0), (KICK, 1.0), (DRIFT, 0.5)], 2
    )
    assert scheme.word() == [(DRIFT, 0.5), (KICK, 1.0), (DRIFT, 0.5)]
    assert scheme.a == (0.5, 0.5)
    assert scheme.b == (1.0, 0.0)
    assert scheme.stages == 3


@pytest.mark.parametrize("name", available_schemes())
def test_zero_step_is_identity(name):
    system = make_system("spin-orbit")
    state = PhaseState([0.8], [0.1], t=2.0)
    moved = step(builtin_scheme(name), system, state, 0.0)
    assert_array_equal(moved.vector, state.vector)
    assert moved.t == 2.0


def test_leapfrog_step_by_hand():
    """drift(0.05), kick(0.1), drift(0.05) from (1, 0)"""
    system = make_harmonic_oscillator()
    moved = step(builtin_scheme("leapfrog"), system, PhaseState([1.0], [0.0]), 0.1)
    assert_allclose(moved.vector, [0.995, -0.1], atol=1e-15)
    assert moved.t == pytest.approx(0.1)


def test_lie_trotter_is_drift_then_kick():
    system = make_system("pendulum")
    state = PhaseState([0.3], [-0.4])
    expected = kick(system, drift(system, state, 0.2), 0.2)
    assert_array_equal(step(builtin_scheme("lie-trotter"), system, state, 0.2).vector, expected.vector)


def test_integrate_bookkeeping():
    system = make_harmonic_oscillator()
    scheme = builtin_scheme("leapfrog")
    initial = PhaseState([1.0], [0.0])
    assert len(integrate(scheme, system, initial, 0.1, 0)) == 1

    fine = integrate(scheme, system, initial, 0.05, 20)
    coarse = integrate(scheme, system, initial, 0.1, 10)
    assert len(fine) == 21
    assert fine.final.t == pytest.approx(coarse.final.t)
    times, q, p = fine.as_arrays()
    assert q.shape == (21, 1)
    assert_allclose(times, fine.times)


def test_integrate_one_period():
    system = make_harmonic_oscillator()
    n = 628
    trajectory = integrate(builtin_scheme("leapfrog"), system, PhaseState([1.0], [0.0]), 2 * math.pi / n, n)
    assert_allclose(trajectory.final.vector, [1.0, 0.0], atol=1e-3)


def test_propagate_matches_integrate():
    system = make_system("spin-orbit")
    scheme = builtin_scheme("yoshida4")
    initial = PhaseState([0.8], [0.0])
    assert_array_equal(
        propagate(scheme, system, initial, 1 / 128, 256).vector,
        integrate(scheme, system, initial, 1 / 128, 256).final.vector,
    )


def test_trajectory_rejects_irregular_times():
    with pytest.raises(ArgumentError):
        Trajectory(states=(PhaseState([0.0], [0.0], t=0.0), PhaseState([0.0], [0.0], t=0.3)), step=0.1)


def test_overflow_is_located():
    system = make_harmonic_oscillator(omega=1000.0)
    with pytest.raises(NumericalOverflowError) as info:
        integrate(builtin_scheme("leapfrog"), system, PhaseState([1.0], [0.0]), 1.0, 500)
    assert info.value.step_index is not None
    assert info.value.stage is not None
    assert "step" in str(info.value)


def test_symmetry():
    assert is_symmetric(builtin_scheme("leapfrog"))
    assert not is_symmetric(builtin_scheme("lie-trotter"))
    for name in SYMMETRIC:
        assert is_symmetric(builtin_scheme(name)), name


def test_adjoint():
    lie_trotter = builtin_scheme("lie-trotter")
    reversed_lt = adjoint(lie_trotter)
    assert reversed_lt.a == (0.0, 1.0)
    assert reversed_lt.b == (1.0, 0.0)
    assert adjoint(builtin_scheme("leapfrog")) == builtin_scheme("leapfrog")


def test_adjoint_is_an_involution():
    rng = np.random.default_rng(2)
    for _ in range(20):
        scheme = _random_scheme(rng)
        assert adjoint(adjoint(scheme)) == scheme


def test_scheme_composed_with_adjoint_is_symmetric():
    rng = np.random.default_rng(4)
    for _ in range(10):
        scheme = _random_scheme(rng)
        half = [(kind, 0.5 * c) for kind, c in scheme.word()]
        half_adjoint = [(kind, 0.5 * c) for kind, c in adjoint(scheme).word()]
        composed = SplittingScheme.from_word("composed", half + half_adjoint, 2)
        assert not is_symmetric(scheme)
        assert is_symmetric(composed)


def test_yoshida_compose():
    composed = yoshida_compose(builtin_scheme("leapfrog"))
    assert composed.nominal_order == 4
    assert is_symmetric(composed)
    assert math.fsum(composed.a) == pytest.approx(1.0, abs=1e-14)
    assert math.fsum(composed.b) == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(SchemeError):
        yoshida_compose(builtin_scheme("lie-trotter"))
    with pytest.raises(SchemeError):
        yoshida_compose(SplittingScheme("odd", a=(0.5, 0.5), b=(1.0, 0.0), nominal_order=3))


def test_builtin_catalog():
    lie_trotter = builtin_scheme("lie-trotter")
    assert (lie_trotter.a, lie_trotter.b, lie_trotter.nominal_order) == ((1.0,), (1.0,), 1)
    assert builtin_scheme("leapfrog").word() == [(DRIFT, 0.5), (KICK, 1.0), (DRIFT, 0.5)]
    assert builtin_scheme("yoshida4").b[0] == pytest.approx(1.0 / (2.0 - 2.0 ** (1.0 / 3.0)))
    assert builtin_scheme("yoshida4").b[0] == pytest.approx(1.3512071919596578)
    assert [builtin_scheme(f"yoshida{k}").nominal_order for k in (4, 6, 8)] == [4, 6, 8]
    with pytest.raises(CatalogError, match="leapfrog"):
        builtin_scheme("verlet")


def test_saba2_coefficients():
    c1, c2, _ = builtin_scheme("saba2").a
    assert c1 == pytest.approx(0.5 - math.sqrt(3.0) / 6.0, abs=1e-15)
    assert c2 == pytest.approx(math.sqrt(3.0) / 3.0, abs=1e-15)


@pytest.mark.parametrize("system_name", available_systems())
@pytest.mark.parametrize("name", available_schemes())
def test_steps_are_symplectic(name, system_name):
    scheme = builtin_scheme(name)
    system = make_system(system_name)
    rng = np.random.default_rng(8)
    for q, p in rng.uniform(-1.0, 1.0, size=(50, 2)):
        defect = symplecticity_defect(lambda z: step(scheme, system, z, 0.1), PhaseState([q], [p]))
        assert defect <= 1e-7


@pytest.mark.parametrize("system_name", available_systems())
@pytest.mark.parametrize("name", SYMMETRIC)
def test_symmetric_steps_are_reversible(name, system_name):
    scheme = builtin_scheme(name)
    system = make_system(system_name)
    start = PhaseState([0.7], [-0.3])
    back = step(scheme, system, step(scheme, system, start, 0.1), -0.1)
    assert_allclose(back.vector, start.vector, atol=1e-12)
