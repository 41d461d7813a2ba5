"""Separable Hamiltonian systems H = T(p) + V(q) with exact drift/kick flows.

All systems are autonomous. Time only advances in integrator steps, never
inside `drift` or `kick`, so the two sub-flows can be composed in any order.
"""
import logging
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Mapping, Optional

import numpy as np

from ..errors import CatalogError, NumericalOverflowError, ParameterError
from ..geometry import PhaseState, ScalarField

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpinOrbitParams:
    """Parameters of the one-dimensional spin-orbit Hamiltonian."""
    epsilon: float = 0.1
    alpha: float = 0.01
    theta: float = 0.2

    def __post_init__(self):
        for name in ("epsilon", "alpha", "theta"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.epsilon < 0:
            raise ParameterError(f"epsilon must be >= 0, got {self.epsilon}")


@dataclass(frozen=True, eq=False)
class SeparableSystem:
    """A Hamiltonian H(q, p) = T(p) + V(q) given by energy and gradient evaluators.

    `exact_flow(state, t)`, when present, is the closed-form flow of the full
    Hamiltonian and serves as an oracle.
    """
    name: str
    dim: int
    kinetic: Callable[[np.ndarray], float]
    potential: Callable[[np.ndarray], float]
    grad_kinetic: Callable[[np.ndarray], np.ndarray]
    grad_potential: Callable[[np.ndarray], np.ndarray]
    params: Mapping[str, float] = field(default_factory=dict)
    exact_flow: Optional[Callable[[PhaseState, float], PhaseState]] = None

    def __post_init__(self):
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))

    def energy(self, state: PhaseState) -> float:
        return float(self.kinetic(state.p) + self.potential(state.q))

    def kinetic_field(self) -> ScalarField:
        return ScalarField(lambda z: self.kinetic(z.p), name=f"T[{self.name}]")

    def potential_field(self) -> ScalarField:
        return ScalarField(lambda z: self.potential(z.q), name=f"V[{self.name}]")

    def hamiltonian_field(self) -> ScalarField:
        return ScalarField(self.energy, name=f"H[{self.name}]")

    @property
    def has_exact_flow(self) -> bool:
        return self.exact_flow is not None

    def __repr__(self) -> str:
        params = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"SeparableSystem({self.name}: {params})"


def _half_square(x: np.ndarray) -> float:
    return 0.5 * float(np.dot(x, x))


def _identity(x: np.ndarray) -> np.ndarray:
    return x


def make_harmonic_oscillator(omega: float = 1.0) -> SeparableSystem:
    """H = p^2/2 + omega^2 q^2/2, whose exact flow is a rotation."""
    omega = float(omega)
    if not (math.isfinite(omega) and omega > 0):
        raise ParameterError(f"omega must be positive, got {omega}")
    omega2 = omega * omega

    def potential(q):
        return 0.5 * omega2 * float(np.dot(q, q))

    def grad_potential(q):
        return omega2 * q

    def exact_flow(state: PhaseState, t: float) -> PhaseState:
        c = math.cos(omega * t)
        s = math.sin(omega * t)
        q = state.q * c + state.p * (s / omega)
        p = -state.q * (omega * s) + state.p * c
        return PhaseState(q=q, p=p, t=state.t + t)

    return SeparableSystem(
        name="harmonic",
        dim=1,
        kinetic=_half_square,
        potential=potential,
        grad_kinetic=_identity,
        grad_potential=grad_potential,
        params={"omega": omega},
        exact_flow=exact_flow,
    )


def make_pendulum(epsilon: float = 0.1) -> SeparableSystem:
    """H = p^2/2 - epsilon cos(2q)."""
    epsilon = float(epsilon)
    if not math.isfinite(epsilon):
        raise ParameterError(f"epsilon must be finite, got {epsilon}")

    def potential(q):
        return -epsilon * float(np.sum(np.cos(2.0 * q)))

    def grad_potential(q):
        return 2.0 * epsilon * np.sin(2.0 * q)

    return SeparableSystem(
        name="pendulum",
        dim=1,
        kinetic=_half_square,
        potential=potential,
        grad_kinetic=_identity,
        grad_potential=grad_potential,
        params={"epsilon": epsilon},
    )


def make_spin_orbit(params: Optional[SpinOrbitParams] = None) -> SeparableSystem:
    """H = p^2/2 - eps (cos 2q + alpha (cos(2q + theta) - 7 cos(2q - theta))).

    The perturbation is read as cos(2q + theta) - 7 cos(2q - theta), with
    theta a phase; the -7 coefficient is kept literally.
    """
    params = params or SpinOrbitParams()
    eps, alpha, theta = params.epsilon, params.alpha, params.theta

    def potential(q):
        two_q = 2.0 * q
        value = np.cos(two_q) + alpha * (np.cos(two_q + theta) - 7.0 * np.cos(two_q - theta))
        return -eps * float(np.sum(value))

    def grad_potential(q):
        two_q = 2.0 * q
        return eps * (
            2.0 * np.sin(two_q)
            + alpha * (2.0 * np.sin(two_q + theta) - 14.0 * np.sin(two_q - theta))
        )

    return SeparableSystem(
        name="spin-orbit",
        dim=1,
        kinetic=_half_square,
        potential=potential,
        grad_kinetic=_identity,
        grad_potential=grad_potential,
        params={"epsilon": eps, "alpha": alpha, "theta": theta},
    )


def drift(system: SeparableSystem, state: PhaseState, tau: float) -> PhaseState:
    """Exact flow of X_T for time tau: q <- q + tau grad T(p)."""
    q = state.q + tau * system.grad_kinetic(state.p)
    if not np.all(np.isfinite(q)):
        raise NumericalOverflowError(f"drift by tau={tau!r} produced non-finite q")
    return PhaseState._trusted(q, state.p, state.t)


def kick(system: SeparableSystem, state: PhaseState, tau: float) -> PhaseState:
    """Exact flow of X_V for time tau: p <- p - tau grad V(q)."""
    p = state.p - tau * system.grad_potential(state.q)
    if not np.all(np.isfinite(p)):
        raise NumericalOverflowError(f"kick by tau={tau!r} produced non-finite p")
    return PhaseState._trusted(state.q, p, state.t)


_FACTORIES = {
    "harmonic": (make_harmonic_oscillator, ("omega",)),
    "pendulum": (make_pendulum, ("epsilon",)),
    "spin-orbit": (lambda **kw: make_spin_orbit(SpinOrbitParams(**kw)), ("epsilon", "alpha", "theta")),
}


def available_systems() -> list[str]:
    return list(_FACTORIES)


def make_system(name: str, **params) -> SeparableSystem:
    """Build a catalog system by name; parameters left as None take their defaults."""
    if name not in _FACTORIES:
        raise CatalogError(f"Unknown system '{name}'. Available: {available_systems()}")
    factory, accepted = _FACTORIES[name]
    given = {k: v for k, v in params.items() if v is not None}
    unexpected = sorted(set(given) - set(accepted))
    if unexpected:
        raise ParameterError(f"system '{name}' does not take {unexpected}; accepted: {list(accepted)}")
    system = factory(**given)
    logger.debug("built system %r", system)
    return system
