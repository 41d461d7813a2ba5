"""Splitting-method integrators defined by drift/kick coefficient lists.

A scheme with coefficients a = [a_1..a_m], b = [b_1..b_m] advances one step
of size tau as

    drift(a_1 tau), kick(b_1 tau), drift(a_2 tau), ..., drift(a_m tau), kick(b_m tau)

applied left to right. Zero coefficients are skipped, so kick-first words
are written with a leading a_1 = 0 and words ending in a drift with a
trailing b_m = 0.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ..errors import ArgumentError, NumericalOverflowError, SchemeError
from ..geometry import PhaseState
from ..systems import SeparableSystem, drift, kick

logger = logging.getLogger(__name__)

DRIFT = "D"
KICK = "K"
CONSISTENCY_TOL = 1e-14

Word = list[tuple[str, float]]


def _normalize(stages: Iterable[tuple[str, float]]) -> Word:
    """Elide zero stages and merge neighbours of the same kind."""
    word: Word = []
    for kind, coef in stages:
        if coef == 0.0:
            continue
        if word and word[-1][0] == kind:
            merged = word[-1][1] + coef
            if merged == 0.0:
                word.pop()
            else:
                word[-1] = (kind, merged)
        else:
            word.append((kind, coef))
    return word


@dataclass(frozen=True)
class SplittingScheme:
    """Coefficient lists ({a_i}, {b_i}) of a splitting integrator and its nominal order."""
    name: str
    a: tuple[float, ...]
    b: tuple[float, ...]
    nominal_order: int
    provenance: str = field(default="", compare=False)

    def __post_init__(self):
        a = tuple(float(x) for x in self.a)
        b = tuple(float(x) for x in self.b)
        if len(a) != len(b):
            raise SchemeError(f"{self.name}: len(a)={len(a)} and len(b)={len(b)} differ")
        if not a:
            raise SchemeError(f"{self.name}: a scheme needs at least one stage")
        if not all(math.isfinite(x) for x in a + b):
            raise SchemeError(f"{self.name}: coefficients must be finite")
        if int(self.nominal_order) < 1:
            raise SchemeError(f"{self.name}: nominal order must be >= 1, got {self.nominal_order}")
        for label, coefs in (("a", a), ("b", b)):
            total = math.fsum(coefs)
            if abs(total - 1.0) > CONSISTENCY_TOL:
                raise SchemeError(f"{self.name}: sum({label}) = {total!r}, expected 1")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "nominal_order", int(self.nominal_order))

    @classmethod
    def from_word(
        cls, name: str, word: Sequence[tuple[str, float]], nominal_order: int, provenance: str = ""
    ) -> "SplittingScheme":
        """Lay an alternating drift/kick word out as drift-first coefficient lists."""
        a: list[float] = []
        b: list[float] = []
        for kind, coef in _normalize(word):
            if kind == DRIFT:
                a.append(coef)
            else:
                if len(a) == len(b):
                    a.append(0.0)
                b.append(coef)
        if len(b) < len(a):
            b.append(0.0)
        return cls(name=name, a=tuple(a), b=tuple(b), nominal_order=nominal_order, provenance=provenance)

    def word(self) -> Word:
        """Normalized stage word: alternating kinds, no zero stages."""
        stages = []
        for ai, bi in zip(self.a, self.b):
            stages.append((DRIFT, ai))
            stages.append((KICK, bi))
        return _normalize(stages)

    @property
    def stages(self) -> int:
        return len(self.word())

    def describe(self) -> dict:
        return {
            "name": self.name,
            "order": self.nominal_order,
            "symmetric": is_symmetric(self),
            "stages": self.stages,
            "provenance": self.provenance,
        }


@dataclass(frozen=True, eq=False)
class Trajectory:
    """States of a fixed-step integration, starting with the initial state."""
    states: tuple[PhaseState, ...]
    step: float

    def __post_init__(self):
        states = tuple(self.states)
        if not states:
            raise ArgumentError("a trajectory holds at least the initial state")
        for prev, curr in zip(states, states[1:]):
            if abs((curr.t - prev.t) - self.step) > 1e-12 * max(1.0, abs(curr.t)):
                raise ArgumentError(
                    f"time step {curr.t - prev.t!r} at t={curr.t!r} differs from {self.step!r}"
                )
        object.__setattr__(self, "states", states)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def final(self) -> PhaseState:
        return self.states[-1]

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.states])

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(times, Q, P) with Q and P of shape (len, dim)."""
        q = np.array([s.q for s in self.states])
        p = np.array([s.p for s in self.states])
        return self.times, q, p


def _locate_overflow(scheme: SplittingScheme, system: SeparableSystem, state: PhaseState, tau: float):
    # Replays a failed step stage by stage so the error names the stage.
    current = state
    with np.errstate(over="ignore", invalid="ignore"):
        for i, (ai, bi) in enumerate(zip(scheme.a, scheme.b), start=1):
            try:
                if ai != 0.0:
                    current = drift(system, current, ai * tau)
                if bi != 0.0:
                    current = kick(system, current, bi * tau)
            except NumericalOverflowError as exc:
                raise exc.annotate(stage=i)
    raise NumericalOverflowError(f"{scheme.name} step by tau={tau!r} produced a non-finite state")


def step(scheme: SplittingScheme, system: SeparableSystem, state: PhaseState, tau: float) -> PhaseState:
    """One step of size tau; time advances by tau."""
    q, p = state.q, state.p
    grad_t, grad_v = system.grad_kinetic, system.grad_potential
    with np.errstate(over="ignore", invalid="ignore"):
        for ai, bi in zip(scheme.a, scheme.b):
            if ai != 0.0:
                q = q + (ai * tau) * grad_t(p)
            if bi != 0.0:
                p = p - (bi * tau) * grad_v(q)
    if not (np.all(np.isfinite(q)) and np.all(np.isfinite(p))):
        _locate_overflow(scheme, system, state, tau)
    return PhaseState._trusted(q, p, state.t + tau)


def propagate(
    scheme: SplittingScheme, system: SeparableSystem, state: PhaseState, tau: float, n_steps: int
) -> PhaseState:
    """Final state after n_steps steps, without keeping the trajectory."""
    if n_steps < 0:
        raise ArgumentError(f"n_steps must be >= 0, got {n_steps}")
    for j in range(n_steps):
        try:
            state = step(scheme, system, state, tau)
        except NumericalOverflowError as exc:
            raise exc.annotate(step_index=j)
    return state


def integrate(
    scheme: SplittingScheme, system: SeparableSystem, initial: PhaseState, tau: float, n_steps: int
) -> Trajectory:
    if n_steps < 0:
        raise ArgumentError(f"n_steps must be >= 0, got {n_steps}")
    states = [initial]
    state = initial
    for j in range(n_steps):
        try:
            state = step(scheme, system, state, tau)
        except NumericalOverflowError as exc:
            raise exc.annotate(step_index=j)
        states.append(state)
    logger.debug("integrated %s for %d steps of %r", scheme.name, n_steps, tau)
    return Trajectory(states=tuple(states), step=tau)


def is_symmetric(scheme: SplittingScheme) -> bool:
    """True iff the normalized stage word is a palindrome."""
    word = scheme.word()
    for (kind, coef), (mirror_kind, mirror_coef) in zip(word, reversed(word)):
        if kind != mirror_kind:
            return False
        if abs(coef - mirror_coef) > CONSISTENCY_TOL * max(1.0, abs(coef)):
            return False
    return True


def adjoint(scheme: SplittingScheme) -> SplittingScheme:
    """The scheme with its stage word reversed."""
    if is_symmetric(scheme):
        name = scheme.name
    elif scheme.name.startswith("adjoint(") and scheme.name.endswith(")"):
        name = scheme.name[len("adjoint("):-1]
    else:
        name = f"adjoint({scheme.name})"
    return SplittingScheme.from_word(
        name, list(reversed(scheme.word())), scheme.nominal_order, scheme.provenance
    )


def yoshida_compose(scheme: SplittingScheme) -> SplittingScheme:
    """Triple-jump composition s(w1 tau) s(w0 tau) s(w1 tau), raising the order by two.

    w1 = 1 / (2 - 2**(1/(k+1))), w0 = 1 - 2 w1 for a symmetric scheme of even order k.
    """
    k = scheme.nominal_order
    if not is_symmetric(scheme):
        raise SchemeError(f"yoshida_compose needs a symmetric scheme; {scheme.name} is not")
    if k % 2:
        raise SchemeError(f"yoshida_compose needs an even order; {scheme.name} has order {k}")
    w1 = 1.0 / (2.0 - 2.0 ** (1.0 / (k + 1)))
    w0 = 1.0 - 2.0 * w1
    word = scheme.word()
    composed = [(kind, w * coef) for w in (w1, w0, w1) for kind, coef in word]
    return SplittingScheme.from_word(
        f"triple-jump({scheme.name})",
        composed,
        k + 2,
        provenance=f"triple-jump composition of {scheme.name}, w1={w1!r}",
    )
