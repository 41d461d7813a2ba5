"""Numerical geometry kernel in canonical coordinates.

Phase-space points, Hamilton's equations, Poisson and Lie brackets and the
symplecticity check of maps, all evaluated with central finite differences.

Sign conventions
----------------
X_H = (dH/dp, -dH/dq)
{f, g} = df/dq . dg/dp - dg/dq . df/dp
[X_f, X_g] = DX_g . X_f - DX_f . X_g

With these, X_{f,g} = -[X_f, X_g].

Step sizes
----------
First derivatives use h_i = eps**(1/3) * (1 + |x_i|). The outer difference of
second-level derivatives (Jacobians of a vector field) uses
h_i = eps**(1/5) * (1 + |x_i|). Quotients divide by the representable spacing
(x + h) - (x - h), which makes the Jacobian of the identity exactly I.
"""
import logging
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from ..errors import ArgumentError, EvaluationError, NumericalOverflowError, StateError

logger = logging.getLogger(__name__)

MACHINE_EPS = float(np.finfo(float).eps)
FIRST_ORDER_STEP = MACHINE_EPS ** (1.0 / 3.0)
SECOND_ORDER_STEP = MACHINE_EPS ** 0.2


def _as_coordinates(values, label: str) -> np.ndarray:
    arr = np.array(values, dtype=float, ndmin=1)
    if arr.ndim != 1:
        raise StateError(f"{label} must be a flat vector, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class PhaseState:
    """A point (q, p) of phase space at time t.

    The coordinate arrays are copied on construction and frozen, so a state
    can be shared between threads.
    """
    q: np.ndarray
    p: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        q = _as_coordinates(self.q, "q")
        p = _as_coordinates(self.p, "p")
        if q.size == 0:
            raise StateError("phase space dimension must be at least 1")
        if q.shape != p.shape:
            raise StateError(f"len(q)={q.size} and len(p)={p.size} differ")
        if not (np.all(np.isfinite(q)) and np.all(np.isfinite(p))):
            raise StateError(f"non-finite coordinates: q={q}, p={p}")
        t = float(self.t)
        if not np.isfinite(t):
            raise StateError(f"non-finite time {t}")
        q.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "t", t)

    @classmethod
    def _trusted(cls, q: np.ndarray, p: np.ndarray, t: float) -> "PhaseState":
        # Hot path for integrators: arrays are fresh, finite and of equal length.
        state = object.__new__(cls)
        q.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(state, "q", q)
        object.__setattr__(state, "p", p)
        object.__setattr__(state, "t", float(t))
        return state

    @classmethod
    def from_vector(cls, vector, t: float = 0.0) -> "PhaseState":
        v = _as_coordinates(vector, "vector")
        if v.size % 2 or v.size == 0:
            raise StateError(f"phase vector needs an even, nonzero length, got {v.size}")
        n = v.size // 2
        return cls(q=v[:n], p=v[n:], t=t)

    @property
    def dim(self) -> int:
        return int(self.q.size)

    @property
    def vector(self) -> np.ndarray:
        """Concatenated (q, p)."""
        return np.concatenate((self.q, self.p))

    def replace(self, **changes) -> "PhaseState":
        return replace(self, **changes)

    def distance(self, other: "PhaseState") -> float:
        """Max-norm of the (q, p) difference; time is ignored."""
        return float(np.max(np.abs(self.vector - other.vector)))

    def __repr__(self) -> str:
        return f"PhaseState(q={self.q.tolist()}, p={self.p.tolist()}, t={self.t!r})"


@dataclass(frozen=True)
class ScalarField:
    """A named, deterministic function on phase space."""
    evaluator: Callable[[PhaseState], float]
    name: str = "H"

    def __call__(self, z: PhaseState) -> float:
        return float(self.evaluator(z))


@dataclass(frozen=True, eq=False)
class TangentVector:
    dq: np.ndarray
    dp: np.ndarray

    def __post_init__(self):
        dq = np.array(self.dq, dtype=float, ndmin=1)
        dp = np.array(self.dp, dtype=float, ndmin=1)
        if dq.shape != dp.shape:
            raise StateError(f"len(dq)={dq.size} and len(dp)={dp.size} differ")
        object.__setattr__(self, "dq", dq)
        object.__setattr__(self, "dp", dp)

    @classmethod
    def from_vector(cls, vector) -> "TangentVector":
        v = np.asarray(vector, dtype=float)
        n = v.size // 2
        return cls(dq=v[:n], dp=v[n:])

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate((self.dq, self.dp))

    def max_norm(self) -> float:
        return float(np.max(np.abs(self.vector)))

    def __add__(self, other: "TangentVector") -> "TangentVector":
        return TangentVector.from_vector(self.vector + other.vector)

    def __sub__(self, other: "TangentVector") -> "TangentVector":
        return TangentVector.from_vector(self.vector - other.vector)

    def __neg__(self) -> "TangentVector":
        return TangentVector.from_vector(-self.vector)

    def __repr__(self) -> str:
        return f"TangentVector(dq={self.dq.tolist()}, dp={self.dp.tolist()})"


def canonical_matrix(n: int) -> np.ndarray:
    """The canonical symplectic matrix [[0, I], [-I, 0]] of size 2n."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def _coordinate_name(i: int, n: int) -> str:
    return f"q[{i}]" if i < n else f"p[{i - n}]"


def _step_sizes(x: np.ndarray, fd_step: Optional[float], base: float) -> np.ndarray:
    if fd_step is None:
        return base * (1.0 + np.abs(x))
    if not fd_step > 0:
        raise ArgumentError(f"fd_step must be positive, got {fd_step}")
    return np.full(x.shape, float(fd_step))


def _shifted(z: PhaseState, i: int, h: float):
    """States z + h e_i and z - h e_i together with their actual spacing."""
    base = z.vector
    plus = base.copy()
    minus = base.copy()
    with np.errstate(over="ignore", invalid="ignore"):
        plus[i] += h
        minus[i] -= h
        spacing = plus[i] - minus[i]
    try:
        return PhaseState.from_vector(plus, z.t), PhaseState.from_vector(minus, z.t), spacing
    except StateError as exc:
        raise EvaluationError(
            f"perturbed point is not finite around {_coordinate_name(i, z.dim)}={base[i]!r}"
        ) from exc


def gradient(H: ScalarField, z: PhaseState, fd_step: Optional[float] = None) -> np.ndarray:
    """Central-difference gradient (dH/dq, dH/dp) at z."""
    n = z.dim
    steps = _step_sizes(z.vector, fd_step, FIRST_ORDER_STEP)
    grad = np.empty(2 * n)
    for i, h in enumerate(steps):
        plus, minus, spacing = _shifted(z, i, h)
        f_plus = H(plus)
        f_minus = H(minus)
        if not (np.isfinite(f_plus) and np.isfinite(f_minus)):
            raise EvaluationError(
                f"{H.name} is not finite around {_coordinate_name(i, n)}={z.vector[i]!r}"
            )
        grad[i] = (f_plus - f_minus) / spacing
    return grad


def hamiltonian_vector_field(
    H: ScalarField, z: PhaseState, fd_step: Optional[float] = None
) -> TangentVector:
    """Hamilton's equations at z: (dq, dp) = (dH/dp, -dH/dq)."""
    grad = gradient(H, z, fd_step)
    n = z.dim
    return TangentVector(dq=grad[n:], dp=-grad[:n])


def poisson_bracket(
    f: ScalarField, g: ScalarField, z: PhaseState, fd_step: Optional[float] = None
) -> float:
    n = z.dim
    gf = gradient(f, z, fd_step)
    gg = gradient(g, z, fd_step)
    return float(np.sum(gf[:n] * gg[n:] - gg[:n] * gf[n:]))


def vector_field_jacobian(
    H: ScalarField,
    z: PhaseState,
    fd_step: Optional[float] = None,
    outer_step: Optional[float] = None,
) -> np.ndarray:
    """2n x 2n Jacobian of X_H at z by nested central differences."""
    n = z.dim
    steps = _step_sizes(z.vector, outer_step, SECOND_ORDER_STEP)
    jac = np.empty((2 * n, 2 * n))
    for j, h in enumerate(steps):
        plus, minus, spacing = _shifted(z, j, h)
        x_plus = hamiltonian_vector_field(H, plus, fd_step).vector
        x_minus = hamiltonian_vector_field(H, minus, fd_step).vector
        jac[:, j] = (x_plus - x_minus) / spacing
    return jac


def lie_bracket(
    Xf_source: ScalarField,
    Xg_source: ScalarField,
    z: PhaseState,
    fd_step: Optional[float] = None,
    outer_step: Optional[float] = None,
) -> TangentVector:
    """[X_f, X_g](z) = DX_g . X_f - DX_f . X_g."""
    xf = hamiltonian_vector_field(Xf_source, z, fd_step).vector
    xg = hamiltonian_vector_field(Xg_source, z, fd_step).vector
    jf = vector_field_jacobian(Xf_source, z, fd_step, outer_step)
    jg = vector_field_jacobian(Xg_source, z, fd_step, outer_step)
    return TangentVector.from_vector(jg @ xf - jf @ xg)


def map_jacobian(
    phase_map: Callable[[PhaseState], PhaseState],
    z: PhaseState,
    fd_step: Optional[float] = None,
) -> np.ndarray:
    """2n x 2n Jacobian of a phase-space map at z by central differences."""
    n = z.dim
    steps = _step_sizes(z.vector, fd_step, FIRST_ORDER_STEP)
    jac = np.empty((2 * n, 2 * n))
    for j, h in enumerate(steps):
        plus, minus, spacing = _shifted(z, j, h)
        try:
            image_plus = phase_map(plus).vector
            image_minus = phase_map(minus).vector
        except (StateError, NumericalOverflowError) as exc:
            raise EvaluationError(
                f"map output is not finite around {_coordinate_name(j, n)}={z.vector[j]!r}"
            ) from exc
        if not (np.all(np.isfinite(image_plus)) and np.all(np.isfinite(image_minus))):
            raise EvaluationError(
                f"map output is not finite around {_coordinate_name(j, n)}={z.vector[j]!r}"
            )
        jac[:, j] = (image_plus - image_minus) / spacing
    return jac


def symplecticity_defect(
    map: Callable[[PhaseState], PhaseState],
    z: PhaseState,
    fd_step: Optional[float] = None,
) -> float:
    """Max-norm of J^T Omega J - Omega for the Jacobian J of `map` at z."""
    jac = map_jacobian(map, z, fd_step)
    omega = canonical_matrix(z.dim)
    defect = float(np.max(np.abs(jac.T @ omega @ jac - omega)))
    logger.debug("symplecticity defect %.3e at %r", defect, z)
    return defect
