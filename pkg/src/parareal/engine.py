"""Parareal iteration over a two-level grid.

Iteration k updates the node states with

    y[n+1]^k = F(y[n]^(k-1)) + (G(y[n]^k) - G(y[n]^(k-1)))

where F is the fine propagator over one branch and G the coarse one. The
fine values of an iteration depend only on the previous iterate, so all
branches are swept concurrently; the coarse correction is sequential.
After k iterations nodes 0..k equal the sequential fine solution exactly,
so a run stops at k = N at the latest.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence, Union

import numpy as np
from tqdm import tqdm

from ..diagnostics.energy import hofer_surrogate_length, iteration_energy_oscillation
from ..errors import (
    ArgumentError,
    ConfigurationError,
    NumericalOverflowError,
    StateError,
    SymplecticError,
)
from ..geometry import PhaseState
from ..integrators.splitting import SplittingScheme, is_symmetric, propagate
from ..systems import SeparableSystem
from .grid import PropagatorPair, TwoLevelGrid
from .sweep import parallel_sweep

logger = logging.getLogger(__name__)

# fine, coarse_new, coarse_old -> next node vector
Corrector = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


class CorrectorKind(str, Enum):
    PURE_PARAREAL = "pure-parareal"


def _pure_parareal(fine: np.ndarray, coarse_new: np.ndarray, coarse_old: np.ndarray) -> np.ndarray:
    # The difference is taken first so that coarse_new == coarse_old gives fine bit for bit.
    return fine + (coarse_new - coarse_old)


_CORRECTORS: dict[str, Corrector] = {CorrectorKind.PURE_PARAREAL.value: _pure_parareal}


def register_corrector(kind: str, corrector: Corrector) -> None:
    """Make an additional correction rule available by name."""
    kind = str(getattr(kind, "value", kind))
    if kind in _CORRECTORS:
        raise ConfigurationError(f"corrector '{kind}' is already registered")
    _CORRECTORS[kind] = corrector


def available_correctors() -> list[str]:
    return list(_CORRECTORS)


def resolve_corrector(kind: Union[CorrectorKind, str]) -> Corrector:
    name = str(getattr(kind, "value", kind))
    if name not in _CORRECTORS:
        raise ConfigurationError(f"Unknown corrector '{name}'. Available: {available_correctors()}")
    return _CORRECTORS[name]


@dataclass(frozen=True)
class IterationRecord:
    k: int
    node_states: tuple[PhaseState, ...]
    defect: float
    energy_series: tuple[float, ...]
    fine_evaluations: int = 0


@dataclass
class PararealRun:
    """All iterates of one run, in order, starting with the coarse guess (k = 0)."""
    grid: TwoLevelGrid
    pair: PropagatorPair
    system_name: str
    corrector: str
    tol: float
    k_max: int
    iterations: list[IterationRecord] = field(default_factory=list)
    converged_at: Optional[int] = None
    converged_by: Optional[str] = None

    @property
    def converged(self) -> bool:
        return self.converged_at is not None

    @property
    def final(self) -> IterationRecord:
        return self.iterations[-1]

    @property
    def defects(self) -> list[float]:
        """Defects of iterations 1..K."""
        return [record.defect for record in self.iterations[1:]]

    @property
    def fine_evaluations(self) -> int:
        return sum(record.fine_evaluations for record in self.iterations)


def coarse_propagate(
    pair: PropagatorPair,
    system: SeparableSystem,
    state: PhaseState,
    grid: TwoLevelGrid,
    branch: Optional[int] = None,
) -> PhaseState:
    """G: coarse_substeps steps of Dt / coarse_substeps with the coarse scheme."""
    tau = grid.coarse_step / pair.coarse_substeps
    try:
        return propagate(pair.coarse_scheme, system, state, tau, pair.coarse_substeps)
    except NumericalOverflowError as exc:
        raise exc.annotate(branch=branch)


def fine_propagate(
    pair: PropagatorPair,
    system: SeparableSystem,
    state: PhaseState,
    grid: TwoLevelGrid,
    branch: Optional[int] = None,
) -> PhaseState:
    """F: N_delta steps of dt with the fine scheme."""
    try:
        return propagate(pair.fine_scheme, system, state, grid.fine_step, grid.n_fine)
    except NumericalOverflowError as exc:
        raise exc.annotate(branch=branch)


def _energy_series(system: SeparableSystem, nodes: Sequence[PhaseState]) -> tuple[float, ...]:
    h0 = system.energy(nodes[0])
    return tuple(system.energy(s) - h0 for s in nodes)


def initial_guess(
    pair: PropagatorPair,
    system: SeparableSystem,
    y0: PhaseState,
    grid: TwoLevelGrid,
) -> IterationRecord:
    """Iterate 0: the coarse propagator chained across all branches."""
    nodes = [y0]
    for n in range(grid.n_branches):
        advanced = coarse_propagate(pair, system, nodes[n], grid, branch=n)
        nodes.append(advanced.replace(t=grid.node_time(n + 1)))
    return IterationRecord(
        k=0,
        node_states=tuple(nodes),
        defect=math.inf,
        energy_series=_energy_series(system, nodes),
    )


def parareal_iterate(
    pair: PropagatorPair,
    system: SeparableSystem,
    prev: IterationRecord,
    grid: TwoLevelGrid,
    corrector: Union[CorrectorKind, str] = CorrectorKind.PURE_PARAREAL,
    threads: int = 1,
    exploit_exactness: bool = False,
) -> IterationRecord:
    """One parareal iteration from `prev`.

    With exploit_exactness the nodes already known to be exact (0..prev.k)
    are copied and their branches are not swept again; the node states are
    identical either way.
    """
    combine = resolve_corrector(corrector)
    old = prev.node_states
    if len(old) != grid.n_branches + 1:
        raise ArgumentError(
            f"previous iterate has {len(old)} nodes, grid needs {grid.n_branches + 1}"
        )
    start = min(prev.k, grid.n_branches) if exploit_exactness else 0
    branches = range(start, grid.n_branches)

    fine_values = parallel_sweep(
        lambda n: fine_propagate(pair, system, old[n], grid, branch=n),
        branches,
        threads=threads,
    )

    new = list(old[: start + 1])
    for n, fine in zip(branches, fine_values):
        coarse_old = coarse_propagate(pair, system, old[n], grid, branch=n)
        coarse_new = coarse_propagate(pair, system, new[n], grid, branch=n)
        combined = combine(fine.vector, coarse_new.vector, coarse_old.vector)
        try:
            new.append(PhaseState.from_vector(combined, t=grid.node_time(n + 1)))
        except StateError as exc:
            raise NumericalOverflowError(
                f"parareal correction produced a non-finite node: {exc}", branch=n
            ) from exc

    defect = max(a.distance(b) for a, b in zip(old, new))
    return IterationRecord(
        k=prev.k + 1,
        node_states=tuple(new),
        defect=defect,
        energy_series=_energy_series(system, new),
        fine_evaluations=len(branches),
    )


def run(
    pair: PropagatorPair,
    system: SeparableSystem,
    y0: PhaseState,
    grid: TwoLevelGrid,
    corrector: Union[CorrectorKind, str] = CorrectorKind.PURE_PARAREAL,
    tol: float = 1e-10,
    k_max: Optional[int] = None,
    threads: int = 1,
    show_progress: bool = False,
    exploit_exactness: bool = False,
) -> PararealRun:
    """Iterate until the defect drops to tol, k reaches N, or k_max iterations."""
    if not (tol > 0 and math.isfinite(tol)):
        raise ArgumentError(f"tol must be positive and finite, got {tol!r}")
    if k_max is None:
        k_max = grid.n_branches
    if k_max < 1:
        raise ArgumentError(f"k_max must be >= 1, got {k_max}")
    resolve_corrector(corrector)

    result = PararealRun(
        grid=grid,
        pair=pair,
        system_name=system.name,
        corrector=str(getattr(corrector, "value", corrector)),
        tol=tol,
        k_max=k_max,
    )
    logger.info("parareal %s/%s on %s: %s",
                pair.fine_scheme.name, pair.coarse_scheme.name, system.name, grid.summary())

    record = initial_guess(pair, system, y0, grid)
    result.iterations.append(record)
    progress = tqdm(total=k_max, desc="Parareal iterations", disable=not show_progress, leave=False)
    try:
        for k in range(1, k_max + 1):
            record = parareal_iterate(
                pair, system, record, grid, corrector,
                threads=threads, exploit_exactness=exploit_exactness,
            )
            result.iterations.append(record)
            progress.update(1)
            logger.debug("iteration %d: defect %.3e, %d fine evaluations",
                         k, record.defect, record.fine_evaluations)
            if record.defect <= tol:
                result.converged_at, result.converged_by = k, "tolerance"
                break
            if k >= grid.n_branches:
                result.converged_at, result.converged_by = k, "exactness"
                break
    finally:
        progress.close()

    if result.converged:
        logger.info("converged at k=%d by %s", result.converged_at, result.converged_by)
    else:
        logger.warning("no convergence within k_max=%d (last defect %.3e)", k_max, record.defect)
    return result


def sequential_fine_solution(
    pair: PropagatorPair,
    system: SeparableSystem,
    y0: PhaseState,
    grid: TwoLevelGrid,
) -> list[PhaseState]:
    """Node states of the fine propagator chained serially; the parareal target."""
    nodes = [y0]
    for n in range(grid.n_branches):
        nodes.append(fine_propagate(pair, system, nodes[n], grid, branch=n))
    return nodes


@dataclass(frozen=True)
class ComparisonRow:
    label: str
    coarse_scheme: str
    converged_at: Optional[int] = None
    converged_by: Optional[str] = None
    defects: tuple[float, ...] = ()
    energy_oscillations: tuple[float, ...] = ()
    surrogate_length: Optional[float] = None
    error: Optional[str] = None

    @property
    def final_defect(self) -> Optional[float]:
        return self.defects[-1] if self.defects else None


@dataclass(frozen=True)
class ComparisonTable:
    fine_scheme: str
    system_name: str
    grid: TwoLevelGrid
    rows: tuple[ComparisonRow, ...]

    def row(self, label: str) -> ComparisonRow:
        for r in self.rows:
            if r.label == label:
                return r
        raise KeyError(label)


def compare_coarse_choices(
    fine: SplittingScheme,
    candidates: Sequence[SplittingScheme],
    system: SeparableSystem,
    y0: PhaseState,
    grid: TwoLevelGrid,
    tol: float = 1e-10,
    k_max: Optional[int] = None,
    corrector: Union[CorrectorKind, str] = CorrectorKind.PURE_PARAREAL,
    coarse_substeps: int = 1,
    threads: int = 1,
    show_progress: bool = False,
) -> ComparisonTable:
    """Run parareal once per coarse candidate with everything else fixed.

    A candidate equal to the fine scheme is labelled matched(<name>). A
    candidate whose run fails keeps its row with the error code.
    """
    if len(candidates) < 2:
        raise ArgumentError(f"need at least 2 coarse candidates, got {len(candidates)}")

    rows = []
    for candidate in candidates:
        matched = candidate == fine
        label = f"matched({candidate.name})" if matched else candidate.name
        if not is_symmetric(candidate):
            logger.warning("coarse candidate %s is not symmetric", candidate.name)
        try:
            pair = PropagatorPair(
                fine_scheme=fine,
                coarse_scheme=candidate,
                coarse_substeps=coarse_substeps,
                coarse_origin="matched" if matched else "explicit",
                require_symmetric=False,
            )
            result = run(pair, system, y0, grid, corrector, tol=tol, k_max=k_max,
                         threads=threads, show_progress=show_progress)
            surrogate = hofer_surrogate_length(result, system) if len(result.iterations) >= 2 else None
            rows.append(ComparisonRow(
                label=label,
                coarse_scheme=candidate.name,
                converged_at=result.converged_at,
                converged_by=result.converged_by,
                defects=tuple(result.defects),
                energy_oscillations=tuple(iteration_energy_oscillation(r) for r in result.iterations),
                surrogate_length=surrogate,
            ))
        except SymplecticError as exc:
            logger.warning("coarse candidate %s failed: %s", label, exc)
            rows.append(ComparisonRow(label=label, coarse_scheme=candidate.name, error=exc.code))

    return ComparisonTable(
        fine_scheme=fine.name,
        system_name=system.name,
        grid=grid,
        rows=tuple(rows),
    )
