from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

import pandas as pd

from ..systems import SeparableSystem
from .energy import hofer_surrogate_terms, iteration_energy_oscillation

if TYPE_CHECKING:
    from ..parareal.engine import PararealRun

SURROGATE_LABEL = "hofer_length_surrogate"


@dataclass(frozen=True)
class ConvergenceReport:
    """Summary of a parareal run, one entry per iteration k >= 1."""
    fine_scheme: str
    coarse_scheme: str
    coarse_origin: str
    system_name: str
    grid_summary: str
    defects: tuple[float, ...]
    energy_oscillations: tuple[float, ...]
    surrogate_terms: tuple[float, ...]
    converged_at: Optional[int]
    converged_by: Optional[str]

    @property
    def surrogate_length(self) -> float:
        return float(sum(self.surrogate_terms))

    @property
    def surrogate_label(self) -> str:
        return SURROGATE_LABEL

    def to_frame(self) -> pd.DataFrame:
        """One row per iteration: k, defect, energy_osc, surrogate_term."""
        return pd.DataFrame({
            "k": list(range(1, len(self.defects) + 1)),
            "defect": list(self.defects),
            "energy_osc": list(self.energy_oscillations),
            "surrogate_term": list(self.surrogate_terms),
        })


def convergence_report(run: "PararealRun", system: SeparableSystem) -> ConvergenceReport:
    iterations = run.iterations[1:]
    return ConvergenceReport(
        fine_scheme=run.pair.fine_scheme.name,
        coarse_scheme=run.pair.coarse_scheme.name,
        coarse_origin=run.pair.coarse_origin,
        system_name=run.system_name,
        grid_summary=run.grid.summary(),
        defects=tuple(record.defect for record in iterations),
        energy_oscillations=tuple(iteration_energy_oscillation(record) for record in iterations),
        surrogate_terms=tuple(hofer_surrogate_terms(run, system)),
        converged_at=run.converged_at,
        converged_by=run.converged_by,
    )
