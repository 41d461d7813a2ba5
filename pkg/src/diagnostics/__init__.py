from .energy import (
    EnergySeries,
    drift_rate,
    energy_error_series,
    hofer_surrogate_length,
    hofer_surrogate_terms,
    iteration_energy_oscillation,
    oscillation,
)
from .report import SURROGATE_LABEL, ConvergenceReport, convergence_report
