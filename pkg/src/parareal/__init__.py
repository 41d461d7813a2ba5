from .grid import PropagatorPair, TwoLevelGrid, matched_coarse
from .sweep import parallel_sweep
from .engine import (
    ComparisonRow,
    ComparisonTable,
    CorrectorKind,
    IterationRecord,
    PararealRun,
    available_correctors,
    coarse_propagate,
    compare_coarse_choices,
    fine_propagate,
    initial_guess,
    parareal_iterate,
    register_corrector,
    resolve_corrector,
    run,
    sequential_fine_solution,
)
