from .splitting import (
    DRIFT,
    KICK,
    SplittingScheme,
    Trajectory,
    adjoint,
    integrate,
    is_symmetric,
    propagate,
    step,
    yoshida_compose,
)
from .catalog import available_schemes, builtin_scheme
from .analysis import (
    convergence_errors,
    empirical_order,
    energy_oscillation,
    fit_slope,
    steps_for,
)
