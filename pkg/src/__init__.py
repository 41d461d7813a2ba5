from .errors import SymplecticError
from .geometry import PhaseState
from .systems import make_system, available_systems
from .integrators import SplittingScheme, builtin_scheme, available_schemes, integrate, propagate
from .parareal import PropagatorPair, TwoLevelGrid, compare_coarse_choices, run
from .diagnostics import convergence_report
