import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError, SchemeError
from ..integrators import SplittingScheme, is_symmetric, steps_for

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TwoLevelGrid:
    """The discretization dt < Dt < [0, T]: N branches of N_delta fine steps each."""
    t_end: float
    n_branches: int
    n_fine: int

    def __post_init__(self):
        t_end = float(self.t_end)
        if not (math.isfinite(t_end) and t_end >= 0):
            raise ConfigurationError(f"t_end must be finite and >= 0, got {self.t_end!r}")
        for name in ("n_branches", "n_fine"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ConfigurationError(f"{name} must be an integer >= 1, got {value!r}")
            object.__setattr__(self, name, int(value))
        object.__setattr__(self, "t_end", t_end)
        covered = self.fine_step * self.n_fine * self.n_branches
        if abs(covered - t_end) > 1e-12 * max(abs(t_end), np.finfo(float).tiny):
            raise ConfigurationError(f"grid covers {covered!r}, not t_end={t_end!r}")

    @classmethod
    def from_steps(cls, fine_step: float, coarse_step: float, t_end: float) -> "TwoLevelGrid":
        """Grid from (dt, Dt, T); Dt must divide T and dt must divide Dt."""
        n_branches = steps_for(t_end, coarse_step)
        n_fine = steps_for(coarse_step, fine_step)
        return cls(t_end=t_end, n_branches=n_branches, n_fine=n_fine)

    @property
    def coarse_step(self) -> float:
        return self.t_end / self.n_branches

    @property
    def fine_step(self) -> float:
        return self.coarse_step / self.n_fine

    def node_time(self, n: int) -> float:
        return n * self.coarse_step

    def node_times(self) -> np.ndarray:
        return np.array([self.node_time(n) for n in range(self.n_branches + 1)])

    def summary(self) -> str:
        return (f"T={self.t_end!r} N={self.n_branches} N_delta={self.n_fine} "
                f"Dt={self.coarse_step!r} dt={self.fine_step!r}")


@dataclass(frozen=True)
class PropagatorPair:
    """Fine and coarse schemes of a parareal run.

    The coarse propagator advances a branch with `coarse_substeps` steps of
    size Dt / coarse_substeps (the one-step choice is the default).
    `coarse_origin` records whether the coarse scheme was chosen explicitly
    or matched to the fine one.
    """
    fine_scheme: SplittingScheme
    coarse_scheme: SplittingScheme
    coarse_substeps: int = 1
    coarse_origin: str = "explicit"
    require_symmetric: bool = field(default=True, compare=False)

    def __post_init__(self):
        if int(self.coarse_substeps) != self.coarse_substeps or self.coarse_substeps < 1:
            raise ConfigurationError(f"coarse_substeps must be an integer >= 1, got {self.coarse_substeps!r}")
        if self.require_symmetric:
            for role, scheme in (("fine", self.fine_scheme), ("coarse", self.coarse_scheme)):
                if not is_symmetric(scheme):
                    raise SchemeError(f"{role} scheme {scheme.name} is not symmetric")

    @classmethod
    def matched(cls, fine: SplittingScheme, grid: TwoLevelGrid, coarse_substeps: int = 1) -> "PropagatorPair":
        return cls(
            fine_scheme=fine,
            coarse_scheme=matched_coarse(fine, grid),
            coarse_substeps=coarse_substeps,
            coarse_origin="matched",
        )

    def metadata(self) -> dict:
        return {
            "fine": self.fine_scheme.name,
            "coarse": self.coarse_scheme.name,
            "coarse_origin": self.coarse_origin,
            "coarse_substeps": self.coarse_substeps,
        }


def matched_coarse(fine: SplittingScheme, grid: TwoLevelGrid) -> SplittingScheme:
    """The fine scheme's own coefficients, to be applied at the coarse step Dt."""
    logger.debug("matched coarse scheme %s at Dt=%r", fine.name, grid.coarse_step)
    return fine
