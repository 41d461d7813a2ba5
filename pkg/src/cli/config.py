"""Experiment configuration files.

A config is flat `key = value` text; `#` starts a comment. Floats accept
decimal, exponent and `a/b` spellings, lists are comma separated:

    system = spin-orbit
    dt     = 1/128
    q0     = 0.8
    taus   = 0.1, 0.05, 0.025
"""
import logging
import math
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, ValidationInfo, field_validator

from ..errors import ConfigurationError
from ..geometry import PhaseState
from ..integrators import SplittingScheme, available_schemes, builtin_scheme
from ..parareal import TwoLevelGrid, available_correctors, matched_coarse
from ..systems import SeparableSystem, available_systems, make_system

logger = logging.getLogger(__name__)

MATCHED = "matched"

_FLOAT_KEYS = ("omega", "epsilon", "alpha", "theta", "t_end", "dt", "tol", "order_t_end")
_LIST_KEYS = ("q0", "p0", "taus", "candidates")


def parse_float(text: str) -> float:
    """Nearest double to a decimal, exponent or a/b spelling."""
    try:
        value = float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a number: {text!r}") from exc
    return value


def _split_list(value):
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    system: str = "harmonic"
    omega: Optional[float] = None
    epsilon: Optional[float] = None
    alpha: Optional[float] = None
    theta: Optional[float] = None

    scheme: Optional[str] = None
    fine: Optional[str] = None
    coarse: Optional[str] = None
    coarse_substeps: int = Field(default=1, ge=1)
    corrector: str = "pure-parareal"
    candidates: list[str] = Field(default_factory=list)

    t_end: Optional[float] = None
    n_branches: Optional[int] = Field(default=None, ge=1)
    n_fine: Optional[int] = Field(default=None, ge=1)
    dt: Optional[float] = None
    n_steps: Optional[int] = Field(default=None, ge=0)

    q0: list[float] = Field(default_factory=list)
    p0: list[float] = Field(default_factory=list)

    tol: float = 1e-10
    k_max: Optional[int] = Field(default=None, ge=1)
    taus: list[float] = Field(default_factory=list)
    order_t_end: Optional[float] = None

    output: Optional[str] = None
    show_progress: bool = False
    exploit_exactness: bool = False

    @field_validator(*_LIST_KEYS, mode="before")
    @classmethod
    def _lists(cls, value, info: ValidationInfo):
        items = _split_list(value)
        if info.field_name == "candidates":
            return items
        return [parse_float(v) if isinstance(v, str) else v for v in items]

    @field_validator(*_FLOAT_KEYS, mode="before")
    @classmethod
    def _floats(cls, value):
        if isinstance(value, str):
            return parse_float(value)
        return value

    @field_validator("tol")
    @classmethod
    def _positive_tol(cls, value):
        if not (value > 0 and math.isfinite(value)):
            raise ValueError(f"tol must be positive and finite, got {value!r}")
        return value

    @field_validator("system")
    @classmethod
    def _known_system(cls, value):
        if value not in available_systems():
            raise ValueError(f"unknown system '{value}'; available: {available_systems()}")
        return value

    @field_validator("scheme", "fine")
    @classmethod
    def _known_scheme(cls, value):
        if value is not None and value not in available_schemes():
            raise ValueError(f"unknown scheme '{value}'; available: {available_schemes()}")
        return value

    @field_validator("coarse")
    @classmethod
    def _known_coarse(cls, value):
        if value is not None and value != MATCHED and value not in available_schemes():
            raise ValueError(f"unknown coarse scheme '{value}'; use '{MATCHED}' or one of {available_schemes()}")
        return value

    @field_validator("candidates")
    @classmethod
    def _known_candidates(cls, value):
        for name in value:
            if name != MATCHED and name not in available_schemes():
                raise ValueError(f"unknown candidate '{name}'; use '{MATCHED}' or one of {available_schemes()}")
        return value

    @field_validator("corrector")
    @classmethod
    def _known_corrector(cls, value):
        if value not in available_correctors():
            raise ValueError(f"unknown corrector '{value}'; available: {available_correctors()}")
        return value

    def require(self, *keys: str) -> None:
        missing = [key for key in keys if getattr(self, key) in (None, [])]
        if missing:
            raise ConfigurationError(f"missing required key(s): {', '.join(missing)}")

    def build_system(self) -> SeparableSystem:
        return make_system(
            self.system, omega=self.omega, epsilon=self.epsilon, alpha=self.alpha, theta=self.theta
        )

    def initial_state(self) -> PhaseState:
        self.require("q0", "p0")
        return PhaseState(q=self.q0, p=self.p0, t=0.0)

    def build_grid(self) -> TwoLevelGrid:
        """Grid from (t_end, n_branches, n_fine), or from (t_end, n_branches, dt)."""
        self.require("t_end", "n_branches")
        if self.n_fine is not None:
            return TwoLevelGrid(t_end=self.t_end, n_branches=self.n_branches, n_fine=self.n_fine)
        self.require("dt")
        return TwoLevelGrid.from_steps(self.dt, self.t_end / self.n_branches, self.t_end)

    def coarse_choice(self, name: str, fine: SplittingScheme, grid: TwoLevelGrid) -> SplittingScheme:
        if name == MATCHED:
            return matched_coarse(fine, grid)
        return builtin_scheme(name)


def parse_config_text(text: str) -> tuple[dict[str, str], dict[str, int]]:
    """Raw key/value pairs and the line each key was set on."""
    values: dict[str, str] = {}
    lines: dict[str, int] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"expected 'key = value', got {raw.strip()!r}", line=number)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigurationError("empty key", line=number)
        if key in values:
            raise ConfigurationError(f"duplicate key '{key}' (first set on line {lines[key]})", line=number)
        values[key] = value
        lines[key] = number
    return values, lines


def config_from_text(text: str) -> ExperimentConfig:
    values, lines = parse_config_text(text)
    try:
        return ExperimentConfig(**values)
    except ValidationError as exc:
        first = exc.errors()[0]
        key = str(first["loc"][0]) if first["loc"] else None
        message = first["msg"]
        if first["type"] == "extra_forbidden":
            message = f"unknown key '{key}'"
        elif key is not None:
            message = f"{key}: {message}"
        raise ConfigurationError(message, line=lines.get(key)) from exc


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    config = config_from_text(text)
    logger.debug("loaded config %s: %s", path, config.model_dump(exclude_none=True))
    return config
