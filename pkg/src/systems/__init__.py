from .catalog import (
    SeparableSystem,
    SpinOrbitParams,
    available_systems,
    drift,
    kick,
    make_harmonic_oscillator,
    make_pendulum,
    make_spin_orbit,
    make_system,
)
