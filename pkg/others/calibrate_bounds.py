"""Measure the constants pinned in the energy regression tests.

    python -m others.calibrate_bounds --steps 10000

Prints, for leapfrog on the pendulum from (0.8, 0):
  - C = osc(H - H0) / tau^2 at tau = 0.1, which the tests bound from above
  - the oscillation ratio between tau and tau / 2 (about 4 for second order)
  - the least-squares drift rate of H - H0 over a long run
"""
import argparse

from tqdm import tqdm

from src.diagnostics import drift_rate, energy_error_series
from src.geometry import PhaseState
from src.integrators import builtin_scheme, integrate
from src.systems import make_pendulum

parser = argparse.ArgumentParser(description="Measure energy-error constants for the regression tests")
parser.add_argument("--steps", type=int, default=10_000, help="steps at tau = 0.1 (default: 10000)")
parser.add_argument("--epsilon", type=float, default=0.1, help="pendulum coupling (default: 0.1)")
args = parser.parse_args()

SCHEME = builtin_scheme("leapfrog")
SYSTEM = make_pendulum(args.epsilon)
START = PhaseState([0.8], [0.0])
TAU = 0.1


def oscillation_at(tau, n_steps):
    return energy_error_series(integrate(SCHEME, SYSTEM, START, tau, n_steps), SYSTEM).oscillation()


# %%
bound = oscillation_at(TAU, args.steps) / TAU ** 2
print(f"C = osc / tau^2 = {bound:.6g}")

ratios = []
for tau in tqdm([0.2, 0.1, 0.05], desc="halving"):
    ratios.append(oscillation_at(tau, round(100 / tau)) / oscillation_at(tau / 2, round(200 / tau)))
print("osc(tau) / osc(tau/2) =", ", ".join(f"{r:.4f}" for r in ratios))

# %%
long_run = energy_error_series(integrate(SCHEME, SYSTEM, START, TAU, 10 * args.steps), SYSTEM)
print(f"drift rate over {10 * args.steps} steps = {drift_rate(long_run):.3e}")
