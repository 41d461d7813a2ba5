"""Coefficients of the SABA2 and SBAB2 splitting schemes in multiprecision.

SABA2 drifts by the gaps between the Gauss-Legendre nodes on [0, 1] and
kicks with the Gauss weights; SBAB2 kicks at the Lobatto nodes 0, x, 1 with
the Lobatto weights and drifts by the gaps. Both sets of nodes and weights
are the solutions of the moment conditions sum_i w_i x_i^k = 1 / (k + 1),
solved here with mpmath.findroot. The printed doubles are the ones frozen
in src/integrators/catalog.py.

    python -m others.solve_order_conditions --dps 30
"""
import argparse

import mpmath

from src.integrators import builtin_scheme

parser = argparse.ArgumentParser(description="Solve SABA2/SBAB2 order conditions in multiprecision")
parser.add_argument("--dps", type=int, default=30, help="decimal digits of working precision (default: 30)")
args = parser.parse_args()
mpmath.mp.dps = args.dps


def moments(nodes, weights, degrees):
    return [mpmath.fsum(w * x ** k for x, w in zip(nodes, weights)) - mpmath.mpf(1) / (k + 1) for k in degrees]


def gauss_two_point():
    def conditions(x1, x2, w1, w2):
        return moments([x1, x2], [w1, w2], range(4))

    root = mpmath.findroot(conditions, (0.2, 0.8, 0.5, 0.5))
    x1, x2, w1, w2 = (root[i] for i in range(4))
    return [x1, x2], [w1, w2]


def lobatto_three_point():
    # endpoints fixed, symmetric weights w0 = w2
    def conditions(x, w0, w1):
        return moments([0, x, 1], [w0, w1, w0], range(3))

    root = mpmath.findroot(conditions, (0.4, 0.2, 0.6))
    x, w0, w1 = (root[i] for i in range(3))
    return [mpmath.mpf(0), x, mpmath.mpf(1)], [w0, w1, w0]


def gaps(nodes):
    """Drift lengths between successive nodes, closed by the tail to 1."""
    points = [mpmath.mpf(0)] + list(nodes) + [mpmath.mpf(1)]
    return [b - a for a, b in zip(points, points[1:])]


def report(name, drifts, kicks, residuals):
    catalog = builtin_scheme(name)
    print(f"{name}")
    for label, values, frozen in (("drift", drifts, catalog.a), ("kick", kicks, catalog.b)):
        for i, value in enumerate(values):
            stored = frozen[i] if i < len(frozen) else float("nan")
            print(f"  {label}[{i}] = {mpmath.nstr(value, args.dps)}  (catalog {stored!r}, "
                  f"diff {mpmath.nstr(abs(value - stored), 3)})")
    print(f"  max residual {mpmath.nstr(max(abs(r) for r in residuals), 3)}")


# %% SABA2: drift c1, kick 1/2, drift c2, kick 1/2, drift c1
nodes, weights = gauss_two_point()
report("saba2", gaps(nodes), weights + [mpmath.mpf(0)], moments(nodes, weights, range(4)))

# %% SBAB2: kick at each Lobatto node, drift by the gaps
nodes, weights = lobatto_three_point()
report("sbab2", [mpmath.mpf(0)] + gaps(nodes)[1:-1], weights, moments(nodes, weights, range(4)))
