"""Builtin splitting schemes.

SABA2/SBAB2 coefficients come from others/solve_order_conditions.py, which
solves the order conditions in 30-digit arithmetic and prints residuals.
Both are second order in general; they are representatives of the
Laskar-Robutel family, not eighth-order members. yoshida8 is the
guaranteed eighth-order scheme.
"""
from dataclasses import replace
from functools import lru_cache

from ..errors import CatalogError
from .splitting import SplittingScheme, yoshida_compose

# solve_order_conditions.py: Gauss-Legendre nodes on [0, 1]
# c1 = 1/2 - sqrt(3)/6, c2 = sqrt(3)/3; residual < 1e-30
_SABA2_C1 = 0.21132486540518711775
_SABA2_C2 = 0.57735026918962576451


def _lie_trotter() -> SplittingScheme:
    return SplittingScheme(
        "lie-trotter", a=(1.0,), b=(1.0,), nominal_order=1,
        provenance="drift then kick, first order",
    )


def _leapfrog() -> SplittingScheme:
    return SplittingScheme(
        "leapfrog", a=(0.5, 0.5), b=(1.0, 0.0), nominal_order=2,
        provenance="Stormer-Verlet drift-kick-drift (SABA1 word)",
    )


def _sbab1() -> SplittingScheme:
    return SplittingScheme(
        "sbab1", a=(0.0, 1.0), b=(0.5, 0.5), nominal_order=2,
        provenance="kick-drift-kick, adjoint layout of leapfrog",
    )


def _saba2() -> SplittingScheme:
    return SplittingScheme(
        "saba2",
        a=(_SABA2_C1, _SABA2_C2, _SABA2_C1),
        b=(0.5, 0.5, 0.0),
        nominal_order=2,
        provenance="Laskar-Robutel SABA2; others/solve_order_conditions.py (Gauss nodes)",
    )


def _sbab2() -> SplittingScheme:
    # solve_order_conditions.py: Lobatto nodes 0, 1/2, 1 with weights 1/6, 2/3, 1/6
    return SplittingScheme(
        "sbab2",
        a=(0.0, 0.5, 0.5),
        b=(1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0),
        nominal_order=2,
        provenance="Laskar-Robutel SBAB2; others/solve_order_conditions.py (Lobatto nodes)",
    )


def _yoshida(order: int) -> SplittingScheme:
    scheme = _leapfrog()
    while scheme.nominal_order < order:
        scheme = yoshida_compose(scheme)
    applications = (order - 2) // 2
    return replace(
        scheme,
        name=f"yoshida{order}",
        provenance=f"{applications} triple-jump composition(s) of leapfrog",
    )


_CATALOG = {
    "lie-trotter": _lie_trotter,
    "leapfrog": _leapfrog,
    "sbab1": _sbab1,
    "saba2": _saba2,
    "sbab2": _sbab2,
    "yoshida4": lambda: _yoshida(4),
    "yoshida6": lambda: _yoshida(6),
    "yoshida8": lambda: _yoshida(8),
}


def available_schemes() -> list[str]:
    return list(_CATALOG)


@lru_cache(maxsize=None)
def builtin_scheme(name: str) -> SplittingScheme:
    if name not in _CATALOG:
        raise CatalogError(f"Unknown scheme '{name}'. Available: {available_schemes()}")
    return _CATALOG[name]()
