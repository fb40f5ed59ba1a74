"""
utils/catalog.py
Chart-described Morse functions on closed manifolds, and their diagonal products.

Every evaluation rule is vectorized: it maps an (N, d) array of local
coordinates to an (N,) array of values. ``to_global`` maps local coordinates
into an ambient system shared by all charts of a function, so critical points
found in overlapping charts can be identified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from utils.config import DEFAULT_SETTINGS, DEFAULT_WEIGHTS
from utils.exceptions import CatalogError, PreconditionError
from utils.morse_algebra import IndexCountVector, convolve

Evaluator = Callable[[np.ndarray], np.ndarray]

TWO_PI = 2 * math.pi
# Two overlapping arcs covering the circle; every angle is >= pi/2 inside one of them.
ANGULAR_CHARTS = {"a": (-math.pi / 2, 3 * math.pi / 2), "b": (math.pi / 2, 5 * math.pi / 2)}
STEREO_BOX = 2.0
TORUS_R, TORUS_r = 2.0, 1.0

CATALOG_NAMES = ("circle_cos", "sphere_height", "torus_height")


def _identity(x: np.ndarray) -> np.ndarray:
    return x


@dataclass(frozen=True)
class Chart:
    chart_id: str
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    evaluate: Evaluator
    to_global: Evaluator = _identity

    @property
    def dim(self) -> int:
        return len(self.lower)

    def margin_of(self, x: np.ndarray) -> float:
        """Distance from x to the nearest face of the chart box."""
        x = np.asarray(x, dtype=float)
        return float(min(np.min(x - np.asarray(self.lower)), np.min(np.asarray(self.upper) - x)))


@dataclass(frozen=True)
class ChartFunction:
    name: str
    dim: int
    charts: tuple[Chart, ...]
    periods: tuple[Optional[float], ...]
    declared_counts: Optional[IndexCountVector] = None

    @property
    def global_dim(self) -> int:
        return len(self.periods)

    def chart(self, chart_id: str) -> Chart:
        for c in self.charts:
            if c.chart_id == chart_id:
                return c
        raise CatalogError(f"{self.name} has no chart {chart_id!r}")


# ── Catalog entries ────────────────────────────────────────────────────────────
def circle_cos(n: int = 1) -> ChartFunction:
    """theta -> cos(n theta) on S^1: n maxima, n minima."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise CatalogError(f"circle_cos needs an integer n >= 1, got {n!r}")

    def evaluate(x: np.ndarray) -> np.ndarray:
        return np.cos(n * x[:, 0])

    charts = tuple(Chart(cid, (lo,), (hi,), evaluate) for cid, (lo, hi) in ANGULAR_CHARTS.items())
    return ChartFunction(
        name=f"circle_cos({n})",
        dim=1,
        charts=charts,
        periods=(TWO_PI,),
        declared_counts=IndexCountVector(1, (n, n)),
    )


def _stereo_south(x: np.ndarray) -> np.ndarray:
    r2 = np.sum(x**2, axis=1)
    return (r2 - 1) / (r2 + 1)


def _stereo_north(x: np.ndarray) -> np.ndarray:
    r2 = np.sum(x**2, axis=1)
    return (1 - r2) / (1 + r2)


def _stereo_south_global(x: np.ndarray) -> np.ndarray:
    r2 = np.sum(x**2, axis=1)
    return np.column_stack([2 * x[:, 0], 2 * x[:, 1], r2 - 1]) / (r2 + 1)[:, None]


def _stereo_north_global(x: np.ndarray) -> np.ndarray:
    r2 = np.sum(x**2, axis=1)
    return np.column_stack([2 * x[:, 0], 2 * x[:, 1], 1 - r2]) / (1 + r2)[:, None]


def sphere_height() -> ChartFunction:
    """Height function on S^2 in two stereographic charts (minimum and maximum centred)."""
    box_lo, box_hi = (-STEREO_BOX, -STEREO_BOX), (STEREO_BOX, STEREO_BOX)
    charts = (
        Chart("south", box_lo, box_hi, _stereo_south, _stereo_south_global),
        Chart("north", box_lo, box_hi, _stereo_north, _stereo_north_global),
    )
    return ChartFunction(
        name="sphere_height",
        dim=2,
        charts=charts,
        periods=(None, None, None),
        declared_counts=IndexCountVector(2, (1, 0, 1)),
    )


def _torus_height(x: np.ndarray) -> np.ndarray:
    return (TORUS_R + TORUS_r * np.cos(x[:, 0])) * np.sin(x[:, 1])


def torus_height() -> ChartFunction:
    """(u, v) -> (R + r cos u) sin v on T^2 with R = 2, r = 1."""
    charts = tuple(
        Chart(cu + cv, (lu, lv), (hu, hv), _torus_height)
        for cu, (lu, hu) in ANGULAR_CHARTS.items()
        for cv, (lv, hv) in ANGULAR_CHARTS.items()
    )
    return ChartFunction(
        name="torus_height",
        dim=2,
        charts=charts,
        periods=(TWO_PI, TWO_PI),
        declared_counts=IndexCountVector(2, (1, 2, 1)),
    )


_BUILDERS = {
    "circle_cos": circle_cos,
    "sphere_height": sphere_height,
    "torus_height": torus_height,
}


def catalog(name: str, n: Optional[int] = None) -> ChartFunction:
    """
    Look up a catalog function.

    Args:
        name: One of CATALOG_NAMES.
        n: Frequency for circle_cos (default 1); must be omitted otherwise.

    Returns:
        ChartFunction with declared_counts set.

    Raises:
        CatalogError: unknown name or invalid parameters.
    """
    if name not in _BUILDERS:
        raise CatalogError(f"unknown catalog function {name!r}; choose from {', '.join(CATALOG_NAMES)}")
    if name == "circle_cos":
        return circle_cos(1 if n is None else n)
    if n is not None:
        raise CatalogError(f"{name} takes no parameter, got {n!r}")
    return _BUILDERS[name]()


def parse_catalog_spec(spec: str) -> ChartFunction:
    """Parse 'circle_cos:3' / 'sphere_height' style strings."""
    name, _, param = spec.strip().partition(":")
    if not param:
        return catalog(name)
    try:
        n = int(param)
    except ValueError as exc:
        raise CatalogError(f"catalog parameter in {spec!r} is not an integer") from exc
    return catalog(name, n)


def partner_specs(first: str, specs: Iterable[str], max_dim: int) -> list[str]:
    """Specs whose product with 'first' stays within max_dim dimensions."""
    dim = parse_catalog_spec(first).dim
    return [s for s in specs if dim + parse_catalog_spec(s).dim <= max_dim]


# ── Products ───────────────────────────────────────────────────────────────────
def _product_chart(c1: Chart, c2: Chart, a: float, b: float) -> Chart:
    d1 = c1.dim

    def evaluate(x: np.ndarray) -> np.ndarray:
        return a * c1.evaluate(x[:, :d1]) + b * c2.evaluate(x[:, d1:])

    def to_global(x: np.ndarray) -> np.ndarray:
        return np.hstack([c1.to_global(x[:, :d1]), c2.to_global(x[:, d1:])])

    return Chart(f"{c1.chart_id}*{c2.chart_id}", c1.lower + c2.lower, c1.upper + c2.upper, evaluate, to_global)


def product_function(
    f1: ChartFunction,
    f2: ChartFunction,
    weights: tuple[float, float] = DEFAULT_WEIGHTS,
    max_dim: int = DEFAULT_SETTINGS.max_dim,
) -> ChartFunction:
    """
    Diagonal function (x1, x2) -> a f1(x1) + b f2(x2) on the product manifold.

    Args:
        f1, f2: Factor functions.
        weights: Positive projection weights (a, b).
        max_dim: Largest admissible product dimension.

    Returns:
        ChartFunction whose charts are pairwise products of the factors' charts.

    Raises:
        PreconditionError: non-positive weights or dimension above max_dim.
    """
    a, b = (float(w) for w in weights)
    if not (a > 0 and b > 0):
        raise PreconditionError(f"projection weights must be positive, got ({a}, {b})")
    dim = f1.dim + f2.dim
    if dim > max_dim:
        raise PreconditionError(f"product dimension {dim} exceeds the supported maximum {max_dim}")
    declared = None
    if f1.declared_counts is not None and f2.declared_counts is not None:
        declared = IndexCountVector(dim, convolve(f1.declared_counts.counts, f2.declared_counts.counts))
    return ChartFunction(
        name=f"{f1.name}*{f2.name}",
        dim=dim,
        charts=tuple(_product_chart(c1, c2, a, b) for c1 in f1.charts for c2 in f2.charts),
        periods=f1.periods + f2.periods,
        declared_counts=declared,
    )
