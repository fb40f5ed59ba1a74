"""
utils/numerical_lab.py
Finite-difference critical point search and the index additivity check for
diagonal functions on product manifolds.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from joblib import Parallel, delayed

from utils.catalog import Chart, ChartFunction, product_function
from utils.config import DEFAULT_SETTINGS, DEFAULT_WEIGHTS, LabSettings
from utils.exceptions import (
    ChartMarginError,
    DegenerateCriticalPointError,
    IndexHistogramMismatchError,
    NoConvergenceError,
)
from utils.morse_algebra import convolve

logger = logging.getLogger(__name__)

SINGULAR_STEP = 1e-12  # |eigenvalue| below which a Newton step is abandoned
NOISE_FLOOR = 1e-6  # FD Hessian noise level on catalog functions
SEED_BLOCK = 65536


@dataclass(frozen=True)
class CriticalPoint:
    chart_id: str
    coordinates: tuple[float, ...]
    global_coordinates: tuple[float, ...]
    value: float
    gradient_norm: float
    hessian_eigenvalues: tuple[float, ...]
    index: int

    def to_dict(self) -> dict:
        return {
            "chart": self.chart_id,
            "coordinates": list(self.coordinates),
            "global_coordinates": list(self.global_coordinates),
            "value": self.value,
            "gradient_norm": self.gradient_norm,
            "hessian_eigenvalues": list(self.hessian_eigenvalues),
            "index": self.index,
        }


# ── Finite differences ─────────────────────────────────────────────────────────
def _gradient_batch(evaluate, points: np.ndarray, h: float) -> np.ndarray:
    n, d = points.shape
    grad = np.empty((n, d))
    for i in range(d):
        e = np.zeros(d)
        e[i] = h
        grad[:, i] = (evaluate(points + e) - evaluate(points - e)) / (2 * h)
    return grad


def _hessian_batch(evaluate, points: np.ndarray, h: float) -> np.ndarray:
    n, d = points.shape
    hess = np.empty((n, d, d))
    f0 = evaluate(points)
    E = h * np.eye(d)
    for i in range(d):
        hess[:, i, i] = (evaluate(points + E[i]) - 2 * f0 + evaluate(points - E[i])) / h**2
        for j in range(i + 1, d):
            mixed = (
                evaluate(points + E[i] + E[j])
                - evaluate(points + E[i] - E[j])
                - evaluate(points - E[i] + E[j])
                + evaluate(points - E[i] - E[j])
            ) / (4 * h**2)
            hess[:, i, j] = mixed
            hess[:, j, i] = mixed
    return 0.5 * (hess + hess.transpose(0, 2, 1))


def _resolve_chart(fn: ChartFunction, chart: Union[str, Chart]) -> Chart:
    return fn.chart(chart) if isinstance(chart, str) else chart


def _point(chart: Chart, x, required: float, what: str) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != chart.dim:
        raise ChartMarginError(f"{what}: point has {x.shape[0]} coordinates, chart {chart.chart_id!r} has {chart.dim}")
    margin = chart.margin_of(x)
    if margin < required:
        raise ChartMarginError(
            f"{what}: point {x.tolist()} is {margin:.3g} from the boundary of chart "
            f"{chart.chart_id!r}, needs at least {required:.3g}"
        )
    return x


def gradient_fd(
    fn: ChartFunction,
    chart: Union[str, Chart],
    x,
    settings: LabSettings = DEFAULT_SETTINGS,
) -> np.ndarray:
    """Central-difference gradient with step h_grad."""
    c = _resolve_chart(fn, chart)
    x = _point(c, x, settings.h_grad, "gradient_fd")
    return _gradient_batch(c.evaluate, x[None, :], settings.h_grad)[0]


def hessian_fd(
    fn: ChartFunction,
    chart: Union[str, Chart],
    x,
    settings: LabSettings = DEFAULT_SETTINGS,
    step: Optional[float] = None,
) -> np.ndarray:
    """Central second differences with step h_hess, symmetrized."""
    c = _resolve_chart(fn, chart)
    h = settings.h_hess if step is None else step
    x = _point(c, x, 2 * h, "hessian_fd")
    return _hessian_batch(c.evaluate, x[None, :], h)[0]


@dataclass(frozen=True)
class HessianRefinement:
    eigenvalues_coarse: tuple[float, ...]
    eigenvalues: tuple[float, ...]
    eigenvalues_fine: tuple[float, ...]
    change: tuple[float, ...]
    estimate: tuple[float, ...]
    passed: bool


def hessian_refinement(
    fn: ChartFunction,
    chart: Union[str, Chart],
    x,
    settings: LabSettings = DEFAULT_SETTINGS,
) -> HessianRefinement:
    """
    Convergence-order sanity check of the FD Hessian at x.

    With a second-order stencil the error of lambda(h) is about
    |lambda(2h) - lambda(h)| / 3; halving h must change each eigenvalue by
    less than four times that estimate (or the noise floor).
    """
    h = settings.h_hess
    coarse = np.linalg.eigvalsh(hessian_fd(fn, chart, x, settings, step=2 * h))
    mid = np.linalg.eigvalsh(hessian_fd(fn, chart, x, settings, step=h))
    fine = np.linalg.eigvalsh(hessian_fd(fn, chart, x, settings, step=h / 2))
    change = np.abs(fine - mid)
    estimate = np.abs(coarse - mid) / 3
    passed = bool(np.all(change < 4 * np.maximum(estimate, NOISE_FLOOR)))
    return HessianRefinement(
        tuple(coarse.tolist()),
        tuple(mid.tolist()),
        tuple(fine.tolist()),
        tuple(change.tolist()),
        tuple(estimate.tolist()),
        passed,
    )


# ── Newton search ──────────────────────────────────────────────────────────────
def _seed_grid(chart: Chart, n_seed: int) -> np.ndarray:
    axes = [np.linspace(lo, hi, n_seed + 2)[1:-1] for lo, hi in zip(chart.lower, chart.upper)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _newton_block(chart: Chart, x: np.ndarray, settings: LabSettings) -> np.ndarray:
    lo, hi = np.asarray(chart.lower), np.asarray(chart.upper)
    x = x.copy()
    active = np.ones(len(x), dtype=bool)
    converged = np.zeros(len(x), dtype=bool)
    for it in range(settings.max_iter + 1):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        grad = _gradient_batch(chart.evaluate, x[idx], settings.h_grad)
        done = np.linalg.norm(grad, axis=1) < settings.tol_grad
        converged[idx[done]] = True
        active[idx[done]] = False
        idx, grad = idx[~done], grad[~done]
        if idx.size == 0 or it == settings.max_iter:
            break

        eigvals, eigvecs = np.linalg.eigh(_hessian_batch(chart.evaluate, x[idx], settings.h_hess))
        singular = np.min(np.abs(eigvals), axis=1) < SINGULAR_STEP
        eigvals = np.where(singular[:, None], 1.0, eigvals)
        coeffs = np.einsum("nij,ni->nj", eigvecs, grad) / eigvals
        new = x[idx] - np.einsum("nij,nj->ni", eigvecs, coeffs)

        inside = (
            ~singular
            & np.all(np.isfinite(new), axis=1)
            & np.all(new - lo >= settings.margin, axis=1)
            & np.all(hi - new >= settings.margin, axis=1)
        )
        x[idx[inside]] = new[inside]
        active[idx[~inside]] = False
    return x[converged]


def _search_chart(chart: Chart, settings: LabSettings) -> np.ndarray:
    seeds = _seed_grid(chart, settings.n_seed)
    n_blocks = max(1, -(-len(seeds) // SEED_BLOCK))
    found = [_newton_block(chart, block, settings) for block in np.array_split(seeds, n_blocks)]
    points = np.vstack(found) if found else np.empty((0, chart.dim))
    logger.debug("chart %s: %d of %d seeds converged", chart.chart_id, len(points), len(seeds))
    return points


def _wrap(delta: np.ndarray, periods) -> np.ndarray:
    delta = np.array(delta, dtype=float)
    for axis, p in enumerate(periods):
        if p:
            delta[..., axis] = (delta[..., axis] + p / 2) % p - p / 2
    return delta


def periodic_distance(a, b, periods) -> float:
    """Euclidean distance with periodic axes measured modulo their period."""
    return float(np.linalg.norm(_wrap(np.asarray(a, float) - np.asarray(b, float), periods)))


def _deduplicate(fn: ChartFunction, candidates, settings: LabSettings):
    """Greedy merge of candidates closer than tol_dedupe in ambient coordinates."""
    if not candidates:
        return []
    # Prefer the representative lying deepest inside its chart.
    candidates = sorted(candidates, key=lambda c: -c[2])
    glob = np.array([c[3] for c in candidates])
    canon = glob.copy()
    for axis, p in enumerate(fn.periods):
        if p:
            canon[:, axis] = np.mod(canon[:, axis], p)
    keys = np.round(canon / settings.tol_dedupe).astype(np.int64)
    _, first = np.unique(keys, axis=0, return_index=True)
    survivors = []
    for i in sorted(first):
        if all(periodic_distance(glob[i], glob[s], fn.periods) >= settings.tol_dedupe for s in survivors):
            survivors.append(i)
    return [candidates[i] for i in survivors]


def _classify(fn: ChartFunction, chart: Chart, x: np.ndarray, glob: np.ndarray, settings: LabSettings) -> CriticalPoint:
    eig = np.linalg.eigvalsh(hessian_fd(fn, chart, x, settings))
    scale = max(1.0, float(np.max(np.abs(eig))))
    if float(np.min(np.abs(eig))) <= settings.tol_degenerate * scale:
        raise DegenerateCriticalPointError(
            f"{fn.name}: degenerate Hessian at {x.tolist()} in chart {chart.chart_id!r} "
            f"(eigenvalues {eig.tolist()})"
        )
    grad = gradient_fd(fn, chart, x, settings)
    return CriticalPoint(
        chart_id=chart.chart_id,
        coordinates=tuple(x.tolist()),
        global_coordinates=tuple(glob.tolist()),
        value=float(chart.evaluate(x[None, :])[0]),
        gradient_norm=float(np.linalg.norm(grad)),
        hessian_eigenvalues=tuple(eig.tolist()),
        index=int(np.sum(eig < 0)),
    )


def index_histogram(points, dim: int) -> tuple[int, ...]:
    hist = [0] * (dim + 1)
    for p in points:
        hist[p.index] += 1
    return tuple(hist)


def find_critical_points(
    fn: ChartFunction,
    settings: LabSettings = DEFAULT_SETTINGS,
    check_declared: bool = True,
) -> list[CriticalPoint]:
    """
    Locate and classify all critical points of fn.

    Grid-seeded Newton iteration on the FD gradient runs independently in
    each chart; converged points are merged across seeds and charts in
    ambient coordinates and classified by the signs of FD Hessian eigenvalues.

    Args:
        fn: Catalog function or product of catalog functions.
        settings: Numerical tolerances.
        check_declared: Compare the index histogram with fn.declared_counts.

    Returns:
        Critical points sorted by (index, value, chart, coordinates).

    Raises:
        NoConvergenceError: no seed converged in any chart.
        DegenerateCriticalPointError: a survivor has a singular Hessian.
        IndexHistogramMismatchError: histogram differs from declared counts.
    """
    per_chart = Parallel(n_jobs=settings.n_jobs, prefer="threads")(
        delayed(_search_chart)(chart, settings) for chart in fn.charts
    )
    candidates = []
    for chart, points in zip(fn.charts, per_chart):
        if len(points) == 0:
            continue
        glob = chart.to_global(points)
        margins = np.minimum(points - np.asarray(chart.lower), np.asarray(chart.upper) - points).min(axis=1)
        candidates.extend(zip([chart] * len(points), points, margins, glob))
    if not candidates:
        raise NoConvergenceError(f"{fn.name}: no Newton seed converged in any chart")

    survivors = _deduplicate(fn, candidates, settings)
    points = [_classify(fn, chart, x, g, settings) for chart, x, _, g in survivors]
    points.sort(key=lambda p: (p.index, round(p.value, 9), p.chart_id, p.coordinates))
    logger.info("%s: %d candidates merged into %d critical points", fn.name, len(candidates), len(points))

    hist = index_histogram(points, fn.dim)
    if check_declared and fn.declared_counts is not None and hist != fn.declared_counts.counts:
        raise IndexHistogramMismatchError(fn.name, fn.declared_counts.counts, hist)
    return points


# ── Lemma 1 verification ───────────────────────────────────────────────────────
@dataclass(frozen=True)
class PairMatch:
    point: CriticalPoint
    first: Optional[int]
    second: Optional[int]
    index_ok: bool
    off_diagonal_max: float
    block_ok: bool

    def to_dict(self) -> dict:
        return {
            "point": self.point.to_dict(),
            "first": self.first,
            "second": self.second,
            "index_ok": self.index_ok,
            "off_diagonal_max": self.off_diagonal_max,
            "block_ok": self.block_ok,
        }


@dataclass(frozen=True)
class Lemma1Report:
    f1_name: str
    f2_name: str
    weights: tuple[float, float]
    first_points: tuple[CriticalPoint, ...]
    second_points: tuple[CriticalPoint, ...]
    product_points: tuple[CriticalPoint, ...]
    matches: tuple[PairMatch, ...]
    expected_histogram: tuple[int, ...]
    found_histogram: tuple[int, ...]
    bijective: bool
    count_ok: bool
    critical_values_distinct: bool
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "f1": self.f1_name,
            "f2": self.f2_name,
            "weights": list(self.weights),
            "verdict": "pass" if self.passed else "fail",
            "first_points": [p.to_dict() for p in self.first_points],
            "second_points": [p.to_dict() for p in self.second_points],
            "product_points": [p.to_dict() for p in self.product_points],
            "matches": [m.to_dict() for m in self.matches],
            "expected_histogram": list(self.expected_histogram),
            "found_histogram": list(self.found_histogram),
            "bijective": self.bijective,
            "count_ok": self.count_ok,
            "critical_values_distinct": self.critical_values_distinct,
            "failures": list(self.failures),
        }


def _unique_match(target, points, periods, tol: float) -> Optional[int]:
    hits = [i for i, q in enumerate(points) if periodic_distance(target, q.global_coordinates, periods) < tol]
    return hits[0] if len(hits) == 1 else None


def verify_lemma1(
    f1: ChartFunction,
    f2: ChartFunction,
    weights: tuple[float, float] = DEFAULT_WEIGHTS,
    settings: LabSettings = DEFAULT_SETTINGS,
) -> Lemma1Report:
    """
    Check that critical points of the diagonal function are exactly the
    pairs (p1, p2) of critical points of the factors, with i(p) = i(p1) + i(p2).

    Returns:
        Lemma1Report; verdict fails on any unmatched point, index mismatch,
        block-structure violation, histogram or count mismatch.
    """
    crit1 = find_critical_points(f1, settings)
    crit2 = find_critical_points(f2, settings)
    product = product_function(f1, f2, weights, settings.max_dim)
    crit = find_critical_points(product, settings, check_declared=False)

    g1 = f1.global_dim
    d1 = f1.dim
    failures = []
    matches = []
    used = set()
    for p in crit:
        glob = np.asarray(p.global_coordinates)
        i1 = _unique_match(glob[:g1], crit1, f1.periods, settings.tol_match)
        i2 = _unique_match(glob[g1:], crit2, f2.periods, settings.tol_match)

        hess = hessian_fd(product, p.chart_id, p.coordinates, settings)
        off = float(np.max(np.abs(hess[:d1, d1:])))
        scale = max(1.0, max(abs(e) for e in p.hessian_eigenvalues))
        block_ok = off < settings.block_tol * scale
        if not block_ok:
            failures.append(f"off-diagonal Hessian block {off:.3g} at {p.coordinates} ({p.chart_id})")

        index_ok = False
        if i1 is None or i2 is None:
            failures.append(f"unmatched critical point {p.coordinates} in chart {p.chart_id}")
        else:
            index_ok = p.index == crit1[i1].index + crit2[i2].index
            if not index_ok:
                failures.append(
                    f"index {p.index} at {p.coordinates} != {crit1[i1].index} + {crit2[i2].index}"
                )
            if (i1, i2) in used:
                failures.append(f"pair ({i1}, {i2}) matched twice")
            used.add((i1, i2))
        matches.append(PairMatch(p, i1, i2, index_ok, off, block_ok))

    expected_count = len(crit1) * len(crit2)
    count_ok = len(crit) == expected_count
    if not count_ok:
        failures.append(f"|crit(f)| = {len(crit)} but |crit(f1)|*|crit(f2)| = {expected_count}")
    bijective = count_ok and len(used) == expected_count and all(m.first is not None and m.second is not None for m in matches)
    if not bijective and count_ok:
        failures.append("pairing is not a bijection")

    expected_hist = convolve(index_histogram(crit1, f1.dim), index_histogram(crit2, f2.dim))
    found_hist = index_histogram(crit, product.dim)
    if found_hist != expected_hist:
        failures.append(f"index histogram {list(found_hist)} != convolution {list(expected_hist)}")
    failures.extend(
        f"gradient norm {p.gradient_norm:.3g} at {p.coordinates}"
        for p in crit
        if p.gradient_norm >= settings.tol_grad
    )

    values = sorted(p.value for p in crit)
    distinct = all(b - a > 1e-9 for a, b in zip(values, values[1:]))

    report = Lemma1Report(
        f1_name=f1.name,
        f2_name=f2.name,
        weights=(float(weights[0]), float(weights[1])),
        first_points=tuple(crit1),
        second_points=tuple(crit2),
        product_points=tuple(crit),
        matches=tuple(matches),
        expected_histogram=expected_hist,
        found_histogram=found_hist,
        bijective=bijective,
        count_ok=count_ok,
        critical_values_distinct=distinct,
        failures=tuple(failures),
    )
    logger.info("lemma 1 on %s x %s: %s", f1.name, f2.name, "pass" if report.passed else "fail")
    return report
