import math
from dataclasses import replace

import numpy as np
import pytest

from utils.catalog import (
    Chart,
    ChartFunction,
    catalog,
    circle_cos,
    parse_catalog_spec,
    partner_specs,
    product_function,
    sphere_height,
    torus_height,
)
from utils.config import DEFAULT_WEIGHTS, LabSettings
from utils.exceptions import (
    CatalogError,
    ChartMarginError,
    DegenerateCriticalPointError,
    IndexHistogramMismatchError,
    NoConvergenceError,
    PreconditionError,
)
from utils.morse_algebra import IndexCountVector
from utils.numerical_lab import (
    find_critical_points,
    gradient_fd,
    hessian_fd,
    hessian_refinement,
    index_histogram,
    periodic_distance,
    verify_lemma1,
)


def indices(points):
    return sorted(p.index for p in points)


# ── Catalog ────────────────────────────────────────────────────────────────────
def test_catalog_declared_counts():
    assert circle_cos(3).declared_counts.counts == (3, 3)
    assert sphere_height().declared_counts.counts == (1, 0, 1)
    assert torus_height().declared_counts.counts == (1, 2, 1)


@pytest.mark.parametrize("spec", ["klein_bottle", "circle_cos:0", "circle_cos:x", "sphere_height:2"])
def test_catalog_rejects_bad_specs(spec):
    with pytest.raises(CatalogError):
        parse_catalog_spec(spec)


def test_catalog_lookup_by_name():
    assert catalog("circle_cos").name == "circle_cos(1)"
    assert parse_catalog_spec("circle_cos:2").name == "circle_cos(2)"


def test_partner_specs_cap_product_dimension():
    specs = ["circle_cos:1", "sphere_height", "torus_height"]
    assert partner_specs("torus_height", specs, 3) == ["circle_cos:1"]
    assert partner_specs("circle_cos:2", specs, 3) == specs


def test_product_declared_counts():
    assert product_function(circle_cos(1), circle_cos(1)).declared_counts.counts == (1, 2, 1)
    assert product_function(sphere_height(), circle_cos(1)).declared_counts.counts == (1, 1, 1, 1)


def test_product_rejects_bad_weights_and_dimension():
    with pytest.raises(PreconditionError):
        product_function(circle_cos(1), circle_cos(1), weights=(1.0, 0.0))
    with pytest.raises(PreconditionError):
        product_function(torus_height(), sphere_height(), max_dim=3)


# ── Finite differences ─────────────────────────────────────────────────────────
def test_gradient_examples():
    assert gradient_fd(circle_cos(1), "a", [math.pi / 2])[0] == pytest.approx(-1.0, abs=1e-8)
    assert np.allclose(gradient_fd(sphere_height(), "south", [0.0, 0.0]), 0.0, atol=1e-10)
    assert np.allclose(gradient_fd(torus_height(), "aa", [0.0, math.pi / 2]), 0.0, atol=1e-8)


def test_hessian_examples():
    assert hessian_fd(circle_cos(1), "a", [0.0])[0, 0] == pytest.approx(-1.0, abs=1e-5)
    assert np.all(np.linalg.eigvalsh(hessian_fd(sphere_height(), "south", [0.0, 0.0])) > 0)


def test_product_hessian_is_block_diagonal():
    fn = product_function(circle_cos(1), circle_cos(1), DEFAULT_WEIGHTS)
    hess = hessian_fd(fn, "a*a", [0.0, 0.0])
    w = 1 / math.sqrt(2)
    assert np.diag(hess) == pytest.approx([-w, -w], abs=1e-5)
    assert abs(hess[0, 1]) < 1e-6


def test_stencil_must_fit_in_chart():
    near_edge = [-math.pi / 2 + 1e-7]
    with pytest.raises(ChartMarginError):
        gradient_fd(circle_cos(1), "a", near_edge)
    with pytest.raises(ChartMarginError):
        hessian_fd(circle_cos(1), "a", near_edge)
    with pytest.raises(CatalogError):
        gradient_fd(circle_cos(1), "z", [0.0])


def test_hessian_refinement_converges():
    result = hessian_refinement(torus_height(), "aa", [0.0, math.pi / 2])
    assert result.passed
    assert sorted(np.sign(result.eigenvalues)) == [-1.0, -1.0]


def test_periodic_distance_wraps():
    assert periodic_distance([0.0], [2 * math.pi - 1e-9], (2 * math.pi,)) < 1e-8
    assert periodic_distance([0.0, 0.0], [0.0, 1.0], (None, None)) == pytest.approx(1.0)


# ── Critical point search ──────────────────────────────────────────────────────
def test_circle_critical_points():
    points = find_critical_points(circle_cos(1))
    assert len(points) == 2
    assert index_histogram(points, 1) == (1, 1)
    by_index = {p.index: p.global_coordinates[0] % (2 * math.pi) for p in points}
    assert by_index[0] == pytest.approx(math.pi, abs=1e-6)
    assert min(by_index[1], 2 * math.pi - by_index[1]) < 1e-6


def test_circle_cos_three():
    points = find_critical_points(circle_cos(3))
    assert index_histogram(points, 1) == (3, 3)


def test_sphere_critical_points():
    points = find_critical_points(sphere_height())
    assert index_histogram(points, 2) == (1, 0, 1)
    poles = sorted(round(p.global_coordinates[2]) for p in points)
    assert poles == [-1, 1]


def test_torus_critical_points():
    points = find_critical_points(torus_height())
    assert len(points) == 4
    assert indices(points) == [0, 1, 1, 2]


def test_product_weights_do_not_change_critical_set():
    tilted = find_critical_points(product_function(circle_cos(1), circle_cos(1), (1.0, 1.0)))
    default = find_critical_points(product_function(circle_cos(1), circle_cos(1), DEFAULT_WEIGHTS))
    assert len(tilted) == len(default) == 4
    periods = (2 * math.pi, 2 * math.pi)
    for p in tilted:
        partners = [q for q in default if periodic_distance(p.global_coordinates, q.global_coordinates, periods) < 1e-6]
        assert len(partners) == 1
        assert partners[0].index == p.index


def test_no_critical_points_is_an_error():
    chart = Chart("line", (-1.0,), (1.0,), lambda x: x[:, 0])
    fn = ChartFunction("linear", 1, (chart,), (None,))
    with pytest.raises(NoConvergenceError):
        find_critical_points(fn)


def test_degenerate_hessian_is_an_error():
    with pytest.raises(DegenerateCriticalPointError):
        find_critical_points(circle_cos(1), LabSettings(tol_degenerate=2.0))


def test_declared_counts_are_enforced():
    wrong = replace(circle_cos(1), declared_counts=IndexCountVector(1, (2, 2)))
    with pytest.raises(IndexHistogramMismatchError) as info:
        find_critical_points(wrong)
    assert info.value.found == (1, 1)
    assert find_critical_points(wrong, check_declared=False)


# ── Index additivity ───────────────────────────────────────────────────────────
@pytest.mark.parametrize(
    "f1, f2, histogram",
    [
        ("circle_cos:1", "circle_cos:1", (1, 2, 1)),
        ("circle_cos:2", "circle_cos:1", (2, 4, 2)),
        ("sphere_height", "circle_cos:1", (1, 1, 1, 1)),
        ("torus_height", "circle_cos:1", (1, 3, 3, 1)),
    ],
)
def test_verify_lemma1_passes(f1, f2, histogram):
    report = verify_lemma1(parse_catalog_spec(f1), parse_catalog_spec(f2))
    assert report.passed, report.failures
    assert report.bijective and report.count_ok
    assert report.found_histogram == report.expected_histogram == histogram
    assert all(m.index_ok and m.block_ok for m in report.matches)
    assert all(p.gradient_norm < 1e-8 for p in report.product_points)


def test_lemma1_report_records_coinciding_values():
    report = verify_lemma1(circle_cos(2), circle_cos(1))
    assert not report.critical_values_distinct
    payload = report.to_dict()
    assert payload["verdict"] == "pass"
    assert len(payload["product_points"]) == 8


def test_lemma1_without_declared_counts_and_unequal_weights():
    undeclared = replace(circle_cos(1), declared_counts=None)
    report = verify_lemma1(undeclared, circle_cos(1))
    assert report.passed
    assert verify_lemma1(circle_cos(1), circle_cos(1), (2.0, 0.5)).passed


@pytest.mark.parametrize("fn", [circle_cos(1), circle_cos(3), sphere_height(), torus_height()], ids=lambda f: f.name)
def test_hessian_refinement_at_catalog_critical_points(fn):
    for p in find_critical_points(fn):
        assert hessian_refinement(fn, p.chart_id, p.coordinates).passed
