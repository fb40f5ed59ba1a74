"""Group laws, Theorem 3 and stabilization invariance over random descriptors."""

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from tests.strategies import descriptors, ordered_pairs, product_pairs, same_kind
from utils.morse_algebra import (
    cobordism_invariant,
    diagonal_product,
    disjoint_union,
    empty_descriptor,
    euler_characteristic,
    is_cobordant,
    negate,
    phi,
    stabilize,
    theorem3_phi,
    validate,
)
from utils.sampling import generate_descriptor_pairs, random_descriptor

LAWS = settings(max_examples=500)


# ── Group laws ─────────────────────────────────────────────────────────────────
@LAWS
@given(same_kind(n=3))
def test_disjoint_union_is_associative_and_commutative(ds):
    a, b, c = ds
    assert disjoint_union(disjoint_union(a, b), c) == disjoint_union(a, disjoint_union(b, c))
    assert disjoint_union(a, b) == disjoint_union(b, a)


@LAWS
@given(descriptors())
def test_empty_descriptor_is_identity(d):
    e = empty_descriptor(d.m, d.oriented, with_betti=d.manifold.betti is not None)
    assert disjoint_union(d, e) == d


@LAWS
@given(descriptors(with_betti=True))
def test_negate_is_inverse_on_invariants(d):
    total = disjoint_union(d, negate(d))
    empty = empty_descriptor(d.m, d.oriented, with_betti=True)
    assert cobordism_invariant(total) == cobordism_invariant(empty)


@LAWS
@given(descriptors())
def test_negate_is_an_involution_that_flips_phi(d):
    assert negate(negate(d)) == d
    for j in range(d.m + 1):
        assert phi(negate(d), j) == -phi(d, j)


@LAWS
@given(descriptors(oriented=False))
def test_unoriented_token_is_two_torsion(d):
    assert disjoint_union(d, d).manifold.token.is_zero


@LAWS
@given(descriptors())
def test_phi_is_antisymmetric(d):
    for j in range(d.m + 1):
        assert phi(d, j) == -phi(d, d.m - j)


# ── Diagonal product ───────────────────────────────────────────────────────────
@LAWS
@given(product_pairs())
def test_diagonal_product_is_commutative(pair):
    d1, d2 = pair
    assert diagonal_product(d1, d2) == diagonal_product(d2, d1)


@LAWS
@given(product_pairs())
def test_total_count_identity(pair):
    d1, d2 = pair
    product = diagonal_product(d1, d2)
    assert product.counts.total == d1.counts.total * d2.counts.total
    assert validate(product) == []


@LAWS
@given(same_kind(n=2, max_dim=3), st.data())
def test_diagonal_product_distributes_over_union(ds, data):
    b, c = ds
    a = data.draw(descriptors(oriented=b.oriented, with_betti=b.manifold.betti is not None, max_dim=3))
    left = diagonal_product(a, disjoint_union(b, c))
    right = disjoint_union(diagonal_product(a, b), diagonal_product(a, c))
    assert left == right


# ── Theorem 3 ──────────────────────────────────────────────────────────────────
@settings(max_examples=1000)
@given(ordered_pairs())
def test_theorem3_matches_convolution(pair):
    d1, d2 = pair
    product = diagonal_product(d1, d2)
    for j in range(d1.m):
        assert theorem3_phi(d1, d2, j) == phi(product, product.m - j)


def test_theorem3_seeded_sweep(property_seed):
    for d1, d2 in generate_descriptor_pairs(1000, max_dim=6, seed=property_seed):
        product = diagonal_product(d1, d2)
        for j in range(d1.m):
            assert theorem3_phi(d1, d2, j) == phi(product, product.m - j)


# ── Stabilization ──────────────────────────────────────────────────────────────
def test_stabilization_preserves_invariant_and_euler(rng):
    for _ in range(200):
        m = int(rng.integers(0, 7))
        d = random_descriptor(rng, m, oriented=bool(rng.integers(0, 2)))
        base = cobordism_invariant(d)
        for k in range(6):
            s = stabilize(d, k)
            assert cobordism_invariant(s) == base
            assert euler_characteristic(s) == euler_characteristic(d)


@LAWS
@given(descriptors(with_betti=True), st.integers(0, 5))
def test_stabilized_descriptors_are_cobordant(d, k):
    assert is_cobordant(d, stabilize(d, k))


@LAWS
@given(same_kind(n=2, with_betti=True))
def test_different_phis_are_never_cobordant(ds):
    d1, d2 = ds
    inv1, inv2 = cobordism_invariant(d1), cobordism_invariant(d2)
    assume(inv1.phis != inv2.phis)
    assert not is_cobordant(d1, d2)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_sampler_produces_valid_descriptors(seed):
    for d1, d2 in generate_descriptor_pairs(50, seed=seed):
        assert validate(d1) == []
        assert validate(d2) == []
        assert d1.m <= d2.m
