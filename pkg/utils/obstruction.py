"""
utils/obstruction.py
Shows that the diagonal product does not descend to cobordism classes.

A family f_0, f_1, ... of stabilizations of f' stays in one cobordism class,
yet the diagonal functions obtained from (f, f_k) land in pairwise distinct
classes whenever phi_m(f) != 0: their top phi grows by phi_m(f) per step.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

from joblib import Parallel, delayed

from utils.config import DEFAULT_SETTINGS
from utils.exceptions import (
    ObstructionConsistencyError,
    OrientationMismatchError,
    PreconditionError,
)
from utils.morse_algebra import (
    CobordismInvariant,
    ExtraMiddlePair,
    MorseDescriptor,
    cobordism_invariant,
    diagonal_product,
    ensure_valid,
    phi,
    stabilization_increment,
    stabilize,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ObstructionRow:
    k: int
    family_counts: tuple[int, ...]
    family_invariant: CobordismInvariant
    product_phi_top: int
    proof_formula_phi_top: int
    product_invariant: CobordismInvariant

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "family_counts": list(self.family_counts),
            "family_invariant": self.family_invariant.to_dict(),
            "product_phi_top": self.product_phi_top,
            "proof_formula_phi_top": self.proof_formula_phi_top,
            "product_invariant": self.product_invariant.to_dict(),
        }


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    counterexample_ks: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "counterexample_ks": list(self.counterexample_ks),
        }


@dataclass(frozen=True)
class Theorem4Report:
    rows: tuple[ObstructionRow, ...]
    checks: tuple[CheckResult, ...]
    expected_increment: int
    first_spacing: Optional[int]
    steady_spacing: Optional[int]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "expected_increment": self.expected_increment,
            "first_spacing": self.first_spacing,
            "steady_spacing": self.steady_spacing,
            "checks": [c.to_dict() for c in self.checks],
            "rows": [r.to_dict() for r in self.rows],
        }


def _require_nonempty(d: MorseDescriptor, name: str) -> None:
    ensure_valid(d)
    if d.counts.is_empty:
        raise PreconditionError(f"{name} must be a nonempty descriptor")


def build_family(
    d_prime: MorseDescriptor,
    K: int,
    extra_middle_pair=ExtraMiddlePair.AUTO,
) -> list[MorseDescriptor]:
    """
    Return [stabilize(d_prime, k) for k = 0..K], all in the class of d_prime.
    """
    if K < 0:
        raise PreconditionError(f"family size K must be >= 0, got {K}")
    _require_nonempty(d_prime, "d_prime")
    return [stabilize(d_prime, k, extra_middle_pair) for k in range(K + 1)]


def closed_formula_phi_top(d: MorseDescriptor, f_k: MorseDescriptor) -> int:
    """C_m(f) C_{m'}(f_k) - C_0(f) C_0(f_k): Theorem 3 at j = 0."""
    return d.counts[d.m] * f_k.counts[f_k.m] - d.counts[0] * f_k.counts[0]


def proof_formula_phi_top(d: MorseDescriptor, d_prime: MorseDescriptor, k: int) -> int:
    """
    C_m(f)(C_{m'}(f') + k) - C_0(f)(C_0(f') + k).

    This count assumes exactly k new minima and maxima, i.e. it ignores the
    extra middle pair; it differs from the auto family only when m' = 1.
    """
    return d.counts[d.m] * (d_prime.counts[d_prime.m] + k) - d.counts[0] * (d_prime.counts[0] + k)


def _row(d: MorseDescriptor, d_prime: MorseDescriptor, k: int, f_k: MorseDescriptor) -> ObstructionRow:
    product = diagonal_product(d, f_k)
    top = product.m
    formula = closed_formula_phi_top(d, f_k)
    convolved = phi(product, top)
    if formula != convolved:
        raise ObstructionConsistencyError(
            f"row k={k}: closed formula gives {formula}, convolution gives {convolved}"
        )
    return ObstructionRow(
        k=k,
        family_counts=f_k.counts.counts,
        family_invariant=cobordism_invariant(f_k),
        product_phi_top=convolved,
        proof_formula_phi_top=proof_formula_phi_top(d, d_prime, k),
        product_invariant=cobordism_invariant(product),
    )


def obstruction_table(
    d: MorseDescriptor,
    d_prime: MorseDescriptor,
    K: int,
    extra_middle_pair=ExtraMiddlePair.AUTO,
    n_jobs: Optional[int] = None,
) -> list[ObstructionRow]:
    """
    One row per k = 0..K for the diagonal functions from (d, f_k).

    Args:
        d: The fixed function f on an m-manifold.
        d_prime: The seed f' of the family.
        K: Largest stabilization parameter.
        extra_middle_pair: Middle-pair mode passed to stabilize.
        n_jobs: joblib worker count (defaults to the configured setting).

    Returns:
        Rows ordered by k.

    Raises:
        ObstructionConsistencyError: the two top-phi computations disagree.
    """
    _require_nonempty(d, "d")
    if d.oriented != d_prime.oriented:
        raise OrientationMismatchError(
            f"orientation mismatch: oriented={d.oriented} vs oriented={d_prime.oriented}"
        )
    family = build_family(d_prime, K, extra_middle_pair)
    n_jobs = DEFAULT_SETTINGS.n_jobs if n_jobs is None else n_jobs
    rows = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_row)(d, d_prime, k, f_k) for k, f_k in enumerate(family)
    )
    logger.info("obstruction table: m=%d m'=%d K=%d rows=%d", d.m, d_prime.m, K, len(rows))
    return list(rows)


def _duplicates(values) -> tuple[int, ...]:
    seen: dict = {}
    dupes = []
    for k, value in values:
        if value in seen:
            dupes.extend([seen[value], k])
        else:
            seen[value] = k
    return tuple(sorted(set(dupes)))


def verify_theorem4(
    d: MorseDescriptor,
    d_prime: MorseDescriptor,
    K: int,
    extra_middle_pair=ExtraMiddlePair.AUTO,
    n_jobs: Optional[int] = None,
) -> Theorem4Report:
    """
    Check the obstruction on the finite family k = 0..K (K >= 1).

    Assertions:
        family-constant: every f_k has the invariant of f_0.
        products-distinct: when phi_m(f) != 0 the product invariants are
            pairwise distinct.
        top-phi-constant: when phi_m(f) == 0 the top phi column is constant.
        row-difference: consecutive top phi values differ by phi_m(f), times
            (1 + e) on the 0 -> 1 step, e being the middle pair's contribution
            to C_0(f_1).
    """
    if K < 1:
        raise PreconditionError(f"verify_theorem4 needs K >= 1, got {K}")
    rows = obstruction_table(d, d_prime, K, extra_middle_pair, n_jobs)
    increment = phi(d, d.m)
    checks = []

    base = rows[0].family_invariant
    off = tuple(r.k for r in rows if r.family_invariant != base)
    checks.append(
        CheckResult(
            "family-constant",
            not off,
            "all f_k share the invariant of f_0" if not off else "stabilization changed the class",
            off,
        )
    )

    if increment != 0:
        dupes = _duplicates((r.k, r.product_invariant) for r in rows)
        checks.append(
            CheckResult(
                "products-distinct",
                not dupes,
                f"phi_m(f) = {increment} != 0; {len(rows)} product invariants pairwise distinct"
                if not dupes
                else "some diagonal functions share a class",
                dupes,
            )
        )
    else:
        off = tuple(r.k for r in rows if r.product_phi_top != rows[0].product_phi_top)
        checks.append(
            CheckResult(
                "top-phi-constant",
                not off,
                "phi_m(f) = 0; top phi column constant" if not off else "top phi varies although phi_m(f) = 0",
                off,
            )
        )

    # e: what the middle pair adds to C_0 on the 0 -> 1 step (only when m' = 1)
    e = (
        stabilization_increment(d_prime.m, 1, extra_middle_pair)[0]
        - stabilization_increment(d_prime.m, 0, extra_middle_pair)[0]
        - 1
    )
    spacings = [rows[i + 1].product_phi_top - rows[i].product_phi_top for i in range(len(rows) - 1)]
    bad = []
    for i, step in enumerate(spacings):
        expected = increment * (1 + e) if i == 0 else increment
        if step != expected:
            bad.append(i + 1)
    checks.append(
        CheckResult(
            "row-difference",
            not bad,
            f"steps of {increment} per k (first step {increment * (1 + e)})",
            tuple(bad),
        )
    )

    report = Theorem4Report(
        rows=tuple(rows),
        checks=tuple(checks),
        expected_increment=increment,
        first_spacing=spacings[0] if spacings else None,
        steady_spacing=spacings[1] if len(spacings) > 1 else None,
    )
    logger.info("theorem 4 verdict: %s", "pass" if report.passed else "fail")
    return report
