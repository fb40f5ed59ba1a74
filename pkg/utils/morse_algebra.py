"""
utils/morse_algebra.py
Exact integer model of Morse functions up to their fold cobordism class.

A Morse function is described by the cobordism class of its source manifold
(a formal token), optional rational Betti numbers, and the number C_j(f) of
critical points of each index j. All values are immutable; every operation
is a pure function.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Optional, Sequence

from utils.exceptions import (
    DimensionMismatchError,
    InvalidDescriptorError,
    MissingBettiError,
    OrientationMismatchError,
    PreconditionError,
)

logger = logging.getLogger(__name__)

LABEL_SEPARATOR = "*"


def convolve(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """
    Exact integer convolution: out[j] = sum over i+l=j of a[i] * b[l].

    Example:
        >>> convolve((1, 1), (1, 1))
        (1, 2, 1)
    """
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


def _alternating_sum(values: Iterable[int]) -> int:
    return sum(v if j % 2 == 0 else -v for j, v in enumerate(values))


def _multiply_labels(a: str, b: str) -> str:
    factors = a.split(LABEL_SEPARATOR) + b.split(LABEL_SEPARATOR)
    return LABEL_SEPARATOR.join(sorted(factors))


# ── Domain types ───────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class ClassToken:
    """
    Formal linear combination of manifold cobordism generators.

    Coefficients live in Z (oriented) or Z/2 (mod2=True). Build tokens with
    ``ClassToken.from_terms`` to get the canonical reduced form; the raw
    constructor is kept so that ``validate`` can inspect unreduced data.
    """

    terms: tuple[tuple[str, int], ...] = ()
    mod2: bool = False

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[str, int]], *, mod2: bool) -> "ClassToken":
        acc: dict[str, int] = defaultdict(int)
        for label, coeff in terms:
            acc[str(label)] += int(coeff)
        reduced = []
        for label in sorted(acc):
            coeff = acc[label] % 2 if mod2 else acc[label]
            if coeff:
                reduced.append((label, coeff))
        return cls(tuple(reduced), mod2)

    @classmethod
    def generator(cls, label: str, *, mod2: bool) -> "ClassToken":
        return cls.from_terms([(label, 1)], mod2=mod2)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for _, c in self.terms)

    def __add__(self, other: "ClassToken") -> "ClassToken":
        return ClassToken.from_terms(self.terms + other.terms, mod2=self.mod2)

    def __neg__(self) -> "ClassToken":
        return ClassToken.from_terms(((l, -c) for l, c in self.terms), mod2=self.mod2)

    def __mul__(self, other: "ClassToken") -> "ClassToken":
        products = [
            (_multiply_labels(l1, l2), c1 * c2)
            for l1, c1 in self.terms
            for l2, c2 in other.terms
        ]
        return ClassToken.from_terms(products, mod2=self.mod2)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = [label if coeff == 1 else f"{coeff}{label}" for label, coeff in self.terms]
        return " + ".join(parts)

    def to_list(self) -> list[list]:
        return [[label, coeff] for label, coeff in self.terms]


@dataclass(frozen=True)
class IndexCountVector:
    """The tuple (C_0(f), ..., C_m(f)) of critical point counts by index."""

    m: int
    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))

    def __getitem__(self, j: int) -> int:
        return self.counts[j]

    @property
    def is_empty(self) -> bool:
        return not any(self.counts)

    @property
    def total(self) -> int:
        return sum(self.counts)

    @classmethod
    def zeros(cls, m: int) -> "IndexCountVector":
        return cls(m, (0,) * (m + 1))


@dataclass(frozen=True)
class ManifoldClass:
    """Source manifold data: dimension, orientation, class token, Betti numbers."""

    m: int
    oriented: bool
    token: ClassToken = field(default_factory=ClassToken)
    betti: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if self.token.mod2 == self.oriented:
            object.__setattr__(self, "token", ClassToken(self.token.terms, mod2=not self.oriented))
        if self.betti is not None:
            object.__setattr__(self, "betti", tuple(int(b) for b in self.betti))

    @classmethod
    def build(
        cls,
        m: int,
        oriented: bool,
        terms: Iterable[tuple[str, int]] = (),
        betti: Optional[Sequence[int]] = None,
    ) -> "ManifoldClass":
        """Convenience constructor that reduces the token canonically."""
        token = ClassToken.from_terms(terms, mod2=not oriented)
        return cls(m, oriented, token, None if betti is None else tuple(betti))


@dataclass(frozen=True)
class MorseDescriptor:
    """An abstract Morse function: a manifold class plus its index counts."""

    manifold: ManifoldClass
    counts: IndexCountVector

    @property
    def m(self) -> int:
        return self.counts.m

    @property
    def oriented(self) -> bool:
        return self.manifold.oriented

    @property
    def is_empty(self) -> bool:
        return self.counts.is_empty and self.manifold.token.is_zero

    @classmethod
    def build(
        cls,
        counts: Sequence[int],
        *,
        oriented: bool = False,
        terms: Iterable[tuple[str, int]] = (),
        betti: Optional[Sequence[int]] = None,
        m: Optional[int] = None,
    ) -> "MorseDescriptor":
        """
        Shorthand used by tests, the CLI and the dashboard.

        Args:
            counts: C_0(f), ..., C_m(f).
            oriented: Whether the source manifold is oriented.
            terms: (label, coefficient) pairs of the class token.
            betti: Optional rational Betti numbers b_0, ..., b_m.
            m: Dimension; defaults to len(counts) - 1.

        Returns:
            MorseDescriptor (not validated).
        """
        m = len(counts) - 1 if m is None else m
        manifold = ManifoldClass.build(m, oriented, terms, betti)
        return cls(manifold, IndexCountVector(m, tuple(counts)))


@dataclass(frozen=True)
class CobordismInvariant:
    """Image of a Morse function under the classifying isomorphism."""

    m: int
    oriented: bool
    token: ClassToken
    phis: tuple[int, ...]
    z2: Optional[int] = None

    @property
    def phi_start(self) -> int:
        return phi_range_start(self.m)

    def phi_at(self, j: int) -> int:
        """Return the recorded phi_j; j must lie in the classified range."""
        if not self.phi_start <= j <= self.m:
            raise PreconditionError(
                f"phi_{j} is not part of the invariant (range {self.phi_start}..{self.m})"
            )
        return self.phis[j - self.phi_start]

    def describe(self) -> str:
        text = f"token={self.token};phis={list(self.phis)}"
        if self.z2 is not None:
            text += f";z2={self.z2}"
        return text

    def to_dict(self) -> dict:
        return {
            "dimension": self.m,
            "oriented": self.oriented,
            "token": self.token.to_list(),
            "phi_start": self.phi_start,
            "phis": list(self.phis),
            "z2": self.z2,
        }


@dataclass(frozen=True)
class Violation:
    """A violated admissibility invariant with a human-readable reason."""

    invariant: str
    reason: str


class ExtraMiddlePair(str, Enum):
    """When stabilize adds the single middle cancelling pair."""

    AUTO = "auto"
    ON = "on"
    OFF = "off"


# ── Helpers ────────────────────────────────────────────────────────────────────
def phi_range_start(m: int) -> int:
    """First index j = floor((m+3)/2) of the classified phi range."""
    return (m + 3) // 2


def empty_descriptor(m: int, oriented: bool, with_betti: bool = False) -> MorseDescriptor:
    """The additive identity: the (empty) function on the empty manifold."""
    betti = (0,) * (m + 1) if with_betti else None
    manifold = ManifoldClass(m, oriented, ClassToken(mod2=not oriented), betti)
    return MorseDescriptor(manifold, IndexCountVector.zeros(m))


def sigma(manifold: ManifoldClass) -> int:
    """
    sigma(M) = b_0 + ... + b_{2k} for a closed oriented manifold of dimension 4k+1.

    Raises:
        MissingBettiError: when Betti numbers are absent.
        PreconditionError: when m is not of the form 4k+1.
    """
    if manifold.m % 4 != 1:
        raise PreconditionError(f"sigma(M) is only defined for m = 4k+1, got m={manifold.m}")
    if manifold.betti is None:
        raise MissingBettiError(
            f"sigma(M) requires the rational Betti numbers of the {manifold.m}-dimensional "
            "oriented source manifold; supply manifold.betti"
        )
    return sum(manifold.betti[: (manifold.m - 1) // 2 + 1])


def _require_same_kind(d1: MorseDescriptor, d2: MorseDescriptor) -> None:
    if d1.m != d2.m:
        raise DimensionMismatchError(f"dimension mismatch: {d1.m} vs {d2.m}")
    if d1.oriented != d2.oriented:
        raise OrientationMismatchError(
            f"orientation mismatch: oriented={d1.oriented} vs oriented={d2.oriented}"
        )


def ensure_valid(d: MorseDescriptor) -> MorseDescriptor:
    """Raise InvalidDescriptorError when validate(d) reports anything."""
    violations = validate(d)
    if violations:
        raise InvalidDescriptorError(violations)
    return d


# ── Operations ─────────────────────────────────────────────────────────────────
def validate(d: MorseDescriptor) -> list[Violation]:
    """
    Report every violated invariant of the descriptor and its parts.

    Returns:
        List of Violation records; empty iff d is admissible input.
    """
    out: list[Violation] = []
    counts, manifold = d.counts, d.manifold
    m = counts.m

    if m < 0:
        return [Violation("dimension", f"dimension must be non-negative, got {m}")]
    if manifold.m != m:
        out.append(
            Violation("dimension", f"manifold dimension {manifold.m} differs from counts dimension {m}")
        )

    shape_ok = len(counts.counts) == m + 1
    if not shape_ok:
        out.append(
            Violation("counts-length", f"counts has length {len(counts.counts)}, expected m+1 = {m + 1}")
        )
    negatives = [j for j, c in enumerate(counts.counts) if c < 0]
    if negatives:
        out.append(Violation("counts-nonnegative", f"negative counts at indices {negatives}"))

    if shape_ok and not counts.is_empty:
        if counts[0] < 1:
            out.append(Violation("minimum", "a nonempty closed manifold needs C_0 >= 1 (a minimum)"))
        if counts[m] < 1:
            out.append(Violation("maximum", f"a nonempty closed manifold needs C_{m} >= 1 (a maximum)"))
        chi = _alternating_sum(counts.counts)
        if m % 2 == 1 and chi != 0:
            out.append(
                Violation(
                    "odd-euler",
                    f"odd-dimension Euler characteristic {chi} != 0 "
                    f"(alternating sum of counts on an {m}-manifold)",
                )
            )

    if not manifold.oriented:
        bad = [label for label, c in manifold.token.terms if c not in (0, 1)]
        if bad:
            out.append(
                Violation("token-mod2", f"unoriented token coefficients must be 0 or 1 (labels {bad})")
            )

    betti = manifold.betti
    if betti is not None:
        if len(betti) != m + 1:
            out.append(Violation("betti-length", f"betti has length {len(betti)}, expected {m + 1}"))
        elif any(b < 0 for b in betti):
            out.append(Violation("betti-nonnegative", "Betti numbers must be non-negative"))
        else:
            chi_m = _alternating_sum(betti)
            if m % 2 == 1 and chi_m != 0:
                out.append(
                    Violation("betti-odd-euler", f"alternating sum of Betti numbers {chi_m} != 0 for odd m={m}")
                )
            if manifold.oriented and any(betti[j] != betti[m - j] for j in range(m + 1)):
                out.append(
                    Violation("poincare-duality", f"oriented Betti numbers {list(betti)} are not symmetric")
                )
            if shape_ok:
                weak = [j for j in range(m + 1) if counts[j] < betti[j]]
                if weak:
                    out.append(
                        Violation(
                            "morse-inequalities",
                            f"C_j < b_j at indices {weak} (weak Morse inequalities)",
                        )
                    )
                chi_c = _alternating_sum(counts.counts)
                if chi_c != chi_m:
                    out.append(
                        Violation(
                            "euler-characteristic",
                            f"alternating sum of counts {chi_c} != alternating sum of Betti numbers {chi_m}",
                        )
                    )
    return out


def euler_characteristic(d: MorseDescriptor) -> int:
    """Return sum_j (-1)^j C_j(f)."""
    return _alternating_sum(d.counts.counts)


def phi(d: MorseDescriptor, j: int) -> int:
    """
    phi_j(f) = C_j(f) - C_{m-j}(f).

    Raises:
        InvalidDescriptorError: counts do not have length m+1.
        PreconditionError: when j is outside 0..m.
    """
    if not 0 <= j <= d.m:
        raise PreconditionError(f"phi index j={j} outside 0..{d.m}")
    if len(d.counts.counts) != d.m + 1:
        raise InvalidDescriptorError(
            [Violation("counts-length", f"counts has length {len(d.counts.counts)}, expected m+1 = {d.m + 1}")]
        )
    return d.counts[j] - d.counts[d.m - j]


def phi_vector(d: MorseDescriptor) -> tuple[int, ...]:
    return tuple(phi(d, j) for j in range(d.m + 1))


def disjoint_union(d1: MorseDescriptor, d2: MorseDescriptor) -> MorseDescriptor:
    """Sum in the cobordism group: the function on M1 ⊔ M2."""
    _require_same_kind(d1, d2)
    counts = tuple(a + b for a, b in zip(d1.counts.counts, d2.counts.counts))
    b1, b2 = d1.manifold.betti, d2.manifold.betti
    betti = tuple(x + y for x, y in zip(b1, b2)) if b1 is not None and b2 is not None else None
    manifold = ManifoldClass(d1.m, d1.oriented, d1.manifold.token + d2.manifold.token, betti)
    return MorseDescriptor(manifold, IndexCountVector(d1.m, counts))


def negate(d: MorseDescriptor) -> MorseDescriptor:
    """Model f -> -f: index j becomes m - j; oriented tokens change sign."""
    token = -d.manifold.token if d.oriented else d.manifold.token
    return MorseDescriptor(
        replace(d.manifold, token=token),
        IndexCountVector(d.m, tuple(reversed(d.counts.counts))),
    )


def diagonal_product(d1: MorseDescriptor, d2: MorseDescriptor) -> MorseDescriptor:
    """
    Critical data of the diagonal Morse function on M1 x M2.

    Every pair (p1, p2) of critical points yields one critical point whose
    index is i(p1) + i(p2), so counts convolve.
    """
    if d1.oriented != d2.oriented:
        raise OrientationMismatchError(
            f"orientation mismatch: oriented={d1.oriented} vs oriented={d2.oriented}"
        )
    ensure_valid(d1)
    ensure_valid(d2)
    m = d1.m + d2.m
    b1, b2 = d1.manifold.betti, d2.manifold.betti
    betti = convolve(b1, b2) if b1 is not None and b2 is not None else None
    manifold = ManifoldClass(m, d1.oriented, d1.manifold.token * d2.manifold.token, betti)
    return MorseDescriptor(manifold, IndexCountVector(m, convolve(d1.counts.counts, d2.counts.counts)))


def theorem3_phi(d1: MorseDescriptor, d2: MorseDescriptor, j: int) -> int:
    """
    phi_{m1+m2-j} of the diagonal function from the factors' counts alone.

    Evaluates
        sum_{j1=0}^{j} C_{m1-j+j1}(f1) C_{m2-j1}(f2) - sum_{j1=0}^{j} C_{j1}(f1) C_{j-j1}(f2)
    for m1 <= m2 and 0 <= j < m1.
    """
    m1, m2 = d1.m, d2.m
    if m1 > m2:
        raise PreconditionError(f"theorem3_phi needs m1 <= m2, got m1={m1}, m2={m2}")
    if not 0 <= j < m1:
        raise PreconditionError(f"theorem3_phi needs 0 <= j < m1={m1}, got j={j}")
    ensure_valid(d1)
    ensure_valid(d2)
    c1, c2 = d1.counts, d2.counts
    top = sum(c1[m1 - j + j1] * c2[m2 - j1] for j1 in range(j + 1))
    bottom = sum(c1[j1] * c2[j - j1] for j1 in range(j + 1))
    return top - bottom


@dataclass(frozen=True)
class Theorem3Check:
    """theorem3_phi next to phi of the explicitly built diagonal product."""

    j: int
    index: int
    theorem3_phi: int
    convolution_phi: int

    @property
    def agrees(self) -> bool:
        return self.theorem3_phi == self.convolution_phi

    def to_dict(self) -> dict:
        return {
            "j": self.j,
            "index": self.index,
            "theorem3_phi": self.theorem3_phi,
            "convolution_phi": self.convolution_phi,
        }


def check_theorem3(d1: MorseDescriptor, d2: MorseDescriptor, j: int) -> Theorem3Check:
    """Evaluate theorem3_phi and compare it with phi_{m1+m2-j} of diagonal_product(d1, d2)."""
    value = theorem3_phi(d1, d2, j)
    product = diagonal_product(d1, d2)
    index = product.m - j
    check = Theorem3Check(j, index, value, phi(product, index))
    if not check.agrees:
        logger.warning("theorem3 mismatch at j=%d: %d vs %d", j, check.theorem3_phi, check.convolution_phi)
    return check


def cobordism_invariant(d: MorseDescriptor) -> CobordismInvariant:
    """
    Classifying tuple of the fold cobordism class of d.

    The token, phi_j for floor((m+3)/2) <= j <= m and, for oriented
    m = 4k+1, the Z/2 datum sigma(M) - sum_{j<=2k} phi_j mod 2.

    Raises:
        InvalidDescriptorError: d fails validate.
        MissingBettiError: oriented m = 4k+1 without Betti numbers.
    """
    ensure_valid(d)
    m = d.m
    phis = tuple(phi(d, j) for j in range(phi_range_start(m), m + 1))
    z2 = None
    if d.oriented and m % 4 == 1:
        upper = (m - 1) // 2
        z2 = (sigma(d.manifold) - sum(phi(d, j) for j in range(upper + 1))) % 2
    return CobordismInvariant(m, d.oriented, d.manifold.token, phis, z2)


def is_cobordant(d1: MorseDescriptor, d2: MorseDescriptor) -> bool:
    """True iff the two descriptors have equal cobordism invariants."""
    _require_same_kind(d1, d2)
    return cobordism_invariant(d1) == cobordism_invariant(d2)


def _extra_pair_fires(m: int, k: int, mode: ExtraMiddlePair) -> bool:
    if mode is ExtraMiddlePair.ON:
        return True
    if mode is ExtraMiddlePair.AUTO:
        return m % 4 == 1 and k >= 1
    return False


def stabilization_increment(m: int, k: int, mode=ExtraMiddlePair.AUTO) -> tuple[int, ...]:
    """
    Per-index counts added by stabilize(d, k, mode) on an m-manifold.

    k cancelling pairs of (j, j+1)-handles for every 0 <= j <= m-1, plus at
    most one (floor(m/2), floor(m/2)+1) pair.
    """
    mode = ExtraMiddlePair(mode)
    if k < 0:
        raise PreconditionError(f"number of cancelling pairs k must be >= 0, got {k}")
    added = [0] * (m + 1)
    for j in range(m):
        added[j] += k
        added[j + 1] += k
    if _extra_pair_fires(m, k, mode):
        if m == 0:
            raise PreconditionError("no middle cancelling pair exists on a 0-manifold")
        added[m // 2] += 1
        added[m // 2 + 1] += 1
    return tuple(added)


def stabilize(d: MorseDescriptor, k: int, extra_middle_pair=ExtraMiddlePair.AUTO) -> MorseDescriptor:
    """
    Add cancelling handle pairs to d without changing the source manifold.

    Raises:
        PreconditionError: d is empty or k < 0.
        InvalidDescriptorError: d fails validate.
    """
    ensure_valid(d)
    if d.counts.is_empty:
        raise PreconditionError("cannot stabilize the empty descriptor: no manifold to attach handles to")
    added = stabilization_increment(d.m, k, extra_middle_pair)
    counts = tuple(c + a for c, a in zip(d.counts.counts, added))
    logger.debug("stabilize m=%d k=%d mode=%s added=%s", d.m, k, extra_middle_pair, added)
    return MorseDescriptor(d.manifold, IndexCountVector(d.m, counts))
