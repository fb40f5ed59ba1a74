"""
utils/sampling.py
Generates random admissible Morse descriptors for property checks and demos.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from utils.config import DEFAULT_SEED
from utils.morse_algebra import MorseDescriptor

GENERATOR_LABELS = ["A", "B", "C", "P", "Q"]


def random_betti(rng: np.random.Generator, m: int, max_value: int = 3) -> list[int]:
    """
    Draw Poincare-symmetric Betti numbers with b_0 = b_m = 1.

    Symmetry makes the alternating sum vanish automatically in odd dimensions.
    """
    betti = [0] * (m + 1)
    for j in range(m // 2 + 1):
        value = 1 if j == 0 else int(rng.integers(0, max_value + 1))
        betti[j] = betti[m - j] = value
    if m % 2 == 0 and m > 0:
        betti[m // 2] = int(rng.integers(0, max_value + 1))
    return betti


def random_counts(rng: np.random.Generator, m: int, max_count: int = 9) -> list[int]:
    """
    Draw counts in [0, max_count] with C_0, C_m >= 1, parity-corrected in odd m.

    In odd dimensions the alternating sum is pushed to zero by raising
    whichever side (even or odd indices) is short.
    """
    counts = [int(c) for c in rng.integers(0, max_count + 1, size=m + 1)]
    counts[0] = max(counts[0], 1)
    counts[m] = max(counts[m], 1)
    if m % 2 == 1:
        chi = sum(c if j % 2 == 0 else -c for j, c in enumerate(counts))
        if chi > 0:
            counts[m] += chi
        elif chi < 0:
            counts[0] -= chi
    return counts


def random_descriptor(
    rng: np.random.Generator,
    m: int,
    oriented: bool = False,
    with_betti: Optional[bool] = None,
    max_count: int = 9,
) -> MorseDescriptor:
    """
    Generate a random valid descriptor.

    Args:
        rng: numpy random Generator.
        m: Manifold dimension.
        oriented: Orientation flag.
        with_betti: Attach Betti numbers; None means "only when required"
            (oriented and m = 4k+1, where sigma(M) is needed).
        max_count: Upper bound on each freely drawn count.

    Returns:
        MorseDescriptor that passes validate().
    """
    if with_betti is None:
        with_betti = oriented and m % 4 == 1
    label = GENERATOR_LABELS[int(rng.integers(0, len(GENERATOR_LABELS)))]
    coeff = int(rng.integers(-2, 3)) if oriented else int(rng.integers(0, 2))
    terms = [(label, coeff)]

    if not with_betti:
        return MorseDescriptor.build(random_counts(rng, m, max_count), oriented=oriented, terms=terms)

    # Betti numbers plus random cancelling pairs keep every inequality intact.
    betti = random_betti(rng, m)
    counts = list(betti)
    for j in range(m):
        extra = int(rng.integers(0, 3))
        counts[j] += extra
        counts[j + 1] += extra
    return MorseDescriptor.build(counts, oriented=oriented, terms=terms, betti=betti)


def generate_descriptor_pairs(
    n_pairs: int = 1000,
    max_dim: int = 6,
    seed: int = DEFAULT_SEED,
) -> list[tuple[MorseDescriptor, MorseDescriptor]]:
    """
    Seeded pairs (d1, d2) with 1 <= m1 <= m2 <= max_dim, for Theorem 3 sweeps.
    """
    rng = np.random.default_rng(seed)
    pairs = []
    for _ in range(n_pairs):
        m1, m2 = sorted(int(x) for x in rng.integers(1, max_dim + 1, size=2))
        pairs.append((random_descriptor(rng, m1), random_descriptor(rng, m2)))
    return pairs
