"""Benchmark permutations: hidden weighted bit and seeded random permutations."""
from typing import Optional

import numpy as np

from src.DTOs.models import HwbConfig, Parity, Permutation
from src.core.perm_core import make_permutation, parity


def hamming_weights(n: int) -> np.ndarray:
    words = np.arange(1 << n, dtype=np.int64)
    weights = np.zeros_like(words)
    for bit in range(n):
        weights += (words >> bit) & 1
    return weights


def gen_hwb(n: int, config: Optional[HwbConfig] = None) -> Permutation:
    """
    Hidden weighted bit: every word rotated by its own Hamming weight.

    Rotation preserves the weight, so the map is a bijection and hwb(0) = 0.
    """
    config = config or HwbConfig()
    words = np.arange(1 << n, dtype=np.int64)
    shift = hamming_weights(n) % n
    if config.rotation == "right":
        shift = (n - shift) % n
    mask = (1 << n) - 1
    rotated = ((words << shift) | (words >> (n - shift))) & mask
    return make_permutation(n, rotated.tolist())


def gen_random_perm(n: int, seed: int, parity_constraint: Optional[Parity] = None) -> Permutation:
    """
    Uniform permutation from numpy's seeded generator.

    With a parity constraint, a mismatching draw gets its last two outputs
    swapped, which flips the parity.
    """
    rng = np.random.default_rng(seed)
    table = rng.permutation(1 << n)
    p = make_permutation(n, table.tolist())
    if parity_constraint is not None and parity(p) != parity_constraint:
        table[-2], table[-1] = table[-1], table[-2]
        p = make_permutation(n, table.tolist())
    return p


if __name__ == '__main__':
    from src.core.perm_core import distance_metric

    print("hwb2:", gen_hwb(2).table)
    print("Distance(hwb10):", float(distance_metric(gen_hwb(10))))
