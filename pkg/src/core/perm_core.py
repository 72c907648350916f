"""
Permutation algebra: cycle forms, parity, composition and the routing metrics
(Distance and number of patterns) used by the hybrid router.

Cycles compose left to right: the first listed cycle acts first.
"""
import logging
from collections import Counter
from fractions import Fraction
from typing import Iterable, List, Sequence

import numpy as np
from pydantic import ValidationError

from src.DTOs.models import Cycle, CycleStatistics, Parity, Permutation

logger = logging.getLogger(__name__)


class PermutationError(Exception):
    """Custom exception for invalid permutations or cycle lists."""
    pass


def make_permutation(width: int, table: Iterable[int]) -> Permutation:
    """Builds a Permutation, turning model validation failures into PermutationError."""
    try:
        return Permutation(width=width, table=tuple(int(v) for v in table))
    except ValidationError as e:
        raise PermutationError(f"Error: Invalid permutation of width {width}. Details: {e}")


def identity(width: int) -> Permutation:
    return make_permutation(width, range(1 << width))


def is_identity(p: Permutation) -> bool:
    return bool(np.array_equal(p.as_array(), np.arange(p.size)))


def make_cycle(*elements: int) -> Cycle:
    try:
        return Cycle(elements=tuple(elements))
    except ValidationError as e:
        raise PermutationError(f"Error: Invalid cycle {elements}. Details: {e}")


def disjoint_cycles(p: Permutation) -> List[Cycle]:
    """
    Writes P as a product of disjoint cycles.

    Fixed points are dropped. Each cycle starts at its minimum element and the
    list is sorted by decreasing length, then by minimum element.

    Args:
        p: The permutation.

    Returns:
        The disjoint cycles; empty for the identity.
    """
    table = p.table
    visited = bytearray(p.size)
    cycles: List[Cycle] = []
    for start in range(p.size):
        if visited[start] or table[start] == start:
            visited[start] = 1
            continue
        elements = []
        word = start
        while not visited[word]:
            visited[word] = 1
            elements.append(word)
            word = table[word]
        # start is the smallest unvisited word, hence the cycle minimum
        cycles.append(Cycle(elements=tuple(elements)))
    cycles.sort(key=lambda c: (-len(c), c.elements[0]))
    return cycles


def compose_cycles(cycles: Sequence[Cycle], width: int) -> Permutation:
    """
    Composes cycles left to right (first listed acts first).

    Raises:
        PermutationError: If an element does not fit in `width` bits.
    """
    size = 1 << width
    table = list(range(size))
    # where[w] is the input currently mapped to w
    where = list(range(size))
    for cycle in cycles:
        elements = cycle.elements
        if max(elements) >= size:
            raise PermutationError(f"Error: Cycle {elements} has an element outside [0, {size - 1}].")
        sources = [where[a] for a in elements]
        for i, source in enumerate(sources):
            image = elements[(i + 1) % len(elements)]
            table[source] = image
            where[image] = source
    return make_permutation(width, table)


def compose(first: Permutation, second: Permutation) -> Permutation:
    """Applies `first` then `second`."""
    if first.width != second.width:
        raise PermutationError(f"Error: Cannot compose widths {first.width} and {second.width}.")
    return make_permutation(first.width, second.as_array()[first.as_array()].tolist())


def inverse(p: Permutation) -> Permutation:
    inv = np.empty(p.size, dtype=np.int64)
    inv[p.as_array()] = np.arange(p.size)
    return make_permutation(p.width, inv.tolist())


def parity(p: Permutation) -> Parity:
    """A k-cycle contributes k-1 transpositions."""
    transpositions = sum(len(c) - 1 for c in disjoint_cycles(p))
    return Parity.ODD if transpositions % 2 else Parity.EVEN


def distance_metric(p: Permutation) -> Fraction:
    """Sum of |f(i) - i| over all words divided by 2^(2n-1), computed exactly."""
    diffs = p.as_array() - np.arange(p.size, dtype=np.int64)
    numerator = int(np.abs(diffs).sum(dtype=np.int64))
    return Fraction(numerator, 1 << (2 * p.width - 1))


def nop_metric(p: Permutation) -> int:
    """Number of maximal index runs on which f(i) - i is constant."""
    diffs = p.as_array() - np.arange(p.size, dtype=np.int64)
    return 1 + int(np.count_nonzero(np.diff(diffs)))


def cycle_statistics(p: Permutation) -> CycleStatistics:
    cycles = disjoint_cycles(p)
    histogram = Counter(len(c) for c in cycles)
    return CycleStatistics(
        moved_rows=sum(len(c) for c in cycles),
        cycle_count=len(cycles),
        length_histogram=dict(sorted(histogram.items())),
        longest_cycle=max((len(c) for c in cycles), default=0),
        parity=Parity.ODD if sum(len(c) - 1 for c in cycles) % 2 else Parity.EVEN,
    )


def max_moved_rows(width: int) -> int:
    """Rows a pre-processed permutation can still move: every word except 0 and the 2^i."""
    return (1 << width) - width - 1
