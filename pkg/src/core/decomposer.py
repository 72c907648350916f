"""
Splits a pre-processed permutation into building-block tasks.

Long cycles are cut into 5-cycles plus a short residual, then cycles are paired
by length into the block kinds that the kernels in building_blocks realise.
Composing the cycles of the schedule left to right gives back the input.
"""
import logging
from typing import List, Optional, Sequence, Tuple

from pydantic import ValidationError

from src.DTOs.models import BBSchedule, BBTask, BuildingBlockKind, Cycle, ExtractionResult, Permutation
from src.core.building_blocks import kind_bound
from src.core.perm_core import disjoint_cycles

logger = logging.getLogger(__name__)

K = BuildingBlockKind


class DecompositionError(Exception):
    """Custom exception for permutations the decomposer cannot schedule."""
    pass


def _cycle(elements: Sequence[int]) -> Cycle:
    return Cycle(elements=tuple(elements))


def _task(kind: BuildingBlockKind, *cycles: Cycle) -> BBTask:
    try:
        return BBTask(kind=kind, cycles=tuple(cycles))
    except ValidationError as e:
        raise DecompositionError(f"Error: Cannot build a {kind.value} task from {[c.elements for c in cycles]}. Details: {e}")


def _check_preprocessed(p: Permutation) -> None:
    special = [0] + [1 << i for i in range(p.width)]
    moved = [w for w in special if p.table[w] != w]
    if moved:
        raise DecompositionError(
            f"Error: Permutation must fix 0 and every power of two before decomposition; moved: {moved}"
        )


# --- 5-cycle extraction --- #

def extract_5cycles(c: Cycle) -> ExtractionResult:
    """
    Cuts (b1, ..., bm) into (b1, ..., b5) followed by (b6, ..., bm, b1) until
    fewer than six elements remain.

    Each five gets a generation: one more than the highest generation of any
    earlier five it shares an element with. Fives of one generation are
    pairwise disjoint, and listing them generation by generation still
    composes to `c`.

    Raises:
        DecompositionError: If the cycle is shorter than 2.
    """
    if len(c) < 2:
        raise DecompositionError(f"Error: Cannot extract from a cycle of length {len(c)}.")
    fives: List[Tuple[Cycle, int]] = []
    remainder = list(c.elements)
    while len(remainder) > 5:
        five = remainder[:5]
        fives.append((_cycle(five), _generation(five, fives)))
        remainder = remainder[5:] + remainder[:1]
    residual: Optional[Cycle] = None
    if len(remainder) == 5:
        fives.append((_cycle(remainder), _generation(remainder, fives)))
    else:
        residual = _cycle(remainder)

    generations: List[List[Cycle]] = []
    for five, gen in fives:
        while len(generations) <= gen:
            generations.append([])
        generations[gen].append(five)
    return ExtractionResult(generations=generations, residual=residual)


def _generation(elements: Sequence[int], earlier: List[Tuple[Cycle, int]]) -> int:
    members = set(elements)
    overlapping = [gen for five, gen in earlier if members & set(five.elements)]
    return max(overlapping) + 1 if overlapping else 0


# --- Pairing --- #

def _pair_layers(layers: List[List[Cycle]]) -> Tuple[List[Tuple[Cycle, ...]], Optional[Cycle]]:
    """
    Pairs cycles inside each layer in order.

    An odd one out is carried into the next layer and paired with the first
    cycle there it is disjoint from. A carry that finds no partner comes back
    as a 1-tuple at the point it was dropped. The final carry, if any, is
    returned separately.
    """
    groups: List[Tuple[Cycle, ...]] = []
    carried: Optional[Cycle] = None
    for layer in layers:
        pending = list(layer)
        if carried is not None:
            partner = next((i for i, c in enumerate(pending) if c.is_disjoint(carried)), None)
            if partner is None:
                groups.append((carried,))
            else:
                groups.append((carried, pending.pop(partner)))
            carried = None
        for i in range(0, len(pending) - 1, 2):
            groups.append((pending[i], pending[i + 1]))
        if len(pending) % 2:
            carried = pending[-1]
    return groups, carried


def _pair_flat(cycles: List[Cycle], pair_kind: BuildingBlockKind, single_kind: Optional[BuildingBlockKind]) -> Tuple[List[BBTask], Optional[Cycle]]:
    tasks = [_task(pair_kind, cycles[i], cycles[i + 1]) for i in range(0, len(cycles) - 1, 2)]
    leftover = cycles[-1] if len(cycles) % 2 else None
    if leftover is not None and single_kind is not None:
        tasks.append(_task(single_kind, leftover))
        leftover = None
    return tasks, leftover


def decompose(p: Permutation) -> BBSchedule:
    """
    Schedules a pre-processed permutation as 5-, 3-, 4- and 2-cycle blocks.

    Cycles are taken longest first. Every 5-cycle task comes before the
    shorter ones, since residuals share elements with the fives cut from the
    same cycle. A lone 4-cycle with no 2-cycle to pair with is rewritten as
    (a, b, c) followed by (a, d); a lone transposition becomes a
    SingleTransposition task at the end.

    Args:
        p: Permutation fixing 0 and every 2^i.

    Returns:
        The ordered schedule.

    Raises:
        DecompositionError: If p moves 0 or a power of two.
    """
    _check_preprocessed(p)
    by_length = {2: [], 3: [], 4: []}
    five_layers: List[List[Cycle]] = []
    for cycle in disjoint_cycles(p):
        result = extract_5cycles(cycle)
        for gen, layer in enumerate(result.generations):
            while len(five_layers) <= gen:
                five_layers.append([])
            five_layers[gen].extend(layer)
        if result.residual is not None:
            by_length[len(result.residual)].append(result.residual)

    tasks: List[BBTask] = []
    five_groups, last_five = _pair_layers(five_layers)
    for group in five_groups:
        tasks.append(_task(K.PAIR55 if len(group) == 2 else K.SINGLE5, *group))
    if last_five is not None:
        tasks.append(_task(K.SINGLE5, last_five))

    fours, twos = by_length[4], by_length[2]
    trailing: List[BBTask] = []
    four_tasks, lone_four = _pair_flat(fours, K.PAIR44, None)
    if lone_four is not None:
        if twos:
            four_tasks.append(_task(K.PAIR42, lone_four, twos.pop(0)))
        else:
            a, b, c, d = lone_four.elements
            logger.debug("rewriting lone 4-cycle %s as (%d, %d, %d)(%d, %d)", lone_four.elements, a, b, c, a, d)
            by_length[3].append(_cycle((a, b, c)))
            trailing.append(_task(K.SINGLE_TRANSPOSITION, _cycle((a, d))))

    three_tasks, _ = _pair_flat(by_length[3], K.PAIR33, K.SINGLE3)
    two_tasks, _ = _pair_flat(twos, K.PAIR22, K.SINGLE_TRANSPOSITION)
    tasks.extend(three_tasks + four_tasks + two_tasks + trailing)

    schedule = BBSchedule(width=p.width, tasks=tasks)
    logger.info("decomposed width-%d permutation into %d tasks: %s", p.width, len(tasks),
                {k: v for k, v in schedule.counts.items() if v})
    return schedule


# --- Small widths: transpositions only --- #

def _factor_transpositions(cycle: Cycle) -> Tuple[List[Tuple[Cycle, Cycle]], List[Cycle]]:
    """
    (x0, ..., xk) = (x0, x1)(x_{k-1}, xk) followed by (x0, x2, ..., x_{k-1}).

    Returns the disjoint transposition pairs peeled off and the one or two
    overlapping transpositions left at the end, in order.
    """
    pairs: List[Tuple[Cycle, Cycle]] = []
    elements = list(cycle.elements)
    while len(elements) >= 4:
        pairs.append((_cycle(elements[:2]), _cycle(elements[-2:])))
        elements = [elements[0]] + elements[2:-1]
    if len(elements) == 3:
        x0, x1, x2 = elements
        return pairs, [_cycle((x0, x1)), _cycle((x0, x2))]
    return pairs, [_cycle(elements)]


def _helper_transposition(avoid: Sequence[int], width: int) -> Optional[Cycle]:
    taken = set(avoid)
    free = [w for w in range(3, 1 << width) if w & (w - 1) and w not in taken]
    return _cycle(free[:2]) if len(free) >= 2 else None


def decompose_small(p: Permutation) -> BBSchedule:
    """
    Schedules a pre-processed permutation as pairs of disjoint transpositions.

    Used below the width where the 3-, 4- and 5-cycle kernels exist. Two
    overlapping leftover transpositions t1, t2 are paired through a helper
    transposition h disjoint from both, as (t1, h) then (h, t2); without a
    helper they stay single.
    """
    _check_preprocessed(p)
    tasks: List[BBTask] = []
    tail_layers: List[List[Cycle]] = [[], []]
    for cycle in disjoint_cycles(p):
        pairs, tails = _factor_transpositions(cycle)
        tasks.extend(_task(K.PAIR22, a, b) for a, b in pairs)
        for layer, tail in zip(tail_layers, tails):
            layer.append(tail)

    groups, carried = _pair_layers(tail_layers)
    leftovers = [g[0] for g in groups if len(g) == 1]
    tasks.extend(_task(K.PAIR22, *g) for g in groups if len(g) == 2)
    if carried is not None:
        leftovers.append(carried)

    if len(leftovers) == 2:
        t1, t2 = leftovers
        helper = _helper_transposition(t1.elements + t2.elements, p.width)
        if helper is not None:
            tasks.extend([_task(K.PAIR22, t1, helper), _task(K.PAIR22, helper, t2)])
            leftovers = []
    tasks.extend(_task(K.SINGLE_TRANSPOSITION, t) for t in leftovers)

    schedule = BBSchedule(width=p.width, tasks=tasks)
    logger.info("decomposed width-%d permutation into %d transposition tasks", p.width, len(tasks))
    return schedule


def estimate_cost(s: BBSchedule, n: int) -> int:
    """Worst-case elementary gates of a schedule: the sum of per-kind bounds."""
    return sum(count * kind_bound(kind, n) for kind in BuildingBlockKind if (count := s.count(kind)))


if __name__ == '__main__':
    from src.core.perm_core import compose_cycles

    sixteen = _cycle((3, 5, 6, 7, 9, 10, 11, 12, 13, 14, 15, 17, 18, 19, 20, 21))
    result = extract_5cycles(sixteen)
    print("fives:", [f.elements for f in result.fives], "residual:", result.residual.elements)
    print("recomposes:", compose_cycles(result.fives + [result.residual], 5) == compose_cycles([sixteen], 5))
