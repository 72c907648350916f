from itertools import permutations

import pytest

from src.DTOs.models import BuildingBlockKind, Parity
from src.core.decomposer import DecompositionError, decompose, decompose_small, estimate_cost, extract_5cycles
from src.core.perm_core import compose_cycles, identity, make_cycle, make_permutation, parity
from src.core.pipeline import preprocess_fix_special
from src.utils.generators import gen_random_perm

K = BuildingBlockKind


def counts(schedule):
    return {k: v for k, v in schedule.counts.items() if v}


def assert_recomposes(schedule, p):
    assert compose_cycles(schedule.cycles(), p.width) == p


def test_extract_from_sixteen_cycle():
    result = extract_5cycles(make_cycle(3, 5, 6, 7, 9, 10, 11, 12, 13, 14, 15, 17, 18, 19, 20, 21))
    assert [f.elements for f in result.fives] == [
        (3, 5, 6, 7, 9), (10, 11, 12, 13, 14), (15, 17, 18, 19, 20),
    ]
    assert result.residual.elements == (21, 3, 10, 15)


def test_extract_from_six_cycle():
    result = extract_5cycles(make_cycle(22, 23, 24, 25, 26, 27))
    assert [f.elements for f in result.fives] == [(22, 23, 24, 25, 26)]
    assert result.residual.canonical() == make_cycle(22, 27)


def test_extract_bare_five_cycle():
    result = extract_5cycles(make_cycle(3, 5, 6, 7, 9))
    assert [f.elements for f in result.fives] == [(3, 5, 6, 7, 9)]
    assert result.residual is None


def test_extract_short_cycle_is_residual():
    result = extract_5cycles(make_cycle(3, 5, 6))
    assert result.fives == []
    assert result.residual == make_cycle(3, 5, 6)


@pytest.mark.parametrize("length", [6, 9, 12, 21, 26, 31, 52])
def test_extraction_recomposes_and_generations_are_disjoint(length):
    cycle = make_cycle(*range(100, 100 + length))
    result = extract_5cycles(cycle)
    parts = result.fives + ([result.residual] if result.residual else [])
    assert compose_cycles(parts, 8) == compose_cycles([cycle], 8)
    for generation in result.generations:
        for i, a in enumerate(generation):
            for b in generation[i + 1:]:
                assert a.is_disjoint(b)


def test_long_cycles_need_later_generations():
    result = extract_5cycles(make_cycle(*range(100, 126)))
    assert len(result.generations) == 2


def test_decompose_long_cycles(long_cycles):
    schedule = decompose(long_cycles)
    assert counts(schedule) == {"Pair55": 2, "Pair42": 1, "Pair22": 1}
    assert_recomposes(schedule, long_cycles)
    assert estimate_cost(schedule, 7) == 1190


def test_decompose_mixed_cycles(mixed_cycles):
    schedule = decompose(mixed_cycles)
    assert counts(schedule) == {"Pair55": 1, "Single5": 1, "Pair33": 1, "Single3": 1, "Pair22": 1}
    assert_recomposes(schedule, mixed_cycles)
    # One block per kind: 394 + 290 + 220 + 142 + 174. Charging Pair55 twice would give 1614.
    assert estimate_cost(schedule, 7) == 1220


def test_five_cycle_tasks_come_first(mixed_cycles):
    kinds = [t.kind for t in decompose(mixed_cycles).tasks]
    last_five = max(i for i, k in enumerate(kinds) if k in (K.PAIR55, K.SINGLE5))
    first_short = min(i for i, k in enumerate(kinds) if k not in (K.PAIR55, K.SINGLE5))
    assert last_five < first_short


def test_decompose_identity():
    schedule = decompose(identity(7))
    assert schedule.tasks == []
    assert estimate_cost(schedule, 7) == 0


def test_lone_four_cycle_is_split():
    p = compose_cycles([make_cycle(3, 5, 6, 7)], 7)
    schedule = decompose(p)
    assert counts(schedule) == {"Single3": 1, "SingleTransposition": 1}
    assert_recomposes(schedule, p)


def test_four_cycle_pairs_with_transposition():
    p = compose_cycles([make_cycle(3, 5, 6, 7), make_cycle(9, 10)], 7)
    assert counts(decompose(p)) == {"Pair42": 1}


def test_odd_permutation_ends_with_single_transposition():
    p = compose_cycles([make_cycle(3, 5), make_cycle(6, 7), make_cycle(9, 10)], 7)
    schedule = decompose(p)
    assert schedule.tasks[-1].kind == K.SINGLE_TRANSPOSITION
    assert counts(schedule) == {"Pair22": 1, "SingleTransposition": 1}


def test_decompose_requires_preprocessed_input():
    p = compose_cycles([make_cycle(3, 4)], 7)
    with pytest.raises(DecompositionError):
        decompose(p)


@pytest.mark.parametrize("seed", range(20))
@pytest.mark.parametrize("n", [7, 8])
def test_decompose_random_recomposes(n, seed):
    _, residual = preprocess_fix_special(gen_random_perm(n, seed))
    schedule = decompose(residual)
    assert_recomposes(schedule, residual)
    singles = schedule.count(K.SINGLE_TRANSPOSITION)
    assert (singles > 0) == (parity(residual) == Parity.ODD)
    for task in schedule.tasks:
        for w in task.operands:
            assert w & (w - 1)


@pytest.mark.slow
@pytest.mark.parametrize("n", [7, 8, 9, 10])
def test_decompose_random_recomposes_sweep(n):
    for seed in range(100):
        _, residual = preprocess_fix_special(gen_random_perm(n, seed))
        assert_recomposes(decompose(residual), residual)


def test_decompose_small_three_cycle_without_helper():
    p = compose_cycles([make_cycle(3, 5, 6)], 3)
    schedule = decompose_small(p)
    assert counts(schedule) == {"SingleTransposition": 2}
    assert_recomposes(schedule, p)


def test_decompose_small_three_cycle_with_helper():
    p = compose_cycles([make_cycle(3, 5, 6)], 4)
    schedule = decompose_small(p)
    assert counts(schedule) == {"Pair22": 2}
    assert_recomposes(schedule, p)


def test_decompose_small_single_transposition():
    p = compose_cycles([make_cycle(3, 5)], 3)
    assert counts(decompose_small(p)) == {"SingleTransposition": 1}


def test_decompose_small_identity():
    assert decompose_small(identity(3)).tasks == []


def test_decompose_small_pairs_tails_across_cycles():
    p = compose_cycles([make_cycle(3, 5), make_cycle(6, 7)], 3)
    schedule = decompose_small(p)
    assert counts(schedule) == {"Pair22": 1}
    assert_recomposes(schedule, p)


def test_decompose_small_every_width_three_function():
    movable = [3, 5, 6, 7]
    for image in permutations(movable):
        table = list(range(8))
        for src, dst in zip(movable, image):
            table[src] = dst
        p = make_permutation(3, table)
        schedule = decompose_small(p)
        assert_recomposes(schedule, p)
        assert schedule.count(K.SINGLE_TRANSPOSITION) <= 2


@pytest.mark.parametrize("n", [4, 5, 6])
def test_decompose_small_random(n):
    for seed in range(20):
        _, residual = preprocess_fix_special(gen_random_perm(n, seed))
        schedule = decompose_small(residual)
        assert_recomposes(schedule, residual)
        assert schedule.count(K.SINGLE_TRANSPOSITION) <= 2
