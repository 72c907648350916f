from itertools import permutations

import pytest

from src.DTOs.models import Parity, RouterConfig, SimulationConfig
from src.core.circuit_ir import make_circuit, not_gate, simulate
from src.core.perm_core import compose, identity, is_identity, make_permutation
from src.core import pipeline
from src.core.pipeline import (
    SynthesisError, analyze_permutation, classify, mmd_standin, preprocess_fix_special,
    synthesize_hybrid, synthesize_kcycle, verify,
)
from src.utils.generators import gen_hwb, gen_random_perm

from tests.conftest import permutation_of


def flip_line(n, line):
    return make_permutation(n, [i ^ (1 << line) for i in range(1 << n)])


def increment(n):
    size = 1 << n
    return make_permutation(n, [(i + 1) % size for i in range(size)])


def fixes_special_rows(p):
    return all(p(w) == w for w in [0] + [1 << i for i in range(p.width)])


# --- pre-processing --- #

def test_preprocess_identity():
    fix, residual = preprocess_fix_special(identity(5))
    assert len(fix) == 0
    assert is_identity(residual)


def test_preprocess_single_not():
    fix, residual = preprocess_fix_special(flip_line(3, 0))
    assert fix.gates == (not_gate(0, 3),)
    assert is_identity(residual)


@pytest.mark.parametrize("seed", range(5))
def test_preprocess_random(seed):
    n = 7
    p = gen_random_perm(n, seed)
    fix, residual = preprocess_fix_special(p)
    assert fixes_special_rows(residual)
    assert len(fix) <= n * n + n
    assert compose(residual, simulate(fix)) == p


def test_preprocess_is_idempotent():
    _, residual = preprocess_fix_special(gen_random_perm(6, 9))
    fix, again = preprocess_fix_special(residual)
    assert len(fix) == 0
    assert again == residual


# --- stand-in --- #

def test_standin_identity_is_empty():
    assert len(mmd_standin(identity(4))) == 0


def test_standin_single_not():
    assert mmd_standin(flip_line(4, 0)).gates == (not_gate(0, 4),)


@pytest.mark.parametrize("seed", range(3))
def test_standin_random(seed):
    p = gen_random_perm(8, seed)
    assert verify(mmd_standin(p), p)


# --- verification --- #

def test_verify():
    assert verify(make_circuit(3), identity(3))
    assert not verify(make_circuit(3, [not_gate(0, 3)]), identity(3))


def test_verify_rejects_width_mismatch():
    with pytest.raises(SynthesisError):
        verify(make_circuit(3), identity(4))


# --- cycle-based synthesis --- #

def test_kcycle_two_transpositions(two_transpositions):
    circuit, report = synthesize_kcycle(two_transpositions)
    assert report.verified is True
    assert report.cost <= 174
    assert report.estimate == 174
    assert report.counts == {"Pair22": 1}
    assert simulate(circuit) == two_transpositions


def test_kcycle_long_cycles(long_cycles):
    _, report = synthesize_kcycle(long_cycles)
    assert report.verified is True
    assert report.cost <= 1190


def test_kcycle_low_cutoff_keeps_small_width_blocks():
    p = permutation_of([(3, 5, 6), (7, 9, 10)], 5)
    cfg = RouterConfig(small_n_cutoff=4)
    circuit, report = synthesize_kcycle(p, cfg)
    assert report.verified is True
    assert set(report.counts) <= {"Pair22", "SingleTransposition"}
    assert simulate(circuit) == p
    assert set(analyze_permutation(p, cfg).counts) <= {"Pair22", "SingleTransposition"}


def test_kcycle_odd_permutation_is_flagged():
    p = permutation_of([(3, 5)], 7)
    _, report = synthesize_kcycle(p)
    assert report.verified is True
    assert [w.issue_type for w in report.warnings] == ["odd_permutation"]


def test_kcycle_skips_verification_past_limit():
    _, report = synthesize_kcycle(gen_random_perm(7, 1), sim_config=SimulationConfig(max_width=6))
    assert report.verified is None


def test_kcycle_timeout():
    with pytest.raises(SynthesisError):
        synthesize_kcycle(gen_random_perm(7, 1), timeout=-1.0)


@pytest.mark.parametrize("parity", [Parity.EVEN, Parity.ODD])
@pytest.mark.parametrize("n", [4, 5, 6, 7, 8, 9, 10])
def test_kcycle_random(n, parity):
    for seed in range(3):
        p = gen_random_perm(n, seed, parity)
        _, report = synthesize_kcycle(p)
        assert report.verified is True
        if n >= 7:
            assert report.cost <= report.estimate


def test_kcycle_width_three_sample():
    movable = [1, 2, 3, 4, 5, 6, 7]
    for count, image in enumerate(permutations(movable)):
        if count % 37:
            continue
        p = make_permutation(3, [0] + list(image))
        assert synthesize_kcycle(p)[1].verified is True


@pytest.mark.slow
def test_kcycle_every_width_three_function():
    for image in permutations(range(8)):
        p = make_permutation(3, image)
        assert synthesize_kcycle(p)[1].verified is True


@pytest.mark.slow
@pytest.mark.parametrize("n", [4, 5, 6, 7, 8, 9, 10])
def test_kcycle_random_sweep(n):
    for seed in range(500):
        parity = Parity.EVEN if seed % 2 else Parity.ODD
        _, report = synthesize_kcycle(gen_random_perm(n, seed, parity))
        assert report.verified is True
        if n >= 7:
            assert report.cost <= report.estimate


@pytest.mark.slow
@pytest.mark.parametrize("n", [8, 9, 10, 11])
def test_kcycle_cost_trend(n):
    ratios = []
    for seed in range(50):
        _, report = synthesize_kcycle(gen_random_perm(n, seed), verify_result=False)
        assert report.cost <= 9.5 * n * (1 << n)
        ratios.append(report.cost / (n * (1 << n)))
    assert sum(ratios) / len(ratios) < 8.5


# --- classification and routing --- #

def test_small_widths_are_category_one():
    assert classify(gen_random_perm(5, 0)) == 1


def test_hwb10_is_category_two():
    assert classify(gen_hwb(10)) == 2


def test_regular_far_function_is_category_three():
    assert classify(flip_line(10, 9)) == 3
    assert classify(increment(8)) == 3


def test_distance_tie_routing():
    n = 7
    reversal = make_permutation(n, [(1 << n) - 1 - i for i in range(1 << n)])
    assert classify(reversal, RouterConfig(distance_threshold=1.0)) == 3
    assert classify(reversal, RouterConfig(distance_threshold=1.0, tie_goes_to_kcycle=True)) == 2


def test_hybrid_small_width_route():
    _, report = synthesize_hybrid(gen_random_perm(4, 2))
    assert report.method == "hybrid"
    assert report.route == "kcycle+post"
    assert report.category == 1
    assert report.verified is True


def test_hybrid_far_function_route():
    _, report = synthesize_hybrid(gen_hwb(8))
    assert report.route == "kcycle"
    assert report.standin is False
    assert report.verified is True


def test_hybrid_regular_function_route():
    p = increment(8)
    circuit, report = synthesize_hybrid(p)
    assert report.route == "mmd-standin"
    assert report.standin is True
    assert simulate(circuit) == p


def test_hybrid_runs_share_one_deadline(monkeypatch):
    created = []

    class RecordingDeadline(pipeline._Deadline):
        def __init__(self, timeout):
            super().__init__(timeout)
            created.append(timeout)

    monkeypatch.setattr(pipeline, "_Deadline", RecordingDeadline)
    _, report = synthesize_hybrid(gen_random_perm(4, 2), timeout=60.0)
    assert report.route == "kcycle+post"
    assert created == [60.0]


def test_hybrid_timeout_covers_both_runs():
    with pytest.raises(SynthesisError):
        synthesize_hybrid(gen_random_perm(4, 2), timeout=-1.0)


def test_hybrid_is_deterministic():
    p = gen_random_perm(7, 5)
    c1, r1 = synthesize_hybrid(p)
    c2, r2 = synthesize_hybrid(p)
    assert c1 == c2
    assert r1.model_dump(exclude={"seconds"}) == r2.model_dump(exclude={"seconds"})


def test_analyze_identity():
    report = analyze_permutation(identity(7))
    assert report.distance == 0
    assert report.nop == 1
    assert report.cycles == []
    assert report.estimate == 0
    assert report.movable_rows == 120


def test_analyze_long_cycles(long_cycles):
    report = analyze_permutation(long_cycles)
    assert report.estimate == 1190
    assert report.statistics.moved_rows == 26
