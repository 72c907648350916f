"""
End-to-end synthesis: pre-processing of the 0 and 2^i rows, the cycle-based
method, the transformation-based stand-in, the function classifier and the
hybrid router that picks between them.
"""
import logging
import time
from typing import List, Optional, Tuple

import numpy as np

from src.DTOs.models import (
    AnalysisReport, BBSchedule, Circuit, Gate, Parity, Permutation, RouterConfig, SimulationConfig,
    SynthesisReport, ValidationIssue,
)
from src.core.building_blocks import KERNEL_MIN_WIDTH, synthesize_task
from src.core.circuit_ir import (
    apply_gate_array, circuit_cost, concat, gate_class_counts, lnn_worst_case_bound, make_circuit, mct,
    peephole_simplify, simulate, worst_case_bound,
)
from src.core.decomposer import decompose, decompose_small, estimate_cost
from src.core.perm_core import (
    cycle_statistics, disjoint_cycles, distance_metric, make_permutation, max_moved_rows, nop_metric,
    parity,
)

logger = logging.getLogger(__name__)


class SynthesisError(Exception):
    """Custom exception for failed or timed-out synthesis runs."""
    pass


class _Deadline:
    def __init__(self, timeout: Optional[float]):
        self.started = time.monotonic()
        self.limit = None if timeout is None else self.started + timeout

    def check(self, stage: str) -> None:
        if self.limit is not None and time.monotonic() > self.limit:
            raise SynthesisError(f"Error: Synthesis timed out during {stage}.")

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.started


# --- Transformation-based passes --- #

def _fix_rows(table: np.ndarray, rows, width: int, deadline: _Deadline) -> List[Gate]:
    """
    Output-side transformation pass: for each row r in increasing order, appends
    gates that turn the current image of r into r. Returns the gates in the
    order found; `table` is updated in place.
    """
    found: List[Gate] = []

    def emit(gate: Gate) -> None:
        found.append(gate)
        apply_gate_array(gate, table)

    for r in rows:
        deadline.check(f"row {r}")
        y = int(table[r])
        if y == r:
            continue
        # Set the bits r has and y lacks, controlled on y's current one-bits.
        for j in range(width):
            if (r >> j) & 1 and not (y >> j) & 1:
                emit(mct([b for b in range(width) if (y >> b) & 1], j, width))
                y |= 1 << j
        # Clear the extra bits, controlled on r's one-bits.
        for j in range(width):
            if (y >> j) & 1 and not (r >> j) & 1:
                emit(mct([b for b in range(width) if (r >> b) & 1], j, width))
                y ^= 1 << j
    return found


def _preprocess(p: Permutation, deadline: _Deadline) -> Tuple[Circuit, Permutation]:
    table = p.as_array().copy()
    special = [0] + [1 << i for i in range(p.width)]
    found = _fix_rows(table, special, p.width, deadline)
    residual = make_permutation(p.width, table.tolist())
    fix = make_circuit(p.width, reversed(found))
    logger.debug("pre-processing used %d gates", len(fix))
    return fix, residual


def preprocess_fix_special(p: Permutation, timeout: Optional[float] = None) -> Tuple[Circuit, Permutation]:
    """
    Splits off a small circuit so the remainder fixes 0 and every 2^i.

    Returns (C, g) where g fixes the special rows and running a circuit for g
    followed by C realises p. C has at most n^2 + n gates.
    """
    return _preprocess(p, _Deadline(timeout))


def _standin(p: Permutation, deadline: _Deadline) -> Circuit:
    table = p.as_array().copy()
    found = _fix_rows(table, range(p.size), p.width, deadline)
    return make_circuit(p.width, reversed(found))


def mmd_standin(p: Permutation, timeout: Optional[float] = None) -> Circuit:
    """
    Transformation-based synthesis over every row in increasing order.

    Stands in for the spectra-based method on functions close to the identity.
    """
    return _standin(p, _Deadline(timeout))


# --- Verification --- #

def verify(c: Circuit, p: Permutation, config: Optional[SimulationConfig] = None) -> bool:
    """
    True iff the circuit realises p on every word.

    Raises:
        SynthesisError: On a width mismatch.
        SimulationCapacityError: If the width exceeds the simulation limit.
    """
    if c.width != p.width:
        raise SynthesisError(f"Error: Circuit width {c.width} does not match permutation width {p.width}.")
    return simulate(c, config).table == p.table


def _verify_within_limit(c: Circuit, p: Permutation, config: SimulationConfig) -> Optional[bool]:
    if p.width > config.max_width:
        logger.warning("width %d exceeds simulation limit %d; skipping verification", p.width, config.max_width)
        return None
    return verify(c, p, config)


# --- Classification --- #

def classify(p: Permutation, cfg: Optional[RouterConfig] = None) -> int:
    """
    1: small widths; 2: far from the identity with many patterns; 3: the rest.

    Distance exactly at the threshold counts as close unless
    cfg.tie_goes_to_kcycle is set.
    """
    cfg = cfg or RouterConfig()
    if p.width < cfg.small_n_cutoff:
        return 1
    distance = distance_metric(p)
    far = distance > cfg.distance_threshold or (cfg.tie_goes_to_kcycle and distance == cfg.distance_threshold)
    if far and nop_metric(p) >= cfg.nop_threshold(p.width):
        return 2
    return 3


# --- Synthesis methods --- #

def _report(p: Permutation, circuit: Circuit, method: str, route: str, cfg: RouterConfig,
            seconds: float, verified: Optional[bool], estimate: Optional[int] = None,
            schedule: Optional[BBSchedule] = None, standin: bool = False,
            warnings: Optional[List[ValidationIssue]] = None) -> SynthesisReport:
    return SynthesisReport(
        method=method,
        n=p.width,
        gates=len(circuit),
        cost=circuit_cost(circuit),
        estimate=estimate,
        distance=float(distance_metric(p)),
        nop=nop_metric(p),
        category=classify(p, cfg),
        verified=verified,
        seconds=round(seconds, 4),
        route=route,
        standin=standin,
        counts={k: v for k, v in schedule.counts.items() if v} if schedule else {},
        gate_classes=gate_class_counts(circuit),
        warnings=warnings or [],
    )


def _schedule(residual: Permutation, cfg: RouterConfig) -> BBSchedule:
    # The 3-, 4- and 5-cycle kernels need KERNEL_MIN_WIDTH lines whatever the cutoff says.
    if residual.width >= max(cfg.small_n_cutoff, KERNEL_MIN_WIDTH):
        return decompose(residual)
    return decompose_small(residual)


def _kcycle(p: Permutation, cfg: RouterConfig, sim_config: SimulationConfig,
            deadline: _Deadline, verify_result: bool) -> Tuple[Circuit, SynthesisReport]:
    started = deadline.elapsed
    fix, residual = _preprocess(p, deadline)
    schedule = _schedule(residual, cfg)

    parts: List[Circuit] = []
    for index, task in enumerate(schedule.tasks):
        deadline.check(f"task {index} ({task.kind.value})")
        parts.append(synthesize_task(task, p.width))
    parts.append(fix)
    circuit = peephole_simplify(concat(parts, p.width))

    warnings: List[ValidationIssue] = []
    if parity(p) == Parity.ODD:
        warnings.append(ValidationIssue(
            issue_type="odd_permutation",
            message="Odd permutation: the schedule closes with a SingleTransposition block.",
        ))

    verified = _verify_within_limit(circuit, p, sim_config) if verify_result else None
    if verified is False:
        raise SynthesisError(f"Error: Cycle-based circuit for width {p.width} does not realise the input.")
    estimate = estimate_cost(schedule, p.width) + circuit_cost(fix)
    report = _report(p, circuit, "kcycle", "kcycle", cfg, deadline.elapsed - started, verified,
                     estimate=estimate, schedule=schedule, warnings=warnings)
    logger.info("kcycle: n=%d gates=%d cost=%d estimate=%d", p.width, report.gates, report.cost, estimate)
    return circuit, report


def synthesize_kcycle(p: Permutation, cfg: Optional[RouterConfig] = None,
                      sim_config: Optional[SimulationConfig] = None,
                      timeout: Optional[float] = None,
                      verify_result: bool = True) -> Tuple[Circuit, SynthesisReport]:
    """
    Cycle-based synthesis.

    The special rows are fixed first, the remainder is decomposed into
    building-block tasks and each task is synthesised in schedule order. The
    task circuits run first and the pre-processing circuit last; a peephole
    pass cleans up the joins.

    Args:
        p: Target permutation.
        cfg: Router settings; only small_n_cutoff is used here.
        sim_config: Simulation limit for verification.
        timeout: Seconds before the run is abandoned, pre-processing included.
        verify_result: Simulate and compare when the width allows.

    Returns:
        The circuit and its report.

    Raises:
        SynthesisError: On timeout or if the circuit fails verification.
    """
    return _kcycle(p, cfg or RouterConfig(), sim_config or SimulationConfig.from_env(),
                   _Deadline(timeout), verify_result)


def _mmd(p: Permutation, cfg: RouterConfig, sim_config: SimulationConfig,
         deadline: _Deadline, verify_result: bool) -> Tuple[Circuit, SynthesisReport]:
    started = deadline.elapsed
    circuit = peephole_simplify(_standin(p, deadline))
    verified = _verify_within_limit(circuit, p, sim_config) if verify_result else None
    if verified is False:
        raise SynthesisError(f"Error: Stand-in circuit for width {p.width} does not realise the input.")
    report = _report(p, circuit, "mmd-standin", "mmd-standin", cfg, deadline.elapsed - started, verified,
                     standin=True)
    logger.info("mmd-standin: n=%d gates=%d cost=%d", p.width, report.gates, report.cost)
    return circuit, report


def synthesize_mmd(p: Permutation, cfg: Optional[RouterConfig] = None,
                   sim_config: Optional[SimulationConfig] = None,
                   timeout: Optional[float] = None,
                   verify_result: bool = True) -> Tuple[Circuit, SynthesisReport]:
    """Transformation-based stand-in with a peephole pass, reported as a stand-in."""
    return _mmd(p, cfg or RouterConfig(), sim_config or SimulationConfig.from_env(),
                _Deadline(timeout), verify_result)


def synthesize_hybrid(p: Permutation, cfg: Optional[RouterConfig] = None,
                      sim_config: Optional[SimulationConfig] = None,
                      timeout: Optional[float] = None,
                      verify_result: bool = True) -> Tuple[Circuit, SynthesisReport]:
    """
    Routes by category.

    Category 1 runs the cycle-based method and keeps the cheaper of it and the
    stand-in. Category 2 runs the cycle-based method alone. Category 3 runs the
    stand-in alone. Both runs of category 1 share one timeout.
    """
    cfg = cfg or RouterConfig()
    sim_config = sim_config or SimulationConfig.from_env()
    deadline = _Deadline(timeout)
    category = classify(p, cfg)
    logger.info("hybrid: width %d classified as category %d", p.width, category)
    if category == 3:
        circuit, report = _mmd(p, cfg, sim_config, deadline, verify_result)
        route = "mmd-standin"
    else:
        circuit, report = _kcycle(p, cfg, sim_config, deadline, verify_result)
        route = "kcycle"
        if category == 1:
            route = "kcycle+post"
            alt_circuit, alt_report = _mmd(p, cfg, sim_config, deadline, verify_result)
            if alt_report.cost < report.cost:
                circuit = alt_circuit
                report = report.model_copy(update={
                    "gates": alt_report.gates,
                    "cost": alt_report.cost,
                    "gate_classes": alt_report.gate_classes,
                    "verified": alt_report.verified,
                    "standin": True,
                })
    report = report.model_copy(update={
        "method": "hybrid",
        "route": route,
        "seconds": round(deadline.elapsed, 4),
    })
    return circuit, report


def analyze_permutation(p: Permutation, cfg: Optional[RouterConfig] = None) -> AnalysisReport:
    """Routing metrics, cycle statistics and the worst-case estimate, without synthesising."""
    cfg = cfg or RouterConfig()
    fix, residual = preprocess_fix_special(p)
    schedule = _schedule(residual, cfg)
    return AnalysisReport(
        n=p.width,
        distance=float(distance_metric(p)),
        nop=nop_metric(p),
        category=classify(p, cfg),
        statistics=cycle_statistics(p),
        counts={k: v for k, v in schedule.counts.items() if v},
        estimate=estimate_cost(schedule, p.width) + circuit_cost(fix),
        worst_case_bound=worst_case_bound(p.width),
        lnn_worst_case_bound=lnn_worst_case_bound(p.width),
        movable_rows=max_moved_rows(p.width),
        cycles=[c.elements for c in disjoint_cycles(p)],
    )


if __name__ == '__main__':
    from src.core.perm_core import compose_cycles, make_cycle

    target = compose_cycles([make_cycle(5, 3), make_cycle(9, 67)], 7)
    _, rep = synthesize_kcycle(target)
    print(rep.model_dump_json(indent=2))
