"""
Gate-level IR for multiple-control Toffoli circuits: constructors, an exhaustive
bit-mask simulator, the elementary-gate cost model, LNN cost and a peephole pass.
"""
import logging
import math
from collections import Counter
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np
from pydantic import ValidationError

from src.DTOs.models import Circuit, Gate, Permutation, SimulationConfig
from src.core.perm_core import make_permutation

logger = logging.getLogger(__name__)

# How far back the peephole pass walks through commuting gates looking for a partner.
PEEPHOLE_WINDOW = 128


class CircuitError(Exception):
    """Custom exception for malformed gates or circuits."""
    pass


class SimulationCapacityError(CircuitError):
    """Raised when a circuit is wider than the configured simulation limit."""
    pass


class CostModelError(Exception):
    """Custom exception for cost queries outside the model."""
    pass


class LnnUnsupportedError(CostModelError):
    """Raised for LNN cost queries on gates with two or more controls."""
    pass


# --- Constructors --- #

def mct(controls: Iterable[int], target: int, width: int, charged_cost: Optional[int] = None) -> Gate:
    try:
        return Gate(controls=tuple(controls), target=target, width=width, charged_cost=charged_cost)
    except ValidationError as e:
        raise CircuitError(f"Error: Invalid gate controls={tuple(controls)} target={target} width={width}. Details: {e}")


def not_gate(target: int, width: int) -> Gate:
    return mct((), target, width)


def cnot(control: int, target: int, width: int) -> Gate:
    return mct((control,), target, width)


def toffoli(c1: int, c2: int, target: int, width: int) -> Gate:
    return mct((c1, c2), target, width)


def make_circuit(width: int, gates: Iterable[Gate] = ()) -> Circuit:
    try:
        return Circuit(width=width, gates=tuple(gates))
    except ValidationError as e:
        raise CircuitError(f"Error: Invalid circuit of width {width}. Details: {e}")


def concat(circuits: Sequence[Circuit], width: int) -> Circuit:
    gates: List[Gate] = []
    for c in circuits:
        if c.width != width:
            raise CircuitError(f"Error: Cannot join a width-{c.width} circuit into width {width}.")
        gates.extend(c.gates)
    return make_circuit(width, gates)


# --- Simulation --- #

def apply_gate(g: Gate, x: int) -> int:
    """Flips the target bit of x iff every control bit of x is 1."""
    mask = g.control_mask
    if x & mask == mask:
        return x ^ (1 << g.target)
    return x


def apply_gate_array(g: Gate, words: np.ndarray) -> np.ndarray:
    """Vectorised apply_gate over an int64 array (modified in place and returned)."""
    mask = g.control_mask
    if mask == 0:
        words ^= 1 << g.target
    else:
        hit = (words & mask) == mask
        words[hit] ^= 1 << g.target
    return words


def simulate_words(c: Circuit, words: np.ndarray) -> np.ndarray:
    out = np.array(words, dtype=np.int64, copy=True)
    for g in c.gates:
        apply_gate_array(g, out)
    return out


def simulate(c: Circuit, config: Optional[SimulationConfig] = None) -> Permutation:
    """
    Runs every code word through the circuit.

    Args:
        c: The circuit.
        config: Width limit and batch size; defaults to SimulationConfig.from_env().

    Returns:
        The permutation realised by the circuit (table[i] = c(i)).

    Raises:
        SimulationCapacityError: If c.width exceeds the configured limit.
    """
    config = config or SimulationConfig.from_env()
    if c.width > config.max_width:
        raise SimulationCapacityError(
            f"Error: Circuit width {c.width} exceeds the simulation limit {config.max_width}."
        )
    size = 1 << c.width
    batch = 1 << min(config.chunk_bits, c.width)
    table = np.empty(size, dtype=np.int64)
    for start in range(0, size, batch):
        table[start:start + batch] = simulate_words(c, np.arange(start, start + batch, dtype=np.int64))
    return make_permutation(c.width, table.tolist())


# --- Cost model --- #

def mct_cost(m: int, n: int) -> int:
    """
    Elementary-gate cost of a C^mNOT gate on n lines with no ancilla.

    m<=1: 1; m=2: 5; 3<=m<=ceil(n/2) and n>=5: 12m-22; ceil(n/2)<m<=n-2 and n>=7: 24n-88;
    otherwise (m=n-1, or small n) 2^n-3.

    Raises:
        CostModelError: If m is negative or m >= n.
    """
    if m < 0 or m >= n:
        raise CostModelError(f"Error: A gate on {n} lines cannot have {m} controls.")
    if m <= 1:
        return 1
    if m == 2:
        return 5
    if n >= 5 and m <= math.ceil(n / 2):
        return 12 * m - 22
    if n >= 7 and m <= n - 2:
        return 24 * n - 88
    return (1 << n) - 3


def gate_cost(g: Gate) -> int:
    if g.charged_cost is not None:
        return g.charged_cost
    return mct_cost(len(g.controls), g.width)


def _is_plain_toffoli(g: Gate) -> bool:
    return len(g.controls) == 2 and g.charged_cost is None


def circuit_cost(c: Circuit) -> int:
    """Sum of gate costs; a run of k>=2 consecutive Toffolis sharing controls costs 2k+3."""
    total = 0
    gates = c.gates
    i = 0
    while i < len(gates):
        g = gates[i]
        if _is_plain_toffoli(g):
            j = i + 1
            while j < len(gates) and _is_plain_toffoli(gates[j]) and gates[j].controls == g.controls:
                j += 1
            run = j - i
            total += 2 * run + 3 if run >= 2 else 5
            i = j
            continue
        total += gate_cost(g)
        i += 1
    return total


def lnn_cost(c: Circuit) -> int:
    """
    Cost on a linear-nearest-neighbour line: NOT is 1, CNOT(c, t) is 6(|c-t|-1)+1.

    Raises:
        LnnUnsupportedError: If any gate has two or more controls.
    """
    total = 0
    for index, g in enumerate(c.gates):
        if len(g.controls) >= 2:
            raise LnnUnsupportedError(
                f"Error: Gate {index} has {len(g.controls)} controls; LNN cost covers NOT and CNOT only."
            )
        if not g.controls:
            total += 1
        else:
            total += 6 * (abs(g.controls[0] - g.target) - 1) + 1
    return total


def worst_case_bound(n: int) -> int:
    """ceil(8.5 * n * 2^n)."""
    return (17 * n * (1 << n) + 1) // 2


def lnn_worst_case_bound(n: int) -> int:
    return 51 * n * n * (1 << n)


def gate_class_counts(c: Circuit) -> Dict[str, int]:
    counts = Counter(g.kind for g in c.gates)
    return {kind: counts.get(kind, 0) for kind in ("NOT", "CNOT", "Toffoli", "MCT")}


# --- Peephole --- #

def _commute(a: Gate, b: Gate) -> bool:
    # Neither target feeds the other gate's controls.
    return a.target not in b.controls and b.target not in a.controls


def peephole_simplify(c: Circuit) -> Circuit:
    """
    Cancels pairs of identical gates, walking back through commuting gates.

    Every gate is self-inverse, so two equal gates separated only by gates that
    commute with them can both be removed. Repeats until nothing changes.
    """
    gates = list(c.gates)
    while True:
        out: List[Gate] = []
        removed = 0
        for g in gates:
            j = len(out) - 1
            floor = max(-1, len(out) - 1 - PEEPHOLE_WINDOW)
            cancelled = False
            while j > floor:
                h = out[j]
                if h == g:
                    del out[j]
                    cancelled = True
                    break
                if not _commute(h, g):
                    break
                j -= 1
            if cancelled:
                removed += 2
            else:
                out.append(g)
        gates = out
        if removed == 0:
            break
        logger.debug("peephole removed %d gates", removed)
    return make_circuit(c.width, gates)
