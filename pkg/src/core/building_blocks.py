"""
Building blocks: the seven kernel circuits that realise fixed cycles near 2^n-1,
the conjugator that moves arbitrary operands onto a kernel's words, and the
synthesizers that wrap a kernel as conjugator + kernel + reversed conjugator.
"""
import logging
import math
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from src.DTOs.models import BBTask, BuildingBlockKind, Circuit, CostBound, Gate, KIND_SHAPES
from src.core.circuit_ir import apply_gate, circuit_cost, make_circuit, mct, not_gate, cnot, toffoli

logger = logging.getLogger(__name__)

K = BuildingBlockKind


class BuildingBlockError(Exception):
    """Custom exception for building block construction errors."""
    pass


class InvalidOperandError(BuildingBlockError):
    """Raised for operands that are 0, a power of two, repeated or out of range."""
    pass


# --- Cost table: conjugator budgets and total bounds per block --- #

# Every kernel except the pair of transpositions needs this many lines.
KERNEL_MIN_WIDTH = 7

# Budget of one conjugator (applied twice per block).
CONJUGATOR_BUDGETS: Dict[BuildingBlockKind, Tuple[int, int]] = {
    K.PAIR22: (5, 12),
    K.SINGLE3: (4, 3),
    K.PAIR33: (7, 33),
    K.PAIR42: (7, 29),
    K.PAIR44: (10, 51),
    K.SINGLE5: (6, 18),
    K.PAIR55: (14, 76),
}

COST_BOUNDS: Dict[BuildingBlockKind, CostBound] = {
    K.PAIR22: CostBound(a=34, b=-64, length=4),
    K.SINGLE3: CostBound(a=32, b=-82, length=3),
    K.PAIR33: CostBound(a=38, b=-46, length=6),
    K.PAIR42: CostBound(a=50, b=-122, length=6),
    K.PAIR44: CostBound(a=56, b=-126, length=8),
    K.SINGLE5: CostBound(a=60, b=-130, length=5),
    K.PAIR55: CostBound(a=64, b=-54, length=10),
}

# One transposition conjugator: two single-word fixes plus the closing NOT layer.
TRANSPOSITION_CONJUGATOR_BUDGET = 3


def transposition_bound(n: int) -> int:
    return (1 << n) - 3 + 2 * TRANSPOSITION_CONJUGATOR_BUDGET * n


def kind_bound(kind: BuildingBlockKind, n: int) -> int:
    """Worst-case elementary gates for one block of `kind` on n lines."""
    if kind == K.SINGLE_TRANSPOSITION:
        return transposition_bound(n)
    if n >= KERNEL_MIN_WIDTH:
        return COST_BOUNDS[kind].evaluate(n)
    # Small widths only schedule pairs of transpositions; price the actual kernel.
    a, b = CONJUGATOR_BUDGETS[kind]
    return circuit_cost(KERNELS[kind](n)) + 2 * (a * n + b)


# --- Kernel circuits --- #

def _require_width(n: int, minimum: int, name: str) -> None:
    if n < minimum:
        raise BuildingBlockError(f"Error: {name} needs at least {minimum} lines, got {n}.")


def _charge(gates: List[Gate], total: int) -> List[Gate]:
    """Spreads an expanded-form cost over the MCT gates that stand for it."""
    share = total // len(gates)
    charges = [total - share * (len(gates) - 1)] + [share] * (len(gates) - 1)
    return [mct(g.controls, g.target, g.width, charged_cost=c) for g, c in zip(gates, charges)]


def kappa_2_2(n: int) -> Circuit:
    """(2^n-4, 2^n-3)(2^n-2, 2^n-1): one C^(n-2)NOT on line 0."""
    _require_width(n, 3, "kappa_2_2")
    return make_circuit(n, [mct(range(2, n), 0, n)])


def kappa_3(n: int) -> Circuit:
    """(2^n-2^(k-1)-1, 2^n-1, 2^(n-1)-1) with k = ceil(n/2)."""
    _require_width(n, KERNEL_MIN_WIDTH, "kappa_3")
    k = math.ceil(n / 2)
    upper = mct(range(k, n), k - 1, n)
    lower = mct(range(0, k), n - 1, n)
    return make_circuit(n, [upper, lower, upper, lower])


def kappa_3_3(n: int) -> Circuit:
    """kappa_3 with line 0 dropped from the lower controls: one 3-cycle per value of bit 0."""
    _require_width(n, KERNEL_MIN_WIDTH, "kappa_3_3")
    k = math.ceil(n / 2)
    upper = mct(range(k, n), k - 1, n)
    lower = mct(range(1, k), n - 1, n)
    return make_circuit(n, [upper, lower, upper, lower])


def kappa_4_2(n: int) -> Circuit:
    """(2^n-4, 2^n-1, 2^n-3, 2^n-2)(2^(n-1)-2, 2^(n-1)-1)."""
    _require_width(n, KERNEL_MIN_WIDTH, "kappa_4_2")
    gates = [mct(range(2, n), 1, n), mct(range(1, n - 1), 0, n)]
    return make_circuit(n, _charge(gates, 36 * n - 180))


def kappa_4_4(n: int) -> Circuit:
    """(2^n-8, 2^n-2, 2^n-6, 2^n-4)(2^n-7, 2^n-1, 2^n-5, 2^n-3)."""
    _require_width(n, KERNEL_MIN_WIDTH, "kappa_4_4")
    gates = [mct(range(3, n), 2, n), mct(range(2, n), 1, n)]
    return make_circuit(n, _charge(gates, 36 * n - 228))


def kappa_5(n: int) -> Circuit:
    """(2^(n-2)-1, 2^n-1, 2^n-2^(n-2)-1, 2^(n-1)-1, 2^n-2^(n-3)-1)."""
    _require_width(n, KERNEL_MIN_WIDTH, "kappa_5")
    t = toffoli(n - 1, n - 2, n - 3, n)
    return make_circuit(n, [t, mct(range(0, n - 2), n - 1, n), t, mct(range(0, n - 2), n - 2, n)])


def kappa_5_5(n: int) -> Circuit:
    """kappa_5 without line 0 in its controls: one 5-cycle per value of bit 0."""
    _require_width(n, KERNEL_MIN_WIDTH, "kappa_5_5")
    t = toffoli(n - 1, n - 2, n - 3, n)
    gates = [t, mct(range(1, n - 2), n - 1, n), t, mct(range(1, n - 2), n - 2, n)]
    return make_circuit(n, _charge(gates, 36 * n - 206))


def kappa_transposition(n: int) -> Circuit:
    """(2^n-2, 2^n-1) with one C^(n-1)NOT."""
    _require_width(n, 2, "kappa_transposition")
    return make_circuit(n, [mct(range(1, n), 0, n)])


KERNELS: Dict[BuildingBlockKind, Callable[[int], Circuit]] = {
    K.PAIR22: kappa_2_2,
    K.SINGLE3: kappa_3,
    K.PAIR33: kappa_3_3,
    K.PAIR42: kappa_4_2,
    K.PAIR44: kappa_4_4,
    K.SINGLE5: kappa_5,
    K.PAIR55: kappa_5_5,
    K.SINGLE_TRANSPOSITION: kappa_transposition,
}


def kernel_words(kind: BuildingBlockKind, n: int) -> Tuple[int, ...]:
    """The words each kernel cycles, in operand order (cycle by cycle)."""
    top = (1 << n) - 1
    k = math.ceil(n / 2)
    three = (top - (1 << (k - 1)), top, top - (1 << (n - 1)))
    five = (
        (1 << (n - 2)) - 1, top, top - (1 << (n - 2)),
        (1 << (n - 1)) - 1, top - (1 << (n - 3)),
    )
    if kind == K.PAIR22:
        return (top - 3, top - 2, top - 1, top)
    if kind == K.SINGLE3:
        return three
    if kind == K.PAIR33:
        return tuple(w - 1 for w in three) + three
    if kind == K.PAIR42:
        return (top - 3, top, top - 2, top - 1, (1 << (n - 1)) - 2, (1 << (n - 1)) - 1)
    if kind == K.PAIR44:
        return (top - 7, top - 1, top - 5, top - 3, top - 6, top, top - 4, top - 2)
    if kind == K.SINGLE5:
        return five
    if kind == K.PAIR55:
        return tuple(w - 1 for w in five) + five
    return (top - 1, top)


# --- Conjugator --- #

def _bits(word: int) -> List[int]:
    return [i for i in range(word.bit_length()) if (word >> i) & 1]


def _mask(lines: Sequence[int]) -> int:
    mask = 0
    for line in lines:
        mask |= 1 << line
    return mask


class _ValueFixer:
    """
    Moves tracked words one at a time onto goal words without disturbing the
    words already placed.

    A gate leaves a placed word alone unless its controls are a subset of that
    word's one-bits, so every gate is chosen with a control set no placed word
    covers.
    """

    def __init__(self, values: Sequence[int], n: int):
        self.n = n
        self.current = list(values)
        self.placed: List[int] = []
        self.gates: List[Gate] = []

    def emit(self, gate: Gate) -> None:
        self.gates.append(gate)
        self.current = [apply_gate(gate, w) for w in self.current]

    def _safe(self, mask: int) -> bool:
        return all(w & mask != mask for w in self.placed)

    def _seed_controls(self, x: int) -> Tuple[int, ...]:
        bits = _bits(x)
        for q in bits:
            if self._safe(1 << q):
                return (q,)
        for pair in combinations(bits, 2):
            if self._safe(_mask(pair)):
                return pair
        if bits and self._safe(x):
            return tuple(bits)
        raise BuildingBlockError(f"Error: No safe control set inside word {x} (placed: {self.placed}).")

    def _fan_out(self, index: int, pivot: int, goal: int) -> None:
        diff = self.current[index] ^ goal
        for j in range(self.n):
            if j != pivot and (diff >> j) & 1:
                self.emit(cnot(pivot, j, self.n))

    def fix(self, index: int, goal: int) -> None:
        x = self.current[index]
        if x != goal:
            if goal == 0:
                if self.placed:
                    raise BuildingBlockError("Error: The zero word must be placed first.")
                for j in _bits(x):
                    self.emit(not_gate(j, self.n))
            else:
                self._fix_nonzero(index, x, goal)
        if self.current[index] != goal:
            raise BuildingBlockError(f"Error: Failed to move word {x} onto {goal}.")
        self.placed.append(goal)

    def _fix_nonzero(self, index: int, x: int, goal: int) -> None:
        pivots = [p for p in _bits(goal) if self._safe(1 << p)]
        if pivots:
            # Pivot: a goal bit no placed word carries.
            held = [p for p in pivots if (x >> p) & 1]
            p = held[0] if held else pivots[0]
            if not held:
                self.emit(mct(self._seed_controls(x), p, self.n))
            self._fan_out(index, p, goal)
            return
        # Every goal bit is in use: go through a fresh line and clear it under the goal's own bits.
        if not self._safe(goal):
            raise BuildingBlockError(f"Error: Goal word {goal} is covered by a placed word.")
        used = 0
        for w in self.placed:
            used |= w
        fresh = [q for q in range(self.n) if not ((used | goal) >> q) & 1]
        if not fresh:
            raise BuildingBlockError(f"Error: No free line to route word {x} onto {goal}.")
        held = [q for q in fresh if (x >> q) & 1]
        q = held[0] if held else fresh[0]
        if not held:
            self.emit(mct(self._seed_controls(x), q, self.n))
        self._fan_out(index, q, goal | (1 << q))
        self.emit(mct(_bits(goal), q, self.n))


def _validate_operands(values: Sequence[int], n: int, name: str) -> None:
    size = 1 << n
    if len(set(values)) != len(values):
        raise InvalidOperandError(f"Error: {name} operands must be distinct: {tuple(values)}")
    for v in values:
        if v < 0 or v >= size:
            raise InvalidOperandError(f"Error: {name} operand {v} is outside [0, {size - 1}].")
        if v == 0 or v & (v - 1) == 0:
            raise InvalidOperandError(f"Error: {name} operand {v} is 0 or a power of two.")


def conjugator(values: Sequence[int], targets: Sequence[int], n: int, frame: Optional[str] = None) -> Circuit:
    """
    Builds a circuit mapping values[j] to targets[j] for every j.

    Values are placed in order of increasing one-bit count of their goal word.
    Dense targets are handled in the complement frame: the values are first
    placed on the complements of the targets, then one NOT per line flips them
    into place. Words that are not values may move arbitrarily.

    Args:
        values: Distinct words, none 0 or a power of two.
        targets: Distinct destination words, same length as values.
        n: Number of lines.
        frame: "direct", "complement" or None to pick the sparser one.

    Returns:
        The conjugating circuit (empty when values already equal targets).

    Raises:
        InvalidOperandError: On precondition violations.
        BuildingBlockError: If no safe gate sequence exists for the requested goals.
    """
    if len(values) != len(targets):
        raise InvalidOperandError(f"Error: {len(values)} values but {len(targets)} targets.")
    _validate_operands(values, n, "conjugator")
    size = 1 << n
    if len(set(targets)) != len(targets) or any(t < 0 or t >= size for t in targets):
        raise InvalidOperandError(f"Error: Conjugator targets must be distinct words below {size}: {tuple(targets)}")
    if tuple(values) == tuple(targets):
        return make_circuit(n)

    full = size - 1
    if frame is None:
        dense = sum(bin(t).count("1") for t in targets)
        sparse = sum(bin(t ^ full).count("1") for t in targets)
        frame = "complement" if sparse < dense else "direct"
    goals = [t ^ full for t in targets] if frame == "complement" else list(targets)

    fixer = _ValueFixer(values, n)
    order = sorted(range(len(goals)), key=lambda j: bin(goals[j]).count("1"))
    for j in order:
        fixer.fix(j, goals[j])
    if frame == "complement":
        for line in range(n):
            fixer.emit(not_gate(line, n))
    if fixer.current != list(targets):
        raise BuildingBlockError(f"Error: Conjugator ended at {fixer.current}, expected {list(targets)}.")
    return make_circuit(n, fixer.gates)


# --- Synthesizers --- #

def _wrap(kind: BuildingBlockKind, operands: Sequence[int], n: int) -> Circuit:
    name = kind.value
    if len(operands) != sum(KIND_SHAPES[kind]):
        raise InvalidOperandError(f"Error: {name} takes {sum(KIND_SHAPES[kind])} operands, got {len(operands)}.")
    kernel = KERNELS[kind](n)
    _validate_operands(operands, n, name)
    pi = conjugator(operands, kernel_words(kind, n), n, frame="complement")
    logger.debug("%s on %s: conjugator %d gates", name, tuple(operands), len(pi))
    return pi + kernel + pi.reversed()


def syn_2_2(a: int, b: int, c: int, d: int, n: int) -> Circuit:
    """(a, b)(c, d)."""
    return _wrap(K.PAIR22, (a, b, c, d), n)


def syn_3(a: int, b: int, c: int, n: int) -> Circuit:
    return _wrap(K.SINGLE3, (a, b, c), n)


def syn_3_3(a: int, b: int, c: int, d: int, e: int, f: int, n: int) -> Circuit:
    return _wrap(K.PAIR33, (a, b, c, d, e, f), n)


def syn_4_2(a: int, b: int, c: int, d: int, e: int, f: int, n: int) -> Circuit:
    """(a, b, c, d)(e, f)."""
    return _wrap(K.PAIR42, (a, b, c, d, e, f), n)


def syn_4_4(a: int, b: int, c: int, d: int, e: int, f: int, g: int, h: int, n: int) -> Circuit:
    return _wrap(K.PAIR44, (a, b, c, d, e, f, g, h), n)


def syn_5(a: int, b: int, c: int, d: int, e: int, n: int) -> Circuit:
    return _wrap(K.SINGLE5, (a, b, c, d, e), n)


def syn_5_5(a: int, b: int, c: int, d: int, e: int,
            f: int, g: int, h: int, i: int, j: int, n: int) -> Circuit:
    return _wrap(K.PAIR55, (a, b, c, d, e, f, g, h, i, j), n)


def syn_transposition(a: int, b: int, n: int) -> Circuit:
    """(a, b) through the C^(n-1)NOT swap of 2^n-2 and 2^n-1."""
    if n < 3:
        raise InvalidOperandError(f"Error: SingleTransposition needs at least 3 lines, got {n}.")
    return _wrap(K.SINGLE_TRANSPOSITION, (a, b), n)


def synthesize_task(task: BBTask, n: int) -> Circuit:
    """Dispatches a scheduled task to its synthesizer."""
    return _wrap(task.kind, task.operands, n)


if __name__ == '__main__':
    from src.core.circuit_ir import simulate
    from src.core.perm_core import disjoint_cycles

    demo = syn_2_2(5, 3, 9, 67, 7)
    print(f"Syn22(5,3,9,67) on 7 lines: {len(demo)} gates, cost {circuit_cost(demo)}")
    print("Cycles:", [c.elements for c in disjoint_cycles(simulate(demo))])
