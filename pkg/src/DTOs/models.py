import os
from enum import Enum
from typing import List, Dict, Optional, Tuple, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

MAX_WIDTH = 24
SIM_LIMIT_ENV = "CYCLESYNTH_SIM_LIMIT"


class ConfigError(Exception):
    """Custom exception for configuration read from the environment."""
    pass


# --- 1. Permutation Models (the specification f over 2^n code words) --- #

class Permutation(BaseModel):
    """A reversible function given as its full table: entry i is f(i)."""
    model_config = ConfigDict(frozen=True)

    width: int = Field(..., ge=1, le=MAX_WIDTH, description="Number of lines n.")
    table: Tuple[int, ...] = Field(..., description="Output code word for every input code word, index ordered.")

    @model_validator(mode="after")
    def _check_bijection(self) -> "Permutation":
        size = 1 << self.width
        if len(self.table) != size:
            raise ValueError(f"table has {len(self.table)} entries, expected {size} for width {self.width}")
        values = np.asarray(self.table, dtype=np.int64)
        if values.min() < 0 or values.max() >= size:
            raise ValueError(f"table entries must lie in [0, {size - 1}]")
        if np.unique(values).size != size:
            raise ValueError("table is not a bijection")
        return self

    @property
    def size(self) -> int:
        return 1 << self.width

    def as_array(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.int64)

    def __call__(self, word: int) -> int:
        return self.table[word]


class Cycle(BaseModel):
    """A k-cycle (a_1 .. a_k): f(a_1)=a_2, ..., f(a_k)=a_1."""
    model_config = ConfigDict(frozen=True)

    elements: Tuple[int, ...] = Field(..., min_length=2)

    @field_validator("elements")
    @classmethod
    def _distinct(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        if len(set(value)) != len(value):
            raise ValueError(f"cycle elements must be distinct: {value}")
        if min(value) < 0:
            raise ValueError(f"cycle elements must be non-negative: {value}")
        return value

    def __len__(self) -> int:
        return len(self.elements)

    def canonical(self) -> "Cycle":
        """Rotation that starts at the minimum element."""
        start = self.elements.index(min(self.elements))
        return Cycle(elements=self.elements[start:] + self.elements[:start])

    def is_disjoint(self, other: "Cycle") -> bool:
        return not set(self.elements) & set(other.elements)


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"


class CycleStatistics(BaseModel):
    """Cycle-type summary of a permutation."""
    moved_rows: int = Field(..., description="Number of words not fixed by f (m).")
    cycle_count: int
    length_histogram: Dict[int, int] = Field(default_factory=dict, description="Cycle length -> number of cycles.")
    longest_cycle: int = 0
    parity: Parity


# --- 2. Circuit Models (multiple-control Toffoli IR) --- #

class Gate(BaseModel):
    """C^mNOT gate with positive controls. m=0 is NOT, m=1 CNOT, m=2 Toffoli."""
    model_config = ConfigDict(frozen=True)

    controls: Tuple[int, ...] = Field(default=(), description="Control lines, stored sorted ascending.")
    target: int = Field(..., ge=0)
    width: int = Field(..., ge=1, le=MAX_WIDTH)
    charged_cost: Optional[int] = Field(
        None, gt=0,
        description="Elementary-gate cost charged instead of the cost-model value (expanded-form annotations)."
    )

    @field_validator("controls", mode="before")
    @classmethod
    def _normalise_controls(cls, value) -> Tuple[int, ...]:
        return tuple(sorted(set(value)))

    @model_validator(mode="after")
    def _check_lines(self) -> "Gate":
        if self.target in self.controls:
            raise ValueError(f"target line {self.target} is also a control")
        if self.target >= self.width or any(c < 0 or c >= self.width for c in self.controls):
            raise ValueError(f"gate lines must lie in [0, {self.width - 1}]")
        return self

    @property
    def control_mask(self) -> int:
        mask = 0
        for line in self.controls:
            mask |= 1 << line
        return mask

    @property
    def support(self) -> frozenset:
        return frozenset(self.controls) | {self.target}

    @property
    def kind(self) -> str:
        return {0: "NOT", 1: "CNOT", 2: "Toffoli"}.get(len(self.controls), "MCT")


class Circuit(BaseModel):
    """Ordered gate list over `width` lines; the leftmost gate is applied first."""
    model_config = ConfigDict(frozen=True)

    width: int = Field(..., ge=1, le=MAX_WIDTH)
    gates: Tuple[Gate, ...] = Field(default=())

    @model_validator(mode="after")
    def _check_widths(self) -> "Circuit":
        for index, gate in enumerate(self.gates):
            if gate.width != self.width:
                raise ValueError(f"gate {index} has width {gate.width}, circuit width is {self.width}")
        return self

    def __len__(self) -> int:
        return len(self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.width != self.width:
            raise ValueError(f"cannot concatenate circuits of width {self.width} and {other.width}")
        return Circuit(width=self.width, gates=self.gates + other.gates)

    def reversed(self) -> "Circuit":
        """Every gate is self-inverse, so the reversed list is the inverse circuit."""
        return Circuit(width=self.width, gates=tuple(reversed(self.gates)))


# --- 3. Building Block and Schedule Models --- #

class BuildingBlockKind(str, Enum):
    PAIR22 = "Pair22"
    SINGLE3 = "Single3"
    PAIR33 = "Pair33"
    PAIR42 = "Pair42"
    PAIR44 = "Pair44"
    SINGLE5 = "Single5"
    PAIR55 = "Pair55"
    SINGLE_TRANSPOSITION = "SingleTransposition"


# Operand count and cycle lengths, in operand order.
KIND_SHAPES: Dict[BuildingBlockKind, Tuple[int, ...]] = {
    BuildingBlockKind.PAIR22: (2, 2),
    BuildingBlockKind.SINGLE3: (3,),
    BuildingBlockKind.PAIR33: (3, 3),
    BuildingBlockKind.PAIR42: (4, 2),
    BuildingBlockKind.PAIR44: (4, 4),
    BuildingBlockKind.SINGLE5: (5,),
    BuildingBlockKind.PAIR55: (5, 5),
    BuildingBlockKind.SINGLE_TRANSPOSITION: (2,),
}


class CostBound(BaseModel):
    """Linear bound a*n + b on elementary gates."""
    model_config = ConfigDict(frozen=True)

    a: float
    b: float
    length: int = Field(..., description="Number of rows the block corrects.")

    def evaluate(self, n: int) -> int:
        return int(self.a * n + self.b)

    def per_row(self, n: int) -> float:
        return round(self.evaluate(n) / self.length, 1)


class BBTask(BaseModel):
    """One building block instance: its kind and its cycles in operand order."""
    model_config = ConfigDict(frozen=True)

    kind: BuildingBlockKind
    cycles: Tuple[Cycle, ...]

    @model_validator(mode="after")
    def _check_shape(self) -> "BBTask":
        shape = tuple(len(c) for c in self.cycles)
        if shape != KIND_SHAPES[self.kind]:
            raise ValueError(f"{self.kind.value} expects cycle lengths {KIND_SHAPES[self.kind]}, got {shape}")
        operands = self.operands
        if len(set(operands)) != len(operands):
            raise ValueError(f"{self.kind.value} cycles must be element-disjoint: {operands}")
        return self

    @property
    def operands(self) -> Tuple[int, ...]:
        return tuple(e for c in self.cycles for e in c.elements)


class BBSchedule(BaseModel):
    """Ordered building-block tasks; composing their cycles left to right gives the input."""
    width: int
    tasks: List[BBTask] = Field(default_factory=list)

    def count(self, kind: BuildingBlockKind) -> int:
        return sum(1 for task in self.tasks if task.kind == kind)

    @property
    def counts(self) -> Dict[str, int]:
        return {kind.value: self.count(kind) for kind in BuildingBlockKind}

    def cycles(self) -> List[Cycle]:
        return [c for task in self.tasks for c in task.cycles]


class ExtractionResult(BaseModel):
    """Output of 5-cycle extraction on one cycle."""
    generations: List[List[Cycle]] = Field(
        default_factory=list,
        description="Extracted 5-cycles grouped by extraction round; cycles inside one round are disjoint."
    )
    residual: Optional[Cycle] = Field(None, description="Remaining cycle of length 2, 3 or 4.")

    @property
    def fives(self) -> List[Cycle]:
        return [c for round_ in self.generations for c in round_]


# --- 4. Configuration Models --- #

class RouterConfig(BaseModel):
    """Thresholds of the hybrid router."""
    distance_threshold: float = Field(0.5, ge=0.0, le=1.0)
    nop_factor: float = Field(0.005, gt=0.0, description="Th = nop_factor * 2^n.")
    small_n_cutoff: int = Field(7, ge=3)
    tie_goes_to_kcycle: bool = Field(False, description="Route Distance == threshold to the k-cycle method.")

    def nop_threshold(self, width: int) -> float:
        return self.nop_factor * (1 << width)


class SimulationConfig(BaseModel):
    """Width cap for exhaustive simulation."""
    max_width: int = Field(20, ge=1, le=MAX_WIDTH)
    chunk_bits: int = Field(16, ge=4, le=MAX_WIDTH, description="Words simulated per batch = 2^chunk_bits.")

    @classmethod
    def from_env(cls) -> "SimulationConfig":
        raw = os.environ.get(SIM_LIMIT_ENV)
        if raw is None or raw.strip() == "":
            return cls()
        try:
            return cls(max_width=int(raw))
        except (ValueError, ValidationError) as e:
            raise ConfigError(f"Error: {SIM_LIMIT_ENV}={raw!r} is not a width in [1, {MAX_WIDTH}]. Details: {e}")


class HwbConfig(BaseModel):
    rotation: Literal["left", "right"] = "left"


# --- 5. Output Models (reports) --- #

class ValidationIssue(BaseModel):
    """A warning or error attached to a report."""
    issue_type: str
    message: str
    severity: Literal["warning", "error"] = "warning"


class SynthesisReport(BaseModel):
    """Per-run metrics. Field order is the key=value emission order."""
    method: Literal["kcycle", "mmd-standin", "hybrid"]
    n: int
    gates: int = Field(..., description="MCT-level gate count.")
    cost: int = Field(..., description="Quantum cost under the elementary-gate model.")
    estimate: Optional[int] = Field(None, description="Worst-case bound from the building-block counts plus pre-processing.")
    distance: float
    nop: int
    category: Literal[1, 2, 3]
    verified: Optional[bool] = Field(None, description="None when the width exceeds the simulation limit.")
    seconds: float
    route: str = Field(..., description="kcycle | kcycle+post | mmd-standin")
    standin: bool = Field(False, description="True when a stand-in synthesizer produced the circuit.")
    counts: Dict[str, int] = Field(default_factory=dict, description="Building-block task counts.")
    gate_classes: Dict[str, int] = Field(default_factory=dict, description="NOT/CNOT/Toffoli/MCT gate counts.")
    warnings: List[ValidationIssue] = Field(default_factory=list)


class AnalysisReport(BaseModel):
    """Output of the `analyze` command."""
    n: int
    distance: float
    nop: int
    category: Literal[1, 2, 3]
    statistics: CycleStatistics
    counts: Dict[str, int] = Field(default_factory=dict)
    estimate: int
    worst_case_bound: int
    lnn_worst_case_bound: int
    movable_rows: int = Field(0, description="Rows a pre-processed function can still move, 2^n - n - 1.")
    cycles: List[Tuple[int, ...]] = Field(default_factory=list)


if __name__ == '__main__':
    p = Permutation(width=2, table=(0, 2, 1, 3))
    print("Permutation Example:", p.model_dump_json())
    g = Gate(controls=(2, 1), target=0, width=3)
    print("Gate Example:", g.model_dump_json(), g.kind)
    print("Router defaults:", RouterConfig().model_dump_json(indent=2))
