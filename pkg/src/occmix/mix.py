"""Instruction-mix model: classification, aggregation, CPI weighting.

Every decoded instruction maps to one operation class; classes group
into four pipeline categories (floating point, memory, control,
register traffic).  Per-class instructions-per-cycle figures for the
four supported architecture generations give cycles-per-instruction
weights (CPI = 1/IPC), from which a relative cost estimate

    cost = scale * (c_f * flops + c_m * mem + c_b * ctrl + c_r * reg_ops)

is formed.  The estimate ranks code variants; it does not predict
wall-clock time.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from importlib import resources

from .errors import ParseError, UnsupportedArchitectureError
from .sass import Instruction


class OpClass(str, enum.Enum):
    FP32 = "FPIns32"
    FP64 = "FPIns64"
    COMP_MIN_MAX = "CompMinMax"
    SHIFT_EXTRACT_SHUFFLE_SAD = "ShiftExtractShuffleSAD"
    CONV64 = "Conv64"
    CONV32 = "Conv32"
    LOG_SIN_COS = "LogSinCos"
    INT_ADD32 = "IntAdd32"
    TEXTURE = "TexIns"
    LOAD_STORE = "LdStIns"
    SURFACE = "SurfIns"
    PREDICATE = "PredIns"
    CONTROL = "CtrlIns"
    MOVE = "MoveIns"
    REGS = "Regs"
    UNCLASSIFIED = "Unclassified"


class Category(str, enum.Enum):
    FLOPS = "FLOPS"
    MEM = "MEM"
    CTRL = "CTRL"
    REG = "REG"


CATEGORY_OF: dict[OpClass, Category] = {
    OpClass.FP32: Category.FLOPS,
    OpClass.FP64: Category.FLOPS,
    OpClass.COMP_MIN_MAX: Category.FLOPS,
    OpClass.SHIFT_EXTRACT_SHUFFLE_SAD: Category.FLOPS,
    OpClass.CONV64: Category.FLOPS,
    OpClass.CONV32: Category.FLOPS,
    OpClass.LOG_SIN_COS: Category.FLOPS,
    OpClass.INT_ADD32: Category.FLOPS,
    OpClass.TEXTURE: Category.MEM,
    OpClass.LOAD_STORE: Category.MEM,
    OpClass.SURFACE: Category.MEM,
    OpClass.PREDICATE: Category.CTRL,
    OpClass.CONTROL: Category.CTRL,
    OpClass.MOVE: Category.CTRL,
    OpClass.REGS: Category.REG,
}

FLOPS_CLASSES = tuple(c for c, cat in CATEGORY_OF.items() if cat is Category.FLOPS)

# Throughput table keys, one per supported compute-capability major line.
SM_KEYS = ("sm20", "sm35", "sm52", "sm60")

_CC_MAJOR_TO_KEY = {2: "sm20", 3: "sm35", 5: "sm52", 6: "sm60"}

# Instructions per cycle per (class, architecture key).  Classes sharing a
# hardware pipeline share a row of figures.
_IPC_ROWS: dict[OpClass, tuple[int, int, int, int]] = {
    OpClass.FP32: (32, 192, 128, 64),
    OpClass.FP64: (16, 64, 4, 32),
    OpClass.COMP_MIN_MAX: (32, 160, 64, 32),
    OpClass.SHIFT_EXTRACT_SHUFFLE_SAD: (16, 32, 64, 32),
    OpClass.CONV64: (16, 8, 4, 16),
    OpClass.CONV32: (16, 128, 32, 16),
    OpClass.LOG_SIN_COS: (4, 32, 32, 16),
    OpClass.INT_ADD32: (32, 160, 64, 32),
    OpClass.TEXTURE: (16, 32, 64, 16),
    OpClass.LOAD_STORE: (16, 32, 64, 16),
    OpClass.SURFACE: (16, 32, 64, 16),
    OpClass.PREDICATE: (16, 32, 64, 16),
    OpClass.CONTROL: (16, 32, 64, 16),
    OpClass.MOVE: (32, 32, 32, 32),
    OpClass.REGS: (16, 32, 32, 16),
}


def sm_key(cc: float) -> str:
    """Map a compute capability (e.g. 3.5) to its throughput-table key."""
    key = _CC_MAJOR_TO_KEY.get(int(cc))
    if key is None:
        raise UnsupportedArchitectureError(
            f"no throughput data for compute capability {cc}; "
            f"supported keys: {', '.join(SM_KEYS)}")
    return key


@dataclass(frozen=True)
class ThroughputTable:
    """Instructions-per-cycle per (operation class, architecture key)."""

    ipc: dict[tuple[OpClass, str], int]

    def __post_init__(self):
        for (cls, key), value in self.ipc.items():
            if value <= 0:
                raise ValueError(f"IPC for ({cls.value}, {key}) must be positive")

    def cpi(self, cls: OpClass, cc: float) -> float:
        """Cycles per instruction: the reciprocal of the tabulated IPC."""
        if cls is OpClass.UNCLASSIFIED:
            raise ValueError("unclassified operations have no CPI entry")
        return 1.0 / self.ipc[(cls, sm_key(cc))]


DEFAULT_THROUGHPUT = ThroughputTable(ipc={
    (cls, key): row[i]
    for cls, row in _IPC_ROWS.items()
    for i, key in enumerate(SM_KEYS)
})


def cpi(cls: OpClass, cc: float, table: ThroughputTable = DEFAULT_THROUGHPUT) -> float:
    return table.cpi(cls, cc)


# ---------------------------------------------------------------------------
# Opcode classification
# ---------------------------------------------------------------------------

_BY_NAME = {cls.value: cls for cls in OpClass}
_MAP_LINE_RE = re.compile(r"^(?P<key>[A-Z][A-Z0-9]*(?:\.[^\s]+)?)\s*->\s*(?P<cls>\w+)$")


def parse_opclass_table(text: str) -> dict[str, OpClass]:
    """Parse an ``OPCODE[.MOD] -> ClassName`` mapping file."""
    table: dict[str, OpClass] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _MAP_LINE_RE.match(line)
        if not m:
            raise ParseError(f"bad mapping line {line!r}", lineno)
        cls = _BY_NAME.get(m.group("cls"))
        if cls is None or cls is OpClass.REGS:
            raise ParseError(f"unknown class name {m.group('cls')!r}", lineno)
        table[m.group("key")] = cls
    return table


def load_opclass_file(path: str) -> dict[str, OpClass]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_opclass_table(fh.read())


def _load_default_table() -> dict[str, OpClass]:
    text = resources.files("occmix").joinpath("data/opclasses.txt").read_text("utf-8")
    return parse_opclass_table(text)


DEFAULT_OPCLASSES = _load_default_table()


def classify(instr: Instruction,
             table: dict[str, OpClass] = DEFAULT_OPCLASSES) -> OpClass:
    """Classify an instruction by opcode root and type-width modifiers.

    Total and deterministic: unknown opcodes yield ``Unclassified``,
    never an error.
    """
    for mod in instr.modifiers:
        cls = table.get(instr.opcode + mod)
        if cls is not None:
            return cls
    return table.get(instr.opcode, OpClass.UNCLASSIFIED)


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InstructionMix:
    """Per-class instruction counts plus register-operand traffic."""

    counts: dict[OpClass, int] = field(default_factory=dict)
    reg_operands: int = 0   # register-operand occurrences across all instructions

    def __post_init__(self):
        for cls, n in self.counts.items():
            if cls is OpClass.REGS:
                raise ValueError("Regs is a weighting row, not an opcode class")
            if n < 0:
                raise ValueError(f"negative count for {cls.value}")
        if self.reg_operands < 0:
            raise ValueError("negative register-operand count")

    def _category_total(self, category: Category) -> int:
        return sum(n for cls, n in self.counts.items()
                   if CATEGORY_OF.get(cls) is category)

    @property
    def flops(self) -> int:
        return self._category_total(Category.FLOPS)

    @property
    def mem(self) -> int:
        return self._category_total(Category.MEM)

    @property
    def ctrl(self) -> int:
        return self._category_total(Category.CTRL)

    @property
    def unclassified(self) -> int:
        return self.counts.get(OpClass.UNCLASSIFIED, 0)

    @property
    def total_instructions(self) -> int:
        return sum(self.counts.values())

    def __add__(self, other: "InstructionMix") -> "InstructionMix":
        merged = dict(self.counts)
        for cls, n in other.counts.items():
            merged[cls] = merged.get(cls, 0) + n
        return InstructionMix(merged, self.reg_operands + other.reg_operands)

    def scaled(self, k: int) -> "InstructionMix":
        return InstructionMix({c: n * k for c, n in self.counts.items()},
                              self.reg_operands * k)


def aggregate(instrs: list[Instruction],
              table: dict[str, OpClass] = DEFAULT_OPCLASSES) -> InstructionMix:
    """Aggregate a stream of instructions into an InstructionMix.

    A predicate guard on a non-control instruction adds one predicate
    operation on top of the instruction's own class; guards on control
    instructions are not double-counted.
    """
    counts: dict[OpClass, int] = {}
    reg_operands = 0
    for instr in instrs:
        cls = classify(instr, table)
        counts[cls] = counts.get(cls, 0) + 1
        if instr.predicate and CATEGORY_OF.get(cls) is not Category.CTRL:
            counts[OpClass.PREDICATE] = counts.get(OpClass.PREDICATE, 0) + 1
        reg_operands += instr.register_operand_count
    return InstructionMix(counts, reg_operands)


# ---------------------------------------------------------------------------
# Weighting
# ---------------------------------------------------------------------------

def _flops_coefficient(mix: InstructionMix, cc: float,
                       table: ThroughputTable) -> float:
    """Count-weighted mean CPI over the floating-point classes present.

    Falls back to the 32-bit floating-point row for a mix with no
    floating-point operations at all.
    """
    total = mix.flops
    if total == 0:
        return table.cpi(OpClass.FP32, cc)
    weighted = sum(n * table.cpi(cls, cc)
                   for cls, n in mix.counts.items()
                   if CATEGORY_OF.get(cls) is Category.FLOPS)
    return weighted / total


def category_coefficients(mix: InstructionMix, cc: float,
                          table: ThroughputTable = DEFAULT_THROUGHPUT,
                          ) -> dict[Category, float]:
    """The four per-category CPI weights for the cost estimate."""
    return {
        Category.FLOPS: _flops_coefficient(mix, cc, table),
        Category.MEM: table.cpi(OpClass.LOAD_STORE, cc),
        Category.CTRL: table.cpi(OpClass.CONTROL, cc),
        Category.REG: table.cpi(OpClass.REGS, cc),
    }


def category_cycles(mix: InstructionMix, cc: float,
                    table: ThroughputTable = DEFAULT_THROUGHPUT,
                    ) -> dict[Category, float]:
    """Weighted cycles contributed by each category (the cost terms)."""
    coef = category_coefficients(mix, cc, table)
    return {
        Category.FLOPS: coef[Category.FLOPS] * mix.flops,
        Category.MEM: coef[Category.MEM] * mix.mem,
        Category.CTRL: coef[Category.CTRL] * mix.ctrl,
        Category.REG: coef[Category.REG] * mix.reg_operands,
    }


def per_class_cycles(mix: InstructionMix, cc: float,
                     table: ThroughputTable = DEFAULT_THROUGHPUT,
                     ) -> dict[OpClass, float]:
    """Per-row weighted cycles (finer detail than the category terms)."""
    out = {cls: n * table.cpi(cls, cc)
           for cls, n in mix.counts.items()
           if cls is not OpClass.UNCLASSIFIED and n}
    if mix.reg_operands:
        out[OpClass.REGS] = mix.reg_operands * table.cpi(OpClass.REGS, cc)
    return out


def cost_estimate(mix: InstructionMix, cc: float, scale: float = 1.0,
                  table: ThroughputTable = DEFAULT_THROUGHPUT) -> float:
    """Relative weighted-cycle cost of a mix on one architecture.

    Linear in every count and in ``scale``; intended for ranking code
    variants against each other, not for predicting seconds.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    return scale * sum(category_cycles(mix, cc, table).values())


def intensity(mix: InstructionMix) -> float:
    """Ratio of floating-point operations to memory operations."""
    if mix.mem == 0:
        return math.inf if mix.flops > 0 else 0.0
    return mix.flops / mix.mem


def pipeline_utilization(mix: InstructionMix, cc: float,
                         table: ThroughputTable = DEFAULT_THROUGHPUT,
                         ) -> dict[Category, float]:
    """Share of weighted cycles spent in each pipeline category.

    Shares sum to 1 whenever any weighted work exists; an all-zero mix
    yields all-zero shares.
    """
    cycles = category_cycles(mix, cc, table)
    total = sum(cycles.values())
    if total == 0:
        return {cat: 0.0 for cat in cycles}
    return {cat: value / total for cat, value in cycles.items()}
