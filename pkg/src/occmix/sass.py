"""Parsers for the two captured compiler artifacts the analyzer consumes.

* the verbose resource report the CUDA compiler writes to stderr
  (``--ptxas-options=-v``), giving per-kernel register and shared-memory
  usage, and
* a plain-text machine-code disassembly listing, one instruction per line:

      /*addr*/  [@pred] OPCODE[.MOD[.MOD...]] operand [, operand ...] ;

  with optional trailing encoding comments, optional dual-issue braces,
  and optional leading scheduling-control brackets.  Directive lines
  (leading dot), labels, blank lines and pure comments are skipped.

Both parsers work on text only; nothing here runs a toolchain.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .errors import EmptyInputError, ParseError


@dataclass(frozen=True)
class KernelResources:
    """Compile-time resource facts for one kernel entry point."""

    entry_name: str
    registers_per_thread: int = 0
    static_shared_mem: int = 0
    const_mem_banks: tuple[tuple[int, int], ...] = ()  # (bank, bytes), informational
    spill_loads: int = 0
    spill_stores: int = 0
    target_cc: float | None = None

    def __post_init__(self):
        if not self.entry_name:
            raise ParseError("kernel entry name must be non-empty")
        if self.registers_per_thread < 0 or self.static_shared_mem < 0:
            raise ParseError("resource counts must be non-negative")


class OperandKind(str, enum.Enum):
    REGISTER = "register"
    PREDICATE_REGISTER = "predicate-register"
    CONSTANT_BANK = "constant-bank"
    IMMEDIATE = "immediate"
    MEMORY = "memory"
    SPECIAL = "special"


_REGISTER_RE = re.compile(r"R\d+(\.\w+)*$")
_PREDICATE_RE = re.compile(r"P\d+$")
_CONST_BANK_RE = re.compile(r"c\[[^]]*\]\[[^]]*\]", re.IGNORECASE)
_EMBEDDED_REG_RE = re.compile(r"\bR\d+\b")


def classify_operand(token: str) -> OperandKind:
    """Tag an operand token by its syntax alone (deterministic rule set).

    Checked in order: plain register, constant bank, bracketed memory,
    predicate register, immediate (leading digit / 0x / minus), special.
    """
    if _REGISTER_RE.match(token):
        return OperandKind.REGISTER
    if _CONST_BANK_RE.match(token):
        return OperandKind.CONSTANT_BANK
    if token.startswith("[") or "[" in token:
        return OperandKind.MEMORY
    if _PREDICATE_RE.match(token):
        return OperandKind.PREDICATE_REGISTER
    if token[:1].isdigit() or token.startswith(("0x", "-", "+")):
        return OperandKind.IMMEDIATE
    return OperandKind.SPECIAL


@dataclass(frozen=True)
class Operand:
    text: str
    kind: OperandKind

    @property
    def register_occurrences(self) -> int:
        """Register names appearing anywhere in the token, including inside
        memory brackets ([R2] counts its R2)."""
        return len(_EMBEDDED_REG_RE.findall(self.text))


@dataclass(frozen=True)
class Instruction:
    """One decoded disassembly instruction."""

    opcode: str
    modifiers: tuple[str, ...] = ()
    operands: tuple[Operand, ...] = ()
    predicate: str | None = None   # guard text, e.g. "@P0" / "@!P1"
    address: int | None = None     # hex offset when present

    def __post_init__(self):
        if not self.opcode or not re.match(r"[A-Z][A-Z0-9]*$", self.opcode):
            raise ParseError(f"bad opcode {self.opcode!r}")

    @property
    def register_operand_count(self) -> int:
        return sum(op.register_occurrences for op in self.operands)

    def normalized(self) -> "Instruction":
        """Drop the address; the canonical form used for round-tripping."""
        if self.address is None:
            return self
        return Instruction(self.opcode, self.modifiers, self.operands,
                           self.predicate, None)


def render_instruction(instr: Instruction) -> str:
    """Serialize back to the canonical single-line form (address omitted)."""
    parts = []
    if instr.predicate:
        parts.append(instr.predicate)
    parts.append(instr.opcode + "".join(instr.modifiers))
    if instr.operands:
        parts.append(", ".join(op.text for op in instr.operands))
    return " ".join(parts) + " ;"


# ---------------------------------------------------------------------------
# Resource report (compiler -v stderr)
# ---------------------------------------------------------------------------

_ENTRY_RE = re.compile(
    r"Compiling entry function\s+'(?P<name>[^']+)'(?:\s+for\s+'sm_(?P<sm>\d+)')?")
_USED_RE = re.compile(r"ptxas\s+info\s*:\s*Used\b(?P<rest>.*)$")
_REGS_CLAUSE_RE = re.compile(r"^\s*(\d+)\s+registers?\s*$")
_BYTES_CLAUSE_RE = re.compile(
    r"^\s*(\d+)\s+bytes\s+(?P<what>smem|lmem|gmem|stack frame|cmem\[(?P<bank>\d+)\])\s*$")
_SPILL_RE = re.compile(r"(\d+)\s+bytes\s+spill\s+(stores|loads)")


def _sm_to_cc(sm: str) -> float:
    value = int(sm)
    return (value // 10) + (value % 10) / 10.0


def parse_resource_report(text: str) -> list[KernelResources]:
    """Parse a captured verbose resource report into per-kernel resources.

    One :class:`KernelResources` per "Compiling entry function" stanza;
    fields absent from the text default to 0.  Raises
    :class:`EmptyInputError` when no stanza is present and
    :class:`ParseError` (with line number) on a malformed "Used" clause.
    """
    kernels: list[KernelResources] = []
    current: dict | None = None

    def flush():
        nonlocal current
        if current is not None:
            kernels.append(KernelResources(
                entry_name=current["name"],
                registers_per_thread=current["regs"],
                static_shared_mem=current["smem"],
                const_mem_banks=tuple(current["cmem"]),
                spill_loads=current["spill_loads"],
                spill_stores=current["spill_stores"],
                target_cc=current["cc"],
            ))
        current = None

    for lineno, line in enumerate(text.splitlines(), start=1):
        entry = _ENTRY_RE.search(line)
        if entry:
            flush()
            current = {
                "name": entry.group("name"), "regs": 0, "smem": 0,
                "cmem": [], "spill_loads": 0, "spill_stores": 0,
                "cc": _sm_to_cc(entry.group("sm")) if entry.group("sm") else None,
            }
            continue
        if current is None:
            continue
        used = _USED_RE.search(line)
        if used:
            for clause in used.group("rest").split(","):
                clause = clause.strip()
                if not clause:
                    continue
                m = _REGS_CLAUSE_RE.match(clause)
                if m:
                    current["regs"] = int(m.group(1))
                    continue
                m = _BYTES_CLAUSE_RE.match(clause)
                if m:
                    what = m.group("what")
                    if what == "smem":
                        current["smem"] = int(m.group(1))
                    elif what.startswith("cmem"):
                        current["cmem"].append((int(m.group("bank")), int(m.group(1))))
                    # lmem/gmem/stack are reported but not modelled
                    continue
                raise ParseError(f"malformed resource clause {clause!r}", lineno)
            continue
        for amount, kind in _SPILL_RE.findall(line):
            if kind == "loads":
                current["spill_loads"] = int(amount)
            else:
                current["spill_stores"] = int(amount)
    flush()

    if not kernels:
        raise EmptyInputError("no kernel resource stanzas found")
    return kernels


# ---------------------------------------------------------------------------
# Disassembly listing
# ---------------------------------------------------------------------------

_FUNC_HEADER_RES = (
    re.compile(r"^\s*Function\s*:\s*(\S+)\s*$"),
    re.compile(r"^\s*\.section\s+\.text\.([^,\s]+)"),
)
_LABEL_RE = re.compile(r"^\s*([A-Za-z_$][\w$.@]*)\s*:\s*$")
_ADDR_RE = re.compile(r"^\s*/\*\s*([0-9a-fA-F]+)\s*\*/")
_TRAILING_COMMENT_RE = re.compile(r"/\*.*?\*/\s*$")
_CTRL_BRACKET_RE = re.compile(r"^\s*\[[-\w:]+\]")
_PREDICATE_TOKEN_RE = re.compile(r"^@!?P\w+$|^@!?PT$")
_OPCODE_RE = re.compile(r"^([A-Z][A-Z0-9]*)((?:\.[^\s.]+)*)$")


def _split_operands(text: str) -> list[str]:
    return [tok.strip() for tok in text.split(",") if tok.strip()]


def parse_instruction_line(line: str, lineno: int | None = None) -> Instruction | None:
    """Parse one line; return None for skippable lines.

    Raises :class:`ParseError` when the line carries an opcode but no
    terminating semicolon.
    """
    line = _CTRL_BRACKET_RE.sub("", line, count=1)  # scheduling-control prefix

    address = None
    m = _ADDR_RE.match(line)
    if m:
        address = int(m.group(1), 16)
        line = line[m.end():]

    # Trailing encoding comments, e.g. /* 0x... */, possibly several.
    prev = None
    while prev != line:
        prev = line
        line = _TRAILING_COMMENT_RE.sub("", line).rstrip()

    line = line.strip().strip("{}").strip()      # dual-issue braces
    if not line or line.startswith((".", "//")):
        return None
    if line.startswith("/*"):                    # comment-only remainder
        return None
    if _LABEL_RE.match(line):
        return None

    predicate = None
    body = line
    first, _, rest = body.partition(" ")
    if _PREDICATE_TOKEN_RE.match(first):
        predicate = first
        body = rest.strip()
        if not body:
            raise ParseError("predicate guard with no instruction", lineno)

    opcode_token = body.split(None, 1)[0].rstrip(";")
    if not _OPCODE_RE.match(opcode_token):
        return None                              # not instruction-shaped: skip
    if not body.rstrip().endswith(";"):
        raise ParseError(f"instruction {opcode_token!r} missing terminating ';'",
                         lineno)

    body = body.rstrip()[:-1].strip()            # drop the semicolon
    head, _, operand_text = body.partition(" ")
    m = _OPCODE_RE.match(head)
    opcode = m.group(1)
    modifiers = tuple(f".{part}" for part in m.group(2).split(".") if part)
    operands = tuple(
        Operand(tok, classify_operand(tok)) for tok in _split_operands(operand_text))
    return Instruction(opcode=opcode, modifiers=modifiers, operands=operands,
                       predicate=predicate, address=address)


def _function_header_name(line: str) -> str | None:
    for pattern in _FUNC_HEADER_RES:
        m = pattern.match(line)
        if m:
            return m.group(1)
    m = _LABEL_RE.match(line)
    return m.group(1) if m else None


def parse_disassembly(text: str) -> list[tuple[str, list[Instruction]]]:
    """Parse a disassembly listing into (kernel name, instructions) pairs.

    Instructions appear in file order.  Raises :class:`EmptyInputError`
    when the text names no function at all, and :class:`ParseError` for
    instruction lines outside any function or missing their semicolon.
    """
    lines = text.splitlines()
    if not any(_function_header_name(ln) for ln in lines):
        raise EmptyInputError("no functions found")

    functions: list[tuple[str, list[Instruction]]] = []
    current_name: str | None = None
    current_instrs: list[Instruction] = []

    def start(name: str):
        nonlocal current_name, current_instrs
        if current_name is not None:
            functions.append((current_name, current_instrs))
        current_name, current_instrs = name, []

    for lineno, raw in enumerate(lines, start=1):
        header = _function_header_name(raw)
        if header is not None:
            if header != current_name:
                start(header)
            continue

        instr = parse_instruction_line(raw, lineno)
        if instr is None:
            continue
        if current_name is None:
            raise ParseError("instruction before any function header", lineno)
        current_instrs.append(instr)

    if current_name is not None:
        functions.append((current_name, current_instrs))
    if not functions:
        raise EmptyInputError("no functions found")
    return functions
