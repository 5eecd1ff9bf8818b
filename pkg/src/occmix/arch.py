"""GPU architecture database.

One :class:`ArchSpec` per GPU generation carries the per-multiprocessor
hardware limits that the occupancy arithmetic consumes, plus a few
informational fields (clocks, core counts, memory sizes) that no formula
reads.  Built-in descriptors cover Fermi (M2050), Kepler (K20),
Maxwell (M40) and Pascal (P100); further architectures can be loaded
from an INI-style config file (see README for the schema).
"""

from __future__ import annotations

import configparser
import enum
import io
from dataclasses import dataclass

from .errors import ArchSpecError, ParseError, UnknownArchitectureError


class Family(str, enum.Enum):
    FERMI = "fermi"
    KEPLER = "kepler"
    MAXWELL = "maxwell"
    PASCAL = "pascal"
    OTHER = "other"


@dataclass(frozen=True)
class ArchSpec:
    """Hardware limits of one GPU generation, per streaming multiprocessor.

    Immutable after construction; safe to share across concurrent analyses.
    """

    name: str
    family: Family
    compute_capability: float
    multiprocessors: int
    warp_size: int
    max_threads_per_mp: int
    max_threads_per_block: int
    max_blocks_per_mp: int
    max_warps_per_mp: int
    register_file_size: int          # 32-bit registers per SM
    register_alloc_granularity: int  # registers; per-warp allocation rounds up to this
    max_regs_per_thread: int
    shared_mem_per_block: int        # bytes; also the shared-memory budget per SM
    # Informational only -- no limit formula reads these.
    cuda_cores_per_mp: int | None = None
    global_mem_mb: int | None = None
    gpu_clock_mhz: int | None = None
    mem_clock_mhz: int | None = None
    l2_cache_mb: float | None = None
    constant_mem_bytes: int | None = None

    def __post_init__(self):
        counts = (
            "multiprocessors", "warp_size", "max_threads_per_mp",
            "max_threads_per_block", "max_blocks_per_mp", "max_warps_per_mp",
            "register_file_size", "register_alloc_granularity",
            "max_regs_per_thread", "shared_mem_per_block",
        )
        for f in counts:
            if getattr(self, f) <= 0:
                raise ArchSpecError(f, "must be strictly positive")
        if self.max_threads_per_block % self.warp_size != 0:
            raise ArchSpecError(
                "max_threads_per_block",
                f"{self.max_threads_per_block} is not a multiple of warp_size "
                f"{self.warp_size}")
        if self.max_warps_per_mp * self.warp_size != self.max_threads_per_mp:
            raise ArchSpecError(
                "max_warps_per_mp",
                f"max_warps_per_mp ({self.max_warps_per_mp}) x warp_size "
                f"({self.warp_size}) must equal max_threads_per_mp "
                f"({self.max_threads_per_mp})")
        if self.max_regs_per_thread > self.register_file_size:
            raise ArchSpecError(
                "max_regs_per_thread",
                "exceeds the register file size")


BUILTIN_ARCHS: dict[Family, ArchSpec] = {
    Family.FERMI: ArchSpec(
        name="fermi-m2050", family=Family.FERMI, compute_capability=2.0,
        multiprocessors=14, warp_size=32,
        max_threads_per_mp=1536, max_threads_per_block=1024,
        max_blocks_per_mp=8, max_warps_per_mp=48,
        register_file_size=32768, register_alloc_granularity=64,
        max_regs_per_thread=63, shared_mem_per_block=49152,
        cuda_cores_per_mp=32, global_mem_mb=3072,
        gpu_clock_mhz=1147, mem_clock_mhz=1546,
        l2_cache_mb=0.786, constant_mem_bytes=65536,
    ),
    Family.KEPLER: ArchSpec(
        name="kepler-k20", family=Family.KEPLER, compute_capability=3.5,
        multiprocessors=13, warp_size=32,
        max_threads_per_mp=2048, max_threads_per_block=1024,
        max_blocks_per_mp=16, max_warps_per_mp=64,
        register_file_size=65536, register_alloc_granularity=256,
        max_regs_per_thread=255, shared_mem_per_block=49152,
        cuda_cores_per_mp=192, global_mem_mb=11520,
        gpu_clock_mhz=824, mem_clock_mhz=2505,
        l2_cache_mb=1.572, constant_mem_bytes=65536,
    ),
    Family.MAXWELL: ArchSpec(
        name="maxwell-m40", family=Family.MAXWELL, compute_capability=5.2,
        multiprocessors=24, warp_size=32,
        max_threads_per_mp=2048, max_threads_per_block=1024,
        max_blocks_per_mp=32, max_warps_per_mp=64,
        register_file_size=65536, register_alloc_granularity=256,
        max_regs_per_thread=255, shared_mem_per_block=49152,
        cuda_cores_per_mp=128, global_mem_mb=12288,
        gpu_clock_mhz=1140, mem_clock_mhz=5000,
        l2_cache_mb=3.146, constant_mem_bytes=65536,
    ),
    Family.PASCAL: ArchSpec(
        name="pascal-p100", family=Family.PASCAL, compute_capability=6.0,
        multiprocessors=56, warp_size=32,
        max_threads_per_mp=2048, max_threads_per_block=1024,
        max_blocks_per_mp=32, max_warps_per_mp=64,
        register_file_size=65536, register_alloc_granularity=256,
        max_regs_per_thread=255, shared_mem_per_block=49152,
        cuda_cores_per_mp=64, global_mem_mb=17066,
        gpu_clock_mhz=405, mem_clock_mhz=715,
        l2_cache_mb=4.194, constant_mem_bytes=65536,
    ),
}


def builtin_arch(family: Family | str) -> ArchSpec:
    """Return the built-in descriptor for one of the four known families."""
    if isinstance(family, str):
        try:
            family = Family(family.lower())
        except ValueError:
            raise UnknownArchitectureError(family, [f.value for f in BUILTIN_ARCHS])
    spec = BUILTIN_ARCHS.get(family)
    if spec is None:
        raise UnknownArchitectureError(
            family.value, [f.value for f in BUILTIN_ARCHS])
    return spec


# Required keys of a config-file section, in ArchSpec field order.
_REQUIRED_KEYS = (
    "family", "compute_capability", "multiprocessors", "warp_size",
    "max_threads_per_mp", "max_threads_per_block", "max_blocks_per_mp",
    "max_warps_per_mp", "register_file_size", "register_alloc_granularity",
    "max_regs_per_thread", "shared_mem_per_block",
)
_INT_OPTIONAL_KEYS = (
    "cuda_cores_per_mp", "global_mem_mb", "gpu_clock_mhz",
    "mem_clock_mhz", "constant_mem_bytes",
)


def _spec_from_section(name: str, section) -> ArchSpec:
    kwargs = {"name": name}
    for key in _REQUIRED_KEYS:
        if key not in section:
            raise ArchSpecError(key, f"missing in section [{name}]")
    try:
        kwargs["family"] = Family(section["family"].lower())
    except ValueError:
        kwargs["family"] = Family.OTHER
    for key in _REQUIRED_KEYS[1:]:
        raw = section[key]
        try:
            kwargs[key] = float(raw) if key == "compute_capability" else int(raw)
        except ValueError:
            raise ArchSpecError(key, f"not a number: {raw!r}")
    for key in _INT_OPTIONAL_KEYS:
        if key in section:
            kwargs[key] = int(section[key])
    if "l2_cache_mb" in section:
        kwargs["l2_cache_mb"] = float(section["l2_cache_mb"])
    return ArchSpec(**kwargs)


def load_arch_file(path: str) -> list[ArchSpec]:
    """Load user architecture descriptors from an INI-style config file.

    One section per architecture, keys named after ArchSpec fields.
    Loading is atomic: any parse error or invariant violation raises and
    nothing is returned.  Specs named like a built-in shadow it when
    resolved through :func:`resolve_arch`.
    """
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_arch_config(text)


def parse_arch_config(text: str) -> list[ArchSpec]:
    parser = configparser.ConfigParser()
    try:
        parser.read_file(io.StringIO(text))
    except configparser.ParsingError as exc:
        line = exc.errors[0][0] if exc.errors else None
        raise ParseError(f"bad config syntax: {exc.message.splitlines()[0]}", line)
    except configparser.Error as exc:
        raise ParseError(f"bad config syntax: {exc}")
    return [_spec_from_section(name, parser[name]) for name in parser.sections()]


def resolve_arch(name: str, user_specs: list[ArchSpec] = ()) -> ArchSpec:
    """Resolve an architecture by name, family alias, or user-defined spec.

    User specs take precedence over built-ins with the same name; family
    names ("kepler") and full names ("kepler-k20") both resolve.
    """
    wanted = name.lower()
    for spec in user_specs:
        if spec.name.lower() == wanted:
            return spec
    for spec in BUILTIN_ARCHS.values():
        if wanted in (spec.name, spec.family.value):
            return spec
    known = sorted({s.name for s in user_specs}
                   | {s.name for s in BUILTIN_ARCHS.values()}
                   | {s.family.value for s in BUILTIN_ARCHS.values()})
    raise UnknownArchitectureError(name, known)
