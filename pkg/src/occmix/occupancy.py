"""Theoretical occupancy: per-resource block limits and launch suggestions.

Active blocks per multiprocessor are the minimum of three limits (warps,
registers, shared memory); occupancy is active warps over the maximum
warps the multiprocessor supports.

Two evaluation modes exist.  ``CORRECTED`` (default) uses physically
consistent arithmetic: per-warp register allocation rounded up to the
architecture's allocation granularity, and floor division for shared
memory.  ``VERBATIM`` evaluates the originally specified closed forms
exactly as written; the register expression misbehaves for realistic
inputs (it yields zero blocks) and is retained only as a pinned
regression reference.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .arch import ArchSpec
from .errors import IllegalLaunchError
from .sass import KernelResources


class Mode(str, enum.Enum):
    CORRECTED = "corrected"
    VERBATIM = "verbatim"


class Limiter(str, enum.Enum):
    WARPS = "warps"
    REGISTERS = "registers"
    SHARED_MEMORY = "shared-memory"
    ILLEGAL = "illegal"


@dataclass(frozen=True)
class LaunchInput:
    """User launch parameters: threads per block, registers per thread,
    shared memory per block.  Zero registers/shared memory means
    "unspecified" and leaves that resource unconstrained."""

    threads_per_block: int
    regs_per_thread: int = 0
    shared_per_block: int = 0

    def __post_init__(self):
        if self.threads_per_block < 1:
            raise IllegalLaunchError("threads_per_block must be >= 1")
        if self.regs_per_thread < 0 or self.shared_per_block < 0:
            raise IllegalLaunchError("resource amounts must be non-negative")


@dataclass(frozen=True)
class OccupancyResult:
    warps_per_block: int
    limit_warps: int
    limit_regs: int
    limit_smem: int
    active_blocks: int
    active_warps: int
    occupancy: float
    limiter: Limiter
    mode: Mode


@dataclass(frozen=True)
class SuggestionReport:
    """Launch-parameter suggestions for one kernel on one architecture."""

    thread_candidates: tuple[int, ...]
    registers_used: int
    register_headroom: int   # extra registers/thread sustaining best_occupancy
    smem_budget: int         # bytes/block available at the suggested block count
    best_occupancy: float
    best_threads: int        # smallest candidate attaining best_occupancy
    best_blocks: int         # blocks hosting the active warps at best_threads

    @property
    def headroom_pair(self) -> tuple[int, int]:
        return (self.registers_used, self.register_headroom)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _round_up(value: int, granularity: int) -> int:
    return _ceil_div(value, granularity) * granularity


def warps_per_block(arch: ArchSpec, threads: int) -> int:
    return _ceil_div(threads, arch.warp_size)


def _check_threads(arch: ArchSpec, threads: int):
    if not 1 <= threads <= arch.max_threads_per_block:
        raise IllegalLaunchError(
            f"threads_per_block {threads} outside [1, "
            f"{arch.max_threads_per_block}] for {arch.name}")


def limit_by_warps(arch: ArchSpec, threads: int) -> int:
    """Blocks per multiprocessor constrained by the warp-slot budget."""
    _check_threads(arch, threads)
    return min(arch.max_blocks_per_mp,
               arch.max_warps_per_mp // warps_per_block(arch, threads))


def register_warp_limit(arch: ArchSpec, regs_per_thread: int) -> int:
    """Resident warps the register file can hold (corrected arithmetic).

    Registers are allocated per warp, rounded up to the allocation
    granularity; a request beyond the per-thread maximum supports zero
    warps, and an unspecified request (0) leaves the full warp budget.
    """
    if regs_per_thread == 0:
        return arch.max_warps_per_mp
    if regs_per_thread > arch.max_regs_per_thread:
        return 0
    regs_per_warp = _round_up(regs_per_thread * arch.warp_size,
                              arch.register_alloc_granularity)
    return arch.register_file_size // regs_per_warp


def limit_by_registers(arch: ArchSpec, threads: int, regs_per_thread: int,
                       mode: Mode = Mode.CORRECTED) -> int:
    """Blocks per multiprocessor constrained by the register file."""
    _check_threads(arch, threads)
    if regs_per_thread > arch.max_regs_per_thread:
        return 0
    if regs_per_thread == 0:
        return arch.max_blocks_per_mp
    blocks_of_warps = warps_per_block(arch, threads)
    if mode is Mode.VERBATIM:
        # The published closed form, kept verbatim: the inner quotient
        # underflows to zero for any realistic register count.
        regs_available = (arch.register_alloc_granularity
                          // (regs_per_thread * arch.warp_size))
        return (_ceil_div(regs_available, blocks_of_warps)
                * _ceil_div(arch.register_file_size,
                            arch.register_alloc_granularity))
    warps = register_warp_limit(arch, regs_per_thread)
    return min(arch.max_blocks_per_mp, warps // blocks_of_warps)


def limit_by_smem(arch: ArchSpec, shared_per_block: int,
                  mode: Mode = Mode.CORRECTED) -> int:
    """Blocks per multiprocessor constrained by shared memory."""
    if shared_per_block > arch.shared_mem_per_block:
        return 0
    if shared_per_block == 0:
        return arch.max_blocks_per_mp
    # Per-SM shared budget equals the per-block capacity on all four
    # supported generations.
    budget = arch.shared_mem_per_block
    if mode is Mode.VERBATIM:
        return _ceil_div(budget, shared_per_block)
    return min(arch.max_blocks_per_mp, budget // shared_per_block)


def occupancy(arch: ArchSpec, launch: LaunchInput,
              mode: Mode = Mode.CORRECTED) -> OccupancyResult:
    """Evaluate the three limits and fold them into an occupancy figure.

    Ties between limits resolve to warps, then registers, then shared
    memory; a zero limit marks the launch illegal (occupancy 0).
    """
    wpb = warps_per_block(arch, launch.threads_per_block)
    lw = limit_by_warps(arch, launch.threads_per_block)
    lr = limit_by_registers(arch, launch.threads_per_block,
                            launch.regs_per_thread, mode)
    ls = limit_by_smem(arch, launch.shared_per_block, mode)

    blocks = min(lw, lr, ls)
    if blocks == 0:
        limiter = Limiter.ILLEGAL
    elif blocks == lw:
        limiter = Limiter.WARPS
    elif blocks == lr:
        limiter = Limiter.REGISTERS
    else:
        limiter = Limiter.SHARED_MEMORY

    active_warps = min(blocks * wpb, arch.max_warps_per_mp)
    return OccupancyResult(
        warps_per_block=wpb,
        limit_warps=lw, limit_regs=lr, limit_smem=ls,
        active_blocks=blocks,
        active_warps=active_warps,
        occupancy=active_warps / arch.max_warps_per_mp,
        limiter=limiter,
        mode=mode,
    )


def thread_candidates(arch: ArchSpec) -> tuple[int, ...]:
    """Block sizes at which the warp limit alone permits every warp slot.

    Pure warp arithmetic: T qualifies when its blocks tile the
    multiprocessor's warp budget exactly.
    """
    out = []
    for threads in range(arch.warp_size, arch.max_threads_per_block + 1,
                         arch.warp_size):
        wpb = threads // arch.warp_size
        blocks = min(arch.max_blocks_per_mp, arch.max_warps_per_mp // wpb)
        if blocks >= 1 and wpb * blocks == arch.max_warps_per_mp:
            out.append(threads)
    return tuple(out)


def _active_warps_at(arch: ArchSpec, threads: int, regs: int, smem: int,
                     mode: Mode) -> int:
    """Warp-granularity active-warp bound used by the suggestion sweep.

    Warps and shared memory quantize per block; the register file is a
    per-warp resource, so its bound is applied at warp granularity
    rather than rounded down to whole blocks.
    """
    wpb = warps_per_block(arch, threads)
    bound = min(limit_by_warps(arch, threads) * wpb, arch.max_warps_per_mp)
    if mode is Mode.VERBATIM:
        bound = min(bound, limit_by_registers(arch, threads, regs, mode) * wpb)
    else:
        bound = min(bound, register_warp_limit(arch, regs))
    bound = min(bound, limit_by_smem(arch, smem, mode) * wpb)
    return bound


def suggest(arch: ArchSpec, resources: KernelResources,
            mode: Mode = Mode.CORRECTED,
            dynamic_shared_mem: int = 0) -> SuggestionReport:
    """Suggest launch parameters that maximize theoretical occupancy.

    Sweeps the architecture's thread candidates with the kernel's
    register and shared-memory footprint (static plus any declared
    dynamic amount) and reports the best achievable occupancy, the
    register headroom that sustains it, and the shared-memory budget at
    the suggested block count.
    """
    regs = resources.registers_per_thread
    smem = resources.static_shared_mem + dynamic_shared_mem
    if regs > arch.max_regs_per_thread:
        raise IllegalLaunchError(
            f"{regs} registers/thread exceeds the {arch.max_regs_per_thread} "
            f"supported by {arch.name}")
    if smem > arch.shared_mem_per_block:
        raise IllegalLaunchError(
            f"{smem} bytes of shared memory exceeds the "
            f"{arch.shared_mem_per_block}-byte block capacity of {arch.name}")

    candidates = thread_candidates(arch)
    best_threads = candidates[0]
    best_warps = -1
    for threads in candidates:
        warps = _active_warps_at(arch, threads, regs, smem, mode)
        if warps > best_warps:
            best_threads, best_warps = threads, warps

    best_occ = best_warps / arch.max_warps_per_mp
    wpb = warps_per_block(arch, best_threads)
    best_blocks = _ceil_div(best_warps, wpb) if best_warps else 0
    smem_budget = arch.shared_mem_per_block // best_blocks if best_blocks else 0
    if best_warps:
        sustainable = arch.register_file_size // (best_warps * arch.warp_size)
        headroom = max(0, sustainable - regs)
    else:
        headroom = 0
    return SuggestionReport(
        thread_candidates=candidates,
        registers_used=regs,
        register_headroom=headroom,
        smem_budget=smem_budget,
        best_occupancy=best_occ,
        best_threads=best_threads,
        best_blocks=best_blocks,
    )
