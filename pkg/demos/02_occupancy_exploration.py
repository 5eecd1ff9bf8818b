#!/usr/bin/env python3
"""Exploring theoretical occupancy.

Occupancy is active warps over the SM's warp capacity.  Active blocks are
capped by three resources: warp slots, the register file, and shared
memory; whichever gives the fewest blocks is the limiter.  This script
walks each constraint and then maps occupancy over a thread/register
grid.
"""

from occmix import (Family, LaunchInput, Mode, builtin_arch,
                    limit_by_registers, limit_by_smem, limit_by_warps,
                    occupancy)

fermi = builtin_arch(Family.FERMI)
kepler = builtin_arch(Family.KEPLER)

# --- the three limits, one at a time -----------------------------------
# Warp slots: 256 threads = 8 warps/block; Kepler hosts 64 warps, so at
# most 8 such blocks fit (its 16-block cap is not the binding constraint).
print("warp limit, Kepler @256 threads:   ", limit_by_warps(kepler, 256))

# Registers: 27 regs/thread x 32 threads/warp = 864, which the allocator
# rounds up to 1024 (Kepler allocates in 256-register units).  The 64K
# register file then holds 64 warps -> 16 blocks of 4 warps.
print("register limit, Kepler 128t/27r:   ",
      limit_by_registers(kepler, 128, 27))

# Shared memory: 6144-byte blocks pack 8x into Fermi's 48 KB.
print("shared-memory limit, Fermi 6144B:  ", limit_by_smem(fermi, 6144))

# --- putting them together ---------------------------------------------
print()
for threads, regs in ((128, 27), (192, 27), (768, 63)):
    result = occupancy(fermi, LaunchInput(threads, regs))
    print(f"Fermi {threads:>4} threads, {regs} regs: "
          f"blocks={result.active_blocks} warps={result.active_warps:>2} "
          f"occ={result.occupancy:5.3f} limiter={result.limiter.value}")

# --- an occupancy map ----------------------------------------------------
print("\nKepler occupancy by thread count and registers/thread")
reg_points = (16, 32, 48, 64, 96, 128)
print("threads " + "".join(f"  r={r:<4}" for r in reg_points))
for threads in range(128, 1025, 128):
    cells = []
    for regs in reg_points:
        occ = occupancy(kepler, LaunchInput(threads, regs)).occupancy
        cells.append(f"  {occ:5.2f} ")
    print(f"{threads:>6} " + "".join(cells))

# --- corrected vs verbatim ----------------------------------------------
# The verbatim mode evaluates the original closed-form register expression
# exactly as written.  Its inner quotient underflows for any realistic
# register count, reporting zero blocks; it exists as a regression
# reference, not for use.
lit = occupancy(kepler, LaunchInput(128, 27), Mode.VERBATIM)
cor = occupancy(kepler, LaunchInput(128, 27), Mode.CORRECTED)
print(f"\n128 threads, 27 regs on Kepler:")
print(f"  corrected: {cor.active_blocks} blocks, occupancy {cor.occupancy}")
print(f"  verbatim:  {lit.active_blocks} blocks, occupancy {lit.occupancy} "
      f"(limiter: {lit.limiter.value})")
