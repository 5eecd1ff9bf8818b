#!/usr/bin/env python3
"""Launch suggestions and search-space pruning for autotuners.

An exhaustive autotuning run over the default grid compiles and times
5,120 code variants.  Static analysis shrinks that before anything runs:
thread counts that cannot fill the SM's warp slots are dropped, and the
kernel's compute/memory intensity picks the promising half of what
remains.
"""

from occmix import (Family, KernelResources, TuningSpace, builtin_arch,
                    enumerate_space, grid_size, rule_prune, static_prune,
                    suggest)

# --- suggestions across architectures, one kernel footprint per row -----
print("Launch suggestions (registers per thread from the resource report)")
print(f"{'arch':<10} {'regs':>4}  {'thread candidates':<28} "
      f"{'[used : headroom]':<18} {'smem*':>6} {'occ*':>6}")
for family, regs in ((Family.FERMI, 21), (Family.KEPLER, 27),
                     (Family.MAXWELL, 30), (Family.PASCAL, 30)):
    arch = builtin_arch(family)
    kernel = KernelResources("atax", registers_per_thread=regs)
    s = suggest(arch, kernel)
    threads = ", ".join(str(t) for t in s.thread_candidates)
    print(f"{family.value:<10} {regs:>4}  {threads:<28} "
          f"{f'[{s.registers_used} : {s.register_headroom}]':<18} "
          f"{s.smem_budget:>6} {s.best_occupancy:>6.2f}")

# smem* reads: at the suggested block count, each block could grow its
# shared memory to this many bytes before residency drops.

# --- the default tuning grid ---------------------------------------------
space = TuningSpace()
print(f"\ndefault grid: {grid_size(space)} variants "
      f"({len(space.thread_counts)} thread counts x "
      f"{len(space.block_counts)} block counts x "
      f"{len(space.unroll_factors)} unroll factors x "
      f"{len(space.l1_sizes_kb)} L1 prefs x "
      f"{len(space.compiler_flags)} flag sets)")
first = next(iter(enumerate_space(space)))
print(f"first variant in lexicographic order: {first}")

# --- static pruning --------------------------------------------------------
kepler = builtin_arch(Family.KEPLER)
suggestion = suggest(kepler, KernelResources("atax", registers_per_thread=27))
static = static_prune(space, suggestion)
print(f"\nstatic prune on Kepler: {static.original_size} -> "
      f"{static.pruned_size} variants ({static.reduction:.1%} reduction)")
print(f"  kept thread counts: {static.kept_thread_counts}")

# --- the intensity rule ----------------------------------------------------
# Above intensity 4.0 a kernel leans compute-bound and favors the upper
# half of the candidate thread counts; at or below it, the lower half.
for label, kernel_intensity in (("compute-heavy stencil", 12.7),
                                ("memory-leaning solver", 1.8)):
    ruled = rule_prune(space, suggestion, kernel_intensity)
    print(f"\nintensity {kernel_intensity:>5} ({label}): "
          f"{ruled.original_size} -> {ruled.pruned_size} variants "
          f"({ruled.reduction:.2%} reduction)")
    print(f"  kept thread counts: {ruled.kept_thread_counts}")

# An autotuner then walks only the surviving grid:
survivors = static.pruned_size
per_variant_seconds = 3.0  # a typical compile+run trial
print(f"\nat {per_variant_seconds:.0f}s per empirical trial, static pruning "
      f"alone saves about "
      f"{(grid_size(space) - survivors) * per_variant_seconds / 3600:.1f} "
      f"hours per kernel")
