#!/usr/bin/env python3
"""Tour of the architecture database.

Every occupancy figure downstream is driven by a handful of per-SM
hardware limits.  This script prints them for the four built-in GPU
generations and shows how to define your own architecture.
"""

from occmix import Family, builtin_arch
from occmix.arch import BUILTIN_ARCHS, parse_arch_config

print("Built-in architectures")
print("=" * 72)
header = f"{'':24}" + "".join(f"{spec.name.split('-')[0]:>12}"
                              for spec in BUILTIN_ARCHS.values())
print(header)

rows = [
    ("compute capability", "compute_capability"),
    ("multiprocessors", "multiprocessors"),
    ("warp size", "warp_size"),
    ("threads / SM", "max_threads_per_mp"),
    ("threads / block", "max_threads_per_block"),
    ("blocks / SM", "max_blocks_per_mp"),
    ("warps / SM", "max_warps_per_mp"),
    ("register file / SM", "register_file_size"),
    ("register alloc unit", "register_alloc_granularity"),
    ("max regs / thread", "max_regs_per_thread"),
    ("shared mem / block", "shared_mem_per_block"),
]
for label, field in rows:
    values = "".join(f"{getattr(spec, field):>12}"
                     for spec in BUILTIN_ARCHS.values())
    print(f"{label:24}{values}")

# The warp budget is consistent by construction: warps/SM x warp size
# always equals threads/SM.  Loading a spec that violates this fails.
print()
for spec in BUILTIN_ARCHS.values():
    assert spec.max_warps_per_mp * spec.warp_size == spec.max_threads_per_mp
print("warp-budget identity holds on every built-in")

# User-defined architectures live in a small INI file; sections shadow
# built-ins of the same name when resolved by the command-line tool.
custom = parse_arch_config("""
[my-lab-gpu]
family = other
compute_capability = 5.2
multiprocessors = 20
warp_size = 32
max_threads_per_mp = 2048
max_threads_per_block = 1024
max_blocks_per_mp = 32
max_warps_per_mp = 64
register_file_size = 65536
register_alloc_granularity = 256
max_regs_per_thread = 255
shared_mem_per_block = 49152
""")
print(f"\nloaded custom spec: {custom[0].name} "
      f"(cc {custom[0].compute_capability}, {custom[0].multiprocessors} SMs)")

kepler = builtin_arch(Family.KEPLER)
print(f"\nbuiltin_arch is pure: {builtin_arch(Family.KEPLER) is kepler}")
