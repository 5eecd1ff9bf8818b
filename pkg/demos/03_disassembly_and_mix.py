#!/usr/bin/env python3
"""From captured compiler artifacts to an instruction-mix profile.

The analyzer consumes two text files captured at build time: the
compiler's verbose resource report and a machine-code disassembly
listing.  Neither requires a GPU to produce or to analyze.  Sample
artifacts for a small transpose/multiply kernel ship with the test
suite and are reused here.
"""

from pathlib import Path

from occmix import (aggregate, classify, cost_estimate, intensity,
                    parse_disassembly, parse_resource_report,
                    pipeline_utilization)
from occmix.mix import category_cycles

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"

# --- resource report ------------------------------------------------------
report_text = (DATA / "atax_kepler.ptxas.txt").read_text()
resources, = parse_resource_report(report_text)
print(f"kernel {resources.entry_name}")
print(f"  registers/thread:   {resources.registers_per_thread}")
print(f"  static shared mem:  {resources.static_shared_mem} bytes")
print(f"  constant banks:     {resources.const_mem_banks}")
print(f"  compiled for cc:    {resources.target_cc}")

# --- disassembly ----------------------------------------------------------
listing = (DATA / "atax_kepler.sass.txt").read_text()
(name, instructions), = parse_disassembly(listing)
print(f"\n{len(instructions)} instructions in {name}; first five decoded:")
for instr in instructions[:5]:
    operands = ", ".join(f"{op.text}<{op.kind.value}>" for op in instr.operands)
    print(f"  {instr.opcode:<8} {operands}")

# --- classification and the mix -------------------------------------------
print("\nper-class counts:")
mix = aggregate(instructions)
for cls, count in sorted(mix.counts.items(), key=lambda kv: -kv[1]):
    print(f"  {cls.value:<12} {count}")
print(f"category totals: flops={mix.flops} mem={mix.mem} ctrl={mix.ctrl} "
      f"register-operands={mix.reg_operands}")

# Intensity is the flops:memory ratio; 4.0 is the pruning threshold used
# later, so this kernel counts as memory-leaning.
print(f"intensity: {intensity(mix):.2f}")

# --- the weighted-cycle cost ----------------------------------------------
# Each category is weighted by cycles-per-instruction on the target
# generation; the total ranks code variants without running them.
cc = resources.target_cc
print(f"\nweighted cycles on cc {cc}:")
for category, cycles in category_cycles(mix, cc).items():
    print(f"  {category.value:<6} {cycles:8.4f}")
print(f"cost estimate (scale 1): {cost_estimate(mix, cc):.4f}")
print(f"cost estimate (scale 512, e.g. problem size): "
      f"{cost_estimate(mix, cc, scale=512):.1f}")

shares = pipeline_utilization(mix, cc)
print("\npipeline utilization:",
      "  ".join(f"{cat.value}={share:.1%}" for cat, share in shares.items()))

# Register traffic dominates this kernel's weighted cycles: a hint that
# larger blocks (more registers per block) are where tuning should look.
sample = instructions[18]
print(f"\nspot check: {sample.opcode} classifies as "
      f"{classify(sample).value}")
