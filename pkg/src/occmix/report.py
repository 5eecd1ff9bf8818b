"""Per-kernel analysis reports and their stable JSON rendering.

Reports are plain nested dicts built in a documented, fixed field order
so that identical inputs produce byte-identical machine-readable output
(no timestamps).  The JSON shape is described by docs/report-schema.json.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import __version__
from .arch import ArchSpec
from .mix import (Category, InstructionMix, OpClass, aggregate,
                  category_cycles, cost_estimate, intensity,
                  per_class_cycles, pipeline_utilization)
from .occupancy import (LaunchInput, Mode, OccupancyResult, SuggestionReport,
                        occupancy, suggest)
from .sass import Instruction, KernelResources
from .tuning import PruneReport, TuningSpace, rule_prune, static_prune

REPORT_FORMAT_VERSION = 1


@dataclass(frozen=True)
class KernelAnalysis:
    """Everything the analyzer derives for one kernel on one architecture."""

    arch: ArchSpec
    mode: Mode
    resources: KernelResources
    mix: InstructionMix
    mix_intensity: float
    cost: float
    suggestion: SuggestionReport
    occupancy_at_best: OccupancyResult
    static_prune: PruneReport
    intensity_prune: PruneReport
    dynamic_shared_mem: int = 0
    scale: float = 1.0


def analyze_kernel(arch: ArchSpec, resources: KernelResources,
                   instructions: list[Instruction],
                   mode: Mode = Mode.CORRECTED,
                   dynamic_shared_mem: int = 0,
                   space: TuningSpace | None = None,
                   scale: float = 1.0,
                   opclass_table: dict[str, OpClass] | None = None,
                   ) -> KernelAnalysis:
    """Run the full static pipeline for one parsed kernel."""
    space = space if space is not None else TuningSpace()
    if opclass_table is None:
        mix = aggregate(instructions)
    else:
        mix = aggregate(instructions, opclass_table)
    kernel_intensity = intensity(mix)
    cc = arch.compute_capability
    suggestion = suggest(arch, resources, mode,
                         dynamic_shared_mem=dynamic_shared_mem)
    launch = LaunchInput(
        threads_per_block=suggestion.best_threads,
        regs_per_thread=resources.registers_per_thread,
        shared_per_block=resources.static_shared_mem + dynamic_shared_mem)
    return KernelAnalysis(
        arch=arch,
        mode=mode,
        resources=resources,
        mix=mix,
        mix_intensity=kernel_intensity,
        cost=cost_estimate(mix, cc, scale),
        suggestion=suggestion,
        occupancy_at_best=occupancy(arch, launch, mode),
        static_prune=static_prune(space, suggestion),
        intensity_prune=rule_prune(space, suggestion, kernel_intensity),
        dynamic_shared_mem=dynamic_shared_mem,
        scale=scale,
    )


def _number(x: float):
    """Render infinities JSON-safely; keep everything else as-is."""
    if x == float("inf"):
        return "inf"
    return x


def resources_dict(res: KernelResources) -> dict:
    return {
        "entry_name": res.entry_name,
        "registers_per_thread": res.registers_per_thread,
        "static_shared_mem": res.static_shared_mem,
        "const_mem_banks": [[bank, size] for bank, size in res.const_mem_banks],
        "spill_loads": res.spill_loads,
        "spill_stores": res.spill_stores,
        "target_cc": res.target_cc,
    }


def mix_dict(mix: InstructionMix) -> dict:
    return {
        "counts": {cls.value: mix.counts[cls]
                   for cls in OpClass if mix.counts.get(cls)},
        "flops": mix.flops,
        "mem": mix.mem,
        "ctrl": mix.ctrl,
        "reg_operands": mix.reg_operands,
        "unclassified": mix.unclassified,
        "total_instructions": mix.total_instructions,
    }


def occupancy_dict(result: OccupancyResult) -> dict:
    return {
        "warps_per_block": result.warps_per_block,
        "limit_warps": result.limit_warps,
        "limit_regs": result.limit_regs,
        "limit_smem": result.limit_smem,
        "active_blocks": result.active_blocks,
        "active_warps": result.active_warps,
        "occupancy": result.occupancy,
        "limiter": result.limiter.value,
        "mode": result.mode.value,
    }


def suggestion_dict(sugg: SuggestionReport) -> dict:
    return {
        "thread_candidates": list(sugg.thread_candidates),
        "registers_used": sugg.registers_used,
        "register_headroom": sugg.register_headroom,
        "smem_budget": sugg.smem_budget,
        "best_occupancy": sugg.best_occupancy,
        "best_threads": sugg.best_threads,
        "best_blocks": sugg.best_blocks,
    }


def prune_dict(report: PruneReport) -> dict:
    out = {
        "rule": report.rule_applied.value,
        "original_size": report.original_size,
        "pruned_size": report.pruned_size,
        "reduction": report.reduction,
        "kept_thread_counts": list(report.kept_thread_counts),
    }
    if report.intensity is not None:
        out["intensity"] = _number(report.intensity)
        out["intensity_source"] = report.intensity_source
    return out


def kernel_dict(analysis: KernelAnalysis) -> dict:
    cc = analysis.arch.compute_capability
    return {
        "name": analysis.resources.entry_name,
        "resources": resources_dict(analysis.resources),
        "dynamic_shared_mem": analysis.dynamic_shared_mem,
        "instruction_mix": mix_dict(analysis.mix),
        "intensity": _number(analysis.mix_intensity),
        "cost": {
            "total": analysis.cost,
            "scale": analysis.scale,
            "per_category": {cat.value: cycles for cat, cycles in
                             category_cycles(analysis.mix, cc).items()},
            "per_class": {cls.value: cycles for cls, cycles in
                          per_class_cycles(analysis.mix, cc).items()},
        },
        "pipeline_utilization": {
            cat.value: share for cat, share in
            pipeline_utilization(analysis.mix, cc).items()
        },
        "occupancy": occupancy_dict(analysis.occupancy_at_best),
        "suggestion": suggestion_dict(analysis.suggestion),
        "prune": {
            "static": prune_dict(analysis.static_prune),
            "intensity_rule": prune_dict(analysis.intensity_prune),
        },
    }


def report_dict(arch: ArchSpec, mode: Mode,
                analyses: list[KernelAnalysis]) -> dict:
    return {
        "tool": "occmix",
        "version": __version__,
        "report_format": REPORT_FORMAT_VERSION,
        "arch": arch.name,
        "compute_capability": arch.compute_capability,
        "mode": mode.value,
        "kernels": [kernel_dict(a) for a in analyses],
    }


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"
