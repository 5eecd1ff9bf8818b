"""Static analysis of GPU kernels: theoretical occupancy, instruction-mix
cost estimates, and tuning-search-space pruning, computed from captured
compiler artifacts without running any code."""

__version__ = "0.1.0"

from .arch import ArchSpec, Family, builtin_arch, load_arch_file, resolve_arch
from .errors import (ArchSpecError, EmptyInputError, IllegalLaunchError,
                     NoCandidatesError, ParseError, StaticAnalysisError,
                     UnknownArchitectureError, UnsupportedArchitectureError)
from .mix import (Category, InstructionMix, OpClass, ThroughputTable,
                  aggregate, classify, cost_estimate, cpi, intensity,
                  pipeline_utilization)
from .occupancy import (LaunchInput, Limiter, Mode, OccupancyResult,
                        SuggestionReport, limit_by_registers, limit_by_smem,
                        limit_by_warps, occupancy, suggest, thread_candidates)
from .report import KernelAnalysis, analyze_kernel, report_dict, to_json
from .sass import (Instruction, KernelResources, Operand, OperandKind,
                   parse_disassembly, parse_instruction_line,
                   parse_resource_report, render_instruction)
from .tuning import (PruneReport, PruneRule, TuningSpace, enumerate_space,
                     grid_size, load_space_file, parse_space_file, rule_prune,
                     static_prune)

__all__ = [
    "ArchSpec", "Family", "builtin_arch", "load_arch_file", "resolve_arch",
    "ArchSpecError", "EmptyInputError", "IllegalLaunchError",
    "NoCandidatesError", "ParseError", "StaticAnalysisError",
    "UnknownArchitectureError", "UnsupportedArchitectureError",
    "Category", "InstructionMix", "OpClass", "ThroughputTable",
    "aggregate", "classify", "cost_estimate", "cpi", "intensity",
    "pipeline_utilization",
    "LaunchInput", "Limiter", "Mode", "OccupancyResult", "SuggestionReport",
    "limit_by_registers", "limit_by_smem", "limit_by_warps", "occupancy",
    "suggest", "thread_candidates",
    "KernelAnalysis", "analyze_kernel", "report_dict", "to_json",
    "Instruction", "KernelResources", "Operand", "OperandKind",
    "parse_disassembly", "parse_instruction_line", "parse_resource_report",
    "render_instruction",
    "PruneReport", "PruneRule", "TuningSpace", "enumerate_space", "grid_size",
    "load_space_file", "parse_space_file", "rule_prune", "static_prune",
]
