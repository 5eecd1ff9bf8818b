"""Command-line front end.

Verbs: analyze, occupancy, suggest, prune, arch-list.  All diagnostics go
to stderr; machine-readable output is deterministic for fixed inputs.
Exit codes: 0 success, 1 analysis/input error, 2 usage error (argparse),
3 prune fell back to the full thread dimension.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .arch import BUILTIN_ARCHS, ArchSpec, load_arch_file, resolve_arch
from .errors import NoCandidatesError, StaticAnalysisError
from .occupancy import (LaunchInput, Limiter, Mode, OccupancyResult, occupancy,
                        suggest)
from .report import (analyze_kernel, occupancy_dict, prune_dict, report_dict,
                     suggestion_dict, to_json)
from .mix import load_opclass_file
from .sass import KernelResources, parse_disassembly, parse_resource_report
from .tuning import (PruneReport, PruneRule, TuningSpace, grid_size,
                     load_space_file, rule_prune, static_prune)

ARCH_DB_ENV = "OCCMIX_ARCH_DB"

SMEM_HINT = "hint: reducing shared memory per thread could increase occupancy"


def _user_specs(args) -> list[ArchSpec]:
    path = getattr(args, "arch_db", None) or os.environ.get(ARCH_DB_ENV)
    if path:
        return load_arch_file(path)
    return []


def _resolve(args) -> ArchSpec:
    return resolve_arch(args.arch, _user_specs(args))


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _format_occupancy_text(arch: ArchSpec, result: OccupancyResult) -> str:
    lines = [
        f"arch: {arch.name} (cc {arch.compute_capability})",
        f"warps/block: {result.warps_per_block}",
        "block limits: "
        f"warps={result.limit_warps} regs={result.limit_regs} "
        f"smem={result.limit_smem}",
        f"active: {result.active_blocks} blocks, {result.active_warps} warps",
        f"occupancy: {result.occupancy:.4g} (limiter: {result.limiter.value}, "
        f"mode: {result.mode.value})",
    ]
    if result.limiter is Limiter.SHARED_MEMORY:
        lines.append(SMEM_HINT)
    return "\n".join(lines) + "\n"


def _format_suggestion_text(name: str, sugg) -> str:
    threads = ", ".join(str(t) for t in sugg.thread_candidates)
    header = (f"{'kernel':<24} {'threads':<28} {'[regs : headroom]':<18} "
              f"{'smem/block':>10} {'occupancy':>10}")
    row = (f"{name:<24} {threads:<28} "
           f"{f'[{sugg.registers_used} : {sugg.register_headroom}]':<18} "
           f"{sugg.smem_budget:>10} {sugg.best_occupancy:>10.4g}")
    return header + "\n" + row + "\n"


def _format_prune_text(report) -> str:
    kept = ", ".join(str(t) for t in report.kept_thread_counts)
    lines = [
        f"rule: {report.rule_applied.value}",
        f"kept thread counts: {kept}",
        f"search space: {report.original_size} -> {report.pruned_size} "
        f"({report.reduction:.2%} reduction)",
    ]
    if report.intensity is not None:
        lines.append(f"intensity: {report.intensity:.4g} "
                     f"({report.intensity_source})")
    return "\n".join(lines) + "\n"


def cmd_analyze(args) -> int:
    arch = _resolve(args)
    mode = Mode(args.mode)
    resources = parse_resource_report(_read(args.resource_report))
    functions = parse_disassembly(_read(args.disassembly))
    by_name = {name: instrs for name, instrs in functions}
    space = load_space_file(args.space) if args.space else TuningSpace()
    opclasses = load_opclass_file(args.opclass_file) if args.opclass_file else None

    analyses = []
    for res in resources:
        instrs = by_name.get(res.entry_name)
        if instrs is None:
            print(f"warning: no disassembly for kernel {res.entry_name!r}; "
                  f"using an empty instruction stream", file=sys.stderr)
            instrs = []
        analyses.append(analyze_kernel(
            arch, res, instrs, mode,
            dynamic_shared_mem=args.dynamic_smem,
            space=space, scale=args.scale, opclass_table=opclasses))

    if args.format == "json":
        _emit(to_json(report_dict(arch, mode, analyses)), args.out)
        return 0

    chunks = []
    for a in analyses:
        chunks.append(f"== kernel {a.resources.entry_name} ==")
        chunks.append(
            f"registers/thread: {a.resources.registers_per_thread}   "
            f"shared memory/block: "
            f"{a.resources.static_shared_mem + a.dynamic_shared_mem} bytes")
        chunks.append(
            f"instruction mix: flops={a.mix.flops} mem={a.mix.mem} "
            f"ctrl={a.mix.ctrl} reg-operands={a.mix.reg_operands} "
            f"unclassified={a.mix.unclassified}")
        chunks.append(f"intensity: {a.mix_intensity:.4g}   "
                      f"cost estimate: {a.cost:.6g}")
        chunks.append(_format_suggestion_text(
            a.resources.entry_name, a.suggestion).rstrip("\n"))
        chunks.append(_format_occupancy_text(arch, a.occupancy_at_best).rstrip("\n"))
        chunks.append(_format_prune_text(a.static_prune).rstrip("\n"))
        chunks.append(_format_prune_text(a.intensity_prune).rstrip("\n"))
        chunks.append("")
    _emit("\n".join(chunks), args.out)
    return 0


def cmd_occupancy(args) -> int:
    arch = _resolve(args)
    result = occupancy(
        arch,
        LaunchInput(threads_per_block=args.threads,
                    regs_per_thread=args.regs,
                    shared_per_block=args.smem),
        Mode(args.mode))
    if args.format == "json":
        _emit(to_json(occupancy_dict(result)), None)
    else:
        _emit(_format_occupancy_text(arch, result), None)
    return 0


def _resources_from_args(args) -> KernelResources:
    if args.from_report:
        kernels = parse_resource_report(_read(args.from_report))
        if args.kernel:
            for res in kernels:
                if res.entry_name == args.kernel:
                    return res
            raise StaticAnalysisError(
                f"kernel {args.kernel!r} not found in {args.from_report}")
        return kernels[0]
    return KernelResources(entry_name="<cli>", registers_per_thread=args.regs,
                           static_shared_mem=args.smem)


def cmd_suggest(args) -> int:
    arch = _resolve(args)
    res = _resources_from_args(args)
    sugg = suggest(arch, res, Mode(args.mode),
                   dynamic_shared_mem=args.dynamic_smem)
    if args.format == "json":
        _emit(to_json(suggestion_dict(sugg)), None)
    else:
        _emit(_format_suggestion_text(res.entry_name, sugg), None)
    return 0


def cmd_prune(args) -> int:
    arch = _resolve(args)
    res = _resources_from_args(args)
    sugg = suggest(arch, res, Mode(args.mode))
    space = load_space_file(args.space) if args.space else TuningSpace()

    fell_back = False
    try:
        if args.rule == "intensity":
            report = rule_prune(space, sugg, args.intensity)
        else:
            report = static_prune(space, sugg)
    except NoCandidatesError as exc:
        print(f"warning: {exc}; falling back to the full thread dimension",
              file=sys.stderr)
        report = PruneReport(
            original_size=grid_size(space), pruned_size=grid_size(space),
            kept_thread_counts=space.thread_counts,
            rule_applied=PruneRule.STATIC_ONLY)
        fell_back = True

    if args.format == "json":
        _emit(to_json(prune_dict(report)), None)
    else:
        _emit(_format_prune_text(report), None)
    return 3 if fell_back else 0


def cmd_arch_list(args) -> int:
    specs = list(BUILTIN_ARCHS.values())
    names = {s.name for s in specs}
    for user in _user_specs(args):
        if user.name in names:
            specs = [user if s.name == user.name else s for s in specs]
        else:
            specs.append(user)
            names.add(user.name)
    for spec in specs:
        print(f"{spec.name:<16} family={spec.family.value:<8} "
              f"cc={spec.compute_capability:<4} sm={spec.multiprocessors:<3} "
              f"warps/sm={spec.max_warps_per_mp:<3} "
              f"regs/sm={spec.register_file_size}")
    return 0


def _add_common(parser, with_mode=True):
    parser.add_argument("--arch", required=True,
                        help="architecture name or family (see arch-list)")
    parser.add_argument("--arch-db", default=None,
                        help=f"architecture config file "
                             f"(default: ${ARCH_DB_ENV})")
    if with_mode:
        parser.add_argument("--mode", choices=[m.value for m in Mode],
                            default=Mode.CORRECTED.value)
    parser.add_argument("--format", choices=["text", "json"], default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="occmix",
        description="Static occupancy, instruction-mix, and search-space "
                    "analysis for GPU kernels from captured compiler artifacts.")
    parser.add_argument("--version", action="version",
                        version=f"occmix {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze",
                       help="full per-kernel report from a disassembly + "
                            "resource report pair")
    p.add_argument("disassembly", help="disassembly listing file")
    p.add_argument("resource_report", help="captured verbose resource report")
    _add_common(p)
    p.add_argument("--dynamic-smem", type=int, default=0, metavar="BYTES",
                   help="dynamic shared memory added to the static amount")
    p.add_argument("--scale", type=float, default=1.0,
                   help="problem-size multiplier for the cost estimate")
    p.add_argument("--space", default=None,
                   help="tuning-space spec file (default: built-in grid)")
    p.add_argument("--opclass-file", default=None,
                   help="custom opcode classification table")
    p.add_argument("--out", default=None, help="write the report to a file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("occupancy", help="evaluate one launch configuration")
    _add_common(p)
    p.add_argument("--threads", type=int, required=True)
    p.add_argument("--regs", type=int, default=0)
    p.add_argument("--smem", type=int, default=0)
    p.set_defaults(func=cmd_occupancy)

    p = sub.add_parser("suggest",
                       help="suggest launch parameters for best occupancy")
    _add_common(p)
    p.add_argument("--regs", type=int, default=0)
    p.add_argument("--smem", type=int, default=0)
    p.add_argument("--dynamic-smem", type=int, default=0, metavar="BYTES")
    p.add_argument("--from-report", default=None,
                   help="take registers/shared memory from a resource report")
    p.add_argument("--kernel", default=None,
                   help="kernel entry name when the report has several")
    p.set_defaults(func=cmd_suggest)

    p = sub.add_parser("prune", help="prune a tuning space for one kernel")
    _add_common(p)
    p.add_argument("--space", default=None,
                   help="tuning-space spec file (default: built-in grid)")
    p.add_argument("--regs", type=int, default=0)
    p.add_argument("--smem", type=int, default=0)
    p.add_argument("--from-report", default=None)
    p.add_argument("--kernel", default=None)
    p.add_argument("--rule", choices=["static", "intensity"], default="static")
    p.add_argument("--intensity", type=float, default=0.0,
                   help="kernel intensity for --rule intensity")
    p.set_defaults(func=cmd_prune)

    p = sub.add_parser("arch-list", help="list known architectures")
    p.add_argument("--arch-db", default=None)
    p.set_defaults(func=cmd_arch_list)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except StaticAnalysisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
