"""Autotuning parameter grids and static pruning.

The default grid matches the usual loop-tuning dimensions: thread count,
block count, unroll factor, preferred L1 size, compiler flags
(32 x 8 x 5 x 2 x 2 = 5120 variants).  Pruning first intersects the
thread dimension with an architecture's suggested candidates, then
optionally keeps only the upper or lower half of those depending on the
kernel's floating-point/memory intensity (threshold 4.0).
"""

from __future__ import annotations

import enum
import itertools
import math
import re
from dataclasses import dataclass

from .errors import NoCandidatesError, ParseError
from .occupancy import SuggestionReport

INTENSITY_THRESHOLD = 4.0


class PruneRule(str, enum.Enum):
    STATIC_ONLY = "static-only"
    STATIC_PLUS_INTENSITY = "static-plus-intensity"


@dataclass(frozen=True)
class TuningSpace:
    """Cartesian parameter grid for a loop autotuner."""

    thread_counts: tuple[int, ...] = tuple(range(32, 1025, 32))
    block_counts: tuple[int, ...] = tuple(range(24, 193, 24))
    unroll_factors: tuple[int, ...] = tuple(range(1, 6))
    l1_sizes_kb: tuple[int, ...] = (16, 48)
    compiler_flags: tuple[str, ...] = ("", "-use_fast_math")
    extra: tuple[tuple[str, tuple], ...] = ()  # extra named dimensions, in order

    def __post_init__(self):
        for name, values in self._dimensions():
            if not values:
                raise ValueError(f"dimension {name} must be non-empty")
        for tc in self.thread_counts:
            if tc <= 0 or tc % 32 != 0:
                raise ValueError(
                    f"thread count {tc} must be a positive multiple of 32")

    def _dimensions(self) -> list[tuple[str, tuple]]:
        return [
            ("thread_counts", self.thread_counts),
            ("block_counts", self.block_counts),
            ("unroll_factors", self.unroll_factors),
            ("l1_sizes_kb", self.l1_sizes_kb),
            ("compiler_flags", self.compiler_flags),
            *self.extra,
        ]

    def non_thread_size(self) -> int:
        return math.prod(len(v) for name, v in self._dimensions()
                         if name != "thread_counts")

    def with_thread_counts(self, thread_counts: tuple[int, ...]) -> "TuningSpace":
        return TuningSpace(tuple(thread_counts), self.block_counts,
                           self.unroll_factors, self.l1_sizes_kb,
                           self.compiler_flags, self.extra)


def grid_size(space: TuningSpace) -> int:
    """Number of distinct parameter tuples in the grid."""
    return math.prod(len(values) for _, values in space._dimensions())


def enumerate_space(space: TuningSpace):
    """Yield every parameter tuple in lexicographic dimension order."""
    return itertools.product(*(values for _, values in space._dimensions()))


@dataclass(frozen=True)
class PruneReport:
    original_size: int
    pruned_size: int
    kept_thread_counts: tuple[int, ...]
    rule_applied: PruneRule
    intensity: float | None = None
    intensity_source: str = "static"  # prune-time intensity comes from static mixes

    @property
    def reduction(self) -> float:
        return 1.0 - self.pruned_size / self.original_size


def static_prune(space: TuningSpace, suggestion: SuggestionReport) -> PruneReport:
    """Keep only thread counts the architecture's candidate list endorses."""
    kept = tuple(tc for tc in space.thread_counts
                 if tc in suggestion.thread_candidates)
    if not kept:
        raise NoCandidatesError(
            "no suggested thread candidates appear in the tuning space")
    return PruneReport(
        original_size=grid_size(space),
        pruned_size=len(kept) * space.non_thread_size(),
        kept_thread_counts=kept,
        rule_applied=PruneRule.STATIC_ONLY,
    )


def rule_prune(space: TuningSpace, suggestion: SuggestionReport,
               mix_intensity: float) -> PruneReport:
    """Static prune, then keep the intensity-preferred half.

    Compute-heavy kernels (intensity above 4.0) keep the upper half of
    the sorted candidates; memory-leaning kernels keep the lower half.
    The split is a ceiling split, so a single candidate survives intact.
    """
    static = static_prune(space, suggestion)
    kept = sorted(static.kept_thread_counts)
    half = -(-len(kept) // 2)
    kept = kept[-half:] if mix_intensity > INTENSITY_THRESHOLD else kept[:half]
    return PruneReport(
        original_size=static.original_size,
        pruned_size=len(kept) * space.non_thread_size(),
        kept_thread_counts=tuple(kept),
        rule_applied=PruneRule.STATIC_PLUS_INTENSITY,
        intensity=mix_intensity,
    )


# ---------------------------------------------------------------------------
# Tuning-space file format
# ---------------------------------------------------------------------------
#
#   param TC[]  = range(32,1025,32);
#   param PL[]  = [16, 48];
#   param CFLAGS[] = ['', '-use_fast_math'];
#
# Known names map onto the grid dimensions (TC, BC, UIF, PL, CFLAGS);
# any other name becomes an extra dimension appended after CFLAGS.

_PARAM_RE = re.compile(
    r"^param\s+(?P<name>\w+)\s*\[\s*\]\s*=\s*(?P<rhs>.+?)\s*;?\s*$")
_RANGE_RE = re.compile(r"^range\(\s*(-?\d+)\s*,\s*(-?\d+)\s*(?:,\s*(-?\d+)\s*)?\)$")
_KNOWN_PARAMS = {
    "TC": "thread_counts",
    "BC": "block_counts",
    "UIF": "unroll_factors",
    "PL": "l1_sizes_kb",
    "CFLAGS": "compiler_flags",
}


def _parse_value(token: str, lineno: int):
    token = token.strip()
    if (token.startswith("'") and token.endswith("'")) or \
       (token.startswith('"') and token.endswith('"')):
        return token[1:-1]
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"bad value {token!r}", lineno)


def _parse_rhs(rhs: str, lineno: int) -> tuple:
    m = _RANGE_RE.match(rhs)
    if m:
        start, stop = int(m.group(1)), int(m.group(2))
        step = int(m.group(3)) if m.group(3) else 1
        if step == 0:
            raise ParseError("range step must be non-zero", lineno)
        return tuple(range(start, stop, step))
    if rhs.startswith("[") and rhs.endswith("]"):
        inner = rhs[1:-1].strip()
        if not inner:
            return ()
        return tuple(_parse_value(tok, lineno) for tok in inner.split(","))
    raise ParseError(f"expected range(...) or [...], got {rhs!r}", lineno)


def parse_space_file(text: str) -> TuningSpace:
    """Parse a tuning-space spec into a TuningSpace.

    Unnamed dimensions keep their defaults; unknown parameter names are
    carried as extra dimensions.
    """
    named: dict[str, tuple] = {}
    extra: list[tuple[str, tuple]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(("#", "//")):
            continue
        m = _PARAM_RE.match(line)
        if not m:
            raise ParseError(f"expected 'param NAME[] = ...', got {line!r}", lineno)
        values = _parse_rhs(m.group("rhs"), lineno)
        name = m.group("name").upper()
        if name in _KNOWN_PARAMS:
            named[_KNOWN_PARAMS[name]] = values
        else:
            extra.append((name, values))
    try:
        return TuningSpace(extra=tuple(extra), **named)
    except ValueError as exc:
        raise ParseError(str(exc))


def load_space_file(path: str) -> TuningSpace:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_space_file(fh.read())
