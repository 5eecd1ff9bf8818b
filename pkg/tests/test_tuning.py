import itertools

import pytest

from occmix import (Family, KernelResources, NoCandidatesError, ParseError,
                    PruneRule, TuningSpace, builtin_arch, enumerate_space,
                    grid_size, parse_space_file, rule_prune, static_prune,
                    suggest)

KEPLER_SUGG = suggest(builtin_arch(Family.KEPLER),
                      KernelResources("k", registers_per_thread=27))
FERMI_SUGG = suggest(builtin_arch(Family.FERMI),
                     KernelResources("k", registers_per_thread=21))


# ---------------------------------------------------------------------------
# grid size / enumeration
# ---------------------------------------------------------------------------

def test_default_grid_size():
    assert grid_size(TuningSpace()) == 32 * 8 * 5 * 2 * 2 == 5120


def test_singleton_grid():
    space = TuningSpace((32,), (24,), (1,), (16,), ("",))
    assert grid_size(space) == 1
    assert list(enumerate_space(space)) == [(32, 24, 1, 16, "")]


def test_reduced_thread_grid():
    space = TuningSpace().with_thread_counts((128, 256, 512, 1024))
    assert grid_size(space) == 640


def test_enumerate_lexicographic():
    stream = enumerate_space(TuningSpace())
    assert next(iter(stream)) == (32, 24, 1, 16, "")


def test_enumerate_count_and_distinct():
    tuples = list(enumerate_space(TuningSpace()))
    assert len(tuples) == 5120
    assert len(set(tuples)) == 5120


def test_enumerate_is_restartable():
    space = TuningSpace()
    assert list(itertools.islice(enumerate_space(space), 3)) == \
        list(itertools.islice(enumerate_space(space), 3))


def test_space_validation():
    with pytest.raises(ValueError):
        TuningSpace(thread_counts=())
    with pytest.raises(ValueError):
        TuningSpace(thread_counts=(48,))
    with pytest.raises(ValueError):
        TuningSpace(thread_counts=(-32,))


# ---------------------------------------------------------------------------
# static prune
# ---------------------------------------------------------------------------

def test_static_prune_kepler():
    report = static_prune(TuningSpace(), KEPLER_SUGG)
    assert report.kept_thread_counts == (128, 256, 512, 1024)
    assert report.pruned_size == 640
    assert report.reduction == 0.875
    assert report.rule_applied is PruneRule.STATIC_ONLY


def test_static_prune_fermi():
    report = static_prune(TuningSpace(), FERMI_SUGG)
    assert report.pruned_size == 800
    assert report.reduction == 0.84375   # 1 - 5/32


def test_static_prune_no_reduction_when_all_kept():
    space = TuningSpace().with_thread_counts(KEPLER_SUGG.thread_candidates)
    report = static_prune(space, KEPLER_SUGG)
    assert report.reduction == 0.0


def test_static_prune_preserves_other_dimensions():
    space = TuningSpace()
    report = static_prune(space, KEPLER_SUGG)
    assert set(report.kept_thread_counts) <= set(space.thread_counts)
    assert report.pruned_size == len(report.kept_thread_counts) * \
        len(space.block_counts) * len(space.unroll_factors) * \
        len(space.l1_sizes_kb) * len(space.compiler_flags)


def test_static_prune_empty_intersection():
    space = TuningSpace(thread_counts=(32, 64, 96))
    with pytest.raises(NoCandidatesError):
        static_prune(space, KEPLER_SUGG)


# ---------------------------------------------------------------------------
# intensity rule
# ---------------------------------------------------------------------------

def test_rule_prune_high_intensity_keeps_upper_half():
    report = rule_prune(TuningSpace(), KEPLER_SUGG, 12.7)
    assert report.kept_thread_counts == (512, 1024)
    assert report.pruned_size == 320
    assert report.reduction == 0.9375
    assert report.rule_applied is PruneRule.STATIC_PLUS_INTENSITY
    assert report.intensity == 12.7
    assert report.intensity_source == "static"


def test_rule_prune_low_intensity_keeps_lower_half():
    report = rule_prune(TuningSpace(), KEPLER_SUGG, 1.8)
    assert report.kept_thread_counts == (128, 256)


def test_rule_prune_threshold_boundary():
    # 4.0 itself is not "above" the threshold.
    report = rule_prune(TuningSpace(), KEPLER_SUGG, 4.0)
    assert report.kept_thread_counts == (128, 256)


def test_rule_prune_ceiling_split():
    report = rule_prune(TuningSpace(), FERMI_SUGG, 10.0)
    # Five candidates keep ceil(5/2) = 3.
    assert report.kept_thread_counts == (384, 512, 768)
    assert len(report.kept_thread_counts) == \
        -(-len(static_prune(TuningSpace(), FERMI_SUGG).kept_thread_counts) // 2)


def test_rule_prune_singleton_survives():
    space = TuningSpace(thread_counts=(128,))
    report = rule_prune(space, KEPLER_SUGG, 99.0)
    assert report.kept_thread_counts == (128,)


def test_rule_prune_subset_of_static():
    static = static_prune(TuningSpace(), FERMI_SUGG)
    ruled = rule_prune(TuningSpace(), FERMI_SUGG, 2.0)
    assert set(ruled.kept_thread_counts) <= set(static.kept_thread_counts)


# ---------------------------------------------------------------------------
# space files
# ---------------------------------------------------------------------------

SPACE_TEXT = """\
# tuning space
param TC[]  = range(32,1025,32);
param BC[]  = range(24,193,24);
param UIF[] = range(1,6);
param PL[]  = [16,48];
param CFLAGS[] = ['', '-use_fast_math'];
"""


def test_parse_space_file_defaults_equivalent():
    assert parse_space_file(SPACE_TEXT) == TuningSpace()


def test_parse_space_file_partial_keeps_defaults():
    space = parse_space_file("param TC[] = [128, 256];\n")
    assert space.thread_counts == (128, 256)
    assert space.block_counts == TuningSpace().block_counts


def test_parse_space_file_extra_dimension():
    space = parse_space_file(SPACE_TEXT + "param SC[] = range(1,6);\n")
    assert space.extra == (("SC", (1, 2, 3, 4, 5)),)
    assert grid_size(space) == 5120 * 5
    first = next(iter(enumerate_space(space)))
    assert first == (32, 24, 1, 16, "", 1)


def test_parse_space_file_errors_carry_line():
    with pytest.raises(ParseError) as exc:
        parse_space_file("param TC[] = [128];\nnot a param line\n")
    assert exc.value.line == 2
    with pytest.raises(ParseError):
        parse_space_file("param TC[] = range(32,129,0);\n")
    with pytest.raises(ParseError):
        parse_space_file("param TC[] = [31];\n")   # not warp-aligned
