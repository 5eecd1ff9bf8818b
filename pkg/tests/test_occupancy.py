import pytest

from occmix import (Family, IllegalLaunchError, KernelResources, LaunchInput,
                    Limiter, Mode, builtin_arch, limit_by_registers,
                    limit_by_smem, limit_by_warps, occupancy, suggest,
                    thread_candidates)
from occmix.occupancy import register_warp_limit, warps_per_block

FERMI = builtin_arch(Family.FERMI)
KEPLER = builtin_arch(Family.KEPLER)
MAXWELL = builtin_arch(Family.MAXWELL)
PASCAL = builtin_arch(Family.PASCAL)


def res(regs=0, smem=0):
    return KernelResources(entry_name="k", registers_per_thread=regs,
                           static_shared_mem=smem)


# ---------------------------------------------------------------------------
# warp limit
# ---------------------------------------------------------------------------

def test_limit_by_warps_examples():
    assert limit_by_warps(KEPLER, 256) == 8      # min(16, 64 // 8)
    assert limit_by_warps(FERMI, 192) == 8       # min(8, 48 // 6)
    assert limit_by_warps(MAXWELL, 32) == 32     # min(32, 64)


def test_limit_by_warps_rounds_partial_warps_up():
    assert warps_per_block(KEPLER, 33) == 2
    assert limit_by_warps(KEPLER, 33) == 16


def test_limit_by_warps_range_check():
    with pytest.raises(IllegalLaunchError):
        limit_by_warps(KEPLER, 0)
    with pytest.raises(IllegalLaunchError):
        limit_by_warps(KEPLER, 2048)


# ---------------------------------------------------------------------------
# register limit
# ---------------------------------------------------------------------------

def test_limit_by_registers_corrected():
    # Kepler, 128 threads, 27 regs: 864 -> 1024/warp, 64 warps, 16 blocks.
    assert limit_by_registers(KEPLER, 128, 27) == 16
    # Fermi, 192 threads, 27 regs: 864 -> 896/warp, 36 warps, 6 blocks.
    assert limit_by_registers(FERMI, 192, 27) == 6


def test_limit_by_registers_verbatim_underflows():
    # The published closed form collapses to zero blocks here; pinned so the
    # discrepancy never changes silently.
    assert limit_by_registers(KEPLER, 128, 27, Mode.VERBATIM) == 0


def test_limit_by_registers_cases():
    for arch in (FERMI, KEPLER, MAXWELL, PASCAL):
        over = arch.max_regs_per_thread + 1
        assert limit_by_registers(arch, 128, over) == 0
        assert limit_by_registers(arch, 128, over, Mode.VERBATIM) == 0
        assert limit_by_registers(arch, 128, 0) == arch.max_blocks_per_mp


def test_register_warp_limit_values():
    assert register_warp_limit(KEPLER, 27) == 64    # 65536 // 1024
    assert register_warp_limit(FERMI, 27) == 36     # 32768 // 896
    assert register_warp_limit(FERMI, 30) == 34     # 32768 // 960
    assert register_warp_limit(FERMI, 21) == 46     # 32768 // 704
    assert register_warp_limit(KEPLER, 0) == KEPLER.max_warps_per_mp
    assert register_warp_limit(KEPLER, 256) == 0


# ---------------------------------------------------------------------------
# shared-memory limit
# ---------------------------------------------------------------------------

def test_limit_by_smem_examples():
    assert limit_by_smem(FERMI, 6144) == 8
    assert limit_by_smem(KEPLER, 0) == KEPLER.max_blocks_per_mp
    assert limit_by_smem(KEPLER, 50000) == 0


def test_limit_by_smem_floor_vs_verbatim_ceiling():
    # 49152/6145: floor admits 7 whole blocks; the verbatim ceiling
    # over-counts to 8 (8 x 6145 exceeds the budget).
    assert limit_by_smem(FERMI, 6145) == 7
    assert limit_by_smem(FERMI, 6145, Mode.VERBATIM) == 8


def test_limit_by_smem_clamped_to_block_limit():
    assert limit_by_smem(FERMI, 1) == FERMI.max_blocks_per_mp


# ---------------------------------------------------------------------------
# occupancy
# ---------------------------------------------------------------------------

def test_occupancy_kepler_full():
    r = occupancy(KEPLER, LaunchInput(128, 27))
    assert (r.active_blocks, r.active_warps) == (16, 64)
    assert r.occupancy == 1.0
    assert r.limiter is Limiter.WARPS


def test_occupancy_fermi_register_limited():
    r = occupancy(FERMI, LaunchInput(192, 27))
    assert (r.active_blocks, r.active_warps) == (6, 36)
    assert r.occupancy == 0.75
    assert r.limiter is Limiter.REGISTERS


def test_occupancy_fermi_r30_block_quantized():
    r = occupancy(FERMI, LaunchInput(192, 30))
    assert (r.active_blocks, r.active_warps) == (5, 30)
    assert r.occupancy == 0.625
    r = occupancy(FERMI, LaunchInput(768, 30))
    assert (r.active_blocks, r.active_warps) == (1, 24)


def test_occupancy_smem_limited():
    r = occupancy(FERMI, LaunchInput(192, 0, 12288))
    assert r.limit_smem == 4
    assert r.limiter is Limiter.SHARED_MEMORY
    assert r.active_blocks == 4


def test_occupancy_limiter_tiebreak_prefers_warps():
    r = occupancy(KEPLER, LaunchInput(128))
    assert r.limiter is Limiter.WARPS
    assert r.active_blocks == 16


def test_occupancy_illegal_iff_zero_blocks():
    r = occupancy(KEPLER, LaunchInput(128, KEPLER.max_regs_per_thread + 1))
    assert r.active_blocks == 0
    assert r.occupancy == 0.0
    assert r.limiter is Limiter.ILLEGAL
    r = occupancy(KEPLER, LaunchInput(128, 27, 50000))
    assert r.limiter is Limiter.ILLEGAL


def test_occupancy_illegal_thread_count_raises():
    with pytest.raises(IllegalLaunchError):
        occupancy(KEPLER, LaunchInput(2048))
    with pytest.raises(IllegalLaunchError):
        LaunchInput(0)


def test_occupancy_result_consistency():
    r = occupancy(MAXWELL, LaunchInput(256, 40, 8192))
    assert r.active_blocks == min(r.limit_warps, r.limit_regs, r.limit_smem)
    assert r.active_warps <= MAXWELL.max_warps_per_mp
    assert 0.0 <= r.occupancy <= 1.0


# ---------------------------------------------------------------------------
# thread candidates
# ---------------------------------------------------------------------------

GOLDEN_CANDIDATES = {
    Family.FERMI: (192, 256, 384, 512, 768),
    Family.KEPLER: (128, 256, 512, 1024),
    Family.MAXWELL: (64, 128, 256, 512, 1024),
    Family.PASCAL: (64, 128, 256, 512, 1024),
}


def brute_force_candidates(arch):
    """Independent oracle: try every warp-aligned block size and keep those
    whose block tiling covers every warp slot."""
    out = []
    for threads in range(arch.warp_size, arch.max_threads_per_block + 1,
                         arch.warp_size):
        wpb = -(-threads // arch.warp_size)
        blocks = min(arch.max_blocks_per_mp, arch.max_warps_per_mp // wpb)
        if blocks >= 1 and blocks * wpb == arch.max_warps_per_mp:
            out.append(threads)
    return tuple(out)


@pytest.mark.parametrize("family", list(GOLDEN_CANDIDATES))
def test_thread_candidates_golden(family):
    arch = builtin_arch(family)
    assert thread_candidates(arch) == GOLDEN_CANDIDATES[family]
    assert thread_candidates(arch) == brute_force_candidates(arch)


def test_thread_candidates_are_valid():
    for family in GOLDEN_CANDIDATES:
        arch = builtin_arch(family)
        for t in thread_candidates(arch):
            assert t % arch.warp_size == 0
            assert t <= arch.max_threads_per_block


# ---------------------------------------------------------------------------
# suggest
# ---------------------------------------------------------------------------

def brute_force_best_warps(arch, regs, smem):
    """Independent oracle for the suggestion sweep: enumerate every warp
    count and keep the largest one that fits all three resources at some
    candidate block size."""
    best = 0
    for threads in brute_force_candidates(arch):
        wpb = threads // arch.warp_size
        for warps in range(arch.max_warps_per_mp, 0, -1):
            if warps > limit_by_warps(arch, threads) * wpb:
                continue
            if regs and warps > register_warp_limit(arch, regs):
                continue
            if smem and -(-warps // wpb) > limit_by_smem(arch, smem):
                continue
            best = max(best, warps)
            break
    return best


def test_suggest_kepler_golden():
    s = suggest(KEPLER, res(regs=27))
    assert s.thread_candidates == (128, 256, 512, 1024)
    assert s.headroom_pair == (27, 5)
    assert s.smem_budget == 3072
    assert s.best_occupancy == 1.0
    assert s.best_blocks == 16


def test_suggest_maxwell_golden():
    s = suggest(MAXWELL, res(regs=30))
    assert s.thread_candidates == (64, 128, 256, 512, 1024)
    assert s.headroom_pair == (30, 2)
    assert s.smem_budget == 1536
    assert s.best_occupancy == 1.0


def test_suggest_fermi_register_bound():
    # 36 of 48 warps fit at 27 regs/thread: exactly three quarters.
    s = suggest(FERMI, res(regs=27))
    assert s.thread_candidates == (192, 256, 384, 512, 768)
    assert s.best_occupancy == 0.75
    assert s.best_blocks == 6
    assert s.smem_budget == 8192
    # 34 of 48 warps at 30 regs/thread.
    s = suggest(FERMI, res(regs=30))
    assert s.best_occupancy == pytest.approx(34 / 48)
    assert s.headroom_pair == (30, 0)


def test_suggest_fermi_light_registers():
    # 21 regs/thread allocates 704 regs/warp: 46 of 48 warps fit, leaving
    # headroom for one more register per thread at that warp count.
    s = suggest(FERMI, res(regs=21))
    assert s.best_occupancy == pytest.approx(46 / 48)
    assert s.headroom_pair == (21, 1)
    assert s.smem_budget == 6144
    assert s.best_blocks == 8


def test_suggest_matches_brute_force_oracle():
    for arch in (FERMI, KEPLER, MAXWELL, PASCAL):
        for regs in (0, 16, 21, 27, 30, 32, 48, 63):
            for smem in (0, 4096, 12288, 24576):
                s = suggest(arch, res(regs=regs, smem=smem))
                expected = brute_force_best_warps(arch, regs, smem)
                assert s.best_occupancy == pytest.approx(
                    expected / arch.max_warps_per_mp), (arch.name, regs, smem)


def test_suggest_smem_bound_prefers_larger_blocks():
    # 10000 bytes/block caps residency at 4 blocks; 4 blocks of 12 warps
    # still fill the multiprocessor at 384 threads.
    s = suggest(FERMI, res(smem=10000))
    assert s.best_occupancy == 1.0
    assert s.best_threads == 384
    assert s.best_blocks == 4
    assert s.smem_budget == 12288


def test_suggest_dynamic_smem_added():
    static = suggest(FERMI, res(smem=4096))
    padded = suggest(FERMI, res(smem=4096), dynamic_shared_mem=20480)
    assert padded.best_occupancy <= static.best_occupancy
    assert padded.best_blocks == 2   # 24576 bytes/block -> 2 blocks


def test_suggest_unlaunchable_raises():
    with pytest.raises(IllegalLaunchError):
        suggest(FERMI, res(regs=64))
    with pytest.raises(IllegalLaunchError):
        suggest(FERMI, res(smem=49153))


def test_suggest_occupancy_in_unit_interval():
    for arch in (FERMI, KEPLER, MAXWELL, PASCAL):
        for regs in range(0, arch.max_regs_per_thread + 1, 7):
            s = suggest(arch, res(regs=regs))
            assert 0.0 < s.best_occupancy <= 1.0


def test_suggest_full_occupancy_when_unconstrained():
    # Registers at or below the per-thread budget for full residency keep
    # every candidate at occupancy 1 (granularity permitting).
    for arch in (KEPLER, MAXWELL, PASCAL):
        full_budget = arch.register_file_size // (
            arch.max_warps_per_mp * arch.warp_size)
        granularity_ok = (full_budget * arch.warp_size) % \
            arch.register_alloc_granularity == 0
        s = suggest(arch, res(regs=full_budget))
        if granularity_ok:
            assert s.best_occupancy == 1.0


# ---------------------------------------------------------------------------
# monotonicity spot checks (full property sweep lives in test_properties)
# ---------------------------------------------------------------------------

def test_limits_monotone_spot():
    for r1, r2 in ((0, 10), (10, 30), (30, 63)):
        assert limit_by_registers(FERMI, 192, r1) >= limit_by_registers(FERMI, 192, r2)
    for s1, s2 in ((0, 1000), (1000, 20000), (20000, 49152)):
        assert limit_by_smem(FERMI, s1) >= limit_by_smem(FERMI, s2)
    for t1, t2 in ((32, 64), (64, 512), (512, 1024)):
        assert limit_by_warps(FERMI, t1) >= limit_by_warps(FERMI, t2)
