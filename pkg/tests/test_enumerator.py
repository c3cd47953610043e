import itertools
from math import factorial

import numpy as np
import pytest

from bruhatkit.enumerator import (
    CacheFormatError,
    SplitMix64,
    VerifyReport,
    _word_raises_length_by_one,
    build_order_cache,
    load_cache,
    save_cache,
    scan_max_gap,
    verify_coatom_maximizers,
    verify_floor_inequality,
    verify_gap_maximizers,
    verify_max_coatom_count,
    verify_max_gap,
    verify_maximizer_top_form,
    verify_partition_agreement,
)
from bruhatkit.extremal import theorem_a_value
from bruhatkit.graphs import check_components_equal
from bruhatkit.order import Interval, bruhat_leq, is_cover
from bruhatkit.perm import Permutation, enumerate_sn, identity, parse_permutation, rank

# independently recounted by a double loop over the prefix criterion
INTERVAL_COUNTS = {2: 3, 3: 19, 4: 213, 5: 3781}


def p(text: str):
    return parse_permutation(text)


def test_build_rejects_out_of_range():
    with pytest.raises(ValueError):
        build_order_cache(1)
    with pytest.raises(ValueError):
        build_order_cache(9)
    with pytest.raises(ValueError, match="allow_large"):
        build_order_cache(8)


def test_cache_s3_facts(cache3):
    assert cache3.leq_perms(p("123"), p("321"))
    assert not cache3.leq_perms(p("213"), p("132"))
    assert not cache3.leq_perms(p("132"), p("213"))


def test_identity_row_is_all_ones(cache4):
    row = int(rank(identity(4)))
    assert row == 0
    bits = int.from_bytes(cache4.up_matrix[row].tobytes(), "little")
    assert bits == (1 << factorial(4)) - 1


def test_cache_agrees_with_prefix_criterion_on_s4(cache4):
    perms = list(enumerate_sn(4))
    for u in perms:
        for v in perms:
            assert cache4.leq_perms(u, v) == bruhat_leq(u, v)


def test_cover_table_matches_is_cover(cache4):
    perms = list(enumerate_sn(4))
    for r, u in enumerate(perms):
        expected = sorted(
            rank(w) for w in perms if is_cover(u, w)
        )
        assert cache4.upper_covers(r) == expected


def test_word_swap_cover_criterion_matches_length_check():
    for word in itertools.permutations(range(1, 6)):
        u = Permutation(word)
        for a in range(4):
            for b in range(a + 1, 5):
                swapped = list(word)
                swapped[a], swapped[b] = swapped[b], swapped[a]
                w = Permutation(tuple(swapped))
                assert _word_raises_length_by_one(word, a, b) == is_cover(u, w)


def test_scan_s2(cache3):
    cache2 = build_order_cache(2)
    result = scan_max_gap(2, cache2)
    assert result.max_gap == 0
    assert result.intervals_scanned == INTERVAL_COUNTS[2]
    assert result.histogram == {0: 3}


def test_scan_s4_golden(cache4):
    result = scan_max_gap(4, cache4)
    assert result.max_gap == 1
    witnesses = [(str(u), str(v)) for u, v in result.maximizing_intervals]
    assert witnesses == [
        ("1234", "3412"),
        ("1234", "4231"),
        ("1243", "4231"),
        ("2134", "4231"),
    ]
    assert result.intervals_scanned == INTERVAL_COUNTS[4]
    assert result.histogram[1] == 4


def test_scan_s5(cache5):
    result = scan_max_gap(5, cache5)
    assert result.max_gap == 2 == theorem_a_value(5)
    assert result.intervals_scanned == INTERVAL_COUNTS[5]
    # every witness satisfies the count characterization
    for u, v in result.maximizing_intervals:
        interval = Interval(u, v)
        from bruhatkit.order import atom_count, coatom_count

        assert coatom_count(interval) == 6
        assert atom_count(interval) == 4


@pytest.mark.parametrize("n", [3, 4, 5])
def test_scan_interval_totals(n, request):
    cache = request.getfixturevalue(f"cache{n}")
    result = scan_max_gap(n, cache)
    assert sum(result.histogram.values()) == INTERVAL_COUNTS[n]
    assert result.intervals_scanned == INTERVAL_COUNTS[n]


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_histogram_max_is_the_gap_value(n, request):
    cache = request.getfixturevalue(f"cache{n}")
    result = scan_max_gap(n, cache)
    assert max(result.histogram) == theorem_a_value(n)
    assert result.histogram[theorem_a_value(n)] >= 1


def test_scan_determinism_across_jobs(cache5):
    results = [scan_max_gap(5, cache5, jobs=w) for w in (1, 2, 3, 8)]
    for r in results[1:]:
        assert r == results[0]


def test_scan_twice_identical(cache4):
    assert scan_max_gap(4, cache4) == scan_max_gap(4, cache4)


def test_scan_cache_mismatch(cache5):
    with pytest.raises(ValueError, match="cache mismatch"):
        scan_max_gap(4, cache5)


def test_verify_max_gap(cache3, cache4):
    assert verify_max_gap(3, cache3).passed
    report = verify_max_gap(4, cache4)
    assert report.passed
    assert report.expected == 1
    assert report.actual == 1
    assert report.details["witnesses"] == 4


def test_verify_gap_maximizers(cache4, cache5):
    assert verify_gap_maximizers(4, cache4).passed
    assert verify_gap_maximizers(5, cache5).passed
    with pytest.raises(ValueError, match="n >= 4"):
        verify_gap_maximizers(3, build_order_cache(3))


def test_verify_max_coatom_count(cache4, cache5):
    r4 = verify_max_coatom_count(4, cache4)
    assert r4.passed and r4.actual == 4
    r5 = verify_max_coatom_count(5, cache5)
    assert r5.passed and r5.actual == 6


def test_verify_coatom_maximizers(cache4, cache5):
    r4 = verify_coatom_maximizers(4, cache4)
    assert r4.passed
    assert r4.details["maximizers"] == ["3412", "4231"]
    assert r4.actual == 2
    r5 = verify_coatom_maximizers(5, cache5)
    assert r5.passed and r5.actual == 5


def test_verify_partition_agreement_exhaustive(cache4):
    report = verify_partition_agreement(4, cache4, mode="exhaustive")
    assert report.passed
    assert report.details["intervals_checked"] == INTERVAL_COUNTS[4]


def test_verify_partition_agreement_sample(cache5):
    report = verify_partition_agreement(5, cache5, mode="sample", count=500, seed=7)
    assert report.passed
    assert report.details == {
        "mode": "sample",
        "intervals_checked": 500,
        "seed": 7,
        "count": 500,
    }
    again = verify_partition_agreement(5, cache5, mode="sample", count=500, seed=7)
    assert again == report


def test_verify_partition_agreement_limits(cache6):
    with pytest.raises(ValueError, match="n <= 5"):
        verify_partition_agreement(6, cache6, mode="exhaustive")
    with pytest.raises(ValueError, match="mode"):
        verify_partition_agreement(6, cache6, mode="everything")


def test_fast_partition_check_matches_module_level(cache4):
    # the rank-space twin must agree with the Permutation-level check
    from bruhatkit.enumerator import _component_partitions_agree
    from bruhatkit.perm import all_transpositions

    mul = cache4.mul_ranks()
    lengths = cache4.lengths.tolist()
    upset = cache4.upset_bigints()
    pairs = [(t.a, t.b) for t in all_transpositions(4)]
    perms = list(enumerate_sn(4))
    for ru, u in enumerate(perms):
        for rv, v in enumerate(perms):
            if not cache4.leq_ranks(ru, rv):
                continue
            fast = _component_partitions_agree(
                cache4, ru, rv, mul, lengths, upset, pairs
            )
            assert fast == check_components_equal(Interval(u, v))
            assert fast  # the statement itself


def test_verify_maximizer_top_form(cache4):
    report = verify_maximizer_top_form(4, cache4)
    assert report.passed
    assert report.details["tops"] == ["3412", "4231"]
    with pytest.raises(ValueError, match="n >= 4"):
        verify_maximizer_top_form(3, build_order_cache(3))


def test_verify_floor_inequality():
    report = verify_floor_inequality(k_max=50)
    assert report.passed
    assert report.details["pairs_checked"] == 49 * 49
    with pytest.raises(ValueError):
        verify_floor_inequality(k_max=1)


def test_verify_report_payload():
    report = VerifyReport(
        check="a",
        n=4,
        passed=False,
        expected=1,
        actual=2,
        counterexample="[x, y]",
        details={"witnesses": 3},
    )
    payload = report.as_payload()
    assert payload["check"] == "a"
    assert payload["counterexample"] == "[x, y]"
    assert payload["witnesses"] == 3


def test_splitmix64_reference_vector():
    # published sequence for seed 0
    g = SplitMix64(0)
    assert [g.next_u64() for _ in range(3)] == [
        0xE220A8397B1DCDAF,
        0x6E789E6AA1B965F4,
        0x06C45D188009454F,
    ]


def test_splitmix64_below_is_uniformly_bounded():
    g = SplitMix64(12345)
    draws = [g.below(7) for _ in range(1000)]
    assert set(draws) <= set(range(7))
    assert len(set(draws)) == 7


def test_save_load_round_trip(tmp_path, cache5):
    path = tmp_path / "s5.bruhatcache"
    save_cache(cache5, path)
    loaded = load_cache(path, expect_n=5)
    assert loaded.n == 5
    assert np.array_equal(loaded.up_matrix, cache5.up_matrix)
    assert np.array_equal(loaded.ucov_flat, cache5.ucov_flat)
    assert np.array_equal(loaded.ucov_off, cache5.ucov_off)
    assert np.array_equal(loaded.lengths, cache5.lengths)
    # saving the loaded cache reproduces the file bit for bit
    again = tmp_path / "again.bruhatcache"
    save_cache(loaded, again)
    assert path.read_bytes() == again.read_bytes()


def test_load_rejects_truncation(tmp_path, cache4):
    path = tmp_path / "s4.bruhatcache"
    save_cache(cache4, path)
    blob = path.read_bytes()
    clipped = tmp_path / "clipped.bruhatcache"
    clipped.write_bytes(blob[:-17])
    with pytest.raises(CacheFormatError, match="checksum"):
        load_cache(clipped)


def test_load_rejects_bitflip(tmp_path, cache4):
    path = tmp_path / "s4.bruhatcache"
    save_cache(cache4, path)
    blob = bytearray(path.read_bytes())
    blob[len(blob) // 2] ^= 0x40
    flipped = tmp_path / "flipped.bruhatcache"
    flipped.write_bytes(bytes(blob))
    with pytest.raises(CacheFormatError, match="checksum"):
        load_cache(flipped)


def test_load_rejects_wrong_degree(tmp_path, cache4):
    path = tmp_path / "s4.bruhatcache"
    save_cache(cache4, path)
    with pytest.raises(CacheFormatError, match="degree mismatch"):
        load_cache(path, expect_n=5)


def test_load_rejects_bad_magic(tmp_path, cache4):
    path = tmp_path / "s4.bruhatcache"
    save_cache(cache4, path)
    blob = path.read_bytes()
    bad = tmp_path / "bad.bruhatcache"
    bad.write_bytes(b"NOPE" + blob[4:])
    with pytest.raises(CacheFormatError, match="magic"):
        load_cache(bad)


def test_load_rejects_unknown_version(tmp_path, cache4):
    path = tmp_path / "s4.bruhatcache"
    save_cache(cache4, path)
    blob = bytearray(path.read_bytes())
    blob[4:6] = (99).to_bytes(2, "little")
    bad = tmp_path / "vers.bruhatcache"
    bad.write_bytes(bytes(blob))
    with pytest.raises(CacheFormatError, match="version"):
        load_cache(bad)


def test_loaded_cache_is_fully_usable(tmp_path, cache4):
    path = tmp_path / "s4.bruhatcache"
    save_cache(cache4, path)
    loaded = load_cache(path)
    assert scan_max_gap(4, loaded) == scan_max_gap(4, cache4)
