import time

import pytest

from config import reload_settings
from enumeration import (
    PatternStream,
    count_sortable,
    count_sortable_refined,
    count_table,
    depth_profile,
    extremal_patterns,
    find_periodic,
    never_sorted_witness,
    nonclosure_pairs,
    patterns_of_length,
    witness_patterns,
)
from errors import CapExceededError, PreconditionError
from sequences import bell_number, is_sorted, parse_multiset, parse_sequence, render, standardize
from series import coefficient_polynomials, p_closed_form, pq_closed_form, pq_functional_eq
from sorter import ABA, SigmaClass, certify_prop52, classify_sigma, iterate, prop52_witness


def seq(text):
    return parse_sequence(text)


def test_patterns_of_length_three():
    assert [render(p) for p in patterns_of_length(3)] == ["aaa", "aab", "aba", "abb", "abc"]
    assert list(patterns_of_length(0)) == [()]


def test_pattern_counts_are_bell_numbers():
    for n in range(9):
        patterns = list(patterns_of_length(n))
        assert len(patterns) == bell_number(n) == patterns_of_length(n).count()
        assert len(set(patterns)) == len(patterns)
        assert all(standardize(p) == p for p in patterns)
        assert patterns == sorted(patterns)


def test_prefix_streams_partition_the_space():
    full = list(patterns_of_length(6))
    pieces = [p for prefix in patterns_of_length(3) for p in PatternStream(6, prefix)]
    assert pieces == full
    assert all(p[:2] == (0, 1) for p in PatternStream(5, (0, 1)))
    with pytest.raises(PreconditionError):
        PatternStream(3, (1,))
    with pytest.raises(PreconditionError):
        PatternStream(-1)


def test_small_counts():
    assert [count_sortable(n, 1, threads=1) for n in range(1, 6)] == [1, 2, 5, 15, 50]


def test_refined_counts():
    assert count_sortable_refined(2, 1, threads=1) == {1: 1, 2: 1}
    assert count_sortable_refined(3, 1, threads=1) == {1: 1, 2: 3, 3: 1}
    for n in range(1, 8):
        refined = count_sortable_refined(n, 1, threads=1)
        assert refined[1] == 1
        assert sum(refined.values()) == count_sortable(n, 1, threads=1)


def test_every_pattern_sorts_within_its_length():
    for n in range(1, 8):
        assert count_sortable(n, n, threads=1) == bell_number(n)
    assert count_sortable(4, 0, threads=1) == sum(1 for p in patterns_of_length(4) if is_sorted(p))


def test_counts_match_closed_form():
    counts = p_closed_form(9).integers()
    for n in range(1, 10):
        assert count_sortable(n, 1, threads=1) == counts[n]


def test_refined_counts_match_both_bivariate_expansions():
    closed = coefficient_polynomials(pq_closed_form(10))
    functional = coefficient_polynomials(pq_functional_eq(10))
    assert closed == functional
    for n in range(1, 11):
        refined = count_sortable_refined(n, 1)
        expected = {r: c for r, c in enumerate(closed[n]) if c}
        assert refined == expected, n


@pytest.mark.slow
def test_counts_match_closed_form_to_twelve():
    counts = p_closed_form(12).integers()
    for n in range(10, 13):
        assert count_sortable(n, 1) == counts[n]


def test_counts_do_not_depend_on_splitting(monkeypatch):
    expected = count_sortable_refined(8, 2, threads=1)
    assert count_sortable_refined(8, 2, threads=2) == expected
    monkeypatch.setenv("SOCKSORT_SPLIT_PREFIX", "2")
    reload_settings()
    assert count_sortable_refined(8, 2, threads=3) == expected


def test_count_preconditions():
    with pytest.raises(PreconditionError):
        count_sortable(0, 1)
    with pytest.raises(PreconditionError):
        count_sortable(3, -1)


def test_count_table():
    table = count_table(4, 1, threads=1)
    assert [table.marginal(n) for n in table.lengths()] == [1, 2, 5, 15]
    assert table.row(3) == {1: 1, 2: 3, 3: 1}
    assert all(c <= bell_number(n) for (n, _), c in table.entries.items())


def test_depth_profiles():
    assert depth_profile(2, threads=1).histogram == {0: 2}
    assert depth_profile(3, threads=1).histogram == {0: 4, 1: 1}
    for n in range(1, 8):
        profile = depth_profile(n, threads=1)
        assert profile.mass == bell_number(n)
        assert max(profile.histogram) <= n
    assert depth_profile(6, threads=1).histogram.get(3, 0) >= 1


def test_extremal_patterns():
    assert (0, 1, 2, 0, 1, 2) in extremal_patterns(6)
    assert extremal_patterns(1) == []
    assert extremal_patterns(2) == []


def test_nonclosure_pair():
    pairs = nonclosure_pairs(6)
    assert (seq("abcabc"), standardize(seq("babcabc"))) in pairs
    for p, q in pairs:
        assert len(q) == len(p) + 1


def test_aba_cycles_are_sorted():
    for text in ("a:2,b:2", "a:2,b:1,c:1", "a:3,b:2", "a:2,b:2,c:2"):
        report = find_periodic(ABA, parse_multiset(text))
        assert report.unresolved == 0
        assert report.cycles
        for period, rep in report.cycles:
            assert is_sorted(rep)
            assert period == 2
    assert find_periodic(ABA, parse_multiset("a:3")).cycles == [(1, (0, 0, 0))]
    assert find_periodic(ABA, parse_multiset("a:2,b:2")).cycles == [(2, seq("aabb"))]


def test_periodic_points_of_other_patterns():
    abba = find_periodic(seq("abba"), parse_multiset("a:2,b:2"))
    assert (2, seq("abab")) in abba.cycles
    abab = find_periodic(seq("abab"), parse_multiset("a:2,b:2"))
    assert (1, seq("abba")) in abab.cycles
    assert abab.periods()[0] == 1


def test_reported_periods_are_minimal():
    report = find_periodic(seq("abca"), parse_multiset("a:2,b:2,c:1"))
    for period, rep in report.cycles:
        trajectory = iterate(report.sigma, rep, period + 1)
        assert trajectory.period == period or trajectory.passes < period


def test_periodic_cap():
    with pytest.raises(CapExceededError) as e:
        find_periodic(ABA, parse_multiset("a:2,b:2"), cap=5)
    assert e.value.size == 6


def test_huge_multisets_are_refused_quickly():
    started = time.perf_counter()
    for text in ("a:3000000,b:1", "a:2,b:3000000", "a:1000,b:1000,c:1000"):
        with pytest.raises(CapExceededError):
            find_periodic(seq("abba"), parse_multiset(text))
    assert time.perf_counter() - started < 5


def test_never_sorted_witness():
    assert never_sorted_witness(ABA, 6) is None
    assert never_sorted_witness(seq("ab"), 4) == seq("aba")
    assert never_sorted_witness(seq("aa"), 4) == seq("abab")
    assert never_sorted_witness(seq("abc"), 4) == seq("aba")


def test_witnesses_for_every_small_pattern():
    sigmas = witness_patterns(5)
    assert seq("abba") in sigmas and seq("abab") in sigmas
    assert seq("aaba") not in sigmas
    for sigma in sigmas:
        assert classify_sigma(sigma) in (SigmaClass.CASE1, SigmaClass.CASE2), sigma
        for text in ("a:2,b:2", "a:2,b:1,c:1", "a:3,b:2"):
            M = parse_multiset(text)
            witness = prop52_witness(sigma, M)
            assert sorted(witness) == sorted(w for w, c in M.counts for _ in range(c))
            assert certify_prop52(sigma, witness).ok, (sigma, text)
            report = find_periodic(sigma, M)
            assert any(witness in cycle_members(sigma, rep, period) for period, rep in report.cycles)


def cycle_members(sigma, rep, period):
    states = iterate(sigma, rep, period).states
    return set(states[:period])
