import pytest

from errors import ParseError, PartitionError
from sequences import (
    SetPartition,
    SockMultiset,
    avoids,
    bell_number,
    contains,
    contains_at_start,
    distinct_count,
    from_set_partition,
    is_pattern,
    is_sorted,
    multiset_of,
    occurrence_indices,
    parse_multiset,
    parse_pattern,
    parse_sequence,
    rename,
    render,
    render_multiset,
    reverse,
    sequences_on,
    standardize,
    to_set_partition,
)


def seq(text):
    return parse_sequence(text)


def test_standardize():
    assert standardize((2, 0, 2, 1)) == (0, 1, 0, 2)
    assert standardize(seq("cbcbaa")) == seq("ababcc")
    assert standardize(()) == ()
    assert is_pattern(seq("abac"))
    assert not is_pattern(seq("ba"))


def test_parse_letters_and_tokens():
    assert seq("abcab") == (0, 1, 2, 0, 1)
    assert seq("s0,s30,s0") == (0, 30, 0)
    assert seq("s3") == (3,)
    assert seq("") == ()
    assert parse_pattern("cbc") == (0, 1, 0)


def test_render():
    assert render((2, 1, 1, 0, 0)) == "cbbaa"
    assert render((0, 30, 0)) == "s0,s30,s0"
    assert render(()) == ""


def test_parse_error_positions():
    with pytest.raises(ParseError) as e:
        seq("aB!")
    assert e.value.position == 2
    with pytest.raises(ParseError) as e:
        seq("s0,x1")
    assert e.value.position == 4
    assert "position 4" in e.value.message


def test_is_sorted():
    assert is_sorted(seq("aabbc"))
    assert is_sorted(seq("bbaa"))
    assert is_sorted(())
    assert not is_sorted(seq("aba"))
    assert not is_sorted(seq("cbcbaa"))


def test_set_partition_round_trip():
    p = seq("aabacb")
    sp = to_set_partition(p)
    assert sp.render() == "{{1,2,4},{3,6},{5}}"
    assert from_set_partition(sp) == (0, 0, 1, 0, 2, 1)
    assert from_set_partition(to_set_partition(seq("cbcbaa"))) == standardize(seq("cbcbaa"))
    assert SetPartition.of([{3, 6}, {1, 2, 4}, {5}]) == sp


def test_set_partition_validation():
    with pytest.raises(PartitionError, match="overlap"):
        SetPartition(3, (frozenset({1, 2}), frozenset({2, 3})))
    with pytest.raises(PartitionError, match="cover"):
        SetPartition(3, (frozenset({1, 2}),))
    with pytest.raises(PartitionError, match="empty"):
        SetPartition(1, (frozenset({1}), frozenset()))


def test_reverse_and_counts():
    assert reverse(seq("abcab")) == seq("bacba")
    assert distinct_count(seq("abcab")) == 3
    assert distinct_count(()) == 0
    assert occurrence_indices(seq("aba"), 0) == frozenset({1, 3})
    assert occurrence_indices(seq("aba"), 5) == frozenset()


def test_contains():
    assert contains(seq("abcabc"), (0, 1, 0))
    assert contains(seq("abcabc"), (0, 1, 0, 1))
    assert not contains(seq("abba"), (0, 1, 0, 1))
    assert avoids(seq("aabb"), (0, 1, 0))
    assert contains(seq("xyz"), ())
    assert not contains(seq("ab"), (0, 1, 0))
    assert contains(seq("cbc"), (0, 1, 0))


def test_contains_at_start():
    assert contains_at_start(seq("aba"), (0, 1, 0))
    assert contains_at_start(seq("baba"), (0, 1, 0))
    assert not contains_at_start(seq("abb"), (0, 1, 0))
    assert not contains_at_start(seq("cabab"), (0, 1, 0, 1))


def test_containment_matches_brute_force():
    from itertools import combinations

    from enumeration import patterns_of_length

    sigmas = [s for n in (2, 3) for s in patterns_of_length(n)]
    for p in patterns_of_length(6):
        for sigma in sigmas:
            brute = any(standardize(sub) == sigma for sub in combinations(p, len(sigma)))
            assert contains(p, sigma) == brute, (p, sigma)


def test_sequences_on():
    M = parse_multiset("a:2,b:1")
    assert list(sequences_on(M)) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert list(sequences_on(SockMultiset(()))) == [()]
    big = parse_multiset("a:2,b:2,c:1")
    assert len(list(sequences_on(big))) == big.arrangement_count() == 30


def test_arrangement_count_stops_past_limit():
    M = parse_multiset("a:2,b:2,c:1")
    assert M.arrangement_count(limit=30) == 30
    assert M.arrangement_count(limit=5) == 6
    assert parse_multiset("a:3,b:3,c:3").arrangement_count() == 1680
    huge = parse_multiset("a:3000000,b:1,c:2")
    assert huge.arrangement_count(limit=10**6) == 3000001


def test_multisets():
    M = parse_multiset("a:2,b:2")
    assert M.as_dict() == {0: 2, 1: 2}
    assert M.size == 4 and M.distinct == 2
    assert render_multiset(M) == "a:2,b:2"
    assert multiset_of(seq("aba")) == parse_multiset("b:1,a:2")
    with pytest.raises(ParseError):
        parse_multiset("a:0")
    with pytest.raises(ParseError):
        parse_multiset("a2")
    with pytest.raises(ParseError):
        parse_multiset("a:1,a:2")


def test_rename():
    assert rename(seq("aba"), {0: 5, 1: 7}) == (5, 7, 5)
    with pytest.raises(PartitionError):
        rename(seq("ab"), {0: 1, 1: 1})


def test_bell_numbers():
    assert [bell_number(n) for n in range(8)] == [1, 1, 2, 5, 15, 52, 203, 877]
