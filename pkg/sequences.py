"""
Sock sequences, sock patterns, set partitions and multisets

Socks are non-negative integers; letters a, b, c, ... are only a rendering.
A sock sequence is a plain tuple of socks, so sequences hash, compare and
slice like any other tuple. A sock pattern is a sequence in restricted-growth
form (equal to its own standardization).
"""

import re
from dataclasses import dataclass
from math import comb
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Set, Tuple

from loguru import logger
from sympy import bell
from sympy.utilities.iterables import multiset_permutations

from errors import ParseError, PartitionError

Sock = int
SockSequence = Tuple[Sock, ...]
SockPattern = Tuple[Sock, ...]

LETTERS = "abcdefghijklmnopqrstuvwxyz"
_TOKEN_RE = re.compile(r"s(\d+)")


@dataclass(frozen=True)
class SetPartition:
    """Partition of {1, ..., n} into nonempty blocks of 1-based indices"""

    n: int
    blocks: Tuple[FrozenSet[int], ...]

    def __post_init__(self):
        if self.n < 0:
            raise PartitionError(f"ground set size must be non-negative, got {self.n}")
        seen: Set[int] = set()
        for block in self.blocks:
            if not block:
                raise PartitionError("empty block")
            overlap = seen & block
            if overlap:
                raise PartitionError(f"blocks overlap at {sorted(overlap)}")
            seen |= block
        if seen != set(range(1, self.n + 1)):
            missing = sorted(set(range(1, self.n + 1)) - seen)
            extra = sorted(seen - set(range(1, self.n + 1)))
            raise PartitionError(f"blocks do not cover 1..{self.n} (missing {missing}, outside {extra})")
        ordered = tuple(sorted((frozenset(b) for b in self.blocks), key=min))
        object.__setattr__(self, "blocks", ordered)

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]]) -> "SetPartition":
        frozen = tuple(frozenset(b) for b in blocks)
        return cls(sum(len(b) for b in frozen), frozen)

    def render(self) -> str:
        return "{" + ",".join("{" + ",".join(map(str, sorted(b))) + "}" for b in self.blocks) + "}"


@dataclass(frozen=True)
class SockMultiset:
    """Multiset of socks as sorted (sock, multiplicity) pairs"""

    counts: Tuple[Tuple[Sock, int], ...]

    def __post_init__(self):
        for sock, count in self.counts:
            if sock < 0:
                raise ParseError(f"sock ids must be non-negative, got {sock}")
            if count < 1:
                raise ParseError(f"multiplicity of {render((sock,))} must be positive, got {count}")
        if len({sock for sock, _ in self.counts}) != len(self.counts):
            raise ParseError("repeated sock in multiset")
        object.__setattr__(self, "counts", tuple(sorted(self.counts)))

    @classmethod
    def from_mapping(cls, counts: Mapping[Sock, int]) -> "SockMultiset":
        return cls(tuple(counts.items()))

    def as_dict(self) -> Dict[Sock, int]:
        return dict(self.counts)

    @property
    def size(self) -> int:
        return sum(count for _, count in self.counts)

    @property
    def distinct(self) -> int:
        return len(self.counts)

    def arrangement_count(self, limit: Optional[int] = None) -> int:
        """|S(M)|, the multinomial coefficient

        Built one binomial factor at a time. With a limit, stops as soon as the
        running product exceeds it and returns that partial product, a lower
        bound on |S(M)| that is already over the limit.
        """
        total, placed = 1, 0
        for _, count in self.counts:
            placed += count
            total *= comb(placed, count)
            if limit is not None and total > limit:
                break
        return total


def standardize(p: Iterable[Sock]) -> SockPattern:
    """Rename socks so first occurrences read 0, 1, 2, ... left to right"""
    names: Dict[Sock, Sock] = {}
    return tuple(names.setdefault(s, len(names)) for s in p)


def is_pattern(p: SockSequence) -> bool:
    return tuple(p) == standardize(p)


def rename(p: SockSequence, mapping: Mapping[Sock, Sock]) -> SockSequence:
    """Apply an injective renaming to every sock of p"""
    used = [mapping[s] for s in set(p)]
    if len(set(used)) != len(used):
        raise PartitionError("renaming is not injective on the socks of p")
    return tuple(mapping[s] for s in p)


def reverse(p: SockSequence) -> SockSequence:
    return tuple(reversed(p))


def distinct_count(p: SockSequence) -> int:
    return len(set(p))


def occurrence_indices(p: SockSequence, m: Sock) -> FrozenSet[int]:
    """I(p, m): 1-based positions of m in p"""
    return frozenset(i for i, s in enumerate(p, start=1) if s == m)


def multiset_of(p: SockSequence) -> SockMultiset:
    counts: Dict[Sock, int] = {}
    for s in p:
        counts[s] = counts.get(s, 0) + 1
    return SockMultiset.from_mapping(counts)


def is_sorted(p: SockSequence) -> bool:
    """True iff every sock's occurrences are contiguous"""
    seen: Set[Sock] = set()
    previous = None
    for s in p:
        if s != previous:
            if s in seen:
                return False
            seen.add(s)
            previous = s
    return True


def to_set_partition(p: SockSequence) -> SetPartition:
    blocks: Dict[Sock, Set[int]] = {}
    for i, s in enumerate(p, start=1):
        blocks.setdefault(s, set()).add(i)
    return SetPartition(len(p), tuple(frozenset(b) for b in blocks.values()))


def from_set_partition(sp: SetPartition) -> SockPattern:
    # Blocks are kept sorted by minimum, which is exactly first-occurrence order.
    pattern = [0] * sp.n
    for sock, block in enumerate(sp.blocks):
        for i in block:
            pattern[i - 1] = sock
    return tuple(pattern)


def contains(p: SockSequence, sigma: SockPattern) -> bool:
    """True iff some subsequence of p standardizes to sigma"""
    return _embeds(tuple(p), standardize(sigma), anchored=False)


def avoids(p: SockSequence, sigma: SockPattern) -> bool:
    return not contains(p, sigma)


def contains_at_start(p: SockSequence, sigma: SockPattern) -> bool:
    """Containment restricted to occurrences that use p[0] as their first element"""
    return _embeds(tuple(p), standardize(sigma), anchored=True)


def _embeds(p: SockSequence, sigma: SockPattern, anchored: bool) -> bool:
    m, n = len(sigma), len(p)
    if m == 0:
        return True
    if m > n:
        return False
    assign: Dict[Sock, Sock] = {}
    used: Set[Sock] = set()

    def search(j: int, i: int) -> bool:
        if j == m:
            return True
        if n - i < m - j:
            return False
        want = sigma[j]
        if want in assign:
            # Leftmost match of a fixed sock is never worse than a later one.
            target = assign[want]
            for k in range(i, n - (m - j) + 1):
                if p[k] == target:
                    return search(j + 1, k + 1)
            return False
        last = i + 1 if anchored and j == 0 else n - (m - j) + 1
        tried: Set[Sock] = set()
        for k in range(i, last):
            s = p[k]
            if s in used or s in tried:
                continue
            tried.add(s)
            assign[want] = s
            used.add(s)
            if search(j + 1, k + 1):
                return True
            del assign[want]
            used.discard(s)
        return False

    return search(0, 0)


def sequences_on(M: SockMultiset) -> Iterator[SockSequence]:
    """Every arrangement of M once, in lexicographic order of sock ids"""
    if M.size == 0:
        yield ()
        return
    for arrangement in multiset_permutations(M.as_dict()):
        yield tuple(arrangement)


def bell_number(n: int) -> int:
    return int(bell(n))


def parse_sequence(text: str) -> SockSequence:
    """Parse a letter word (abcab) or comma tokens (s0,s1,s0)"""
    text = text.strip()
    if not text:
        return ()
    if "," in text or _TOKEN_RE.fullmatch(text):
        return _parse_tokens(text)
    socks = []
    for position, ch in enumerate(text, start=1):
        if ch not in LETTERS:
            raise ParseError(f"unexpected character {ch!r}", position)
        socks.append(LETTERS.index(ch))
    return tuple(socks)


def _parse_tokens(text: str) -> SockSequence:
    socks = []
    offset = 0
    for token in text.split(","):
        match = _TOKEN_RE.fullmatch(token)
        if match is None:
            bad = _first_bad_token_char(token)
            raise ParseError(f"malformed token {token!r}", offset + bad)
        socks.append(int(match.group(1)))
        offset += len(token) + 1
    return tuple(socks)


def _first_bad_token_char(token: str) -> int:
    if not token.startswith("s"):
        return 1
    for position, ch in enumerate(token[1:], start=2):
        if not ch.isdigit():
            return position
    return len(token) + 1


def parse_pattern(text: str) -> SockPattern:
    """Parse a sequence and standardize it"""
    return standardize(parse_sequence(text))


def render(p: SockSequence) -> str:
    if all(s < len(LETTERS) for s in p):
        return "".join(LETTERS[s] for s in p)
    return ",".join(f"s{s}" for s in p)


def parse_multiset(text: str) -> SockMultiset:
    """Parse `a:2,b:2` (letters or s<k> tokens before the colon)"""
    counts: Dict[Sock, int] = {}
    offset = 0
    for entry in text.strip().split(","):
        sock_text, sep, count_text = entry.partition(":")
        if not sep or not count_text.isdigit():
            raise ParseError(f"malformed multiset entry {entry!r}", offset + 1)
        sock = parse_sequence(sock_text)
        if len(sock) != 1:
            raise ParseError(f"multiset entry {entry!r} must name exactly one sock", offset + 1)
        if sock[0] in counts:
            raise ParseError(f"sock {sock_text!r} listed twice", offset + 1)
        counts[sock[0]] = int(count_text)
        offset += len(entry) + 1
    logger.debug(f"Parsed multiset {counts}")
    return SockMultiset.from_mapping(counts)


def render_multiset(M: SockMultiset) -> str:
    return ",".join(f"{render((sock,))}:{count}" for sock, count in M.counts)
