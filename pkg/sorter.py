"""
Pattern-avoiding stack sorting of sock sequences

phi_sigma reads its input left to right. It pushes the next sock whenever the
stack, read top to bottom, would still avoid sigma, and pops otherwise. The
output is the pop order. The consecutive variant only forbids sigma as a
factor at the top of the stack.
"""

from dataclasses import dataclass
from enum import Enum
from itertools import groupby
from typing import Callable, Dict, FrozenSet, List, Optional, Tuple

from loguru import logger

from errors import CapExceededError, PreconditionError, UnsupportedPatternError
from sequences import (
    Sock,
    SockMultiset,
    SockPattern,
    SockSequence,
    contains,
    contains_at_start,
    is_sorted,
    reverse,
    sequences_on,
    standardize,
)

ABA: SockPattern = (0, 1, 0)

# Membership in these classifies sigma for the unsortability witnesses.
# caba standardizes to abcb.
CASE1_PATTERNS: Tuple[SockPattern, ...] = ((0, 1, 1, 0), (0, 1, 2, 0))
CASE2_PATTERNS: Tuple[SockPattern, ...] = ((0, 1, 0, 1), (0, 1, 0, 2), (0, 1, 2, 1))

PUSH = "push"
POP = "pop"


class SigmaClass(str, Enum):
    SORTED = "SORTED"
    ABA_FAMILY = "ABA_FAMILY"
    CASE1 = "CASE1"
    CASE2 = "CASE2"
    UNCLASSIFIED = "UNCLASSIFIED"


class Terminator(str, Enum):
    SORTED = "sorted"
    CYCLE = "cycle"
    MAX_ITERS = "max_iters"


class StackState:
    """Stack cells bottom to top, with per-sock counts kept in step"""

    def __init__(self):
        self.cells: List[Sock] = []
        self.counts: Dict[Sock, int] = {}

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def top(self) -> Optional[Sock]:
        return self.cells[-1] if self.cells else None

    def reading(self) -> SockSequence:
        """Top-to-bottom reading s"""
        return tuple(reversed(self.cells))

    def push(self, x: Sock) -> None:
        self.cells.append(x)
        self.counts[x] = self.counts.get(x, 0) + 1

    def pop(self) -> Sock:
        x = self.cells.pop()
        self.counts[x] -= 1
        if not self.counts[x]:
            del self.counts[x]
        return x


@dataclass(frozen=True)
class SortTrace:
    input: SockSequence
    output: SockSequence
    events: Tuple[Tuple[str, Sock], ...]

    def pushes(self) -> SockSequence:
        return tuple(s for op, s in self.events if op == PUSH)

    def pops(self) -> SockSequence:
        return tuple(s for op, s in self.events if op == POP)


@dataclass(frozen=True)
class Decomposition:
    """p = x^l1 s1 x^l2 s2 ... x^lm sm x^l(m+1)"""

    x: Sock
    exponents: Tuple[int, ...]
    blocks: Tuple[SockSequence, ...]

    @property
    def m(self) -> int:
        return len(self.blocks)

    def reassemble(self) -> SockSequence:
        out: List[Sock] = []
        for l, block in zip(self.exponents, self.blocks):
            out.extend([self.x] * l)
            out.extend(block)
        out.extend([self.x] * self.exponents[-1])
        return tuple(out)


@dataclass(frozen=True)
class Trajectory:
    states: Tuple[SockSequence, ...]
    terminator: Terminator
    period: Optional[int] = None
    cycle_start: Optional[int] = None

    @property
    def passes(self) -> int:
        return len(self.states) - 1

    @property
    def last(self) -> SockSequence:
        return self.states[-1]


def _require_machine_pattern(sigma: SockPattern) -> SockPattern:
    sigma = standardize(sigma)
    if len(sigma) < 2:
        raise UnsupportedPatternError(
            f"pattern {sigma!r} has length {len(sigma)}; stack machines need length >= 2"
        )
    return sigma


def push_creates(stack: StackState, x: Sock, sigma: SockPattern) -> bool:
    """Would pushing x make the top-to-bottom reading contain sigma?"""
    return _push_creates_subsequence(stack, x, _require_machine_pattern(sigma))


def _push_creates_subsequence(stack: StackState, x: Sock, sigma: SockPattern) -> bool:
    # The current reading avoids sigma, so any new occurrence starts at x.
    return contains_at_start((x,) + stack.reading(), sigma)


def _push_creates_factor(stack: StackState, x: Sock, sigma: SockPattern) -> bool:
    k = len(sigma)
    if len(stack) + 1 < k:
        return False
    window = (x,) + tuple(stack.cells[-1 : -k : -1])
    return standardize(window) == sigma


def _run_machine(
    p: SockSequence,
    sigma: SockPattern,
    creates: Callable[[StackState, Sock, SockPattern], bool],
) -> SortTrace:
    stack = StackState()
    events: List[Tuple[str, Sock]] = []
    output: List[Sock] = []
    i = 0
    while len(output) < len(p):
        if i < len(p) and not creates(stack, p[i], sigma):
            stack.push(p[i])
            events.append((PUSH, p[i]))
            i += 1
        else:
            # |sigma| >= 2 makes a push onto an empty stack always legal.
            assert stack.cells, "machine tried to pop an empty stack"
            y = stack.pop()
            output.append(y)
            events.append((POP, y))
    return SortTrace(tuple(p), tuple(output), tuple(events))


def sort_pass(sigma: SockPattern, p: SockSequence) -> Tuple[SockSequence, SortTrace]:
    """phi_sigma(p) with its full push/pop trace"""
    sigma = _require_machine_pattern(sigma)
    trace = _run_machine(tuple(p), sigma, _push_creates_subsequence)
    return trace.output, trace


def sort_pass_consecutive(sigma: SockPattern, p: SockSequence) -> SockSequence:
    sigma = _require_machine_pattern(sigma)
    return _run_machine(tuple(p), sigma, _push_creates_factor).output


def sort_pass_consecutive_trace(sigma: SockPattern, p: SockSequence) -> SortTrace:
    sigma = _require_machine_pattern(sigma)
    return _run_machine(tuple(p), sigma, _push_creates_factor)


class FootSorter:
    """phi_aba with O(1) legality and a reusable scratch stack

    With the stack reading sorted, pushing x is illegal exactly when x is in
    the stack below some other sock, i.e. x is present but not on top.
    """

    def __init__(self):
        self._stack: List[Sock] = []
        self._counts: Dict[Sock, int] = {}

    def __call__(self, p: SockSequence) -> SockSequence:
        stack = self._stack
        counts = self._counts
        stack.clear()
        counts.clear()
        out: List[Sock] = []
        for x in p:
            while counts.get(x) and stack[-1] != x:
                y = stack.pop()
                counts[y] -= 1
                out.append(y)
            stack.append(x)
            counts[x] = counts.get(x, 0) + 1
        out.extend(reversed(stack))
        return tuple(out)

    def depth(self, p: SockSequence, cap: int) -> Optional[int]:
        for k in range(cap + 1):
            if is_sorted(p):
                return k
            if k < cap:
                p = self(p)
        return None


_foot_sorter = FootSorter()


def sort_pass_aba(p: SockSequence) -> SockSequence:
    return _foot_sorter(tuple(p))


def phi(sigma: SockPattern, p: SockSequence) -> SockSequence:
    """phi_sigma(p) without a trace; aba takes the fast path"""
    sigma = _require_machine_pattern(sigma)
    if sigma == ABA:
        return sort_pass_aba(p)
    return _run_machine(tuple(p), sigma, _push_creates_subsequence).output


def iterate(
    sigma: SockPattern,
    p: SockSequence,
    max_iters: int,
    step: Optional[Callable[[SockSequence], SockSequence]] = None,
) -> Trajectory:
    """p, phi(p), phi^2(p), ... up to a sorted iterate, a cycle or max_iters"""
    if max_iters < 0:
        raise PreconditionError(f"max_iters must be non-negative, got {max_iters}")
    sigma = _require_machine_pattern(sigma)
    if step is None:
        step = lambda q: phi(sigma, q)
    p = tuple(p)
    states = [p]
    seen = {p: 0}
    if is_sorted(p):
        return Trajectory(tuple(states), Terminator.SORTED)
    for _ in range(max_iters):
        nxt = step(states[-1])
        if is_sorted(nxt):
            states.append(nxt)
            return Trajectory(tuple(states), Terminator.SORTED)
        if nxt in seen:
            start = seen[nxt]
            return Trajectory(tuple(states), Terminator.CYCLE, len(states) - start, start)
        seen[nxt] = len(states)
        states.append(nxt)
    return Trajectory(tuple(states), Terminator.MAX_ITERS)


def sort_depth(sigma: SockPattern, p: SockSequence, cap: int) -> Optional[int]:
    """Least k <= cap with phi^k(p) sorted, or None (NOT-SORTED)"""
    trajectory = iterate(sigma, p, cap)
    if trajectory.terminator is Terminator.SORTED:
        return trajectory.passes
    return None


def decompose(p: SockSequence) -> Decomposition:
    if not p:
        raise PreconditionError("cannot decompose the empty sequence")
    x = p[0]
    exponents: List[int] = []
    blocks: List[SockSequence] = []
    for is_x, run in groupby(p, key=lambda s: s == x):
        run = tuple(run)
        if is_x:
            exponents.append(len(run))
        else:
            blocks.append(run)
    if len(exponents) == len(blocks):
        exponents.append(0)
    return Decomposition(x, tuple(exponents), tuple(blocks))


def verify_lemma31(p: SockSequence) -> bool:
    """phi_aba(p) == phi_aba(s1) ... phi_aba(sm) x^(l1 + ... + l(m+1))"""
    d = decompose(tuple(p))
    expected: List[Sock] = []
    for block in d.blocks:
        expected.extend(sort_pass_aba(block))
    expected.extend([d.x] * sum(d.exponents))
    return sort_pass_aba(p) == tuple(expected)


def clumped_socks(p: SockSequence) -> FrozenSet[Sock]:
    first: Dict[Sock, int] = {}
    last: Dict[Sock, int] = {}
    count: Dict[Sock, int] = {}
    for i, s in enumerate(p):
        first.setdefault(s, i)
        last[s] = i
        count[s] = count.get(s, 0) + 1
    return frozenset(s for s in count if last[s] - first[s] + 1 == count[s])


def tightness_witness(n: int) -> SockSequence:
    """(a1 ... an)^2"""
    if n < 1:
        raise PreconditionError(f"tightness witness needs n >= 1, got {n}")
    return tuple(range(n)) * 2


def _is_aba_family(sigma: SockPattern) -> bool:
    # a...a b a...a with at least one a on each side
    return (
        len(sigma) >= 3
        and sigma.count(1) == 1
        and max(sigma) == 1
        and sigma[0] == 0
        and sigma[-1] == 0
    )


def classify_sigma(sigma: SockPattern) -> SigmaClass:
    sigma = standardize(sigma)
    if is_sorted(sigma):
        return SigmaClass.SORTED
    if _is_aba_family(sigma):
        return SigmaClass.ABA_FAMILY
    if any(contains(sigma, t) for t in CASE1_PATTERNS):
        return SigmaClass.CASE1
    if any(contains(sigma, t) for t in CASE2_PATTERNS):
        return SigmaClass.CASE2
    logger.warning(f"⚠️ Pattern {sigma} fell outside every witness case")
    return SigmaClass.UNCLASSIFIED


def witness_order(M: SockMultiset) -> List[Tuple[Sock, int]]:
    """Distinct socks with a1 of maximal multiplicity (smallest id on ties)"""
    top = max(count for _, count in M.counts)
    a1 = min(sock for sock, count in M.counts if count == top)
    return [(a1, top)] + [(sock, count) for sock, count in M.counts if sock != a1]


def prop52_witness(sigma: SockPattern, M: SockMultiset) -> SockSequence:
    """Unsorted p in S(M) avoiding sigma and its reverse, hence never sorted"""
    sigma = standardize(sigma)
    kind = classify_sigma(sigma)
    if kind not in (SigmaClass.CASE1, SigmaClass.CASE2):
        raise PreconditionError(
            f"pattern {sigma!r} is {kind.value}; witnesses exist only for CASE1/CASE2 patterns"
        )
    if M.distinct < 2:
        raise PreconditionError("multiset needs at least two distinct socks")
    order = witness_order(M)
    if order[0][1] < 2:
        raise PreconditionError("multiset needs some sock with multiplicity >= 2")
    base: List[Sock] = []
    for sock, count in order:
        base.extend([sock] * count)
    a1_count = order[0][1]
    if kind is SigmaClass.CASE1:
        base[a1_count - 1], base[a1_count] = base[a1_count], base[a1_count - 1]
    else:
        base.append(base.pop(0))
    return tuple(base)


def replay_trace(trace: SortTrace, sigma: SockPattern) -> bool:
    """Re-run a trace, checking spelling and stack avoidance after every event"""
    sigma = standardize(sigma)
    if trace.pushes() != trace.input or trace.pops() != trace.output:
        return False
    stack = StackState()
    for op, sock in trace.events:
        if op == PUSH:
            stack.push(sock)
        else:
            if stack.top != sock:
                return False
            stack.pop()
        if contains(stack.reading(), sigma):
            return False
    return not stack.cells


def transition_map(sigma: SockPattern, M: SockMultiset, cap: int) -> Dict[SockSequence, SockSequence]:
    """p -> phi_sigma(p) over all of S(M)"""
    size = M.arrangement_count(limit=cap)
    if size > cap:
        raise CapExceededError("S(M) too large for a transition map", size, cap)
    return {p: phi(sigma, p) for p in sequences_on(M)}


@dataclass
class WitnessCertificate:
    witness: SockSequence
    avoids_sigma: bool
    avoids_reverse: bool
    period: Optional[int]
    sorted_within: Optional[int]

    @property
    def ok(self) -> bool:
        return self.avoids_sigma and self.avoids_reverse and self.period in (1, 2) and self.sorted_within is None


def certify_prop52(sigma: SockPattern, witness: SockSequence, passes: int = 20) -> WitnessCertificate:
    sigma = standardize(sigma)
    trajectory = iterate(sigma, witness, passes)
    return WitnessCertificate(
        witness=witness,
        avoids_sigma=not contains(witness, sigma),
        avoids_reverse=not contains(witness, standardize(reverse(sigma))),
        period=trajectory.period,
        sorted_within=trajectory.passes if trajectory.terminator is Terminator.SORTED else None,
    )
