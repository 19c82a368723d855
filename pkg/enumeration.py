"""
Exhaustive sweeps over sock patterns

Patterns of length n are restricted-growth strings, generated in
lexicographic order. Counting splits the space by RGS prefix and runs the
subtrees on a process pool; subtree results are added, so every split gives
the same totals.
"""

import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from loguru import logger

from config import default_threads, get_cap
from errors import PreconditionError
from sequences import (
    SockMultiset,
    SockPattern,
    SockSequence,
    bell_number,
    is_sorted,
    render,
    standardize,
)
from sorter import FootSorter, SigmaClass, Terminator, classify_sigma, iterate, transition_map


class PatternStream:
    """Single-consumer cursor over the Bell(n) patterns of length n"""

    def __init__(self, n: int, prefix: SockPattern = ()):
        if n < 0:
            raise PreconditionError(f"pattern length must be non-negative, got {n}")
        if len(prefix) > n or standardize(prefix) != tuple(prefix):
            raise PreconditionError(f"{prefix!r} is not a pattern prefix of length <= {n}")
        self.n = n
        self.prefix = tuple(prefix)

    def __iter__(self) -> Iterator[SockPattern]:
        n, k = self.n, len(self.prefix)
        if n == 0:
            yield ()
            return
        a = list(self.prefix) + [0] * (n - k)
        if k == 0:
            k = 1
        # ceiling[i] = max(a[:i]); position i may grow up to ceiling[i] + 1
        ceiling = [0] * n
        for i in range(1, n):
            ceiling[i] = max(ceiling[i - 1], a[i - 1])
        while True:
            yield tuple(a)
            i = n - 1
            while i >= k and a[i] == ceiling[i] + 1:
                i -= 1
            if i < k:
                return
            a[i] += 1
            for j in range(i + 1, n):
                a[j] = 0
                ceiling[j] = max(ceiling[j - 1], a[j - 1])

    def count(self) -> int:
        return bell_number(self.n) if not self.prefix else sum(1 for _ in self)


def patterns_of_length(n: int) -> PatternStream:
    return PatternStream(n)


@dataclass
class CountTable:
    """s(n, r) entries for one k; marginals are s(n)"""

    k: int
    entries: Dict[Tuple[int, int], int] = field(default_factory=dict)

    def marginal(self, n: int) -> int:
        return sum(c for (m, _), c in self.entries.items() if m == n)

    def lengths(self) -> List[int]:
        return sorted({n for n, _ in self.entries})

    def row(self, n: int) -> Dict[int, int]:
        return {r: c for (m, r), c in sorted(self.entries.items()) if m == n}


@dataclass
class DepthProfile:
    n: int
    histogram: Dict[int, int]

    @property
    def mass(self) -> int:
        return sum(self.histogram.values())


@dataclass
class CycleReport:
    sigma: SockPattern
    multiset: SockMultiset
    cycles: List[Tuple[int, SockSequence]]
    max_transient: int
    unresolved: int = 0

    def periods(self) -> List[int]:
        return sorted({period for period, _ in self.cycles})


def _split_prefixes(n: int) -> List[SockPattern]:
    k = min(n, get_cap("split_prefix"))
    return list(patterns_of_length(k))


def _sortable_subtree(task: Tuple[SockPattern, int, int]) -> Counter:
    """Counter r -> number of patterns in the subtree with depth <= k"""
    prefix, n, k = task
    sorter = FootSorter()
    counts: Counter = Counter()
    for p in PatternStream(n, prefix):
        if sorter.depth(p, k) is not None:
            counts[len(set(p))] += 1
    return counts


def _depth_subtree(task: Tuple[SockPattern, int]) -> Counter:
    prefix, n = task
    sorter = FootSorter()
    counts: Counter = Counter()
    for p in PatternStream(n, prefix):
        depth = sorter.depth(p, len(set(p)))
        if depth is None:
            raise PreconditionError(f"pattern {p} exceeded the depth bound")
        counts[depth] += 1
    return counts


def _fan_out(worker, tasks: list, threads: Optional[int]) -> Counter:
    threads = threads or default_threads()
    total: Counter = Counter()
    started = time.time()
    if threads <= 1 or len(tasks) <= 1:
        for task in tasks:
            total.update(worker(task))
    else:
        logger.debug(f"🔧 Fanning {len(tasks)} subtrees over {threads} workers")
        with ProcessPoolExecutor(max_workers=threads) as executor:
            for counts in executor.map(worker, tasks, chunksize=max(1, len(tasks) // (4 * threads))):
                total.update(counts)
    logger.debug(f"✅ Sweep of {len(tasks)} subtrees done in {time.time() - started:.2f}s")
    return total


def count_sortable_refined(n: int, k: int = 1, threads: Optional[int] = None) -> Dict[int, int]:
    """r -> number of length-n patterns with r socks sorted by k passes of phi_aba"""
    if n < 1 or k < 0:
        raise PreconditionError(f"need n >= 1 and k >= 0, got n={n}, k={k}")
    tasks = [(prefix, n, k) for prefix in _split_prefixes(n)]
    counts = _fan_out(_sortable_subtree, tasks, threads)
    return {r: counts[r] for r in sorted(counts)}


def count_sortable(n: int, k: int = 1, threads: Optional[int] = None) -> int:
    """Patterns of length n with sort_depth(aba, p) <= k; s(n) when k = 1"""
    return sum(count_sortable_refined(n, k, threads).values())


def count_table(max_len: int, k: int = 1, threads: Optional[int] = None) -> CountTable:
    table = CountTable(k)
    for n in range(1, max_len + 1):
        for r, c in count_sortable_refined(n, k, threads).items():
            table.entries[(n, r)] = c
        logger.info(f"✅ n={n}: {table.marginal(n)} of {bell_number(n)} patterns sortable in {k} pass(es)")
    return table


def depth_profile(n: int, threads: Optional[int] = None) -> DepthProfile:
    """Histogram of sort_depth(aba, p) over all patterns of length n"""
    if n < 1:
        raise PreconditionError(f"depth profile needs n >= 1, got {n}")
    tasks = [(prefix, n) for prefix in _split_prefixes(n)]
    counts = _fan_out(_depth_subtree, tasks, threads)
    return DepthProfile(n, {d: counts[d] for d in sorted(counts)})


def extremal_patterns(n: int) -> List[SockPattern]:
    """Patterns whose depth equals their number of distinct socks"""
    sorter = FootSorter()
    found = []
    for p in patterns_of_length(n):
        r = len(set(p))
        if sorter.depth(p, r) == r:
            found.append(p)
    return found


def nonclosure_pairs(n: int) -> List[Tuple[SockPattern, SockPattern]]:
    """(p, q): p inside q by one deletion, p not 1-sortable, q 1-sortable"""
    sorter = FootSorter()
    pairs: Dict[Tuple[SockPattern, SockPattern], None] = {}
    for q in patterns_of_length(n + 1):
        if not is_sorted(sorter(q)):
            continue
        for i in range(len(q)):
            p = standardize(q[:i] + q[i + 1 :])
            if not is_sorted(sorter(p)):
                pairs[(p, q)] = None
    return list(pairs)


def find_periodic(
    sigma: SockPattern,
    M: SockMultiset,
    max_period: int = 64,
    max_transient: int = 64,
    cap: Optional[int] = None,
) -> CycleReport:
    """Every cycle of phi_sigma on S(M), with minimal periods

    Orbits that do not close within max_transient + max_period steps are
    counted as unresolved; cycles longer than max_period are not reported.
    """
    if max_period < 1 or max_transient < 0:
        raise PreconditionError(f"need max_period >= 1 and max_transient >= 0, got {max_period}, {max_transient}")
    sigma = standardize(sigma)
    step = transition_map(sigma, M, cap if cap is not None else get_cap("max_arrangements"))

    cycles: Dict[SockSequence, int] = {}
    on_cycle: Dict[SockSequence, SockSequence] = {}
    max_seen_transient = 0
    unresolved = 0
    for p in step:
        path: Dict[SockSequence, int] = {}
        q = p
        while q not in path and q not in on_cycle and len(path) <= max_transient + max_period:
            path[q] = len(path)
            q = step[q]
        if q in on_cycle:
            max_seen_transient = max(max_seen_transient, len(path))
            continue
        if q not in path:
            unresolved += 1
            continue
        start = path[q]
        members = [r for r, i in path.items() if i >= start]
        representative = min(members)
        for r in members:
            on_cycle[r] = representative
        if len(members) <= max_period:
            cycles[representative] = len(members)
        max_seen_transient = max(max_seen_transient, start)
    logger.info(f"✅ {len(cycles)} cycle(s) of phi_{render(sigma)} on {len(step)} arrangements")
    return CycleReport(
        sigma=sigma,
        multiset=M,
        cycles=sorted((period, rep) for rep, period in cycles.items()),
        max_transient=max_seen_transient,
        unresolved=unresolved,
    )


def never_sorted_witness(sigma: SockPattern, max_len: int, max_iters: Optional[int] = None) -> Optional[SockPattern]:
    """First pattern (shortest, then lexicographic) that phi_sigma never sorts"""
    max_iters = max_iters if max_iters is not None else get_cap("max_iterations")
    for n in range(1, max_len + 1):
        for p in patterns_of_length(n):
            if iterate(sigma, p, max_iters).terminator is Terminator.CYCLE:
                return p
    return None


def witness_patterns(max_len: int) -> List[SockPattern]:
    """Unsorted patterns of length 3..max_len outside the a...aba...a family"""
    found = []
    for n in range(3, max_len + 1):
        for sigma in patterns_of_length(n):
            if classify_sigma(sigma) in (SigmaClass.CASE1, SigmaClass.CASE2, SigmaClass.UNCLASSIFIED):
                found.append(sigma)
    return found
