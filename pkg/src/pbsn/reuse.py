"""Reusing previously encoded sorters inside new ones.

Every sorter built during an encoding run is recorded with its (constant
free) input multiset.  When a new sorter is requested, a greedy cover picks
earlier sorters whose whole input fits inside the new input; their outputs
are merged with a fresh sorter over whatever is left.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .cnf import ClauseStore
from .model import FALSE, TRUE, Lit
from .multiway import multiway_merge
from .networks import DEFAULT_BLOCK, select_k

# Sorters over fewer inputs are not worth recording.
MIN_REUSE_LEN = 2


@dataclass
class SorterRecord:
    input: tuple[Lit, ...]
    output: list[Lit]
    k: int
    index: int = 0

    def usable_for(self, k: int) -> bool:
        """Whether the recorded top-``self.k`` suffices for a top-``k`` request."""
        return self.k >= min(k, len(self.input))


@dataclass
class SorterRegistry:
    records: list[SorterRecord] = field(default_factory=list)

    def register(self, inputs: Iterable[Lit], output: Sequence[Lit], k: int) -> SorterRecord:
        rec = SorterRecord(tuple(sorted(inputs)), list(output), k, len(self.records))
        self.records.append(rec)
        return rec

    def __iter__(self) -> Iterator[SorterRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)


@dataclass
class CoverResult:
    chosen: list[SorterRecord]
    residual: tuple[Lit, ...]

    @property
    def length(self) -> int:
        return sum(len(r.input) for r in self.chosen)


def _fits(need: Counter, have: Counter) -> bool:
    return all(have[l] >= n for l, n in need.items())


def greedy_cover(
    records: Iterable[SorterRecord],
    d: Sequence[Lit],
    eligible: Optional[Callable[[SorterRecord], bool]] = None,
) -> CoverResult:
    """Repeatedly take the longest record contained in what is left of ``d``.

    Ties go to the earliest registration.  The remainder only shrinks, so a
    record that does not fit once never fits later and one ordered scan is
    enough.
    """
    remaining = Counter(d)
    cands = [r for r in records if r.input and (eligible is None or eligible(r))]
    cands.sort(key=lambda r: -len(r.input))
    chosen = []
    for r in cands:
        need = Counter(r.input)
        if _fits(need, remaining):
            remaining.subtract(need)
            chosen.append(r)
    residual = tuple(sorted(remaining.elements()))
    return CoverResult(chosen, residual)


def exact_cover_bruteforce(records: Sequence[SorterRecord], d: Sequence[Lit]) -> CoverResult:
    """Maximum-length cover by exhaustive branch and bound (test oracle)."""
    have = Counter(d)
    cands = [r for r in records if r.input and _fits(Counter(r.input), have)]
    cands.sort(key=lambda r: -len(r.input))
    needs = [Counter(r.input) for r in cands]
    suffix = [0] * (len(cands) + 1)
    for i in range(len(cands) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + len(cands[i].input)

    best: list = [-1, []]

    def dfs(i: int, left: Counter, got: int, picked: list[int]) -> None:
        if got > best[0]:
            best[0], best[1] = got, list(picked)
        if i == len(cands) or got + suffix[i] <= best[0]:
            return
        if _fits(needs[i], left):
            left.subtract(needs[i])
            picked.append(i)
            dfs(i + 1, left, got + len(cands[i].input), picked)
            picked.pop()
            left.update(needs[i])
        dfs(i + 1, left, got, picked)

    dfs(0, have, 0, [])
    chosen = [cands[i] for i in best[1]]
    left = Counter(d)
    for r in chosen:
        left.subtract(r.input)
    return CoverResult(chosen, tuple(sorted(left.elements())))


@dataclass
class BuiltSorter:
    outputs: list[Lit]
    record: Optional[SorterRecord]
    offset: int  # leading TRUE outputs not covered by ``record``


def _merge_cover(
    store: ClauseStore,
    registry: Optional[SorterRegistry],
    cover: CoverResult,
    kk: int,
    block: int,
    skip: bool,
) -> list[Lit]:
    seqs = [r.output[:kk] for r in cover.chosen]
    if cover.residual:
        rest = select_k(store, cover.residual, kk, block)
        if registry is not None and len(cover.residual) >= MIN_REUSE_LEN:
            registry.register(cover.residual, rest, kk)
        seqs.append(rest)
    seqs.sort(key=len, reverse=True)
    return multiway_merge(store, seqs, kk, skip=skip, with_residue=False)[:kk]


def _dry_cost(store: ClauseStore, build: Callable[[ClauseStore], object]) -> tuple[int, int]:
    scratch = ClauseStore(next_var=store.next_var)
    build(scratch)
    return scratch.stats.vars_created, len(scratch.clauses)


def reuse_pays_off(
    store: ClauseStore, core: Sequence[Lit], cover: CoverResult, kk: int, block: int, skip: bool
) -> bool:
    """Whether merging the cover beats a fresh sorter: no worse in variables or
    clauses and strictly better in one.  Both variants are built in scratch
    stores and thrown away."""
    fresh = _dry_cost(store, lambda st: select_k(st, core, kk, block))
    merged = _dry_cost(store, lambda st: _merge_cover(st, None, cover, kk, block, skip))
    return merged[0] <= fresh[0] and merged[1] <= fresh[1] and merged != fresh


def build_sorter_with_reuse(
    store: ClauseStore,
    registry: SorterRegistry,
    inputs: Sequence[Lit],
    k: int,
    reuse: bool = True,
    block: int = DEFAULT_BLOCK,
    skip: bool = True,
    guard: bool = True,
) -> BuiltSorter:
    """Sort ``inputs`` (top ``k``), recycling recorded sorters when ``reuse`` is on.

    Constant inputs are peeled off first: TRUE entries become leading TRUE
    outputs and FALSE entries trailing FALSE ones.  Only the remaining core is
    covered, sorted and recorded.  With ``guard`` a cover is used only when
    :func:`reuse_pays_off`; small sorters are often cheaper to rebuild than
    to merge.
    """
    k = min(k, len(inputs))
    n_true = sum(1 for l in inputs if l == TRUE)
    core = sorted(l for l in inputs if l != TRUE and l != FALSE)
    out = [TRUE] * min(n_true, k)
    kk = min(k - len(out), len(core))
    record = None
    if kk > 0:
        store.stats.sorters_built += 1
        cover = None
        if reuse:
            cover = greedy_cover(registry, core, lambda r: r.usable_for(kk))
            if cover.chosen and guard and not reuse_pays_off(store, core, cover, kk, block, skip):
                cover = None
        if not cover or not cover.chosen:
            core_out = select_k(store, core, kk, block)
        else:
            store.stats.sorters_reused += len(cover.chosen)
            store.stats.reuse_covered_inputs += cover.length
            core_out = _merge_cover(store, registry, cover, kk, block, skip)
        if len(core) >= MIN_REUSE_LEN:
            record = registry.register(core, core_out, kk)
        out += core_out
    return BuiltSorter(out + [FALSE] * (k - len(out)), record, min(n_true, k))
