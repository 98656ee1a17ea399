"""Multi-way merging of sorted sequences of non-increasing lengths."""

from __future__ import annotations

from typing import Sequence

from .cnf import ClauseStore
from .model import Lit
from .networks import oe_4merge


def skip_index(lengths: Sequence[int], k: int) -> int:
    """Largest 1-based ``j <= m-4`` whose (capped) length beats the next four combined.

    Returns 0 when there are at most four sequences or no such ``j``.
    """
    m = len(lengths)
    if m <= 4:
        return 0
    capped = [min(n, k) for n in lengths]
    for j in range(m - 4, 0, -1):
        if capped[j - 1] > sum(capped[j:j + 4]):
            return j
    return 0


def multiway_merge(
    store: ClauseStore,
    seqs: Sequence[Sequence[Lit]],
    k: int,
    skip: bool = True,
    with_residue: bool = True,
) -> list[Lit]:
    """Merge sorted sequences (longest first) into one top-``k`` sorted sequence.

    Long sequences are held back while the shorter tail is merged four at a
    time, so they enter as few merging passes as possible.  The result is the
    merged top ``k`` followed by the collected non-top-``k`` entries, which
    are only encoded when ``with_residue`` is set.
    """
    if not seqs:
        return []
    lengths = [len(s) for s in seqs]
    if any(a < b for a, b in zip(lengths, lengths[1:])):
        raise ValueError(f"sequences must be ordered by non-increasing length: {lengths}")
    work = [list(s) for s in seqs]
    out: list[Lit] = []
    while len(work) > 1:
        m = len(work)
        s = skip_index([len(x) for x in work], k) if skip else 0
        s2 = m - (m - s) % 4
        groups = [work[j:j + 4] for j in range(s, s2, 4)]
        if s2 < m:
            groups.append(work[s2:])
        nxt = work[:s]
        for g in groups:
            merged = oe_4merge(store, g, k, with_residue)
            nxt.append(merged.top)
            out.extend(merged.rest)
        work = nxt
    return work[0] + out
