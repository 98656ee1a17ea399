"""Bit-parallel unit propagation for exhaustive 0-1 checks.

Every variable carries two Python ints used as bitsets over a batch of
"worlds" (one bit per input assignment): the worlds where propagation made
it true and those where it made it false.  Running ordinary unit propagation
on all worlds at once makes exhaustive sweeps over 2^14 inputs cheap.
"""

from __future__ import annotations

from itertools import product
from typing import Sequence


class BitProp:
    def __init__(self, num_vars: int, width: int) -> None:
        self.full = (1 << width) - 1
        self.t = [0] * (num_vars + 1)
        self.f = [0] * (num_vars + 1)
        self.conflict = 0

    def assume(self, lit: int, mask: int) -> None:
        v = lit >> 1
        if lit & 1:
            self.f[v] |= mask
            self.t[v] |= self.full & ~mask
        else:
            self.t[v] |= mask
            self.f[v] |= self.full & ~mask

    def masks(self, lit: int) -> tuple[int, int]:
        v = lit >> 1
        return (self.f[v], self.t[v]) if lit & 1 else (self.t[v], self.f[v])

    def run(self, clauses: Sequence[Sequence[int]]) -> None:
        changed = True
        while changed:
            changed = False
            for c in clauses:
                ms = [self.masks(l) for l in c]
                sat = 0
                for tm, _ in ms:
                    sat |= tm
                n = len(c)
                pre = [self.full] * (n + 1)
                for i in range(n):
                    pre[i + 1] = pre[i] & ms[i][1]
                self.conflict |= pre[n] & ~sat
                suf = self.full
                for i in range(n - 1, -1, -1):
                    tm, fm = ms[i]
                    new = pre[i] & suf & ~sat & ~tm & ~fm
                    if new:
                        changed = True
                        v = c[i] >> 1
                        if c[i] & 1:
                            self.f[v] |= new
                        else:
                            self.t[v] |= new
                    suf &= fm

    def true_mask(self, lit: int) -> int:
        return self.masks(lit)[0] if lit > 1 else (self.full if lit == 0 else 0)


def world_masks(n: int) -> list[int]:
    """Bit i of mask j is bit j of world index i, for all 2^n worlds."""
    width = 1 << n
    return [sum(1 << w for w in range(width) if (w >> j) & 1) for j in range(n)]


def popcount_at_least(masks: Sequence[int], width: int) -> list[int]:
    """at_least[p] = worlds where at least p of the given masks are set (p = 0..len)."""
    counts = [0] * width
    for m in masks:
        for w in range(width):
            if (m >> w) & 1:
                counts[w] += 1
    out = []
    for p in range(len(masks) + 1):
        out.append(sum(1 << w for w in range(width) if counts[w] >= p))
    return out


def sorted_binary_tuples(lengths: Sequence[int], k: int | None = None):
    """All tuples of top-k sorted binary sequences with the given lengths."""
    per = []
    for n in lengths:
        kk = n if k is None else min(k, n)
        opts = []
        for bits in product((0, 1), repeat=n):
            head = bits[:kk]
            if list(head) != sorted(head, reverse=True):
                continue
            if kk and any(b > head[-1] for b in bits[kk:]):
                continue
            opts.append(bits)
        per.append(opts)
    return product(*per)


def masks_from_worlds(worlds: Sequence[Sequence[int]]) -> list[int]:
    """Per-position masks for an explicit list of worlds."""
    if not worlds:
        return []
    return [sum(1 << w for w, bits in enumerate(worlds) if bits[j])
            for j in range(len(worlds[0]))]


def at_least_from_counts(counts: Sequence[int], top: int) -> list[int]:
    return [sum(1 << w for w, c in enumerate(counts) if c >= p) for p in range(top + 1)]


def top_k_errors(store, inputs, masks, at_least, outputs, k, width) -> list:
    """Positions p (1-based) where propagation from the inputs does not make
    output p true in exactly the worlds with at least p true inputs; 'conflict'
    if any world propagates to a conflict."""
    bp = BitProp(store.num_vars, width)
    for lit, m in zip(inputs, masks):
        bp.assume(lit, m)
    bp.run(store.clauses)
    errors: list = ["conflict"] if bp.conflict else []
    if len(outputs) < k:
        errors.append("short")
    for p in range(1, min(k, len(outputs)) + 1):
        if bp.true_mask(outputs[p - 1]) != at_least[p]:
            errors.append(p)
    return errors
