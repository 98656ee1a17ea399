"""Clause-emitting selection networks.

All encodings are one-directional: output ``y_p`` is implied whenever at
least ``p`` inputs are true.  Outputs may be constants when the inputs are.

Merging networks are first laid out as a comparator DAG over wires and only
the wires actually requested are turned into clauses, so selecting the top
``k`` of a merge never pays for comparators that only feed lower positions.
A comparator contributes ``a -> max``, ``b -> max`` for its upper output and
``a & b -> min`` for its lower one.
"""

from __future__ import annotations

from itertools import combinations
from typing import NamedTuple, Optional, Sequence

from .cnf import ClauseStore
from .model import FALSE, TRUE, Lit

DEFAULT_BLOCK = 5

# Optimal sorting networks for up to four wires; the lower index receives the max.
_SMALL_SORTERS = {
    2: ((0, 1),),
    3: ((0, 2), (0, 1), (1, 2)),
    4: ((0, 1), (2, 3), (0, 2), (1, 3), (1, 2)),
}


def direct_selector(store: ClauseStore, inputs: Sequence[Lit], k: int) -> list[Lit]:
    """Direct selector of order (n, k): ``x_i1 & ... & x_ip -> y_p`` for all p <= k."""
    n_total = len(inputs)
    k = min(k, n_total)
    if k <= 0:
        return []
    n_true = sum(1 for l in inputs if l == TRUE)
    xs = [l for l in inputs if l != TRUE and l != FALSE]
    out = [TRUE] * min(n_true, k)
    ys = [store.new_var() for _ in range(min(k - len(out), len(xs)))]
    for p, y in enumerate(ys, start=1):
        for combo in combinations(xs, p):
            store.add_clause([x ^ 1 for x in combo] + [y])
    out += ys
    return out + [FALSE] * (k - len(out))


class _Net:
    """Comparator DAG; wire ``i`` is ``nodes[i]``."""

    def __init__(self) -> None:
        self.nodes: list[tuple] = []
        self.lits: dict[int, Lit] = {}

    def input(self, lit: Lit) -> int:
        self.nodes.append(("in", lit))
        return len(self.nodes) - 1

    def comparator(self, a: Optional[int], b: Optional[int]) -> tuple[Optional[int], Optional[int]]:
        # None is an absent wire, i.e. a constant 0 at the bottom of a sequence
        if a is None:
            return b, None
        if b is None:
            return a, None
        self.nodes.append(("max", a, b))
        self.nodes.append(("min", a, b))
        return len(self.nodes) - 2, len(self.nodes) - 1

    def compile(self, store: ClauseStore, wires: Sequence[int]) -> list[Lit]:
        return [self._lit(store, w) for w in wires]

    def _lit(self, store: ClauseStore, w: int) -> Lit:
        if w in self.lits:
            return self.lits[w]
        node = self.nodes[w]
        if node[0] == "in":
            lit = node[1]
        else:
            a = self._lit(store, node[1])
            b = self._lit(store, node[2])
            lit = _max(store, a, b) if node[0] == "max" else _min(store, a, b)
        self.lits[w] = lit
        return lit


def _max(store: ClauseStore, a: Lit, b: Lit) -> Lit:
    if a == FALSE or a == b:
        return b
    if b == FALSE:
        return a
    if a == TRUE or b == TRUE:
        return TRUE
    y = store.new_var()
    store.add_clause([a ^ 1, y])
    store.add_clause([b ^ 1, y])
    return y


def _min(store: ClauseStore, a: Lit, b: Lit) -> Lit:
    if a == FALSE or b == FALSE:
        return FALSE
    if a == TRUE or a == b:
        return b
    if b == TRUE:
        return a
    y = store.new_var()
    store.add_clause([a ^ 1, b ^ 1, y])
    return y


def _sort_small(net: _Net, wires: list[int]) -> list[int]:
    wires = list(wires)
    for i, j in _SMALL_SORTERS.get(len(wires), ()):
        wires[i], wires[j] = net.comparator(wires[i], wires[j])
    return wires


def _combine(net: _Net, v: list[int], w: list[int]) -> list[int]:
    """Interleave sorted ``v`` and ``w`` whose true counts differ by 0..4."""
    at = lambda xs, i: xs[i] if i < len(xs) else None  # noqa: E731
    z: list[Optional[int]] = [at(v, 0), at(v, 1)]
    for i in range(max(len(v) - 2, len(w))):
        z.extend(net.comparator(at(v, i + 2), at(w, i)))
    for i in range(1, len(z) - 1, 2):
        z[i], z[i + 1] = net.comparator(z[i], z[i + 1])
    return [x for x in z if x is not None]


def _merge(net: _Net, seqs: list[list[int]]) -> list[int]:
    seqs = [s for s in seqs if s]
    if not seqs:
        return []
    if len(seqs) == 1:
        return seqs[0]
    if all(len(s) == 1 for s in seqs):
        return _sort_small(net, [s[0] for s in seqs])
    v = _merge(net, [s[0::2] for s in seqs])
    w = _merge(net, [s[1::2] for s in seqs])
    return _combine(net, v, w)


class Merged(NamedTuple):
    top: list[Lit]
    rest: list[Lit]


def oe_4merge(
    store: ClauseStore, seqs: Sequence[Sequence[Lit]], k: int, with_residue: bool = False
) -> Merged:
    """Merge up to four sorted sequences into one whose first ``k`` entries are sorted.

    ``rest`` holds the remaining positions (only encoded when ``with_residue``).
    """
    if not 1 <= len(seqs) <= 4:
        raise ValueError(f"oe_4merge takes 1 to 4 sequences, got {len(seqs)}")
    net = _Net()
    heads, tails = [], []
    for s in seqs:
        heads.append([net.input(l) for l in s[:k]])
        tails.extend(s[k:])
    merged = _merge(net, heads)
    top = net.compile(store, merged[:k])
    if not with_residue:
        return Merged(top, [])
    return Merged(top, net.compile(store, merged[k:]) + list(tails))


def oe_4combine(store: ClauseStore, v: Sequence[Lit], w: Sequence[Lit], k: int) -> list[Lit]:
    """Combine step of the 4-way merge, exposed for testing."""
    net = _Net()
    vw = [net.input(l) for l in v]
    ww = [net.input(l) for l in w]
    return net.compile(store, _combine(net, vw, ww)[:k])


def select_k(
    store: ClauseStore, inputs: Sequence[Lit], k: int, block: int = DEFAULT_BLOCK
) -> list[Lit]:
    """4-Way Merge Selection Network: the top ``min(k, n)`` of ``inputs``, sorted."""
    k = min(k, len(inputs))
    if k <= 0:
        return []
    n_true = sum(1 for l in inputs if l == TRUE)
    xs = [l for l in inputs if l != TRUE and l != FALSE]
    out = [TRUE] * min(n_true, k)
    kk = min(k - len(out), len(xs))
    if kk == 1:
        out += direct_selector(store, xs, 1)
    elif kk > 1:
        seqs = [direct_selector(store, xs[i:i + block], min(block, kk))
                for i in range(0, len(xs), block)]
        while len(seqs) > 1:
            seqs = [oe_4merge(store, seqs[i:i + 4], kk).top for i in range(0, len(seqs), 4)]
        out += seqs[0]
    return out + [FALSE] * (k - len(out))
