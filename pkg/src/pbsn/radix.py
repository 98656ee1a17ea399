"""Mixed radix bases, digit decomposition and per-position sorter plans."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

from .model import TRUE, Lit, PbConstraint

PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


@dataclass(frozen=True)
class MixedRadixBase:
    radices: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "radices", tuple(self.radices))
        if any(r < 2 for r in self.radices):
            raise ValueError(f"radices must be >= 2: {self.radices}")

    @property
    def weights(self) -> tuple[int, ...]:
        ws = [1]
        for r in self.radices:
            ws.append(ws[-1] * r)
        return tuple(ws)

    @property
    def top(self) -> int:
        """Index of the most significant (unbounded) digit position."""
        return len(self.radices)


def to_digits(n: int, base: MixedRadixBase) -> list[int]:
    if n < 0:
        raise ValueError("only non-negative integers have digits")
    digits = []
    for r in base.radices:
        n, d = divmod(n, r)
        digits.append(d)
    digits.append(n)
    return digits


def from_digits(digits: Iterable[int], base: MixedRadixBase) -> int:
    return sum(d * w for d, w in zip(digits, base.weights))


def digit_cost(coefficients: Iterable[int], base: MixedRadixBase) -> int:
    return sum(sum(to_digits(a, base)) for a in coefficients)


def find_base(
    coefficients: Iterable[int], max_prime: int = 17, max_weight: Optional[int] = None
) -> MixedRadixBase:
    """Base of primes <= ``max_prime`` minimizing the total digit sum.

    Ties go to fewer radices, then to the lexicographically smaller sequence.
    The digits below a weight ``w`` do not depend on how ``w`` was reached, so
    the search is a memoized recursion over reachable weights.
    """
    counts = Counter(coefficients)
    if not counts:
        raise ValueError("need at least one coefficient")
    if min(counts) < 1:
        raise ValueError("coefficients must be positive")
    if max_weight is None:
        max_weight = max(counts)
    primes = [p for p in PRIMES if p <= max_prime]
    items = sorted(counts.items())

    @lru_cache(maxsize=None)
    def best(w: int) -> tuple[int, int, tuple[int, ...]]:
        quot = [(a // w, m) for a, m in items if a >= w]
        result = (sum(q * m for q, m in quot), 0, ())
        if not quot:
            return result
        for p in primes:
            if w * p > max_weight:
                break
            here = sum((q % p) * m for q, m in quot)
            if here > result[0]:
                continue
            cost, n, suffix = best(w * p)
            cand = (here + cost, n + 1, (p,) + suffix)
            if cand < result:
                result = cand
        return result

    return MixedRadixBase(best(1)[2])


def normalize_rhs(k: int, base: MixedRadixBase) -> tuple[int, int, int]:
    """Return ``(c, j, d)`` with ``k + c == d * w_j`` at the top position ``j``."""
    if k < 1:
        raise ValueError("expected a canonical rhs >= 1")
    w_top = base.weights[-1]
    d = -(-k // w_top)
    return d * w_top - k, base.top, d


@dataclass
class DigitPlan:
    base: MixedRadixBase
    inputs: list[tuple[Lit, ...]]
    constant: int
    enforce_pos: int
    enforce_digit: int

    @property
    def weights(self) -> tuple[int, ...]:
        return self.base.weights


def build_digit_plan(c: PbConstraint, base: MixedRadixBase) -> DigitPlan:
    if c.relation != "<":
        raise ValueError("expected a canonical '<' constraint")
    const, j, d = normalize_rhs(c.rhs, base)
    inputs: list[list[Lit]] = [[] for _ in base.weights]
    for a, lit in c.terms:
        for i, digit in enumerate(to_digits(a, base)):
            inputs[i].extend([lit] * digit)
    for i, digit in enumerate(to_digits(const, base)):
        inputs[i].extend([TRUE] * digit)
    return DigitPlan(base, [tuple(sorted(xs)) for xs in inputs], const, j, d)


def carry_indices(n_outputs: int, radix: int) -> list[int]:
    """1-based output positions r, 2r, ... that carry into the next digit."""
    if radix < 2:
        raise ValueError("radix must be >= 2")
    return list(range(radix, n_outputs + 1, radix))
