"""Literals, literal sequences and pseudo-Boolean constraints.

Literals are plain ints in the MiniSat style: variable ``v`` (v >= 1) is
``2*v`` and its negation ``2*v + 1``.  Variable 0 is reserved for the two
constants, so ``TRUE == 0`` and ``FALSE == 1``.  Negation is ``lit ^ 1`` for
every literal, constants included, and the natural int order is the global
literal order: constants first, then by variable, positive before negative.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

Lit = int

TRUE: Lit = 0
FALSE: Lit = 1

RELATIONS = ("<", "<=", "=", ">=", ">")


def mk_lit(var: int, negated: bool = False) -> Lit:
    if var < 1:
        raise ValueError(f"variable ids start at 1, got {var}")
    return 2 * var + int(negated)


def neg(lit: Lit) -> Lit:
    return lit ^ 1


def var_of(lit: Lit) -> int:
    return lit >> 1


def is_negated(lit: Lit) -> bool:
    return bool(lit & 1)


def is_const(lit: Lit) -> bool:
    return lit < 2


def to_dimacs(lit: Lit) -> int:
    if is_const(lit):
        raise ValueError("constants have no DIMACS form")
    v = lit >> 1
    return -v if lit & 1 else v


def from_dimacs(d: int) -> Lit:
    if d == 0:
        raise ValueError("0 is not a DIMACS literal")
    return 2 * abs(d) + (d < 0)


def lit_str(lit: Lit) -> str:
    if lit == TRUE:
        return "TRUE"
    if lit == FALSE:
        return "FALSE"
    return ("~x" if lit & 1 else "x") + str(lit >> 1)


def seq(lits: Iterable[Lit]) -> tuple[Lit, ...]:
    """Canonical literal sequence: sorted under the global order."""
    return tuple(sorted(lits))


def occurrences(lits: Iterable[Lit]) -> Counter:
    return Counter(lits)


def disjoint_in(seqs: Iterable[Sequence[Lit]], d: Sequence[Lit]) -> bool:
    """True iff the sequences are mutually disjoint in ``d`` (multiset sense)."""
    total: Counter = Counter()
    for s in seqs:
        total.update(s)
    have = Counter(d)
    return all(have[l] >= n for l, n in total.items())


def contains(d: Sequence[Lit], s: Sequence[Lit]) -> bool:
    """Multiset containment of ``s`` in ``d``."""
    return disjoint_in([s], d)


@dataclass(frozen=True)
class PbConstraint:
    terms: tuple[tuple[int, Lit], ...]
    relation: str
    rhs: int

    def __post_init__(self) -> None:
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "terms", tuple((int(a), l) for a, l in self.terms))

    @property
    def is_contradiction(self) -> bool:
        return self.relation == "<" and self.rhs <= 0 and not self.terms

    def lhs(self, value: dict[int, bool] | Sequence[bool]) -> int:
        return sum(a for a, l in self.terms if lit_value(l, value))

    def holds(self, value: dict[int, bool] | Sequence[bool]) -> bool:
        s, k = self.lhs(value), self.rhs
        return {
            "<": s < k,
            "<=": s <= k,
            "=": s == k,
            ">=": s >= k,
            ">": s > k,
        }[self.relation]

    def variables(self) -> set[int]:
        return {var_of(l) for _, l in self.terms if not is_const(l)}


# Canonical "0 < 0": returned by canonicalize when no assignment satisfies.
CONTRADICTION = PbConstraint((), "<", 0)


def lit_value(lit: Lit, value: dict[int, bool] | Sequence[bool]) -> bool:
    """Evaluate a literal under ``value`` (var -> bool; index 0 unused for lists)."""
    if lit == TRUE:
        return True
    if lit == FALSE:
        return False
    return bool(value[lit >> 1]) != bool(lit & 1)


@dataclass
class PbInstance:
    constraints: list[PbConstraint] = field(default_factory=list)
    objective: Optional[list[tuple[int, Lit]]] = None
    num_vars: int = 0

    def __post_init__(self) -> None:
        used = set()
        for c in self.constraints:
            used |= c.variables()
        if self.objective:
            used |= {var_of(l) for _, l in self.objective if not is_const(l)}
        top = max(used, default=0)
        if top > self.num_vars:
            raise ValueError(f"variable x{top} exceeds num_vars={self.num_vars}")

    def objective_value(self, value: dict[int, bool] | Sequence[bool]) -> int:
        return sum(a for a, l in self.objective or () if lit_value(l, value))

    def feasible(self, value: dict[int, bool] | Sequence[bool]) -> bool:
        return all(c.holds(value) for c in self.constraints)


def merge_duplicate_literals(c: PbConstraint) -> PbConstraint:
    """Sum repeated literals and cancel ``a*x + b*~x`` pairs in a ``<`` constraint."""
    if c.relation != "<":
        raise ValueError("expected a constraint in '<' form")
    coef: dict[Lit, int] = {}
    for a, l in c.terms:
        coef[l] = coef.get(l, 0) + a
    rhs = c.rhs
    for l in list(coef):
        if l & 1 or l not in coef:
            continue
        nl = l ^ 1
        if nl not in coef:
            continue
        a, b = coef[l], coef.pop(nl)
        # a*x + b*~x == (a-b)*x + b
        if a >= b:
            coef[l] = a - b
            rhs -= b
        else:
            del coef[l]
            coef[nl] = b - a
            rhs -= a
    terms = tuple(sorted(((a, l) for l, a in coef.items() if a != 0), key=lambda t: t[1]))
    return PbConstraint(terms, "<", rhs)


def _less_than(terms: Iterable[tuple[int, Lit]], rhs: int) -> Optional[PbConstraint]:
    """Normalize ``sum < rhs``; None when trivially true, CONTRADICTION when unsat."""
    out = []
    for a, l in terms:
        if a == 0 or l == FALSE:
            continue
        if l == TRUE:
            rhs -= a
        elif a < 0:
            # a*x == (-a)*~x + a
            out.append((-a, l ^ 1))
            rhs -= a
        else:
            out.append((a, l))
    c = merge_duplicate_literals(PbConstraint(tuple(out), "<", rhs))
    if c.rhs <= 0:
        return CONTRADICTION
    if sum(a for a, _ in c.terms) < c.rhs:
        return None
    return c


def canonicalize(c: PbConstraint) -> list[PbConstraint]:
    """Rewrite ``c`` into zero, one or two ``<`` constraints with positive coefficients.

    An unsatisfiable input yields ``[CONTRADICTION]``.
    """
    terms, k = c.terms, c.rhs
    flipped = [(-a, l) for a, l in terms]
    parts = {
        "<": [(terms, k)],
        "<=": [(terms, k + 1)],
        ">": [(flipped, -k)],
        ">=": [(flipped, -k + 1)],
        "=": [(terms, k + 1), (flipped, -k + 1)],
    }[c.relation]
    out = []
    for ts, rhs in parts:
        n = _less_than(ts, rhs)
        if n is CONTRADICTION:
            return [CONTRADICTION]
        if n is not None:
            out.append(n)
    return out
