"""Variable allocation and clause accumulation with constant folding."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable

from .model import FALSE, TRUE, Lit


@dataclass
class Stats:
    vars_created: int = 0
    clauses_added: int = 0
    sorters_built: int = 0
    sorters_reused: int = 0
    reuse_covered_inputs: int = 0

    def as_dict(self) -> dict[str, int]:
        return dict(vars(self))


@dataclass
class ClauseStore:
    """Clause sink owning the variable counter of one encoding run.

    ``next_var`` starts just past the problem variables, so fresh auxiliaries
    never collide with them.  Clauses are kept in insertion order.
    """

    next_var: int = 1
    clauses: list[list[Lit]] = field(default_factory=list)
    stats: Stats = field(default_factory=Stats)
    unsat_flag: bool = False

    @classmethod
    def for_problem(cls, num_vars: int) -> "ClauseStore":
        return cls(next_var=num_vars + 1)

    @property
    def num_vars(self) -> int:
        return self.next_var - 1

    def new_var(self) -> Lit:
        v = self.next_var
        self.next_var += 1
        self.stats.vars_created += 1
        return 2 * v

    def add_clause(self, lits: Iterable[Lit]) -> None:
        seen: set[Lit] = set()
        out: list[Lit] = []
        for l in lits:
            if l == TRUE or (l ^ 1) in seen:
                return
            if l == FALSE or l in seen:
                continue
            seen.add(l)
            out.append(l)
        if not out:
            if self.unsat_flag:
                return
            self.unsat_flag = True
        self.clauses.append(out)
        self.stats.clauses_added += 1

    def snapshot_stats(self) -> Stats:
        return replace(self.stats)
