"""SAT back ends and the linear-search optimization loop."""

from __future__ import annotations

import heapq
import logging
import os
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .cnf import ClauseStore, Stats
from .encoder import EncodeOptions, encode_constraint, encode_instance
from .model import CONTRADICTION, PbConstraint, PbInstance, canonicalize
from .reuse import SorterRegistry

log = logging.getLogger(__name__)

SAT, UNSAT, UNKNOWN = "SAT", "UNSAT", "UNKNOWN"


@dataclass
class SolveOutcome:
    status: str
    model: Optional[list[bool]] = None  # indexed by variable, entry 0 unused
    diagnostic: str = ""


def _luby(i: int) -> int:
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while (1 << k) - 1 != i:
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1
    return 1 << (k - 1)


class CdclSolver:
    """Plain conflict-driven clause learning: two watched literals, first-UIP
    learning, VSIDS-style activities, phase saving and Luby restarts."""

    def __init__(self, num_vars: int, clauses: Sequence[Sequence[int]]) -> None:
        self.n = num_vars
        self.val = [0] * (2 * num_vars + 2)  # per literal: 1 true, -1 false, 0 free
        self.level = [0] * (num_vars + 1)
        self.reason: list[Optional[list[int]]] = [None] * (num_vars + 1)
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.watches: list[list[list[int]]] = [[] for _ in range(2 * num_vars + 2)]
        self.activity = [0.0] * (num_vars + 1)
        self.var_inc = 1.0
        self.phase = [False] * (num_vars + 1)
        self.heap = [(0.0, v) for v in range(1, num_vars + 1)]
        self.seen = [False] * (num_vars + 1)
        self.conflicts = 0
        self.ok = True
        for c in clauses:
            self._add_input(c)
        if self.ok and self._propagate() is not None:
            self.ok = False

    def _add_input(self, clause: Sequence[int]) -> None:
        if not self.ok:
            return
        c = []
        for l in dict.fromkeys(clause):
            if self.val[l] == 1 or (l ^ 1) in c:
                return
            if self.val[l] == 0:
                c.append(l)
        if not c:
            self.ok = False
        elif len(c) == 1:
            self._enqueue(c[0], None)
        else:
            self._watch(c)

    def _watch(self, c: list[int]) -> None:
        self.watches[c[0] ^ 1].append(c)
        self.watches[c[1] ^ 1].append(c)

    def _enqueue(self, lit: int, reason: Optional[list[int]]) -> None:
        v = lit >> 1
        self.val[lit] = 1
        self.val[lit ^ 1] = -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _propagate(self) -> Optional[list[int]]:
        val, watches, trail = self.val, self.watches, self.trail
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            false_lit = p ^ 1
            ws = watches[p]
            i = j = 0
            n = len(ws)
            while i < n:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0], c[1] = c[1], false_lit
                first = c[0]
                if val[first] == 1:
                    ws[j] = c
                    j += 1
                    continue
                for t in range(2, len(c)):
                    if val[c[t]] != -1:
                        c[1], c[t] = c[t], false_lit
                        watches[c[1] ^ 1].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if val[first] == -1:
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        self.qhead = len(trail)
                        return c
                    self._enqueue(first, c)
            del ws[j:]
        return None

    def _bump(self, v: int) -> None:
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            self.activity = [a * 1e-100 for a in self.activity]
            self.var_inc *= 1e-100
            self.heap = [(-self.activity[u], u) for u in range(1, self.n + 1)]
            heapq.heapify(self.heap)
        else:
            heapq.heappush(self.heap, (-self.activity[v], v))

    def _analyze(self, confl: list[int]) -> tuple[list[int], int]:
        seen, level, trail = self.seen, self.level, self.trail
        cur = len(self.trail_lim)
        learnt = [0]
        marked = []
        path = 0
        p = None
        idx = len(trail) - 1
        while True:
            for q in (confl if p is None else confl[1:]):
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = True
                    marked.append(v)
                    self._bump(v)
                    if level[v] >= cur:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            confl = self.reason[p >> 1]
            seen[p >> 1] = False
            path -= 1
            if path == 0:
                break
        learnt[0] = p ^ 1
        for v in marked:
            seen[v] = False
        back = 0
        if len(learnt) > 1:
            hi = max(range(1, len(learnt)), key=lambda i: level[learnt[i] >> 1])
            learnt[1], learnt[hi] = learnt[hi], learnt[1]
            back = level[learnt[1] >> 1]
        self.var_inc /= 0.95
        return learnt, back

    def _cancel_until(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        start = self.trail_lim[lvl]
        for lit in self.trail[start:]:
            v = lit >> 1
            self.val[lit] = self.val[lit ^ 1] = 0
            self.reason[v] = None
            self.phase[v] = not (lit & 1)
            heapq.heappush(self.heap, (-self.activity[v], v))
        del self.trail[start:]
        del self.trail_lim[lvl:]
        self.qhead = start

    def _pick(self) -> int:
        while self.heap:
            _, v = heapq.heappop(self.heap)
            if self.val[2 * v] == 0:
                return 2 * v + (0 if self.phase[v] else 1)
        return -1

    def solve(self, max_conflicts: Optional[int] = None, deadline: Optional[float] = None) -> SolveOutcome:
        if not self.ok:
            return SolveOutcome(UNSAT)
        restart_no = 1
        budget = 100 * _luby(restart_no)
        since_restart = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                since_restart += 1
                if not self.trail_lim:
                    self.ok = False
                    return SolveOutcome(UNSAT)
                learnt, back = self._analyze(confl)
                self._cancel_until(back)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self._watch(learnt)
                    self._enqueue(learnt[0], learnt)
                if max_conflicts is not None and self.conflicts >= max_conflicts:
                    return SolveOutcome(UNKNOWN, diagnostic="conflict budget exhausted")
                if deadline is not None and self.conflicts % 64 == 0 and time.monotonic() > deadline:
                    return SolveOutcome(UNKNOWN, diagnostic="time budget exhausted")
                continue
            if since_restart >= budget:
                self._cancel_until(0)
                restart_no += 1
                budget = 100 * _luby(restart_no)
                since_restart = 0
            lit = self._pick()
            if lit < 0:
                model = [False] * (self.n + 1)
                for l in self.trail:
                    model[l >> 1] = not (l & 1)
                return SolveOutcome(SAT, model)
            self.trail_lim.append(len(self.trail))
            self._enqueue(lit, None)


class BuiltinBackend:
    name = "builtin"

    def solve(self, store: ClauseStore, timeout: Optional[float] = None) -> SolveOutcome:
        deadline = None if timeout is None else time.monotonic() + timeout
        return CdclSolver(store.num_vars, store.clauses).solve(deadline=deadline)


def parse_solver_output(text: str, num_vars: int) -> SolveOutcome:
    """Read competition-style ``s``/``v`` lines."""
    status = None
    values: dict[int, bool] = {}
    for line in text.splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "s" and len(parts) > 1:
            status = " ".join(parts[1:])
        elif parts[0] == "v":
            for tok in parts[1:]:
                d = int(tok)
                if d:
                    values[abs(d)] = d > 0
    if status == "SATISFIABLE":
        model = [False] * (num_vars + 1)
        for v, b in values.items():
            if v <= num_vars:
                model[v] = b
        return SolveOutcome(SAT, model)
    if status == "UNSATISFIABLE":
        return SolveOutcome(UNSAT)
    return SolveOutcome(UNKNOWN, diagnostic=f"no usable s-line (got {status!r})")


class ExternalBackend:
    """Runs ``[solver_path, dimacs_path]`` in a child process and parses its output."""

    name = "external"

    def __init__(self, path: str) -> None:
        self.path = path

    def solve(self, store: ClauseStore, timeout: Optional[float] = None) -> SolveOutcome:
        from .opb import write_dimacs

        fd, cnf_path = tempfile.mkstemp(suffix=".cnf")
        try:
            with os.fdopen(fd, "w") as fh:
                write_dimacs(store, fh)
            try:
                proc = subprocess.run(
                    [self.path, cnf_path], capture_output=True, text=True, timeout=timeout
                )
            except subprocess.TimeoutExpired:
                return SolveOutcome(UNKNOWN, diagnostic="external solver timed out")
            except OSError as e:
                return SolveOutcome(UNKNOWN, diagnostic=f"cannot run {self.path}: {e}")
        finally:
            os.unlink(cnf_path)
        out = parse_solver_output(proc.stdout, store.num_vars)
        if out.status == UNKNOWN:
            out.diagnostic += f"; exit status {proc.returncode}; stderr: {proc.stderr.strip()[:200]}"
            log.warning("external solver: %s", out.diagnostic)
        return out


def make_backend(path: Optional[str] = None):
    return ExternalBackend(path) if path else BuiltinBackend()


def solve(store: ClauseStore, backend=None, timeout: Optional[float] = None) -> SolveOutcome:
    return (backend or BuiltinBackend()).solve(store, timeout)


OPTIMUM, SATISFIABLE = "OPTIMUM", "SATISFIABLE"


@dataclass
class OptimizeResult:
    status: str  # OPTIMUM, SATISFIABLE, UNSAT or UNKNOWN
    value: Optional[int] = None
    model: Optional[list[bool]] = None
    bounds: list[int] = field(default_factory=list)
    stats: Stats = field(default_factory=Stats)
    diagnostic: str = ""


def optimize(
    instance: PbInstance,
    opts: Optional[EncodeOptions] = None,
    backend=None,
    timeout: Optional[float] = None,
    on_improve: Optional[Callable[[int], None]] = None,
) -> OptimizeResult:
    """Minimize the objective by repeatedly adding ``objective < best`` and re-solving.

    Each bound is encoded through the same sorter registry as the hard
    constraints, so consecutive bounds mostly reuse the previous sorters.
    Without an objective this is a single satisfiability check.
    """
    opts = opts or EncodeOptions()
    backend = backend or BuiltinBackend()
    deadline = None if timeout is None else time.monotonic() + timeout
    store = ClauseStore.for_problem(instance.num_vars)
    registry = SorterRegistry()
    encode_instance(store, instance, opts, registry)
    result = OptimizeResult(UNKNOWN, stats=store.stats)

    while True:
        left = None if deadline is None else max(0.0, deadline - time.monotonic())
        out = backend.solve(store, left)
        if out.status == UNKNOWN:
            result.status = SATISFIABLE if result.model is not None else UNKNOWN
            result.diagnostic = out.diagnostic
            break
        if out.status == UNSAT:
            result.status = OPTIMUM if result.model is not None else UNSAT
            break
        model = out.model[: instance.num_vars + 1]
        result.model = model
        if instance.objective is None:
            result.status = SATISFIABLE
            break
        value = instance.objective_value(model)
        result.value = value
        result.bounds.append(value)
        if on_improve:
            on_improve(value)
        bound = canonicalize(PbConstraint(tuple(instance.objective), "<", value))
        if bound == [CONTRADICTION]:
            result.status = OPTIMUM
            break
        for c in bound:
            encode_constraint(store, registry, c, opts)
    result.stats = store.snapshot_stats()
    return result


def unit_propagate(clauses: Sequence[Sequence[int]], units: Sequence[int]) -> Optional[set[int]]:
    """Literals implied by ``units`` under unit propagation, or None on conflict."""
    true: set[int] = set()
    pending = list(units)
    while pending:
        for l in pending:
            if l ^ 1 in true:
                return None
            true.add(l)
        pending = []
        for c in clauses:
            if any(l in true for l in c):
                continue
            free = [l for l in c if (l ^ 1) not in true]
            if not free:
                return None
            if len(free) == 1 and free[0] not in pending:
                pending.append(free[0])
    return true
