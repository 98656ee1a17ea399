"""OPB instance files in, DIMACS CNF and competition result lines out."""

from __future__ import annotations

import re
from typing import Iterable, Optional, Sequence, TextIO

from .cnf import ClauseStore
from .model import PbConstraint, PbInstance, mk_lit, to_dimacs, var_of

_HEADER = re.compile(r"#variable=\s*(\d+)")
_LIT = re.compile(r"(~?)x(\d+)$")
_INT = re.compile(r"[+-]?\d+$")
_OPS = (">=", "<=", "=", ">", "<")


class OpbParseError(ValueError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


def _terms(tokens: list[str], lineno: int) -> list[tuple[int, int]]:
    if len(tokens) % 2:
        raise OpbParseError(lineno, "expected <coefficient> <literal> pairs"
                                    " (non-linear terms are not supported)")
    terms = []
    for coef, lit in zip(tokens[0::2], tokens[1::2]):
        if not _INT.match(coef):
            raise OpbParseError(lineno, f"bad coefficient {coef!r}")
        m = _LIT.match(lit)
        if not m:
            raise OpbParseError(lineno, f"bad literal {lit!r}")
        idx = int(m.group(2))
        if idx == 0:
            raise OpbParseError(lineno, "variable indices start at 1")
        terms.append((int(coef), mk_lit(idx, m.group(1) == "~")))
    return terms


def parse_opb(text: str | Iterable[str]) -> PbInstance:
    """Parse the linear OPB subset (``min:`` objective, one constraint per line)."""
    lines = text.splitlines() if isinstance(text, str) else text
    declared = None
    objective = None
    constraints = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("*"):
            m = _HEADER.search(line)
            if m and declared is None:
                declared = int(m.group(1))
            continue
        if not line.endswith(";"):
            raise OpbParseError(lineno, "missing ';' terminator")
        body = line[:-1]
        if ";" in body:
            raise OpbParseError(lineno, "one statement per line expected")
        if body.startswith("min:"):
            if objective is not None:
                raise OpbParseError(lineno, "duplicate objective")
            objective = _terms(body[4:].split(), lineno)
            continue
        if body.startswith("max:"):
            raise OpbParseError(lineno, "only 'min:' objectives are supported")
        tokens = body.split()
        if len(tokens) < 2 or tokens[-2] not in _OPS:
            raise OpbParseError(lineno, "expected '<terms> <op> <int> ;'")
        if not _INT.match(tokens[-1]):
            raise OpbParseError(lineno, f"bad right-hand side {tokens[-1]!r}")
        terms = _terms(tokens[:-2], lineno)
        constraints.append(PbConstraint(tuple(terms), tokens[-2], int(tokens[-1])))

    used = [var_of(l) for c in constraints for _, l in c.terms]
    used += [var_of(l) for _, l in objective or ()]
    num_vars = max([declared or 0] + used)
    return PbInstance(constraints, objective, num_vars)


def _fmt_terms(terms: Iterable[tuple[int, int]]) -> str:
    return " ".join(f"{a:+d} {'~' if l & 1 else ''}x{l >> 1}" for a, l in terms)


def format_opb(inst: PbInstance) -> str:
    out = [f"* #variable= {inst.num_vars} #constraint= {len(inst.constraints)}"]
    if inst.objective is not None:
        out.append(f"min: {_fmt_terms(inst.objective)} ;".replace("  ", " "))
    for c in inst.constraints:
        out.append(f"{_fmt_terms(c.terms)} {c.relation} {c.rhs} ;".lstrip())
    return "\n".join(out) + "\n"


def write_dimacs(store: ClauseStore, sink: TextIO) -> None:
    sink.write(f"p cnf {store.num_vars} {len(store.clauses)}\n")
    for c in store.clauses:
        sink.write(" ".join([str(to_dimacs(l)) for l in c] + ["0"]) + "\n")


def print_result(
    status: str,
    model: Optional[Sequence[bool]] = None,
    objective_value: Optional[int] = None,
    improvements: Iterable[int] = (),
    num_vars: Optional[int] = None,
) -> list[str]:
    """Competition-style ``o``/``s``/``v`` lines.

    ``status`` is OPTIMUM, SATISFIABLE, UNSAT or UNKNOWN; ``model`` is indexed
    by variable with entry 0 unused.
    """
    lines = [f"o {v}" for v in improvements]
    if objective_value is not None and (not lines or lines[-1] != f"o {objective_value}"):
        lines.append(f"o {objective_value}")
    lines.append("s " + {
        "OPTIMUM": "OPTIMUM FOUND",
        "SATISFIABLE": "SATISFIABLE",
        "UNSAT": "UNSATISFIABLE",
        "UNKNOWN": "UNKNOWN",
    }[status])
    if model is not None and status in ("OPTIMUM", "SATISFIABLE"):
        n = len(model) - 1 if num_vars is None else num_vars
        lines.append("v " + " ".join(
            ("" if model[v] else "-") + f"x{v}" for v in range(1, n + 1)))
    return lines
