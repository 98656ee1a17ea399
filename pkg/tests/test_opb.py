import io
import random

import pytest

from oracles import random_instance
from pbsn.cnf import ClauseStore
from pbsn.model import FALSE, PbConstraint, mk_lit
from pbsn.opb import OpbParseError, format_opb, parse_opb, print_result, write_dimacs


def test_parse_small_instance():
    inst = parse_opb("min: +1 x1 ;\n+2 x1 +3 x2 >= 3 ;\n")
    assert inst.objective == [(1, mk_lit(1))]
    assert inst.constraints == [PbConstraint(((2, mk_lit(1)), (3, mk_lit(2))), ">=", 3)]
    assert inst.num_vars == 2


def test_parse_comment_only():
    inst = parse_opb("* comment only\n")
    assert inst.constraints == [] and inst.objective is None


def test_parse_header_and_negation():
    inst = parse_opb("* #variable= 5 #constraint= 1\n-1 ~x2 +4 x3 <= 2 ;\n")
    assert inst.num_vars == 5
    assert inst.constraints[0].terms == ((-1, mk_lit(2, True)), (4, mk_lit(3)))


@pytest.mark.parametrize("text, line", [
    ("+2 x0 >= 1 ;", 1),
    ("* ok\n+1 x1 >= 1", 2),
    ("+1 x1 x2 >= 1 ;", 1),
    ("+1 y1 >= 1 ;", 1),
    ("+a x1 >= 1 ;", 1),
    ("+1 x1 => 1 ;", 1),
    ("max: +1 x1 ;", 1),
])
def test_parse_errors(text, line):
    with pytest.raises(OpbParseError) as e:
        parse_opb(text)
    assert e.value.line == line


def test_round_trip_random():
    rng = random.Random(7)
    for _ in range(200):
        inst = random_instance(rng)
        back = parse_opb(format_opb(inst))
        assert back.constraints == inst.constraints
        assert back.objective == inst.objective
        assert back.num_vars == inst.num_vars


def _dimacs(store):
    buf = io.StringIO()
    write_dimacs(store, buf)
    return buf.getvalue()


def test_dimacs_single_clause():
    s = ClauseStore()
    s.new_var()
    s.new_var()
    s.add_clause([mk_lit(2, True)])
    assert _dimacs(s) == "p cnf 2 1\n-2 0\n"


def test_dimacs_empty_store():
    assert _dimacs(ClauseStore()) == "p cnf 0 0\n"


def test_dimacs_empty_clause():
    s = ClauseStore.for_problem(3)
    s.add_clause([FALSE])
    assert _dimacs(s) == "p cnf 3 1\n0\n"


def test_result_lines():
    assert print_result("OPTIMUM", [False, True, False], objective_value=3) == [
        "o 3", "s OPTIMUM FOUND", "v x1 -x2"]
    assert print_result("UNSAT") == ["s UNSATISFIABLE"]
    assert print_result("UNKNOWN") == ["s UNKNOWN"]
    assert print_result("SATISFIABLE", [False, True], improvements=[5, 4]) == [
        "o 5", "o 4", "s SATISFIABLE", "v x1"]
