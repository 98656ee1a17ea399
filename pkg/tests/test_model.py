from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import pb_holds
from pbsn.model import (CONTRADICTION, FALSE, TRUE, PbConstraint, PbInstance, canonicalize,
                        contains, disjoint_in, from_dimacs, mk_lit, merge_duplicate_literals,
                        neg, to_dimacs, var_of)

X = {i: mk_lit(i) for i in range(1, 11)}


def test_literal_encoding():
    assert (TRUE, FALSE) == (0, 1)
    assert neg(TRUE) == FALSE
    assert mk_lit(3) == 6 and mk_lit(3, True) == 7
    assert var_of(7) == 3
    assert [to_dimacs(l) for l in (6, 7)] == [3, -3]
    assert from_dimacs(-3) == 7
    assert sorted([7, 2, 6, 3]) == [2, 3, 6, 7]  # var ascending, positive first


def test_sequence_helpers():
    d = [X[1], X[2], X[2], X[3]]
    assert contains(d, [X[2], X[2]])
    assert not contains(d, [X[3], X[3]])
    assert disjoint_in([[X[1], X[2]], [X[2], X[3]]], d)
    assert not disjoint_in([[X[1], X[3]], [X[3]]], d)


def test_merge_cancels_complementary_pair():
    c = PbConstraint(((3, X[1]), (1, neg(X[1]))), "<", 4)
    assert merge_duplicate_literals(c) == PbConstraint(((2, X[1]),), "<", 3)


def test_merge_identity_on_merged_input():
    c = PbConstraint(((2, X[1]), (3, X[2])), "<", 4)
    assert merge_duplicate_literals(c) == c


def test_merge_adds_repeats():
    c = PbConstraint(((1, X[2]), (2, X[2]), (1, X[1])), "<", 2)
    assert merge_duplicate_literals(c) == PbConstraint(((1, X[1]), (3, X[2])), "<", 2)
    with pytest.raises(ValueError):
        merge_duplicate_literals(PbConstraint(c.terms, ">=", 2))


def test_canonical_negative_coefficient():
    # -3 x1 >= -2  <=>  3 x1 <= 2  <=>  3 x1 < 3
    assert canonicalize(PbConstraint(((-3, X[1]),), ">=", -2)) == [
        PbConstraint(((3, X[1]),), "<", 3)]


def test_canonical_trivial_and_contradictory():
    assert canonicalize(PbConstraint(((1, X[1]),), "<", 5)) == []
    assert canonicalize(PbConstraint(((1, X[1]),), "<", 0)) == [CONTRADICTION]
    assert canonicalize(PbConstraint(((1, X[1]), (1, X[2])), ">", 2)) == [CONTRADICTION]


def test_equality_splits_in_two():
    out = canonicalize(PbConstraint(((1, X[1]), (1, X[2])), "=", 1))
    assert len(out) == 2
    assert all(c.relation == "<" for c in out)


terms_st = st.lists(
    st.tuples(st.integers(-9, 9).filter(bool), st.integers(1, 5), st.booleans()),
    min_size=0, max_size=6,
).map(lambda ts: tuple((a, mk_lit(v, n)) for a, v, n in ts))
cons_st = st.builds(PbConstraint, terms_st, st.sampled_from(["<", "<=", "=", ">=", ">"]),
                    st.integers(-25, 25))


@settings(max_examples=300, deadline=None)
@given(cons_st)
def test_canonicalize_equisatisfiable(c):
    out = canonicalize(c)
    for c2 in out:
        assert c2.relation == "<"
        assert all(a > 0 for a, _ in c2.terms)
        lits = [l for _, l in c2.terms]
        assert lits == sorted(set(lits))
        assert len({var_of(l) for l in lits}) == len(lits)
    for bits in product((False, True), repeat=5):
        want = pb_holds(c.terms, c.relation, c.rhs, bits)
        got = all(pb_holds(c2.terms, "<", c2.rhs, bits) for c2 in out)
        assert want == got


@settings(max_examples=200, deadline=None)
@given(cons_st)
def test_canonicalize_idempotent(c):
    out = canonicalize(c)
    again = [d for c2 in out for d in canonicalize(c2)]
    assert again == out


def test_instance_rejects_bad_variable():
    with pytest.raises(ValueError):
        PbInstance([PbConstraint(((1, X[3]),), "<", 1)], None, 2)


def test_instance_evaluation():
    inst = PbInstance([PbConstraint(((1, X[1]), (1, X[2])), ">=", 1)], [(2, X[1]), (3, X[2])], 2)
    assert inst.feasible([False, True, False])
    assert not inst.feasible([False, False, False])
    assert inst.objective_value([False, True, True]) == 5
