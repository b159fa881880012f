import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import small_algebras
from fincomm.algebra import BudgetExceeded
from fincomm.ceq import (DEFAULT_FAMILY, Ceq, CeqEvalError, CeqSyntaxError, Commutator, Compose,
                         Const, Family, FamilyTerm, Join, Meet, Var, check_ceq_env,
                         check_ceq_universal, eval_ceq_expr, format_ceq, format_expr, joins,
                         meets, parse_ceq)
from fincomm.commutators import tc_commutator
from fincomm.corpus import corpus_algebra
from fincomm.partition import Partition
from oracles import all_congruences


def test_parse_examples():
    assert parse_ceq("a ^ (b o c) <= b_3") == Ceq(
        Meet(Var("a"), Compose(Var("b"), Var("c"))), FamilyTerm(0, 3), True)
    c = parse_ceq("[a,b] = a ^ b")
    assert c == Ceq(Commutator(Var("a"), Var("b")), Meet(Var("a"), Var("b")), False)
    with pytest.raises(CeqSyntaxError) as exc:
        parse_ceq("a ^")
    assert exc.value.position == 3


def test_precedence_and_associativity():
    a, b, c = Var("a"), Var("b"), Var("c")
    assert parse_ceq("a \\/ b /\\ c o a <= 1").lhs == Join(a, Meet(b, Compose(c, a)))
    assert parse_ceq("a o b o c <= 0").lhs == Compose(Compose(a, b), c)
    assert parse_ceq("a \\/ b \\/ c <= 0").lhs == Join(Join(a, b), c)
    assert parse_ceq("a /\\ b ^ c <= 0").lhs == Meet(Meet(a, b), c)


@pytest.mark.parametrize("text,pos", [
    ("a <= ", 5), ("a <= b)", 6), ("(a <= b", 3), ("a <= 2", 5), ("a $ b", 2),
    ("a b", 2), ("vars a\nb <= a", 7),
])
def test_syntax_error_positions(text, pos):
    with pytest.raises(CeqSyntaxError) as exc:
        parse_ceq(text)
    assert exc.value.position == pos


def test_headers():
    c = parse_ceq("vars x, y\nfamily p_,q_ of (x,y,x)\np_2 <= x")
    assert c.variables == ("x", "y") and c.family == Family(("p_", "q_"), ("x", "y", "x"))
    assert c.lhs == FamilyTerm(0, 2)
    with pytest.raises(CeqSyntaxError):
        parse_ceq("vars a\nb_1 <= a")
    with pytest.raises(CeqSyntaxError):
        parse_ceq("[a,b] <= a", commutator=False)
    assert parse_ceq("b_1 <= 1").free_variables() == ("a", "b", "c")
    assert parse_ceq("b_0 <= x").free_variables() == ("x",)


def test_empty_joins_and_meets():
    assert joins([]) == Const(0) and meets([]) == Const(1)
    assert joins([Var("a")]) == Var("a")


names = st.sampled_from(["a", "b", "c", "d"])


def exprs(depth=3):
    leaves = st.one_of(names.map(Var), st.sampled_from([Const(0), Const(1)]),
                       st.tuples(st.integers(0, 1), st.integers(0, 4)).map(
                           lambda t: FamilyTerm(*t)))
    if depth == 0:
        return leaves
    sub = exprs(depth - 1)
    return st.one_of(leaves, *[st.tuples(sub, sub).map(lambda t, k=k: k(*t))
                               for k in (Join, Meet, Compose, Commutator)])


@settings(max_examples=300)
@given(exprs(), exprs(), st.booleans())
def test_print_parse_round_trip(lhs, rhs, inclusion):
    c = Ceq(lhs, rhs, inclusion)
    assert parse_ceq(format_ceq(c)) == c
    declared = Ceq(lhs, rhs, inclusion, variables=("a", "b", "c", "d"))
    assert parse_ceq(format_ceq(declared)) == declared
    fam = Family(("p_", "q_"), ("d", "c", "b"))
    other = Ceq(lhs, rhs, inclusion, family=fam)
    assert parse_ceq(format_ceq(other)) == other


# --- evaluation against a relation-set oracle -----------------------------------

def rel(p: Partition):
    return set(p.pairs())


def oracle_eval(alg, env, e, fam=DEFAULT_FAMILY):
    n = alg.size
    if isinstance(e, Var):
        return rel(env[e.name])
    if isinstance(e, Const):
        return set(itertools.product(range(n), repeat=2)) if e.value else \
            {(x, x) for x in range(n)}
    if isinstance(e, Meet):
        return oracle_eval(alg, env, e.left, fam) & oracle_eval(alg, env, e.right, fam)
    if isinstance(e, Compose):
        r, s = oracle_eval(alg, env, e.left, fam), oracle_eval(alg, env, e.right, fam)
        return {(x, z) for x, y in r for y2, z in s if y == y2}
    if isinstance(e, Join):
        r = oracle_eval(alg, env, e.left, fam) | oracle_eval(alg, env, e.right, fam)
        r |= {(x, x) for x in range(n)} | {(y, x) for x, y in r}
        while True:
            more = {(x, z) for x, y in r for y2, z in r if y == y2} - r
            if not more:
                return r
            r |= more
    if isinstance(e, FamilyTerm):
        a, b, c = (Var(x) for x in fam.bases)
        if e.k == 0:
            return oracle_eval(alg, env, Const(0), fam)
        base = b if e.which == 0 else c
        return oracle_eval(alg, env, Join(base, Meet(a, FamilyTerm(1 - e.which, e.k - 1))), fam)
    raise TypeError(e)


def as_set(m):
    return {(int(x), int(y)) for x, y in np.argwhere(m)}


@settings(max_examples=150)
@given(small_algebras(max_size=3), exprs(2), st.data())
def test_evaluator_matches_oracle(alg, e, data):
    cons = all_congruences(alg)
    env = {v: data.draw(st.sampled_from(cons)) for v in "abcd"}
    try:
        got = as_set(eval_ceq_expr(alg, env, e))
    except CeqEvalError:
        return
    plain = not _has_commutator(e)
    if plain:
        assert got == oracle_eval(alg, env, e)


def _has_commutator(e):
    if isinstance(e, Commutator):
        return True
    if isinstance(e, (Join, Meet, Compose)):
        return _has_commutator(e.left) or _has_commutator(e.right)
    return False


def test_commutator_atom_uses_tc():
    s2 = corpus_algebra("S2")
    one = Partition.total(2)
    got = eval_ceq_expr(s2, {"a": one, "b": one}, Commutator(Var("a"), Var("b")))
    assert (got == tc_commutator(s2, one, one).matrix()).all()
    c3 = corpus_algebra("C3")
    with pytest.raises(CeqEvalError):
        eval_ceq_expr(c3, {"a": Partition.parse("0 2|1", 3), "b": Partition.total(3)},
                      Commutator(Var("a"), Var("b")))
    with pytest.raises(CeqEvalError):
        eval_ceq_expr(c3, {}, Var("a"))


def test_composition_example():
    c3 = corpus_algebra("C3")
    env = {"a": Partition.parse("0 1|2", 3), "b": Partition.parse("0|1 2", 3)}
    assert eval_ceq_expr(c3, env, Compose(Var("a"), Var("b")))[0, 2]


def test_universal_examples():
    z4 = corpus_algebra("Z4")
    c = parse_ceq("a ^ (b o c) <= (a ^ b_3) o c o b o (a ^ c_3)")
    r = check_ceq_universal(z4, c)
    assert r.holds and r.checked == 27
    r = check_ceq_universal(corpus_algebra("S2"), parse_ceq("a ^ (b o c) <= b_2"))
    assert r.holds and r.checked == 8
    # composition is not permutable on C3
    r = check_ceq_universal(corpus_algebra("C3"), parse_ceq("a o b <= b o a"))
    assert not r.holds
    ev_holds, pair, _ = check_ceq_env(corpus_algebra("C3"), parse_ceq("a o b <= b o a"), r.env)
    assert not ev_holds and pair == r.pair


def test_extended_join_flag():
    c3 = corpus_algebra("C3")
    r = check_ceq_universal(c3, parse_ceq("(a o b) \\/ c <= 1"))
    assert r.holds and r.extended_join
    r = check_ceq_universal(c3, parse_ceq("a \\/ b <= 1"))
    assert not r.extended_join


def test_budget():
    with pytest.raises(BudgetExceeded):
        check_ceq_universal(corpus_algebra("C4"), parse_ceq("a ^ b ^ c ^ d <= a"), budget=100)


@settings(max_examples=40)
@given(small_algebras(max_size=3))
def test_universal_agrees_with_oracle(alg):
    c = parse_ceq("a ^ (b \\/ c) <= (a ^ b) \\/ (a ^ c)")
    cons = all_congruences(alg)
    expected = all(oracle_eval(alg, {"a": x, "b": y, "c": z}, c.lhs)
                   <= oracle_eval(alg, {"a": x, "b": y, "c": z}, c.rhs)
                   for x, y, z in itertools.product(cons, repeat=3))
    assert check_ceq_universal(alg, c).holds == expected
