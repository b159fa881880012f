import itertools

import pytest
from hypothesis import given, settings, strategies as st

from fincomm.algebra import Algebra, App, as_term_operation, free_term_operations
from fincomm.algebra import Var as TermVar
from fincomm.ceq import Compose, Join, Meet, Var, check_ceq_universal, format_ceq, joins, meets, parse_ceq
from fincomm.commutators import tc_commutator
from fincomm.congruence import congruence_lattice
from fincomm.corpus import corpus_algebra
from fincomm.malcev import (CeqSynthesisData, NotFound, TaylorCertificate, all_patterns,
                            check_lemma49_term, difference_check, find_difference_term,
                            find_lemma43_term, find_weak_difference_term, lemma46_counterexample,
                            pattern_values, synthesize_lemma46_inclusion, weak_difference_check)
from fincomm.partition import Partition
from oracles import syntactic_term_tables

MEET_DATA = "f(x,y) = f(y,x)\nf(y,x) = f(x,y)\n"


def test_pattern_values():
    pats = all_patterns(2, 2)
    assert pats.tolist() == [[0, 0], [0, 1], [1, 0], [1, 1]]
    pos = pattern_values(3, 2, pats, 2)
    assert pos.shape == (4, 9)
    # assignment 3 is x=1, y=0: f(x,y) reads f(1,0), f(y,x) reads f(0,1)
    assert pos[1, 3] == 1 * 3 + 0 and pos[2, 3] == 0 * 3 + 1


def test_lemma43_examples():
    s2 = find_lemma43_term(corpus_algebra("S2"))
    assert s2.n == 2 and str(s2.f.term) == "meet(x0,x1)"
    assert s2.row_texts() == ["f(x,y) = f(y,x)", "f(y,x) = f(x,y)"]
    z2 = find_lemma43_term(corpus_algebra("Z2"))
    assert z2 and z2.n <= 3 and z2.verify()
    none = find_lemma43_term(corpus_algebra("Set2"))
    assert isinstance(none, NotFound) and none.complete and not none


def test_lemma43_budget_is_reported():
    r = find_lemma43_term(corpus_algebra("S3"), budget=100)
    assert isinstance(r, NotFound) and not r.complete


def test_certificate_verify_rejects_tampering():
    cert = find_lemma43_term(corpus_algebra("S2"))
    bad = TaylorCertificate(cert.algebra, as_term_operation(cert.algebra, "x0", 2), cert.rows)
    assert not bad.verify()


def binary_rows_exist(alg, table) -> bool:
    """Oracle: an idempotent binary table has, for both positions, an
    identity over {x, y} with x there on the left and y on the right."""
    n = alg.size
    if any(table[x * n + x] != x for x in range(n)):
        return False
    pats = list(itertools.product(range(2), repeat=2))

    def same(l, r):
        return all(table[(x, y)[l[0]] * n + (x, y)[l[1]]] == table[(x, y)[r[0]] * n + (x, y)[r[1]]]
                   for x in range(n) for y in range(n))
    return all(any(same(l, r) for l in pats for r in pats if l[i] == 0 and r[i] == 1)
               for i in range(2))


TWO_ELEMENT = [Algebra.from_tables(f"B2_{i}", 2, [("f", 2, t)])
               for i, t in enumerate(itertools.product(range(2), repeat=4))]
SMALL = TWO_ELEMENT + [corpus_algebra(n) for n in ("C3", "F2SL", "Z3", "Z3mid", "AffZ3", "Set3")]


@pytest.mark.parametrize("alg", SMALL, ids=lambda a: a.name)
def test_lemma43_certificates_verify(alg):
    cert = find_lemma43_term(alg)
    binary = [t for t in syntactic_term_tables(alg, 2) if binary_rows_exist(alg, t)]
    if cert:
        assert cert.verify()
        for l, r in cert.rows:
            for x, y in itertools.product(range(alg.size), repeat=2):
                val = (x, y)
                assert cert.f(*(val[v] for v in l)) == cert.f(*(val[v] for v in r))
        # search is by arity first
        assert (cert.n == 2) == bool(binary)
    else:
        assert not binary


def test_lemma49_examples():
    s2 = corpus_algebra("S2")
    r = check_lemma49_term(s2, "meet(x0,x1)")
    assert not r.holds
    assert dict((tuple(sorted(K)), w) for K, w in r.found)[(1, 2)] is None
    z2 = corpus_algebra("Z2")
    assert check_lemma49_term(z2, "add(add(x0,x1),x2)").holds
    with pytest.raises(ValueError):
        check_lemma49_term(z2, "add(x0,x1)")
    assert "alphabet of 2 letters" in r.items()[0][1]


def test_lemma49_projection_fails_first_position():
    s2 = corpus_algebra("S2")
    r = check_lemma49_term(s2, as_term_operation(s2, "x0", 2))
    assert dict((tuple(sorted(K)), w) for K, w in r.found)[(1,)] is None


def test_difference_examples():
    z4 = corpus_algebra("Z4")
    minus = as_term_operation(z4, [(x - y + z) % 4 for x, y, z in itertools.product(range(4), repeat=3)])
    assert weak_difference_check(z4, minus).holds
    assert difference_check(z4, minus).holds
    first = as_term_operation(z4, "x0", 3)
    r = weak_difference_check(z4, first)
    assert not r.holds and r.side == "d(b,b,a)"
    # theta = 1, (a,b) = (0,1) is a violation too: d(b,b,a) = 1 but [1,1] = 0
    one = Partition.total(4)
    assert first(1, 1, 0) == 1 and tc_commutator(z4, one, one).is_equality
    s2 = corpus_algebra("S2")
    assert weak_difference_check(s2, as_term_operation(s2, "x2", 3)).holds
    assert difference_check(s2, as_term_operation(s2, "x2", 3)).holds
    r = difference_check(s2, as_term_operation(s2, "x0", 3))
    assert not r.holds and (r.a, r.b) == (0, 1)


def test_find_difference_examples():
    z4 = corpus_algebra("Z4")
    d = find_weak_difference_term(z4)
    assert weak_difference_check(z4, d).holds
    assert difference_check(z4, find_difference_term(z4)).holds
    s2 = corpus_algebra("S2")
    d = find_weak_difference_term(s2)
    assert isinstance(d.term, TermVar)
    r = find_weak_difference_term(corpus_algebra("Set2"))
    assert isinstance(r, NotFound) and r.complete
    r = find_weak_difference_term(corpus_algebra("S3"), budget=100)
    assert isinstance(r, NotFound) and not r.complete


@pytest.mark.parametrize("alg", SMALL, ids=lambda a: a.name)
def test_found_weak_difference_terms_pass_oracle(alg):
    d = find_weak_difference_term(alg)
    if isinstance(d, NotFound):
        assert d.complete
        # no ternary term operation passes: check every one against the oracle
        for t in syntactic_term_tables(alg, 3, max_depth=3) if alg.size == 2 else []:
            op = as_term_operation(alg, t)
            assert any(not (tc_commutator(alg, th, th).related(op(b, b, a), a)
                            and tc_commutator(alg, th, th).related(a, op(a, b, b)))
                       for th in congruence_lattice(alg) for a, b in th.pairs())
        return
    t = d
    for theta in congruence_lattice(alg):
        comm = tc_commutator(alg, theta, theta)
        for a, b in theta.pairs():
            assert comm.related(t(b, b, a), a) and comm.related(a, t(a, b, b))


# --- inclusion synthesis and its refuting structure ------------------------

def a(i):
    return Var(f"a{i}")


def b(i):
    return Var(f"b{i}")


def test_synthesis_meet_instance():
    data = CeqSynthesisData.parse(MEET_DATA)
    assert data.L == (frozenset({1}), frozenset({2}))
    assert data.Lp == (frozenset({2}), frozenset({1}))
    assert data.R == (frozenset({2}), frozenset({1}))
    assert data.Rp == (frozenset({1}), frozenset({2}))
    inc = synthesize_lemma46_inclusion(data)
    gamma = Meet(Join(a(1), b(1)), Join(a(2), b(2)))
    theta1 = Meet(Join(a(1), b(2)), Join(a(2), b(1)))
    theta2 = Meet(Join(a(2), b(1)), Join(a(1), b(2)))
    D = Meet(Join(gamma, theta1), Join(gamma, theta2))
    assert inc.lhs == Meet(Compose(a(1), b(1)), Compose(a(2), b(2)))
    assert inc.rhs == Join(Meet(Join(a(1), a(2)), D), Meet(Join(b(1), b(2)), D))
    assert inc.inclusion and inc.variables == ("a1", "a2", "b1", "b2")
    assert parse_ceq(format_ceq(inc)) == inc


def test_synthesis_rejects_invalid_data():
    with pytest.raises(ValueError):
        CeqSynthesisData.parse("f(y,x) = f(y,x)\nf(y,x) = f(x,y)\n")
    with pytest.raises(ValueError):
        CeqSynthesisData.parse("f(x,y) = f(y,x)\n")
    with pytest.raises(ValueError):
        CeqSynthesisData.parse("g(x,y) = f(y,x)\n")
    with pytest.raises(ValueError):
        CeqSynthesisData.parse("# nothing\n")


def test_counterexample_meet_instance():
    data = CeqSynthesisData.parse(MEET_DATA)
    cx = lemma46_counterexample(data)
    assert cx.algebra.size == 4 and not cx.algebra.ops
    assert cx.pair == (0, 1)
    assert cx.lhs[0, 1] and not cx.rhs[0, 1]
    rhs = Partition.from_matrix(cx.rhs)
    assert rhs.labels[0] not in {rhs.labels[x] for x in (1, 2, 3)}
    assert rhs.labels[1] not in {rhs.labels[x] for x in (0, 2, 3)}
    assert not check_ceq_universal(cx.algebra, cx.inclusion).holds


def test_single_identity_rejected():
    with pytest.raises(ValueError):
        CeqSynthesisData.from_patterns([((0,), (1,))])


def test_from_certificate_matches_parse():
    cert = find_lemma43_term(corpus_algebra("S2"))
    assert CeqSynthesisData.from_certificate(cert) == CeqSynthesisData.parse(MEET_DATA)


@settings(max_examples=60)
@given(st.integers(2, 3).flatmap(lambda n: st.lists(
    st.tuples(st.lists(st.integers(0, 1), min_size=n, max_size=n),
              st.lists(st.integers(0, 1), min_size=n, max_size=n)), min_size=n, max_size=n)))
def test_counterexample_for_any_valid_data(rows):
    rows = [(tuple(l[:i] + [0] + l[i + 1:]), tuple(r[:i] + [1] + r[i + 1:]))
            for i, (l, r) in enumerate(rows)]
    data = CeqSynthesisData.from_patterns(rows)
    cx = lemma46_counterexample(data)
    rhs = Partition.from_matrix(cx.rhs)
    others = set(range(cx.algebra.size))
    for x in (0, 1):
        assert all(not rhs.related(x, y) for y in others - {x})
    assert cx.lhs[0, 1]
