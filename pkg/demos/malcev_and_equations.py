"""
From idempotent identities to a congruence inclusion
====================================================

Search for a two-letter identity system of an idempotent term, turn it into a
congruence inclusion, and watch the inclusion hold on a semilattice while
failing on a bare four-element set.
"""

from fincomm.ceq import check_ceq_universal, format_ceq, parse_ceq
from fincomm.corpus import corpus_algebra
from fincomm.malcev import (CeqSynthesisData, find_lemma43_term, find_weak_difference_term,
                            lemma46_counterexample, synthesize_lemma46_inclusion)

s2 = corpus_algebra("s2")
cert = find_lemma43_term(s2)
print(cert.serialize())

data = CeqSynthesisData.from_certificate(cert)
inclusion = synthesize_lemma46_inclusion(data)
print(format_ceq(inclusion))

for name in ("s2", "c3", "diamond"):
    res = check_ceq_universal(corpus_algebra(name), inclusion)
    print(f"{name}: holds={res.holds}")

cx = lemma46_counterexample(data)
for key, value in cx.items():
    print(f"{key}: {value}")

# congruence permutability on Z4, written in the equation language
perm = parse_ceq("a ^ (b o c) <= (a ^ b_3) o c o b o (a ^ c_3)")
print("Z4:", check_ceq_universal(corpus_algebra("z4"), perm).holds)

# weak difference terms: a group has one, a bare set does not
for name in ("z4", "set2"):
    print(name, find_weak_difference_term(corpus_algebra(name)))
