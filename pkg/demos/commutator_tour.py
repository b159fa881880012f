"""
Three commutators on small algebras
===================================

Walk the congruence lattice of a few shipped algebras and compare the
term-condition, symmetric and linear commutators pair by pair.
"""

from fincomm.commutators import sym_commutator, tc_commutator
from fincomm.congruence import congruence_lattice
from fincomm.corpus import corpus_algebra
from fincomm.linear import commutator_chain_report, lin_commutator

for name in ("s3", "z3mid", "c3"):
    alg = corpus_algebra(name)
    lat = congruence_lattice(alg)
    print(f"{alg.name}: {len(lat)} congruences")
    for a in lat:
        for b in lat:
            tc, sym, lin = (f(alg, a, b) for f in (tc_commutator, sym_commutator,
                                                    lin_commutator))
            flag = "" if tc == sym == lin else "   <- differ"
            print(f"  [{a}, {b}]  tc={tc}  sym={sym}  lin={lin}{flag}")

# the chain tc <= sym <= lin <= meet always holds; the report says where it is strict
alg = corpus_algebra("lz2")
top = congruence_lattice(alg).top
for key, value in commutator_chain_report(alg, top, top).items():
    print(f"{key}: {value}")
