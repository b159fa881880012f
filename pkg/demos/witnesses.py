"""
Certificates for linear-commutator membership
=============================================

A pair in the linear commutator comes with a list of matrices whose signed
vectors add up to e_v - e_u. Each witness converts into a labelled graph that
can be checked without trusting the lattice computation.
"""

from fincomm.congruence import congruence_lattice
from fincomm.corpus import corpus_algebra
from fincomm.linear import REFLEXIVE, labelling_witness, lin_commutator, lin_witness

alg = corpus_algebra("s2")
one = congruence_lattice(alg).top
print("[1,1]_l on S2 =", lin_commutator(alg, one, one))

w = lin_witness(alg, one, one, 0, 1)
for key, value in w.items():
    print(f"{key}: {value}")
print("re-sums to e_1 - e_0:", w.verify())

lab = labelling_witness(w)
print(lab.serialize())
if lab is not REFLEXIVE:
    print("labelling problems:", lab.problems(alg, one, one) or "none")
