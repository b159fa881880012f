"""Independent, deliberately naive reference implementations used as test
oracles.  None of these import the numpy closure engine or the HNF code."""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from fincomm.algebra import Algebra, App, Var, eval_term
from fincomm.partition import Partition


# --- closure ---------------------------------------------------------------

def naive_closure(alg: Algebra, k: int, gens) -> set[tuple[int, ...]]:
    """Fixpoint of applying every operation to every argument tuple."""
    elems = {tuple(g) for g in gens}
    while True:
        new = set()
        for op in alg.ops:
            for args in itertools.product(sorted(elems), repeat=op.arity):
                t = tuple(op(*(a[i] for a in args)) for i in range(k))
                if t not in elems:
                    new.add(t)
        if not new:
            return elems
        elems |= new


def syntactic_term_tables(alg: Algebra, m: int, max_depth: int = 6) -> set[tuple[int, ...]]:
    """Tables of all terms up to ``max_depth`` built as explicit trees."""
    cube = list(itertools.product(range(alg.size), repeat=m))
    terms = {tuple(eval_term(alg, Var(i), c) for c in cube): Var(i) for i in range(m)}
    for _ in range(max_depth):
        found = dict(terms)
        for op in alg.ops:
            for args in itertools.product(list(terms.values()), repeat=op.arity):
                t = App(op.name, tuple(args))
                table = tuple(eval_term(alg, t, c) for c in cube)
                found.setdefault(table, t)
        if len(found) == len(terms):
            break
        terms = found
    return set(terms)


# --- congruences -----------------------------------------------------------

def compatible(alg: Algebra, p: Partition) -> bool:
    lab = p.labels
    n = alg.size
    for op in alg.ops:
        for args in itertools.product(range(n), repeat=op.arity):
            for i in range(op.arity):
                for y in range(n):
                    if lab[y] == lab[args[i]]:
                        other = args[:i] + (y,) + args[i + 1:]
                        if lab[op(*args)] != lab[op(*other)]:
                            return False
    return True


def partitions(n: int):
    def grow(prefix, mx):
        if len(prefix) == n:
            yield Partition(tuple(prefix))
            return
        for v in range(mx + 2):
            yield from grow(prefix + [v], max(mx, v))
    if n == 0:
        yield Partition(())
    else:
        yield from grow([0], 0)


def all_congruences(alg: Algebra) -> list[Partition]:
    return [p for p in partitions(alg.size) if compatible(alg, p)]


def least_congruence_containing(alg, pairs) -> Partition:
    cands = [c for c in all_congruences(alg) if all(c.related(a, b) for a, b in pairs)]
    return min(cands, key=lambda c: -c.num_blocks)


# --- term condition on an explicit matrix set ---------------------------------

def oracle_matrices(alg: Algebra, alpha: Partition, beta: Partition):
    gens = [(a, a, c, c) for a, c in alpha.pairs()] + [(b, d, b, d) for b, d in beta.pairs()]
    return naive_closure(alg, 4, gens)


def oracle_centralizes(quads, delta: Partition) -> bool:
    return all(delta.related(c, d) for a, b, c, d in quads if delta.related(a, b))


def oracle_tc(alg, alpha, beta, cons=None) -> Partition:
    quads = oracle_matrices(alg, alpha, beta)
    cons = cons or all_congruences(alg)
    ok = [d for d in cons if oracle_centralizes(quads, d)]
    least = [d for d in ok if all(d <= e for e in ok)]
    assert len(least) == 1
    return least[0]


def oracle_sym(alg, alpha, beta, cons=None) -> Partition:
    quads = oracle_matrices(alg, alpha, beta)
    trans = {(a, c, b, d) for a, b, c, d in quads}
    cons = cons or all_congruences(alg)
    ok = [d for d in cons if oracle_centralizes(quads, d) and oracle_centralizes(trans, d)]
    least = [d for d in ok if all(d <= e for e in ok)]
    assert len(least) == 1
    return least[0]


# --- integer lattices ----------------------------------------------------------

def euclid_basis(vectors, dim: int) -> list[list[int]]:
    """Echelon basis by repeated min-absolute-value subtraction (no xgcd)."""
    rows = [list(v) for v in vectors if any(v)]
    basis = []
    for col in range(dim):
        while True:
            active = [r for r in rows if r[col] != 0]
            if len(active) <= 1:
                break
            pivot = min(active, key=lambda r: abs(r[col]))
            for r in active:
                if r is not pivot:
                    q = r[col] // pivot[col]
                    for i in range(dim):
                        r[i] -= q * pivot[i]
            rows = [r for r in rows if any(r)]
        active = [r for r in rows if r[col] != 0]
        if active:
            basis.append(active[0])
            rows = [r for r in rows if r is not active[0]]
    return basis


def euclid_member(basis, v) -> bool:
    v = list(v)
    for row in basis:
        col = next(i for i, x in enumerate(row) if x)
        if any(v[:col]):
            return False
        if v[col] % row[col]:
            return False
        q = v[col] // row[col]
        v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


def in_rational_span(vectors, target) -> bool:
    """Exact rank test over the rationals."""
    def rank(rows):
        m = [[Fraction(x) for x in r] for r in rows]
        rk = 0
        cols = len(m[0]) if m else 0
        for c in range(cols):
            piv = next((i for i in range(rk, len(m)) if m[i][c] != 0), None)
            if piv is None:
                continue
            m[rk], m[piv] = m[piv], m[rk]
            for i in range(len(m)):
                if i != rk and m[i][c] != 0:
                    f = m[i][c] / m[rk][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[rk])]
            rk += 1
        return rk
    vectors = [list(v) for v in vectors]
    return rank(vectors + [list(target)]) == rank(vectors) if vectors else not any(target)


def bounded_member(vectors, target, bound: int = 6):
    """``True`` if found with coefficients in ``[-bound, bound]``, ``False`` if
    the target is outside the rational span, ``None`` if inconclusive."""
    return bounded_members(vectors, [target], bound)[0]


def bounded_members(vectors, targets, bound: int = 6) -> list:
    """``bounded_member`` for many targets, enumerating the box once."""
    targets = [tuple(int(x) for x in t) for t in targets]
    if not vectors:
        return [not any(t) for t in targets]
    V = np.asarray(vectors, dtype=np.int64)
    side = 2 * bound + 1
    coeffs = np.indices((side,) * len(vectors), dtype=np.int64).reshape(len(vectors), -1).T - bound
    sums = coeffs @ V
    # encode each reachable vector as one integer
    off = int(np.abs(sums).max()) + 1
    weights = (2 * off + 1) ** np.arange(V.shape[1], dtype=np.int64)
    reach = set(np.unique((sums + off) @ weights).tolist())

    def code(t):
        if max(map(abs, t), default=0) >= off:
            return None
        return int(sum((x + off) * int(w) for x, w in zip(t, weights)))
    out = []
    for t in targets:
        if code(t) in reach:
            out.append(True)
        elif not in_rational_span(vectors, t):
            out.append(False)
        else:
            out.append(None)
    return out


# --- groups --------------------------------------------------------------------

class GroupOracle:
    """Subgroups and commutator subgroups from a multiplication table."""

    def __init__(self, alg: Algebra):
        self.n = alg.size
        op = alg.ops[0]
        self.mul = [[op(x, y) for y in range(self.n)] for x in range(self.n)]
        self.e = next(x for x in range(self.n) if all(self.mul[x][y] == y for y in range(self.n)))
        self.inv = [next(y for y in range(self.n) if self.mul[x][y] == self.e)
                    for x in range(self.n)]

    def generated(self, gens) -> frozenset:
        out = {self.e} | set(gens)
        while True:
            new = {self.mul[x][y] for x in out for y in out} - out
            if not new:
                return frozenset(out)
            out |= new

    def normal_subgroups(self) -> list[frozenset]:
        subs = set()
        for k in range(4):
            for gens in itertools.combinations(range(self.n), k):
                subs.add(self.generated(gens))
        return sorted((h for h in subs if all(
            self.mul[self.mul[g][x]][self.inv[g]] in h for g in range(self.n) for x in h)),
            key=sorted)

    def commutator(self, M, N) -> frozenset:
        m, i = self.mul, self.inv
        return self.generated({m[m[m[a][b]][i[a]]][i[b]] for a in M for b in N})

    def congruence(self, H) -> Partition:
        return Partition.from_labels([min(self.mul[x][h] for h in H) for x in range(self.n)])
