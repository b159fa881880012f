"""Congruence generation, congruence lattices, and greatest congruences below
an equivalence."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .algebra import Algebra, BudgetExceeded, is_congruence
from .partition import Partition, _UnionFind

DEFAULT_LATTICE_BUDGET = 100_000


def generate_congruence(alg: Algebra, pairs: Iterable[tuple[int, int]]) -> Partition:
    """Least congruence containing ``pairs``.

    Union-find merges; every merge is pushed through all basic translations
    until no new merges happen.
    """
    n = alg.size
    uf = _UnionFind(n)
    work = []
    for a, b in pairs:
        if uf.union(int(a), int(b)):
            work.append((int(a), int(b)))
    trans = alg.translations
    while work:
        a, b = work.pop()
        ta, tb = trans[:, a], trans[:, b]
        diff = ta != tb
        for x, y in zip(ta[diff].tolist(), tb[diff].tolist()):
            if uf.union(x, y):
                work.append((x, y))
    return Partition(uf.labels())


def principal_congruence(alg: Algebra, a: int, b: int) -> Partition:
    return generate_congruence(alg, [(a, b)])


def congruence_join(alg: Algebra, theta: Partition, psi: Partition) -> Partition:
    return generate_congruence(alg, theta.spanning_pairs() + psi.spanning_pairs())


def largest_congruence_below(alg: Algebra, e: Partition) -> Partition:
    """Greatest congruence contained in the equivalence ``e``.

    Moore-style refinement: split blocks by the blocks their images under
    every basic translation fall into, until nothing splits.
    """
    trans = alg.translations
    labels = e.array
    count = e.num_blocks
    while True:
        sig = np.vstack([labels[None, :], labels[trans]]) if len(trans) else labels[None, :]
        _, inv = np.unique(sig.T, axis=0, return_inverse=True)
        refined = Partition.from_labels(inv.ravel().tolist())
        labels = refined.array
        if refined.num_blocks == count:
            return refined
        count = refined.num_blocks


def _lattice_key(p: Partition):
    return (-p.num_blocks, p.labels)


@dataclass(frozen=True)
class ConLattice:
    """Congruences sorted by (block count descending, labels); 0 first, 1 last."""
    algebra: Algebra
    elements: tuple[Partition, ...]
    join_table: tuple[tuple[int, ...], ...]
    meet_table: tuple[tuple[int, ...], ...]
    covers: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, i: int) -> Partition:
        return self.elements[i]

    def __iter__(self):
        return iter(self.elements)

    def index(self, p: Partition) -> int:
        return self.elements.index(p)

    @property
    def bottom(self) -> Partition:
        return self.elements[0]

    @property
    def top(self) -> Partition:
        return self.elements[-1]

    def join(self, i: int, j: int) -> int:
        return self.join_table[i][j]

    def meet(self, i: int, j: int) -> int:
        return self.meet_table[i][j]

    def leq(self, i: int, j: int) -> bool:
        return self.meet_table[i][j] == i


def congruence_lattice(alg: Algebra, budget: int = DEFAULT_LATTICE_BUDGET) -> ConLattice:
    """All congruences, as the join closure of the principal congruences."""
    n = alg.size
    principals: list[Partition] = []
    for a in range(n):
        for b in range(a + 1, n):
            p = principal_congruence(alg, a, b)
            if p not in principals:
                principals.append(p)
    zero = Partition.equality(n)
    found = {zero}
    work = [zero]
    while work:
        x = work.pop()
        for p in principals:
            if p <= x:
                continue
            j = congruence_join(alg, x, p)
            if j not in found:
                found.add(j)
                work.append(j)
                if len(found) > budget:
                    raise BudgetExceeded("congruence lattice", len(found), budget)
    return _build_lattice(alg, sorted(found, key=_lattice_key))


def _build_lattice(alg: Algebra, elements: list[Partition]) -> ConLattice:
    index = {p: i for i, p in enumerate(elements)}
    m = len(elements)
    meet = [[0] * m for _ in range(m)]
    join = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            mij = index[elements[i].meet(elements[j])]
            jij = index[congruence_join(alg, elements[i], elements[j])]
            meet[i][j] = meet[j][i] = mij
            join[i][j] = join[j][i] = jij
    below = [{j for j in range(m) if j != i and meet[i][j] == j} for i in range(m)]
    covers = [(j, i) for i in range(m) for j in below[i]
              if not any(j in below[k] for k in below[i])]
    covers.sort()
    return ConLattice(alg, tuple(elements), tuple(map(tuple, join)),
                      tuple(map(tuple, meet)), tuple(covers))


def all_partitions(n: int) -> list[Partition]:
    """Every partition of ``n`` elements (restricted growth strings)."""
    out = []

    def grow(prefix: list[int], mx: int):
        if len(prefix) == n:
            out.append(Partition(tuple(prefix)))
            return
        for v in range(mx + 2):
            grow(prefix + [v], max(mx, v))

    if n == 0:
        return [Partition(())]
    grow([0], 0)
    return out


def brute_force_congruences(alg: Algebra) -> list[Partition]:
    """Oracle: filter all partitions by compatibility.  Only for ``n <= 5``."""
    if alg.size > 5:
        raise ValueError("brute-force congruence enumeration is limited to n <= 5")
    return sorted((p for p in all_partitions(alg.size) if is_congruence(alg, p)),
                  key=_lattice_key)


def is_meet_semidistributive(lat: ConLattice):
    """``(True, None)`` or ``(False, (a, b, c))`` with lattice indices.

    Tests ``a^b = a^c  =>  a^b = a^(b v c)`` for all triples.
    """
    m = len(lat)
    J, M = lat.join_table, lat.meet_table
    for a, b, c in itertools.product(range(m), repeat=3):
        if M[a][b] == M[a][c] and M[a][b] != M[a][J[b][c]]:
            return False, (a, b, c)
    return True, None


def format_lattice(lat: ConLattice) -> list[tuple[str, str]]:
    items = [("algebra", lat.algebra.name), ("size", str(lat.algebra.size)),
             ("congruences", str(len(lat)))]
    for i, p in enumerate(lat.elements):
        items.append((f"con[{i}]", str(p)))
    items.append(("covers", " ".join(f"{a}<{b}" for a, b in lat.covers) or "-"))
    sd, witness = is_meet_semidistributive(lat)
    items.append(("meet-semidistributive", "yes" if sd else
                  "no (triple %d %d %d)" % witness))
    return items
