"""Curated small algebras, built in code and shipped as ``.alg`` files."""

from __future__ import annotations

import itertools
from importlib import resources
from pathlib import Path
from typing import Callable, Sequence

from .algebra import Algebra, format_algebra, parse_algebra


def group_from_elements(name: str, elements: Sequence, mul: Callable) -> Algebra:
    index = {e: i for i, e in enumerate(elements)}
    table = [index[mul(x, y)] for x, y in itertools.product(elements, repeat=2)]
    return Algebra.from_tables(name, len(elements), [("mul", 2, table)])


def cyclic(n: int) -> Algebra:
    return Algebra.from_functions(f"Z{n}", n, [("add", 2, lambda x, y: x + y)])


def product_group(name: str, *orders: int) -> Algebra:
    elems = list(itertools.product(*(range(m) for m in orders)))
    return group_from_elements(name, elems, lambda x, y: tuple(
        (a + b) % m for a, b, m in zip(x, y, orders)))


def _compose(p, q):
    return tuple(p[i] for i in q)


def permutation_group(name: str, gens: Sequence[tuple[int, ...]]) -> Algebra:
    ident = tuple(range(len(gens[0])))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = _compose(p, g)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return group_from_elements(name, sorted(seen), _compose)


def quaternion_group() -> Algebra:
    # units 1, i, j, k as 0..3; an element is (sign, unit)
    unit_mul = {(0, u): (0, u) for u in range(4)}
    unit_mul.update({(u, 0): (0, u) for u in range(4)})
    for u in range(1, 4):
        unit_mul[(u, u)] = (1, 0)
    for u, v, w in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        unit_mul[(u, v)] = (0, w)
        unit_mul[(v, u)] = (1, w)

    def mul(x, y):
        s, w = unit_mul[(x[1], y[1])]
        return ((x[0] + y[0] + s) % 2, w)

    elems = [(s, u) for s in range(2) for u in range(4)]
    return group_from_elements("Q8", elems, mul)


def groups() -> list[Algebra]:
    """One representative of every group of order at most 8."""
    out = [cyclic(n) for n in range(1, 9)]
    out.insert(4, product_group("Z2xZ2", 2, 2))
    out += [product_group("Z2xZ4", 2, 4), product_group("Z2xZ2xZ2", 2, 2, 2),
            permutation_group("S3", [(1, 0, 2), (1, 2, 0)]),
            permutation_group("D4", [(1, 2, 3, 0), (3, 2, 1, 0)]),
            quaternion_group()]
    return out


def semilattice(name: str, size: int, below: Sequence[tuple[int, int]]) -> Algebra:
    """Meet-semilattice from a covering list ``(lower, upper)``; meets must exist."""
    leq = {(x, x) for x in range(size)} | set(below)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(leq), repeat=2):
            if b == c and (a, d) not in leq:
                leq.add((a, d))
                changed = True

    def meet(x, y):
        lower = [z for z in range(size) if (z, x) in leq and (z, y) in leq]
        top = [z for z in lower if all((w, z) in leq for w in lower)]
        if len(top) != 1:
            raise ValueError(f"{name}: no meet of {x} and {y}")
        return top[0]

    return Algebra.from_functions(name, size, [("meet", 2, meet)])


def semilattices() -> list[Algebra]:
    return [
        semilattice("S2", 2, [(0, 1)]),
        semilattice("C3", 3, [(0, 1), (1, 2)]),
        semilattice("C4", 4, [(0, 1), (1, 2), (2, 3)]),
        semilattice("F2SL", 3, [(0, 1), (0, 2)]),
        semilattice("Diamond", 4, [(0, 1), (0, 2), (1, 3), (2, 3)]),
        semilattice("Claw", 4, [(0, 1), (0, 2), (0, 3)]),
        semilattice("Fork", 4, [(0, 1), (1, 2), (1, 3)]),
        semilattice("TailV", 4, [(0, 1), (0, 2), (1, 3)]),
    ]


def affine_reduct(base: Algebra) -> Algebra:
    """The reduct of an abelian group to ``x - y + z``."""
    n = base.size
    op = base.ops[0]
    zero = next(e for e in range(n) if all(op(e, x) == x for x in range(n)))
    inv = [next(y for y in range(n) if op(x, y) == zero) for x in range(n)]
    return Algebra.from_functions(f"Aff{base.name}", n,
                                  [("p", 3, lambda x, y, z: op(op(x, inv[y]), z))])


def affine_reducts() -> list[Algebra]:
    bases = [cyclic(2), cyclic(3), cyclic(4), product_group("Z2xZ2", 2, 2)]
    return [affine_reduct(b) for b in bases]


def module_reducts() -> list[Algebra]:
    """Idempotent reducts of modules over rings ``Z_m``."""
    return [Algebra.from_functions("Z3mid", 3, [("m", 2, lambda x, y: 2 * x + 2 * y)]),
            Algebra.from_functions("Z5aff", 5, [("m", 2, lambda x, y: 2 * x + 4 * y)])]


def sets() -> list[Algebra]:
    return [Algebra.from_tables(f"Set{n}", n, []) for n in (1, 2, 3)] + \
        [Algebra.from_tables("Lemma46Set4", 4, [])]


def others() -> list[Algebra]:
    return [Algebra.from_functions("LZ2", 2, [("l", 2, lambda x, y: x)])]


def build_corpus() -> list[Algebra]:
    return groups() + semilattices() + affine_reducts() + module_reducts() + sets() + others()


def file_name(alg: Algebra) -> str:
    return alg.name.lower() + ".alg"


def corpus_dir() -> Path:
    return Path(str(resources.files("fincomm") / "corpus"))


def load_corpus() -> list[Algebra]:
    """The shipped ``.alg`` files, in ``build_corpus`` order."""
    return [parse_algebra((corpus_dir() / file_name(a)).read_text(encoding="utf-8"))
            for a in build_corpus()]


def corpus_algebra(name: str) -> Algebra:
    key = name.lower().removesuffix(".alg")
    for alg in build_corpus():
        if file_name(alg)[:-4] == key:
            return parse_algebra((corpus_dir() / file_name(alg)).read_text(encoding="utf-8"))
    raise KeyError(name)


def write_corpus(directory: Path | str) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for alg in build_corpus():
        path = directory / file_name(alg)
        path.write_text(format_algebra(alg), encoding="utf-8")
        paths.append(path)
    return paths


if __name__ == "__main__":
    import sys

    for p in write_corpus(sys.argv[1] if len(sys.argv) > 1 else corpus_dir()):
        print(p)
