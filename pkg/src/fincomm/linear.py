"""The linear commutator via integer-lattice membership, its witnesses, the
restricted-labelling layout of a witness, and the algebra classifier."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .algebra import (DEFAULT_BUDGET, Algebra, BudgetExceeded, compatibility_violation,
                      free_term_operations)
from .commutators import (MatrixSet, QuadExplanation, alpha_beta_matrices, centralizes,
                          sym_commutator, tc_commutator)
from .hnf import IntLattice
from .partition import Partition
from .report import format_quad, yes_no


class NotInCommutator(ValueError):
    pass


class WitnessError(AssertionError):
    pass


def quad_vector(n: int, q) -> tuple[int, ...]:
    """``e_a - e_b - e_c + e_d``."""
    v = [0] * n
    a, b, c, d = (int(x) for x in q)
    v[a] += 1
    v[b] -= 1
    v[c] -= 1
    v[d] += 1
    return tuple(v)


def unit_difference(n: int, u: int, v: int) -> tuple[int, ...]:
    """``e_v - e_u``."""
    out = [0] * n
    out[v] += 1
    out[u] -= 1
    return tuple(out)


@dataclass(frozen=True)
class MatrixLattice:
    """Span of the quad vectors of ``M(alpha, beta)``.

    ``quads[j]`` is the first quad (in closure order) having the ``j``-th
    distinct nonzero vector; generator ids of ``lattice`` index ``quads``.
    """
    matrices: MatrixSet
    quads: tuple[tuple[int, int, int, int], ...]
    lattice: IntLattice = field(compare=False)

    def contains_pair(self, u: int, v: int) -> bool:
        return unit_difference(self.matrices.algebra.size, u, v) in self.lattice


def _distinct_vectors(ms: MatrixSet):
    q = ms.quads
    n = ms.algebra.size
    vec = np.zeros((len(q), n), dtype=np.int64)
    rows = np.arange(len(q))
    for col, sign in ((0, 1), (1, -1), (2, -1), (3, 1)):
        np.add.at(vec, (rows, q[:, col]), sign)
    nz = np.nonzero(vec.any(axis=1))[0]
    _, first = np.unique(vec[nz], axis=0, return_index=True)
    keep = nz[np.sort(first)]
    return [tuple(int(x) for x in q[i]) for i in keep], vec[keep].tolist()


@lru_cache(maxsize=512)
def matrix_lattice(ms: MatrixSet) -> MatrixLattice:
    quads, vectors = _distinct_vectors(ms)
    lat = IntLattice.span(ms.algebra.size, vectors, track=True)
    return MatrixLattice(ms, tuple(quads), lat)


def lin_commutator(alg: Algebra, alpha: Partition, beta: Partition) -> Partition:
    """[alpha, beta]_l = {(u, v) : e_v - e_u in the span of the quad vectors}."""
    ml = matrix_lattice(alpha_beta_matrices(alg, alpha, beta))
    n = alg.size
    labels = list(range(n))
    reps: list[int] = []
    for v in range(n):
        for u in reps:
            if ml.contains_pair(u, v):
                labels[v] = labels[u]
                break
        else:
            reps.append(v)
    result = Partition.from_labels(labels)
    bad = compatibility_violation(alg, result)
    if bad is not None:
        raise AssertionError(f"linear commutator {result} of {alg.name} is not a "
                             f"congruence: {bad}")
    return result


# --- witnesses --------------------------------------------------------------

@dataclass(frozen=True)
class LinWitness:
    """Quads from M(alpha, beta) whose vectors sum to ``e_v - e_u``.

    Not minimized; a valid witness may be much longer than necessary.
    """
    algebra: Algebra
    alpha: Partition
    beta: Partition
    u: int
    v: int
    quads: tuple[tuple[int, int, int, int], ...]

    def vector_sum(self) -> tuple[int, ...]:
        n = self.algebra.size
        total = [0] * n
        for q in self.quads:
            for i, x in enumerate(quad_vector(n, q)):
                total[i] += x
        return tuple(total)

    def problems(self) -> list[str]:
        ms = alpha_beta_matrices(self.algebra, self.alpha, self.beta)
        out = [f"quad {format_quad(q)} is not in M(alpha,beta)"
               for q in self.quads if q not in ms]
        if self.vector_sum() != unit_difference(self.algebra.size, self.u, self.v):
            out.append(f"vector sum {self.vector_sum()} differs from e_{self.v} - e_{self.u}")
        return out

    def verify(self) -> bool:
        return not self.problems()

    def explanations(self) -> list[QuadExplanation]:
        ms = alpha_beta_matrices(self.algebra, self.alpha, self.beta)
        return [ms.explain(q) for q in self.quads]

    def items(self) -> list[tuple[str, str]]:
        out = [("pair", f"({self.u},{self.v})"), ("matrices", str(len(self.quads)))]
        for i, q in enumerate(self.quads):
            out.append((f"matrix[{i}]", format_quad(q)))
        return out


def lin_witness(alg: Algebra, alpha: Partition, beta: Partition, u: int, v: int) -> LinWitness:
    ms = alpha_beta_matrices(alg, alpha, beta)
    ml = matrix_lattice(ms)
    n = alg.size
    if not (0 <= u < n and 0 <= v < n):
        raise ValueError(f"pair ({u},{v}) outside 0..{n - 1}")
    coeffs = ml.lattice.express(unit_difference(n, u, v))
    if coeffs is None:
        raise NotInCommutator(f"({u},{v}) is not in the linear commutator "
                              f"[{alpha}, {beta}]_l")
    quads: list[tuple[int, int, int, int]] = []
    for j in sorted(coeffs):
        a, b, c, d = ml.quads[j]
        k = coeffs[j]
        quads.extend([(a, b, c, d)] * k if k > 0 else [(b, a, d, c)] * -k)
    w = LinWitness(alg, alpha, beta, u, v, tuple(quads))
    bad = w.problems()
    if bad:
        raise WitnessError("; ".join(bad))
    return w


class _Reflexive:
    """Marker for the empty witness of a pair ``(u, u)``."""

    def __repr__(self) -> str:
        return "REFLEXIVE"

    def serialize(self) -> str:
        return "reflexive\n"


REFLEXIVE = _Reflexive()


@dataclass(frozen=True)
class LabellingWitness:
    """``n`` copies of G labelled by twisted matrices ``[a d; c b]``.

    In copy ``i``: top#(2i) = a, top#(2i+1) = d, bottom#(2i) = c,
    bottom#(2i+1) = b.  ``matching[t]`` is the bottom vertex matched to top
    vertex ``t``; ``e`` is the one edge allowed to join distinct labels.
    """
    twisted: tuple[tuple[int, int, int, int], ...]
    matching: tuple[int, ...]
    e: tuple[int, int]

    @property
    def n(self) -> int:
        return len(self.twisted)

    def top_label(self, t: int) -> int:
        a, d, c, b = self.twisted[t // 2]
        return (a, d)[t % 2]

    def bottom_label(self, s: int) -> int:
        a, d, c, b = self.twisted[s // 2]
        return (c, b)[s % 2]

    def untwisted(self) -> list[tuple[int, int, int, int]]:
        return [(a, b, c, d) for a, d, c, b in self.twisted]

    def problems(self, alg: Algebra, alpha: Partition, beta: Partition) -> list[str]:
        out = []
        ms = alpha_beta_matrices(alg, alpha, beta)
        m = 2 * self.n
        if sorted(self.matching) != list(range(m)):
            out.append("matching is not a bijection")
        if self.e[0] >= m or self.e[1] >= m or self.matching[self.e[0]] != self.e[1]:
            out.append("distinguished edge is not a matching edge")
        for t, s in enumerate(self.matching):
            if t != self.e[0] and self.top_label(t) != self.bottom_label(s):
                out.append(f"edge top#{t} -> bottom#{s} joins labels "
                           f"{self.top_label(t)} and {self.bottom_label(s)}")
        for i, (a, d, c, b) in enumerate(self.twisted):
            if (a, b, c, d) not in ms:
                out.append(f"copy {i} does not untwist to a matrix in M(alpha,beta)")
            if not (alpha.related(a, c) and alpha.related(d, b)):
                out.append(f"copy {i} has an alpha-edge joining unrelated labels")
            if not (beta.related(a, b) and beta.related(d, c)):
                out.append(f"copy {i} has a beta-edge joining unrelated labels")
        return out

    def serialize(self) -> str:
        lines = []
        for i, (a, d, c, b) in enumerate(self.twisted):
            lines.append(f"copy {i}")
            lines.append(f"twisted [{a} {d}; {c} {b}]")
            for t in (2 * i, 2 * i + 1):
                if t != self.e[0]:
                    lines.append(f"match top#{t} -> bottom#{self.matching[t]}")
        t, s = self.e
        lines.append(f"distinguished e: top#{t}({self.top_label(t)}) -> "
                     f"bottom#{s}({self.bottom_label(s)})")
        return "\n".join(lines) + "\n"


def parse_labelling_witness(text: str):
    """Inverse of ``LabellingWitness.serialize`` (and of the reflexive marker)."""
    import re

    if text.strip() == "reflexive":
        return REFLEXIVE
    twisted, matching, e = [], {}, None
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("copy "):
            continue
        if m := re.fullmatch(r"twisted \[(\d+) (\d+); (\d+) (\d+)\]", line):
            twisted.append(tuple(int(x) for x in m.groups()))
        elif m := re.fullmatch(r"match top#(\d+) -> bottom#(\d+)", line):
            matching[int(m[1])] = int(m[2])
        elif m := re.fullmatch(r"distinguished e: top#(\d+)\(\d+\) -> bottom#(\d+)\(\d+\)", line):
            e = (int(m[1]), int(m[2]))
            matching[e[0]] = e[1]
        else:
            raise ValueError(f"unrecognized witness line: {line!r}")
    if e is None or sorted(matching) != list(range(2 * len(twisted))):
        raise ValueError("incomplete labelling witness")
    return LabellingWitness(tuple(twisted), tuple(matching[t] for t in range(len(matching))), e)


def labelling_witness(w: LinWitness):
    """Lay a witness out on ``n`` copies of G with a greedy label matching."""
    if w.u == w.v and not w.quads:
        return REFLEXIVE
    twisted = tuple((a, d, c, b) for a, b, c, d in w.quads)
    free: dict[int, list[int]] = {}
    for s in range(2 * len(twisted)):
        a, d, c, b = twisted[s // 2]
        free.setdefault((c, b)[s % 2], []).append(s)
    matching: dict[int, int] = {}
    unmatched_top = []
    for t in range(2 * len(twisted)):
        a, d, c, b = twisted[t // 2]
        label = (a, d)[t % 2]
        if free.get(label):
            matching[t] = free[label].pop(0)
        else:
            unmatched_top.append(t)
    left = [s for ss in free.values() for s in ss]
    if len(unmatched_top) != 1 or len(left) != 1:
        raise WitnessError(f"labels do not telescope: {len(unmatched_top)} top and "
                           f"{len(left)} bottom vertices left unmatched")
    t, s = unmatched_top[0], left[0]
    matching[t] = s
    out = LabellingWitness(twisted, tuple(matching[i] for i in range(len(matching))), (t, s))
    if out.top_label(t) != w.v or out.bottom_label(s) != w.u:
        raise WitnessError("distinguished edge does not run from v to u")
    return out


# --- reports ----------------------------------------------------------------

def _rel(x: Partition, y: Partition) -> str:
    if x == y:
        return "="
    if x <= y:
        return "<"
    return "!<="


@dataclass(frozen=True)
class ChainReport:
    alpha: Partition
    beta: Partition
    tc: Partition
    sym: Partition
    lin: Partition
    meet: Partition

    @property
    def holds(self) -> bool:
        return self.tc <= self.sym <= self.lin <= self.meet

    @property
    def gap(self) -> bool:
        """The symmetric commutator is strictly below the linear one."""
        return self.sym != self.lin

    def items(self) -> list[tuple[str, str]]:
        chain = (f"[a,b] {_rel(self.tc, self.sym)} [a,b]_s {_rel(self.sym, self.lin)} "
                 f"[a,b]_l {_rel(self.lin, self.meet)} a^b")
        return [("alpha", str(self.alpha)), ("beta", str(self.beta)),
                ("tc", str(self.tc)), ("sym", str(self.sym)), ("lin", str(self.lin)),
                ("meet", str(self.meet)), ("chain", chain),
                ("chain holds", yes_no(self.holds)),
                ("sym < lin gap", yes_no(self.gap))]


def commutator_chain_report(alg: Algebra, alpha: Partition, beta: Partition) -> ChainReport:
    return ChainReport(alpha, beta, tc_commutator(alg, alpha, beta),
                       sym_commutator(alg, alpha, beta), lin_commutator(alg, alpha, beta),
                       alpha.meet(beta))


def malcev_positions(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Table positions of ``(x,y,y)`` and ``(y,y,x)`` and the expected ``x``."""
    x, y = np.divmod(np.arange(n * n), n)
    return x * n * n + y * n + y, y * n * n + y * n + x, x


def find_malcev_term(alg: Algebra, budget: int = DEFAULT_BUDGET):
    """First ternary term operation with ``m(x,y,y) = x = m(y,y,x)``, or ``None``."""
    f3 = free_term_operations(alg, 3, budget)
    p1, p2, x = malcev_positions(alg.size)
    rows = f3.rows
    ok = np.nonzero((rows[:, p1] == x).all(axis=1) & (rows[:, p2] == x).all(axis=1))[0]
    return f3.operation(int(ok[0])) if len(ok) else None


@dataclass(frozen=True)
class Classification:
    """``affine`` means term-affine: abelian with a Mal'cev term operation.
    It is ``None`` when the ternary free algebra exceeded the budget."""
    algebra: Algebra
    abelian: bool
    quasi_affine: bool
    affine: bool | None
    tc_violation: QuadExplanation | None
    lin_witness: LinWitness | None
    malcev: object
    note: str = ""

    def headline(self) -> str:
        aff = yes_no(self.affine)
        if self.affine:
            aff += f" (malcev term: {self.malcev.term})"
        return (f"abelian: {yes_no(self.abelian)}  quasi-affine: "
                f"{yes_no(self.quasi_affine)}  affine: {aff}")

    def items(self) -> list[tuple[str, str]]:
        out = [("abelian", yes_no(self.abelian)),
               ("quasi-affine", yes_no(self.quasi_affine)),
               ("affine", yes_no(self.affine))]
        if self.malcev is not None:
            out.append(("malcev term", str(self.malcev.term)))
        out.append(("affine means", "abelian with a Mal'cev term operation"))
        if self.tc_violation is not None:
            out += [(f"tc certificate {k}", v) for k, v in self.tc_violation.lines()]
        if self.lin_witness is not None:
            w = self.lin_witness
            out.append(("lin certificate pair", f"({w.u},{w.v})"))
            out += [("lin certificate matrix", format_quad(q)) for q in w.quads]
        if self.note:
            out.append(("note", self.note))
        return out


def classify(alg: Algebra, budget: int = DEFAULT_BUDGET) -> Classification:
    one = Partition.total(alg.size)
    zero = Partition.equality(alg.size)
    abelian, violation = centralizes(alg, one, one, zero)
    lin = lin_commutator(alg, one, one)
    quasi_affine = lin.is_equality
    witness = None
    if not quasi_affine:
        u, v = next((u, v) for u, v in lin.spanning_pairs())
        witness = lin_witness(alg, one, one, u, v)
    malcev, affine, note = None, False, ""
    if abelian:
        try:
            malcev = find_malcev_term(alg, budget)
            affine = malcev is not None
        except BudgetExceeded as exc:
            affine, note = None, str(exc)
    return Classification(alg, abelian, quasi_affine, affine, violation, witness,
                          malcev, note)
