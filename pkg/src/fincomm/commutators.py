"""Matrices M(alpha, beta), the term condition, the TC and symmetric
commutators, and the diagonal-square congruence Delta_delta."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import (DEFAULT_BUDGET, Algebra, Square, Subuniverse,
                      _require_congruence, diagonal_square, generate_subpower)
from .congruence import (congruence_join, generate_congruence,
                         largest_congruence_below)
from .partition import Partition
from .report import format_quad, yes_no


@dataclass(frozen=True)
class MatrixSet:
    """M(alpha, beta) as a subuniverse of ``A**4``.

    Quad ``(a, b, c, d)`` is the matrix ``[a b; c d]``: columns are
    alpha-related, rows beta-related.
    """
    algebra: Algebra
    alpha: Partition
    beta: Partition
    closure: Subuniverse

    @property
    def quads(self) -> np.ndarray:
        return self.closure.rows.astype(np.int64)

    def __len__(self) -> int:
        return len(self.closure)

    def __contains__(self, quad) -> bool:
        return tuple(quad) in self.closure

    def substitution(self, j: int) -> tuple[str, tuple[int, int]]:
        """Role of generator ``j``: ``('alpha', (a, a'))`` or ``('beta', (b, b'))``."""
        a, b, c, d = self.closure.generators[j]
        if a == b and c == d and self.alpha.related(a, c):
            return "alpha", (a, c)
        return "beta", (a, b)

    def explain(self, quad) -> "QuadExplanation":
        i = self.closure.index(quad)
        term = self.closure.term(i)
        used = sorted(_vars(term))
        subs = tuple((j,) + self.substitution(j) for j in used)
        return QuadExplanation(tuple(int(v) for v in quad), term, subs)


def _vars(t) -> set[int]:
    from .algebra import term_variables
    return term_variables(t)


@dataclass(frozen=True)
class QuadExplanation:
    """A quad with the term and the alpha/beta pairs that produce it.

    The top row is the term at the first components of every pair, the
    bottom row varies the alpha arguments, the right column the beta ones.
    """
    quad: tuple[int, int, int, int]
    term: object
    substitution: tuple[tuple[int, str, tuple[int, int]], ...]

    def lines(self) -> list[tuple[str, str]]:
        items = [("quad", format_quad(self.quad)), ("term", str(self.term))]
        for j, role, (x, y) in self.substitution:
            items.append((f"x{j}", f"{role}-pair ({x},{y})"))
        return items


@lru_cache(maxsize=512)
def alpha_beta_matrices(alg: Algebra, alpha: Partition, beta: Partition,
                        budget: int = DEFAULT_BUDGET) -> MatrixSet:
    """Closure of ``(a,a,a',a')`` for ``a alpha a'`` and ``(b,b',b,b')`` for ``b beta b'``."""
    _require_congruence(alg, alpha, "alpha")
    _require_congruence(alg, beta, "beta")
    gens = [(a, a, c, c) for a, c in alpha.pairs()]
    gens += [(b, d, b, d) for b, d in beta.pairs()]
    return MatrixSet(alg, alpha, beta, generate_subpower(alg, 4, gens, budget))


def transpose_quads(quads: np.ndarray) -> np.ndarray:
    return quads[:, [0, 2, 1, 3]]


def column_swap_quads(quads: np.ndarray) -> np.ndarray:
    return quads[:, [1, 0, 3, 2]]


def row_swap_quads(quads: np.ndarray) -> np.ndarray:
    return quads[:, [2, 3, 0, 1]]


def centralizes(alg: Algebra, alpha: Partition, beta: Partition, delta: Partition):
    """C(alpha, beta; delta): ``a delta b`` forces ``c delta d`` in every quad.

    Returns ``(True, None)`` or ``(False, QuadExplanation)``.
    """
    ms = alpha_beta_matrices(alg, alpha, beta)
    q = ms.quads
    lab = delta.array
    bad = np.nonzero((lab[q[:, 0]] == lab[q[:, 1]]) & (lab[q[:, 2]] != lab[q[:, 3]]))[0]
    if len(bad) == 0:
        return True, None
    return False, ms.explain(q[bad[0]])


def _least_delta(alg: Algebra, quads_list: list[np.ndarray]) -> Partition:
    delta = Partition.equality(alg.size)
    while True:
        lab = delta.array
        forced = []
        for q in quads_list:
            hit = q[(lab[q[:, 0]] == lab[q[:, 1]]) & (lab[q[:, 2]] != lab[q[:, 3]])]
            if len(hit):
                forced.append(np.unique(hit[:, 2:4], axis=0))
        if not forced:
            return delta
        pairs = np.concatenate(forced).tolist()
        delta = generate_congruence(alg, delta.spanning_pairs() + pairs)


def tc_commutator(alg: Algebra, alpha: Partition, beta: Partition) -> Partition:
    """[alpha, beta]: least delta with C(alpha, beta; delta)."""
    return _least_delta(alg, [alpha_beta_matrices(alg, alpha, beta).quads])


def sym_commutator(alg: Algebra, alpha: Partition, beta: Partition) -> Partition:
    """[alpha, beta]_s: least delta with C(alpha, beta; delta) and C(beta, alpha; delta)."""
    q = alpha_beta_matrices(alg, alpha, beta).quads
    return _least_delta(alg, [q, transpose_quads(q)])


# --- A x_delta A ------------------------------------------------------------

@dataclass(frozen=True)
class SquareContext:
    base: Algebra
    delta: Partition
    square: Square
    eta0: Partition
    eta1: Partition
    Delta: Partition

    def lift0(self, gamma: Partition) -> Partition:
        return self.square.lift(gamma, 0)

    def lift1(self, gamma: Partition) -> Partition:
        return self.square.lift(gamma, 1)

    def describe(self, p: Partition) -> str:
        """Blocks of a partition of the square, elements shown as pairs."""
        pairs = self.square.pairs
        return " | ".join(" ".join(f"({pairs[j][0]},{pairs[j][1]})" for j in b)
                          for b in p.blocks())


@lru_cache(maxsize=256)
def square_context(alg: Algebra, delta: Partition) -> SquareContext:
    sq = diagonal_square(alg, delta)
    diag = set(sq.diagonal())
    e = Partition.from_labels([0 if j in diag else 1 for j in range(len(sq.pairs))])
    Delta = largest_congruence_below(sq.algebra, e)
    return SquareContext(alg, delta, sq, sq.projection_kernel(0),
                         sq.projection_kernel(1), Delta)


def delta_delta(alg: Algebra, delta: Partition) -> Partition:
    """Largest congruence of ``A x_delta A`` whose classes do not mix diagonal
    and off-diagonal pairs (indexed like ``diagonal_square(alg, delta).pairs``)."""
    return square_context(alg, delta).Delta


@dataclass(frozen=True)
class SquareMeet:
    label: str
    gamma: Partition
    delta: Partition
    meet: Partition

    @property
    def is_zero(self) -> bool:
        return self.meet.is_equality


@dataclass(frozen=True)
class Theorem35Report:
    alpha: Partition
    beta: Partition
    sym: Partition
    meets: tuple[SquareMeet, ...]
    lin: Partition

    @property
    def applicable(self) -> bool:
        return self.sym.is_equality

    @property
    def meets_zero(self) -> bool:
        return all(m.is_zero for m in self.meets)

    @property
    def predicts_lin_zero(self) -> bool:
        return self.applicable and self.meets_zero

    @property
    def consistent(self) -> bool:
        return not self.predicts_lin_zero or self.lin.is_equality

    def items(self) -> list[tuple[str, str]]:
        out = [("alpha", str(self.alpha)), ("beta", str(self.beta)),
               ("sym-commutator", str(self.sym))]
        for m in self.meets:
            out.append((f"meet[{m.label}]", f"{'0' if m.is_zero else 'nonzero'} "
                        f"(gamma={m.gamma} delta={m.delta} classes={m.meet.num_blocks})"))
        if not self.applicable:
            out.append(("premise [a,b]_s = 0", "fails; prediction inapplicable"))
        else:
            out.append(("premise [a,b]_s = 0", "holds"))
            out.append(("predicts [a,b]_l = 0", yes_no(self.meets_zero)))
        out.append(("lin-commutator", str(self.lin)))
        out.append(("consistent", yes_no(self.consistent)))
        return out


def square_meet(alg: Algebra, gamma: Partition, delta: Partition) -> Partition:
    """gamma_0 ^ eta_1 ^ Delta_delta on ``A x_delta A``."""
    ctx = square_context(alg, delta)
    return ctx.lift0(gamma).meet(ctx.eta1).meet(ctx.Delta)


def theorem35_check(alg: Algebra, alpha: Partition, beta: Partition) -> Theorem35Report:
    """Evaluate the three square meets and cross-check the linear commutator."""
    from .linear import lin_commutator

    ab = alpha.meet(beta)
    meets = tuple(SquareMeet(label, g, d, square_meet(alg, g, d))
                  for label, g, d in (("alpha,beta", alpha, beta),
                                      ("beta,alpha", beta, alpha),
                                      ("alpha^beta,alpha^beta", ab, ab)))
    return Theorem35Report(alpha, beta, sym_commutator(alg, alpha, beta), meets,
                           lin_commutator(alg, alpha, beta))


@dataclass(frozen=True)
class ComplementReport:
    Delta1: Partition
    meets_zero: tuple[bool, bool]
    joins_total: tuple[bool, bool]
    abelian: bool
    context: SquareContext

    @property
    def complements(self) -> bool:
        return all(self.meets_zero) and all(self.joins_total)

    @property
    def quasi_affine_certified(self) -> bool:
        return self.abelian and self.complements

    def items(self) -> list[tuple[str, str]]:
        return [("Delta_1", self.context.describe(self.Delta1)),
                ("Delta_1 ^ eta_0 = 0", yes_no(self.meets_zero[0])),
                ("Delta_1 ^ eta_1 = 0", yes_no(self.meets_zero[1])),
                ("Delta_1 v eta_0 = 1", yes_no(self.joins_total[0])),
                ("Delta_1 v eta_1 = 1", yes_no(self.joins_total[1])),
                ("complements kernels", yes_no(self.complements)),
                ("abelian", yes_no(self.abelian)),
                ("quasi-affine (certified)", "yes" if self.quasi_affine_certified
                 else "not certified by this test")]


def complement_check(alg: Algebra) -> ComplementReport:
    """Is Delta_1 a complement of both projection kernels in Con(A^2)?"""
    n = alg.size
    one = Partition.total(n)
    ctx = square_context(alg, one)
    sq = ctx.square.algebra
    D = ctx.Delta
    meets = tuple(D.meet(eta).is_equality for eta in (ctx.eta0, ctx.eta1))
    joins = tuple(congruence_join(sq, D, eta).is_total for eta in (ctx.eta0, ctx.eta1))
    abelian = tc_commutator(alg, one, one).is_equality
    return ComplementReport(D, meets, joins, abelian, ctx)
