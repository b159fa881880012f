"""Searches for terms satisfying Mal'cev conditions, and the congruence
inclusion (with its counterexample) built from two-variable identities.

Identities are decided by evaluation in the algebra itself, which is the
same as deciding them in the variety it generates.  Term existence,
however, is certified for this algebra's term operations only.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

import numpy as np

from .algebra import (DEFAULT_BUDGET, Algebra, BudgetExceeded, TermOperation,
                      as_term_operation, free_term_operations)
from .ceq import Ceq, Compose, Join, Meet, Var, check_ceq_env, joins, meets
from .commutators import tc_commutator
from .congruence import congruence_lattice
from .partition import Partition

LETTERS = "xyzwuvst"


@dataclass(frozen=True)
class NotFound:
    """No term found.  ``complete`` is false when a budget cut the search short."""
    reason: str
    complete: bool = True

    def __bool__(self) -> bool:
        return False


def pattern_text(p: tuple[int, ...]) -> str:
    return ",".join(LETTERS[v] for v in p)


def pattern_values(n: int, arity: int, patterns: np.ndarray, letters: int) -> np.ndarray:
    """Table positions of ``f(p)`` for every pattern and every assignment.

    Result has shape ``(len(patterns), n**letters)``; assignments are in
    lexicographic order of ``(value of x, value of y, ...)``.
    """
    assign = np.array(list(itertools.product(range(n), repeat=letters)), dtype=np.int64)
    if len(patterns) == 0:
        return np.zeros((0, len(assign)), dtype=np.int64)
    args = assign[:, patterns]                          # (assign, patterns, arity)
    weights = n ** np.arange(arity - 1, -1, -1, dtype=np.int64)
    return (args @ weights).T


def all_patterns(arity: int, letters: int) -> np.ndarray:
    return np.array(list(itertools.product(range(letters), repeat=arity)),
                    dtype=np.int64).reshape(-1, arity)


# --- two-variable identity systems ------------------------------------------

@dataclass(frozen=True)
class TaylorCertificate:
    """Idempotent ``f`` with, for each position ``i``, an identity
    ``f(left) = f(right)`` over ``{x, y}`` where ``left[i] = x`` and
    ``right[i] = y``.  Holds in this algebra, hence in its variety."""
    algebra: Algebra
    f: TermOperation
    rows: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    @property
    def n(self) -> int:
        return self.f.arity

    def row_texts(self) -> list[str]:
        return [f"f({pattern_text(l)}) = f({pattern_text(r)})" for l, r in self.rows]

    def verify(self) -> bool:
        n = self.algebra.size
        if not self.f.is_idempotent(n):
            return False
        table = np.asarray(self.f.table)
        for i, (l, r) in enumerate(self.rows):
            if l[i] != 0 or r[i] != 1:
                return False
            pos = pattern_values(n, self.n, np.array([l, r]), 2)
            if not (table[pos[0]] == table[pos[1]]).all():
                return False
        return True

    def serialize(self) -> str:
        lines = [f"arity {self.n}", f"term {self.f.term}"]
        lines += [f"row {i + 1}: {t}" for i, t in enumerate(self.row_texts())]
        return "\n".join(lines) + "\n"


def _rows_for(values: np.ndarray, pats: np.ndarray, arity: int):
    """First (left, right) pattern pair per position, or ``None`` if some
    position has none.  ``values[p]`` is the value row of pattern ``p``."""
    groups: dict[bytes, list[int]] = {}
    for p in range(len(pats)):
        groups.setdefault(values[p].tobytes(), []).append(p)
    rows = []
    for i in range(arity):
        found = None
        for p in range(len(pats)):
            if pats[p, i] != 0:
                continue
            match = next((q for q in groups[values[p].tobytes()] if pats[q, i] == 1), None)
            if match is not None:
                found = (tuple(int(v) for v in pats[p]), tuple(int(v) for v in pats[match]))
                break
        if found is None:
            return None
        rows.append(found)
    return tuple(rows)


def find_lemma43_term(alg: Algebra, max_arity: int = 3, budget: int = DEFAULT_BUDGET):
    """First certificate by arity, then free-algebra order, then pattern order."""
    if max_arity < 2:
        raise ValueError("max_arity must be at least 2")
    n = alg.size
    for arity in range(2, max_arity + 1):
        try:
            free = free_term_operations(alg, arity, budget)
        except BudgetExceeded as exc:
            return NotFound(f"unknown beyond arity {arity - 1}: {exc}", complete=False)
        pats = all_patterns(arity, 2)
        pos = pattern_values(n, arity, pats, 2)
        diag = np.arange(n) * sum(n ** k for k in range(arity))
        rows = free.rows
        idem = np.nonzero((rows[:, diag] == np.arange(n)).all(axis=1))[0]
        for j in idem.tolist():
            found = _rows_for(rows[j][pos], pats, arity)
            if found is not None:
                return TaylorCertificate(alg, free.operation(j), found)
    return NotFound(f"no term of arity 2..{max_arity}")


@dataclass(frozen=True)
class Lemma49Report:
    """Per nonempty ``K`` (1-based positions) the first identity whose
    ``K``-restricted variable sets differ, or ``None``.  Relative to the
    alphabet size used."""
    arity: int
    alphabet: int
    found: tuple[tuple[frozenset, tuple | None], ...]

    @property
    def holds(self) -> bool:
        return all(w is not None for _, w in self.found)

    def items(self) -> list[tuple[str, str]]:
        out = [("holds", f"{'yes' if self.holds else 'no'} (alphabet of {self.alphabet} letters)")]
        for K, w in self.found:
            key = "K={" + ",".join(map(str, sorted(K))) + "}"
            out.append((key, "none" if w is None else
                        f"f({pattern_text(w[0])}) = f({pattern_text(w[1])})"))
        return out


def check_lemma49_term(alg: Algebra, f, alphabet_size: int = 2) -> Lemma49Report:
    op = as_term_operation(alg, f)
    n, arity = alg.size, op.arity
    if not op.is_idempotent(n):
        raise ValueError("the term operation must be idempotent")
    if alphabet_size > len(LETTERS):
        raise ValueError(f"alphabet size is limited to {len(LETTERS)}")
    pats = all_patterns(arity, alphabet_size)
    vals = np.asarray(op.table)[pattern_values(n, arity, pats, alphabet_size)]
    groups: dict[bytes, list[int]] = {}
    for p in range(len(pats)):
        groups.setdefault(vals[p].tobytes(), []).append(p)
    results = []
    for size in range(1, arity + 1):
        for K in itertools.combinations(range(arity), size):
            hit = None
            for p in range(len(pats)):
                left = {int(pats[p, j]) for j in K}
                for q in groups[vals[p].tobytes()]:
                    if {int(pats[q, j]) for j in K} != left:
                        hit = (tuple(int(v) for v in pats[p]), tuple(int(v) for v in pats[q]))
                        break
                if hit:
                    break
            results.append((frozenset(k + 1 for k in K), hit))
    return Lemma49Report(arity, alphabet_size, tuple(results))


# --- difference terms -------------------------------------------------------

@dataclass(frozen=True)
class DifferenceReport:
    holds: bool
    theta: Partition | None = None
    a: int | None = None
    b: int | None = None
    side: str = ""

    def items(self) -> list[tuple[str, str]]:
        if self.holds:
            return [("holds", "yes")]
        return [("holds", "no"), ("theta", str(self.theta)),
                ("pair", f"({self.a},{self.b})"), ("failing side", self.side)]


def _difference_data(alg: Algebra):
    """Per congruence: its pairs, ``[theta, theta]`` labels and table positions
    of ``d(b,b,a)`` and ``d(a,b,b)``."""
    n = alg.size
    out = []
    for theta in congruence_lattice(alg):
        pairs = np.array(theta.pairs(), dtype=np.int64).reshape(-1, 2)
        a, b = pairs[:, 0], pairs[:, 1]
        comm = tc_commutator(alg, theta, theta).array
        out.append((theta, a, b, comm, b * n * n + b * n + a, a * n * n + b * n + b))
    return out


def _check_rows(rows: np.ndarray, data, exact_left: bool) -> np.ndarray:
    ok = np.ones(len(rows), dtype=bool)
    for theta, a, b, comm, left, right in data:
        if exact_left:
            ok &= (rows[:, left] == a).all(axis=1)
        else:
            ok &= (comm[rows[:, left]] == comm[a]).all(axis=1)
        ok &= (comm[rows[:, right]] == comm[a]).all(axis=1)
    return ok


def _difference_check(alg: Algebra, d, exact_left: bool) -> DifferenceReport:
    op = as_term_operation(alg, d, 3)
    t = np.asarray(op.table)
    for theta, a, b, comm, left, right in _difference_data(alg):
        lv, rv = t[left], t[right]
        bad_l = (lv != a) if exact_left else (comm[lv] != comm[a])
        bad_r = comm[rv] != comm[a]
        bad = np.nonzero(bad_l | bad_r)[0]
        if len(bad):
            k = int(bad[0])
            side = "d(b,b,a)" if bad_l[k] else "d(a,b,b)"
            return DifferenceReport(False, theta, int(a[k]), int(b[k]), side)
    return DifferenceReport(True)


def weak_difference_check(alg: Algebra, d) -> DifferenceReport:
    """``d(b,b,a) [t,t] a [t,t] d(a,b,b)`` for every congruence t and ``a t b``."""
    return _difference_check(alg, d, exact_left=False)


def difference_check(alg: Algebra, d) -> DifferenceReport:
    """As the weak check, with ``d(b,b,a) = a`` exactly."""
    return _difference_check(alg, d, exact_left=True)


def _find_ternary(alg: Algebra, budget: int, exact_left: bool):
    try:
        free = free_term_operations(alg, 3, budget)
    except BudgetExceeded as exc:
        return NotFound(f"unknown: {exc}", complete=False)
    ok = np.nonzero(_check_rows(free.rows, _difference_data(alg), exact_left))[0]
    if len(ok) == 0:
        return NotFound("no ternary term operation passes")
    return free.operation(int(ok[0]))


def find_weak_difference_term(alg: Algebra, budget: int = DEFAULT_BUDGET):
    """First ternary term operation passing the weak difference check.  This
    certifies the condition in ``alg`` only, not in every member of its variety."""
    return _find_ternary(alg, budget, exact_left=False)


def find_difference_term(alg: Algebra, budget: int = DEFAULT_BUDGET):
    return _find_ternary(alg, budget, exact_left=True)


# --- congruence inclusion from identities -----------------------------------

@dataclass(frozen=True)
class CeqSynthesisData:
    """For each identity ``i`` (1-based): ``L[i]``/``Lp[i]`` are the positions
    holding ``x``/``y`` on the left, ``R[i]``/``Rp[i]`` on the right."""
    n: int
    L: tuple[frozenset, ...]
    Lp: tuple[frozenset, ...]
    R: tuple[frozenset, ...]
    Rp: tuple[frozenset, ...]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("synthesis needs at least two identities (n > 1)")
        N = set(range(1, self.n + 1))
        if not all(len(s) == self.n for s in (self.L, self.Lp, self.R, self.Rp)):
            raise ValueError(f"expected {self.n} index sets of each kind")
        for i in range(1, self.n + 1):
            L, Lp, R, Rp = self.L[i - 1], self.Lp[i - 1], self.R[i - 1], self.Rp[i - 1]
            if L & Lp or L | Lp != N or R & Rp or R | Rp != N:
                raise ValueError(f"row {i}: index sets do not partition 1..{self.n}")
            if i not in L or i not in Rp:
                raise ValueError(f"row {i}: position {i} must hold x on the left "
                                 f"and y on the right")

    @classmethod
    def from_patterns(cls, rows) -> "CeqSynthesisData":
        """Rows of ``(left, right)`` patterns with 0 for ``x`` and 1 for ``y``."""
        n = len(rows)
        L, Lp, R, Rp = [], [], [], []
        for left, right in rows:
            if len(left) != n or len(right) != n:
                raise ValueError(f"every pattern must have {n} entries")
            L.append(frozenset(k + 1 for k, v in enumerate(left) if v == 0))
            Lp.append(frozenset(k + 1 for k, v in enumerate(left) if v == 1))
            R.append(frozenset(k + 1 for k, v in enumerate(right) if v == 0))
            Rp.append(frozenset(k + 1 for k, v in enumerate(right) if v == 1))
        return cls(n, tuple(L), tuple(Lp), tuple(R), tuple(Rp))

    @classmethod
    def from_certificate(cls, cert: TaylorCertificate) -> "CeqSynthesisData":
        return cls.from_patterns(cert.rows)

    @classmethod
    def parse(cls, text: str) -> "CeqSynthesisData":
        """Lines like ``f(x,y) = f(y,x)``; ``#`` comments and blank lines ignored."""
        rows = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            m = re.fullmatch(r"f\(([^()]*)\)\s*=\s*f\(([^()]*)\)", line)
            if m is None:
                raise ValueError(f"line {lineno}: expected f(...) = f(...)")
            sides = []
            for side in m.groups():
                letters = [t.strip() for t in side.split(",")]
                if any(t not in ("x", "y") for t in letters):
                    raise ValueError(f"line {lineno}: arguments must be x or y")
                sides.append(tuple(0 if t == "x" else 1 for t in letters))
            rows.append(tuple(sides))
        if not rows:
            raise ValueError("no identities given")
        return cls.from_patterns(rows)


def _a(i: int) -> Var:
    return Var(f"a{i}")


def _b(i: int) -> Var:
    return Var(f"b{i}")


def synthesize_lemma46_inclusion(data: CeqSynthesisData) -> Ceq:
    """``/\\(a_i o b_i) <= (\\/a_i /\\ D) \\/ (\\/b_i /\\ D)`` with
    ``D = /\\(g \\/ t_i)``, ``g = /\\(a_i \\/ b_i)`` and
    ``t_i = (\\/_{L_i} a \\/ \\/_{L'_i} b) /\\ (\\/_{R_i} a \\/ \\/_{R'_i} b)``."""
    idx = range(1, data.n + 1)
    gamma = meets([Join(_a(i), _b(i)) for i in idx])
    thetas = []
    for i in idx:
        left = joins([_a(k) for k in sorted(data.L[i - 1])] + [_b(k) for k in sorted(data.Lp[i - 1])])
        right = joins([_a(k) for k in sorted(data.R[i - 1])] + [_b(k) for k in sorted(data.Rp[i - 1])])
        thetas.append(Meet(left, right))
    D = meets([Join(gamma, t) for t in thetas])
    lhs = meets([Compose(_a(i), _b(i)) for i in idx])
    rhs = Join(Meet(joins([_a(i) for i in idx]), D), Meet(joins([_b(i) for i in idx]), D))
    names = tuple(f"a{i}" for i in idx) + tuple(f"b{i}" for i in idx)
    return Ceq(lhs, rhs, inclusion=True, variables=names)


@dataclass(frozen=True)
class Lemma46Counterexample:
    """Universe ``a = 0``, ``b = 1``, ``u_i = i + 1`` with no operations."""
    algebra: Algebra
    env: dict
    pair: tuple[int, int]
    inclusion: Ceq
    lhs: np.ndarray
    rhs: np.ndarray

    def items(self) -> list[tuple[str, str]]:
        out = [("universe", "a=0 b=1 " + " ".join(f"u{i}={i + 1}"
                                                    for i in range(1, self.algebra.size - 1)))]
        out += [(name, str(p)) for name, p in self.env.items()]
        out.append(("violating pair", f"({self.pair[0]},{self.pair[1]})"))
        out.append(("rhs classes", str(Partition.from_matrix(self.rhs))))
        return out


def lemma46_counterexample(data: CeqSynthesisData) -> Lemma46Counterexample:
    n = data.n
    alg = Algebra.from_tables(f"Lemma46Set{n + 2}", n + 2, [])
    env = {}
    for i in range(1, n + 1):
        env[f"a{i}"] = Partition.from_blocks(n + 2, [[0, i + 1]])
    for i in range(1, n + 1):
        env[f"b{i}"] = Partition.from_blocks(n + 2, [[1, i + 1]])
    inc = synthesize_lemma46_inclusion(data)
    holds, pair, ev = check_ceq_env(alg, inc, env)
    lhs, rhs = ev(inc.lhs), ev(inc.rhs)
    if holds or not lhs[0, 1] or rhs[0, 1]:
        raise AssertionError("the constructed structure does not refute the inclusion at (a,b)")
    return Lemma46Counterexample(alg, env, (0, 1), inc, lhs, rhs)
