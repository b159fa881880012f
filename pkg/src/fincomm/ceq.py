"""Congruence equations and inclusions over join, meet and relational
composition.

Syntax (ASCII)::

    [vars a, b, c]                  optional, fixes variables and their order
    [family b_,c_ of (a,b,c)]       optional; this one is the default
    <expr> <= <expr>   or   <expr> = <expr>

Operators from loosest to tightest: ``\\/`` (join), ``/\\`` or ``^`` (meet),
``o`` (composition), all left-associative.  Atoms are variables, ``0``,
``1``, parenthesized expressions, family atoms such as ``b_3``, and the
commutator ``[x,y]``.  With the default family header, ``b_k`` and ``c_k``
are defined by ``b_0 = c_0 = 0``, ``b_{k+1} = b \\/ (a /\\ c_k)`` and
``c_{k+1} = c \\/ (a /\\ b_k)``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Mapping, Union

import numpy as np

from .algebra import Algebra, BudgetExceeded, is_congruence
from .congruence import congruence_lattice
from .partition import Partition

DEFAULT_CEQ_BUDGET = 10_000_000


class CeqSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class CeqEvalError(ValueError):
    pass


# --- syntax tree ------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: int  # 0 = equality relation, 1 = all pairs


@dataclass(frozen=True)
class Join:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Meet:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Compose:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class FamilyTerm:
    """``b_k`` (which = 0) or ``c_k`` (which = 1) of the declared family."""
    which: int
    k: int


@dataclass(frozen=True)
class Commutator:
    left: "Expr"
    right: "Expr"


Expr = Union[Var, Const, Join, Meet, Compose, FamilyTerm, Commutator]


@dataclass(frozen=True)
class Family:
    prefixes: tuple[str, str] = ("b_", "c_")
    bases: tuple[str, str, str] = ("a", "b", "c")


DEFAULT_FAMILY = Family()


@dataclass(frozen=True)
class Ceq:
    """A statement ``lhs <= rhs`` (``inclusion``) or ``lhs = rhs``."""
    lhs: Expr
    rhs: Expr
    inclusion: bool = True
    family: Family = DEFAULT_FAMILY
    variables: tuple[str, ...] | None = None

    def free_variables(self) -> tuple[str, ...]:
        """Declared variables, else variables in order of first appearance
        (family atoms contribute their base variables)."""
        if self.variables is not None:
            return self.variables
        seen: dict[str, None] = {}
        for e in (self.lhs, self.rhs):
            _collect(e, self.family, seen)
        return tuple(seen)


def _collect(e: Expr, fam: Family, seen: dict) -> None:
    if isinstance(e, Var):
        seen.setdefault(e.name)
    elif isinstance(e, FamilyTerm):
        if e.k > 0:
            for name in fam.bases:
                seen.setdefault(name)
    elif isinstance(e, (Join, Meet, Compose, Commutator)):
        _collect(e.left, fam, seen)
        _collect(e.right, fam, seen)


def joins(items: list[Expr]) -> Expr:
    """Left-nested join; the empty join is ``0``."""
    if not items:
        return Const(0)
    out = items[0]
    for x in items[1:]:
        out = Join(out, x)
    return out


def meets(items: list[Expr]) -> Expr:
    """Left-nested meet; the empty meet is ``1``."""
    if not items:
        return Const(1)
    out = items[0]
    for x in items[1:]:
        out = Meet(out, x)
    return out


# --- parser -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<op>\\/|/\\|<=|[()\[\],=^])|(?P<num>\d+)|"
                    r"(?P<id>[A-Za-z][A-Za-z0-9_]*))")


def _tokenize(text: str, offset: int):
    out = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = pos + len(text[pos:]) - len(text[pos:].lstrip())
            if rest == len(text):
                out.append(("end", "", offset + rest))
                return out
            raise CeqSyntaxError(f"unexpected character {text[rest]!r}", offset + rest)
        kind = m.lastgroup
        out.append((kind, m.group(kind), offset + m.start(kind)))
        pos = m.end()


class _Parser:
    def __init__(self, tokens, family: Family, declared, commutator: bool):
        self.tokens = tokens
        self.i = 0
        self.family = family
        self.declared = declared
        self.commutator = commutator

    def peek(self):
        return self.tokens[self.i]

    def take(self, value=None, kind=None):
        tok = self.tokens[self.i]
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = repr(value) if value is not None else kind
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise CeqSyntaxError(f"expected {want}, found {got}", tok[2])
        self.i += 1
        return tok

    def statement(self) -> Ceq:
        lhs = self.expr()
        tok = self.peek()
        if tok[1] not in ("<=", "="):
            raise CeqSyntaxError("expected '<=' or '='", tok[2])
        self.i += 1
        rhs = self.expr()
        self.take(kind="end")
        return Ceq(lhs, rhs, tok[1] == "<=", self.family, self.declared)

    def expr(self) -> Expr:
        out = self.meet()
        while self.peek()[1] == "\\/":
            self.i += 1
            out = Join(out, self.meet())
        return out

    def meet(self) -> Expr:
        out = self.compose()
        while self.peek()[1] in ("/\\", "^"):
            self.i += 1
            out = Meet(out, self.compose())
        return out

    def compose(self) -> Expr:
        out = self.atom()
        while self.peek() == ("id", "o", self.peek()[2]):
            self.i += 1
            out = Compose(out, self.atom())
        return out

    def atom(self) -> Expr:
        kind, value, pos = self.peek()
        if value == "(":
            self.i += 1
            e = self.expr()
            self.take(")")
            return e
        if value == "[":
            if not self.commutator:
                raise CeqSyntaxError("commutator atoms are disabled", pos)
            self.i += 1
            left = self.expr()
            self.take(",")
            right = self.expr()
            self.take("]")
            return Commutator(left, right)
        if kind == "num":
            if value not in ("0", "1"):
                raise CeqSyntaxError(f"constant must be 0 or 1, not {value}", pos)
            self.i += 1
            return Const(int(value))
        if kind == "id" and value != "o":
            self.i += 1
            for which, prefix in enumerate(self.family.prefixes):
                if value.startswith(prefix) and value[len(prefix):].isdigit():
                    return FamilyTerm(which, int(value[len(prefix):]))
            if self.declared is not None and value not in self.declared:
                raise CeqSyntaxError(f"undeclared variable {value!r}", pos)
            return Var(value)
        got = "end of input" if kind == "end" else repr(value)
        raise CeqSyntaxError(f"expected an operand, found {got}", pos)


_FAMILY_RE = re.compile(r"family\s+([A-Za-z][A-Za-z0-9]*_)\s*,\s*([A-Za-z][A-Za-z0-9]*_)\s+of\s*"
                        r"\(\s*(\w+)\s*,\s*(\w+)\s*,\s*(\w+)\s*\)\s*")
_VARS_RE = re.compile(r"vars\s+([A-Za-z]\w*(?:\s*,\s*[A-Za-z]\w*)*)\s*")


def parse_ceq(text: str, commutator: bool = True) -> Ceq:
    """Parse optional header lines and one statement.

    Error positions are 0-based character offsets into ``text``.
    """
    family, declared = DEFAULT_FAMILY, None
    offset = 0
    lines = text.split("\n")
    body_start = 0
    for idx, line in enumerate(lines):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            offset += len(line) + 1
            body_start = idx + 1
            continue
        if m := _FAMILY_RE.fullmatch(stripped):
            family = Family((m[1], m[2]), (m[3], m[4], m[5]))
        elif stripped.startswith("family"):
            raise CeqSyntaxError("malformed family header", offset + line.index("family"))
        elif m := _VARS_RE.fullmatch(stripped):
            declared = tuple(v.strip() for v in m[1].split(","))
        elif stripped.startswith("vars "):
            raise CeqSyntaxError("malformed vars header", offset + line.index("vars"))
        else:
            break
        offset += len(line) + 1
        body_start = idx + 1
    body = "\n".join(lines[body_start:])
    out = _Parser(_tokenize(body, offset), family, declared, commutator).statement()
    if declared is not None and (_has_family(out.lhs) or _has_family(out.rhs)):
        missing = [b for b in family.bases if b not in declared]
        if missing:
            raise CeqSyntaxError(f"family base {missing[0]!r} is not declared", offset)
    return out


def _has_family(e: Expr) -> bool:
    if isinstance(e, FamilyTerm):
        return True
    if isinstance(e, (Join, Meet, Compose, Commutator)):
        return _has_family(e.left) or _has_family(e.right)
    return False


# --- printer ----------------------------------------------------------------

_PREC = {Join: 0, Meet: 1, Compose: 2}
_SYM = {Join: "\\/", Meet: "/\\", Compose: "o"}


def format_expr(e: Expr, family: Family = DEFAULT_FAMILY) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Const):
        return str(e.value)
    if isinstance(e, FamilyTerm):
        return f"{family.prefixes[e.which]}{e.k}"
    if isinstance(e, Commutator):
        return f"[{format_expr(e.left, family)},{format_expr(e.right, family)}]"
    p = _PREC[type(e)]

    def side(x: Expr, right: bool) -> str:
        s = format_expr(x, family)
        q = _PREC.get(type(x))
        if q is not None and (q < p or (right and q == p)):
            return f"({s})"
        return s

    return f"{side(e.left, False)} {_SYM[type(e)]} {side(e.right, True)}"


def format_ceq(c: Ceq) -> str:
    lines = []
    if c.variables is not None:
        lines.append("vars " + ", ".join(c.variables))
    if c.family != DEFAULT_FAMILY:
        (p, q), (a, b, g) = c.family.prefixes, c.family.bases
        lines.append(f"family {p},{q} of ({a},{b},{g})")
    rel = "<=" if c.inclusion else "="
    lines.append(f"{format_expr(c.lhs, c.family)} {rel} {format_expr(c.rhs, c.family)}")
    return "\n".join(lines) + "\n"


# --- evaluation -------------------------------------------------------------

def is_equivalence(rel: np.ndarray) -> bool:
    r = rel.astype(np.int64)
    return bool(rel.diagonal().all() and (rel == rel.T).all()
                and not ((r @ r > 0) & ~rel).any())


def compose(r: np.ndarray, s: np.ndarray) -> np.ndarray:
    return (r.astype(np.int64) @ s.astype(np.int64)) > 0


@dataclass
class Evaluator:
    """Evaluates expressions for one algebra and environment.

    ``extended_join`` becomes true when a join is applied to a relation
    that is not an equivalence (the equivalence closure of the union is
    used then).
    """
    algebra: Algebra
    env: Mapping[str, Partition]
    family: Family = DEFAULT_FAMILY
    extended_join: bool = False
    _cache: dict = field(default_factory=dict, repr=False)

    def __call__(self, e: Expr) -> np.ndarray:
        got = self._cache.get(e)
        if got is None:
            got = self._eval(e)
            self._cache[e] = got
        return got

    def _eval(self, e: Expr) -> np.ndarray:
        n = self.algebra.size
        if isinstance(e, Var):
            if e.name not in self.env:
                raise CeqEvalError(f"variable {e.name!r} is unassigned")
            return self.env[e.name].matrix()
        if isinstance(e, Const):
            return np.ones((n, n), dtype=bool) if e.value else np.eye(n, dtype=bool)
        if isinstance(e, Meet):
            return self(e.left) & self(e.right)
        if isinstance(e, Compose):
            return compose(self(e.left), self(e.right))
        if isinstance(e, Join):
            r, s = self(e.left), self(e.right)
            if not (is_equivalence(r) and is_equivalence(s)):
                self.extended_join = True
            return Partition.from_matrix(r | s).matrix()
        if isinstance(e, FamilyTerm):
            return self._family(e.which, e.k)
        if isinstance(e, Commutator):
            from .commutators import tc_commutator
            parts = []
            for side in (e.left, e.right):
                rel = self(side)
                p = Partition.from_matrix(rel)
                if not (is_equivalence(rel) and is_congruence(self.algebra, p)):
                    raise CeqEvalError("commutator argument is not a congruence")
                parts.append(p)
            return tc_commutator(self.algebra, *parts).matrix()
        raise TypeError(f"not an expression: {e!r}")

    def _family(self, which: int, k: int) -> np.ndarray:
        a, b, c = (Var(x) for x in self.family.bases)
        if k == 0:
            return self(Const(0))
        prev = FamilyTerm(1 - which, k - 1)
        base = b if which == 0 else c
        return self(Join(base, Meet(a, prev)))


def eval_ceq_expr(alg: Algebra, env: Mapping[str, Partition], e: Expr,
                  family: Family = DEFAULT_FAMILY) -> np.ndarray:
    return Evaluator(alg, env, family)(e)


@dataclass(frozen=True)
class CeqResult:
    holds: bool
    env: dict | None
    pair: tuple[int, int] | None
    checked: int
    extended_join: bool

    def items(self) -> list[tuple[str, str]]:
        out = [("holds", "yes" if self.holds else "no"), ("assignments checked", str(self.checked))]
        if not self.holds:
            for name, p in self.env.items():
                out.append((f"counterexample {name}", str(p)))
            out.append(("violating pair", f"({self.pair[0]},{self.pair[1]})"))
        out.append(("join of non-equivalence used", "yes" if self.extended_join else "no"))
        out.append(("scope", "congruences of this algebra only"))
        return out


def check_ceq_env(alg: Algebra, c: Ceq, env: Mapping[str, Partition]):
    """``(holds, first violating pair or None, evaluator)``."""
    ev = Evaluator(alg, env, c.family)
    lhs, rhs = ev(c.lhs), ev(c.rhs)
    bad = lhs & ~rhs if c.inclusion else lhs ^ rhs
    hits = np.argwhere(bad)
    pair = tuple(int(x) for x in hits[0]) if len(hits) else None
    return pair is None, pair, ev


def _node_count(e: Expr) -> int:
    if isinstance(e, (Join, Meet, Compose, Commutator)):
        return 1 + _node_count(e.left) + _node_count(e.right)
    if isinstance(e, FamilyTerm):
        return 1 + 4 * e.k
    return 1


def check_ceq_universal(alg: Algebra, c: Ceq, budget: int = DEFAULT_CEQ_BUDGET,
                       lattice=None) -> CeqResult:
    """Check the statement for every assignment of congruences of ``alg``.

    Assignments run in lexicographic order of lattice indices with the first
    variable varying slowest; the first counterexample found is returned.
    """
    lat = lattice if lattice is not None else congruence_lattice(alg)
    names = c.free_variables()
    total = len(lat) ** len(names)
    cost = total * (_node_count(c.lhs) + _node_count(c.rhs))
    if cost > budget:
        raise BudgetExceeded("congruence equation check", cost, budget)
    extended = False
    checked = 0
    for combo in itertools.product(range(len(lat)), repeat=len(names)):
        env = {name: lat[i] for name, i in zip(names, combo)}
        holds, pair, ev = check_ceq_env(alg, c, env)
        extended |= ev.extended_join
        checked += 1
        if not holds:
            return CeqResult(False, env, pair, checked, extended)
    return CeqResult(True, None, None, checked, extended)
