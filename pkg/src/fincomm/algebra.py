"""Finite algebras, terms, and the subpower closure engine.

Elements of an algebra of size ``n`` are the integers ``0..n-1``.  An
operation of arity ``r`` is a total table of ``n**r`` values listed in
lexicographic order of the argument tuples.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .partition import Partition

DEFAULT_BUDGET = 5_000_000

# entries per scratch array in one closure chunk
_CHUNK_ENTRIES = 1 << 21

# a closure may perform at most this many table lookups (applications times
# tuple length) per unit of element budget before it is reported over budget
WORK_PER_ELEMENT = 100


class AlgebraError(ValueError):
    """Malformed algebra, term, or algebra file."""


class BudgetExceeded(RuntimeError):
    """A closure grew past its element budget, or did too many table lookups
    (``work`` is then the lookup limit that was reached)."""

    def __init__(self, what: str, partial_size: int, budget: int, work: int | None = None):
        if work is None:
            msg = f"{what}: element budget {budget} exceeded (partial size {partial_size})"
        else:
            msg = (f"{what}: work limit of {work} table lookups reached "
                   f"(partial size {partial_size}, element budget {budget})")
        super().__init__(msg)
        self.what = what
        self.partial_size = partial_size
        self.budget = budget
        self.work = work


def _table_base(length: int, arity: int) -> int:
    if arity == 0:
        return 1
    b = round(length ** (1 / arity))
    while b ** arity > length:
        b -= 1
    while (b + 1) ** arity <= length:
        b += 1
    return b


@dataclass(frozen=True)
class Operation:
    name: str
    arity: int
    table: tuple[int, ...]

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.int64)

    def __call__(self, *args: int) -> int:
        if len(args) != self.arity:
            raise AlgebraError(f"{self.name} takes {self.arity} arguments, "
                               f"got {len(args)}")
        idx = 0
        size = _table_base(len(self.table), self.arity)
        for a in args:
            idx = idx * size + a
        return self.table[idx]


@dataclass(frozen=True, eq=True)
class Algebra:
    name: str
    size: int
    ops: tuple[Operation, ...] = ()

    def __post_init__(self):
        n = self.size
        if n < 1:
            raise AlgebraError("algebra size must be positive")
        names = set()
        for op in self.ops:
            if op.name in names:
                raise AlgebraError(f"duplicate operation name {op.name!r}")
            names.add(op.name)
            if op.arity < 0:
                raise AlgebraError(f"negative arity for {op.name}")
            if len(op.table) != n ** op.arity:
                raise AlgebraError(f"table length {len(op.table)} != "
                                   f"{n ** op.arity} for operation {op.name}")
            for v in op.table:
                if not 0 <= v < n:
                    raise AlgebraError(f"value {v} out of range 0..{n - 1} "
                                       f"in operation {op.name}")

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.name, self.size, self.ops))

    @classmethod
    def from_tables(cls, name: str, size: int,
                    ops: Iterable[tuple[str, int, Sequence[int]]]) -> "Algebra":
        return cls(name, size, tuple(Operation(o, r, tuple(int(v) for v in t))
                                     for o, r, t in ops))

    @classmethod
    def from_functions(cls, name: str, size: int, ops) -> "Algebra":
        """Build tables from Python callables: ``ops`` is ``[(name, arity, fn)]``."""
        built = []
        for o, r, fn in ops:
            table = tuple(int(fn(*args)) % size
                          for args in itertools.product(range(size), repeat=r))
            built.append(Operation(o, r, table))
        return cls(name, size, tuple(built))

    def op(self, name: str) -> Operation:
        for op in self.ops:
            if op.name == name:
                return op
        raise AlgebraError(f"unknown operation {name!r} in algebra {self.name}")

    @property
    def max_arity(self) -> int:
        return max((op.arity for op in self.ops), default=0)

    @cached_property
    def translations(self) -> np.ndarray:
        """All basic unary translations as rows of an ``(m, n)`` array.

        A translation fixes every argument of a basic operation except one.
        Duplicate rows are removed.
        """
        n = self.size
        rows = []
        for op in self.ops:
            r = op.arity
            if r == 0:
                continue
            t = op.array.reshape((n,) * r)
            for i in range(r):
                rows.append(np.moveaxis(t, i, -1).reshape(-1, n))
        if not rows:
            return np.zeros((0, n), dtype=np.int64)
        return np.unique(np.concatenate(rows), axis=0)

    def __str__(self) -> str:
        return format_algebra(self)


# --- algebra file format ---------------------------------------------------

def parse_algebra(text: str) -> Algebra:
    """Parse the ``algebra / size / op`` text format."""
    tokens: list[tuple[str, int]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        tokens.extend((tok, lineno) for tok in line.split())

    pos = 0

    def take(what: str) -> tuple[str, int]:
        nonlocal pos
        if pos >= len(tokens):
            last = tokens[-1][1] if tokens else 1
            raise AlgebraError(f"line {last}: unexpected end of input, "
                               f"expected {what}")
        tok = tokens[pos]
        pos += 1
        return tok

    def take_int(what: str) -> tuple[int, int]:
        tok, ln = take(what)
        try:
            return int(tok), ln
        except ValueError:
            raise AlgebraError(f"line {ln}: expected {what}, got {tok!r}") from None

    def keyword(word: str) -> int:
        tok, ln = take(repr(word))
        if tok != word:
            raise AlgebraError(f"line {ln}: expected {word!r}, got {tok!r}")
        return ln

    keyword("algebra")
    name, _ = take("algebra name")
    keyword("size")
    n, ln = take_int("size")
    if n < 1:
        raise AlgebraError(f"line {ln}: size must be positive")
    ops = []
    while pos < len(tokens):
        keyword("op")
        opname, _ = take("operation name")
        arity, ln = take_int("arity")
        if arity < 0:
            raise AlgebraError(f"line {ln}: negative arity")
        need = n ** arity
        table = []
        for _ in range(need):
            if pos >= len(tokens) or tokens[pos][0] == "op":
                raise AlgebraError(f"line {ln}: table length {len(table)} != "
                                   f"{need} for operation {opname}")
            v, vln = take_int("table value")
            if not 0 <= v < n:
                raise AlgebraError(f"line {vln}: value {v} out of range "
                                   f"0..{n - 1} in operation {opname}")
            table.append(v)
        if pos < len(tokens) and tokens[pos][0] != "op":
            raise AlgebraError(f"line {tokens[pos][1]}: table length exceeds "
                               f"{need} for operation {opname}")
        ops.append((opname, arity, table))
    return Algebra.from_tables(name, n, ops)


def format_algebra(alg: Algebra) -> str:
    lines = [f"algebra {alg.name}", f"size {alg.size}"]
    n = alg.size
    for op in alg.ops:
        lines.append(f"op {op.name} {op.arity}")
        width = n if op.arity else 1
        for start in range(0, len(op.table), width):
            lines.append(" ".join(map(str, op.table[start:start + width])))
    return "\n".join(lines) + "\n"


def load_algebra(path) -> Algebra:
    with open(path, encoding="utf-8") as fh:
        return parse_algebra(fh.read())


# --- terms -----------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    index: int

    def __str__(self) -> str:
        return f"x{self.index}"


@dataclass(frozen=True)
class App:
    op: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.op
        return f"{self.op}({','.join(map(str, self.args))})"


Term = "Var | App"

_TERM_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|(.))")


def parse_term(text: str):
    """Parse ``meet(x0,add(x1,x2))``; ``x<k>`` names variable ``k``."""
    toks = [m.group(1) or m.group(2) for m in _TERM_TOKEN.finditer(text)
            if (m.group(1) or m.group(2) or "").strip()]
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(toks):
            raise AlgebraError(f"unexpected end of term {text!r}")
        tok = toks[pos]
        pos += 1
        if not re.match(r"[A-Za-z_]", tok):
            raise AlgebraError(f"unexpected {tok!r} in term {text!r}")
        if pos < len(toks) and toks[pos] == "(":
            pos += 1
            args = []
            if toks[pos:pos + 1] != [")"]:
                args.append(parse())
                while toks[pos:pos + 1] == [","]:
                    pos += 1
                    args.append(parse())
            if toks[pos:pos + 1] != [")"]:
                raise AlgebraError(f"expected ')' in term {text!r}")
            pos += 1
            return App(tok, tuple(args))
        m = re.fullmatch(r"x(\d+)", tok)
        if m:
            return Var(int(m.group(1)))
        return App(tok, ())

    t = parse()
    if pos != len(toks):
        raise AlgebraError(f"trailing input in term {text!r}")
    return t


def term_variables(t) -> set[int]:
    if isinstance(t, Var):
        return {t.index}
    out: set[int] = set()
    for a in t.args:
        out |= term_variables(a)
    return out


def eval_term(alg: Algebra, t, args: Sequence[int]) -> int:
    """Value of the term operation of ``t`` at ``args``."""
    if isinstance(t, Var):
        if t.index >= len(args):
            raise AlgebraError(f"no value for variable x{t.index}")
        return args[t.index]
    op = alg.op(t.op)
    if len(t.args) != op.arity:
        raise AlgebraError(f"{op.name} has arity {op.arity}, "
                           f"term gives {len(t.args)} arguments")
    return op(*(eval_term(alg, a, args) for a in t.args))


def term_table(alg: Algebra, t, arity: int) -> tuple[int, ...]:
    return tuple(eval_term(alg, t, args)
                 for args in itertools.product(range(alg.size), repeat=arity))


@dataclass(frozen=True)
class TermOperation:
    """An ``arity``-ary term operation: its table and a term producing it."""
    arity: int
    table: tuple[int, ...]
    term: object = None

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.int64)

    def __call__(self, *args: int) -> int:
        idx = 0
        n = _table_base(len(self.table), self.arity)
        for a in args:
            idx = idx * n + a
        return self.table[idx]

    def is_idempotent(self, size: int) -> bool:
        step = sum(size ** i for i in range(self.arity))
        return all(self.table[x * step] == x for x in range(size))

    def __str__(self) -> str:
        return str(self.term) if self.term is not None else f"<table {self.table}>"


def as_term_operation(alg: Algebra, f, arity: int | None = None) -> TermOperation:
    """Coerce a term, term string, table, or TermOperation."""
    if isinstance(f, TermOperation):
        return f
    if isinstance(f, str):
        f = parse_term(f)
    if isinstance(f, (Var, App)):
        if arity is None:
            arity = max(term_variables(f), default=-1) + 1
        return TermOperation(arity, term_table(alg, f, arity), f)
    table = tuple(int(v) for v in f)
    if arity is None:
        arity = 0
        while alg.size ** arity < len(table):
            arity += 1
    if alg.size ** arity != len(table):
        raise AlgebraError(f"table length {len(table)} is not {alg.size}^arity")
    return TermOperation(arity, table)


# --- closure engine --------------------------------------------------------

class _KeyCodec:
    """Order-preserving keys for k-tuples over ``0..n-1``.

    Small cubes use packed base-n int64 codes; others use big-endian byte
    strings viewed as numpy void scalars.  Both sort lexicographically.
    """

    def __init__(self, n: int, k: int):
        self.n, self.k = n, k
        self.dtype = np.uint8 if n <= 256 else np.dtype(">u2")
        self.packed = n ** k < 2 ** 62
        if self.packed:
            self.weights = np.array([n ** (k - 1 - i) for i in range(k)],
                                    dtype=np.int64)

    def keys(self, rows: np.ndarray) -> np.ndarray:
        if self.packed:
            return rows.astype(np.int64, copy=False) @ self.weights
        rows = np.ascontiguousarray(rows, dtype=self.dtype)
        return rows.view(np.dtype((np.void, rows.shape[1] * rows.itemsize))).ravel()

    def empty(self) -> np.ndarray:
        return self.keys(np.zeros((0, self.k), dtype=self.dtype))


def _member(sorted_keys: np.ndarray, keys: np.ndarray) -> np.ndarray:
    if len(sorted_keys) == 0:
        return np.zeros(len(keys), dtype=bool)
    pos = np.searchsorted(sorted_keys, keys)
    pos[pos == len(sorted_keys)] = 0
    return sorted_keys[pos] == keys


class Subuniverse:
    """A finitely generated subuniverse of ``A**k`` with derivations.

    Element ``i`` is ``rows[i]``.  Generators come first, in the order given;
    each later element records the operation and argument indices that first
    produced it, so a term over the generators can be rebuilt for it.
    """

    def __init__(self, algebra: Algebra, k: int, rows: np.ndarray,
                 deriv_op: np.ndarray, deriv_args: np.ndarray,
                 generators: list[tuple[int, ...]]):
        self.algebra = algebra
        self.k = k
        self.rows = rows
        self.deriv_op = deriv_op
        self.deriv_args = deriv_args
        self.generators = generators
        # arity of term operations read off a free-algebra closure
        self.arity = len(generators)
        self._codec = _KeyCodec(algebra.size, k)

    def __len__(self) -> int:
        return len(self.rows)

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.rows[i])

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def tuples(self) -> list[tuple[int, ...]]:
        return [tuple(r) for r in self.rows.tolist()]

    @cached_property
    def _index(self):
        keys = self._codec.keys(self.rows)
        order = np.argsort(keys, kind="stable")
        return keys[order], order

    def find(self, rows) -> np.ndarray:
        """Indices of ``rows`` in this subuniverse, ``-1`` where absent."""
        rows = np.asarray(rows).reshape(-1, self.k)
        if rows.size and (rows.min() < 0 or rows.max() >= self.algebra.size):
            bad = (rows < 0).any(axis=1) | (rows >= self.algebra.size).any(axis=1)
        else:
            bad = np.zeros(len(rows), dtype=bool)
        keys = self._codec.keys(np.where(bad[:, None], 0, rows))
        skeys, order = self._index
        if len(skeys) == 0:
            return np.full(len(rows), -1)
        pos = np.searchsorted(skeys, keys)
        pos[pos == len(skeys)] = 0
        hit = (skeys[pos] == keys) & ~bad
        return np.where(hit, order[pos], -1)

    def index(self, t: Sequence[int]) -> int:
        i = int(self.find([t])[0])
        if i < 0:
            raise KeyError(tuple(t))
        return i

    def __contains__(self, t) -> bool:
        return len(t) == self.k and int(self.find([t])[0]) >= 0

    def derivation(self, i: int):
        """``None`` for a generator, else ``(op_name, arg_indices)``."""
        o = int(self.deriv_op[i])
        if o < 0:
            return None
        op = self.algebra.ops[o]
        return op.name, tuple(int(a) for a in self.deriv_args[i, :op.arity])

    def term(self, i: int, _memo=None):
        """Term over generator variables ``x0, x1, ...`` producing element ``i``."""
        memo = {} if _memo is None else _memo
        stack = [i]
        while stack:
            j = stack[-1]
            if j in memo:
                stack.pop()
                continue
            d = self.derivation(j)
            if d is None:
                memo[j] = Var(self.generators.index(self[j]))
                stack.pop()
                continue
            pending = [a for a in d[1] if a not in memo]
            if pending:
                stack.extend(pending)
                continue
            memo[j] = App(d[0], tuple(memo[a] for a in d[1]))
            stack.pop()
        return memo[i]

    def operation(self, i: int) -> TermOperation:
        """Element ``i`` of a free-algebra closure as a term operation."""
        return TermOperation(self.arity, self[i], self.term(i))


def generate_subpower(alg: Algebra, k: int, gens: Iterable[Sequence[int]],
                      budget: int = DEFAULT_BUDGET) -> Subuniverse:
    """Least subuniverse of ``alg**k`` containing ``gens``.

    Discovery is breadth-first: round ``r`` applies every operation to
    argument tuples containing at least one element found in round ``r-1``,
    and the new elements of a round are appended in lexicographic order.
    Nullary operations fire in the first round.

    Raises ``BudgetExceeded`` once more than ``budget`` elements are found,
    or once more than ``WORK_PER_ELEMENT * budget`` table lookups have been
    spent without closing.
    """
    n = alg.size
    codec = _KeyCodec(n, k)
    dtype = codec.dtype

    gen_list: list[tuple[int, ...]] = []
    for g in gens:
        g = tuple(int(v) for v in g)
        if len(g) != k:
            raise AlgebraError(f"generator {g} does not have length {k}")
        if any(not 0 <= v < n for v in g):
            raise AlgebraError(f"generator {g} has entries outside 0..{n - 1}")
        if g not in gen_list:
            gen_list.append(g)

    max_ar = alg.max_arity
    rows = np.array(gen_list, dtype=dtype).reshape(-1, k)
    deriv_op = np.full(len(rows), -1, dtype=np.int32)
    deriv_args = np.full((len(rows), max_ar), -1, dtype=np.int64)
    seen = np.sort(codec.keys(rows)) if len(rows) else codec.empty()
    if len(rows) > budget:
        raise BudgetExceeded("subpower closure", len(rows), budget)

    old, total = 0, len(rows)
    work, work_limit = 0, WORK_PER_ELEMENT * budget
    first_round = True
    while first_round or total > old:
        frontier = total - old
        elems = rows.astype(np.int64)
        found_keys, found_rows, found_op, found_args = [], [], [], []
        round_seen = codec.empty()
        n_found = 0

        def absorb(res: np.ndarray, opi: int, args: np.ndarray):
            nonlocal round_seen, n_found
            keys = codec.keys(res)
            ukeys, first = np.unique(keys, return_index=True)
            fresh = ~_member(seen, ukeys) & ~_member(round_seen, ukeys)
            if not fresh.any():
                return
            ukeys, first = ukeys[fresh], first[fresh]
            found_keys.append(ukeys)
            found_rows.append(res[first].astype(dtype))
            found_op.append(np.full(len(first), opi, dtype=np.int32))
            pad = np.full((len(first), max_ar), -1, dtype=np.int64)
            pad[:, :args.shape[1]] = args[first]
            found_args.append(pad)
            round_seen = np.sort(np.concatenate([round_seen, ukeys]))
            n_found += len(first)
            if total + n_found > budget:
                raise BudgetExceeded("subpower closure", total + n_found, budget)

        for opi, op in enumerate(alg.ops):
            r = op.arity
            if r == 0:
                if first_round:
                    res = np.full((1, k), op.table[0], dtype=np.int64)
                    absorb(res, opi, np.zeros((1, 0), dtype=np.int64))
                continue
            table = op.array
            for p in range(r):
                dims = [old] * p + [frontier] + [total] * (r - p - 1)
                offs = [0] * p + [old] + [0] * (r - p - 1)
                count = int(np.prod(dims, dtype=object))
                if count == 0:
                    continue
                work += count * k
                if work > work_limit:
                    raise BudgetExceeded("subpower closure", total + n_found, budget, work_limit)
                step = max(1, _CHUNK_ENTRIES // max(k, 1))
                for start in range(0, count, step):
                    flat = np.arange(start, min(count, start + step), dtype=np.int64)
                    idx = np.unravel_index(flat, dims)
                    args = np.stack([idx[i] + offs[i] for i in range(r)], axis=1)
                    tidx = elems[args[:, 0]]
                    for i in range(1, r):
                        tidx = tidx * n + elems[args[:, i]]
                    absorb(table[tidx], opi, args)

        first_round = False
        old = total
        if not found_keys:
            break
        keys = np.concatenate(found_keys)
        order = np.argsort(keys, kind="stable")
        rows = np.concatenate([rows, np.concatenate(found_rows)[order]])
        deriv_op = np.concatenate([deriv_op, np.concatenate(found_op)[order]])
        deriv_args = np.concatenate([deriv_args, np.concatenate(found_args)[order]])
        seen = np.sort(np.concatenate([seen, keys]))
        total = len(rows)

    return Subuniverse(alg, k, rows, deriv_op, deriv_args, gen_list)


def projection_tuples(n: int, m: int) -> list[tuple[int, ...]]:
    """The ``m`` projections as tuples indexed by ``A**m`` in lexicographic order."""
    cube = list(itertools.product(range(n), repeat=m))
    return [tuple(c[i] for c in cube) for i in range(m)]


def free_term_operations(alg: Algebra, m: int,
                         budget: int = DEFAULT_BUDGET) -> Subuniverse:
    """All ``m``-ary term operations, as the subpower generated by projections."""
    if m < 1:
        raise AlgebraError("arity must be at least 1")
    sub = generate_subpower(alg, alg.size ** m, projection_tuples(alg.size, m), budget)
    # projections coincide on a one-element algebra, so keep the arity explicitly
    sub.arity = m
    return sub


# --- quotients and the diagonal square --------------------------------------

def compatibility_violation(alg: Algebra, theta: Partition):
    """First ``(op, args, args')`` breaking compatibility, or ``None``."""
    n = alg.size
    lab = np.asarray(theta.labels)
    for op in alg.ops:
        r = op.arity
        if r == 0:
            continue
        t = op.array.reshape((n,) * r)
        for i in range(r):
            rows = np.moveaxis(t, i, -1).reshape(-1, n)
            img = lab[rows]
            for x in range(n):
                for y in range(x + 1, n):
                    if lab[x] != lab[y]:
                        continue
                    bad = np.nonzero(img[:, x] != img[:, y])[0]
                    if len(bad):
                        c = list(np.unravel_index(int(bad[0]), (n,) * (r - 1)))
                        left = tuple(int(v) for v in c[:i] + [x] + c[i:])
                        right = tuple(int(v) for v in c[:i] + [y] + c[i:])
                        return op.name, left, right
    return None


def is_congruence(alg: Algebra, theta: Partition) -> bool:
    return theta.size == alg.size and compatibility_violation(alg, theta) is None


def _require_congruence(alg: Algebra, theta: Partition, role: str) -> None:
    if theta.size != alg.size:
        raise AlgebraError(f"{role} is a partition of {theta.size} elements, "
                           f"algebra has {alg.size}")
    bad = compatibility_violation(alg, theta)
    if bad is not None:
        op, left, right = bad
        raise AlgebraError(f"{role} {theta} is not a congruence: {op}{left} and "
                           f"{op}{right} fall in different blocks")


def quotient_algebra(alg: Algebra, theta: Partition) -> tuple[Algebra, tuple[int, ...]]:
    """Quotient by a congruence and the block map ``A -> A/theta``."""
    _require_congruence(alg, theta, "theta")
    n, m = alg.size, theta.num_blocks
    reps = [theta.blocks()[b][0] for b in range(m)]
    ops = []
    for op in alg.ops:
        table = [theta.labels[op(*args)]
                 for args in itertools.product(reps, repeat=op.arity)]
        ops.append((op.name, op.arity, table))
    return Algebra.from_tables(f"{alg.name}/{theta.compact()}", m, ops), theta.labels


@dataclass(frozen=True)
class Square:
    """``A x_delta A``: pairs ``(x, y)`` with ``x delta y`` in row-major order."""
    algebra: Algebra
    base: Algebra
    delta: Partition
    pairs: tuple[tuple[int, int], ...]
    index: dict = field(compare=False, hash=False, repr=False)

    def projection_kernel(self, i: int) -> Partition:
        return Partition.from_labels([p[i] for p in self.pairs])

    def lift(self, gamma: Partition, i: int) -> Partition:
        """Preimage of ``gamma`` under the ``i``-th projection."""
        return Partition.from_labels([gamma.labels[p[i]] for p in self.pairs])

    def diagonal(self) -> list[int]:
        return [j for j, (x, y) in enumerate(self.pairs) if x == y]


def diagonal_square(alg: Algebra, delta: Partition) -> Square:
    _require_congruence(alg, delta, "delta")
    pairs = tuple((x, y) for x in range(alg.size) for y in range(alg.size)
                  if delta.related(x, y))
    index = {p: j for j, p in enumerate(pairs)}
    ops = []
    for op in alg.ops:
        table = []
        for args in itertools.product(pairs, repeat=op.arity):
            x = op(*(a[0] for a in args))
            y = op(*(a[1] for a in args))
            table.append(index[(x, y)])
        ops.append((op.name, op.arity, table))
    sq = Algebra.from_tables(f"{alg.name}x[{delta.compact()}]{alg.name}",
                             len(pairs), ops)
    return Square(sq, alg, delta, pairs, index)
