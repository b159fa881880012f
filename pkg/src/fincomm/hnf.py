"""Integer lattices in ``Z^n`` kept in Hermite normal form, with exact
Python-int arithmetic and optional tracking of how each basis vector is
built from the inserted generators."""

from __future__ import annotations

from typing import Iterable, Sequence


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, s, t)`` with ``g = gcd(a, b) >= 0`` and ``s*a + t*b = g``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def _axpy(x: list[int], k: int, y: Sequence[int]) -> None:
    """``x += k*y`` in place."""
    if k:
        for i, v in enumerate(y):
            if v:
                x[i] += k * v


def _combine(p: dict[int, int], a: int, q: dict[int, int], b: int) -> dict[int, int]:
    out = {}
    for key in p.keys() | q.keys():
        v = a * p.get(key, 0) + b * q.get(key, 0)
        if v:
            out[key] = v
    return out


def _pivot(v: Sequence[int]) -> int:
    for i, x in enumerate(v):
        if x:
            return i
    return -1


class IntLattice:
    """Row-style HNF basis of a sublattice of ``Z^dim``.

    Rows are ordered by strictly increasing pivot column, pivots are
    positive, and entries above each pivot lie in ``[0, pivot)``.  When
    ``track=True`` each row also carries ``{generator id: coefficient}``.
    """

    def __init__(self, dim: int, track: bool = False):
        self.dim = dim
        self.track = track
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []
        self.combos: list[dict[int, int]] = []

    @classmethod
    def span(cls, dim: int, vectors: Iterable[Sequence[int]], track: bool = False) -> "IntLattice":
        lat = cls(dim, track)
        for i, v in enumerate(vectors):
            lat.add(v, i)
        return lat

    @property
    def rank(self) -> int:
        return len(self.rows)

    def basis(self) -> list[tuple[int, ...]]:
        return [tuple(r) for r in self.rows]

    def add(self, vector: Sequence[int], gen_id: int | None = None) -> bool:
        """Insert a generator; returns whether the lattice grew."""
        v = [int(x) for x in vector]
        if len(v) != self.dim:
            raise ValueError(f"vector of length {len(v)} in a lattice of dimension {self.dim}")
        combo = {gen_id: 1} if self.track else {}
        grew = False
        r = 0
        while True:
            p = _pivot(v)
            if p < 0:
                break
            while r < len(self.pivots) and self.pivots[r] < p:
                r += 1
            if r == len(self.pivots) or self.pivots[r] > p:
                if v[p] < 0:
                    v = [-x for x in v]
                    combo = {k: -c for k, c in combo.items()}
                self.rows.insert(r, v)
                self.pivots.insert(r, p)
                self.combos.insert(r, combo)
                grew = True
                break
            row = self.rows[r]
            a, b = row[p], v[p]
            if b % a == 0:
                q = b // a
                _axpy(v, -q, row)
                if self.track and q:
                    combo = _combine(combo, 1, self.combos[r], -q)
                continue
            g, s, t = xgcd(a, b)
            new_row = [s * x + t * y for x, y in zip(row, v)]
            v = [(a // g) * y - (b // g) * x for x, y in zip(row, v)]
            if self.track:
                old = self.combos[r]
                self.combos[r] = _combine(old, s, combo, t)
                combo = _combine(combo, a // g, old, -(b // g))
            self.rows[r] = new_row
            grew = True
        if grew:
            self._reduce()
        return grew

    def _reduce(self) -> None:
        for r in range(len(self.rows)):
            p = self.pivots[r]
            piv = self.rows[r][p]
            for above in range(r):
                q = self.rows[above][p] // piv
                if q:
                    _axpy(self.rows[above], -q, self.rows[r])
                    if self.track:
                        self.combos[above] = _combine(self.combos[above], 1,
                                                      self.combos[r], -q)

    def coordinates(self, vector: Sequence[int]) -> list[int] | None:
        """Coefficients on the basis rows, or ``None`` if not a member."""
        v = [int(x) for x in vector]
        coeffs = [0] * len(self.rows)
        for r, p in enumerate(self.pivots):
            if _pivot(v) == -1:
                break
            if _pivot(v) < p:
                return None
            q, rem = divmod(v[p], self.rows[r][p])
            if rem:
                return None
            coeffs[r] = q
            _axpy(v, -q, self.rows[r])
        return coeffs if _pivot(v) == -1 else None

    def __contains__(self, vector: Sequence[int]) -> bool:
        return self.coordinates(vector) is not None

    def express(self, vector: Sequence[int]) -> dict[int, int] | None:
        """Generator coefficients summing to ``vector`` (needs ``track``)."""
        if not self.track:
            raise ValueError("lattice was built without generator tracking")
        coeffs = self.coordinates(vector)
        if coeffs is None:
            return None
        out: dict[int, int] = {}
        for c, combo in zip(coeffs, self.combos):
            if c:
                out = _combine(out, 1, combo, c)
        return out

    def is_hnf(self) -> bool:
        prev = -1
        for r, p in enumerate(self.pivots):
            row = self.rows[r]
            if p <= prev or _pivot(row) != p or row[p] <= 0:
                return False
            if any(not 0 <= self.rows[a][p] < row[p] for a in range(r)):
                return False
            prev = p
        return True
