"""Sparse exact elimination over Q.

Vectors are dicts ``{column: Q}`` with no zero entries.  An
:class:`Echelon` keeps rows keyed by their pivot, the smallest column present,
with the pivot entry normalised to 1.  Reduction clears every pivot column of a
vector (not only the leading one), so the residual is the unique
representative of the vector modulo the row span with no pivot support.
"""

from __future__ import annotations

import heapq
from fractions import Fraction

from .rational import Q
from typing import Hashable, Iterable, Mapping

Vector = dict


def axpy(y: dict, a, x: Mapping) -> None:
    """y += a*x in place, purging zeros."""
    for k, v in x.items():
        w = y.get(k)
        if w is None:
            y[k] = a * v
        else:
            w = w + a * v
            if w:
                y[k] = w
            else:
                del y[k]


class Echelon:
    """Incremental row echelon form, optionally tracking combinations.

    With ``track=True`` each stored row remembers which inserted vectors (by
    tag) it is a combination of.  ``add`` then reports a dependency as the
    combination of tags that sums to zero, which is how kernels are found.
    """

    def __init__(self, track: bool = False):
        self.track = track
        self.rows: dict = {}
        self.combos: dict = {}

    def __len__(self):
        return len(self.rows)

    @property
    def pivots(self):
        return self.rows.keys()

    def reduce(self, v: Mapping, combo: dict | None = None):
        """Return (residual, combo) with v = residual + sum combo[tag]*tag-vector.

        When tracking, the returned combo expresses ``v - residual`` in terms of
        inserted vectors; ``combo`` may be pre-seeded and is updated in place.
        """
        v = dict(v)
        rows = self.rows
        if not rows or not v:
            return v, combo
        heap = [k for k in v if k in rows]
        heapq.heapify(heap)
        while heap:
            k = heapq.heappop(heap)
            c = v.get(k)
            if not c:
                continue
            row = rows[k]
            for kk, rv in row.items():
                w = v.get(kk)
                if w is None:
                    v[kk] = -c * rv
                    if kk in rows and kk != k:
                        heapq.heappush(heap, kk)
                else:
                    w = w - c * rv
                    if w:
                        v[kk] = w
                    else:
                        del v[kk]
            if combo is not None and self.track:
                axpy(combo, c, self.combos[k])
        return v, combo

    def add(self, v: Mapping, tag: Hashable = None):
        """Insert v.  Returns None if v was independent, else the dependency.

        The dependency (tracking mode) is a dict of tags summing to zero,
        including ``tag`` itself with coefficient 1.
        """
        seed = {tag: Q(1)} if self.track else None
        combo = {} if self.track else None
        r, combo = self.reduce(v, combo)
        if not r:
            if self.track:
                dep = {t: -c for t, c in combo.items()}
                axpy(dep, Q(1), seed)
                return dep
            return {}
        p = min(r)
        inv = 1 / r[p]
        row = {k: c * inv for k, c in r.items()}
        self.rows[p] = row
        if self.track:
            # row = (v - sum combo)/r[p]
            cb = {t: -c * inv for t, c in combo.items()}
            axpy(cb, inv, seed)
            self.combos[p] = cb
        return None

    def contains(self, v: Mapping) -> bool:
        r, _ = self.reduce(v)
        return not r

    def rank(self) -> int:
        return len(self.rows)


class ColumnSolver:
    """Solve A x = b for many right-hand sides b.

    Columns of A are inserted once into a tracking echelon; a solve is a single
    reduction of b.  The solution uses pivot columns only, every other unknown
    is zero, which makes the answer deterministic.
    """

    def __init__(self, columns: Iterable[tuple[Hashable, Mapping]]):
        self.ech = Echelon(track=True)
        self.kernel: list[dict] = []
        for tag, col in columns:
            dep = self.ech.add(col, tag)
            if dep is not None and dep:
                self.kernel.append(dep)

    def solve(self, b: Mapping):
        r, combo = self.ech.reduce(b, {})
        if r:
            return None
        return combo


def vec_add(a: Mapping, b: Mapping, scale=1) -> dict:
    out = dict(a)
    axpy(out, Q(scale), b)
    return out


def vec_scale(a: Mapping, c) -> dict:
    c = Q(c)
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def rank_of(vectors: Iterable[Mapping]) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e.rank()


def solve_dense(matrix: list[list], rhs: list):
    """Reference dense solver (Gauss-Jordan), used by tests as an oracle.

    Returns one solution with free variables at zero, or None.
    """
    n_rows = len(matrix)
    n_cols = len(matrix[0]) if matrix else 0
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    pivots = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(n_rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    for i in range(r, n_rows):
        if a[i][-1]:
            return None
    x = [Fraction(0)] * n_cols
    for i, c in enumerate(pivots):
        x[c] = a[i][-1]
    return x
