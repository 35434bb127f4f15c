"""Degreewise cohomology of free CDGAs, class projections and lifts.

For each degree n a :class:`HomologySlice` stores

* an echelon of the coboundaries B^n,
* a list of cocycle representatives whose classes form a basis of H^n,
* a tracking echelon of B^n + span(representatives) = Z^n.

The projection ``pi`` reads off the representative coefficients of a vector
reduced against that echelon.  Residual support lies on non-pivot columns, a
fixed complement of Z^n, so ``pi`` is defined on every cochain, vanishes on
B^n, and is a chain map to (H, 0).  Tensor powers of ``pi`` give Künneth
coordinates without ever eliminating in a tensor power.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from .rational import Q
from typing import Mapping

from .algebra import AlgebraMap, Element
from .linalg import ColumnSolver, Echelon, axpy
from .models import Host


class CutoffError(RuntimeError):
    pass


class NotACocycle(ValueError):
    pass


class LiftError(RuntimeError):
    pass


class Complex:
    """The cochain complex underlying a host algebra, sliced by degree."""

    def __init__(self, host: Host, cutoff: int):
        self.host = host
        self.algebra = host.algebra
        self.cutoff = cutoff
        self._index: dict[int, dict] = {}
        self._slices: dict[int, "HomologySlice"] = {}
        self._boundary_solvers: dict[int, ColumnSolver] = {}
        self._dcols: dict[int, list] = {}

    def __repr__(self):
        return f"Complex({self.host.name}, cutoff={self.cutoff})"

    def require(self, n: int):
        if n > self.cutoff:
            raise CutoffError(
                f"{self.host.name}: degree {n} needed but the cutoff is {self.cutoff}"
            )

    def basis(self, n: int):
        return self.algebra.basis(n)

    def index(self, n: int) -> dict:
        idx = self._index.get(n)
        if idx is None:
            idx = {m: i for i, m in enumerate(self.basis(n))}
            self._index[n] = idx
        return idx

    def dim(self, n: int) -> int:
        return len(self.basis(n))

    def to_vec(self, e: Element, n: int) -> dict:
        idx = self.index(n)
        out = {}
        for m, c in e.terms.items():
            i = idx.get(m)
            if i is None:
                raise ValueError(
                    f"term of degree {self.algebra.monomial_degree(m)} in a degree-{n} vector"
                )
            out[i] = c
        return out

    def to_elem(self, v: Mapping, n: int) -> Element:
        b = self.basis(n)
        return Element(self.algebra, {b[i]: c for i, c in v.items()})

    def d_columns(self, n: int) -> list:
        """Images d(e_j) of the degree-n basis as vectors in degree n+1."""
        cols = self._dcols.get(n)
        if cols is None:
            self.require(n + 1)
            d = self.host.d
            idx = self.index(n + 1)
            cols = []
            for m in self.basis(n):
                img = d.on_monomial(m)
                cols.append({idx[mm]: c for mm, c in img.terms.items()})
            self._dcols[n] = cols
        return cols

    def d(self, e: Element) -> Element:
        return self.host.d(e)

    def slice(self, n: int) -> "HomologySlice":
        s = self._slices.get(n)
        if s is None:
            s = HomologySlice(self, n)
            self._slices[n] = s
        return s

    def is_cocycle(self, e: Element) -> bool:
        return not self.host.d(e)

    def is_coboundary(self, e: Element, n: int | None = None):
        """Return w with d(w) = e, or None when e is not exact."""
        if not e:
            return self.algebra.zero()
        if n is None:
            n = e.degree()
            if n is None:
                raise ValueError("inhomogeneous element")
        if self.host.d(e):
            raise NotACocycle(f"element of degree {n} is not a cocycle")
        if n == 0:
            return None
        solver = self._boundary_solvers.get(n)
        if solver is None:
            cols = self.d_columns(n - 1)
            solver = ColumnSolver((j, c) for j, c in enumerate(cols))
            self._boundary_solvers[n] = solver
        x = solver.solve(self.to_vec(e, n))
        if x is None:
            return None
        return self.to_elem(x, n - 1)

    def pi_vec(self, v: Mapping, n: int) -> dict:
        return self.slice(n).pi(v)

    def pi(self, e: Element, n: int | None = None) -> dict:
        if n is None:
            n = e.degree()
            if n is None:
                return {}
        return self.slice(n).pi(self.to_vec(e, n))

    def cohomology_dims(self, max_degree: int) -> list[int]:
        return [self.slice(n).dim_h for n in range(max_degree + 1)]


class HomologySlice:
    def __init__(self, cx: Complex, n: int):
        self.cx = cx
        self.n = n
        cx.require(n + 1)
        boundary = Echelon()
        zech = Echelon(track=True)
        if n > 0:
            for col in cx.d_columns(n - 1):
                if col:
                    boundary.add(col)
                    zech.add(col, "B")
        kernel = Echelon(track=True)
        reps = []
        for j, col in enumerate(cx.d_columns(n)):
            dep = kernel.add(col, j)
            if dep is None:
                continue
            r, _ = boundary.reduce(dep)
            if zech.add(r, len(reps)) is None:
                reps.append(r)
        self.rank_d_in = boundary.rank()
        self.rank_d_out = kernel.rank()
        self.reps = reps
        self.zech = zech
        self._pi_cache: dict = {}

    @property
    def dim_h(self) -> int:
        return len(self.reps)

    def pi(self, v: Mapping) -> dict:
        _, combo = self.zech.reduce(v, {})
        return {k: c for k, c in combo.items() if k != "B" and c}

    def pi_monomial(self, m) -> dict:
        hit = self._pi_cache.get(m)
        if hit is None:
            i = self.cx.index(self.n)[m]
            hit = self.pi({i: Q(1)})
            self._pi_cache[m] = hit
        return hit

    def representative(self, k: int) -> Element:
        return self.cx.to_elem(self.reps[k], self.n)


# ---------------------------------------------------------------------------
# classes


@dataclass(frozen=True)
class CohomologyClass:
    """A class in H^n of a tensor power of one complex.

    ``coords`` maps a tuple of per-slot basis keys ``((n_1, k_1), ...)`` to a
    coefficient; one slot means the class lives in the complex itself.
    """

    space: str
    degree: int
    coords: tuple
    representative: Element | None = field(default=None, compare=False, hash=False)

    @classmethod
    def make(cls, space, degree, coords: Mapping, representative=None):
        items = tuple(sorted((k, Q(c)) for k, c in coords.items() if c))
        return cls(space, degree, items, representative)

    def is_zero(self) -> bool:
        return not self.coords

    def __bool__(self):
        return bool(self.coords)

    def as_dict(self) -> dict:
        return dict(self.coords)

    def __add__(self, other: "CohomologyClass"):
        self._same(other)
        d = self.as_dict()
        axpy(d, Q(1), other.as_dict())
        return CohomologyClass.make(self.space, self.degree if self else other.degree, d)

    def scale(self, c) -> "CohomologyClass":
        return CohomologyClass.make(self.space, self.degree,
                                    {k: v * Q(c) for k, v in self.coords})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def _same(self, other):
        if self.space != other.space:
            raise ValueError(f"classes in different spaces: {self.space} vs {other.space}")


class TensorPowerProjector:
    """Künneth coordinates for cochains of a k-fold tensor power host.

    The host's generators must be laid out slot by slot, each slot carrying
    exactly the generators of ``factor.host`` in the same order; then a
    monomial splits as a concatenation of slot monomials with no sign.
    """

    def __init__(self, factor: Complex, host: Host, slots: int):
        self.factor = factor
        self.host = host
        self.slots = slots
        self.width = len(factor.algebra)
        if len(host.algebra) != slots * self.width:
            raise ValueError("host is not a tensor power of the factor")
        self._cache: dict = {}

    def split(self, m) -> list:
        w = self.width
        return [tuple(m[i * w:(i + 1) * w]) for i in range(self.slots)]

    def join(self, parts) -> tuple:
        out = ()
        for p in parts:
            out += tuple(p)
        return out

    def project_monomial(self, m) -> dict:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        alg = self.factor.algebra
        acc = {(): Q(1)}
        for part in self.split(m):
            n = alg.monomial_degree(part)
            p = self.factor.slice(n).pi_monomial(part)
            if not p:
                acc = {}
                break
            nxt = {}
            for key, c in acc.items():
                for k, cc in p.items():
                    nxt[key + ((n, k),)] = c * cc
            acc = nxt
        self._cache[m] = acc
        return acc

    def project(self, e: Element) -> dict:
        out: dict = {}
        for m, c in e.terms.items():
            for key, cc in self.project_monomial(m).items():
                v = out.get(key, 0) + c * cc
                if v:
                    out[key] = v
                else:
                    del out[key]
        return out

    def representative(self, key) -> Element:
        """The product of slot representatives for a Künneth basis key."""
        alg = self.host.algebra
        out = alg.one()
        for slot, (n, k) in enumerate(key):
            rep = self.factor.slice(n).representative(k)
            shifted = {}
            for m, c in rep.terms.items():
                parts = [self.factor.algebra.unit] * self.slots
                parts[slot] = m
                shifted[self.join(parts)] = c
            out = out * Element(alg, shifted)
        return out


def class_of(projector: TensorPowerProjector, e: Element, space: str, check: bool = True):
    n = e.degree() if e else 0
    if check and e and projector.host.d(e):
        raise NotACocycle(f"{space}: element is not a cocycle")
    return CohomologyClass.make(space, n if n is not None else 0, projector.project(e), e)


def kunneth_decompose(c: CohomologyClass):
    """Split a two-slot class into (left key, right key, coefficient) triples."""
    out = []
    for key, coef in c.coords:
        if len(key) < 2:
            raise ValueError("class does not live in a tensor power")
        out.append((key[:1], key[1:], coef))
    return out


# ---------------------------------------------------------------------------
# lifting through surjective quasi-isomorphisms


class Lifter:
    """Invert a surjective quasi-isomorphism q: src -> tgt on cohomology.

    For a cocycle z of degree n we solve, in one system, for Z in src^n and w in
    tgt^(n-1) with d Z = 0 and q(Z) - d w = z.  The column echelon of the system
    depends only on n, so it is built once per degree.
    """

    def __init__(self, q: AlgebraMap, src: Complex, tgt: Complex):
        if q.source != src.algebra or q.target != tgt.algebra:
            raise ValueError("map does not match the complexes")
        self.q = q
        self.src = src
        self.tgt = tgt
        self._solvers: dict[int, ColumnSolver] = {}
        self.lifts_performed: list = []

    def solver(self, n: int) -> ColumnSolver:
        s = self._solvers.get(n)
        if s is not None:
            return s
        self.src.require(n + 1)
        self.tgt.require(n)
        off = self.src.dim(n + 1)
        tidx = self.tgt.index(n)
        cols = []
        for j, (m, dcol) in enumerate(zip(self.src.basis(n), self.src.d_columns(n))):
            col = dict(dcol)
            for mm, c in self.q.on_monomial(m).terms.items():
                col[off + tidx[mm]] = c
            cols.append((("Z", j), col))
        if n > 0:
            for l, dcol in enumerate(self.tgt.d_columns(n - 1)):
                cols.append((("W", l), {off + i: -c for i, c in dcol.items()}))
        s = ColumnSolver(cols)
        self._solvers[n] = s
        return s

    def lift(self, z: Element, n: int | None = None) -> Element:
        if n is None:
            n = z.degree()
            if n is None:
                if not z:
                    return self.src.algebra.zero()
                raise ValueError("inhomogeneous element")
        if self.tgt.host.d(z):
            raise NotACocycle(f"lift target of degree {n} is not a cocycle")
        off = self.src.dim(n + 1)
        rhs = {off + i: c for i, c in self.tgt.to_vec(z, n).items()}
        sol = self.solver(n).solve(rhs)
        if sol is None:
            raise LiftError(
                f"no lift in degree {n} from {self.src.host.name} to {self.tgt.host.name}"
            )
        Z = self.src.to_elem({j: c for (kind, j), c in sol.items() if kind == "Z" and c}, n)
        self.lifts_performed.append((z, Z))
        return Z

    def kernel_cocycles(self, n: int) -> list[Element]:
        """Cocycles of src^n whose q-image is exact: the freedom in a lift."""
        out = []
        for dep in self.solver(n).kernel:
            Z = self.src.to_elem({j: c for (kind, j), c in dep.items() if kind == "Z" and c}, n)
            if Z:
                out.append(Z)
        return out

    def check(self, z: Element, Z: Element) -> bool:
        """Lift postcondition: Z is a cocycle and q(Z) - z is exact."""
        if self.src.host.d(Z):
            return False
        diff = self.q(Z) - z
        return not diff or self.tgt.is_coboundary(diff) is not None


def cohomology_basis(cx: Complex, n: int) -> list[CohomologyClass]:
    s = cx.slice(n)
    return [
        CohomologyClass.make(cx.host.name, n, {((n, k),): 1}, s.representative(k))
        for k in range(s.dim_h)
    ]


def lift_through_quasi_iso(lifter: Lifter, z: Element) -> Element:
    return lifter.lift(z)


__all__ = [
    "CohomologyClass",
    "Complex",
    "CutoffError",
    "HomologySlice",
    "LiftError",
    "Lifter",
    "NotACocycle",
    "TensorPowerProjector",
    "class_of",
    "cohomology_basis",
    "kunneth_decompose",
    "lift_through_quasi_iso",
]
