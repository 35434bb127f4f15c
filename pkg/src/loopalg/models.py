"""Sullivan models and the free algebras built from them.

Every algebra the library works with is a free graded-commutative algebra
assembled from *blocks*.  A base block is a copy of V; a suspension block is a
copy of sV together with two base blocks, its left and right endpoints.  The
differential of a suspension block is the path differential with its two
endpoint copies substituted.  So the path model is [L, R, S(L, R)], the loop
model is [B, S(B, B)], and a relative tensor such as M_I (x)_{A(x)A} M_I is
[L, R, P(L, R), Q(L, R)].
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Sequence

from .algebra import (
    AlgebraMap,
    Copy,
    Derivation,
    Element,
    FreeAlgebra,
    Generator,
    check_differential,
)


class ModelError(ValueError):
    pass


class ModelClass(enum.Enum):
    ODD_GENERATED = "OddGenerated"
    EVEN_GENERATED = "EvenGenerated"
    PURE = "Pure"
    GENERAL = "General"

    def __str__(self):
        return self.value


class SullivanModel:
    """A minimal Sullivan algebra (ΛV, d) with V finite and simply connected.

    ``generators`` is a list of (name, degree) pairs in declaration order;
    ``differential`` maps names to Elements of the model's algebra; since that
    algebra only exists after construction, callers usually build a bare model
    first and pass ``bare.algebra`` polynomials to a second one.
    """

    def __init__(self, name: str, generators: Sequence[tuple[str, int]],
                 differential: Mapping[str, Element] | None = None):
        self.name = name
        seen = set()
        for g, deg in generators:
            if g in seen:
                raise ModelError(f"generator {g!r} declared twice")
            seen.add(g)
            if deg < 2:
                raise ModelError(
                    f"generator {g} has degree {deg}; models must be simply connected (degrees >= 2)"
                )
            if g.startswith("s_"):
                raise ModelError(f"generator name {g!r} clashes with the suspension prefix")
        self.declared = list(generators)
        gens = [
            Generator(g, deg, Copy.BASE, order=i) for i, (g, deg) in enumerate(generators)
        ]
        self.algebra = FreeAlgebra(gens, sort=True)
        self.generators = self.algebra.generators
        differential = dict(differential or {})
        for k in differential:
            if k not in self.algebra.index:
                raise ModelError(f"differential given for unknown generator {k!r}")
        values = {}
        for i, g in enumerate(self.generators):
            v = differential.get(g.name, self.algebra.zero())
            if v.algebra != self.algebra:
                raise ModelError(f"d({g.name}) lives in the wrong algebra")
            for m in v.terms:
                if self.algebra.monomial_degree(m) != g.degree + 1:
                    raise ModelError(
                        f"d({g.name}) has a term of degree {self.algebra.monomial_degree(m)}, "
                        f"expected {g.degree + 1}"
                    )
                if self.algebra.word_length(m) < 2:
                    raise ModelError(
                        f"d({g.name}) is not decomposable (contains a linear term); "
                        "only minimal models are accepted"
                    )
            values[i] = v
        self.d = Derivation(self.algebra, 1, values)
        report = check_differential(self.algebra, self.d, max(self.algebra.degrees, default=0))
        if not report.ok:
            raise ModelError(f"d^2 != 0 on {', '.join(n for n, _ in report.violations)}")

    def __repr__(self):
        return f"SullivanModel({self.name!r}, {[(g.name, g.degree) for g in self.generators]})"

    def __eq__(self, other):
        if not isinstance(other, SullivanModel):
            return NotImplemented
        return (
            sorted(self.declared) == sorted(other.declared)
            and {g.name: self.d.on_generator(i).terms for i, g in enumerate(self.generators)}
            == {g.name: other.differential_of(g.name).terms for g in other.generators}
            and [g.name for g in self.generators] == [g.name for g in other.generators]
        )

    def differential_of(self, name: str) -> Element:
        return self.d.on_generator(self.algebra.index[name])

    @property
    def odd(self) -> list[Generator]:
        return [g for g in self.generators if g.is_odd]

    @property
    def even(self) -> list[Generator]:
        return [g for g in self.generators if not g.is_odd]

    @property
    def max_degree(self) -> int:
        return max(self.algebra.degrees, default=0)

    def is_zero_differential(self) -> bool:
        return all(not self.d.on_generator(i) for i in range(len(self.generators)))


def formal_dimension(m: SullivanModel) -> int:
    return sum(g.degree for g in m.odd) - sum(g.degree - 1 for g in m.even)


def classify(m: SullivanModel) -> ModelClass:
    if not m.even:
        return ModelClass.ODD_GENERATED
    if not m.odd:
        return ModelClass.EVEN_GENERATED
    alg = m.algebra
    for i, g in enumerate(m.generators):
        v = m.d.on_generator(i)
        if not g.is_odd and v:
            return ModelClass.GENERAL
        for mono in v.terms:
            if any(e and alg.generators[j].is_odd for j, e in enumerate(mono)):
                return ModelClass.GENERAL
    return ModelClass.PURE


# ---------------------------------------------------------------------------
# blocks and hosts


@dataclass(frozen=True)
class Block:
    tag: str
    kind: str  # "base" or "susp"
    ends: tuple[str, str] | None = None


class Host:
    """A free CDGA assembled from blocks of one Sullivan model."""

    def __init__(self, model: SullivanModel, blocks: Sequence[Block], name: str = ""):
        self.model = model
        self.blocks = tuple(blocks)
        self.name = name or "+".join(b.tag for b in self.blocks)
        tags = [b.tag for b in self.blocks]
        if len(set(tags)) != len(tags):
            raise ValueError(f"duplicate block tags {tags}")
        gens = []
        self.block_slices: dict[str, tuple[int, int]] = {}
        for b in self.blocks:
            start = len(gens)
            for g in model.generators:
                if b.kind == "base":
                    gens.append(Generator(f"{g.name}@{b.tag}", g.degree, Copy.BASE,
                                          block=b.tag, label=g.name, order=g.order))
                else:
                    if b.ends is None:
                        raise ValueError(f"suspension block {b.tag} needs endpoints")
                    gens.append(Generator(f"s_{g.name}@{b.tag}", g.degree - 1, Copy.SUSP,
                                          susp_of=g.name, block=b.tag,
                                          label=f"s_{g.name}", order=g.order))
            self.block_slices[b.tag] = (start, len(gens))
        for b in self.blocks:
            if b.kind == "susp":
                for e in b.ends:
                    if e not in self.block_slices or self.block(e).kind != "base":
                        raise ValueError(f"endpoint {e} of {b.tag} is not a base block")
        self.algebra = FreeAlgebra(gens)
        self.n_base = len(model.generators)
        self._d: Derivation | None = None

    def __repr__(self):
        return f"Host({self.name})"

    def block(self, tag: str) -> Block:
        for b in self.blocks:
            if b.tag == tag:
                return b
        raise KeyError(tag)

    def gen_index(self, tag: str, base_index: int) -> int:
        return self.block_slices[tag][0] + base_index

    def gen(self, tag: str, name: str) -> Element:
        return self.algebra.gen(self.gen_index(tag, self.model.algebra.index[name]))

    def embed_base(self, tag: str, e: Element) -> Element:
        """Copy an element of ΛV into the base block ``tag``."""
        return _block_embedding(self.model.algebra, self, tag)(e)

    @property
    def d(self) -> Derivation:
        if self._d is None:
            self._d = _host_differential(self)
        return self._d


def _block_embedding(base: FreeAlgebra, host: Host, tag: str) -> AlgebraMap:
    images = {i: host.algebra.gen(host.gen_index(tag, i)) for i in range(len(base))}
    return AlgebraMap(base, host.algebra, images)


class PathModel:
    """The model Λ(V_L, V_R, sV) of the free path space with its differential D."""

    def __init__(self, model: SullivanModel):
        self.model = model
        self.host = Host(model, [Block("L", "base"), Block("R", "base"),
                                 Block("S", "susp", ("L", "R"))], name="path")
        self.algebra = self.host.algebra
        self.s = _suspension_derivation(self.host, {"L": "S", "R": "S"})
        self.D = self._build()
        self.host._d = self.D

    def _build(self) -> Derivation:
        m = self.model
        h = self.host
        alg = h.algebra
        values: dict[int, Element] = {}
        for tag in ("L", "R"):
            emb = _block_embedding(m.algebra, h, tag)
            for i in range(len(m.generators)):
                values[h.gen_index(tag, i)] = emb(m.d.on_generator(i))
        D = Derivation(alg, 1, values)
        # generators of sV in increasing degree; D(sv) only needs lower ones
        order = sorted(range(len(m.generators)), key=lambda i: m.generators[i].degree)
        for i in order:
            v = m.generators[i]
            vl = h.gen("L", v.name)
            vr = h.gen("R", v.name)
            total = vr - vl
            term = vl
            step = 0
            while True:
                step += 1
                term = self.s(D(term)) / step
                if not term:
                    break
                if step > v.degree:
                    raise ModelError(
                        f"path series for s_{v.name} did not terminate by step {v.degree}"
                    )
                total = total - term
            D.values[h.gen_index("S", i)] = total
        D._cache.clear()
        return D

    def D_of(self, name: str) -> Element:
        return self.D.on_generator(self.host.gen_index("S", self.model.algebra.index[name]))


def _suspension_derivation(host: Host, targets: Mapping[str, str]) -> Derivation:
    """The degree -1 derivation sending a base-block generator to its suspension
    in the block ``targets[tag]`` and killing suspension generators."""
    alg = host.algebra
    values = {}
    for b in host.blocks:
        lo, hi = host.block_slices[b.tag]
        for k in range(lo, hi):
            if b.kind == "base" and b.tag in targets:
                values[k] = alg.gen(host.gen_index(targets[b.tag], k - lo))
            else:
                values[k] = alg.zero()
    return Derivation(alg, -1, values)


def path_model(m: SullivanModel) -> PathModel:
    # one path model per Sullivan model; hosts reuse its D
    pm = m.__dict__.get("_path")
    if pm is None:
        pm = PathModel(m)
        m.__dict__["_path"] = pm
    return pm


def build_path_model(m: SullivanModel) -> PathModel:
    return path_model(m)


def _host_differential(host: Host) -> Derivation:
    m = host.model
    pm = path_model(m)
    values = {}
    for b in host.blocks:
        if b.kind == "base":
            emb = _block_embedding(m.algebra, host, b.tag)
            for i in range(len(m.generators)):
                values[host.gen_index(b.tag, i)] = emb(m.d.on_generator(i))
    for b in host.blocks:
        if b.kind == "susp":
            images = {}
            for tag_path, tag_host in (("L", b.ends[0]), ("R", b.ends[1]), ("S", b.tag)):
                for i in range(len(m.generators)):
                    images[pm.host.gen_index(tag_path, i)] = host.algebra.gen(
                        host.gen_index(tag_host, i))
            phi = AlgebraMap(pm.algebra, host.algebra, images)
            for i in range(len(m.generators)):
                values[host.gen_index(b.tag, i)] = phi(pm.D.on_generator(pm.host.gen_index("S", i)))
    return Derivation(host.algebra, 1, values)


class LoopModel:
    """Λ(V, sV) with d̄(sv) = -s(dv)."""

    def __init__(self, model: SullivanModel):
        self.model = model
        self.host = Host(model, [Block("B", "base"), Block("S", "susp", ("B", "B"))], name="loop")
        self.algebra = self.host.algebra
        self.s = _suspension_derivation(self.host, {"B": "S"})
        values = {}
        emb = _block_embedding(model.algebra, self.host, "B")
        for i in range(len(model.generators)):
            dv = emb(model.d.on_generator(i))
            values[self.host.gen_index("B", i)] = dv
            values[self.host.gen_index("S", i)] = -self.s(dv)
        self.d = Derivation(self.algebra, 1, values)
        report = check_differential(self.algebra, self.d, model.max_degree + 1)
        if not report.ok:
            raise ModelError(f"loop differential fails d^2 = 0: {report.violations}")
        self.host._d = self.d

    def d_of(self, name: str) -> Element:
        return self.d.on_generator(self.host.gen_index("S", self.model.algebra.index[name]))


def build_loop_model(m: SullivanModel) -> LoopModel:
    return LoopModel(m)


__all__ = [
    "Block",
    "Host",
    "LoopModel",
    "ModelClass",
    "ModelError",
    "PathModel",
    "SullivanModel",
    "build_loop_model",
    "build_path_model",
    "classify",
    "formal_dimension",
    "path_model",
]
