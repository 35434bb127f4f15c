"""Relative tensor products over ΛV⊗ΛV and the maps between them.

A copy of the path model is free over ΛV⊗ΛV on the monomials of Λ(sV), so a
relative tensor product such as M_I (x)_{ΛV⊗ΛV} M_I is again a free
graded-commutative algebra: the two path models share their endpoint copies.
Each object below is a :class:`~loopalg.models.Host` whose block layout
encodes exactly that sharing:

=========  =====================================  ====================================
name       blocks                                  stands for
=========  =====================================  ====================================
base       B                                       ΛV
pair       L, R                                    ΛV⊗ΛV
path       L, R, S(L,R)                            M_I
loop       B, S(B,B)                               M_LM ≅ ΛV (x)_{ΛV⊗2} M_I
loop2      b1, s1(b1,b1), b2, s2(b2,b2)            M_LM⊗M_LM
pq         L, R, P(L,R), Q(L,R)                    M_I (x)_{ΛV⊗2} M_I
based2     B, P(B,B), Q(B,B)                       M_LM (x)_ΛV M_LM ≅ ΛV (x)_{ΛV⊗2} M_LM^⊗2
n_loop2    N(b1,b2), b1, s1, b2, s2                M_I (x)_{ΛV⊗2} M_LM^⊗2
n_pq       N(L,R), L, R, P, Q                      M_I (x)_{ΛV⊗2} (M_I (x)_{ΛV⊗2} M_I)
=========  =====================================  ====================================

Every map between these objects sends generators to generators (or to zero),
so it is an :class:`~loopalg.algebra.AlgebraMap` and its Koszul signs come
from the one normal-form routine in :mod:`loopalg.algebra`.
"""

from __future__ import annotations

from .rational import Q
from functools import cached_property
from typing import Mapping

from .algebra import AlgebraMap, Element
from .models import Block, Host, SullivanModel, build_loop_model, path_model

RelTensorElement = Element


def _blocks(*spec):
    out = []
    for item in spec:
        if isinstance(item, str):
            out.append(Block(item, "base"))
        else:
            tag, left, right = item
            out.append(Block(tag, "susp", (left, right)))
    return out


class Scaffold:
    """All hosts and structure maps attached to one Sullivan model.

    Two arc conventions are supported.  Under ``"standard"`` both paths of
    M_I (x) M_I run from L to R, so the loop they bound is Q·P⁻¹ and the
    induced comultiplication on suspension letters is sσ ↦ 1⊗sσ − sσ⊗1.
    Under ``"coherent"`` one arc is reversed (P for the product, Q for the
    coproduct), which gives sσ ↦ sσ⊗1 + 1⊗sσ.  Only the coherent choice is
    coassociative at the level of suspension letters, so only it satisfies
    the associativity identities in general.  The standard choice is the one
    that reproduces the reference values for the Borel model of CP^2.
    """

    CONVENTIONS = ("standard", "coherent")

    def __init__(self, model: SullivanModel, convention: str = "standard", *,
                 twisted_product: bool | None = None, twisted_coproduct: bool | None = None):
        if convention not in self.CONVENTIONS:
            raise ValueError(f"unknown convention {convention!r}; expected one of {self.CONVENTIONS}")
        self.model = model
        self.convention = convention
        coherent = convention == "coherent"
        if twisted_product is None:
            twisted_product = coherent
        if twisted_coproduct is None:
            twisted_coproduct = coherent
        # when set, the product's M_I (x) M_I runs its first path backwards,
        # and the coproduct's runs its second path backwards; see ``pq_pr``
        # and ``pq_co``
        self.twisted_product = twisted_product
        self.twisted_coproduct = twisted_coproduct

    # -- hosts --------------------------------------------------------------

    @cached_property
    def base(self) -> Host:
        h = Host(self.model, _blocks("B"), name="base")
        return h

    @cached_property
    def pair(self) -> Host:
        return Host(self.model, _blocks("L", "R"), name="pair")

    @cached_property
    def quad(self) -> Host:
        return Host(self.model, _blocks("v1", "v2", "v3", "v4"), name="quad")

    @cached_property
    def path_model(self):
        return path_model(self.model)

    @cached_property
    def path(self) -> Host:
        return self.path_model.host

    @cached_property
    def loop_model(self):
        return build_loop_model(self.model)

    @cached_property
    def loop(self) -> Host:
        return self.loop_model.host

    def loop_power(self, k: int) -> Host:
        spec = []
        for i in range(1, k + 1):
            spec += [f"b{i}", (f"s{i}", f"b{i}", f"b{i}")]
        return Host(self.model, _blocks(*spec), name=f"loop{k}")

    @cached_property
    def loop2(self) -> Host:
        return self.loop_power(2)

    @cached_property
    def loop3(self) -> Host:
        return self.loop_power(3)

    @cached_property
    def pq(self) -> Host:
        return Host(self.model, _blocks("L", "R", ("P", "L", "R"), ("Q", "L", "R")), name="pq")

    @cached_property
    def pq_pr(self) -> Host:
        """M_I (x) M_I as used by the product."""
        if not self.twisted_product:
            return self.pq
        return Host(self.model, _blocks("L", "R", ("P", "R", "L"), ("Q", "L", "R")), name="pq_pr")

    @cached_property
    def pq_co(self) -> Host:
        """M_I (x) M_I as used by the coproduct."""
        if not self.twisted_coproduct:
            return self.pq
        return Host(self.model, _blocks("L", "R", ("P", "L", "R"), ("Q", "R", "L")), name="pq_tw")

    @cached_property
    def based2(self) -> Host:
        return Host(self.model, _blocks("B", ("P", "B", "B"), ("Q", "B", "B")), name="based2")

    @cached_property
    def n_loop2(self) -> Host:
        return Host(
            self.model,
            _blocks(("N", "b1", "b2"), "b1", ("s1", "b1", "b1"), "b2", ("s2", "b2", "b2")),
            name="n_loop2",
        )

    @cached_property
    def n_pq(self) -> Host:
        return Host(
            self.model,
            _blocks(("N", "L", "R"), "L", "R", ("P", "L", "R"), ("Q", "L", "R")),
            name="n_pq",
        )

    @cached_property
    def n_pq_co(self) -> Host:
        if not self.twisted_coproduct:
            return self.n_pq
        return Host(
            self.model,
            _blocks(("N", "L", "R"), "L", "R", ("P", "L", "R"), ("Q", "R", "L")),
            name="n_pq_tw",
        )

    # -- maps ---------------------------------------------------------------

    def block_map(self, src: Host, tgt: Host, rule: Mapping[str, str | None]) -> AlgebraMap:
        """Algebra map sending block ``a`` of src onto block ``rule[a]`` of tgt
        generator by generator (``None`` means zero)."""
        images = {}
        for b in src.blocks:
            dest = rule.get(b.tag, b.tag)
            lo, hi = src.block_slices[b.tag]
            for k in range(lo, hi):
                if dest is None:
                    images[k] = tgt.algebra.zero()
                else:
                    images[k] = tgt.algebra.gen(tgt.gen_index(dest, k - lo))
        return AlgebraMap(src.algebra, tgt.algebra, images)

    @cached_property
    def eps_bar(self) -> AlgebraMap:
        """ε̄ = μ·ε on the path model: a⊗b⊗Φ ↦ ab·(constant term of Φ)."""
        return self.block_map(self.path, self.base, {"L": "B", "R": "B", "S": None})

    @cached_property
    def mu(self) -> AlgebraMap:
        return self.block_map(self.pair, self.base, {"L": "B", "R": "B"})

    @cached_property
    def mu_prime_map(self) -> AlgebraMap:
        return self.block_map(self.quad, self.pair, {"v1": "L", "v2": "R", "v3": "R", "v4": "L"})

    @cached_property
    def path_to_loop(self) -> AlgebraMap:
        """ΛV (x)_{ΛV⊗2} M_I ≅ M_LM as a quotient of M_I."""
        return self.block_map(self.path, self.loop, {"L": "B", "R": "B", "S": "S"})

    @cached_property
    def q1(self) -> AlgebraMap:
        """ε̄⊗1 : M_I (x) M_I → ΛV (x) M_I = M_LM."""
        return self.block_map(self.pq_pr, self.loop, {"L": "B", "R": "B", "P": None, "Q": "S"})

    @cached_property
    def collapse(self) -> AlgebraMap:
        """(μ⊗1)(x)_μ(μ⊗1) : M_I (x) M_I → M_LM (x)_ΛV M_LM."""
        return self.block_map(self.pq_pr, self.based2, {"L": "B", "R": "B"})

    @cached_property
    def q2(self) -> AlgebraMap:
        """ε̄⊗1⊗1 : M_I (x) M_LM^⊗2 → ΛV (x) M_LM^⊗2."""
        return self.block_map(self.n_loop2, self.based2,
                              {"N": None, "b1": "B", "b2": "B", "s1": "P", "s2": "Q"})

    @cached_property
    def zeta(self) -> AlgebraMap:
        """μ (x)_{μ'} ζ̄ : M_LM^⊗2 → ΛV (x) (M_I (x) M_I)."""
        return self.block_map(self.loop2, self.based2,
                              {"b1": "B", "b2": "B", "s1": "P", "s2": "Q"})

    @cached_property
    def q3(self) -> AlgebraMap:
        """ε̄⊗1 : M_I (x) (M_I (x) M_I) → ΛV (x) (M_I (x) M_I)."""
        return self.block_map(self.n_pq_co, self.based2, {"N": None, "L": "B", "R": "B"})

    @cached_property
    def q1_co(self) -> AlgebraMap:
        return self.block_map(self.pq_co, self.loop, {"L": "B", "R": "B", "P": None, "Q": "S"})

    def susp_monomial(self, host: Host, tag: str, exps) -> Element:
        """Embed a Λ(sV) monomial, given by exponents over the model's generators."""
        lo, hi = host.block_slices[tag]
        m = [0] * len(host.algebra)
        m[lo:hi] = exps
        return host.algebra.monomial(tuple(m))


# ---------------------------------------------------------------------------
# the module-level operations


def epsilon_bar(sc: Scaffold, e: Element) -> Element:
    return sc.eps_bar(e)


def mu_prime(sc: Scaffold, e: Element) -> Element:
    """μ'(v1⊗v2⊗v3⊗v4) = (-1)^{|v4|(|v2|+|v3|)} v1v4⊗v2v3."""
    return sc.mu_prime_map(e)


def collapse_to_loops(sc: Scaffold, e: Element) -> Element:
    return sc.collapse(e)


def zeta_bar_mu(sc: Scaffold, e: Element) -> Element:
    return sc.zeta(e)


class ModuleMap:
    """A ΛV⊗ΛV-linear map out of the path model, stored on Λ(sV) monomials.

    ``values`` maps an exponent tuple over the model's generators (all on the
    suspension letters) to an Element of the ``pair`` algebra.  Monomials not
    listed are sent to zero when ``complete`` is true; otherwise asking for
    them is an error.
    """

    def __init__(self, scaffold: Scaffold, degree: int, values: Mapping[tuple, Element],
                 complete: bool = True, name: str = "Δ!"):
        self.scaffold = scaffold
        self.degree = degree
        self.complete = complete
        self.name = name
        pair = scaffold.pair.algebra
        clean = {}
        n = len(scaffold.model.generators)
        for k, v in values.items():
            k = tuple(k)
            if len(k) != n:
                raise ValueError(f"key {k} does not have {n} exponents")
            if v.algebra != pair:
                raise ValueError("values must lie in ΛV⊗ΛV")
            if v:
                want = self.susp_degree(k) + degree
                got = v.degree()
                if got != want:
                    raise ValueError(f"value on {k} has degree {got}, expected {want}")
                clean[k] = v
        self.values = clean

    def susp_degree(self, exps) -> int:
        return sum(e * (g.degree - 1) for e, g in zip(exps, self.scaffold.model.generators))

    def __call__(self, exps) -> Element:
        exps = tuple(exps)
        v = self.values.get(exps)
        if v is not None:
            return v
        if self.complete:
            return self.scaffold.pair.algebra.zero()
        raise KeyError(f"{self.name} undefined on {render_susp_word(self.scaffold, exps)}")

    def on_element(self, e: Element) -> Element:
        """Apply to an element of the path model (ΛV⊗ΛV-linearly)."""
        return apply_shriek(self, e, self.scaffold.path, self.scaffold.pair, "S")

    def nonzero_items(self):
        return sorted(self.values.items(), key=lambda kv: (self.susp_degree(kv[0]), kv[0]))

    def scaled(self, c) -> "ModuleMap":
        return ModuleMap(self.scaffold, self.degree,
                         {k: v.scale(Q(c)) for k, v in self.values.items()},
                         self.complete, self.name)


def render_susp_word(sc: Scaffold, exps) -> str:
    parts = []
    for e, g in zip(exps, sc.model.generators):
        if e:
            parts.append(f"s_{g.name}" + (f"^{e}" if e > 1 else ""))
    return "*".join(parts) or "1"


def apply_shriek(delta: ModuleMap, e: Element, src: Host, tgt: Host, n_tag: str = "N") -> Element:
    """Apply Δ⊗1: each monomial is written as ±Φ·rest with Φ in the block
    ``n_tag``; the result is ±Δ(Φ)·rest, with Δ(Φ)'s two tensor factors placed
    in the endpoint blocks of ``n_tag`` and ``rest`` copied block for block."""
    block = src.block(n_tag)
    left, right = block.ends
    lo, hi = src.block_slices[n_tag]
    salg = src.algebra
    tgt_alg = tgt.algebra
    sc = delta.scaffold
    pair_to_tgt = sc.block_map(sc.pair, tgt, {"L": left, "R": right})
    rest_images = {}
    for b in src.blocks:
        if b.tag == n_tag:
            continue
        blo, bhi = src.block_slices[b.tag]
        tlo, _ = tgt.block_slices[b.tag]
        for k in range(blo, bhi):
            rest_images[k] = tlo + (k - blo)
    out = tgt_alg.zero()
    cache: dict = {}
    for m, c in e.terms.items():
        phi = m[lo:hi]
        rest = tuple(0 if lo <= i < hi else x for i, x in enumerate(m))
        phi_m = tuple(x if lo <= i < hi else 0 for i, x in enumerate(m))
        sign, prod = salg.mul_monomials(phi_m, rest)
        assert prod == m and sign
        val = cache.get(phi)
        if val is None:
            val = pair_to_tgt(delta(phi))
            cache[phi] = val
        if not val:
            continue
        tm = [0] * len(tgt_alg)
        for i, x in enumerate(rest):
            if x:
                tm[rest_images[i]] = x
        out = out + val * tgt_alg.monomial(tuple(tm), c * sign)
    return out


__all__ = [
    "ModuleMap",
    "RelTensorElement",
    "Scaffold",
    "apply_shriek",
    "collapse_to_loops",
    "epsilon_bar",
    "mu_prime",
    "render_susp_word",
    "zeta_bar_mu",
]
