"""The shriek map Δ^! for odd, even and pure models, and its verification.

Throughout, odd generators x_1..x_n and even generators y_1..y_m are numbered
from 1 in the algebra's generator order (degree, then declaration).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import Copy, Element, FreeAlgebra, Generator
from .linalg import ColumnSolver
from .models import ModelClass, SullivanModel, classify, formal_dimension
from .modules import ModuleMap, Scaffold, apply_shriek, render_susp_word


class ShriekError(ValueError):
    pass


def _diagonal_factor(sc: Scaffold, name: str) -> Element:
    """−x⊗1 + 1⊗x in ΛV⊗ΛV."""
    return sc.pair.gen("R", name) - sc.pair.gen("L", name)


def odd_product(sc: Scaffold, names) -> Element:
    out = sc.pair.algebra.one()
    for nm in names:
        out = out * _diagonal_factor(sc, nm)
    return out


def odd_identity(sc: Scaffold, names) -> Element:
    """∏(−x_i⊗1+1⊗x_i) · (−x_1⋯x_k⊗1 + 1⊗x_1⋯x_k); zero for odd x_i."""
    prod_l = sc.pair.algebra.one()
    prod_r = sc.pair.algebra.one()
    for nm in names:
        prod_l = prod_l * sc.pair.gen("L", nm)
        prod_r = prod_r * sc.pair.gen("R", nm)
    return odd_product(sc, names) * (prod_r - prod_l)


def _key(sc: Scaffold, names) -> tuple:
    idx = sc.model.algebra.index
    k = [0] * len(sc.model.generators)
    for nm in names:
        k[idx[nm]] += 1
    return tuple(k)


def shriek_odd(sc: Scaffold) -> ModuleMap:
    m = sc.model
    if classify(m) is not ModelClass.ODD_GENERATED:
        raise ShriekError(f"{m.name} is not generated in odd degrees")
    xs = [g.name for g in m.odd]
    return ModuleMap(sc, formal_dimension(m), {_key(sc, []): odd_product(sc, xs)})


def shriek_even(sc: Scaffold) -> ModuleMap:
    m = sc.model
    if classify(m) is not ModelClass.EVEN_GENERATED:
        raise ShriekError(f"{m.name} is not generated in even degrees")
    ys = [g.name for g in m.even]
    return ModuleMap(sc, formal_dimension(m), {_key(sc, ys): sc.pair.algebra.one()})


@dataclass
class PureCoefficients:
    """f[r][i] with D(s x_r) = (−x_r⊗1+1⊗x_r)⊗1 − Σ_i f[r][i]⊗s y_i."""

    odd: list[str]
    even: list[str]
    table: list[list[Element]]

    def f(self, r: int, i: int) -> Element:
        """1-based access, f_i^r."""
        return self.table[r - 1][i - 1]


def extract_pure_coefficients(sc: Scaffold) -> PureCoefficients:
    m = sc.model
    pm = sc.path_model
    h = pm.host
    alg = h.algebra
    odd = [g.name for g in m.odd]
    even = [g.name for g in m.even]
    lo, hi = h.block_slices["S"]
    pair = sc.pair.algebra
    table = []
    for x in odd:
        rest = pm.D_of(x) - (h.gen("R", x) - h.gen("L", x))
        row = {y: {} for y in even}
        for mono, c in rest.terms.items():
            s_part = mono[lo:hi]
            hit = [i for i, e in enumerate(s_part) if e]
            if len(hit) != 1 or s_part[hit[0]] != 1 or m.generators[hit[0]].is_odd:
                raise ShriekError(
                    f"D(s_{x}) has a term outside the pure shape: {Element(alg, {mono: c})}"
                )
            # the suspension letter is last in normal order, so no sign here
            y = m.generators[hit[0]].name
            pm_mono = mono[:lo]
            row[y][pm_mono] = row[y].get(pm_mono, 0) - c
        table.append([Element(pair, row[y]) for y in even])
    return PureCoefficients(odd, even, table)


def pure_sign(J, seq, fdim: int) -> int:
    """(−1)^ε for J = (j_1<…<j_k) and an ordered injective index sequence."""
    k = len(seq)
    eps = sum(i + j + r for r, (i, j) in enumerate(zip(seq, J)))  # r counts from 0 = r-1
    eps += k * fdim
    eps += sum(1 for p in range(k) for q in range(p + 1, k) if seq[p] < seq[q])
    return -1 if eps % 2 else 1


def shriek_pure(sc: Scaffold) -> ModuleMap:
    m = sc.model
    cls = classify(m)
    if cls is not ModelClass.PURE:
        raise ShriekError(f"{m.name} is {cls}, not pure with both parities present")
    coeffs = extract_pure_coefficients(sc)
    fdim = formal_dimension(m)
    n, mm = len(coeffs.odd), len(coeffs.even)
    pair = sc.pair.algebra
    values = {}
    for k in range(mm + 1):
        for J in itertools.combinations(range(1, mm + 1), k):
            Jc = [j for j in range(1, mm + 1) if j not in J]
            total = pair.zero()
            for seq in itertools.permutations(range(1, n + 1), k):
                term = pair.scalar(pure_sign(J, seq, fdim))
                for i, j in zip(seq, J):
                    term = term * coeffs.f(i, j)
                    if not term:
                        break
                if not term:
                    continue
                rest = [coeffs.odd[i - 1] for i in range(1, n + 1) if i not in seq]
                total = total + term * odd_product(sc, rest)
            if total:
                values[_key(sc, [coeffs.even[j - 1] for j in Jc])] = total
    return ModuleMap(sc, fdim, values)


def build_shriek(sc: Scaffold) -> ModuleMap:
    cls = classify(sc.model)
    if cls is ModelClass.ODD_GENERATED:
        return shriek_odd(sc)
    if cls is ModelClass.EVEN_GENERATED:
        return shriek_even(sc)
    if cls is ModelClass.PURE:
        return shriek_pure(sc)
    raise ShriekError(
        f"{sc.model.name} is not pure; supply Δ^! explicitly and check it with verify_shriek_cocycle"
    )


# ---------------------------------------------------------------------------
# verification


def susp_algebra(sc: Scaffold) -> FreeAlgebra:
    """Λ(sV) on its own, used to enumerate the free basis of the path model."""
    gens = [Generator(f"s_{g.name}", g.degree - 1, Copy.SUSP, susp_of=g.name, order=g.order)
            for g in sc.model.generators]
    return FreeAlgebra(gens)


def susp_words(sc: Scaffold, cutoff: int):
    alg = susp_algebra(sc)
    for n in range(cutoff + 1):
        for w in alg.basis(n):
            yield n, w


@dataclass
class ShriekReport:
    name: str
    cutoff: int
    ok: bool
    failures: list = field(default_factory=list)
    checked: int = 0
    witness: object = None

    def __bool__(self):
        return self.ok


def hom_differential(sc: Scaffold, f: ModuleMap, word) -> Element:
    """(d f − (−1)^{|f|} f D)(Φ) for a Λ(sV) word Φ."""
    path = sc.path
    phi = sc.susp_monomial(path, "S", word)
    lhs = sc.pair.d(f(word))
    rhs = apply_shriek(f, path.d(phi), path, sc.pair, "S")
    return lhs - rhs if f.degree % 2 == 0 else lhs + rhs


def verify_shriek_cocycle(delta: ModuleMap, cutoff: int) -> ShriekReport:
    sc = delta.scaffold
    rep = ShriekReport("cocycle", cutoff, True)
    for n, w in susp_words(sc, cutoff):
        rep.checked += 1
        if hom_differential(sc, delta, w):
            rep.ok = False
            rep.failures.append(render_susp_word(sc, w))
    return rep


def verify_shriek_nonboundary(delta: ModuleMap, cutoff: int) -> ShriekReport:
    """Bounded search for ψ of degree |Δ|−1 with dψ − (−1)^{|ψ|}ψD = Δ.

    Unknowns are ψ(Φ) for Λ(sV) words Φ of degree ≤ K, equations are imposed on
    the same words, where K = cutoff − (top generator degree).  Since D lowers
    the suspension degree, the equations on those words only involve those
    unknowns, so an infeasible system proves that no ψ exists in this range.
    """
    sc = delta.scaffold
    K = max(cutoff - sc.model.max_degree, 0)
    words = list(susp_words(sc, K))
    pair_cx_alg = sc.pair.algebra
    pidx: dict[int, dict] = {}

    def pindex(n):
        if n not in pidx:
            pidx[n] = {m: i for i, m in enumerate(pair_cx_alg.basis(n))}
        return pidx[n]

    deg_psi = delta.degree - 1
    sign_psi = -1 if deg_psi % 2 else 1
    path = sc.path
    lo, hi = path.block_slices["S"]
    # expansions of D(Φ0) as (Φ', coefficient, ΛV⊗ΛV monomial)
    expansions = {}
    for p0, (n0, w0) in enumerate(words):
        items = []
        De = path.d(sc.susp_monomial(path, "S", w0))
        for mono, c in De.terms.items():
            phi = tuple(mono[lo:hi])
            phi_m = tuple(x if lo <= i < hi else 0 for i, x in enumerate(mono))
            rest = tuple(0 if lo <= i < hi else x for i, x in enumerate(mono))
            sign, _ = path.algebra.mul_monomials(phi_m, rest)
            items.append((phi, c * sign, rest[:lo]))
        expansions[p0] = items
    by_target: dict = {}
    for p0, items in expansions.items():
        for phi, c, ab in items:
            by_target.setdefault(phi, []).append((p0, c, ab))

    cols = []
    for p, (n, w) in enumerate(words):
        dn = n + deg_psi
        if dn < 0:
            continue
        for t, mono in enumerate(pair_cx_alg.basis(dn)):
            col: dict = {}
            e_t = pair_cx_alg.monomial(mono)
            dd = sc.pair.d(e_t)
            idx = pindex(dn + 1)
            for mm, c in dd.terms.items():
                key = (p, idx[mm])
                col[key] = col.get(key, 0) + c
            for p0, c, ab in by_target.get(w, ()):
                prod = e_t * pair_cx_alg.monomial(ab)
                if not prod:
                    continue
                idx0 = pindex(words[p0][0] + delta.degree)
                for mm, cc in prod.terms.items():
                    key = (p0, idx0[mm])
                    col[key] = col.get(key, 0) - sign_psi * c * cc
            col = {k: v for k, v in col.items() if v}
            cols.append(((p, t), col))
    # equation keys need a total order for the echelon
    keymap: dict = {}

    def kid(k):
        if k not in keymap:
            keymap[k] = k[0] * 10_000_000 + k[1]
        return keymap[k]

    solver = ColumnSolver((tag, {kid(k): v for k, v in col.items()}) for tag, col in cols)
    rhs = {}
    for p, (n, w) in enumerate(words):
        val = delta(w)
        if val:
            idx = pindex(n + delta.degree)
            for mm, c in val.terms.items():
                rhs[kid((p, idx[mm]))] = c
    sol = solver.solve(rhs)
    rep = ShriekReport("nonboundary", cutoff, sol is None, checked=len(words))
    if sol is not None:
        witness = {}
        for (p, t), c in sol.items():
            n, w = words[p]
            mono = pair_cx_alg.basis(n + deg_psi)[t]
            witness.setdefault(render_susp_word(sc, w), pair_cx_alg.zero())
            witness[render_susp_word(sc, w)] += pair_cx_alg.monomial(mono, c)
        rep.witness = witness
        rep.failures.append("Δ is a boundary in this range")
    return rep


def mu_shriek_is_zero(delta: ModuleMap) -> bool:
    """μ∘Δ^! = 0, checked on every stored value (the rest are zero)."""
    sc = delta.scaffold
    return all(not sc.mu(v) for v in delta.values.values())


def shriek_unit_is_zero(delta: ModuleMap) -> bool:
    return not delta((0,) * len(delta.scaffold.model.generators))


__all__ = [
    "PureCoefficients",
    "ShriekError",
    "ShriekReport",
    "build_shriek",
    "extract_pure_coefficients",
    "mu_shriek_is_zero",
    "odd_identity",
    "odd_product",
    "pure_sign",
    "shriek_even",
    "shriek_odd",
    "shriek_pure",
    "shriek_unit_is_zero",
    "verify_shriek_cocycle",
    "verify_shriek_nonboundary",
]
