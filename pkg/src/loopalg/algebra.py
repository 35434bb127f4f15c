"""Free graded-commutative algebras over Q.

A monomial is a tuple of exponents aligned with the generator tuple of its
algebra.  Odd generators carry exponent 0 or 1.  The generator tuple fixes the
normal form: a monomial stands for the ordered product g_1^e_1 g_2^e_2 ... and
every product is brought back to that order with the Koszul sign.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from .rational import Q
from typing import Iterable, Mapping, Sequence

Monomial = tuple


class Copy(enum.IntEnum):
    BASE = 0
    LEFT = 1
    RIGHT = 2
    SUSP = 3


@dataclass(frozen=True)
class Generator:
    """A named generator.

    ``name`` is unique inside an algebra; ``label`` is what gets printed
    (``x`` or ``s_x``) and ``block`` says which copy of V or sV it belongs to
    in composite algebras.
    """

    name: str
    degree: int
    copy: Copy = Copy.BASE
    susp_of: str | None = None
    block: str = ""
    label: str = ""
    order: int = 0

    def __post_init__(self):
        if not self.label:
            object.__setattr__(self, "label", self.name)
        if self.copy is Copy.SUSP and self.degree < 1:
            raise ValueError(f"suspension {self.name} has degree {self.degree} < 1")

    @property
    def parity(self) -> int:
        return self.degree % 2

    @property
    def is_odd(self) -> bool:
        return self.degree % 2 == 1


def generator_key(g: Generator):
    return (int(g.copy), g.degree, g.order)


class FreeAlgebra:
    """Free graded-commutative algebra on an ordered tuple of generators."""

    def __init__(self, generators: Sequence[Generator], sort: bool = False):
        gens = tuple(sorted(generators, key=generator_key) if sort else generators)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        self.generators = gens
        self.index = {g.name: i for i, g in enumerate(gens)}
        self.degrees = tuple(g.degree for g in gens)
        self.odd = frozenset(i for i, g in enumerate(gens) if g.is_odd)
        self._odd_sorted = tuple(sorted(self.odd))
        self._basis_cache: dict[int, list[Monomial]] = {}
        self._mul_cache: dict[tuple, tuple] = {}

    def __repr__(self):
        return f"FreeAlgebra({', '.join(g.name for g in self.generators)})"

    def __eq__(self, other):
        return isinstance(other, FreeAlgebra) and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    def __len__(self):
        return len(self.generators)

    # -- monomials --------------------------------------------------------

    @property
    def unit(self) -> Monomial:
        return (0,) * len(self.generators)

    def monomial_degree(self, m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, self.degrees))

    def word_length(self, m: Monomial) -> int:
        return sum(m)

    def gen_monomial(self, i: int, exp: int = 1) -> Monomial:
        m = [0] * len(self.generators)
        m[i] = exp
        return tuple(m)

    def mul_monomials(self, a: Monomial, b: Monomial) -> tuple[int, Monomial | None]:
        """Return (sign, a*b) in normal form; sign 0 when the product vanishes."""
        key = (a, b)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        sign = 1
        swaps = 0
        for j in self._odd_sorted:
            if b[j]:
                if a[j]:
                    res = (0, None)
                    self._mul_cache[key] = res
                    return res
                # odd factors of a sitting after position j must pass b_j
                for i in self._odd_sorted:
                    if i > j and a[i]:
                        swaps += 1
        if swaps % 2:
            sign = -1
        res = (sign, tuple(x + y for x, y in zip(a, b)))
        if len(self._mul_cache) < 2_000_000:
            self._mul_cache[key] = res
        return res

    def normalize(self, word: Iterable[tuple[Generator | str | int, int]]):
        """Sort a word of (generator, exponent) pairs into normal form.

        Returns ``(monomial, sign)``; ``(None, 0)`` if an odd generator repeats.
        """
        exps = [0] * len(self.generators)
        odd_seq = []
        for g, e in word:
            i = self._resolve(g)
            if e < 0:
                raise ValueError("negative exponent")
            if e == 0:
                continue
            if i in self.odd:
                if e > 1 or exps[i]:
                    return None, 0
                odd_seq.append(i)
            exps[i] += e
        inversions = sum(
            1
            for p in range(len(odd_seq))
            for q in range(p + 1, len(odd_seq))
            if odd_seq[p] > odd_seq[q]
        )
        return tuple(exps), (-1 if inversions % 2 else 1)

    def _resolve(self, g) -> int:
        if isinstance(g, int):
            return g
        if isinstance(g, Generator):
            return self.index[g.name]
        return self.index[g]

    def basis(self, degree: int) -> list[Monomial]:
        """All monomials of the given degree, in a fixed lexicographic order."""
        if degree < 0:
            return []
        hit = self._basis_cache.get(degree)
        if hit is not None:
            return hit
        gens = self.generators
        n = len(gens)
        out: list[Monomial] = []
        cur = [0] * n

        def rec(i: int, remaining: int):
            if i == n:
                if remaining == 0:
                    out.append(tuple(cur))
                return
            d = gens[i].degree
            top = remaining // d
            if gens[i].is_odd:
                top = min(top, 1)
            for e in range(top, -1, -1):
                cur[i] = e
                rec(i + 1, remaining - e * d)
            cur[i] = 0

        rec(0, degree)
        self._basis_cache[degree] = out
        return out

    # -- elements ---------------------------------------------------------

    def zero(self) -> "Element":
        return Element(self, {})

    def one(self) -> "Element":
        return Element(self, {self.unit: Q(1)})

    def gen(self, name: str | int, exp: int = 1) -> "Element":
        i = self._resolve(name)
        if i in self.odd and exp > 1:
            return self.zero()
        return Element(self, {self.gen_monomial(i, exp): Q(1)})

    def monomial(self, m: Monomial, coeff=1) -> "Element":
        return Element(self, {tuple(m): Q(coeff)})

    def from_word(self, word, coeff=1) -> "Element":
        m, sign = self.normalize(word)
        if not sign:
            return self.zero()
        return Element(self, {m: Q(coeff) * sign})

    def scalar(self, c) -> "Element":
        return Element(self, {self.unit: Q(c)})


def enumerate_basis(algebra: FreeAlgebra, degree: int) -> list[Monomial]:
    return algebra.basis(degree)


def normalize(algebra: FreeAlgebra, word):
    return algebra.normalize(word)


class Element:
    """A finite Q-linear combination of normal-form monomials."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: FreeAlgebra, terms: Mapping[Monomial, object]):
        self.algebra = algebra
        clean = {}
        for m, c in terms.items():
            if c:
                clean[m] = c if isinstance(c, Q) else Q(c)
        self.terms = clean

    @classmethod
    def _raw(cls, algebra, terms):
        # terms already purged of zeros and holding exact rationals
        e = cls.__new__(cls)
        e.algebra = algebra
        e.terms = terms
        return e

    def _check(self, other: "Element"):
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise ValueError("operands live in different algebras")

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.algebra == other.algebra and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __neg__(self):
        return Element._raw(self.algebra, {m: -c for m, c in self.terms.items()})

    def __add__(self, other):
        if not isinstance(other, Element):
            if other == 0:
                return self
            return self + self.algebra.scalar(other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Element._raw(self.algebra, out)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Element):
            return self + (-Q(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Element":
        c = Q(c)
        if not c:
            return self.algebra.zero()
        return Element._raw(self.algebra, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Element):
            return self.scale(other)
        self._check(other)
        alg = self.algebra
        out: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                sign, m = alg.mul_monomials(ma, mb)
                if not sign:
                    continue
                v = out.get(m, 0) + (ca * cb if sign > 0 else -(ca * cb))
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Element._raw(alg, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, c):
        return self.scale(Q(1) / Q(c))

    def __pow__(self, k: int):
        out = self.algebra.one()
        for _ in range(k):
            out = out * self
        return out

    def degrees(self) -> set[int]:
        return {self.algebra.monomial_degree(m) for m in self.terms}

    def degree(self) -> int | None:
        """The common degree of all terms, or None if inhomogeneous or zero."""
        ds = self.degrees()
        return ds.pop() if len(ds) == 1 else None

    def coefficient(self, m: Monomial) -> Q:
        return self.terms.get(tuple(m), Q(0))

    def __repr__(self):
        if not self.terms:
            return "0"
        gens = self.algebra.generators
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda t: _sort_key(t[0])):
            word = "*".join(
                gens[i].name + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e
            ) or "1"
            parts.append(f"{c}·{word}")
        return " + ".join(parts)


def _sort_key(m: Monomial):
    return tuple(-e for e in m)


@dataclass
class Derivation:
    """A graded derivation, given by its values on generators.

    theta(ab) = theta(a) b + (-1)^{|theta||a|} a theta(b).
    """

    algebra: FreeAlgebra
    degree: int
    values: dict  # generator index -> Element
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        for i, v in self.values.items():
            if v and v.degree() is not None:
                want = self.algebra.degrees[i] + self.degree
                if v.degree() != want:
                    raise ValueError(
                        f"value on {self.algebra.generators[i].name} has degree "
                        f"{v.degree()}, expected {want}"
                    )

    @classmethod
    def from_names(cls, algebra: FreeAlgebra, degree: int, values: Mapping[str, Element]):
        return cls(algebra, degree, {algebra.index[k]: v for k, v in values.items()})

    def on_generator(self, i: int) -> Element:
        v = self.values.get(i)
        if v is None:
            raise KeyError(
                f"derivation undefined on generator {self.algebra.generators[i].name}"
            )
        return v

    def on_monomial(self, m: Monomial) -> Element:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        alg = self.algebra
        total = alg.zero()
        prefix = alg.unit
        prefix_deg = 0
        for i, e in enumerate(m):
            if not e:
                continue
            v = self.on_generator(i)
            if v:
                # theta(g^e) = e g^{e-1} theta(g), valid for even g and for odd g with e=1
                piece = v if e == 1 else alg.monomial(alg.gen_monomial(i, e - 1), e) * v
                suffix = tuple(x if j > i else 0 for j, x in enumerate(m))
                term = alg.monomial(prefix) * piece * alg.monomial(suffix)
                if (self.degree * prefix_deg) % 2:
                    term = -term
                total = total + term
            prefix = tuple(x + (e if j == i else 0) for j, x in enumerate(prefix))
            prefix_deg += e * alg.degrees[i]
        self._cache[m] = total
        return total

    def __call__(self, x: Element) -> Element:
        if x.algebra != self.algebra:
            raise ValueError("element is not in the derivation's algebra")
        out: dict = {}
        for m, c in x.terms.items():
            for mm, cc in self.on_monomial(m).terms.items():
                v = out.get(mm, 0) + c * cc
                if v:
                    out[mm] = v
                else:
                    del out[mm]
        return Element._raw(self.algebra, out)


apply_derivation = lambda theta, e: theta(e)  # noqa: E731


class AlgebraMap:
    """Multiplicative extension of an assignment on generators."""

    def __init__(self, source: FreeAlgebra, target: FreeAlgebra, images: Mapping[int, Element]):
        self.source = source
        self.target = target
        self.images = dict(images)
        self._cache: dict = {}
        for i in range(len(source)):
            if i not in self.images:
                raise KeyError(f"no image for generator {source.generators[i].name}")

    def on_monomial(self, m: Monomial) -> Element:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        out = self.target.one()
        for i, e in enumerate(m):
            if e:
                img = self.images[i]
                if not img:
                    out = self.target.zero()
                    break
                out = out * (img if e == 1 else img ** e)
                if not out:
                    break
        self._cache[m] = out
        return out

    def __call__(self, x: Element) -> Element:
        if x.algebra != self.source:
            raise ValueError("element is not in the map's source algebra")
        out: dict = {}
        for m, c in x.terms.items():
            for mm, cc in self.on_monomial(m).terms.items():
                v = out.get(mm, 0) + c * cc
                if v:
                    out[mm] = v
                else:
                    del out[mm]
        return Element._raw(self.target, out)


@dataclass
class DifferentialReport:
    ok: bool
    violations: list

    def __bool__(self):
        return self.ok


def check_differential(algebra: FreeAlgebra, d: Derivation, cutoff: int) -> DifferentialReport:
    """Check d∘d = 0 and the degree law on every generator of degree <= cutoff."""
    violations = []
    for i, g in enumerate(algebra.generators):
        if g.degree > cutoff:
            continue
        try:
            v = d.on_generator(i)
        except KeyError:
            violations.append((g.name, "undefined"))
            continue
        for m in v.terms:
            if algebra.monomial_degree(m) != g.degree + d.degree:
                violations.append((g.name, "degree"))
                break
        if d(v):
            violations.append((g.name, "d^2 != 0"))
    return DifferentialReport(not violations, violations)
