"""Text formats: the ``.model`` description language and class expressions.

A model file looks like::

    # comments run to the end of the line
    model M {
        gen x:2; gen u:2; gen w:5;
        d w = u^3 + x*u^2;
    }

Omitted differentials are zero.  Coefficients are integers or fractions,
optionally followed by ``·`` or ``*``: ``2/3·x*u``, ``-1/3*u^3``.

Class expressions name cocycles of M_LM^⊗k.  A term is a product of slot
parts separated by ``⊗``, ``(x)`` or ``|``; parentheses only group.  With 2k
parts each slot is written ``base ⊗ susp``; with k parts each slot is a single
monomial mixing base and ``s_`` letters.  Because ``(x)`` is always a
separator, a generator named ``x`` must not be written in parentheses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Derivation, Element, FreeAlgebra, check_differential
from .models import Host, ModelError, SullivanModel


class DSLError(ValueError):
    """A parse or validation error pointing into the source text."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>(\#|//)[^\n]*)
  | (?P<rat>\d+\s*/\s*\d+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[{}:;=+\-*^()|]|·|⊗|−)
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    out = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DSLError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind not in ("ws", "comment"):
                if kind == "sym" and s == "−":
                    s = "-"
                out.append(Token(kind, s, line, col))
            col += len(s)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


class _Stream:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    @property
    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def accept(self, text: str) -> Token | None:
        t = self.peek
        if t.kind in ("sym", "ident") and t.text == text:
            return self.next()
        return None

    def expect(self, text: str, what: str | None = None) -> Token:
        t = self.peek
        if t.kind in ("sym", "ident") and t.text == text:
            return self.next()
        shown = t.text or "end of input"
        raise DSLError(f"expected {what or repr(text)}, found {shown!r}", t.line, t.col)

    def expect_kind(self, kind: str, what: str) -> Token:
        t = self.peek
        if t.kind != kind:
            shown = t.text or "end of input"
            raise DSLError(f"expected {what}, found {shown!r}", t.line, t.col)
        return self.next()


def _rational(tok: Token) -> Fraction:
    p, q = (int(s) for s in tok.text.replace(" ", "").split("/")) if "/" in tok.text else (int(tok.text), 1)
    if q == 0:
        raise DSLError("zero denominator", tok.line, tok.col)
    return Fraction(p, q)


# ---------------------------------------------------------------------------
# polynomials


@dataclass
class _Term:
    coeff: Fraction
    factors: list  # [(name, exponent, token)]
    tok: Token


def _parse_poly(st: _Stream, stop: tuple[str, ...]) -> list[_Term]:
    terms = []
    sign = Fraction(1)
    if st.accept("-"):
        sign = Fraction(-1)
    elif st.accept("+"):
        pass
    while True:
        terms.append(_parse_term(st, sign))
        if st.accept("+"):
            sign = Fraction(1)
        elif st.accept("-"):
            sign = Fraction(-1)
        else:
            break
    t = st.peek
    if not (t.kind == "sym" and t.text in stop) and t.kind != "eof":
        raise DSLError(f"unexpected {t.text!r} in polynomial", t.line, t.col)
    return terms


def _parse_term(st: _Stream, sign: Fraction) -> _Term:
    start = st.peek
    coeff = sign
    factors = []
    if start.kind in ("int", "rat"):
        coeff *= _rational(st.next())
        if not (st.accept("·") or st.accept("*")):
            return _Term(coeff, factors, start)
    while True:
        t = st.peek
        if t.kind == "int" and t.text == "1":
            st.next()
        else:
            name = st.expect_kind("ident", "a generator name")
            exp = 1
            if st.accept("^"):
                exp = int(st.expect_kind("int", "an exponent").text)
            factors.append((name.text, exp, name))
        if not st.accept("*"):
            break
    return _Term(coeff, factors, start)


def _term_element(alg: FreeAlgebra, term: _Term) -> Element:
    e = alg.scalar(term.coeff)
    for name, exp, tok in term.factors:
        if name not in alg.index:
            raise DSLError(f"unknown generator {name!r}", tok.line, tok.col)
        e = e * alg.gen(name) ** exp
    return e


# ---------------------------------------------------------------------------
# models


def parse_model(text: str) -> SullivanModel:
    """Parse one ``model NAME { ... }`` block into a validated SullivanModel."""
    st = _Stream(tokenize(text))
    st.expect("model", "'model'")
    name = st.expect_kind("ident", "a model name").text
    st.expect("{")
    gens: list[tuple[str, int]] = []
    gen_tok: dict[str, Token] = {}
    diffs: list[tuple[Token, list[_Term]]] = []
    while not st.accept("}"):
        t = st.peek
        if st.accept("gen"):
            g = st.expect_kind("ident", "a generator name")
            st.expect(":")
            deg_tok = st.expect_kind("int", "a degree")
            st.expect(";")
            deg = int(deg_tok.text)
            if g.text in gen_tok:
                raise DSLError(f"generator {g.text!r} declared twice", g.line, g.col)
            if g.text.startswith("s_"):
                raise DSLError(f"generator name {g.text!r} clashes with the suspension prefix", g.line, g.col)
            if deg < 2:
                raise DSLError(
                    f"generator {g.text} has degree {deg}; models must be simply connected (degrees >= 2)",
                    deg_tok.line, deg_tok.col,
                )
            gens.append((g.text, deg))
            gen_tok[g.text] = g
        elif st.accept("d"):
            g = st.expect_kind("ident", "a generator name")
            st.expect("=")
            poly = _parse_poly(st, (";",))
            st.expect(";")
            diffs.append((g, poly))
        else:
            shown = t.text or "end of input"
            raise DSLError(f"expected 'gen', 'd' or '}}', found {shown!r}", t.line, t.col)
    st.expect_kind("eof", "end of input")

    alg = SullivanModel(name, gens).algebra
    values: dict[str, Element] = {}
    where: dict[str, Token] = {}
    for g, poly in diffs:
        if g.text not in alg.index:
            raise DSLError(f"differential given for undeclared generator {g.text!r}", g.line, g.col)
        if g.text in values:
            raise DSLError(f"differential of {g.text!r} given twice", g.line, g.col)
        e = alg.zero()
        deg = alg.generators[alg.index[g.text]].degree
        for term in poly:
            te = _term_element(alg, term)
            for m in te.terms:
                if alg.monomial_degree(m) != deg + 1:
                    raise DSLError(
                        f"term has degree {alg.monomial_degree(m)} but d{g.text} must have degree {deg + 1}",
                        term.tok.line, term.tok.col,
                    )
                if alg.word_length(m) < 2:
                    raise DSLError(
                        f"d{g.text} is not decomposable (linear term); only minimal models are accepted",
                        term.tok.line, term.tok.col,
                    )
            e = e + te
        values[g.text] = e
        where[g.text] = g
    d = Derivation(alg, 1, {i: values.get(g.name, alg.zero()) for i, g in enumerate(alg.generators)})
    rep = check_differential(alg, d, max(alg.degrees, default=0))
    if not rep.ok:
        bad = rep.violations[0][0]
        tok = where.get(bad, gen_tok.get(bad))
        raise DSLError(f"d^2 != 0 on generator {bad}", tok.line if tok else None, tok.col if tok else None)
    try:
        return SullivanModel(name, gens, values)
    except ModelError as exc:  # pragma: no cover - the checks above mirror the constructor
        raise DSLError(str(exc)) from exc


def load_model(path) -> SullivanModel:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())


def _coeff_text(c: Fraction) -> str:
    return str(c)


def render_poly(e: Element, names=None, dot: str = "·") -> str:
    """Render an Element of a model algebra in the DSL polynomial syntax."""
    if not e.terms:
        return "0"
    gens = e.algebra.generators
    names = names or [g.name for g in gens]
    out = []
    for i, (m, c) in enumerate(sorted(e.terms.items(), key=lambda t: tuple(-x for x in t[0]))):
        word = "*".join(names[j] + (f"^{k}" if k > 1 else "") for j, k in enumerate(m) if k)
        neg = c < 0
        a = -c if neg else c
        if not word:
            body = _coeff_text(a)
        elif a == 1:
            body = word
        else:
            body = f"{_coeff_text(a)}{dot}{word}"
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def render_model(m: SullivanModel, ascii: bool = False) -> str:
    """Inverse of :func:`parse_model` up to formatting."""
    dot = "*" if ascii else "·"
    lines = [f"model {m.name} {{"]
    for g, deg in m.declared:
        lines.append(f"    gen {g}:{deg};")
    for g, _ in m.declared:
        v = m.differential_of(g)
        if v.terms:
            lines.append(f"    d {g} = {render_poly(v, dot=dot)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# class expressions

SEPARATORS = ("⊗", "|", "(x)")


def _split_top(text: str) -> list[tuple[int, str]]:
    """Split a class expression into signed terms at top-level + and -."""
    terms = []
    depth = 0
    cur = []
    sign = 1
    started = False
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise DSLError(f"unbalanced ')' at col {i + 1}", 1, i + 1)
        if ch in "+-−" and depth == 0 and not _after_coeff_slash(cur):
            body = "".join(cur).strip()
            if body:
                terms.append((sign, body))
            elif started:
                raise DSLError(f"empty term before {ch!r}", 1, i + 1)
            sign = -1 if ch in "-−" else 1
            cur = []
            started = True
        else:
            cur.append(ch)
        i += 1
    if depth:
        raise DSLError("unbalanced '('", 1, len(text))
    body = "".join(cur).strip()
    if not body:
        raise DSLError("empty class expression", 1, len(text) + 1)
    terms.append((sign, body))
    return terms


def _after_coeff_slash(cur: list) -> bool:
    s = "".join(cur).rstrip()
    return s.endswith("/")


def _parts(body: str) -> list[str]:
    s = body.replace("(x)", "\x00").replace("⊗", "\x00").replace("|", "\x00")
    s = s.replace("(", " ").replace(")", " ")
    return [p.strip() for p in s.split("\x00")]


_PART_RE = re.compile(r"^(?:(\d+(?:\s*/\s*\d+)?)\s*[·*]?\s*)?(.*)$")


def _parse_part(part: str) -> tuple[Fraction, list[tuple[str, int]]]:
    m = _PART_RE.match(part)
    coeff_txt, rest = m.group(1), m.group(2).strip()
    coeff = Fraction(coeff_txt.replace(" ", "")) if coeff_txt else Fraction(1)
    if not rest:
        if coeff_txt is None:
            raise DSLError(f"empty tensor factor in {part!r}", 1, 1)
        return coeff, []
    factors = []
    for f in rest.split("*"):
        f = f.strip()
        if f == "1":
            continue
        fm = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)(?:\s*\^\s*(\d+))?", f)
        if not fm:
            raise DSLError(f"cannot read factor {f!r}", 1, 1)
        factors.append((fm.group(1), int(fm.group(2) or 1)))
    return coeff, factors


def loop_power_blocks(k: int) -> list[tuple[str, str]]:
    """(base tag, suspension tag) per slot of M_LM^⊗k."""
    if k == 1:
        return [("B", "S")]
    return [(f"b{i}", f"s{i}") for i in range(1, k + 1)]


def parse_class(text: str, host: Host, slots: int) -> Element:
    """Read a class expression as a cocycle candidate of ``host`` (M_LM^⊗slots)."""
    blocks = loop_power_blocks(slots)
    names = {g for g, _ in host.model.declared}
    total = host.algebra.zero()
    for sign, body in _split_top(text):
        parts = _parts(body)
        if len(parts) == 2 * slots:
            paired = True
        elif len(parts) == slots:
            paired = False
        else:
            raise DSLError(
                f"term {body!r} has {len(parts)} tensor factors; expected {slots} or {2 * slots}", 1, 1
            )
        e = host.algebra.scalar(sign)
        for idx, part in enumerate(parts):
            coeff, factors = _parse_part(part)
            e = e.scale(coeff)
            slot = idx // 2 if paired else idx
            btag, stag = blocks[slot]
            for name, exp in factors:
                susp = name.startswith("s_")
                base_name = name[2:] if susp else name
                if base_name not in names:
                    raise DSLError(f"unknown generator {name!r}", 1, 1)
                if paired and susp != (idx % 2 == 1):
                    side = "suspension" if idx % 2 else "base"
                    raise DSLError(f"{name!r} cannot appear in the {side} factor of slot {slot + 1}", 1, 1)
                e = e * host.gen(stag if susp else btag, base_name) ** exp
        total = total + e
    return total


# ---------------------------------------------------------------------------
# rendering host elements slot by slot


def slot_words(host: Host, m, ascii: bool = False) -> list[list[str]]:
    """Split a host monomial into per-block words.

    Loop-type hosts give one [base, susp] pair per tensor slot; hosts made of
    base blocks only (ΛV, ΛV⊗ΛV, ...) give a single slot listing every block.
    """
    out = []
    gens = host.algebra.generators
    for b in host.blocks:
        lo, hi = host.block_slices[b.tag]
        word = "*".join(
            gens[i].label + (f"^{m[i]}" if m[i] > 1 else "") for i in range(lo, hi) if m[i]
        ) or "1"
        out.append(word)
    if all(b.kind == "base" for b in host.blocks):
        return [out]
    pairs = []
    for i in range(0, len(out), 2):
        pairs.append(out[i:i + 2])
    return pairs


def render_slots(slots: list[list[str]], ascii: bool = False) -> str:
    tensor = " (x) " if ascii else " ⊗ "
    return " (x) ".join(tensor.join(s) for s in slots)


def render_element(host: Host, e: Element, ascii: bool = False) -> str:
    if not e.terms:
        return "0"
    dot = "*" if ascii else "·"
    out = []
    for i, (m, c) in enumerate(sorted(e.terms.items(), key=lambda t: tuple(-x for x in t[0]))):
        body = f"{abs(c)}{dot}{render_slots(slot_words(host, m), ascii)}"
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


__all__ = [
    "DSLError",
    "load_model",
    "parse_class",
    "parse_model",
    "render_element",
    "render_model",
    "render_poly",
    "slot_words",
    "tokenize",
]
