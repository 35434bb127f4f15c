"""Reports produced by the command line tool, with text and JSON renderings.

A :class:`Report` holds plain data only (strings, ints, lists) so that the
JSON form re-reads into an equal object and both renderings show the same
content.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .algebra import Element
from .dsl import render_slots, slot_words
from .models import Host

SCHEMA = 1


@dataclass
class Term:
    coeff: str
    monomial: list  # one [base, susp] pair per tensor slot, or [word] for base algebras


@dataclass
class Result:
    label: str
    degree: int | None = None
    terms: list = field(default_factory=list)
    value: str | None = None
    coords: list | None = None  # [[key, "p/q"], ...] on the canonical basis


@dataclass
class Check:
    name: str
    bound: int
    status: str
    detail: str | None = None
    witness: dict | None = None


@dataclass
class Report:
    command: list
    model: dict
    cutoff: int
    results: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    convention: str = "standard"

    @property
    def failed(self) -> bool:
        return any(c.status == "FAIL" for c in self.checks)

    # -- JSON ---------------------------------------------------------------

    def to_dict(self) -> dict:
        out = {"schema": SCHEMA}
        out.update(asdict(self))
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2, sort_keys=False) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        data = dict(data)
        schema = data.pop("schema", None)
        if schema != SCHEMA:
            raise ValueError(f"unsupported report schema {schema!r}")
        results = []
        for r in data.pop("results", []):
            r = dict(r)
            r["terms"] = [Term(**t) for t in r.get("terms", [])]
            results.append(Result(**r))
        checks = [Check(**c) for c in data.pop("checks", [])]
        return cls(results=results, checks=checks, **data)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))


def element_terms(host: Host, e: Element) -> list[Term]:
    terms = []
    for m, c in sorted(e.terms.items(), key=lambda t: tuple(-x for x in t[0])):
        terms.append(Term(str(Fraction(c)), slot_words(host, m)))
    return terms


def coords_list(coords) -> list:
    """Canonical coordinates as JSON-friendly pairs."""
    items = coords.items() if isinstance(coords, dict) else coords
    return [[[list(k) for k in key], str(Fraction(v))] for key, v in sorted(items)]


def render_terms(terms: list[Term], ascii: bool = False) -> str:
    if not terms:
        return "0"
    dot = "*" if ascii else "·"
    out = []
    for i, t in enumerate(terms):
        c = Fraction(t.coeff)
        body = f"{abs(c)}{dot}{render_slots(t.monomial, ascii)}"
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


_ASCII = str.maketrans({"⊗": "(x)", "Δ": "Delta", "μ": "mu", "·": "*", "≤": "<=", "≠": "!=", "−": "-"})


def to_ascii(s: str) -> str:
    return s.translate(_ASCII)


def render_text(r: Report, ascii: bool = False) -> str:
    lines = [f"command: {' '.join(r.command)}"]
    m = r.model
    lines.append(f"model: {m.get('name')}  fdim: {m.get('fdim')}  class: {m.get('class')}")
    lines.append(f"cutoff: {r.cutoff}  convention: {r.convention}")
    for res in r.results:
        head = res.label
        if res.degree is not None:
            head += f" [degree {res.degree}]"
        if res.value is not None:
            lines.append(f"{head}: {res.value}")
        else:
            lines.append(f"{head}: {render_terms(res.terms, ascii)}")
    for c in r.checks:
        line = f"check {c.name} (degree <= {c.bound}): {c.status}"
        if c.detail:
            line += f"  {c.detail}"
        lines.append(line)
        if c.witness:
            for k, v in c.witness.items():
                lines.append(f"  {k}: {v}")
    for n in r.notes:
        lines.append(f"note: {n}")
    text = "\n".join(lines) + "\n"
    return to_ascii(text) if ascii else text


def render_report(r: Report, fmt: str = "text", ascii: bool = False) -> str:
    if fmt == "json":
        text = r.to_json()
        return to_ascii(text) if ascii else text
    if fmt == "text":
        return render_text(r, ascii)
    raise ValueError(f"unknown format {fmt!r}")


__all__ = ["Check", "Report", "Result", "Term", "coords_list", "element_terms", "render_report", "render_text"]
