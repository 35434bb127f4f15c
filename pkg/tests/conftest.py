import os
import time
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from loopalg.dsl import load_model
from loopalg.models import SullivanModel

ROOT = Path(__file__).resolve().parent.parent
MODELS = ROOT / "models"

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.register_profile("quick", max_examples=10, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def model(name: str) -> SullivanModel:
    return load_model(MODELS / f"{name}.model")


def make_model(name, gens, diffs=None) -> SullivanModel:
    """Build a model in code; ``diffs`` maps a name to a function of the bare algebra."""
    bare = SullivanModel(name, gens)
    if not diffs:
        return bare
    return SullivanModel(name, gens, {k: f(bare.algebra) for k, f in diffs.items()})


def borel_cp2() -> SullivanModel:
    """Λ(x2, u2, w5) with dw = u^3 + x u^2, written out independently of the DSL."""
    return make_model(
        "cp2_borel",
        [("x", 2), ("u", 2), ("w", 5)],
        {"w": lambda a: a.gen("u") ** 3 + a.gen("x") * a.gen("u") ** 2},
    )


# ---------------------------------------------------------------------------
# per-criterion summary for the acceptance suite

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")
    config.addinivalue_line("markers", "slow: takes more than a few seconds")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n = mark.args[0]
    slot = _CRITERIA.setdefault(n, {"ok": True, "seconds": 0.0, "notes": []})
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        slot["seconds"] += getattr(rep, "duration", 0.0)
        if hasattr(rep, "wasxfail"):
            slot["ok"] = False
            slot["notes"].append(f"{item.name}: expected failure ({rep.wasxfail})")
        elif rep.outcome != "passed":
            slot["ok"] = False
            slot["notes"].append(f"{item.name}: {rep.outcome}")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        s = _CRITERIA[n]
        tr.write_line(f"criterion {n:2d}: {'PASS' if s['ok'] else 'FAIL'}  ({s['seconds']:.1f} s)")
        for note in s["notes"]:
            tr.write_line(f"    {note}")


@pytest.fixture
def stopwatch():
    t0 = time.perf_counter()
    return lambda: time.perf_counter() - t0


def random_element(algebra, degree, rng, terms=3):
    """A sum of a few basis monomials of ``degree`` with small rational coefficients."""
    from fractions import Fraction

    basis = algebra.basis(degree)
    out = algebra.zero()
    if not basis:
        return out
    for _ in range(terms):
        m = rng.choice(basis)
        c = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        out = out + algebra.monomial(m, c)
    return out
