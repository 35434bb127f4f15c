"""Acceptance criteria 1 to 11.

Each test carries a ``criterion`` marker; the conftest hook prints one
PASS/FAIL line per criterion at the end of the run.  Running this file as a
script does the same through pytest.
"""

import random
import time
from fractions import Fraction as F

import pytest

from conftest import borel_cp2, make_model, model, random_element
from loopalg.algebra import check_differential
from loopalg.models import build_loop_model, build_path_model, formal_dimension
from loopalg.modules import Scaffold
from loopalg.operations import (
    LoopOpsContext,
    check_associativity,
    check_coassociativity,
    check_frobenius,
    dual_loop_coproduct,
    dual_loop_product,
    iterate_coproduct,
    triviality_scan,
)
from loopalg.shriek import (
    build_shriek,
    mu_shriek_is_zero,
    odd_identity,
    shriek_pure,
    verify_shriek_cocycle,
    verify_shriek_nonboundary,
)

criterion = pytest.mark.criterion


def timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def exps(m, names):
    k = [0] * len(m.generators)
    for nm in names:
        k[m.algebra.index[nm]] += 1
    return tuple(k)


# -- the Borel model of CP^2 and its f, g ------------------------------------


def fg(pair_gen):
    """f and g in ΛV⊗ΛV, given ``pair_gen(side, name)`` with side L or R."""
    xL, xR = pair_gen("L", "x"), pair_gen("R", "x")
    uL, uR = pair_gen("L", "u"), pair_gen("R", "u")
    third, two_thirds = F(1, 3), F(2, 3)
    f = (uL**2 + uL * uR + uR**2 + uL * xR * third + xL * uR * third
         + uL * xL * two_thirds + uR * xR * two_thirds)
    g = (uL**2 + uL * uR + uR**2) * third
    return f, g


@pytest.fixture(scope="module")
def cp2():
    return borel_cp2()


@pytest.fixture(scope="module")
def cp2_ctx(cp2):
    return LoopOpsContext(cp2, 20)


@criterion(1)
def test_criterion_1_path_differential(cp2):
    pm, secs = timed(build_path_model, cp2)
    h = pm.host
    f, g = fg(h.gen)
    expected = (h.gen("R", "w") - h.gen("L", "w")) - f * h.gen("S", "u") - g * h.gen("S", "x")
    assert pm.D_of("w") == expected
    assert secs < 1.0


@criterion(2)
def test_criterion_2_shriek_values(cp2):
    sc = Scaffold(cp2)
    delta, secs = timed(shriek_pure, sc)
    p = sc.pair
    f, g = fg(p.gen)
    assert delta(exps(cp2, ["x", "u"])) == p.gen("R", "w") - p.gen("L", "w")
    assert delta(exps(cp2, ["x"])) == f
    assert delta(exps(cp2, ["u"])) == -g
    assert not delta(exps(cp2, []))
    assert delta.degree == 3
    assert secs < 1.0


@criterion(3)
def test_criterion_3_coproduct(cp2_ctx):
    sc = cp2_ctx.scaffold
    got, secs = timed(dual_loop_coproduct, cp2_ctx, sc.loop2.gen("s1", "u"), via_representative=True)
    want = cp2_ctx.loop_class(sc.loop.gen("B", "u") ** 2)
    assert got == want
    assert got
    assert secs < 5.0


def reference_product_cocycle(L2):
    """The 16-term expression for Dlp(1⊗sx su sw): 8 listed terms and their mirrors."""

    def slot(k, base, susp):
        e = L2.algebra.one()
        for name, p in base:
            e = e * L2.gen(f"b{k}", name) ** p
        for name in susp:
            e = e * L2.gen(f"s{k}", name)
        return e

    def term(c, b1, s1, b2, s2):
        return slot(1, b1, s1) * slot(2, b2, s2) * c

    U, U2, U3 = [("u", 1)], [("u", 2)], [("u", 3)]
    XU, XU2 = [("x", 1), ("u", 1)], [("x", 1), ("u", 2)]
    listed = [
        (F(2, 3), XU, ["u"], U, ["x", "u"]),
        (F(2, 3), U, ["u"], XU, ["x", "u"]),
        (F(1, 3), XU2, ["u"], [], ["x", "u"]),
        (F(1, 3), [], ["u"], XU2, ["x", "u"]),
        (F(-1, 3), U3, ["x"], [], ["x", "u"]),
        (F(-2, 3), U2, ["x"], U, ["x", "u"]),
        (F(-2, 3), U, ["x"], U2, ["x", "u"]),
        (F(-1, 3), [], ["x"], U3, ["x", "u"]),
    ]
    total = L2.algebra.zero()
    for c, b1, s1, b2, s2 in listed:
        total = total + term(c, b1, s1, b2, s2) + term(c, b1, s2, b2, s1)
    return total


@criterion(4)
def test_criterion_4_product(cp2_ctx):
    sc = cp2_ctx.scaffold
    L = sc.loop
    z = L.gen("S", "x") * L.gen("S", "u") * L.gen("S", "w")
    got, secs = timed(dual_loop_product, cp2_ctx, z, via_representative=True)
    P = reference_product_cocycle(sc.loop2)
    assert len(P.terms) == 16
    assert not sc.loop2.d(P)
    assert got == cp2_ctx.loop2_class(P)
    assert got
    assert secs < 30.0


@criterion(5)
def test_criterion_5_iterated_coproduct(cp2_ctx):
    sc = cp2_ctx.scaffold
    L3 = sc.loop3
    z = L3.gen("s1", "u") * L3.gen("s3", "u")
    got, secs = timed(iterate_coproduct, cp2_ctx, z)
    want = cp2_ctx.loop_class(sc.loop.gen("B", "u") ** 4)
    assert got == want
    assert got
    assert secs < 30.0


@criterion(6)
def test_criterion_6_formal_dimension():
    t0 = time.perf_counter()
    assert formal_dimension(borel_cp2()) == 3
    assert formal_dimension(make_model("S3", [("x", 3)])) == 3
    assert formal_dimension(make_model("CPinf", [("y", 2)])) == -1
    rng = random.Random(61)
    for i in range(20):
        gens = [(f"g{j}", rng.randint(2, 12)) for j in range(rng.randint(1, 6))]
        m = make_model(f"R{i}", gens)
        # independent recomputation straight from the declared degrees
        want = sum(d for _, d in gens if d % 2) - sum(d - 1 for _, d in gens if d % 2 == 0)
        assert formal_dimension(m) == want
    assert time.perf_counter() - t0 < 1.0


@criterion(7)
@pytest.mark.parametrize("name", ["odd_s3", "odd_x3z5"])
def test_criterion_7_odd(name):
    ctx = LoopOpsContext(model(name), 20)
    scan = triviality_scan(ctx, 10, evaluate_structural=True)
    prod, cop = scan["product"], scan["coproduct"]
    assert not prod.trivial and prod.witness is not None and prod.value
    assert cop.trivial and cop.structural == "μΔ^! = 0"
    assert cop.evaluated > 0 and cop.witness is None


@criterion(7)
@pytest.mark.parametrize("name,m", [("even_y2", 1), ("even_y2z4", 2)])
def test_criterion_7_even(name, m):
    M = model(name)
    ctx = LoopOpsContext(M, 20)
    scan = triviality_scan(ctx, 10, evaluate_structural=True)
    prod, cop = scan["product"], scan["coproduct"]
    assert prod.trivial and prod.structural == "Δ^!(1) = 0 with d = 0"
    assert prod.evaluated > 0 and prod.witness is None
    assert not cop.trivial and cop.witness is not None
    L2 = ctx.scaffold.loop2
    z = L2.algebra.one()
    for g in M.generators:
        z = z * L2.gen("s1", g.name)
    got = dual_loop_coproduct(ctx, z, via_representative=True)
    assert got == ctx.loop_class(ctx.scaffold.loop.algebra.one()).scale((-1) ** m)


@criterion(8)
@pytest.mark.slow
def test_criterion_8_pure_zero_differential():
    ctx = LoopOpsContext(model("pure_d0"), 20)
    scan = triviality_scan(ctx, 12, evaluate_structural=True)
    assert scan["product"].trivial and scan["product"].witness is None
    assert scan["coproduct"].trivial and scan["coproduct"].witness is None
    assert scan["product"].evaluated > 0 and scan["coproduct"].evaluated > 0


@criterion(8)
@pytest.mark.slow
def test_criterion_8_pure_odd_excess():
    M = model("pure_odd_excess")
    assert len(M.odd) > len(M.even)
    ctx = LoopOpsContext(M, 20)
    assert mu_shriek_is_zero(ctx.delta)
    scan = triviality_scan(ctx, 12, evaluate_structural=True)
    cop = scan["coproduct"]
    assert cop.trivial and cop.structural == "μΔ^! = 0"
    assert cop.evaluated > 0 and cop.witness is None


def corpus():
    return [
        make_model("S3", [("x", 3)]),
        make_model("CPinf", [("y", 2)]),
        make_model("S3xS3", [("x", 3), ("z", 3)]),
        make_model("S2", [("y", 2), ("x", 3)], {"x": lambda a: a.gen("y") ** 2}),
        borel_cp2(),
    ]


def identity_failures(convention):
    out = []
    for M in corpus():
        ctx = LoopOpsContext(M, 20, convention=convention)
        for check in (check_associativity, check_coassociativity, check_frobenius):
            rep = check(ctx, 5)
            assert rep.comparisons
            if not rep.ok:
                out.append((M.name, rep.name))
    return out


@criterion(9)
@pytest.mark.xfail(
    strict=True,
    reason="with the arc orientation stated for the product and coproduct (the default "
    "'standard' convention) associativity fails on S3, S3xS3, S2 and coassociativity on "
    "CPinf and the CP2 Borel model; see the decisions ledger",
)
def test_criterion_9_identities_default_convention():
    assert identity_failures("standard") == []


@criterion(9)
def test_criterion_9_identities_coherent_convention():
    assert identity_failures("coherent") == []


@criterion(10)
@pytest.mark.slow
def test_criterion_10_shriek_soundness():
    t0 = time.perf_counter()
    for M in corpus() + [model(n) for n in ("odd_x3z5", "even_y2z4", "pure_d0", "pure_odd_excess")]:
        delta = build_shriek(Scaffold(M))
        rep = verify_shriek_cocycle(delta, 12)
        assert rep.ok, (M.name, rep.failures[:3])
    for name in ("cp2_borel", "odd_s3", "even_y2"):
        rep = verify_shriek_nonboundary(build_shriek(Scaffold(model(name))), 10)
        assert rep.ok, name
    rng = random.Random(10)
    for i in range(50):
        gens = [(f"x{j}", rng.choice([3, 5, 7, 9])) for j in range(rng.randint(1, 5))]
        sc = Scaffold(make_model(f"O{i}", gens))
        names = [g for g, _ in gens]
        subset = rng.sample(names, rng.randint(1, len(names)))
        assert not odd_identity(sc, subset)
    assert time.perf_counter() - t0 < 120


@criterion(11)
@pytest.mark.slow
def test_criterion_11_engine_invariants():
    t0 = time.perf_counter()
    rng = random.Random(11)
    # d^2 = 0 on every host built for the corpus
    for M in corpus():
        sc = Scaffold(M)
        for host in (sc.pair, sc.path, sc.loop, sc.loop2, sc.loop3, sc.pq, sc.pq_co,
                     sc.based2, sc.n_loop2, sc.n_pq, sc.n_pq_co):
            rep = check_differential(host.algebra, host.d, 2 * M.max_degree + 2)
            assert rep.ok, (M.name, host.name, rep.violations)
        assert check_differential(build_loop_model(M).algebra, build_loop_model(M).d, 40).ok
    # Leibniz on random pairs
    sc = Scaffold(borel_cp2())
    hosts = [sc.loop, sc.path, sc.loop2]
    pairs = 0
    while pairs < 200:
        host = rng.choice(hosts)
        p, q = rng.randint(0, 6), rng.randint(0, 6)
        a = random_element(host.algebra, p, rng)
        b = random_element(host.algebra, q, rng)
        if not a or not b:
            continue
        d = host.d
        assert d(a * b) == d(a) * b + a * d(b) * (-1) ** p
        pairs += 1
    # lift postcondition on everything criteria 3 to 5 lift
    M = borel_cp2()
    ctx = LoopOpsContext(M, 20)
    s = ctx.scaffold
    dual_loop_coproduct(ctx, s.loop2.gen("s1", "u"), via_representative=True)
    dual_loop_product(ctx, s.loop.gen("S", "x") * s.loop.gen("S", "u") * s.loop.gen("S", "w"),
                      via_representative=True)
    iterate_coproduct(ctx, s.loop3.gen("s1", "u") * s.loop3.gen("s3", "u"))
    performed = 0
    for lifter in ctx.lifters:
        for z, Z in lifter.lifts_performed:
            assert lifter.check(z, Z)
            performed += 1
    assert performed > 0
    # representative independence: perturb by random coboundaries
    trials = 0
    while trials < 20:
        n = rng.randint(1, 5)
        keys = [k for k in ctx.basis_keys(n) if k[0] == n]
        if not keys:
            continue
        z = ctx.representative((rng.choice(keys),))
        b = random_element(s.loop.algebra, n - 1, rng)
        z2 = z + s.loop.d(b)
        assert dual_loop_product(ctx, z2, via_representative=True) == dual_loop_product(
            ctx, z, via_representative=True)
        trials += 1
    assert time.perf_counter() - t0 < 120


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
