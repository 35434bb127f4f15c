import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import borel_cp2, make_model, model
from loopalg.modules import ModuleMap, Scaffold
from loopalg.shriek import (
    ShriekError,
    build_shriek,
    extract_pure_coefficients,
    mu_shriek_is_zero,
    odd_identity,
    odd_product,
    pure_sign,
    shriek_even,
    shriek_odd,
    shriek_pure,
    shriek_unit_is_zero,
    verify_shriek_cocycle,
    verify_shriek_nonboundary,
)


def key(m, names):
    k = [0] * len(m.generators)
    for n in names:
        k[m.algebra.index[n]] += 1
    return tuple(k)


def test_odd_values():
    m = make_model("S3xS3", [("x", 3), ("z", 3)])
    sc = Scaffold(m)
    d = shriek_odd(sc)
    p = sc.pair
    fx = p.gen("R", "x") - p.gen("L", "x")
    fz = p.gen("R", "z") - p.gen("L", "z")
    assert d(key(m, [])) == fx * fz
    assert not d(key(m, ["x"]))
    assert d.degree == 6


def test_even_values():
    m = make_model("CPinf", [("y", 2)])
    sc = Scaffold(m)
    d = shriek_even(sc)
    assert d(key(m, ["y"])) == sc.pair.algebra.one()
    assert not d(key(m, []))
    assert not d(key(m, ["y", "y"]))
    assert d.degree == -1


def test_constructors_check_the_class():
    with pytest.raises(ShriekError):
        shriek_odd(Scaffold(borel_cp2()))
    with pytest.raises(ShriekError):
        shriek_even(Scaffold(model("odd_s3")))
    with pytest.raises(ShriekError):
        shriek_pure(Scaffold(model("even_y2")))
    with pytest.raises(ShriekError, match="not pure"):
        build_shriek(Scaffold(model("general")))


def test_pure_coefficients_of_cp2():
    sc = Scaffold(borel_cp2())
    c = extract_pure_coefficients(sc)
    assert c.odd == ["w"] and c.even == ["x", "u"]
    mu = sc.mu
    b = sc.base
    x, u = b.gen("B", "x"), b.gen("B", "u")
    # μ(f) for the coefficient of s_u
    assert mu(c.f(1, 2)) == u**2 * 3 + x * u * 2


def test_pure_sign_examples():
    assert pure_sign((), (), 4) == 1
    assert pure_sign((), (), 3) == 1  # k = 0 so the fdim term drops
    assert pure_sign((1,), (1,), 3) == -1
    assert pure_sign((1,), (1,), 2) == 1
    assert pure_sign((1, 2), (2, 1), 0) == -1
    assert pure_sign((1, 2), (1, 2), 0) == 1


@pytest.mark.parametrize(
    "name", ["odd_s3", "odd_x3z3", "odd_x3z5", "even_y2", "even_y2z4", "s2", "cp2_borel",
             "pure_d0", "pure_odd_excess"],
)
def test_constructed_shriek_is_a_cocycle(name):
    d = build_shriek(Scaffold(model(name)))
    rep = verify_shriek_cocycle(d, 12)
    assert rep.ok and rep.checked > 0


@pytest.mark.parametrize("name", ["s2", "odd_x3z3", "even_y2z4"])
def test_constructed_shriek_is_not_a_boundary(name):
    assert verify_shriek_nonboundary(build_shriek(Scaffold(model(name))), 10).ok


def test_cocycle_check_catches_a_broken_map():
    m = borel_cp2()
    sc = Scaffold(m)
    good = build_shriek(sc)
    values = dict(good.values)
    del values[key(m, ["x"])]
    bad = ModuleMap(sc, good.degree, values)
    rep = verify_shriek_cocycle(bad, 8)
    assert not rep.ok and rep.failures


def test_nonboundary_check_finds_the_zero_map():
    sc = Scaffold(model("odd_s3"))
    rep = verify_shriek_nonboundary(ModuleMap(sc, 3, {}), 10)
    assert not rep.ok


def test_structural_predicates():
    odd = build_shriek(Scaffold(model("odd_s3")))
    even = build_shriek(Scaffold(model("even_y2")))
    cp2 = build_shriek(Scaffold(borel_cp2()))
    assert mu_shriek_is_zero(odd) and not shriek_unit_is_zero(odd)
    assert shriek_unit_is_zero(even) and not mu_shriek_is_zero(even)
    assert shriek_unit_is_zero(cp2) and not mu_shriek_is_zero(cp2)
    assert mu_shriek_is_zero(build_shriek(Scaffold(model("pure_odd_excess"))))


def test_unit_value_for_a_single_odd_generator():
    sc = Scaffold(model("odd_s3"))
    p = sc.pair
    assert build_shriek(sc)((0,)) == p.gen("R", "x") - p.gen("L", "x")
    assert odd_product(sc, ["x"]) == p.gen("R", "x") - p.gen("L", "x")


@given(st.lists(st.sampled_from([3, 5, 7, 9, 11]), min_size=1, max_size=5), st.data())
def test_odd_identity_vanishes(degrees, data):
    m = make_model("O", [(f"x{i}", d) for i, d in enumerate(degrees)])
    names = [f"x{i}" for i in range(len(degrees))]
    subset = data.draw(st.lists(st.sampled_from(names), min_size=1, unique=True))
    assert not odd_identity(Scaffold(m), subset)
