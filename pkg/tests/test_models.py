import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import borel_cp2, make_model, model
from loopalg.algebra import check_differential
from loopalg.models import (
    ModelClass,
    ModelError,
    SullivanModel,
    build_loop_model,
    build_path_model,
    classify,
    formal_dimension,
)

FDIMS = {
    "cp2_borel": 3,
    "even_y2": -1,
    "even_y2z4": -4,
    "odd_s3": 3,
    "odd_x3z3": 6,
    "odd_x3z5": 8,
    "pure_d0": 5,
    "pure_odd_excess": 5,
    "s2": 2,
    "general": 10,
}

CLASSES = {
    "cp2_borel": ModelClass.PURE,
    "even_y2": ModelClass.EVEN_GENERATED,
    "even_y2z4": ModelClass.EVEN_GENERATED,
    "general": ModelClass.GENERAL,
    "odd_s3": ModelClass.ODD_GENERATED,
    "odd_x3z5": ModelClass.ODD_GENERATED,
    "pure_d0": ModelClass.PURE,
    "s2": ModelClass.PURE,
}


@pytest.mark.parametrize("name,want", sorted(FDIMS.items()))
def test_formal_dimension_of_corpus(name, want):
    assert formal_dimension(model(name)) == want


@pytest.mark.parametrize("name,want", sorted(CLASSES.items()))
def test_classify_corpus(name, want):
    assert classify(model(name)) is want


@given(st.lists(st.integers(2, 15), min_size=1, max_size=7))
def test_formal_dimension_property(degrees):
    m = make_model("R", [(f"g{i}", d) for i, d in enumerate(degrees)])
    odd = [d for d in degrees if d % 2]
    even = [d for d in degrees if d % 2 == 0]
    assert formal_dimension(m) == sum(odd) - sum(d - 1 for d in even)


def test_validation_errors():
    with pytest.raises(ModelError, match="simply connected"):
        SullivanModel("m", [("x", 1)])
    with pytest.raises(ModelError, match="twice"):
        SullivanModel("m", [("x", 3), ("x", 3)])
    with pytest.raises(ModelError, match="suspension prefix"):
        SullivanModel("m", [("s_x", 3)])
    bare = SullivanModel("m", [("y", 2), ("x", 3)])
    y = bare.algebra.gen("y")
    with pytest.raises(ModelError, match="unknown"):
        SullivanModel("m", [("y", 2), ("x", 3)], {"q": y * y})
    with pytest.raises(ModelError, match="degree"):
        SullivanModel("m", [("y", 2), ("x", 3)], {"x": y})
    bare = SullivanModel("m", [("y", 2), ("x", 5)])
    with pytest.raises(ModelError, match="decomposable|degree"):
        SullivanModel("m", [("y", 2), ("x", 5)], {"x": bare.algebra.gen("y") ** 3 + bare.algebra.gen("y")})
    bare = SullivanModel("m", [("y", 2), ("b", 3), ("c", 6)])
    a = bare.algebra
    with pytest.raises(ModelError, match="d\\^2"):
        SullivanModel("m", [("y", 2), ("b", 3), ("c", 6)],
                      {"b": a.gen("y") ** 2, "c": a.gen("y") ** 2 * a.gen("b")})


def test_path_differential_odd_sphere():
    pm = build_path_model(make_model("S3", [("x", 3)]))
    h = pm.host
    assert pm.D_of("x") == h.gen("R", "x") - h.gen("L", "x")


def test_path_differential_two_sphere():
    # summing the series by hand: D(sx) = x_R - x_L - (y_L + y_R) sy
    pm = build_path_model(make_model("S2", [("y", 2), ("x", 3)], {"x": lambda a: a.gen("y") ** 2}))
    h = pm.host
    want = h.gen("R", "x") - h.gen("L", "x") - (h.gen("L", "y") + h.gen("R", "y")) * h.gen("S", "y")
    assert pm.D_of("x") == want


@pytest.mark.parametrize("name", sorted(FDIMS))
def test_path_and_loop_differentials_square_to_zero(name):
    m = model(name)
    pm = build_path_model(m)
    assert check_differential(pm.algebra, pm.D, 3 * m.max_degree).ok
    lm = build_loop_model(m)
    assert check_differential(lm.algebra, lm.d, 3 * m.max_degree).ok


def test_path_differential_restricts_to_base_differentials():
    m = borel_cp2()
    pm = build_path_model(m)
    h = pm.host
    dw = m.differential_of("w")
    for side in ("L", "R"):
        assert pm.D(h.gen(side, "w")) == h.embed_base(side, dw)


def test_path_model_is_cached_per_model():
    m = borel_cp2()
    assert build_path_model(m) is build_path_model(m)
