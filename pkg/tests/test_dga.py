import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from koszulthh.corpus import CATALOG, build_algebra, square_zero, truncated_poly
from koszulthh.dga import (
    Connectivity,
    DGAlgebra,
    opposite_dga,
    relabel,
    tensor_dga,
    underlying_complex,
    unit_algebra,
    validate_dga,
)
from koszulthh.exact_linear import F2, QQ, FieldError, FieldSpec
from koszulthh.graded_complex import homology_dimensions, validate_complex


def lam(n, lab="x", f=QQ):
    return DGAlgebra(f, [("1", 0), (lab, -n)], "1", name=f"L{n}")


def free_pair(f=QQ):
    """k<a, b>/(words of length 3), |a| = -2, |b| = -3, noncommutative."""
    basis = [("1", 0), ("a", -2), ("b", -3), ("aa", -4), ("ab", -5), ("ba", -5), ("bb", -6)]
    prod = {("a", "a"): {"aa": 1}, ("a", "b"): {"ab": 1}, ("b", "a"): {"ba": 1}, ("b", "b"): {"bb": 1}}
    return DGAlgebra(f, basis, "1", prod, name="free_pair")


ACYCLIC = DGAlgebra(QQ, [("1", 0), ("z", -2), ("x", -3)], "1", differential={"z": {"x": 1}}, name="acyclic")


@pytest.mark.parametrize("name", list(CATALOG))
@pytest.mark.parametrize("f", [QQ, F2])
def test_corpus_algebras_validate(name, f):
    a = build_algebra(name, f)
    alg = a if isinstance(a, DGAlgebra) else a.expand(0, 14)
    assert validate_dga(alg).ok, validate_dga(alg).first


def test_unit_products_filled():
    a = lam(3)
    assert a.mul("1", "x") == {"x": 1}
    assert a.mul("x", "x") == {}
    assert a.is_finite and not a.is_unit_algebra


@pytest.mark.parametrize("make,kind", [
    (lambda: DGAlgebra(QQ, [("x", -2)], "1"), "unit"),
    (lambda: DGAlgebra(QQ, [("1", 0), ("x", -2)], "1", {("x", "x"): {"y": 1}}), "label"),
    (lambda: DGAlgebra(QQ, [("1", 0), ("x", -2), ("y", -3)], "1", {("x", "x"): {"y": 1}}), "degree"),
    (lambda: DGAlgebra(QQ, [("1", 0), ("x", -1)], "1"), "connectivity"),
    (lambda: DGAlgebra(QQ, [("1", 0), ("x", 2)], "1", connectivity=Connectivity.SIMPLY_COCONNECTIVE),
     "connectivity"),
    (lambda: DGAlgebra(QQ, [("1", 0), ("x", -2), ("y", -3)], "1", differential={"x": {"y": 1, "1": 0}},
                       product={("x", "y"): {}}), None),
])
def test_validation_failures(make, kind):
    rep = validate_dga(make())
    if kind is None:
        assert rep.ok
    else:
        assert not rep.ok
        assert rep.first.kind.startswith(kind)


def test_detects_d_squared():
    a = DGAlgebra(QQ, [("1", 0), ("x", -2), ("y", -3), ("z", -4)], "1",
                  differential={"x": {"y": 1}, "z": {"y": 1}},
                  connectivity=Connectivity.SIMPLY_COCONNECTIVE)
    # d lowers degree: z (-4) -> y (-3) is a degree error, caught before d^2
    assert validate_dga(a).first.kind == "degree"
    b = DGAlgebra(QQ, [("1", 0), ("u", -2), ("v", -3), ("w", -4)], "1",
                  differential={"u": {"v": 1}, "v": {"w": 1}})
    assert validate_dga(b).first.kind == "d_squared"


def test_detects_leibniz_failure():
    # d(a) = b but a·a = 0 while d(a·a) should be b·a + a·b = 2 ab
    basis = [("1", 0), ("a", -2), ("b", -3), ("c", -5)]
    a = DGAlgebra(QQ, basis, "1", {("a", "b"): {"c": 1}, ("b", "a"): {"c": 1}}, {"a": {"b": 1}})
    assert validate_dga(a).first.kind == "leibniz"


def test_detects_non_associativity():
    basis = [("1", 0), ("a", -2), ("b", -4), ("c", -6)]
    prod = {("a", "a"): {"b": 1}, ("a", "b"): {"c": 1}, ("b", "a"): {"c": 2}}
    assert validate_dga(DGAlgebra(QQ, basis, "1", prod)).first.kind == "associativity"


def test_opposite():
    fp = free_pair()
    op = opposite_dga(fp)
    assert validate_dga(op).ok
    assert op.mul("b", "a") == {"ab": 1}
    assert opposite_dga(op) == fp
    assert opposite_dga(lam(3)) == lam(3)


def test_opposite_sign_even_odd():
    fp = free_pair()
    op = opposite_dga(fp)
    # x ·op y = (-1)^{|x||y|} y·x: |a||b| = 6 is even, |b||b| = 9 is odd
    assert op.mul("a", "b") == {"ba": 1}
    assert op.mul("b", "b") == {"bb": -1}


def test_tensor():
    t = tensor_dga(lam(3), lam(5, "w"))
    assert validate_dga(t).ok
    assert t.mul("x⊗1", "1⊗w") == {"x⊗w": 1}
    assert t.mul("1⊗w", "x⊗1") == {"x⊗w": -1}
    with pytest.raises(FieldError):
        tensor_dga(lam(3), lam(3, f=F2))


def test_tensor_with_differential_and_truncation():
    t = tensor_dga(ACYCLIC, free_pair())
    assert validate_dga(t).ok
    cut = tensor_dga(ACYCLIC, free_pair(), window=(-6, 0))
    assert cut.truncated_at == -6
    assert validate_dga(cut).ok
    assert all(d >= -6 for d in cut.degree_of.values())


def test_underlying_complex():
    cx = underlying_complex(ACYCLIC)
    assert validate_complex(cx).ok
    assert homology_dimensions(cx, (-3, 0)).nonzero() == {0: 1}


def test_relabel_and_unit():
    a = relabel(lam(3), {"x": "t"})
    assert a.degree("t") == -3
    assert unit_algebra(QQ).is_unit_algebra


# --- generated algebras ------------------------------------------------------

@st.composite
def small_algebras(draw):
    f = draw(st.sampled_from([QQ, F2, FieldSpec.prime(3)]))
    kind = draw(st.sampled_from(["sq0", "trunc", "lam"]))
    if kind == "sq0":
        return square_zero(f, draw(st.integers(1, 3)), draw(st.integers(-6, -2)))
    if kind == "trunc":
        return truncated_poly(f, -2 * draw(st.integers(1, 2)), draw(st.integers(2, 4)))
    return lam(draw(st.sampled_from([3, 5, 7])), f=f)


@settings(max_examples=40)
@given(small_algebras())
def test_generated_algebras_validate(a):
    assert validate_dga(a).ok


@settings(max_examples=25)
@given(small_algebras(), small_algebras())
def test_tensor_of_generated_validates(a, b):
    if a.field != b.field:
        with pytest.raises(FieldError):
            tensor_dga(a, b)
        return
    t = tensor_dga(a, b, window=(-8, 0))
    assert validate_dga(t).ok
    assert validate_dga(opposite_dga(t)).ok
