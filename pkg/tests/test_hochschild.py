import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from koszulthh.bar_koszul import certify_window, koszul_dual_covering
from koszulthh.corpus import PolyRecipe, build_algebra, square_zero, truncated_poly
from koszulthh.dga import DGAlgebra, opposite_dga, tensor_dga
from koszulthh.exact_linear import F2, QQ, rank
from koszulthh.graded_complex import TruncationWindow, WindowError, validate_complex
from koszulthh.hochschild import (
    hc_label,
    hh_dimensions,
    hochschild_complex,
    hochschild_differential,
    hochschild_for,
    kunneth_table,
    shuffle_map,
    shuffle_monoidality_check,
)

import oracles


def lam(n, lab="x", f=QQ):
    return DGAlgebra(f, [("1", 0), (lab, -n)], "1", name=f"L{n}")


ACYCLIC = DGAlgebra(QQ, [("1", 0), ("z", -2), ("x", -3)], "1", differential={"z": {"x": 1}}, name="acyclic")
PROJ = truncated_poly(QQ, -2, 3, "proj")
SQ2 = square_zero(QQ, 2, -2, "sq2")


def test_unit():
    t = hh_dimensions(build_algebra("unit"), (-3, 3))
    assert t.nonzero() == {0: 1}


def test_exterior_zero_differential():
    hc = hochschild_for(lam(3), -12, 0)
    assert hc.complex.differential == {}
    expect = {0: 1}
    for s in range(1, 7):
        expect[-2 * s] = 1
    for s in range(0, 5):
        expect[-2 * s - 3] = 1
    assert hc.betti().nonzero() == expect


def test_polynomial_free_loop_profile():
    t = hh_dimensions(PolyRecipe(3), (0, 12))
    assert t.nonzero() == {0: 1, **{m: 1 for m in range(2, 13)}}
    assert t[1] == 0


def test_labels():
    assert hc_label(("x", ("x", "x"))) == "x⊗[x̄|x̄]"


def test_wraparound_sign_small_case():
    # 1⊗[x̄] -> left absorb x⊗[] and wraparound -(x·1)⊗[]: they cancel
    assert _collect(hochschild_differential(lam(3), ("1", ("x",))), QQ) == {}
    # with two generators the terms land on different words: 1⊗[ū] -> u - u = 0 still,
    # but 1⊗[ū|v̄] -> u⊗[v̄] ± v⊗[ū]
    terms = _collect(hochschild_differential(SQ2, ("1", ("x1", "x2"))), QQ)
    assert set(terms) == {("x1", ("x2",)), ("x2", ("x1",))}


def _collect(terms, f):
    out = {}
    for k, c in terms:
        out[k] = f.add(out.get(k, f.zero()), c)
    return {k: v for k, v in out.items() if v != 0}


@pytest.mark.parametrize("a,window", [
    (lam(3), (-12, 0)),
    (PROJ, (-12, 0)),
    (ACYCLIC, (-10, 0)),
    (SQ2, (-6, 0)),
    (square_zero(F2, 3, -3), (-6, 0)),
    (PolyRecipe(3), (0, 10)),
    (PolyRecipe(2), (0, 8)),
])
def test_d_squared(a, window):
    assert validate_complex(hochschild_for(a, *window).complex).ok


@pytest.mark.parametrize("base,rng", [(PROJ, (0, 8)), (ACYCLIC, (0, 8)), (SQ2, (0, 5)), (lam(3), (0, 10))])
def test_d_squared_on_duals(base, rng):
    d = koszul_dual_covering(base, *rng)
    for alg in (d, opposite_dga(d)):
        assert validate_complex(hochschild_for(alg, *rng).complex).ok


def test_d_squared_on_tensor_with_differential():
    t = tensor_dga(ACYCLIC, PROJ)
    hc = hochschild_for(t, -8, 0)
    assert validate_complex(hc.complex).ok
    # ACYCLIC is quasi-isomorphic to k, so HH(ACYCLIC ⊗ PROJ) = HH(PROJ)
    assert hc.betti() == hh_dimensions(PROJ, (-8, 0))


@pytest.mark.parametrize("g,d,f", [(1, -3, QQ), (1, -2, QQ), (1, -2, F2), (2, -2, QQ), (2, -3, QQ),
                                   (3, -3, F2), (3, -2, QQ)])
def test_square_zero_matches_cyclic_count(g, d, f):
    t = hh_dimensions(square_zero(f, g, d), (-8, 0))
    assert t.nonzero() == oracles.hh_square_zero(g, d, f.characteristic, -8, 0)


@pytest.mark.parametrize("f", [QQ, F2])
def test_truncated_poly_matches_resolution(f):
    t = hh_dimensions(truncated_poly(f, -2, 3), (-12, 0))
    assert t.nonzero() == oracles.hh_truncated_poly(3, -2, f.characteristic, -12, 0)


def test_truncated_poly_mod_p_dividing():
    # k[x]/x^2 over F2 with p | n picks up the extra classes
    f = F2
    t = hh_dimensions(truncated_poly(f, -2, 2), (-10, 0))
    assert t.nonzero() == oracles.hh_truncated_poly(2, -2, 2, -10, 0)


def test_acyclic_is_k():
    assert hh_dimensions(ACYCLIC, (-10, 0)).nonzero() == {0: 1}


def test_window_errors():
    with pytest.raises(WindowError):
        hochschild_complex(lam(3), (-4, 0))
    with pytest.raises(WindowError):
        hochschild_for(lam(3), 0, 4)


@pytest.mark.parametrize("a,window", [(lam(3), (-12, 0)), (PROJ, (-10, 0)), (SQ2, (-6, 0)),
                                      (PolyRecipe(3), (0, 12))])
def test_truncation_stability(a, window):
    assert (hochschild_for(a, *window, extra_words=1).betti().entries
            == hochschild_for(a, *window).betti().entries)


@settings(max_examples=15)
@given(st.integers(1, 2), st.integers(-4, -2), st.integers(-7, 0))
def test_square_zero_windows(g, d, lo):
    t = hh_dimensions(square_zero(QQ, g, d), (lo, 0))
    assert t.nonzero() == oracles.hh_square_zero(g, d, 0, lo, 0)


# --- shuffle map -------------------------------------------------------------------

def test_shuffle_unit_factor_is_isomorphism():
    k = build_algebra("unit")
    sh = shuffle_map(lam(3), k, (-8, 0))
    assert sh.is_chain_map()
    for n, m in sh.matrices.items():
        assert m.rows == m.cols == rank(m)


def test_shuffle_one_one_relative_sign():
    sh = shuffle_map(lam(3), lam(5, "w"), (-8, 0))
    n = -2 + -4
    src = sh.source.basis.labels(n)
    col = src.index("(1⊗[x̄])⊗(1⊗[w̄])")
    tgt = sh.target.basis.labels(n)
    column = {tgt[r]: v for (r, c), v in sh.matrices[n].items() if c == col}
    # |x̄| = -2 and |w̄| = -4 are even: both shuffles enter with +
    assert column == {"1⊗1⊗[s(x⊗1)|s(1⊗w)]": 1, "1⊗1⊗[s(1⊗w)|s(x⊗1)]": 1}


def test_shuffle_odd_letters_relative_sign():
    a = truncated_poly(QQ, -2, 3)  # x̄ has degree -1
    sh = shuffle_map(a, a, (-4, 0))
    n = -2
    src = sh.source.basis.labels(n)
    col = src.index("(1⊗[x̄])⊗(1⊗[x̄])")
    tgt = sh.target.basis.labels(n)
    column = {tgt[r]: v for (r, c), v in sh.matrices[n].items() if c == col}
    assert sorted(column.values()) == [-1, 1]
    assert sh.is_chain_map()


@pytest.mark.parametrize("a,b,window", [
    (lam(3), lam(5, "w"), (-12, 0)),
    (PROJ, ACYCLIC, (-8, 0)),
    (lam(3), SQ2, (-8, 0)),
    (PROJ, lam(3), (-8, 0)),
    (SQ2, PROJ, (-6, 0)),
])
def test_shuffle_is_chain_map(a, b, window):
    sh = shuffle_map(a, b, window)
    assert all(v == 0 for v in sh.chain_map_defect().values())


def test_shuffle_chain_map_on_connective_duals():
    da = koszul_dual_covering(PROJ, 0, 6)
    db = koszul_dual_covering(lam(3), 0, 6)
    assert shuffle_map(da, db, (0, 5)).is_chain_map()


def test_monoidality_exteriors():
    r = shuffle_monoidality_check(lam(3), lam(5, "w"), (-12, 0))
    assert r.passed
    ta = oracles.hh_square_zero(1, -3, 0, -12, 0)
    tb = oracles.hh_square_zero(1, -5, 0, -12, 0)
    expect = {}
    for i, x in ta.items():
        for j, y in tb.items():
            if -12 <= i + j <= 0:
                expect[i + j] = expect.get(i + j, 0) + x * y
    assert r.right_table.nonzero() == expect
    assert r.notes == {"chain_map": True, "homology_iso": True}


@pytest.mark.parametrize("a,b", [(build_algebra("unit"), build_algebra("unit")), (lam(3), SQ2), (PROJ, lam(3))])
def test_monoidality_passes(a, b):
    assert shuffle_monoidality_check(a, b, (-8, 0)).passed


def test_kunneth_table():
    from koszulthh.graded_complex import BettiTable

    w = TruncationWindow(-3, 0)
    a = BettiTable({0: 1, -1: 2}, w)
    assert kunneth_table(a, a, -3, 0).nonzero() == {0: 1, -1: 4, -2: 4}
