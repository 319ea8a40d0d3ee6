from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gamma_affine.affine import AffineElement
from gamma_affine.algebras import gl_torus, heisenberg1, sl2_chevalley
from gamma_affine.conformal import (K, LoopAlgebra, TwistedLoop, affine_comparison_check,
                                    affine_conformal_data, apply_T, check_conformal_axioms,
                                    check_gamma_conformal_axioms, extend_products,
                                    fold_comparison_check, format_celem, heisenberg_conformal,
                                    loop_equivariance_check, loop_jacobi_check, virasoro)
from gamma_affine.scalars import ONE, Scalar, qvar, zeta


def test_virasoro_table():
    V = virasoro(Scalar.const(2))
    assert V.product("L", "L", 0) == {(1, "L"): ONE}
    assert V.product("L", "L", 1) == {(0, "L"): Scalar.const(2)}
    assert V.product("L", "L", 3) == {(0, K): ONE}
    assert V.product("L", "L", 2) == {}


def test_T_kills_torsion():
    V = virasoro()
    assert apply_T(V, {(0, K): ONE}) == {}
    assert apply_T(V, {(0, "L"): ONE}, 2) == {(2, "L"): ONE}


def test_sesquilinearity_of_extended_products():
    # (Ta)_n b = -n a_{n-1} b
    V = virasoro()
    x, y = {(0, "L"): ONE}, {(0, "L"): ONE}
    for n in range(1, 5):
        lhs = extend_products(V, apply_T(V, x), y, n)
        rhs = {k: Scalar.const(-n) * v for k, v in extend_products(V, x, y, n - 1).items()}
        assert lhs == rhs


@pytest.mark.parametrize("c", [virasoro(), virasoro(Scalar.const(Fraction(1, 2))),
                               heisenberg_conformal()])
def test_axioms(c):
    rep = check_conformal_axioms(c)
    assert rep.passed, rep.render(False)


def test_broken_virasoro_witness():
    rep = check_conformal_axioms(virasoro(skew_broken=True))
    assert not rep.passed
    assert rep.get("skew-symmetry").witness == "(L)_0(L) = (2)*TL but skew side gives 0"


@given(st.integers(-4, 4), st.integers(-4, 4))
@settings(max_examples=40, deadline=None)
def test_virasoro_loop_bracket(m, n):
    # L'_m = L(m+1): [L'_m, L'_n] = (m-n) L'_{m+n} + (m^3-m)/12 delta c k(-1)
    c = qvar(1, 1)
    L = LoopAlgebra(virasoro())
    got = L.bracket(L.term("L", m + 1), L.term("L", n + 1))
    loop = {("L", m + n + 1): Scalar.const(m - n)}
    if m + n == 0:
        loop[(K, -1)] = Scalar.const(Fraction(m ** 3 - m, 12)) * c
    assert got == AffineElement(loop)


def test_loop_T_rule():
    L = LoopAlgebra(virasoro())
    # (T a)(m) = -m a(m-1)
    assert L.term("L", 3, s=1) == L.term("L", 2, coeff=Scalar.const(-3))
    assert L.term("L", 3, s=2) == L.term("L", 1, coeff=Scalar.const(6))


def test_loop_jacobi_virasoro():
    assert loop_jacobi_check(LoopAlgebra(virasoro()), 3).passed


@pytest.mark.parametrize("builder", [sl2_chevalley, heisenberg1])
def test_twisted_affine_data(builder):
    p = builder()
    c = affine_conformal_data(p)
    assert check_conformal_axioms(c).passed
    assert check_gamma_conformal_axioms(c).passed
    assert loop_jacobi_check(TwistedLoop(c), 3).passed
    assert loop_equivariance_check(c, 2).passed
    assert affine_comparison_check(p, 3).passed


def test_wrong_twist_shift_fails():
    rep = check_gamma_conformal_axioms(affine_conformal_data(sl2_chevalley(), twist_shift=1))
    assert not rep.passed


def test_orbit_affine_data():
    p = gl_torus()
    c = affine_conformal_data(p)
    assert check_gamma_conformal_axioms(c).passed
    assert affine_comparison_check(p, 2).passed


def test_fold_comparison():
    p = gl_torus(phi=zeta(2))
    assert fold_comparison_check(p, p.character.kernel()).passed


def test_format_celem():
    assert format_celem({}) == "0"
    assert "TL" in format_celem({(1, "L"): ONE})
