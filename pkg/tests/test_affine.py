import pytest
from hypothesis import given, settings, strategies as st

from gamma_affine.affine import (AffineElement, TwistedAffine, UntwistedAffine,
                                 fixed_point_compare, jacobi_window_check, permutation_iso_check,
                                 quotient_iso_check, twist_automorphism_check,
                                 well_definedness_check)
from gamma_affine.algebras import gl_torus, heisenberg, heisenberg1, sl2_chevalley, sl3_diagonal
from gamma_affine.scalars import ONE, Scalar, qvar, zeta

modes = st.integers(-4, 4)


def test_heisenberg_bracket():
    ta = TwistedAffine(heisenberg())
    for m in range(-3, 4):
        for n in range(-3, 4):
            got = ta.bracket(AffineElement.term("a", m), AffineElement.term("a", n))
            assert got == AffineElement({}, m if m + n == 0 else 0)


def test_twisted_heisenberg_kills_even_modes():
    ta = TwistedAffine(heisenberg1())
    # sigma a = -a and phi(sigma) = -1: a(m) survives only for odd m
    assert [m for m in range(-4, 5) if ta.degree_basis(m)] == [-3, -1, 1, 3]
    got = ta.bracket(AffineElement.term("a", 1), AffineElement.term("a", -1))
    assert got == AffineElement({}, 2)


@given(modes, modes)
@settings(max_examples=50, deadline=None)
def test_gl_bracket_closed_form(m, n):
    ta = TwistedAffine(gl_torus())
    q = qvar(1, 1)
    lhs = ta.bracket(AffineElement.term(ta.p.key(1), m),
                     ta.canonicalize(AffineElement.term(ta.p.key(-1, (1,)), n)))
    want = AffineElement({(ta.p.key(0), m + n): ONE - q ** (-(m + n))}, m if m + n == 0 else 0)
    assert lhs == want


@given(modes)
@settings(max_examples=20, deadline=None)
def test_translate_relation(m):
    ta = TwistedAffine(gl_torus())
    q = qvar(1, 1)
    shifted = ta.canonicalize(AffineElement.term(ta.p.key(0, (1,)), m))
    assert shifted == AffineElement.term(ta.p.key(0), m, q ** (-m))


@pytest.mark.parametrize("builder", [sl2_chevalley, sl3_diagonal, heisenberg1, gl_torus])
def test_jacobi_window(builder):
    rep = jacobi_window_check(TwistedAffine(builder()), 3)
    assert rep.passed, rep.render(False)


@pytest.mark.parametrize("builder", [sl2_chevalley, sl3_diagonal])
def test_well_defined_and_twist(builder):
    p = builder()
    assert well_definedness_check(TwistedAffine(p), 2).passed
    assert twist_automorphism_check(UntwistedAffine(p), 2).passed


def test_fixed_point_dims_alternate():
    rep = fixed_point_compare(TwistedAffine(sl2_chevalley()), 4)
    assert rep.passed
    assert [rep.dims[m] for m in range(-2, 3)] == [1, 2, 1, 2, 1]


def test_quotient_iso():
    assert quotient_iso_check(gl_torus(phi=zeta(2)), 2).passed
    assert quotient_iso_check(gl_torus(phi=zeta(3)), 2).passed


@pytest.mark.parametrize("N", [2, 3])
def test_permutation_iso(N):
    assert permutation_iso_check(N, 2).passed


def test_element_arithmetic():
    x = AffineElement.term("a", 1, 2) + AffineElement.k(3)
    assert x - x == AffineElement()
    assert (x.scale(Scalar.const(0))).is_zero()
    assert -x + x == AffineElement()
    assert x.degrees() == {1}
