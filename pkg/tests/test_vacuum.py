import pytest
from hypothesis import given, settings, strategies as st

from gamma_affine.affine import AffineElement, TwistedAffine
from gamma_affine.algebras import gl_torus, heisenberg, heisenberg1, sl2_chevalley
from gamma_affine.scalars import ONE, Scalar, qvar
from gamma_affine.vacuum import build_basis, check_module_relations, format_vector


def series_oracle(mult, depth):
    """Coefficients of prod_n (1 - x^n)^(-mult(n)) up to x^depth."""
    c = [1] + [0] * depth
    for n in range(1, depth + 1):
        for _ in range(mult(n)):
            for d in range(n, depth + 1):
                c[d] += c[d - n]
    return c


def test_heisenberg_dims():
    mod = build_basis(TwistedAffine(heisenberg()), 7, ONE)
    assert mod.dims() == series_oracle(lambda n: 1, 7)


def test_twisted_heisenberg_dims():
    mod = build_basis(TwistedAffine(heisenberg1()), 8, ONE)
    assert mod.dims() == series_oracle(lambda n: n % 2, 8)


def test_sl2_chevalley_dims():
    # fixed-point degrees: one state in even degree, two in odd degree
    mod = build_basis(TwistedAffine(sl2_chevalley()), 5, ONE)
    assert mod.dims() == series_oracle(lambda n: 2 if n % 2 else 1, 5)


def test_vacuum_is_annihilated_by_nonnegative_modes():
    mod = build_basis(TwistedAffine(heisenberg()), 4, ONE)
    for m in range(0, 4):
        assert mod.act("a", m, {(): ONE}) == {}


@given(st.integers(1, 3), st.integers(1, 3))
@settings(max_examples=20, deadline=None)
def test_heisenberg_commutator_on_states(m, n):
    lvl = qvar(1, 1)
    mod = build_basis(TwistedAffine(heisenberg()), 6, lvl)
    w = mod.act("a", -n, {(): ONE})
    got = mod.act("a", m, w)
    assert got == ({(): lvl * Scalar.const(m)} if m == n else {})


@pytest.mark.parametrize("builder,level", [(heisenberg1, ONE), (sl2_chevalley, qvar(1, 1)),
                                           (sl2_chevalley, ONE)])
def test_module_relations(builder, level):
    rep = check_module_relations(build_basis(TwistedAffine(builder()), 4, level), 2)
    assert rep.passed, rep.render(False)


def test_gl_torus_relations_formal_level():
    p = gl_torus(nparams=2)
    rep = check_module_relations(build_basis(TwistedAffine(p), 3, qvar(2, 2)), 2)
    assert rep.passed, rep.render(False)


def test_central_element_acts_by_level():
    lvl = Scalar.const(5)
    mod = build_basis(TwistedAffine(heisenberg()), 3, lvl)
    w = {((1, "a"), (1, "a")): ONE}
    assert mod.act_element(AffineElement.k(), w) == {((1, "a"), (1, "a")): lvl}


def test_format_vector():
    assert format_vector({}) == "0"
    assert format_vector({(): ONE}) == "vac"
    assert "a(-1)" in format_vector({((1, "a"),): Scalar.const(2)})


def test_negative_depth_rejected():
    with pytest.raises(ValueError):
        build_basis(TwistedAffine(heisenberg()), -1, ONE)
