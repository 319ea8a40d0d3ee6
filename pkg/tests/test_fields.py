import pytest
from hypothesis import given, settings, strategies as st

from gamma_affine.affine import TwistedAffine
from gamma_affine.algebras import gl_torus, heisenberg, heisenberg1
from gamma_affine.fields import (IdentityField, LinearField, LocalityError, ResidueProductField,
                                 ScaledField, ZeroField, affine_vertex_products, commutator,
                                 detect_gamma_locality, falling, gbinom, generate_field_space,
                                 generator_field, permutation_field, quasi_jacobi_check,
                                 verify_commutator_formula, yE_alpha_identity,
                                 yE_local_crosscheck, yE_product)
from gamma_affine.scalars import ONE, Scalar, qvar, zeta
from gamma_affine.vacuum import build_basis


@pytest.fixture(scope="module")
def heis():
    return build_basis(TwistedAffine(heisenberg()), 6, ONE)


@pytest.fixture(scope="module")
def heis1():
    return build_basis(TwistedAffine(heisenberg1()), 6, ONE)


@given(st.integers(-6, 6), st.integers(0, 5))
def test_gbinom_pascal(s, k):
    assert gbinom(s + 1, k + 1) == gbinom(s, k + 1) + gbinom(s, k)


@given(st.integers(-6, 6), st.integers(0, 5))
def test_falling_factorial(m, j):
    assert falling(m, j + 1) == falling(m, j) * (m - j)


def test_identity_field(heis):
    I = IdentityField(heis)
    w = {((1, "a"),): ONE}
    assert I.coeff(-1, w) == w
    assert I.coeff(0, w) == {}


def test_heisenberg_self_locality(heis):
    a = generator_field(heis, "a")
    cert = detect_gamma_locality(a, a, [ONE, -ONE])
    assert cert.roots == (ONE, ONE)
    assert str(cert) == "{1,1}"


def test_twisted_heisenberg_locality(heis1):
    a = generator_field(heis1, "a")
    cert = detect_gamma_locality(a, a, [ONE, -ONE])
    assert sorted(cert.roots, key=lambda r: r.sort_key()) == sorted(
        [ONE, ONE, -ONE, -ONE], key=lambda r: r.sort_key())


def test_locality_failure_raises(heis):
    a = generator_field(heis, "a")
    with pytest.raises(LocalityError):
        detect_gamma_locality(a, a, [-ONE], max_mult=1)


def test_yE_products_heisenberg(heis):
    a = generator_field(heis, "a")
    cert = detect_gamma_locality(a, a, [ONE])
    prods = yE_product(a, a, cert, -2)
    vac = ()
    assert prods[1].coeff_mono(-1, vac) == {vac: ONE}
    assert prods[0].coeff_mono(-1, vac) == {}
    # a_{-1} a is the normally ordered square :aa:
    assert prods[-1].coeff_mono(-1, vac) == {((1, "a"), (1, "a")): ONE}


def test_yE_matches_residue_product(heis):
    a = generator_field(heis, "a")
    cert = detect_gamma_locality(a, a, [ONE])
    prods = yE_product(a, a, cert, -2)
    for n in (-2, -1, 0, 1):
        R = ResidueProductField(a, a, n)
        for k in range(-3, 3):
            for _, mono in heis.vectors(2):
                assert prods[n].coeff_mono(k, mono) == R.coeff_mono(k, mono)


def test_crosscheck_report(heis1):
    a = generator_field(heis1, "a")
    cert = detect_gamma_locality(a, a, [ONE, -ONE])
    rep = yE_local_crosscheck(a, a, cert, n_min=-1, k_window=2)
    assert rep.passed, rep.render(False)


def test_alpha_identity_minus_one(heis):
    a = generator_field(heis, "a")
    rep = yE_alpha_identity(a, a, -ONE, [ONE, -ONE], k_window=2)
    assert rep.passed, rep.render(False)


def test_scaled_and_linear_fields(heis):
    a = generator_field(heis, "a")
    two = Scalar.const(2)
    scaled = ScaledField(a, two)
    doubled = LinearField([(ONE, a), (ONE, a)])
    w = {((1, "a"),): ONE}
    for m in range(-2, 3):
        base = a.coeff(m, w)
        assert doubled.coeff(m, w) == {k: two * c for k, c in base.items()}
        assert scaled.coeff(m, w) == {k: two ** (-m - 1) * c for k, c in base.items()}
    assert ZeroField(heis, 1).coeff(-1, w) == {}


def test_commutator_of_generators(heis):
    a = generator_field(heis, "a")
    w = {(): ONE}
    assert commutator(a, a, 1, -1, w) == {(): ONE}
    assert commutator(a, a, 2, -1, w) == {}


def test_commutator_formula_heisenberg(heis1):
    rep = verify_commutator_formula(heis1, "a", "a", M=2, vec_degree=2)
    assert rep.passed, rep.render(False)


def test_commutator_formula_gl():
    p = gl_torus(nparams=2)
    mod = build_basis(TwistedAffine(p), 3, qvar(2, 2))
    rep = verify_commutator_formula(mod, p.key(1), p.key(-1), M=2, vec_degree=1)
    assert rep.passed, rep.render(False)


def test_quasi_jacobi_z2(heis1):
    a = generator_field(heis1, "a")
    cert = detect_gamma_locality(a, a, [ONE, -ONE])
    prods = affine_vertex_products(heis1, "a", "a", cert, -2)
    rep = quasi_jacobi_check(a, a, list(cert.roots), prods, r_window=(-2, 1), st_window=2)
    assert rep.passed, rep.render(False)


def test_permutation_certificates(heis):
    a = generator_field(heis, "a")
    N = 3
    F = [permutation_field(a, N, j) for j in range(N)]
    cands = [zeta(N, j) for j in range(N)]
    c = detect_gamma_locality(F[0], F[2], cands)
    assert c.roots == (zeta(3, 2), zeta(3, 2))


def test_closure_depth_one(heis):
    a = generator_field(heis, "a")
    F = [permutation_field(a, 2, j) for j in range(2)]
    rep = generate_field_space(F, 1, [ONE, -ONE])
    assert rep.passed, rep.render(False)
    assert rep.get("contains-identity").passed
