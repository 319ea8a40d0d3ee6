import pytest

from gamma_affine.algebras import (corrupted_sl2, gl_torus, gl_zk, gN_permutation, heisenberg1,
                                   sl2_bad_form, sl2_chevalley, sl3_diagonal, slN_shift)
from gamma_affine.groups import AbelianGroup, Character, Subgroup
from gamma_affine.lie import (FinitePresentation, check_axioms, coinvariant_quotient,
                              fold_by_subgroup, ideal_identity_check, psi_fixed_point_check)
from gamma_affine.scalars import ONE, Scalar, zeta


@pytest.mark.parametrize("builder", [sl2_chevalley, sl3_diagonal, heisenberg1,
                                     lambda: gN_permutation(3), gl_torus, lambda: gl_zk(2)])
def test_axioms_hold(builder):
    rep = check_axioms(builder())
    assert rep.passed, rep.render(False)


def test_corrupted_witness_is_exact():
    c = check_axioms(corrupted_sl2()).get("jacobi")
    assert c.status == "fail"
    assert c.witness == "J(e, f, h) = 2*e"


def test_bad_form_is_not_invariant():
    rep = check_axioms(sl2_bad_form())
    assert not rep.get("form-invariance").passed


def test_sl2_brackets():
    p = sl2_chevalley()
    assert p.bracket({"e": ONE}, {"f": ONE}) == {"h": ONE}
    assert p.bracket({"h": ONE}, {"f": ONE}) == {"f": Scalar.const(-2)}
    assert p.form({"h": ONE}, {"h": ONE}) == Scalar.const(2)
    assert p.act((1,), {"e": ONE}) == {"f": -ONE}


def test_gl_orbit_bracket_matches_matrix_units():
    # [E_{0,1}, E_{1,0}] = E_00 - E_11 = E_{0,0} - T_1 E_{0,0}
    p = gl_torus()
    got = p.bracket(p.elem(1), p.elem(-1, (1,)))
    assert got == {p.key(0): ONE, p.key(0, (1,)): -ONE}
    assert p.form(p.elem(1), p.elem(-1, (1,))) == ONE
    assert p.form(p.elem(0), p.elem(0, (1,))) == Scalar()


def test_twisted_bracket_on_gl():
    # sums over all translates: [T_g E_00, E_00] cancels, <T_g E_01, E_0,-1> hits once
    p = gl_torus()
    assert p.gamma_bracket(p.elem(0), p.elem(0)) == {}
    assert p.gamma_form(p.elem(0), p.elem(0)) == ONE
    assert p.gamma_form(p.elem(1), p.elem(-1)) == ONE


@pytest.mark.parametrize("builder", [sl2_chevalley, heisenberg1, gl_torus, slN_shift])
def test_ideal_identity(builder):
    rep = ideal_identity_check(builder())
    assert rep.passed, rep.render(False)


@pytest.mark.parametrize("builder", [sl2_chevalley, sl3_diagonal, lambda: gN_permutation(2)])
def test_psi_fixed_point(builder):
    rep = psi_fixed_point_check(builder())
    assert rep.passed, rep.render(False)


def test_coinvariants_of_sl2_chevalley():
    co = coinvariant_quotient(sl2_chevalley())
    # e ~ -f and h ~ -h, so only one class survives
    assert co.dim() == 1


def test_fold_by_kernel_gives_induced_character():
    p = gl_torus(phi=zeta(2))
    H = p.character.kernel()
    co = fold_by_subgroup(p, H)
    q = co.presentation
    assert q.group.torsion == (2,)
    assert q.character.is_injective()


def test_fold_outside_kernel_warns():
    p = sl2_chevalley()
    with pytest.warns(UserWarning):
        fold_by_subgroup(p, Subgroup(p.group, [(1,)]))


def test_action_must_respect_bracket():
    G = AbelianGroup(0, [2])
    bad = FinitePresentation("efh", {("e", "f"): {"h": 1}, ("h", "e"): {"e": 2},
                                     ("h", "f"): {"f": -2}},
                             {("e", "f"): 1, ("h", "h"): 2},
                             [{"e": {"e": 2}, "f": {"f": 1}, "h": {"h": 1}}],
                             G, Character(G, [-ONE]))
    assert not check_axioms(bad).passed
