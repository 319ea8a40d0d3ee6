import pytest
from hypothesis import given, settings, strategies as st

from gamma_affine.groups import (AbelianGroup, Character, GroupError, Subgroup, integer_kernel,
                                 smith_normal_form)
from gamma_affine.scalars import ONE, qvar, zeta


def _matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))]
            for i in range(len(A))]


small = st.integers(-6, 6)


@given(st.integers(1, 3), st.integers(1, 3), st.data())
@settings(max_examples=60, deadline=None)
def test_smith_normal_form_factorization(r, c, data):
    M = [[data.draw(small) for _ in range(c)] for _ in range(r)]
    U, D, V = smith_normal_form(M, r, c)
    assert _matmul(_matmul(U, M), V) == D
    diag = [D[i][i] for i in range(min(r, c))]
    for i in range(r):
        for j in range(c):
            if i != j:
                assert D[i][j] == 0
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0


@given(st.integers(1, 3), st.integers(1, 4), st.data())
@settings(max_examples=60, deadline=None)
def test_integer_kernel_is_kernel(r, c, data):
    A = [[data.draw(small) for _ in range(c)] for _ in range(r)]
    K = integer_kernel(A, c)
    for v in K:
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in A)


def test_group_basics():
    G = AbelianGroup(1, [2, 3])
    assert G.ngens == 3 and not G.is_finite()
    assert G.reduce((5, 3, -1)) == (5, 1, 2)
    assert G.order_of((0, 1, 1)) == 6
    assert G.order_of((1, 0, 0)) is None
    F = AbelianGroup(0, [4, 6])
    assert F.order() == 24 and F.exponent() == 12
    assert len(F.elements()) == 24
    with pytest.raises(GroupError):
        AbelianGroup(0, [1])


def test_character_rejects_bad_torsion_image():
    G = AbelianGroup(0, [2])
    with pytest.raises(GroupError, match="order 2"):
        Character(G, [zeta(3)])


def test_kernel_of_torus_character():
    G = AbelianGroup(1)
    chi = Character(G, [zeta(2)])
    K = chi.kernel()
    assert K.contains((2,)) and not K.contains((1,))
    assert K.index() == 2
    assert not chi.is_injective()
    assert Character(G, [qvar(1, 1)]).is_injective()


def test_kernel_of_mixed_character():
    G = AbelianGroup(2, [6])
    chi = Character(G, [zeta(4), qvar(1, 1), zeta(6, 2)])
    K = chi.kernel()
    for g in G.elements(3):
        assert K.contains(g) == chi.phi(g).is_one()


@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(0, 5)),
                min_size=0, max_size=3))
@settings(max_examples=50, deadline=None)
def test_quotient_project_is_homomorphism(gens):
    G = AbelianGroup(2, [6])
    H = Subgroup(G, gens)
    q = H.quotient()
    for g in G.elements(1):
        assert q.project(q.lift(q.project(g))) == q.project(g)
        assert H.contains(g) == (not any(q.project(g)))
        for h in [(1, 0, 0), (0, 1, 3)]:
            assert q.project(G.add(g, h)) == q.target.add(q.project(g), q.project(h))
    for h in gens:
        assert H.contains(h)


def test_induced_character():
    G = AbelianGroup(1)
    chi = Character(G, [zeta(2)])
    q = chi.kernel().quotient()
    ind = q.induced_character(chi)
    assert q.target.torsion == (2,)
    assert ind.is_injective()
    for g in G.elements(4):
        assert ind.phi(q.project(g)) == chi.phi(g)
    with pytest.raises(GroupError):
        Subgroup(G, [(1,)]).quotient().induced_character(chi)


def test_character_values():
    G = AbelianGroup(1, [3])
    chi = Character(G, [qvar(1, 1), zeta(3)])
    assert chi.value((2, 1)) == qvar(1, 1, 2) * zeta(3)
    assert chi.value((1, 0), -1) == qvar(1, 1, -1)
    assert chi.value((0, 0)) == ONE
