"""Bundled Lie presentations.

Matrix algebras (gl over a lattice index set, finitary sl) are presented as
free Z^k-orbits whose structure rules are computed from sparse matrix
commutators and the trace form, then decomposed back onto orbit labels.
"""

from __future__ import annotations

from .groups import AbelianGroup, Character
from .lie import FinitePresentation, OrbitPresentation
from .linalg import express, vaxpy
from .scalars import ONE, Scalar, qvar, zeta

__all__ = [
    "sl2_chevalley",
    "sl2_bad_form",
    "corrupted_sl2",
    "heisenberg",
    "heisenberg1",
    "sl3_diagonal",
    "gN_permutation",
    "gl_torus",
    "gl_zk",
    "slN_shift",
    "BUILDERS",
]


# ---------------------------------------------------------------------------
# finite-basis algebras

SL2_BRACKETS = {("e", "f"): {"h": 1}, ("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}}
SL2_FORM = {("e", "f"): 1, ("h", "h"): 2}
CHEVALLEY = {"e": {"f": -1}, "f": {"e": -1}, "h": {"h": -1}}


def _z2(sign_image=-1):
    G = AbelianGroup(0, [2])
    return G, Character(G, [Scalar.const(sign_image)])


def sl2_chevalley(twist: bool = True, phi_sign: int = -1) -> FinitePresentation:
    """sl2 with the Chevalley involution; Gamma = Z/2, phi(sigma) = phi_sign."""
    if not twist:
        G = AbelianGroup(0, ())
        return FinitePresentation("efh", SL2_BRACKETS, SL2_FORM, [], G, Character(G, []),
                                  name="sl2")
    G, chi = _z2(phi_sign)
    return FinitePresentation("efh", SL2_BRACKETS, SL2_FORM, [CHEVALLEY], G, chi,
                              name="sl2_chevalley")


def corrupted_sl2() -> FinitePresentation:
    """Negative control: [e,f] = h + e breaks Jacobi."""
    br = dict(SL2_BRACKETS)
    br[("e", "f")] = {"h": 1, "e": 1}
    G, chi = _z2()
    return FinitePresentation("efh", br, SL2_FORM, [CHEVALLEY], G, chi, name="corrupted_sl2")


def sl2_bad_form() -> FinitePresentation:
    """Negative control: <h,h> = 1 is not invariant, so the central cocycle fails."""
    form = dict(SL2_FORM)
    form[("h", "h")] = 1
    G, chi = _z2()
    return FinitePresentation("efh", SL2_BRACKETS, form, [CHEVALLEY], G, chi,
                              name="sl2_bad_form")


def heisenberg(twist: bool = False) -> FinitePresentation:
    """Rank one abelian algebra, <a,a> = 1; with twist: Z/2 acts by -1, phi = -1."""
    if twist:
        G, chi = _z2()
        return FinitePresentation(["a"], {}, {("a", "a"): 1}, [{"a": {"a": -1}}], G, chi,
                                  name="heisenberg1")
    G = AbelianGroup(0, ())
    return FinitePresentation(["a"], {}, {("a", "a"): 1}, [], G, Character(G, []),
                              name="heisenberg")


def heisenberg1() -> FinitePresentation:
    return heisenberg(twist=True)


def _matmul(X: dict, Y: dict) -> dict:
    out: dict = {}
    for (a, b), x in X.items():
        for (c, d), y in Y.items():
            if b == c:
                vaxpy(out, {(a, d): x * y})
    return out


def _commutator(X: dict, Y: dict) -> dict:
    out = _matmul(X, Y)
    return vaxpy(out, _matmul(Y, X), -ONE)


def _trace(X: dict) -> Scalar:
    s = Scalar()
    for (a, b), x in X.items():
        if a == b:
            s = s + x
    return s


def _finite_from_matrices(labels, mats, action, group, chi, name):
    basis = [mats[l] for l in labels]
    brackets, form = {}, {}
    for a in labels:
        for b in labels:
            c = express(basis, _commutator(mats[a], mats[b]))
            if c:
                brackets[(a, b)] = {labels[i]: v for i, v in c.items()}
            t = _trace(_matmul(mats[a], mats[b]))
            if t:
                form[(a, b)] = t
    return FinitePresentation(labels, brackets, form, action, group, chi, name=name,
                              fill_antisymmetric=False)


def sl3_diagonal(phi_power: int = 1) -> FinitePresentation:
    """sl3 with Z/3 acting by Ad(diag(1, z, z^2)), trace form; phi(t) = z^phi_power."""
    labels, mats = [], {}
    for i in range(3):
        for j in range(3):
            if i != j:
                l = f"E{i}{j}"
                labels.append(l)
                mats[l] = {(i, j): ONE}
    labels += ["H1", "H2"]
    mats["H1"] = {(0, 0): ONE, (1, 1): -ONE}
    mats["H2"] = {(1, 1): ONE, (2, 2): -ONE}
    act = {}
    for i in range(3):
        for j in range(3):
            if i != j:
                act[f"E{i}{j}"] = {f"E{i}{j}": zeta(3, i - j)}
    G = AbelianGroup(0, [3])
    chi = Character(G, [zeta(3, phi_power)])
    return _finite_from_matrices(labels, mats, [act], G, chi, "sl3_diagonal")


def gN_permutation(N: int = 2) -> FinitePresentation:
    """sl2^(+N) with the cyclic shift of summands, phi(sigma) = zeta_N."""
    labels = [f"{x}{i}" for i in range(N) for x in "efh"]
    br, form = {}, {}
    for i in range(N):
        for (a, b), v in SL2_BRACKETS.items():
            br[(f"{a}{i}", f"{b}{i}")] = {f"{k}{i}": c for k, c in v.items()}
        for (a, b), c in SL2_FORM.items():
            form[(f"{a}{i}", f"{b}{i}")] = c
    shift = {f"{x}{i}": {f"{x}{(i + 1) % N}": 1} for i in range(N) for x in "efh"}
    G = AbelianGroup(0, [N])
    chi = Character(G, [zeta(N)])
    return FinitePresentation(labels, br, form, [shift], G, chi, name=f"g{N}_permutation")


# ---------------------------------------------------------------------------
# lattice matrix algebras as free orbits


class _MatrixOrbits:
    """Structure rules for a Z^k-translation-invariant algebra of finitary matrices."""

    def __init__(self, k, matrix_of, decompose):
        self.k = k
        self.matrix_of = matrix_of  # label -> sparse matrix at the identity translate
        self.decompose = decompose  # sparse matrix -> {(g, label): coeff}

    def _shifted(self, u, g):
        return {(_add(a, g), _add(b, g)): c for (a, b), c in self.matrix_of(u).items()}

    def _candidates(self, u, v):
        iu = {i for ab in self.matrix_of(u) for i in ab}
        iv = {i for ab in self.matrix_of(v) for i in ab}
        return sorted({_sub(b, a) for a in iu for b in iv})

    def beta(self, u, v):
        out = {}
        V = self.matrix_of(v)
        for g in self._candidates(u, v):
            c = _commutator(self._shifted(u, g), V)
            if c:
                out[g] = self.decompose(c)
        return out

    def gamma(self, u, v):
        out = {}
        V = self.matrix_of(v)
        for g in self._candidates(u, v):
            t = _trace(_matmul(self._shifted(u, g), V))
            if t:
                out[g] = t
        return out


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _gl_rules(k):
    def lab(d):
        return d[0] if k == 1 else d

    def vec(l):
        return (l,) if k == 1 else tuple(l)

    def matrix_of(u):
        return {((0,) * k, vec(u)): ONE}

    def decompose(M):
        return {(a, lab(_sub(b, a))): c for (a, b), c in M.items()}

    return _MatrixOrbits(k, matrix_of, decompose)


def gl_zk(k: int = 2, sample=None, character=None, name=None, nparams=None) -> OrbitPresentation:
    """gl over the index set Z^k with Z^k acting by translation; phi(e_i) = q_i.

    ``nparams`` > k reserves extra formal parameters (e.g. for a formal level).
    """
    G = AbelianGroup(k)
    chi = character or Character(G, [qvar(i + 1, nparams or k) for i in range(k)])
    rules = _gl_rules(k)
    if sample is None:
        if k == 1:
            sample = [-1, 0, 1]
        else:
            sample = [(0,) * k] + [tuple(int(i == j) for j in range(k)) for i in range(k)]
    return OrbitPresentation(G, chi, rules.beta, rules.gamma, sample,
                             name=name or f"gl_z{k}")


def gl_torus(sample=None, phi=None, nparams: int = 1) -> OrbitPresentation:
    """gl over Z with the shift; orbit label d stands for E_{0,d}; phi(1) = q."""
    G = AbelianGroup(1)
    chi = Character(G, [phi if phi is not None else qvar(1, nparams)])
    return gl_zk(1, sample=sample if sample is not None else [-1, 0, 1], character=chi,
                 name="gl_torus")


def slN_shift(n: int = 2, sample=None, nparams: int = 1) -> OrbitPresentation:
    """Finitary sl over Z generated by the translates of sl_{n+1}, phi(1) = q.

    Orbit labels: nonzero d for E_{0,d}, and "H" for E_{0,0} - E_{1,1}.
    """
    def matrix_of(u):
        if u == "H":
            return {((0,), (0,)): ONE, ((1,), (1,)): -ONE}
        return {((0,), (u,)): ONE}

    def decompose(M):
        out: dict = {}
        diag = {}
        for (a, b), c in M.items():
            if a == b:
                diag[a[0]] = c
            else:
                vaxpy(out, {(a, b[0] - a[0]): c})
        if diag:
            # sum_a c_a E_aa = sum_m b_m T_m H with b_m = sum_{a <= m} c_a
            lo, hi = min(diag), max(diag)
            run = Scalar()
            for m in range(lo, hi):
                run = run + diag.get(m, Scalar())
                if run:
                    vaxpy(out, {((m,), "H"): run})
            if run + diag.get(hi, Scalar()):
                raise ValueError("diagonal part is not traceless")
        return out

    rules = _MatrixOrbits(1, matrix_of, decompose)
    G = AbelianGroup(1)
    chi = Character(G, [qvar(1, nparams)])
    if sample is None:
        sample = [d for d in range(-n, n + 1) if d] + ["H"]
    return OrbitPresentation(G, chi, rules.beta, rules.gamma, sample, name=f"sl{n + 1}_shift")


BUILDERS = {
    "sl2_chevalley": sl2_chevalley,
    "corrupted_sl2": corrupted_sl2,
    "sl2_bad_form": sl2_bad_form,
    "heisenberg": heisenberg,
    "heisenberg1": heisenberg1,
    "sl3_diagonal": sl3_diagonal,
    "gN_permutation": gN_permutation,
    "gl_torus": gl_torus,
    "gl_zk": gl_zk,
    "slN_shift": slN_shift,
}
