"""Conformal (vertex Lie) algebras, Gamma-twisted structures and their loop algebras.

Elements of a conformal algebra are finite sums ``{(s, gen): c}`` standing for
c * T^s gen.  Torsion generators (T gen = 0, e.g. a central k) only carry s = 0.
"""

from __future__ import annotations

from math import comb, factorial

from .affine import AffineElement, TwistedAffine
from .groups import AbelianGroup, Character, Subgroup
from .linalg import Echelon, format_key, vaxpy, vsub
from .report import Report
from .scalars import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "ConformalPresentation",
    "conformal_from_table",
    "virasoro",
    "affine_conformal_data",
    "heisenberg_conformal",
    "extend_products",
    "apply_T",
    "check_conformal_axioms",
    "check_gamma_conformal_axioms",
    "LoopAlgebra",
    "TwistedLoop",
    "loop_bracket",
    "twisted_loop_bracket",
    "loop_jacobi_check",
    "fold_conformal_by_subgroup",
    "fold_comparison_check",
    "affine_comparison_check",
    "loop_equivariance_check",
    "format_celem",
]

K = "k"


def format_celem(x: dict) -> str:
    if not x:
        return "0"
    parts = []
    for (s, g), c in sorted(x.items(), key=lambda kv: (kv[0][0], str(kv[0][1]))):
        t = format_key(g)
        if s == 1:
            t = f"T{t}"
        elif s > 1:
            t = f"T^{s}{t}"
        cs = str(c)
        parts.append(t if cs == "1" else (f"-{t}" if cs == "-1" else f"({cs})*{t}"))
    return " + ".join(parts).replace("+ -", "- ")


class ConformalPresentation:
    """Generators with n-th products and a Gamma action R_g.

    ``product(a, b, n)`` returns the n-th product of two generators as an
    element; ``R(g, a)`` returns {gen: unit scalar}; ``support(a, b)`` lists the
    group elements g with (R_g a)_n b possibly nonzero.
    """

    def __init__(self, generators, torsion, product, group: AbelianGroup, character: Character,
                 R=None, support=None, kind="finite", name="", max_n=8):
        self.generators = list(generators)
        self.torsion = set(torsion)
        self._product = product
        self.group = group
        self.character = character
        self._R = R
        self._support = support
        self.kind = kind
        self.name = name
        self.max_n = max_n
        self._cache: dict = {}
        self._bound: dict = {}

    def is_torsion(self, gen) -> bool:
        return gen in self.torsion

    def product(self, a, b, n: int) -> dict:
        if n < 0:
            raise ValueError("n-th products are defined for n >= 0")
        key = (a, b, n)
        r = self._cache.get(key)
        if r is None:
            raw = self._product(a, b, n) if n < self.max_n else {}
            r = {}
            for (s, g), c in (raw or {}).items():
                if s and self.is_torsion(g):
                    continue
                vaxpy(r, {(s, g): as_scalar(c)})
            self._cache[key] = r
        return r

    def bound(self, a, b) -> int:
        key = (a, b)
        r = self._bound.get(key)
        if r is None:
            r = 0
            for n in range(self.max_n):
                if self.product(a, b, n):
                    r = n + 1
            self._bound[key] = r
        return r

    def R(self, g, a) -> dict:
        if self._R is None or not any(g):
            return {a: ONE}
        return self._R(g, a)

    def R_elem(self, g, x: dict) -> dict:
        """R_g on T-polynomials: R_g T^s a = phi(g)^(-s) T^s R_g a."""
        out: dict = {}
        for (s, a), c in x.items():
            f = self.character.value(g, -s) if s else ONE
            for b, d in self.R(g, a).items():
                vaxpy(out, {(s, b): c * d * f})
        return out

    def support(self, a, b) -> list:
        if self._support is not None:
            return self._support(a, b)
        return self.group.elements()

    def __repr__(self):
        return f"<ConformalPresentation {self.name} gens={len(self.generators)}>"


def apply_T(c: ConformalPresentation, x: dict, times: int = 1) -> dict:
    out: dict = {}
    for (s, g), v in x.items():
        if c.is_torsion(g):
            continue
        vaxpy(out, {(s + times, g): v})
    return out


def _gen_prod_T(c, a, b, n, t, memo) -> dict:
    """a_n (T^t b) for generators a, b via a_n(Tb) = T(a_n b) + n a_{n-1} b."""
    key = (a, b, n, t)
    r = memo.get(key)
    if r is not None:
        return r
    if n < 0:
        r = {}
    elif t == 0:
        r = c.product(a, b, n)
    else:
        r = apply_T(c, _gen_prod_T(c, a, b, n, t - 1, memo))
        if n:
            vaxpy(r, _gen_prod_T(c, a, b, n - 1, t - 1, memo), Scalar.const(n))
    memo[key] = r
    return r


def extend_products(c: ConformalPresentation, x: dict, y: dict, n: int) -> dict:
    """n-th product of T-polynomial combinations, n >= 0."""
    if n < 0:
        raise ValueError("n-th products are defined for n >= 0")
    memo = c.__dict__.setdefault("_ext_memo", {})
    out: dict = {}
    for (s, a), ca in x.items():
        if s and c.is_torsion(a):
            continue
        # (T^s a)_n = (-1)^s n(n-1)...(n-s+1) a_{n-s}
        f = 1
        for i in range(s):
            f *= -(n - i)
        if not f:
            continue
        for (t, b), cb in y.items():
            if t and c.is_torsion(b):
                continue
            vaxpy(out, _gen_prod_T(c, a, b, n - s, t, memo), ca * cb * f)
    return out


# ---------------------------------------------------------------------------
# constructors


def conformal_from_table(generators, torsion, table: dict, group=None, character=None,
                         action=None, name="") -> ConformalPresentation:
    """Finite presentation from {(a, b, n): {(s, gen): c}}; action lists R for group generators."""
    if group is None:
        group = AbelianGroup(0, ())
        character = Character(group, [])
    table = {k: {kk: as_scalar(v) for kk, v in val.items()} for k, val in table.items()}
    gen_maps = [{a: {b: as_scalar(v) for b, v in img.items()} for a, img in m.items()}
                for m in (action or [])]

    def product(a, b, n):
        return table.get((a, b, n), {})

    def R(g, a):
        vec = {a: ONE}
        for i, e in enumerate(g):
            for _ in range(e):
                out: dict = {}
                for x, cx in vec.items():
                    vaxpy(out, gen_maps[i].get(x, {x: ONE}), cx)
                vec = out
        return vec

    return ConformalPresentation(generators, torsion, product, group, character,
                                 R if gen_maps else None, kind="finite", name=name)


def virasoro(c=None, skew_broken: bool = False) -> ConformalPresentation:
    """L_0 L = TL, L_1 L = 2L, L_3 L = (c/2) k with k torsion; c formal by default."""
    from .scalars import qvar

    cc = qvar(1, 1) if c is None else as_scalar(c)
    table = {("L", "L", 0): {(1, "L"): 2 if skew_broken else 1},
             ("L", "L", 1): {(0, "L"): 2},
             ("L", "L", 3): {(0, K): cc / Scalar.const(2)}}
    return conformal_from_table(["L", K], [K], table,
                                name="virasoro_broken" if skew_broken else "virasoro")


def heisenberg_conformal() -> ConformalPresentation:
    """Abelian: only a_1 a = k."""
    return conformal_from_table(["a", K], [K], {("a", "a", 1): {(0, K): 1}}, name="heisenberg")


def affine_conformal_data(p, twist_shift: int = 0) -> ConformalPresentation:
    """a_0 b = [a,b], a_1 b = <a,b> k; R_g a = phi(g)^(-1) (g a), R_g k = k.

    ``twist_shift`` adds phi(g)^shift to R_g (a negative-control knob).
    """
    chi = p.character
    G = p.group

    def R(g, a):
        if a == K:
            return {K: ONE}
        f = chi.value(g, -1 + twist_shift)
        return {b: f * v for b, v in p.act(g, {a: ONE}).items()}

    def product(a, b, n):
        if a == K or b == K:
            return {}
        if n == 0:
            return {(0, key): v for key, v in p.bracket({a: ONE}, {b: ONE}).items()}
        if n == 1:
            f = p.form({a: ONE}, {b: ONE})
            return {(0, K): f} if f else {}
        return {}

    if p.kind == "finite":
        return ConformalPresentation(list(p.labels) + [K], [K], product, G, chi, R,
                                     kind="finite", name=f"affine[{p.name}]", max_n=3)

    def support(a, b):
        if a == K or b == K:
            return [G.identity()]
        (h, u), (h2, v) = a, b
        pts = set(p.beta(u, v)) | set(p.gamma(u, v))
        # R_g (h,u) ~ (g+h, u); nonzero against (h2, v) when g + h - h2 in supp
        return sorted(G.add(G.sub(x, h), h2) for x in pts)

    gens = [p.key(u) for u in p.sample_labels] + [K]
    cp = ConformalPresentation(gens, [K], product, G, chi, R, support, kind="orbit",
                               name=f"affine[{p.name}]", max_n=3)
    cp.lie = p
    return cp


# ---------------------------------------------------------------------------
# axiom checks


def _sample_elements(c: ConformalPresentation, T_bound: int):
    return [{(s, g): ONE} for g in c.generators for s in range(T_bound + 1)
            if not (s and c.is_torsion(g))]


def check_conformal_axioms(c: ConformalPresentation, T_bound: int = 1) -> Report:
    """Derivative rule, skew symmetry and the commutator formula, componentwise."""
    rep = Report(f"conformal-axioms {c.name}")
    gens = c.generators
    elems = _sample_elements(c, T_bound)
    win = f"generators={len(gens)} T<={T_bound}"
    nmax = max([c.bound(a, b) for a in gens for b in gens] + [1])

    def derivative():
        for x in elems:
            for y in elems:
                for n in range(nmax + T_bound + 1):
                    prev = extend_products(c, x, y, n - 1) if n else {}
                    # [T, a_n] = -n a_{n-1} and (Ta)_n = -n a_{n-1}
                    lhs = vsub(apply_T(c, extend_products(c, x, y, n)),
                               extend_products(c, x, apply_T(c, y), n))
                    rhs = {k: v * (-n) for k, v in prev.items()}
                    if vsub(lhs, rhs):
                        return False, f"[T, ({format_celem(x)})_{n}] on {format_celem(y)}", None
                    lhs2 = extend_products(c, apply_T(c, x), y, n)
                    if vsub(lhs2, rhs):
                        return False, f"(T({format_celem(x)}))_{n}{format_celem(y)}", None
        return True, "", None

    def skew():
        for x in elems:
            for y in elems:
                top = nmax + 2 * T_bound + 1
                for n in range(top):
                    lhs = extend_products(c, x, y, n)
                    rhs: dict = {}
                    for j in range(top - n + 1):
                        prod = extend_products(c, y, x, n + j)
                        if prod:
                            vaxpy(rhs, apply_T(c, prod, j) if j else prod,
                                  Scalar.const((-1) ** (n + j + 1)) / Scalar.const(factorial(j)))
                    if vsub(lhs, rhs):
                        return False, (f"({format_celem(x)})_{n}({format_celem(y)}) = "
                                       f"{format_celem(lhs)} but skew side gives {format_celem(rhs)}"), None
        return True, "", None

    def commutator():
        g1 = [{(0, g): ONE} for g in gens]
        for x in g1:
            for y in g1:
                for z in g1:
                    for m in range(nmax + 1):
                        for n in range(nmax + 1):
                            lhs = vsub(_nested(c, x, m, y, n, z), _nested(c, y, n, x, m, z))
                            rhs: dict = {}
                            for i in range(m + 1):
                                xy = extend_products(c, x, y, i)
                                if xy and m + n - i >= 0:
                                    vaxpy(rhs, extend_products(c, xy, z, m + n - i),
                                          Scalar.const(comb(m, i)))
                            if vsub(lhs, rhs):
                                return False, (f"m={m} n={n} on ({format_celem(x)}, {format_celem(y)}, "
                                               f"{format_celem(z)}): {format_celem(lhs)} vs "
                                               f"{format_celem(rhs)}"), None
        return True, "", None

    rep.timed("derivative", derivative, win)
    rep.timed("skew-symmetry", skew, win)
    rep.timed("commutator", commutator, win)
    return rep


def _nested(c, x, m, y, n, z):
    return extend_products(c, x, extend_products(c, y, z, n), m)


def check_gamma_conformal_axioms(c: ConformalPresentation, exponent_shift: int = 1,
                                 T_bound: int = 1, samples=None) -> Report:
    """T R_g = phi(g) R_g T and R_g(u_m v) = phi(g)^(m+shift) (R_g u)_m R_g v.

    ``exponent_shift`` is 1 for the axiom; other values serve as negative controls.
    """
    rep = Report(f"gamma-conformal-axioms {c.name}")
    G = c.group
    gens = c.generators
    if G.ngens == 0:
        rep.record("gamma-axioms", True, "trivial group")
        return rep
    group_samples = samples or [G.generator(i) for i in range(G.ngens)]
    if G.is_finite():
        group_samples = [g for g in G.elements() if any(g)]
    win = f"group_samples={len(group_samples)} generators={len(gens)}"
    elems = _sample_elements(c, T_bound)
    chi = c.character

    def t_rule():
        for g in group_samples:
            for x in elems:
                lhs = apply_T(c, c.R_elem(g, x))
                rhs = {k: v * chi.value(g) for k, v in c.R_elem(g, apply_T(c, x)).items()}
                if vsub(lhs, rhs):
                    return False, f"g={g} on {format_celem(x)}", None
        return True, "", None

    def products():
        for g in group_samples:
            for a in gens:
                for b in gens:
                    x, y = {(0, a): ONE}, {(0, b): ONE}
                    for m in range(max(c.bound(a, b), 1) + 1):
                        lhs = c.R_elem(g, extend_products(c, x, y, m))
                        rhs = extend_products(c, c.R_elem(g, x), c.R_elem(g, y), m)
                        rhs = {k: v * chi.value(g, m + exponent_shift) for k, v in rhs.items()}
                        if vsub(lhs, rhs):
                            return False, (f"g={g} m={m} ({format_key(a)}, {format_key(b)}): "
                                           f"{format_celem(lhs)} vs {format_celem(rhs)}"), None
        return True, "", None

    def finiteness():
        # outside the declared support (R_g a)_n b must vanish
        extra = [G.scale(s, G.generator(i)) for i in range(G.ngens) for s in (-3, 3)]
        for a in gens:
            for b in gens:
                sup = set(map(tuple, c.support(a, b)))
                for g in list(sup) + extra:
                    if g in sup:
                        continue
                    ra = {(0, k): v for k, v in c.R(g, a).items()}
                    for n in range(c.max_n):
                        if extend_products(c, ra, {(0, b): ONE}, n):
                            return False, f"g={g} outside declared support for ({a}, {b})", None
        return True, "", None

    rep.timed("T-equivariance", t_rule, win)
    rep.timed("twisted-products", products, win)
    rep.timed("finite-support", finiteness, win)
    return rep


# ---------------------------------------------------------------------------
# loop algebras


class LoopAlgebra:
    """L(C): span of a(m) modulo (Ta)(m) + m a(m-1); bracket via binomial expansion."""

    def __init__(self, c: ConformalPresentation):
        self.c = c
        self.name = f"L({c.name})"
        self._pair: dict = {}

    def term(self, gen, m, s=0, coeff=ONE) -> AffineElement:
        return self.canonicalize_raw({(s, gen, m): as_scalar(coeff)})

    def canonicalize_raw(self, raw: dict) -> AffineElement:
        """(T^s a)(m) = (-1)^s m(m-1)...(m-s+1) a(m-s); torsion survives only at -1."""
        loop: dict = {}
        for (s, a, m), v in raw.items():
            f = 1
            for i in range(s):
                f *= -(m - i)
            if not f:
                continue
            mm = m - s
            if self.c.is_torsion(a) and mm != -1:
                continue
            vaxpy(loop, {(a, mm): v * f})
        return self._reduce(AffineElement(loop))

    def _reduce(self, x: AffineElement) -> AffineElement:
        return x

    def canonicalize(self, x: AffineElement) -> AffineElement:
        return self.canonicalize_raw({(0, a, m): v for (a, m), v in x.loop.items()})

    def _raw_bracket(self, a, m, b, n) -> dict:
        raw: dict = {}
        c = self.c
        for i in range(max(c.bound(a, b), 0)):
            binom = _gbinom(m, i)
            if not binom:
                continue
            for (s, g), v in c.product(a, b, i).items():
                vaxpy(raw, {(s, g, m + n - i): v * binom})
        return raw

    def pair_bracket(self, a, m, b, n) -> AffineElement:
        key = (a, m, b, n)
        r = self._pair.get(key)
        if r is None:
            r = self.canonicalize_raw(self._raw_bracket(a, m, b, n))
            self._pair[key] = r
        return r

    def bracket(self, x: AffineElement, y: AffineElement) -> AffineElement:
        out = AffineElement()
        for (a, m), ca in x.loop.items():
            for (b, n), cb in y.loop.items():
                out = out + self.pair_bracket(a, m, b, n).scale(ca * cb)
        return out

    def degree_basis(self, m: int, gens=None) -> list:
        gens = self.c.generators if gens is None else gens
        return [g for g in gens if not self.c.is_torsion(g) or m == -1]

    def basis_window(self, M: int, gens=None) -> list[AffineElement]:
        out = []
        for m in range(-M, M + 1):
            for g in self.degree_basis(m, gens):
                out.append(AffineElement.term(g, m))
        return out


def _gbinom(m: int, i: int) -> int:
    if i < 0:
        return 0
    if m >= 0:
        return comb(m, i) if i <= m else 0
    return (-1) ** i * comb(i - m - 1, i)


class TwistedLoop(LoopAlgebra):
    """C^[Gamma]: L(C) modulo phi(g)^(m+1) (R_g u)(m) - u(m), bracket summed over Gamma."""

    def __init__(self, c: ConformalPresentation):
        super().__init__(c)
        self.name = f"{c.name}^[G]"
        self.kind = c.kind
        self._ech: dict = {}
        if c.kind == "finite":
            self.period = c.group.exponent() if c.group.ngens else 1

    def relations(self, m: int) -> Echelon:
        c = self.c
        r = m % self.period
        key = (r, m == -1)
        e = self._ech.get(key)
        if e is None:
            cols = self.degree_basis_all(m)
            e = Echelon(cols)
            for g in c.group.generators():
                ph = c.character.value(g, r + 1)
                for u in cols:
                    rel = {b: v * ph for b, v in c.R(g, u).items()}
                    vaxpy(rel, {u: ONE}, -ONE)
                    e.add(rel)
            self._ech[key] = e
        return e

    def degree_basis_all(self, m: int) -> list:
        return [g for g in self.c.generators if not self.c.is_torsion(g) or m == -1]

    def degree_basis(self, m: int, gens=None) -> list:
        if self.kind == "finite":
            return self.relations(m).free_columns()
        return super().degree_basis(m, gens)

    def _reduce(self, x: AffineElement) -> AffineElement:
        c = self.c
        by_deg: dict = {}
        for (a, m), v in x.loop.items():
            by_deg.setdefault(m, {})[a] = v
        loop: dict = {}
        for m, vec in by_deg.items():
            if self.kind == "finite":
                red = self.relations(m).reduce(vec)
            else:
                red = {}
                G = c.group
                for a, v in vec.items():
                    if a == K or not any(a[0]):
                        vaxpy(red, {a: v})
                        continue
                    h, u = a
                    base = (G.identity(), u)
                    # R_h base = r (h,u), and (R_h base)(m) ~ phi(h)^(-m-1) base(m)
                    r = c.R(h, base)[a]
                    vaxpy(red, {base: v * r.inverse() * c.character.value(h, -m - 1)})
            for a, v in red.items():
                loop[(a, m)] = v
        return AffineElement(loop)

    def _raw_bracket(self, a, m, b, n) -> dict:
        c = self.c
        raw: dict = {}
        for g in c.support(a, b):
            ph = c.character.value(g, m + 1)
            for ra, rv in c.R(g, a).items():
                for i in range(max(c.bound(ra, b), 0)):
                    binom = _gbinom(m, i)
                    if not binom:
                        continue
                    for (s, gen), v in c.product(ra, b, i).items():
                        vaxpy(raw, {(s, gen, m + n - i): v * rv * ph * binom})
        return raw


def loop_bracket(L: LoopAlgebra, x: AffineElement, y: AffineElement) -> AffineElement:
    return L.bracket(x, y)


def twisted_loop_bracket(L: TwistedLoop, x: AffineElement, y: AffineElement) -> AffineElement:
    return L.bracket(x, y)


def loop_jacobi_check(L: LoopAlgebra, M: int = 4, gens=None) -> Report:
    from .affine import jacobi_window_check

    rep = jacobi_window_check(L, M, gens)
    rep.title = f"loop-jacobi {L.name}"
    return rep


def loop_equivariance_check(c: ConformalPresentation, M: int = 3) -> Report:
    """g(u(m)) = phi(g)^(m+1) (R_g u)(m) is an automorphism of L(C), compatible with T."""
    rep = Report(f"loop-equivariance {c.name}")
    L = LoopAlgebra(c)
    G = c.group
    gs = [G.generator(i) for i in range(G.ngens)]
    win = f"[-{M},{M}]"

    def act(g, x: AffineElement) -> AffineElement:
        raw: dict = {}
        for (a, m), v in x.loop.items():
            for b, r in c.R(g, a).items():
                vaxpy(raw, {(0, b, m): v * r * c.character.value(g, m + 1)})
        return L.canonicalize_raw(raw)

    def automorphism():
        basis = L.basis_window(M)
        for g in gs:
            for x in basis:
                for y in basis:
                    l = act(g, L.bracket(x, y))
                    r = L.bracket(act(g, x), act(g, y))
                    if l != r:
                        return False, f"g={g} [{x}, {y}]: {l} vs {r}", None
        return True, "", None

    def t_compat():
        # g((T + d/dt) u(m)) = phi(g)^(-1) (T + d/dt) g(u(m)) on raw elements
        for g in gs:
            for a in c.generators:
                if c.is_torsion(a):
                    continue
                for m in range(-M, M + 1):
                    raw_l: dict = {}
                    # g(T u (x) t^m) = phi^(m+1) R_g(Tu)(m) = phi^(m) T R_g u (m)
                    for b, r in c.R(g, a).items():
                        vaxpy(raw_l, {(1, b, m): r * c.character.value(g, m)})
                        vaxpy(raw_l, {(0, b, m - 1): r * c.character.value(g, m) * m})
                    raw_r: dict = {}
                    for b, r in c.R(g, a).items():
                        f = c.character.value(g, m + 1) * c.character.value(g, -1)
                        vaxpy(raw_r, {(1, b, m): r * f})
                        vaxpy(raw_r, {(0, b, m - 1): r * f * m})
                    if vsub(raw_l, raw_r):
                        return False, f"g={g} on {a}({m})", None
                    if not L.canonicalize_raw(raw_l).is_zero():
                        return False, f"g={g}: image of a relation is not a relation", None
        return True, "", None

    rep.timed("loop-automorphism", automorphism, win)
    rep.timed("T-compatibility", t_compat, win)
    return rep


# ---------------------------------------------------------------------------
# folding and comparisons


def fold_conformal_by_subgroup(c: ConformalPresentation, H: Subgroup) -> ConformalPresentation:
    """C/H with products Y^H(u,x)v = sum_{h in H} Y(R_h u, x) v."""
    G = c.group
    q = H.quotient()
    Q = q.target
    chi = q.induced_character(c.character)
    if c.kind == "finite":
        h_elems = [g for g in G.elements() if H.contains(g)]
        ech = Echelon(c.generators)
        for h in H.gens:
            for u in c.generators:
                ech.add(vsub(c.R(h, u), {u: ONE}))
        reps = ech.free_columns()

        def project(x: dict) -> dict:
            by_s: dict = {}
            for (s, g), v in x.items():
                by_s.setdefault(s, {})[g] = v
            out: dict = {}
            for s, vec in by_s.items():
                for g, v in ech.reduce(vec).items():
                    out[(s, g)] = v
            return out

        def product(a, b, n):
            out: dict = {}
            for h in h_elems:
                ra = {(0, k): v for k, v in c.R(h, a).items()}
                vaxpy(out, extend_products(c, ra, {(0, b): ONE}, n))
            return project(out)

        def R(g, a):
            lift = q.lift(g)
            return {k: v for (_, k), v in project({(0, x): y for x, y in c.R(lift, a).items()}).items()}

        return ConformalPresentation(reps, [r for r in reps if c.is_torsion(r)], product, Q, chi, R,
                                     kind="finite", name=f"{c.name}/H", max_n=c.max_n)

    def proj_key(a):
        if a == K:
            return {K: ONE}
        g, u = a
        base = q.lift(q.project(g))
        h = G.sub(g, base)
        r = c.R(h, (base, u))[a]
        return {(q.project(g), u): r.inverse()}

    def project(x: dict) -> dict:
        out: dict = {}
        for (s, a), v in x.items():
            for k, w in proj_key(a).items():
                vaxpy(out, {(s, k): v * w})
        return out

    def lift_key(a):
        return a if a == K else (q.lift(a[0]), a[1])

    def product(a, b, n):
        la, lb = lift_key(a), lift_key(b)
        out: dict = {}
        for g in c.support(la, lb):
            if not H.contains(g):
                continue
            ra = {(0, k): v for k, v in c.R(g, la).items()}
            vaxpy(out, extend_products(c, ra, {(0, lb): ONE}, n))
        return project(out)

    def R(g, a):
        img = c.R(q.lift(g), lift_key(a))
        return {k: v for (_, k), v in project({(0, x): y for x, y in img.items()}).items()}

    def support(a, b):
        la, lb = lift_key(a), lift_key(b)
        return sorted({q.project(g) for g in c.support(la, lb)})

    gens = [a if a == K else (q.project(a[0]), a[1]) for a in c.generators]
    return ConformalPresentation(gens, c.torsion, product, Q, chi, R, support, kind="orbit",
                                 name=f"{c.name}/H", max_n=c.max_n)


def fold_comparison_check(p, H: Subgroup) -> Report:
    """Folding the affine conformal data agrees with folding the Lie data."""
    from .lie import fold_by_subgroup

    rep = Report(f"fold-comparison {p.name}")
    folded_c = fold_conformal_by_subgroup(affine_conformal_data(p), H)
    folded_lie = affine_conformal_data(fold_by_subgroup(p, H).presentation)
    win = f"generators={len(folded_c.generators)}"

    def run():
        ga, gb = folded_c.generators, folded_lie.generators
        if sorted(map(str, ga)) != sorted(map(str, gb)):
            return False, f"generators {ga} vs {gb}", None
        for a in ga:
            for b in ga:
                for n in range(3):
                    l, r = folded_c.product(a, b, n), folded_lie.product(a, b, n)
                    if vsub(l, r):
                        return False, (f"({format_key(a)})_{n}({format_key(b)}): "
                                       f"{format_celem(l)} vs {format_celem(r)}"), None
        return True, "", None

    rep.timed("fold-comparison", run, win)
    return rep


def affine_comparison_check(p, M: int = 4) -> Report:
    """C^[Gamma] for affine conformal data vs g^[Gamma]: a(m) -> a(m), k(-1) -> k."""
    rep = Report(f"affine-comparison {p.name}")
    c = affine_conformal_data(p)
    L = TwistedLoop(c)
    A = TwistedAffine(p)
    win = f"[-{M},{M}]"

    def image(x: AffineElement) -> AffineElement:
        loop: dict = {}
        central = ZERO
        for (a, m), v in x.loop.items():
            if a == K:
                if m == -1:
                    central = central + v
            else:
                loop[(a, m)] = v
        return A.canonicalize(AffineElement(loop, central))

    def bases():
        for m in range(-M, M + 1):
            lb = [a for a in L.degree_basis(m) if a != K]
            if lb != A.degree_basis(m):
                return False, f"degree {m}: {lb} vs {A.degree_basis(m)}", None
        return True, "", None

    def brackets():
        basis = L.basis_window(M)
        for x in basis:
            for y in basis:
                l = image(L.bracket(x, y))
                r = A.bracket(image(x), image(y))
                if l != r:
                    return False, f"[{x}, {y}]: loop gives {l}, affine gives {r}", None
        return True, "", {"pairs": len(basis) ** 2}

    rep.timed("comparison-bases", bases, win)
    rep.timed("comparison-brackets", brackets, win)
    return rep
