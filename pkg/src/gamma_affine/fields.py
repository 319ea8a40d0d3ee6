"""Fields on vacuum modules: locality, Y_E products, delta expressions.

A field ``f(x) = sum_m f_m x^{-m-1}`` is evaluated lazily: ``coeff(m, w)``
returns ``f_m w``.  Every field has a weight h, meaning f_m maps degree d to
degree d + h - m - 1; so ``f_m w = 0`` once m > deg(w) + h - 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, factorial

from .affine import AffineElement
from .linalg import vaxpy, vsub
from .report import Report
from .scalars import ONE, ZERO, Scalar, ScalarError, as_scalar
from .vacuum import VacuumModule, degree, format_vector

__all__ = [
    "Field",
    "ElementField",
    "IdentityField",
    "ZeroField",
    "ScaledField",
    "LinearField",
    "ProductField",
    "ResidueProductField",
    "LocalityCertificate",
    "DeltaExpression",
    "field_of",
    "generator_field",
    "permutation_field",
    "commutator",
    "detect_gamma_locality",
    "yE_product",
    "yE_bruteforce",
    "yE_local_crosscheck",
    "yE_alpha_identity",
    "delta_coeff",
    "commutator_rhs",
    "verify_commutator_formula",
    "affine_vertex_products",
    "quasi_jacobi_check",
    "generate_field_space",
    "test_vectors",
]


def gbinom(s: int, k: int) -> int:
    """Binomial coefficient C(s, k) for any integer s and k >= 0."""
    if k < 0:
        return 0
    if s >= 0:
        return comb(s, k) if k <= s else 0
    # C(s, k) = (-1)^k C(k - s - 1, k)
    return (-1) ** k * comb(k - s - 1, k)


def falling(m: int, j: int) -> int:
    out = 1
    for i in range(j):
        out *= m - i
    return out


class Field:
    weight = 1
    name = "f"

    def __init__(self, module: VacuumModule):
        self.module = module
        self._memo: dict = {}

    def coeff_mono(self, m: int, mono: tuple) -> dict:
        key = (m, mono)
        r = self._memo.get(key)
        if r is None:
            if degree(mono) + self.weight - m - 1 < 0:
                r = {}
            else:
                r = self._compute(m, mono)
            self._memo[key] = r
        return r

    def _compute(self, m: int, mono: tuple) -> dict:
        raise NotImplementedError

    def coeff(self, m: int, w: dict) -> dict:
        out: dict = {}
        for mono, c in w.items():
            vaxpy(out, self.coeff_mono(m, mono), c)
        return out

    def top_mode(self, d: int) -> int:
        """Largest m with f_m possibly nonzero on a degree-d vector."""
        return d + self.weight - 1

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} h={self.weight}>"


class ElementField(Field):
    """Field of a Lie element X: coefficient m is X(m), canonicalized then acting."""

    def __init__(self, module, vec: dict, name=None):
        super().__init__(module)
        self.vec = {k: as_scalar(c) for k, c in vec.items() if as_scalar(c)}
        self.weight = 1
        self.name = name or module.alg.p.fmt(self.vec)

    def _compute(self, m, mono):
        alg = self.module.alg
        out: dict = {}
        for key, c in alg.canonical_vec(self.vec, m).items():
            vaxpy(out, self.module.act_mono(key, m, mono), c)
        return out


class IdentityField(Field):
    def __init__(self, module):
        super().__init__(module)
        self.weight = 0
        self.name = "1"

    def _compute(self, m, mono):
        return {mono: ONE} if m == -1 else {}


class ZeroField(Field):
    def __init__(self, module, weight=0):
        super().__init__(module)
        self.weight = weight
        self.name = "0"

    def _compute(self, m, mono):
        return {}


class ScaledField(Field):
    """f(alpha x): coefficient m is alpha^(-m-1) f_m."""

    def __init__(self, base: Field, alpha):
        super().__init__(base.module)
        self.base = base
        self.alpha = as_scalar(alpha)
        self.alpha.inverse()  # must be a unit
        self.weight = base.weight
        self.name = f"{base.name}({self.alpha}x)"

    def _compute(self, m, mono):
        v = self.base.coeff_mono(m, mono)
        if not v:
            return {}
        c = self.alpha ** (-m - 1)
        return {k: c * x for k, x in v.items()}


class LinearField(Field):
    """sum c_i f_i."""

    def __init__(self, terms, name=None):
        terms = [(as_scalar(c), f) for c, f in terms if as_scalar(c)]
        super().__init__(terms[0][1].module if terms else None)
        self.terms = terms
        self.weight = max((f.weight for _, f in terms), default=0)
        self.name = name or " + ".join(f"({c})*{f.name}" for c, f in terms)

    def _compute(self, m, mono):
        out: dict = {}
        for c, f in self.terms:
            vaxpy(out, f.coeff_mono(m, mono), c)
        return out


def field_of(module: VacuumModule, element) -> ElementField:
    """Generating field of a Lie element (dict) or canonical key."""
    if not isinstance(element, dict):
        element = {element: ONE}
    return ElementField(module, element)


def generator_field(module: VacuumModule, label) -> ElementField:
    p = module.alg.p
    key = label if p.kind == "finite" else p.key(label)
    return ElementField(module, {key: ONE}, name=str(label))


def permutation_field(base: Field, N: int, j: int) -> Field:
    """Y(w^{j deg} v, w^j x) for a weight-one generator: coefficient m is w^{-jm} v_m."""
    from .scalars import zeta

    om = zeta(N, j)
    f = LinearField([(om ** base.weight, ScaledField(base, om))], name=f"F{j}[{base.name}]")
    f.weight = base.weight
    return f


# ---------------------------------------------------------------------------
# commutators and locality


def test_vectors(module: VacuumModule, max_degree: int) -> list[tuple]:
    return [mono for d, mono in module.vectors(max_degree)]


def commutator(a: Field, b: Field, m: int, n: int, w: dict) -> dict:
    """C(m,n) w = a_m b_n w - b_n a_m w."""
    return vsub(a.coeff(m, b.coeff(n, w)), b.coeff(n, a.coeff(m, w)))


def _poly_from_roots(roots) -> dict:
    """prod (x1 - r x2) as {(i, j): coeff} with i + j = len(roots)."""
    poly = {(0, 0): ONE}
    for r in roots:
        r = as_scalar(r)
        nxt: dict = {}
        for (i, j), c in poly.items():
            nxt[(i + 1, j)] = nxt.get((i + 1, j), ZERO) + c
            nxt[(i, j + 1)] = nxt.get((i, j + 1), ZERO) - c * r
        poly = {k: v for k, v in nxt.items() if v}
    return poly


@dataclass
class LocalityCertificate:
    roots: tuple
    window: str
    multiplicity_tried: int = 0

    def poly(self) -> dict:
        return _poly_from_roots(self.roots)

    def __str__(self):
        return "{" + ",".join(str(r) for r in self.roots) + "}"


class _CommutatorCache:
    def __init__(self, a, b):
        self.a, self.b = a, b
        self.cache: dict = {}

    def get(self, m, n, mono):
        key = (m, n, mono)
        r = self.cache.get(key)
        if r is None:
            r = commutator(self.a, self.b, m, n, {mono: ONE})
            self.cache[key] = r
        return r


def _annihilates(cc: _CommutatorCache, poly: dict, M: int, vectors) -> tuple | None:
    for mono in vectors:
        for m in range(-M, M + 1):
            for n in range(-M, M + 1):
                acc: dict = {}
                for (i, j), c in poly.items():
                    vaxpy(acc, cc.get(m + i, n + j, mono), c)
                if acc:
                    return (m, n, mono, acc)
    return None


def detect_gamma_locality(a: Field, b: Field, candidates, max_mult: int = 4, M: int = 3,
                          vec_degree: int = 2) -> LocalityCertificate:
    """Smallest multiset of candidate roots whose polynomial kills [a(x1), b(x2)].

    Multisets are tried by increasing size, in candidate order.  The check
    covers modes (m, n) in [-M, M]^2 on module vectors up to ``vec_degree``.
    """
    candidates = [as_scalar(c) for c in candidates]
    vectors = test_vectors(a.module, vec_degree)
    cc = _CommutatorCache(a, b)
    win = f"modes=[-{M},{M}] vec_degree={vec_degree}"
    for r in range(max_mult + 1):
        for roots in itertools.combinations_with_replacement(range(len(candidates)), r):
            rts = tuple(candidates[i] for i in roots)
            if _annihilates(cc, _poly_from_roots(rts), M, vectors) is None:
                return LocalityCertificate(rts, win, r)
    raise LocalityError(f"not Gamma-local within budget {max_mult} on {win} "
                        f"for ({a.name}, {b.name})")


class LocalityError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Y_E products


class ProductField(Field):
    """Coefficient n of Y_E^(beta)(a(x), x0) b(x), built from the iota-expansion.

    With G(x1, x2) = p(x1, x2) a(x1) b(x2) w, substitute x1 = beta x + x0 and
    multiply by iota_{x,x0} prod 1/((beta - alpha_i) x + x0).
    """

    def __init__(self, a: Field, b: Field, cert: LocalityCertificate, n: int, beta=ONE):
        super().__init__(a.module)
        self.a, self.b, self.n = a, b, n
        self.cert = cert
        self.beta = as_scalar(beta)
        self.poly = cert.poly()
        self.r = len(cert.roots)
        units = []
        zeros = 0
        for alpha in cert.roots:
            u = self.beta - as_scalar(alpha)
            if not u:
                zeros += 1
            elif u.is_unit():
                units.append(u)
            else:
                raise ScalarError(f"iota-expansion needs beta - alpha to be a unit, got {u}")
        self.zeros = zeros
        self.units = units
        self.E = zeros - n - 1
        self.weight = a.weight + b.weight - n - 1
        tag = "" if self.beta == ONE else f"^({self.beta})"
        self.name = f"({a.name})_{n}{tag}({b.name})"
        self._ck: dict = {}

    def is_trivially_zero(self) -> bool:
        return self.E < 0

    def c(self, K: int) -> Scalar:
        """Coefficient of x0^K x^(-K-r2) in prod 1/(u_i x + x0)."""
        r = self._ck.get(K)
        if r is None:
            r = ZERO
            invs = [u.inverse() for u in self.units]
            for ks in _compositions(K, len(invs)):
                t = ONE
                for k, ui in zip(ks, invs):
                    t = t * (ui ** (k + 1))
                    if k % 2:
                        t = -t
                r = r + t
            self._ck[K] = r
        return r

    def G(self, s: int, t: int, mono: tuple) -> dict:
        out: dict = {}
        for (i, j), c in self.poly.items():
            m = -(s - i) - 1
            nn = -(t - j) - 1
            vaxpy(out, self.a.coeff(m, self.b.coeff_mono(nn, mono)), c)
        return out

    def _compute(self, k, mono):
        if self.E < 0:
            return {}
        d = degree(mono)
        r2 = len(self.units)
        s_lo = -d - self.a.weight
        s_hi = -k - 1 + self.E + r2 + d + self.b.weight
        out: dict = {}
        for s in range(s_lo, s_hi + 1):
            t = -k - 1 - s + self.E + r2
            g = None
            for kk in range(0, self.E + 1):
                coef = gbinom(s, kk)
                if not coef:
                    continue
                cK = self.c(self.E - kk)
                if not cK:
                    continue
                if g is None:
                    g = self.G(s, t, mono)
                    if not g:
                        break
                vaxpy(out, g, cK * coef * (self.beta ** (s - kk)))
        return out


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def yE_product(a: Field, b: Field, cert: LocalityCertificate, n_min: int = -1,
               beta=ONE) -> dict:
    """{n: a(x)_n b(x)} for n_min <= n < number of roots equal to beta."""
    top = sum(1 for r in cert.roots if as_scalar(r) == as_scalar(beta))
    return {n: ProductField(a, b, cert, n, beta) for n in range(n_min, top)}


class ResidueProductField(Field):
    """a(x)_n b(x) from the residue formula (valid for certificates with all roots 1)."""

    def __init__(self, a: Field, b: Field, n: int):
        super().__init__(a.module)
        self.a, self.b, self.n = a, b, n
        self.weight = a.weight + b.weight - n - 1
        self.name = f"res({a.name})_{n}({b.name})"

    def _compute(self, k, mono):
        n = self.n
        d = degree(mono)
        out: dict = {}
        # sum_i C(n,i) (-1)^i a_{n-i} b_{k+i} w, stops once b_{k+i} w = 0
        i = 0
        while k + i <= self.b.top_mode(d):
            c = gbinom(n, i)
            if c:
                vaxpy(out, self.a.coeff(n - i, self.b.coeff_mono(k + i, mono)), c * (-1) ** i)
            elif n >= 0 and i > n:
                break
            i += 1
        # - sum_i C(n,i) (-1)^(n-i) b_{n+k-i} a_i w, stops once a_i w = 0
        i = 0
        while i <= self.a.top_mode(d):
            c = gbinom(n, i)
            if c:
                vaxpy(out, self.b.coeff(n + k - i, self.a.coeff_mono(i, mono)),
                      -c * (-1) ** ((n - i) % 2))
            elif n >= 0 and i > n:
                break
            i += 1
        return out


def _series_coefficients(beta, roots, s, t, n, k, cap):
    """Brute-force [x0^(-n-1) x^(-k-1)] of iota(1/p(beta x + x0, x)) (beta x + x0)^s x^t.

    Series are dicts {(e0, e): Scalar} in x0 and x, truncated at x0-degree cap.
    """
    beta = as_scalar(beta)

    def mul(A, B):
        out: dict = {}
        for (a0, a1), ca in A.items():
            for (b0, b1), cb in B.items():
                if a0 + b0 <= cap:
                    key = (a0 + b0, a1 + b1)
                    out[key] = out.get(key, ZERO) + ca * cb
        return {kk: v for kk, v in out.items() if v}

    def inv_linear(u):
        # 1/(u x + x0): if u = 0 it is x0^-1, else sum_j (-1)^j u^(-j-1) x^(-j-1) x0^j
        if not u:
            return {(-1, 0): ONE}
        ui = u.inverse()
        return {(j, -j - 1): (ui ** (j + 1)) * (-1) ** j for j in range(cap + len(roots) + 2)}

    base = {(0, 0): ONE}
    for alpha in roots:
        base = mul(base, inv_linear(beta - as_scalar(alpha)))
    # (beta x + x0)^s with nonnegative powers of x0
    if s >= 0:
        pw = {(0, 0): ONE}
        for _ in range(s):
            pw = mul(pw, {(0, 1): beta, (1, 0): ONE})
    else:
        inv = inv_linear(beta)
        pw = {(0, 0): ONE}
        for _ in range(-s):
            pw = mul(pw, inv)
    total = mul(mul(base, pw), {(0, t): ONE})
    return total.get((-n - 1, -k - 1), ZERO)


def yE_bruteforce(a: Field, b: Field, cert: LocalityCertificate, n: int, k: int, mono: tuple,
                  beta=ONE) -> dict:
    """(a_n b)_k w by explicit truncated series multiplication (independent oracle)."""
    d = degree(mono)
    poly = cert.poly()
    r = len(cert.roots)
    cap = max(0, r - n - 1)
    out: dict = {}
    s_lo = -d - a.weight
    t_lo = -d - b.weight
    # every term is homogeneous of total degree s + t - r, which pins t
    s_hi = -n - k - 2 + r - t_lo
    for s in range(s_lo, s_hi + 1):
        t = -n - k - 2 + r - s
        coef = _series_coefficients(beta, cert.roots, s, t, n, k, cap)
        if not coef:
            continue
        g: dict = {}
        for (i, j), c in poly.items():
            vaxpy(g, a.coeff(-(s - i) - 1, b.coeff_mono(-(t - j) - 1, mono)), c)
        vaxpy(out, g, coef)
    return out


def yE_local_crosscheck(a: Field, b: Field, cert: LocalityCertificate, n_min: int = -2,
                        k_window: int = 3, vec_degree: int = 2, brute: bool = True) -> Report:
    """Y_E against the residue formula (roots all 1) and against brute-force series."""
    rep = Report(f"yE-crosscheck ({a.name},{b.name})")
    win = f"n>={n_min} k=[-{k_window},{k_window}] vec_degree={vec_degree}"
    vectors = test_vectors(a.module, vec_degree)
    prods = yE_product(a, b, cert, n_min)

    def residue():
        if any(as_scalar(r) != ONE for r in cert.roots):
            return "skipped", "certificate has roots other than 1", None
        for n in range(n_min, 4):
            f = prods.get(n)
            res = ResidueProductField(a, b, n)
            for mono in vectors:
                for k in range(-k_window, k_window + 1):
                    lhs = f.coeff_mono(k, mono) if f else {}
                    rhs = res.coeff_mono(k, mono)
                    if vsub(lhs, rhs):
                        return False, (f"n={n} k={k} on {format_vector({mono: ONE})}: "
                                       f"Y_E {format_vector(lhs)} vs residue {format_vector(rhs)}"), None
        return True, "", None

    def bruteforce():
        for n, f in prods.items():
            for mono in vectors[:4]:
                for k in range(-k_window, k_window + 1):
                    lhs = f.coeff_mono(k, mono)
                    rhs = yE_bruteforce(a, b, cert, n, k, mono)
                    if vsub(lhs, rhs):
                        return False, f"n={n} k={k}: {format_vector(lhs)} vs {format_vector(rhs)}", None
        return True, "", None

    r = rep.timed("yE-vs-residue", residue, win)
    if brute:
        rep.timed("yE-vs-bruteforce", bruteforce, win)
    return rep


def yE_alpha_identity(a: Field, b: Field, alpha, candidates, n_min: int = -1,
                      k_window: int = 3, vec_degree: int = 2, M: int = 3,
                      max_mult: int = 4) -> Report:
    """Y_E^(alpha)(a(x), x0) b(x) == Y_E(a(alpha x), x0/alpha) b(x), coefficientwise."""
    alpha = as_scalar(alpha)
    rep = Report(f"yE-alpha ({a.name},{b.name}) alpha={alpha}")
    cert = detect_gamma_locality(a, b, candidates, max_mult, M, vec_degree)
    scaled = ScaledField(a, alpha)
    shifted = [as_scalar(c) * alpha.inverse() for c in candidates]
    cert2 = detect_gamma_locality(scaled, b, shifted, max_mult, M, vec_degree)
    vectors = test_vectors(a.module, vec_degree)
    win = f"n>={n_min} k=[-{k_window},{k_window}] vec_degree={vec_degree}"
    top = max(sum(1 for r in cert.roots if r == alpha), sum(1 for r in cert2.roots if r == ONE))

    def run():
        checked = 0
        for n in range(n_min, top + 1):
            lhs_f = ProductField(a, b, cert, n, alpha)
            rhs_f = ProductField(scaled, b, cert2, n)
            factor = alpha ** (n + 1)
            for mono in vectors:
                for k in range(-k_window, k_window + 1):
                    l = lhs_f.coeff_mono(k, mono)
                    r = {kk: v * factor for kk, v in rhs_f.coeff_mono(k, mono).items()}
                    checked += 1
                    if vsub(l, r):
                        return False, f"n={n} k={k}: {format_vector(l)} vs {format_vector(r)}", None
        return True, "", {"cert": str(cert), "cert_scaled": str(cert2), "samples": checked}

    rep.timed("yE-alpha-identity", run, win)
    return rep


# ---------------------------------------------------------------------------
# delta expressions and the commutator formula


@dataclass
class DeltaExpression:
    """sum of c(x2) (d/dx2)^j x1^-1 delta(alpha x2 / x1)."""

    terms: list  # (alpha: Scalar, j: int, coefficient: Field)

    def alphas(self) -> set:
        return {t[0] for t in self.terms}


def delta_coeff(D: DeltaExpression, m: int, n: int, w: dict) -> dict:
    """Coefficient of x1^(-m-1) x2^(-n-1), applied to w."""
    out: dict = {}
    for alpha, j, c in D.terms:
        f = falling(m, j)
        if not f:
            continue
        vaxpy(out, c.coeff(m + n - j, w), as_scalar(alpha) ** m * f)
    return out


def commutator_rhs(module: VacuumModule, u, v, level=None) -> DeltaExpression:
    """Right-hand side built from the Lie data: sum_g [gu,v] delta + l <gu,v> d/dx2 delta."""
    alg = module.alg
    p = alg.p
    lvl = module.level if level is None else as_scalar(level)
    ident = IdentityField(module)
    terms = []
    if p.kind == "finite":
        for g in p.group.elements():
            alpha = p.character.value(g)
            gu = p.act(g, {u: ONE})
            br = p.bracket(gu, {v: ONE})
            if br:
                terms.append((alpha, 0, ElementField(module, br)))
            f = p.form(gu, {v: ONE})
            if f:
                terms.append((alpha, 1, LinearField([(lvl * f, ident)])))
    else:
        (_, uu), (_, vv) = u, v
        for g, vec in sorted(p.beta(uu, vv).items()):
            terms.append((p.character.value(g), 0, ElementField(module, vec)))
        for g, f in sorted(p.gamma(uu, vv).items()):
            terms.append((p.character.value(g), 1, LinearField([(lvl * f, ident)])))
    return DeltaExpression(terms)


def verify_commutator_formula(module: VacuumModule, u, v, M: int = 3, vec_degree: int = 3,
                              rhs: DeltaExpression = None) -> Report:
    a = generator_field(module, u if module.alg.kind == "finite" else u[1])
    b = generator_field(module, v if module.alg.kind == "finite" else v[1])
    rhs = rhs or commutator_rhs(module, u, v)
    rep = Report(f"commutator-formula ({a.name},{b.name})")
    vectors = test_vectors(module, vec_degree)
    win = f"modes=[-{M},{M}] vec_degree={vec_degree}"

    def run():
        n_ok = 0
        for mono in vectors:
            w = {mono: ONE}
            for m in range(-M, M + 1):
                for n in range(-M, M + 1):
                    lhs = commutator(a, b, m, n, w)
                    r = delta_coeff(rhs, m, n, w)
                    n_ok += 1
                    if vsub(lhs, r):
                        return False, (f"(m,n)=({m},{n}) on {format_vector(w)}: "
                                       f"{format_vector(lhs)} vs {format_vector(r)}"), None
        return True, "", {"samples": n_ok, "alphas": len(rhs.alphas())}

    rep.timed("commutator-formula", run, win)
    return rep


# ---------------------------------------------------------------------------
# quasi-Jacobi


def affine_vertex_products(module: VacuumModule, u, v, cert: LocalityCertificate,
                           n_min: int, H=None, level=None) -> dict:
    """Y_W(u_n v, x) for n >= n_min: generator data for n >= 0, Y_E products below."""
    alg = module.alg
    p = alg.p
    lvl = module.level if level is None else as_scalar(level)
    if H is None:
        H = p.character.kernel()
    if p.kind == "finite":
        hs = [g for g in p.group.elements() if H.contains(g)]
        ku, kv = u, v
        br: dict = {}
        form = ZERO
        for h in hs:
            hu = p.act(h, {ku: ONE})
            vaxpy(br, p.bracket(hu, {kv: ONE}))
            form = form + p.form(hu, {kv: ONE})
    else:
        (_, uu), (_, vv) = u, v
        br, form = {}, ZERO
        for g, vec in p.beta(uu, vv).items():
            if H.contains(g):
                vaxpy(br, vec)
        for g, f in p.gamma(uu, vv).items():
            if H.contains(g):
                form = form + f
    a = generator_field(module, u if p.kind == "finite" else u[1])
    b = generator_field(module, v if p.kind == "finite" else v[1])
    out = {0: ElementField(module, br) if br else ZeroField(module, 1),
           1: LinearField([(lvl * form, IdentityField(module))]) if form else ZeroField(module, 0)}
    for n in range(n_min, 0):
        out[n] = ProductField(a, b, cert, n)
    return out


def quasi_jacobi_check(a: Field, b: Field, roots, products: dict, r_window=(-3, 1),
                       st_window: int = 3, vec_degree: int = 2) -> Report:
    """Coefficientwise quasi-Jacobi identity with p = prod (x1 - r x2).

    ``products[n]`` is the field Y_W(u_n v, x); missing n >= 0 mean zero.
    """
    poly = _poly_from_roots(roots)
    rep = Report(f"quasi-jacobi ({a.name},{b.name})")
    vectors = test_vectors(a.module, vec_degree)
    r_lo, r_hi = r_window
    win = f"r=[{r_lo},{r_hi}] s,t=[-{st_window},{st_window}] vec_degree={vec_degree}"
    n_top = max([n for n in products if products[n] is not None], default=1)
    need = -r_hi - 1
    if any(n not in products for n in range(min(need, 0), 0)):
        raise ValueError(f"products must include n >= {need} for r <= {r_hi}")

    def lhs(r, s, t, mono):
        d = degree(mono)
        N = -r - 1
        out: dict = {}
        for (ia, ib), c in poly.items():
            # iota_12 (x1-x2)^N: sum_i C(N,i) x1^(N-i) (-x2)^i
            i = 0
            while True:
                nn = i + ib - 1 - t
                if nn > b.top_mode(d):
                    break
                cb = gbinom(N, i)
                if cb:
                    m = N - i + ia - 1 - s
                    vaxpy(out, a.coeff(m, b.coeff_mono(nn, mono)), c * cb * (-1) ** i)
                elif N >= 0 and i > N:
                    break
                i += 1
            # - iota_21 (x1-x2)^N: sum_i C(N,i) x1^i (-x2)^(N-i)
            i = 0
            while True:
                m = i + ia - 1 - s
                if m > a.top_mode(d):
                    break
                cb = gbinom(N, i)
                if cb:
                    nn = N - i + ib - 1 - t
                    vaxpy(out, b.coeff(nn, a.coeff_mono(m, mono)),
                          -c * cb * (-1) ** ((N - i) % 2))
                elif N >= 0 and i > N:
                    break
                i += 1
        return out

    def rhs(r, s, t, mono):
        out: dict = {}
        for n in range(-r - 1, n_top + 1):
            f = products.get(n)
            if f is None:
                continue
            j = r + n + 1
            if j < 0:
                continue
            for (ia, ib), c in poly.items():
                k = s + j - ia
                q = ib - k - 2 - t
                cb = gbinom(k, j)
                if cb:
                    vaxpy(out, f.coeff_mono(q, mono), c * cb * (-1) ** j)
        return out

    def run():
        count = nonzero = 0
        for mono in vectors:
            for r in range(r_lo, r_hi + 1):
                for s in range(-st_window, st_window + 1):
                    for t in range(-st_window, st_window + 1):
                        l, rr = lhs(r, s, t, mono), rhs(r, s, t, mono)
                        count += 1
                        nonzero += bool(l)
                        if vsub(l, rr):
                            return False, (f"(r,s,t)=({r},{s},{t}) on {format_vector({mono: ONE})}: "
                                           f"{format_vector(l)} vs {format_vector(rr)}"), None
        return True, "", {"samples": count, "nonzero": nonzero}

    rep.timed("quasi-jacobi", run, win)
    return rep


# ---------------------------------------------------------------------------
# bounded-depth closure


def _fingerprint(f: Field, vectors, M: int, normalize: bool = True):
    """Coefficient table on the window, scaled so the first nonzero entry is 1."""
    entries = []
    for mono in vectors:
        for m in range(-M, M + 1):
            entries.append(f.coeff_mono(m, mono))
    lead = None
    if normalize:
        for v in entries:
            if v:
                c = v[min(v, key=str)]
                if c.is_unit():
                    lead = c.inverse()
                break
    rows = []
    for v in entries:
        rows.append(tuple(sorted((str(k), str(c * lead if lead is not None else c))
                                 for k, c in v.items())))
    return tuple(rows)


def _inverted(roots):
    return tuple(as_scalar(r).inverse() for r in roots)


def _multiset_max(*groups):
    """Smallest multiset containing each group."""
    counts: dict = {}
    for g in groups:
        local: dict = {}
        for r in g:
            local[r] = local.get(r, 0) + 1
        for r, c in local.items():
            counts[r] = max(counts.get(r, 0), c)
    return tuple(r for r, c in counts.items() for _ in range(c))


class _CertificateBook:
    """Locality certificates with structural upper bounds for derived fields.

    Generator pairs are searched exhaustively.  For a rescaled field the roots
    rescale; for a product a_n b against c the multiset cert(a,c) + cert(b,c)
    plus the surplus pole at 1 bounds the locality order.  Every bound is then
    checked on the window, and a failed bound falls back to search.
    """

    def __init__(self, candidates, max_mult, M, vec_degree):
        self.candidates = candidates
        self.max_mult = max_mult
        self.M = M
        self.vec_degree = vec_degree
        self.certs: dict = {}
        self.fallbacks = 0

    def bound(self, f, g):
        if isinstance(f, ScaledField):
            return tuple(as_scalar(r) * f.alpha.inverse() for r in self.get(f.base, g).roots)
        if isinstance(g, ScaledField):
            return tuple(as_scalar(r) * g.alpha for r in self.get(f, g.base).roots)
        if isinstance(f, ProductField) and f.beta == ONE:
            extra = max(0, f.E)
            return (self.get(f.a, g).roots + self.get(f.b, g).roots + (ONE,) * extra)
        if isinstance(g, ProductField) and g.beta == ONE:
            return _inverted(self.get(g, f).roots)
        if isinstance(f, LinearField):
            return _multiset_max(*(self.get(h, g).roots for _, h in f.terms))
        if isinstance(g, LinearField):
            return _multiset_max(*(self.get(f, h).roots for _, h in g.terms))
        if isinstance(f, (IdentityField, ZeroField)) or isinstance(g, (IdentityField, ZeroField)):
            return ()
        return None

    def get(self, f, g) -> LocalityCertificate:
        key = (id(f), id(g))
        c = self.certs.get(key)
        if c is not None:
            return c
        roots = self.bound(f, g)
        win = f"modes=[-{self.M},{self.M}] vec_degree={self.vec_degree}"
        if roots is not None:
            cc = _CommutatorCache(f, g)
            vectors = test_vectors(f.module, self.vec_degree)
            if _annihilates(cc, _poly_from_roots(roots), self.M, vectors) is None:
                c = LocalityCertificate(tuple(roots), win, len(roots))
        if c is None:
            if roots is not None:
                self.fallbacks += 1
            c = detect_gamma_locality(f, g, self.candidates, self.max_mult, self.M, self.vec_degree)
        self.certs[key] = c
        return c


def generate_field_space(S, depth: int, candidates, n_min: int = -1, M: int = 2,
                         vec_degree: int = 1, max_mult: int = 4, rescale: bool = True) -> Report:
    """Bounded-depth closure of S under Y_E products and rescalings.

    Level k adds g_n f for generators g in S (and their rescalings) and fields f
    of level k-1; iterated products of this shape span the generated space.
    Afterwards every pair of collected fields is certified Gamma-local with
    roots among ``candidates``.
    """
    candidates = [as_scalar(c) for c in candidates]
    rep = Report("field-space")
    win = f"modes=[-{M},{M}] vec_degree={vec_degree} depth={depth}"
    if not S:
        rep.record("closure-locality", True, win, fields=0)
        return rep
    module = S[0].module
    vectors = test_vectors(module, vec_degree)
    book = _CertificateBook(candidates, max_mult, M, vec_degree)
    fields: list = []
    seen = {_fingerprint(ZeroField(module), vectors, M)}

    def add(f):
        fp = _fingerprint(f, vectors, M)
        if fp in seen:
            return False
        seen.add(fp)
        fields.append(f)
        return True

    gens = []
    for f in S:
        if add(f):
            gens.append(f)
        if rescale:
            for alpha in candidates:
                if alpha != ONE:
                    g = ScaledField(f, alpha)
                    if add(g):
                        gens.append(g)
    failures = []
    frontier = list(fields)
    for _ in range(depth):
        new = []
        for g in gens:
            for f in frontier:
                try:
                    cert = book.get(g, f)
                except LocalityError as e:
                    failures.append(str(e))
                    continue
                for prod in yE_product(g, f, cert, n_min).values():
                    if add(prod):
                        new.append(prod)
        frontier = new
    pairs = 0
    for f1 in fields:
        for f2 in fields:
            try:
                cert = book.get(f1, f2)
            except LocalityError as e:
                failures.append(str(e))
                continue
            if any(r not in candidates for r in cert.roots):
                failures.append(f"roots {cert} outside phi(Gamma) for ({f1.name}, {f2.name})")
            pairs += 1
    ident = _fingerprint(IdentityField(module), vectors, M)
    has_identity = any(_fingerprint(f, vectors, M) == ident for f in fields)
    rep.record("closure-locality", not failures, win, witness="; ".join(failures[:2]),
               fields=len(fields), pairs=pairs, bound_fallbacks=book.fallbacks)
    rep.record("contains-identity", "pass" if has_identity else "skipped", win)
    rep.fields = fields
    rep.certificates = book.certs
    return rep
