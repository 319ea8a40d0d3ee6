"""Loop algebras: the untwisted affine algebra and the twisted quotient g^[Gamma].

Elements carry loop terms ``(key, m) -> Scalar`` where ``key`` lives in the
presentation's key space, plus a coefficient of the central element k.
"""

from __future__ import annotations

import itertools

from .lie import fold_by_subgroup
from .linalg import Echelon, format_key, vaxpy, vsub
from .report import Report
from .scalars import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "AffineElement",
    "UntwistedAffine",
    "TwistedAffine",
    "jacobi_window_check",
    "fixed_point_compare",
    "quotient_iso_check",
    "permutation_iso_check",
    "twist_automorphism_check",
    "well_definedness_check",
]


class AffineElement:
    """Finite sum of a(m) terms plus a multiple of k."""

    __slots__ = ("loop", "central")

    def __init__(self, loop=None, central=ZERO):
        self.loop = {k: as_scalar(c) for k, c in (loop or {}).items() if as_scalar(c)}
        self.central = as_scalar(central)

    @classmethod
    def term(cls, key, m: int, coeff=ONE) -> "AffineElement":
        return cls({(key, m): coeff})

    @classmethod
    def k(cls, coeff=ONE) -> "AffineElement":
        return cls({}, coeff)

    def is_zero(self) -> bool:
        return not self.loop and not self.central

    def __add__(self, other):
        return AffineElement(vaxpy(dict(self.loop), other.loop), self.central + other.central)

    def __sub__(self, other):
        return AffineElement(vaxpy(dict(self.loop), other.loop, -ONE),
                             self.central - other.central)

    def __neg__(self):
        return AffineElement({k: -c for k, c in self.loop.items()}, -self.central)

    def scale(self, c) -> "AffineElement":
        c = as_scalar(c)
        return AffineElement({k: c * v for k, v in self.loop.items()}, c * self.central)

    def __eq__(self, other):
        if not isinstance(other, AffineElement):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("AffineElement is unhashable")

    def degrees(self) -> set:
        return {m for (_, m) in self.loop}

    def __repr__(self):
        return f"AffineElement({self})"

    def __str__(self):
        parts = []
        for (key, m), c in sorted(self.loop.items(), key=lambda kv: (kv[0][1], str(kv[0][0]))):
            parts.append(_coef(c) + f"{format_key(key)}({m})")
        if self.central:
            parts.append(_coef(self.central) + "k")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def _coef(c: Scalar) -> str:
    s = str(c)
    if s == "1":
        return ""
    if s == "-1":
        return "-"
    return f"{s}*" if len(c.terms) == 1 else f"({s})*"


# ---------------------------------------------------------------------------


class UntwistedAffine:
    """g (x) C[t, 1/t] + Ck with [a(m), b(n)] = [a,b](m+n) + m delta <a,b> k."""

    def __init__(self, p):
        self.p = p
        self._br: dict = {}

    def _pair(self, a, b):
        r = self._br.get((a, b))
        if r is None:
            r = (self.p.bracket({a: ONE}, {b: ONE}), self.p.form({a: ONE}, {b: ONE}))
            self._br[(a, b)] = r
        return r

    def bracket(self, x: AffineElement, y: AffineElement) -> AffineElement:
        loop: dict = {}
        central = ZERO
        for (a, m), ca in x.loop.items():
            for (b, n), cb in y.loop.items():
                vec, f = self._pair(a, b)
                c = ca * cb
                for key, v in vec.items():
                    vaxpy(loop, {(key, m + n): v}, c)
                if m + n == 0 and m and f:
                    central = central + c * f * m
        return AffineElement(loop, central)

    def twist(self, g, x: AffineElement) -> AffineElement:
        """g(a(m) + beta k) = phi(g)^m (g a)(m) + beta k."""
        chi = self.p.character
        loop: dict = {}
        for (a, m), c in x.loop.items():
            img = self.p.act(g, {a: ONE})
            vaxpy(loop, {(key, m): v for key, v in img.items()}, c * chi.value(g, m))
        return AffineElement(loop, x.central)


class TwistedAffine:
    """g^[Gamma]: loop algebra modulo phi(g)^m (g a)(m) - a(m), bracket summed over Gamma."""

    def __init__(self, p):
        self.p = p
        self.kind = p.kind
        self.group = p.group
        self.chi = p.character
        self.name = p.name
        self._ech: dict = {}
        self._br: dict = {}
        if p.kind == "finite":
            self.period = p.group.exponent() if p.group.ngens else 1
            self._elements = p.group.elements()

    # -- degree bases -------------------------------------------------------

    def relations(self, m: int) -> Echelon:
        """Row-reduced span{phi(g)^m (g a) - a} at degree m (finite kind)."""
        r = m % self.period
        e = self._ech.get(r)
        if e is None:
            p = self.p
            e = Echelon(p.labels)
            for g in p.group.generators():
                ph = self.chi.value(g, r)
                for a in p.labels:
                    rel = vaxpy({k: ph * v for k, v in p.act(g, {a: ONE}).items()}, {a: ONE}, -ONE)
                    e.add(rel)
            self._ech[r] = e
        return e

    def degree_basis(self, m: int, labels=None) -> list:
        """Canonical keys at degree m (orbit kind: the sampled labels)."""
        if self.kind == "finite":
            return self.relations(m).free_columns()
        labels = self.p.sample_labels if labels is None else labels
        return [self.p.key(u) for u in labels]

    def canonical_vec(self, vec: dict, m: int) -> dict:
        if self.kind == "finite":
            return self.relations(m).reduce(vec)
        G = self.group
        out: dict = {}
        e = G.identity()
        for (h, u), c in vec.items():
            if any(h):
                c = c * self.chi.value(h, -m)
            vaxpy(out, {(e, u): c})
        return out

    def canonicalize(self, x: AffineElement) -> AffineElement:
        by_deg: dict = {}
        for (key, m), c in x.loop.items():
            by_deg.setdefault(m, {})[key] = c
        loop: dict = {}
        for m, vec in by_deg.items():
            for key, c in self.canonical_vec(vec, m).items():
                loop[(key, m)] = c
        return AffineElement(loop, x.central)

    # -- bracket ------------------------------------------------------------

    def pair_bracket(self, a, m: int, b, n: int):
        """Canonical [a(m), b(n)]_Gamma as (vector at degree m+n, central coefficient)."""
        key = (a, m, b, n)
        r = self._br.get(key)
        if r is not None:
            return r
        p = self.p
        vec: dict = {}
        central = ZERO
        if self.kind == "finite":
            for g in self._elements:
                ph = self.chi.value(g, m)
                ga = p.act(g, {a: ONE})
                vaxpy(vec, p.bracket(ga, {b: ONE}), ph)
                if m and m + n == 0:
                    f = p.form(ga, {b: ONE})
                    if f:
                        central = central + ph * f * m
        else:
            G = self.group
            (h, u), (h2, v) = a, b
            shift = self.chi.value(h, -m) * self.chi.value(h2, m)
            for g, val in p.beta(u, v).items():
                vaxpy(vec, p._shift(val, h2), self.chi.value(g, m) * shift)
            if m and m + n == 0:
                for g, f in p.gamma(u, v).items():
                    central = central + self.chi.value(g, m) * shift * f * m
        r = (self.canonical_vec(vec, m + n), central)
        self._br[key] = r
        return r

    def bracket(self, x: AffineElement, y: AffineElement) -> AffineElement:
        loop: dict = {}
        central = ZERO
        for (a, m), ca in x.loop.items():
            for (b, n), cb in y.loop.items():
                vec, c = self.pair_bracket(a, m, b, n)
                cc = ca * cb
                for key, v in vec.items():
                    vaxpy(loop, {(key, m + n): v}, cc)
                if c:
                    central = central + cc * c
        return AffineElement(loop, central)

    def basis_window(self, M: int, labels=None) -> list[AffineElement]:
        out = []
        for m in range(-M, M + 1):
            for key in self.degree_basis(m, labels):
                out.append(AffineElement.term(key, m))
        return out


# ---------------------------------------------------------------------------
# checks


def jacobi_window_check(alg, M: int = 4, labels=None) -> Report:
    """Antisymmetry and Jacobi on all basis triples with degrees in [-M, M]."""
    rep = Report(f"jacobi-window {getattr(alg, 'name', '')}")
    basis = alg.basis_window(M, labels)
    n = len(basis)
    win = f"[-{M},{M}] basis={n}"

    def antisym():
        for i in range(n):
            for j in range(i, n):
                s = alg.bracket(basis[i], basis[j]) + alg.bracket(basis[j], basis[i])
                if not s.is_zero():
                    return False, f"[{basis[i]}, {basis[j]}] + reverse = {s}", None
        return True, "", {"pairs": n * (n + 1) // 2}

    def jacobi():
        count = 0
        for i in range(n):
            x = basis[i]
            for j in range(i, n):
                y = basis[j]
                xy = alg.bracket(x, y)
                for k in range(j, n):
                    z = basis[k]
                    J = (alg.bracket(x, alg.bracket(y, z)) + alg.bracket(y, alg.bracket(z, x))
                         + alg.bracket(z, xy))
                    count += 1
                    if not J.is_zero():
                        return False, f"J({x}, {y}, {z}) = {J}", None
        return True, "", {"triples": count}

    rep.timed("antisymmetry", antisym, win)
    rep.timed("jacobi", jacobi, win)
    return rep


def well_definedness_check(ta: TwistedAffine, M: int = 2, labels=None) -> Report:
    """bracket(canonicalize(x), y) == bracket(x, y) for non-canonical x."""
    rep = Report(f"well-defined {ta.name}")
    p = ta.p
    if ta.kind == "finite":
        raw = [AffineElement.term(l, m) for m in range(-M, M + 1) for l in p.labels]
    else:
        G = ta.group
        shifts = [g for g in G.elements(1) if any(g)][:3]
        labels = p.sample_labels if labels is None else labels
        raw = [AffineElement.term(p.key(u, g), m) for m in range(-M, M + 1) for u in labels
               for g in shifts]
    basis = ta.basis_window(M, labels)

    def run():
        for x in raw:
            cx = ta.canonicalize(x)
            if ta.canonicalize(cx) != cx:
                return False, f"canonicalize not idempotent on {x}", None
            for y in basis:
                l, r = ta.bracket(cx, y), ta.bracket(x, y)
                if l != r:
                    return False, f"[{cx}, {y}] = {l} but [{x}, {y}] = {r}", None
        return True, "", {"samples": len(raw)}

    rep.timed("well-defined", run, f"[-{M},{M}]")
    return rep


def twist_automorphism_check(ua: UntwistedAffine, M: int = 2, labels=None) -> Report:
    """twist(g, [x,y]) == [twist x, twist y] on basis pairs, all group generators."""
    p = ua.p
    rep = Report(f"twist-automorphism {p.name}")
    if p.kind == "finite":
        keys = p.labels
    else:
        keys = [p.key(u) for u in (labels or p.sample_labels)]
    elems = [AffineElement.term(k, m) for m in range(-M, M + 1) for k in keys]

    def run():
        for g in p.group.generators():
            for x in elems:
                tx = ua.twist(g, x)
                for y in elems:
                    l = ua.twist(g, ua.bracket(x, y))
                    r = ua.bracket(tx, ua.twist(g, y))
                    if l != r:
                        return False, f"g={g}: twist[{x},{y}] = {l} but [twist, twist] = {r}", None
        return True, "", None

    rep.timed("twist-automorphism", run, f"[-{M},{M}]")
    return rep


def fixed_point_compare(ta: TwistedAffine, M: int = 4) -> Report:
    """Compare g^[Gamma] with the twist-fixed subalgebra of the untwisted algebra."""
    if ta.kind != "finite":
        raise ValueError("fixed-point comparison needs a finite group")
    from .linalg import nullspace

    p = ta.p
    ua = UntwistedAffine(p)
    elems = p.group.elements()
    order = len(elems)
    rep = Report(f"fixed-point {ta.name}")
    win = f"[-{M},{M}]"

    def psi_hat(x: AffineElement) -> AffineElement:
        loop: dict = {}
        for (a, m), c in x.loop.items():
            for g in elems:
                img = p.act(g, {a: ONE})
                vaxpy(loop, {(k, m): v for k, v in img.items()}, c * ta.chi.value(g, m))
        return AffineElement(loop, x.central * order)

    dims = {}
    images = {}

    def per_degree():
        for m in range(-M, M + 1):
            rows = []
            for g in p.group.generators():
                ph = ta.chi.value(g, m)
                mat = p.matrix(g)
                for target in p.labels:
                    row = {}
                    for l in p.labels:
                        c = ph * mat[l].get(target, ZERO) - (ONE if l == target else ZERO)
                        if c:
                            row[l] = c
                    if row:
                        rows.append(row)
            fixed = nullspace(rows, p.labels)
            reps = ta.degree_basis(m)
            dims[m] = (len(reps), len(fixed))
            ech = Echelon(p.labels)
            for a in reps:
                img = psi_hat(AffineElement.term(a, m))
                images[(a, m)] = img
                v = {k: c for (k, _), c in img.loop.items()}
                # image must be twist-fixed
                for g in p.group.generators():
                    if ua.twist(g, img) != img:
                        return False, f"psi({a}({m})) = {img} is not fixed by {g}", None
                ech.add(v)
            if not (ech.rank() == len(reps) == len(fixed)):
                return False, (f"degree {m}: rank psi={ech.rank()} quotient={len(reps)} "
                               f"fixed={len(fixed)}"), None
            # relations are killed by psi
            for g in p.group.generators():
                for a in p.labels:
                    rel = AffineElement({(k, m): v * ta.chi.value(g, m)
                                         for k, v in p.act(g, {a: ONE}).items()})
                    rel = rel - AffineElement.term(a, m)
                    if not psi_hat(rel).is_zero():
                        return False, f"psi does not kill the relation for {a}({m}), g={g}", None
        return True, "", {"dims": ",".join(f"{m}:{d[0]}" for m, d in sorted(dims.items()))}

    def brackets():
        basis = ta.basis_window(M)
        for x in basis:
            for y in basis:
                l = psi_hat(ta.bracket(x, y))
                r = ua.bracket(psi_hat(x), psi_hat(y))
                if l != r:
                    return False, f"psi[{x},{y}]_G = {l} but [psi x, psi y] = {r}", None
        return True, "", {"pairs": len(basis) ** 2}

    rep.timed("fixed-point-dimensions", per_degree, win)
    rep.timed("fixed-point-brackets", brackets, win)
    rep.dims = {m: d[0] for m, d in dims.items()}
    return rep


def quotient_iso_check(p, M: int = 3) -> Report:
    """g^[Gamma] vs (g/H)^[Gamma/H] with H = ker phi, on the degree window."""
    rep = Report(f"quotient-iso {p.name}")
    H = p.character.kernel()
    co = fold_by_subgroup(p, H)
    left, right = TwistedAffine(p), TwistedAffine(co.presentation)
    win = f"[-{M},{M}]"
    rep.record("kernel", True, "", kernel=str(H.gens).replace(" ", ""),
               quotient_group=str(co.presentation.group).replace(" ", ""),
               induced_injective=co.presentation.character.is_injective())

    def image(x: AffineElement) -> AffineElement:
        loop: dict = {}
        for (key, m), c in x.loop.items():
            for k2, v in co.project({key: ONE}).items():
                vaxpy(loop, {(k2, m): v}, c)
        return right.canonicalize(AffineElement(loop, x.central))

    def bases():
        for m in range(-M, M + 1):
            lb, rb = left.degree_basis(m), right.degree_basis(m)
            ech = Echelon(rb)
            for a in lb:
                img = image(AffineElement.term(a, m))
                vec = {k: c for (k, _), c in img.loop.items()}
                ech.add(vec)
            if not (ech.rank() == len(lb) == len(rb)):
                return False, f"degree {m}: left={len(lb)} right={len(rb)} rank={ech.rank()}", None
        return True, "", None

    def brackets():
        basis = left.basis_window(M)
        for x in basis:
            for y in basis:
                l = image(left.bracket(x, y))
                r = right.bracket(image(x), image(y))
                if l != r:
                    return False, f"map[{x},{y}] = {l} but [map x, map y] = {r}", None
        return True, "", {"pairs": len(basis) ** 2}

    rep.timed("quotient-iso-bases", bases, win)
    rep.timed("quotient-iso-brackets", brackets, win)
    return rep


def permutation_iso_check(N: int, M: int = 3) -> Report:
    """(sl2^(+N))^[Z/N] with the cyclic shift matches the untwisted affine sl2."""
    from .algebras import gN_permutation, sl2_chevalley

    perm = TwistedAffine(gN_permutation(N))
    base = UntwistedAffine(sl2_chevalley(twist=False))
    rep = Report(f"permutation-iso N={N}")
    win = f"[-{M},{M}]"

    def embed(x: AffineElement) -> AffineElement:
        return perm.canonicalize(AffineElement({(f"{k}0", m): c for (k, m), c in x.loop.items()},
                                               x.central))

    def run():
        for m in range(-M, M + 1):
            if perm.degree_basis(m) != ["e0", "f0", "h0"]:
                return False, f"degree {m}: basis {perm.degree_basis(m)}", None
        elems = [AffineElement.term(a, m) for m in range(-M, M + 1) for a in "efh"]
        for x in elems:
            for y in elems:
                l = perm.bracket(embed(x), embed(y))
                r = embed(base.bracket(x, y))
                if l != r:
                    return False, f"[{x},{y}]_G = {l} but untwisted gives {r}", None
        return True, "", {"pairs": len(elems) ** 2}

    rep.timed("permutation-iso", run, win)
    return rep
