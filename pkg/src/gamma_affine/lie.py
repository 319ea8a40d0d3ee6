"""Gamma-equivariant Lie algebras with invariant forms, and their coinvariants.

Two presentation kinds share one interface (``bracket``, ``form``, ``act``,
``gamma_bracket``, ``gamma_form``):

* :class:`FinitePresentation` - finite basis of labels, a finite group acting
  by matrices.  Vectors are dicts ``label -> Scalar``.
* :class:`OrbitPresentation` - basis ``T_g u`` (g in the group, u an orbit
  label) of a free Gamma-set.  Vectors are dicts ``(g, u) -> Scalar``.  The
  structure is given by rules ``beta(u, v) -> {g: [T_g u, v]}`` and
  ``gamma(u, v) -> {g: <T_g u, v>}`` with finite support.
"""

from __future__ import annotations

import itertools
import warnings
from functools import lru_cache

from .groups import AbelianGroup, Character, Subgroup
from .linalg import Echelon, format_key, nullspace, order_key, vaxpy, vformat, vscale, vsub
from .report import Report
from .scalars import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "FinitePresentation",
    "OrbitPresentation",
    "Coinvariants",
    "coinvariant_quotient",
    "fold_by_subgroup",
    "psi_fixed_point_check",
    "ideal_identity_check",
    "check_axioms",
]


def _vec(v) -> dict:
    return {k: as_scalar(c) for k, c in v.items() if as_scalar(c)}


class _Base:
    kind = ""
    name = ""

    def gamma_bracket(self, x: dict, y: dict) -> dict:
        raise NotImplementedError

    def check_axioms(self, **kw) -> Report:
        return check_axioms(self, **kw)

    def fmt(self, v: dict) -> str:
        return vformat(v)


# ---------------------------------------------------------------------------
# finite presentations


class FinitePresentation(_Base):
    """Finite-dimensional Lie algebra with form and a finite abelian group action."""

    kind = "finite"

    def __init__(self, labels, brackets, form, action, group: AbelianGroup,
                 character: Character, name: str = "", fill_antisymmetric: bool = True):
        self.labels = list(labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate basis labels")
        self.index = {l: i for i, l in enumerate(self.labels)}
        self.name = name
        if not group.is_finite():
            raise ValueError("a finite-basis presentation needs a finite group")
        self.group = group
        self.character = character
        self._br: dict = {}
        for (a, b), v in brackets.items():
            self._check_labels((a, b), v)
            self._br[(a, b)] = _vec(v)
        if fill_antisymmetric:
            for (a, b), v in list(self._br.items()):
                if (b, a) not in self._br:
                    self._br[(b, a)] = vscale(v, -1)
        self._form: dict = {}
        for (a, b), c in form.items():
            self._check_labels((a, b), {})
            c = as_scalar(c)
            if c:
                self._form[(a, b)] = c
        for (a, b), c in list(self._form.items()):
            self._form.setdefault((b, a), c)
        if len(action) != group.ngens:
            raise ValueError(f"need one action matrix per group generator ({group.ngens})")
        self._gens = []
        for m in action:
            mat = {}
            for l in self.labels:
                img = m.get(l)
                mat[l] = {l: ONE} if img is None else _vec(img)
                self._check_labels((), mat[l])
            self._gens.append(mat)
        self._mats: dict = {}

    def _check_labels(self, pair, vec):
        for l in tuple(pair) + tuple(vec):
            if l not in self.index:
                raise ValueError(f"unknown basis label {l!r}")

    # -- structure ----------------------------------------------------------

    def keys(self) -> list:
        return list(self.labels)

    def basis(self) -> list[dict]:
        return [{l: ONE} for l in self.labels]

    def bracket(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                v = self._br.get((a, b))
                if v:
                    vaxpy(out, v, ca * cb)
        return out

    def form(self, x: dict, y: dict) -> Scalar:
        s = ZERO
        for a, ca in x.items():
            for b, cb in y.items():
                c = self._form.get((a, b))
                if c is not None:
                    s = s + c * ca * cb
        return s

    def matrix(self, g) -> dict:
        g = self.group.reduce(g)
        m = self._mats.get(g)
        if m is None:
            m = {l: {l: ONE} for l in self.labels}
            for gen, n in zip(self._gens, g):
                for _ in range(n):
                    m = {l: _apply(gen, v) for l, v in m.items()}
            self._mats[g] = m
        return m

    def act(self, g, x: dict) -> dict:
        return _apply(self.matrix(g), x)

    def elements(self) -> list:
        return self.group.elements()

    def gamma_bracket(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for g in self.elements():
            vaxpy(out, self.bracket(self.act(g, x), y))
        return out

    def gamma_form(self, x: dict, y: dict) -> Scalar:
        s = ZERO
        for g in self.elements():
            s = s + self.form(self.act(g, x), y)
        return s

    def generator_matrices(self) -> list[dict]:
        return self._gens

    def __repr__(self):
        return f"<FinitePresentation {self.name or ''} dim={len(self.labels)} group={self.group}>"


def _apply(mat: dict, x: dict) -> dict:
    out: dict = {}
    for l, c in x.items():
        vaxpy(out, mat[l], c)
    return out


# ---------------------------------------------------------------------------
# free-orbit presentations


class OrbitPresentation(_Base):
    """Lie algebra with basis T_g u over a free Gamma-set, given by support rules."""

    kind = "orbit"

    def __init__(self, group: AbelianGroup, character: Character, bracket_rule, form_rule,
                 sample_labels, name: str = "", shell: int = 1):
        self.group = group
        self.character = character
        self._beta_rule = bracket_rule
        self._gamma_rule = form_rule
        self.sample_labels = list(sample_labels)
        self.name = name
        self.shell = shell
        self._beta_cache: dict = {}
        self._gamma_cache: dict = {}
        self._pair_cache: dict = {}
        self._form_cache: dict = {}

    def beta(self, u, v) -> dict:
        """{g: [T_g u, v]} with finite support."""
        key = (u, v)
        r = self._beta_cache.get(key)
        if r is None:
            raw = self._beta_rule(u, v)
            r = {}
            for g, vec in raw.items():
                g = self.group.reduce(g)
                vec = {(self.group.reduce(h), w): as_scalar(c) for (h, w), c in vec.items()}
                acc = r.setdefault(g, {})
                vaxpy(acc, {k: c for k, c in vec.items() if c})
            r = {g: vec for g, vec in r.items() if vec}
            self._beta_cache[key] = r
        return r

    def gamma(self, u, v) -> dict:
        """{g: <T_g u, v>} with finite support."""
        key = (u, v)
        r = self._gamma_cache.get(key)
        if r is None:
            r = {}
            for g, c in self._gamma_rule(u, v).items():
                g = self.group.reduce(g)
                r[g] = r.get(g, ZERO) + as_scalar(c)
            r = {g: c for g, c in r.items() if c}
            self._gamma_cache[key] = r
        return r

    def key(self, u, g=None) -> tuple:
        return (self.group.identity() if g is None else self.group.reduce(g), u)

    def elem(self, u, g=None, coeff=ONE) -> dict:
        return {self.key(u, g): as_scalar(coeff)}

    def keys(self) -> list:
        return [self.key(u) for u in self.sample_labels]

    def basis(self) -> list[dict]:
        return [{k: ONE} for k in self.keys()]

    def _shift(self, vec: dict, b) -> dict:
        if not any(b):
            return vec
        G = self.group
        return {(G.add(h, b), w): c for (h, w), c in vec.items()}

    def _pair(self, kx, ky) -> dict:
        r = self._pair_cache.get((kx, ky))
        if r is None:
            (a, u), (b, v) = kx, ky
            val = self.beta(u, v).get(self.group.sub(a, b))
            r = self._shift(val, b) if val else {}
            self._pair_cache[(kx, ky)] = r
        return r

    def _pair_form(self, kx, ky) -> Scalar:
        r = self._form_cache.get((kx, ky))
        if r is None:
            (a, u), (b, v) = kx, ky
            r = self.gamma(u, v).get(self.group.sub(a, b), ZERO)
            self._form_cache[(kx, ky)] = r
        return r

    def bracket(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for kx, ca in x.items():
            for ky, cb in y.items():
                val = self._pair(kx, ky)
                if val:
                    vaxpy(out, val, ca * cb)
        return out

    def form(self, x: dict, y: dict) -> Scalar:
        s = ZERO
        for kx, ca in x.items():
            for ky, cb in y.items():
                c = self._pair_form(kx, ky)
                if c:
                    s = s + c * ca * cb
        return s

    def act(self, g, x: dict) -> dict:
        G = self.group
        return {(G.add(g, h), w): c for (h, w), c in x.items()}

    def gamma_bracket(self, x: dict, y: dict) -> dict:
        # sum over all g of [T_g x, y]: every support point contributes once
        out: dict = {}
        for (a, u), ca in x.items():
            for (b, v), cb in y.items():
                for val in self.beta(u, v).values():
                    vaxpy(out, self._shift(val, b), ca * cb)
        return out

    def gamma_form(self, x: dict, y: dict) -> Scalar:
        s = ZERO
        for (a, u), ca in x.items():
            for (b, v), cb in y.items():
                for c in self.gamma(u, v).values():
                    s = s + c * ca * cb
        return s

    def translate_window(self, labels=None) -> list:
        """Union of declared supports over sample pairs, plus one shell of generators."""
        labels = self.sample_labels if labels is None else labels
        G = self.group
        pts = {G.identity()}
        for u in labels:
            for v in labels:
                pts.update(self.beta(u, v))
                pts.update(self.gamma(u, v))
        steps = [G.identity()]
        for i in range(G.ngens):
            e = G.generator(i)
            for s in range(1, self.shell + 1):
                steps += [G.scale(s, e), G.scale(-s, e)]
        out = {G.add(p, s) for p in pts for s in steps}
        return sorted(out)

    def fmt(self, v: dict) -> str:
        return vformat(v)

    def __repr__(self):
        return f"<OrbitPresentation {self.name or ''} group={self.group}>"


# ---------------------------------------------------------------------------
# axioms


def _witness(p, *vecs) -> str:
    return ", ".join(p.fmt(v) for v in vecs)


def check_axioms(p, labels=None, window=None) -> Report:
    """Antisymmetry, Jacobi, form symmetry/invariance, and action compatibility."""
    rep = Report(f"lie-axioms {p.name}")
    if p.kind == "finite":
        elems = p.basis()
        win = f"basis dim={len(elems)}"
        pairs = [(x, y) for x in elems for y in elems]
        triples = [(elems[i], elems[j], elems[k]) for i in range(len(elems))
                   for j in range(i, len(elems)) for k in range(j, len(elems))]
    else:
        labels = p.sample_labels if labels is None else list(labels)
        W = p.translate_window(labels) if window is None else window
        win = f"labels={len(labels)} translates={len(W)}"
        base = [p.elem(u) for u in labels]
        trans = [p.elem(u, g) for u in labels for g in W]
        pairs = [(x, y) for x in trans for y in base]
        triples = [(x, y, z) for x in trans for y in trans for z in base]

    def antisym():
        for x, y in pairs:
            s = vaxpy(p.bracket(x, y), p.bracket(y, x))
            if s:
                return False, f"[{_witness(p, x)}, {_witness(p, y)}] + reverse = {p.fmt(s)}", None
        return True, "", {"pairs": len(pairs)}

    def jacobi():
        for x, y, z in triples:
            j = vaxpy(vaxpy(p.bracket(x, p.bracket(y, z)), p.bracket(y, p.bracket(z, x))),
                      p.bracket(z, p.bracket(x, y)))
            if j:
                return False, f"J({_witness(p, x, y, z)}) = {p.fmt(j)}", None
        return True, "", {"triples": len(triples)}

    def form_sym():
        for x, y in pairs:
            if p.form(x, y) != p.form(y, x):
                return False, f"<{_witness(p, x)}, {_witness(p, y)}> not symmetric", None
        return True, "", None

    def invariance():
        for x, y, z in triples:
            l, r = p.form(p.bracket(x, y), z), p.form(x, p.bracket(y, z))
            if l != r:
                return False, f"<[x,y],z> = {l} but <x,[y,z]> = {r} at ({_witness(p, x, y, z)})", None
        return True, "", None

    rep.timed("antisymmetry", antisym, win)
    rep.timed("jacobi", jacobi, win)
    rep.timed("form-symmetry", form_sym, win)
    rep.timed("form-invariance", invariance, win)
    if p.kind == "finite":
        rep.timed("action-automorphism", lambda: _check_action(p), win)
    else:
        rep.record("action-automorphism", True, win, equivariance="definitional")
    rep.timed("character-torsion", lambda: _check_character(p.character), "")
    return rep


def _check_action(p: FinitePresentation):
    elems = p.basis()
    G = p.group
    for i, mat in enumerate(p.generator_matrices()):
        def M(v):
            return _apply(mat, v)
        for x in elems:
            for y in elems:
                l, r = M(p.bracket(x, y)), p.bracket(M(x), M(y))
                if vsub(l, r):
                    return False, f"generator {i}: g[x,y] != [gx,gy] at {_witness(p, x, y)}", None
                if p.form(M(x), M(y)) != p.form(x, y):
                    return False, f"generator {i}: form not preserved at {_witness(p, x, y)}", None
        if i >= G.free_rank:
            d = G.torsion[i - G.free_rank]
            for x in elems:
                v = x
                for _ in range(d):
                    v = M(v)
                if vsub(v, x):
                    return False, f"generator {i}: M^{d} != identity on {_witness(p, x)}", None
    return True, "", None


def _check_character(chi: Character):
    G = chi.group
    for i, d in enumerate(G.torsion):
        u = chi.images[G.free_rank + i]
        if not (u ** d).is_one():
            return False, f"torsion image {i} has wrong order", None
    sample = G.elements(1)[:25]
    for g in sample:
        for h in sample:
            if chi.phi(G.add(g, h)).to_scalar() != (chi.phi(g) * chi.phi(h)).to_scalar():
                return False, f"phi({G.add(g, h)}) != phi({g}) phi({h})", None
    return True, "", None


def ideal_identity_check(p, samples=None) -> Report:
    """gamma_bracket(g u - u, v) == 0 before any projection."""
    rep = Report(f"ideal-identity {p.name}")
    if p.kind == "finite":
        elems = p.basis()
        gs = [g for g in p.group.elements() if any(g)]
    else:
        elems = [p.elem(u) for u in (samples or p.sample_labels)]
        gs = [g for g in p.group.elements(1) if any(g)]
        elems += [p.elem(u, g) for u in (samples or p.sample_labels)[:2] for g in gs[:2]]

    def run():
        n = 0
        for g in gs:
            for u in elems:
                rel = vsub(p.act(g, u), u)
                for v in elems:
                    n += 1
                    for out in (p.gamma_bracket(rel, v),):
                        if out:
                            return False, f"[g u - u, v]_G = {p.fmt(out)} for g={g}, u={p.fmt(u)}, v={p.fmt(v)}", None
                    if p.gamma_form(rel, v):
                        return False, f"<g u - u, v>_G != 0 for g={g}, u={p.fmt(u)}, v={p.fmt(v)}", None
        return True, "", {"samples": n}

    rep.timed("ideal-identity", run, f"elements={len(elems)} group-samples={len(gs)}")
    return rep


# ---------------------------------------------------------------------------
# coinvariants


class Coinvariants:
    """K/H for a subgroup H: quotient presentation with projection and section."""

    def __init__(self, p, presentation, project, section, relations=None):
        self.source = p
        self.presentation = presentation
        self.project = project
        self.section = section
        self.relations = relations

    def dim(self):
        q = self.presentation
        return len(q.labels) if q.kind == "finite" else None


def _trivial_group():
    G = AbelianGroup(0, ())
    return G, Character(G, [])


def coinvariant_quotient(p) -> Coinvariants:
    """K/Gamma with bracket from gamma_bracket and form from gamma_form."""
    if p.kind == "finite":
        return _fold_finite(p, p.group.elements(), p.group.generators(), None)
    return _fold_orbit(p, None)


def fold_by_subgroup(p, H: Subgroup) -> Coinvariants:
    """Coinvariants by H with the residual Gamma/H action and induced character."""
    if H.group != p.group:
        raise ValueError("subgroup of a different group")
    chi_ok = all(p.character.phi(h).is_one() for h in H.gens)
    if not chi_ok:
        warnings.warn("folding by a subgroup that is not contained in ker phi", stacklevel=2)
    if p.kind == "finite":
        elems = [g for g in p.group.elements() if H.contains(g)]
        return _fold_finite(p, elems, H.gens, H, chi_ok)
    return _fold_orbit(p, H, chi_ok)


def _fold_finite(p: FinitePresentation, h_elems, h_gens, H, chi_ok=True):
    ech = Echelon(p.labels)
    for g in h_gens:
        for l in p.labels:
            ech.add(vsub(p.act(g, {l: ONE}), {l: ONE}))
    reps = ech.free_columns()

    def project(v: dict) -> dict:
        return ech.reduce(v)

    def section(v: dict) -> dict:
        return dict(v)

    def hsum_bracket(x, y):
        out: dict = {}
        for h in h_elems:
            vaxpy(out, p.bracket(p.act(h, x), y))
        return out

    def hsum_form(x, y):
        s = ZERO
        for h in h_elems:
            s = s + p.form(p.act(h, x), y)
        return s

    brackets, form = {}, {}
    for a in reps:
        for b in reps:
            v = project(hsum_bracket({a: ONE}, {b: ONE}))
            if v:
                brackets[(a, b)] = v
            c = hsum_form({a: ONE}, {b: ONE})
            if c:
                form[(a, b)] = c
    if H is None:
        G, chi = _trivial_group()
        action = []
    else:
        q = H.quotient()
        G = q.target
        chi = q.induced_character(p.character) if chi_ok else Character.trivial(G, p.character.nparams)
        action = []
        for e in G.generators():
            lift = q.lift(e)
            action.append({a: project(p.act(lift, {a: ONE})) for a in reps})
    name = f"{p.name}/{'G' if H is None else 'H'}"
    qp = FinitePresentation(reps, brackets, form, action, G, chi, name=name,
                            fill_antisymmetric=False)
    return Coinvariants(p, qp, project, section, ech)


def _fold_orbit(p: OrbitPresentation, H, chi_ok=True):
    if H is None:
        G, chi = _trivial_group()

        def pi(g):
            return ()
    else:
        q = H.quotient()
        G = q.target
        chi = q.induced_character(p.character) if chi_ok else Character.trivial(G, p.character.nparams)
        pi = q.project

    def push(vec: dict) -> dict:
        out: dict = {}
        for (h, w), c in vec.items():
            vaxpy(out, {(pi(h), w): c})
        return out

    def beta_rule(u, v):
        out: dict = {}
        for g, vec in p.beta(u, v).items():
            vaxpy(out.setdefault(pi(g), {}), push(vec))
        return out

    def gamma_rule(u, v):
        out: dict = {}
        for g, c in p.gamma(u, v).items():
            out[pi(g)] = out.get(pi(g), ZERO) + c
        return out

    def section(vec: dict) -> dict:
        if H is None:
            return {(p.group.identity(), w): c for (_, w), c in vec.items()}
        return {(q.lift(h), w): c for (h, w), c in vec.items()}

    name = f"{p.name}/{'G' if H is None else 'H'}"
    qp = OrbitPresentation(G, chi, beta_rule, gamma_rule, p.sample_labels, name=name,
                           shell=p.shell)
    return Coinvariants(p, qp, push, section)


# ---------------------------------------------------------------------------
# fixed points


def psi_fixed_point_check(p: FinitePresentation) -> Report:
    """K/Gamma -> K^Gamma via psi(u) = sum_g g u: well defined, bijective, bracket map."""
    if p.kind != "finite":
        raise ValueError("fixed-point comparison needs a finite-basis presentation")
    rep = Report(f"psi-fixed-point {p.name}")
    co = coinvariant_quotient(p)
    q = co.presentation
    G = p.group.elements()
    order = len(G)

    def psi(v: dict) -> dict:
        out: dict = {}
        for g in G:
            vaxpy(out, p.act(g, v))
        return out

    rows = []
    for mat in p.generator_matrices():
        # rows of (M - I)^T acting on coordinate vectors: x is fixed iff sum_l x_l (M e_l - e_l) = 0
        for target in p.labels:
            row = {}
            for l in p.labels:
                c = mat[l].get(target, ZERO) - (ONE if l == target else ZERO)
                if c:
                    row[l] = c
            if row:
                rows.append(row)
    fixed = nullspace(rows, p.labels)
    images = {a: psi({a: ONE}) for a in q.labels}
    win = f"dim K={len(p.labels)} |G|={order}"

    def well_defined():
        for g in p.group.generators():
            for l in p.labels:
                rel = vsub(p.act(g, {l: ONE}), {l: ONE})
                if psi(rel):
                    return False, f"psi(g {l} - {l}) != 0", None
        return True, "", None

    def lands_in_fixed():
        for a, v in images.items():
            for g in p.group.generators():
                if vsub(p.act(g, v), v):
                    return False, f"psi({a}) = {p.fmt(v)} is not fixed by {g}", None
        return True, "", None

    def dims():
        ech = Echelon(p.labels)
        for v in images.values():
            ech.add(v)
        ok = ech.rank() == len(q.labels) == len(fixed)
        return ok, f"rank(psi)={ech.rank()} dim K/G={len(q.labels)} dim K^G={len(fixed)}", {
            "dim_quotient": len(q.labels), "dim_fixed": len(fixed)}

    def brackets():
        for a in q.labels:
            for b in q.labels:
                lhs = psi(q.bracket({a: ONE}, {b: ONE}))
                rhs = p.bracket(images[a], images[b])
                if vsub(lhs, rhs):
                    return False, f"psi([{a},{b}]_G) = {p.fmt(lhs)} but [psi {a}, psi {b}] = {p.fmt(rhs)}", None
                lf = q.form({a: ONE}, {b: ONE}) * order
                rf = p.form(images[a], images[b])
                if lf != rf:
                    return False, f"|G|<{a},{b}>_G = {lf} but <psi {a}, psi {b}> = {rf}", None
        return True, "", None

    rep.timed("psi-well-defined", well_defined, win)
    rep.timed("psi-image-fixed", lands_in_fixed, win)
    rep.timed("psi-dimensions", dims, win)
    rep.timed("psi-brackets", brackets, win)
    rep.images = images
    rep.fixed_basis = fixed
    return rep
