"""Level-l vacuum modules: PBW monomials on a vacuum, exact normal ordering.

A monomial is a tuple of creation operators ``(n, key)`` meaning ``key(-n)``
with n >= 1, stored in normal order: larger n first, then basis order.  The
empty tuple is the vacuum.  Vectors are dicts ``monomial -> Scalar``.
"""

from __future__ import annotations

import sys

from .affine import AffineElement, TwistedAffine
from .linalg import format_key, order_key, vaxpy, vsub
from .report import Report
from .scalars import ONE, ZERO, Scalar, as_scalar

__all__ = ["VacuumModule", "build_basis", "check_module_relations", "format_vector"]

VACUUM = ()


def format_vector(w: dict) -> str:
    if not w:
        return "0"
    parts = []
    for mono, c in sorted(w.items(), key=lambda kv: (sum(n for n, _ in kv[0]), str(kv[0]))):
        ops = "".join(f"{format_key(k)}(-{n})" for n, k in mono) or "vac"
        if mono:
            ops += "vac"
        cs = str(c)
        parts.append(ops if cs == "1" else (f"-{ops}" if cs == "-1" else f"({cs})*{ops}"))
    return " + ".join(parts).replace("+ -", "- ")


def degree(mono) -> int:
    return sum(n for n, _ in mono)


class VacuumModule:
    """Induced module: degrees >= 0 kill the vacuum and k acts by the level."""

    def __init__(self, alg: TwistedAffine, depth: int, level, labels=None):
        if depth < 0:
            raise ValueError("depth must be nonnegative")
        self.alg = alg
        self.depth = depth
        self.level = as_scalar(level)
        self.labels = labels
        p = alg.p
        if alg.kind == "finite":
            idx = {l: i for i, l in enumerate(p.labels)}
            self._rank = lambda key: (0, idx[key])
        else:
            self._rank = lambda key: order_key(key[1])
        self._memo: dict = {}
        self.overflow = 0
        self._basis = None
        if sys.getrecursionlimit() < 10000:
            sys.setrecursionlimit(10000)

    def ordkey(self, op):
        n, key = op
        return (-n, self._rank(key))

    # -- action -------------------------------------------------------------

    def act_mono(self, key, m: int, mono: tuple, level=None) -> dict:
        """key(m) applied to a monomial; key must be canonical at degree m."""
        lvl = self.level if level is None else level
        memo_key = (key, m, mono, None if level is None else level)
        r = self._memo.get(memo_key)
        if r is not None:
            return r
        if m < 0 and (not mono or self.ordkey((-m, key)) <= self.ordkey(mono[0])):
            r = {((-m, key),) + mono: ONE}
            if degree(mono) - m > self.depth:
                self.overflow += 1
        elif not mono:
            r = {}
        else:
            (ny, ky), rest = mono[0], mono[1:]
            r = {}
            # key(m) y rest = y (key(m) rest) + [key(m), y] rest
            for mono2, c in self.act_mono(key, m, rest, level).items():
                vaxpy(r, self.act_mono(ky, -ny, mono2, level), c)
            vec, central = self.alg.pair_bracket(key, m, ky, -ny)
            for k2, c in vec.items():
                vaxpy(r, self.act_mono(k2, m - ny, rest, level), c)
            if central:
                vaxpy(r, {rest: ONE}, central * lvl)
        self._memo[memo_key] = r
        return r

    def act(self, key, m: int, w: dict, level=None) -> dict:
        out: dict = {}
        for mono, c in w.items():
            vaxpy(out, self.act_mono(key, m, mono, level), c)
        return out

    def act_element(self, x: AffineElement, w: dict, level=None) -> dict:
        """Action of an arbitrary element; it is canonicalized first."""
        x = self.alg.canonicalize(x)
        lvl = self.level if level is None else level
        out: dict = {}
        for (key, m), c in x.loop.items():
            vaxpy(out, self.act(key, m, w, level), c)
        if x.central:
            vaxpy(out, w, x.central * lvl)
        return out

    # -- basis --------------------------------------------------------------

    def creation_ops(self, n: int) -> list:
        return [(n, key) for key in self.alg.degree_basis(-n, self.labels)]

    def build_basis(self) -> dict:
        if self._basis is None:
            ops = []
            for n in range(1, self.depth + 1):
                ops += self.creation_ops(n)
            ops.sort(key=self.ordkey)
            basis = {d: [] for d in range(self.depth + 1)}

            def rec(start, remaining, acc):
                basis[self.depth - remaining].append(tuple(acc))
                for i in range(start, len(ops)):
                    n = ops[i][0]
                    if n <= remaining:
                        acc.append(ops[i])
                        rec(i, remaining - n, acc)
                        acc.pop()

            rec(0, self.depth, [])
            self._basis = basis
        return self._basis

    def dims(self) -> list[int]:
        b = self.build_basis()
        return [len(b[d]) for d in range(self.depth + 1)]

    def vectors(self, max_degree=None):
        b = self.build_basis()
        top = self.depth if max_degree is None else min(max_degree, self.depth)
        return [(d, mono) for d in range(top + 1) for mono in b[d]]


def build_basis(alg: TwistedAffine, depth: int, level, labels=None) -> VacuumModule:
    mod = VacuumModule(alg, depth, level, labels)
    mod.build_basis()
    return mod


def check_module_relations(mod: VacuumModule, M: int = 3, rhs_level=None,
                           labels=None) -> Report:
    """u(m) v(n) w - v(n) u(m) w == [u(m), v(n)]_Gamma w for modes in [-M, M]."""
    rep = Report(f"module-relations {mod.alg.name}")
    alg = mod.alg
    D = mod.depth
    win = f"modes=[-{M},{M}] depth={D}"
    gens = [(key, m) for m in range(-M, M + 1) for key in alg.degree_basis(m, labels or mod.labels)]

    def run():
        count = 0
        before = mod.overflow
        for (u, m) in gens:
            for (v, n) in gens:
                vec, central = alg.pair_bracket(u, m, v, n)
                for d, mono in mod.vectors():
                    if max(d - m, d - n, d - m - n) > D:
                        continue
                    w = {mono: ONE}
                    lhs = vsub(mod.act(u, m, mod.act(v, n, w)), mod.act(v, n, mod.act(u, m, w)))
                    rhs: dict = {}
                    for k2, c in vec.items():
                        vaxpy(rhs, mod.act(k2, m + n, w), c)
                    if central:
                        lvl = mod.level if rhs_level is None else as_scalar(rhs_level)
                        vaxpy(rhs, w, central * lvl)
                    count += 1
                    diff = vsub(lhs, rhs)
                    if diff:
                        return False, (f"[{format_key(u)}({m}), {format_key(v)}({n})] on "
                                       f"{format_vector(w)}: difference {format_vector(diff)}"), None
        if mod.overflow != before:
            return False, "depth overflow inside the asserted window", None
        return True, "", {"samples": count}

    rep.timed("module-relations", run, win)
    rep.timed("level", lambda: _level_check(mod), win)
    rep.record("dims", True, win, dims=",".join(map(str, mod.dims())))
    return rep


def _level_check(mod: VacuumModule):
    for d, mono in mod.vectors():
        w = {mono: ONE}
        kw = mod.act_element(AffineElement.k(), w)
        if vsub(kw, {mono: mod.level}):
            return False, f"k does not act by the level on {format_vector(w)}", None
    return True, "", None
