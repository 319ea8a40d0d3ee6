"""Finitely generated abelian groups, characters into units, kernels and quotients.

Group elements are plain tuples: ``free_rank`` integer coordinates followed by
one residue per torsion factor.
"""

from __future__ import annotations

import itertools
import math
from functools import reduce

from .scalars import Cyclotomic, Scalar, ScalarError, UnitMonomial, format_scalar

__all__ = [
    "AbelianGroup",
    "Character",
    "Subgroup",
    "QuotientMap",
    "GroupError",
    "smith_normal_form",
    "integer_kernel",
]


class GroupError(ValueError):
    pass


# ---------------------------------------------------------------------------
# integer linear algebra


def _xgcd(a, b):
    # returns (g, s, t) with s*a + t*b = g >= 0
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _row_hnf(rows, ncols, track=None):
    """Row-reduce an integer matrix in place to echelon form.

    ``track`` (a list of rows) receives the same row operations.
    Returns the number of nonzero rows.
    """
    m = len(rows)
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, m):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        if track is not None:
            track[r], track[piv] = track[piv], track[r]
        for i in range(r + 1, m):
            if rows[i][c]:
                a, b = rows[r][c], rows[i][c]
                g, s, t = _xgcd(a, b)
                ua, ub = a // g, b // g
                new_r = [s * x + t * y for x, y in zip(rows[r], rows[i])]
                new_i = [-ub * x + ua * y for x, y in zip(rows[r], rows[i])]
                rows[r], rows[i] = new_r, new_i
                if track is not None:
                    tr = [s * x + t * y for x, y in zip(track[r], track[i])]
                    ti = [-ub * x + ua * y for x, y in zip(track[r], track[i])]
                    track[r], track[i] = tr, ti
        if rows[r][c] < 0:
            rows[r] = [-x for x in rows[r]]
            if track is not None:
                track[r] = [-x for x in track[r]]
        # reduce entries above the pivot
        for i in range(r):
            if rows[i][c]:
                q = rows[i][c] // rows[r][c]
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
                if track is not None:
                    track[i] = [x - q * y for x, y in zip(track[i], track[r])]
        r += 1
    return r


def integer_kernel(A, ncols):
    """Basis (list of rows) of {x in Z^ncols : A x = 0}, in Hermite form."""
    if not A:
        return _identity(ncols)
    cols = [[A[i][j] for i in range(len(A))] for j in range(ncols)]
    track = _identity(ncols)
    rank = _row_hnf(cols, len(A), track)
    basis = track[rank:]
    _row_hnf(basis, ncols)
    return [row for row in basis if any(row)]


def smith_normal_form(M, nrows, ncols):
    """Return (U, D, V) with U*M*V = D diagonal, U and V unimodular."""
    D = [list(r) for r in M] if M else []
    D += [[0] * ncols for _ in range(nrows - len(D))]
    U = _identity(nrows)
    V = _identity(ncols)
    t = 0
    while t < min(nrows, ncols):
        # pick the smallest nonzero entry in the trailing block
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        D[t], D[i] = D[i], D[t]
        U[t], U[i] = U[i], U[t]
        for row in D:
            row[t], row[j] = row[j], row[t]
        for row in V:
            row[t], row[j] = row[j], row[t]
        done = True
        p = D[t][t]
        for i in range(t + 1, nrows):
            q = D[i][t] // p
            if q:
                D[i] = [x - q * y for x, y in zip(D[i], D[t])]
                U[i] = [x - q * y for x, y in zip(U[i], U[t])]
            if D[i][t]:
                done = False
        for j in range(t + 1, ncols):
            q = D[t][j] // p
            if q:
                for row in D:
                    row[j] -= q * row[t]
                for row in V:
                    row[j] -= q * row[t]
            if D[t][j]:
                done = False
        if not done:
            continue
        # divisibility condition on the trailing block
        bad = None
        for i in range(t + 1, nrows):
            for j in range(t + 1, ncols):
                if D[i][j] % p:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            D[t] = [x + y for x, y in zip(D[t], D[bad])]
            U[t] = [x + y for x, y in zip(U[t], U[bad])]
            continue
        if p < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, D, V


def _inverse_unimodular(V):
    n = len(V)
    rows = [list(r) for r in V]
    track = _identity(n)
    _row_hnf(rows, n, track)
    if any(rows[i][i] != 1 for i in range(n)):
        raise GroupError("matrix is not unimodular")
    return track


# ---------------------------------------------------------------------------
# groups


class AbelianGroup:
    """Z^free_rank x Z/d_1 x ... x Z/d_r."""

    def __init__(self, free_rank: int = 0, torsion=()):
        torsion = tuple(int(d) for d in torsion)
        if free_rank < 0:
            raise GroupError("free rank must be nonnegative")
        if any(d < 2 for d in torsion):
            raise GroupError(f"torsion orders must be >= 2, got {list(torsion)}")
        self.free_rank = free_rank
        self.torsion = torsion

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self):
        if not self.is_finite():
            return None
        return math.prod(self.torsion)

    def exponent(self) -> int:
        if not self.is_finite():
            raise GroupError("infinite group has no exponent")
        return reduce(math.lcm, self.torsion, 1)

    def identity(self) -> tuple:
        return (0,) * self.ngens

    def reduce(self, g) -> tuple:
        g = tuple(int(x) for x in g)
        if len(g) != self.ngens:
            raise GroupError(f"element {g} has wrong length for {self}")
        k = self.free_rank
        return g[:k] + tuple(x % d for x, d in zip(g[k:], self.torsion))

    def add(self, g, h) -> tuple:
        return self.reduce(tuple(a + b for a, b in zip(g, h)))

    def neg(self, g) -> tuple:
        return self.reduce(tuple(-a for a in g))

    def sub(self, g, h) -> tuple:
        return self.reduce(tuple(a - b for a, b in zip(g, h)))

    def scale(self, n: int, g) -> tuple:
        return self.reduce(tuple(n * a for a in g))

    def generator(self, i: int) -> tuple:
        e = [0] * self.ngens
        e[i] = 1
        return tuple(e)

    def generators(self) -> list[tuple]:
        return [self.generator(i) for i in range(self.ngens)]

    def elements(self, window: int = 0) -> list[tuple]:
        """All elements with free coordinates in [-window, window]."""
        ranges = [range(-window, window + 1)] * self.free_rank
        ranges += [range(d) for d in self.torsion]
        return [tuple(x) for x in itertools.product(*ranges)]

    def order_of(self, g) -> int | None:
        g = self.reduce(g)
        if any(g[: self.free_rank]):
            return None
        n = 1
        for x, d in zip(g[self.free_rank:], self.torsion):
            n = math.lcm(n, d // math.gcd(x, d))
        return n

    def relation_rows(self) -> list[list[int]]:
        k, n = self.free_rank, self.ngens
        rows = []
        for i, d in enumerate(self.torsion):
            r = [0] * n
            r[k + i] = d
            rows.append(r)
        return rows

    def __eq__(self, other):
        return (isinstance(other, AbelianGroup) and self.free_rank == other.free_rank
                and self.torsion == other.torsion)

    def __hash__(self):
        return hash((self.free_rank, self.torsion))

    def __repr__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " x ".join(parts) if parts else "1"


def _root_exponent(c: Cyclotomic, M: int):
    """a with c == zeta_M^a, or None."""
    for a in range(M):
        if Cyclotomic.root(M, a) == c:
            return a
    return None


def _factor_rational(r):
    # r = +-prod p^v  ->  (sign, {p: v})
    num, den = int(r.numerator), int(r.denominator)
    sign = -1 if num < 0 else 1
    num = abs(num)
    out: dict = {}
    for val, s in ((num, 1), (den, -1)):
        p = 2
        while p * p <= val:
            while val % p == 0:
                out[p] = out.get(p, 0) + s
                val //= p
            p += 1
        if val > 1:
            out[val] = out.get(val, 0) + s
    return sign, out


class Character:
    """A homomorphism phi from an AbelianGroup to units, given on generators."""

    def __init__(self, group: AbelianGroup, images):
        images = [im if isinstance(im, UnitMonomial) else _to_unit(im) for im in images]
        if len(images) != group.ngens:
            raise GroupError(f"need {group.ngens} generator images, got {len(images)}")
        k = max((len(u.exponents) for u in images), default=0)
        self.nparams = k
        self.group = group
        self.images = [UnitMonomial(u.cyclo, tuple(u.exponents) + (0,) * (k - len(u.exponents)))
                       for u in images]
        for i, d in enumerate(group.torsion):
            u = self.images[group.free_rank + i]
            if not (u ** d).is_one():
                raise GroupError(
                    f"torsion generator t{i + 1} has order {d} but image "
                    f"{format_scalar(u.to_scalar())} does not satisfy u^{d} = 1")
        self._cache: dict = {}

    @classmethod
    def trivial(cls, group: AbelianGroup, nparams: int = 0) -> "Character":
        return cls(group, [UnitMonomial.one(nparams)] * group.ngens)

    def __call__(self, g) -> UnitMonomial:
        return self.phi(g)

    def phi(self, g) -> UnitMonomial:
        g = self.group.reduce(g)
        u = self._cache.get(g)
        if u is None:
            u = UnitMonomial.one(self.nparams)
            for im, n in zip(self.images, g):
                if n:
                    u = u * (im ** n)
            self._cache[g] = u
        return u

    def value(self, g, power: int = 1) -> Scalar:
        """phi(g)^power as a Scalar."""
        return (self.phi(g) ** power).to_scalar()

    def conductor(self) -> int:
        return reduce(math.lcm, (u.cyclo.conductor for u in self.images), 1)

    # -- kernel -------------------------------------------------------------

    def _kernel_matrix(self):
        """Integer matrix A on Z^(n+1) whose kernel projects onto ker phi."""
        n = self.group.ngens
        M = math.lcm(2, self.conductor())
        roots, primes = [], []
        for u in self.images:
            c = u.cyclo
            found = None
            for a in range(M):
                rest = c * Cyclotomic.root(M, -a)
                if rest.is_rational():
                    found = (a, rest.coeffs[0])
                    break
            if found is None:
                raise GroupError(
                    f"kernel needs images of the form root-of-unity times rational, "
                    f"got {format_scalar(u.to_scalar())}")
            a, r = found
            sign, fac = _factor_rational(r)
            if sign < 0:
                a = (a + M // 2) % M
            roots.append(a)
            primes.append(fac)
        rows = []
        for i in range(self.nparams):
            rows.append([u.exponents[i] for u in self.images] + [0])
        for p in sorted(set().union(*primes)) if primes else []:
            rows.append([f.get(p, 0) for f in primes] + [0])
        rows.append(roots + [M])
        return rows, n

    def kernel(self) -> "Subgroup":
        rows, n = self._kernel_matrix()
        basis = integer_kernel(rows, n + 1)
        lattice = [row[:n] for row in basis]
        lattice += self.group.relation_rows()
        _row_hnf(lattice, n)
        gens = []
        for row in lattice:
            g = self.group.reduce(row)
            if any(g) and g not in gens:
                gens.append(g)
        return Subgroup(self.group, gens)

    def is_injective(self) -> bool:
        return self.kernel().is_trivial()

    def __repr__(self):
        ims = ", ".join(format_scalar(u.to_scalar()) for u in self.images)
        return f"Character({self.group!r}: {ims})"


def _to_unit(x) -> UnitMonomial:
    if isinstance(x, Scalar):
        return x.as_unit()
    if isinstance(x, Cyclotomic):
        return UnitMonomial(x)
    return Scalar.const(x).as_unit()


class Subgroup:
    """Subgroup of an AbelianGroup given by generators."""

    def __init__(self, group: AbelianGroup, gens):
        self.group = group
        self.gens = [group.reduce(g) for g in gens]
        self.gens = [g for g in self.gens if any(g)]
        self._quot = None

    def is_trivial(self) -> bool:
        return not self.gens

    def relation_rows(self):
        return self.group.relation_rows() + [list(g) for g in self.gens]

    def quotient(self) -> "QuotientMap":
        if self._quot is None:
            self._quot = QuotientMap(self)
        return self._quot

    def contains(self, g) -> bool:
        q = self.quotient()
        return not any(q.project(g))

    def elements(self, window: int = 0) -> list[tuple]:
        """Elements of H inside the sampled window of the ambient group."""
        return [g for g in self.group.elements(window) if self.contains(g)]

    def transversal(self, window: int = 0) -> list[tuple]:
        """Canonical coset representatives for quotient elements in a window."""
        q = self.quotient()
        return [q.lift(y) for y in q.target.elements(window)]

    def index(self):
        return self.quotient().target.order()

    def __repr__(self):
        return f"Subgroup({self.group!r}, gens={self.gens})"


class QuotientMap:
    """The projection Gamma -> Gamma/H in Smith coordinates, with canonical lifts."""

    def __init__(self, H: Subgroup):
        G = H.group
        n = G.ngens
        R = H.relation_rows()
        s = len(R)
        U, D, V = smith_normal_form(R, max(s, n), n)
        diag = [D[i][i] if i < len(D) else 0 for i in range(n)]
        self.V = V
        self.Vinv = _inverse_unimodular(V)
        self.diag = diag
        self.free_pos = [i for i, d in enumerate(diag) if d == 0]
        self.tors_pos = [i for i, d in enumerate(diag) if d >= 2]
        self.target = AbelianGroup(len(self.free_pos), [diag[i] for i in self.tors_pos])
        self.source = G
        self.subgroup = H

    def project(self, g) -> tuple:
        g = self.source.reduce(g)
        n = len(g)
        y = [sum(g[i] * self.V[i][j] for i in range(n)) for j in range(n)]
        return self.target.reduce([y[i] for i in self.free_pos] + [y[i] for i in self.tors_pos])

    def lift(self, y) -> tuple:
        y = self.target.reduce(y)
        n = self.source.ngens
        full = [0] * n
        for val, pos in zip(y, self.free_pos + self.tors_pos):
            full[pos] = val
        x = [sum(full[i] * self.Vinv[i][j] for i in range(n)) for j in range(n)]
        return self.source.reduce(x)

    def induced_character(self, chi: Character) -> Character:
        for h in self.subgroup.gens:
            if not chi.phi(h).is_one():
                raise GroupError("subgroup is not contained in the kernel")
        ims = [chi.phi(self.lift(e)) for e in self.target.generators()]
        return Character(self.target, ims)
