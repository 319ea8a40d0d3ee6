"""Exact coefficients: cyclotomic numbers and Laurent polynomials over them.

A :class:`Scalar` is an element of ``Q(zeta_N)[q1^{+-1}, ..., qk^{+-1}]``.  It is
stored flat, as a map ``(exponent_vector, zeta_power) -> rational`` where the
zeta powers range over the reduced basis ``1, z, ..., z^{phi(N)-1}`` of
``Q(zeta_N)``.  Values with different conductors are lifted to the lcm before
any binary operation.
"""

from __future__ import annotations

import math
import re
from functools import lru_cache
from typing import Iterable

from gmpy2 import mpq

__all__ = [
    "Cyclotomic",
    "Scalar",
    "UnitMonomial",
    "ScalarError",
    "cyclotomic_poly",
    "parse_scalar",
    "format_scalar",
    "zeta",
    "qvar",
    "ONE",
    "ZERO",
    "as_scalar",
]


class ScalarError(ValueError):
    """Structural or domain error in scalar arithmetic."""


# ---------------------------------------------------------------------------
# cyclotomic polynomial tables


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divexact(a, b):
    # integer polynomials, b monic; coefficients low degree first
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1]
        q[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] -= c * y
    assert not any(a[: len(b) - 1])
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    if n < 1:
        raise ScalarError(f"conductor must be positive, got {n}")
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _poly_divexact(num, list(cyclotomic_poly(d)))
    return tuple(num)


@lru_cache(maxsize=None)
def _degree(n: int) -> int:
    return len(cyclotomic_poly(n)) - 1


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[tuple[int, mpq], ...], ...]:
    """Row p (0 <= p < n) is z^p reduced mod Phi_n, as sparse (index, coeff)."""
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    rows = []
    cur = [mpq(0)] * deg
    cur[0] = mpq(1)
    for _ in range(n):
        rows.append(tuple((i, c) for i, c in enumerate(cur) if c))
        # multiply by z
        top = cur[-1]
        cur = [mpq(0)] + cur[:-1]
        if top:
            for i in range(deg):
                cur[i] -= top * phi[i]
    return tuple(rows)


@lru_cache(maxsize=None)
def _trace_weight(n: int, j: int) -> mpq:
    # Tr(z^j) / phi(n), which is independent of the ambient conductor
    g = math.gcd(j, n)
    m = n // g
    return mpq(_mobius(m), _totient(m))


def _mobius(m: int) -> int:
    res, p = 1, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            res = -res
        p += 1
    return -res if m > 1 else res


def _totient(m: int) -> int:
    res, p = m, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            res -= res // p
        p += 1
    if m > 1:
        res -= res // m
    return res


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _to_q(x) -> mpq:
    if isinstance(x, str):
        return mpq(x)
    return mpq(x)


# ---------------------------------------------------------------------------
# Cyclotomic


class Cyclotomic:
    """An element of Q(zeta_N), reduced modulo the N-th cyclotomic polynomial."""

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor: int, coeffs: Iterable = ()):
        deg = _degree(conductor)
        raw = [_to_q(c) for c in coeffs]
        if len(raw) > deg:
            raw = _reduce_dense(conductor, raw)
        raw = raw + [mpq(0)] * (deg - len(raw))
        self.conductor = conductor
        self.coeffs = tuple(raw)

    @classmethod
    def rational(cls, x) -> "Cyclotomic":
        return cls(1, [x])

    @classmethod
    def root(cls, n: int, power: int = 1) -> "Cyclotomic":
        """zeta_n ** power."""
        row = _power_table(n)[power % n]
        c = [mpq(0)] * _degree(n)
        for i, v in row:
            c[i] = v
        return cls(n, c)

    def lift(self, m: int) -> "Cyclotomic":
        if m == self.conductor:
            return self
        if m % self.conductor:
            raise ScalarError(f"cannot lift conductor {self.conductor} to {m}")
        step = m // self.conductor
        table = _power_table(m)
        out = [mpq(0)] * _degree(m)
        for j, c in enumerate(self.coeffs):
            if c:
                for i, v in table[(j * step) % m]:
                    out[i] += c * v
        return Cyclotomic(m, out)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def _pair(self, other: "Cyclotomic"):
        if self.conductor == other.conductor:
            return self, other
        m = _lcm(self.conductor, other.conductor)
        return self.lift(m), other.lift(m)

    def __add__(self, other):
        other = _as_cyclo(other)
        a, b = self._pair(other)
        return Cyclotomic(a.conductor, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.conductor, [-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-_as_cyclo(other))

    def __rsub__(self, other):
        return _as_cyclo(other) - self

    def __mul__(self, other):
        other = _as_cyclo(other)
        a, b = self._pair(other)
        n = a.conductor
        table = _power_table(n)
        out = [mpq(0)] * _degree(n)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        xy = x * y
                        for k, v in table[(i + j) % n]:
                            out[k] += xy * v
        return Cyclotomic(n, out)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ScalarError("zero has no inverse")
        n = self.conductor
        if self.is_rational():
            return Cyclotomic(n, [1 / self.coeffs[0]])
        # extended Euclid: find s with self * s = 1 mod Phi_n
        r0, r1 = _trim([mpq(c) for c in cyclotomic_poly(n)]), _trim(list(self.coeffs))
        s0, s1 = [mpq(0)], [mpq(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _trim(_poly_sub(s0, _poly_mul(q, s1)))
        if r1[0] == 0:
            raise ScalarError("cyclotomic inversion failed")
        inv = 1 / r1[0]
        return Cyclotomic(n, [c * inv for c in s1])

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = Cyclotomic(self.conductor, [1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, mpq)) or type(other).__name__ == "Fraction":
            other = Cyclotomic.rational(other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._pair(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash(self.normalized_trace())

    def normalized_trace(self) -> mpq:
        n = self.conductor
        return sum((c * _trace_weight(n, j) for j, c in enumerate(self.coeffs) if c), mpq(0))

    def __repr__(self):
        return f"Cyclotomic({self.conductor}, {[str(c) for c in self.coeffs]})"


def _as_cyclo(x) -> Cyclotomic:
    if isinstance(x, Cyclotomic):
        return x
    return Cyclotomic.rational(x)


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p or [mpq(0)]


def _poly_sub(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


def _poly_divmod(a, b):
    a = _trim(a)
    b = _trim(b)
    if len(a) < len(b):
        return [mpq(0)], a
    q = [mpq(0)] * (len(a) - len(b) + 1)
    a = list(a)
    lead = b[-1]
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] -= c * y
    return q, _trim(a[: len(b) - 1] or [mpq(0)])


def _reduce_dense(n, coeffs):
    table = _power_table(n)
    out = [mpq(0)] * _degree(n)
    for j, c in enumerate(coeffs):
        if c:
            for i, v in table[j % n]:
                out[i] += c * v
    return out


# ---------------------------------------------------------------------------
# Scalar


class Scalar:
    """Sparse Laurent polynomial in q1..qk with cyclotomic coefficients.

    ``terms`` maps ``(exponents, zeta_power)`` to a nonzero rational.  ``nparams``
    is k; constants may carry ``nparams == 0`` and combine with anything.
    """

    __slots__ = ("conductor", "nparams", "terms", "_hash")

    def __init__(self, terms=None, conductor: int = 1, nparams: int = 0, _canonical=False):
        self.conductor = conductor
        self.nparams = nparams
        self._hash = None
        if terms is None:
            self.terms = {}
        elif _canonical:
            self.terms = terms
        else:
            self.terms = _canonicalize(terms, conductor, nparams)

    # -- constructors -------------------------------------------------------

    @classmethod
    def const(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, Cyclotomic):
            return cls.from_cyclotomic(x)
        q = _to_q(x)
        if not q:
            return cls()
        return cls({((), 0): q}, 1, 0, _canonical=True)

    @classmethod
    def from_cyclotomic(cls, c: Cyclotomic, exponents: tuple = ()) -> "Scalar":
        terms = {(tuple(exponents), j): v for j, v in enumerate(c.coeffs) if v}
        return cls(terms, c.conductor, len(exponents), _canonical=True)

    @classmethod
    def monomial(cls, exponents, coeff=1) -> "Scalar":
        exps = tuple(int(e) for e in exponents)
        c = _as_cyclo(coeff) if not isinstance(coeff, Cyclotomic) else coeff
        return cls.from_cyclotomic(c, exps)

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e, _ in self.terms)

    def exponents(self) -> list[tuple]:
        return sorted({e for e, _ in self.terms})

    def coefficient(self, exponents) -> Cyclotomic:
        exps = tuple(exponents)
        deg = _degree(self.conductor)
        c = [mpq(0)] * deg
        for (e, j), v in self.terms.items():
            if _pad(e, len(exps)) == exps:
                c[j] = v
        return Cyclotomic(self.conductor, c)

    def is_unit(self) -> bool:
        return bool(self.terms) and len({e for e, _ in self.terms}) == 1

    def as_unit(self) -> "UnitMonomial":
        if not self.is_unit():
            raise ScalarError(f"{format_scalar(self)} is not a unit")
        e = next(iter(self.terms))[0]
        return UnitMonomial(self.coefficient(e), e)

    def as_rational(self):
        if not self.terms:
            return mpq(0)
        if len(self.terms) == 1:
            (e, j), v = next(iter(self.terms.items()))
            if j == 0 and not any(e):
                return v
        raise ScalarError(f"{format_scalar(self)} is not rational")

    def is_rational(self) -> bool:
        try:
            self.as_rational()
        except ScalarError:
            return False
        return True

    # -- alignment ----------------------------------------------------------

    def _align(self, other: "Scalar"):
        a, b = self, other
        if a.nparams != b.nparams:
            k = max(a.nparams, b.nparams)
            if a.nparams < k:
                if a.terms and not a.is_constant():
                    raise ScalarError(
                        f"parameter count mismatch: {a.nparams} vs {b.nparams}")
                a = a.with_nparams(k)
            if b.nparams < k:
                if b.terms and not b.is_constant():
                    raise ScalarError(
                        f"parameter count mismatch: {a.nparams} vs {b.nparams}")
                b = b.with_nparams(k)
        if a.conductor != b.conductor:
            m = _lcm(a.conductor, b.conductor)
            a, b = a.lift(m), b.lift(m)
        return a, b

    def with_nparams(self, k: int) -> "Scalar":
        if k == self.nparams:
            return self
        if k < self.nparams:
            if any(any(e[k:]) for e, _ in self.terms):
                raise ScalarError("cannot drop parameters that are in use")
            terms = {(e[:k], j): v for (e, j), v in self.terms.items()}
        else:
            terms = {(_pad(e, k), j): v for (e, j), v in self.terms.items()}
        return Scalar(terms, self.conductor, k, _canonical=True)

    def lift(self, m: int) -> "Scalar":
        if m == self.conductor:
            return self
        if m % self.conductor:
            raise ScalarError(f"cannot lift conductor {self.conductor} to {m}")
        if _degree(self.conductor) == 1:
            # rational coefficients only: basis element 1 stays 1
            return Scalar(dict(self.terms), m, self.nparams, _canonical=True)
        step = m // self.conductor
        table = _power_table(m)
        out: dict = {}
        for (e, j), v in self.terms.items():
            for i, w in table[(j * step) % m]:
                key = (e, i)
                out[key] = out.get(key, 0) + v * w
        return Scalar({k: v for k, v in out.items() if v}, m, self.nparams, _canonical=True)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.const(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        a, b = self._align(other)
        out = dict(a.terms)
        for key, v in b.terms.items():
            w = out.get(key)
            if w is None:
                out[key] = v
            else:
                w = w + v
                if w:
                    out[key] = w
                else:
                    del out[key]
        return Scalar(out, a.conductor, a.nparams, _canonical=True)

    __radd__ = __add__

    def __neg__(self):
        return Scalar({k: -v for k, v in self.terms.items()}, self.conductor, self.nparams,
                      _canonical=True)

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return Scalar.const(other) - self

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, mpq)) or type(other).__name__ == "Fraction":
                q = mpq(other)
                if not q:
                    return Scalar()
                if q == 1:
                    return self
                return Scalar({k: v * q for k, v in self.terms.items()}, self.conductor,
                              self.nparams, _canonical=True)
            other = Scalar.const(other)
        if not self.terms or not other.terms:
            return Scalar()
        a, b = self._align(other)
        n = a.conductor
        out: dict = {}
        if _degree(n) == 1:
            for (e1, _), v1 in a.terms.items():
                for (e2, _), v2 in b.terms.items():
                    e = tuple(x + y for x, y in zip(e1, e2))
                    key = (e, 0)
                    out[key] = out.get(key, 0) + v1 * v2
        else:
            table = _power_table(n)
            for (e1, j1), v1 in a.terms.items():
                for (e2, j2), v2 in b.terms.items():
                    e = tuple(x + y for x, y in zip(e1, e2))
                    vv = v1 * v2
                    for i, w in table[(j1 + j2) % n]:
                        key = (e, i)
                        out[key] = out.get(key, 0) + vv * w
        return Scalar({k: v for k, v in out.items() if v}, n, a.nparams, _canonical=True)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        return self.as_unit().inverse().to_scalar()

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.const(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar.const(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = ONE
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.const(other)
            except (TypeError, ValueError):
                return NotImplemented
        if not self.terms or not other.terms:
            return not self.terms and not other.terms
        try:
            a, b = self._align(other)
        except ScalarError:
            return False
        return a.terms == b.terms

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self._hash is None:
            n = self.conductor
            acc: dict = {}
            for (e, j), v in self.terms.items():
                e = _strip(e)
                acc[e] = acc.get(e, 0) + v * _trace_weight(n, j)
            self._hash = hash(frozenset((e, t) for e, t in acc.items() if t))
        return self._hash

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)

    def sort_key(self):
        """A deterministic (not algebraic) ordering key."""
        return format_scalar(self)


def _pad(e: tuple, k: int) -> tuple:
    if len(e) >= k:
        return e
    return e + (0,) * (k - len(e))


def _strip(e: tuple) -> tuple:
    e = list(e)
    while e and e[-1] == 0:
        e.pop()
    return tuple(e)


def _canonicalize(terms, conductor, nparams):
    deg = _degree(conductor)
    table = _power_table(conductor)
    out: dict = {}
    for (e, j), v in terms.items():
        v = _to_q(v)
        if not v:
            continue
        e = _pad(tuple(e), nparams)
        if len(e) != nparams:
            raise ScalarError("exponent vector longer than parameter count")
        if 0 <= j < deg:
            out[(e, j)] = out.get((e, j), 0) + v
        else:
            for i, w in table[j % conductor]:
                out[(e, i)] = out.get((e, i), 0) + v * w
    return {k: v for k, v in out.items() if v}


def as_scalar(x) -> Scalar:
    return x if isinstance(x, Scalar) else Scalar.const(x)


ONE = Scalar.const(1)
ZERO = Scalar()


def zeta(n: int, power: int = 1) -> Scalar:
    """zeta_n ** power as a Scalar."""
    return Scalar.from_cyclotomic(Cyclotomic.root(n, power))


def qvar(i: int, nparams: int, power: int = 1) -> Scalar:
    """The formal parameter q_i (1-based) among ``nparams`` parameters."""
    if not 1 <= i <= nparams:
        raise ScalarError(f"q{i} out of range for {nparams} parameters")
    e = [0] * nparams
    e[i - 1] = power
    return Scalar.monomial(e)


# ---------------------------------------------------------------------------
# UnitMonomial


class UnitMonomial:
    """A unit of the scalar ring: nonzero cyclotomic times a Laurent monomial."""

    __slots__ = ("cyclo", "exponents")

    def __init__(self, cyclo: Cyclotomic, exponents=()):
        if cyclo.is_zero():
            raise ScalarError("unit monomial with zero coefficient")
        self.cyclo = cyclo
        self.exponents = tuple(int(e) for e in exponents)

    @classmethod
    def one(cls, nparams: int = 0) -> "UnitMonomial":
        return cls(Cyclotomic.rational(1), (0,) * nparams)

    def to_scalar(self) -> Scalar:
        return Scalar.from_cyclotomic(self.cyclo, self.exponents)

    def __mul__(self, other: "UnitMonomial") -> "UnitMonomial":
        k = max(len(self.exponents), len(other.exponents))
        e = tuple(x + y for x, y in zip(_pad(self.exponents, k), _pad(other.exponents, k)))
        return UnitMonomial(self.cyclo * other.cyclo, e)

    def inverse(self) -> "UnitMonomial":
        return UnitMonomial(self.cyclo.inverse(), tuple(-e for e in self.exponents))

    def __pow__(self, m: int) -> "UnitMonomial":
        return UnitMonomial(self.cyclo ** m, tuple(m * e for e in self.exponents))

    def is_one(self) -> bool:
        return not any(self.exponents) and self.cyclo == 1

    def __eq__(self, other):
        if isinstance(other, UnitMonomial):
            other = other.to_scalar()
        return self.to_scalar() == other

    def __hash__(self):
        return hash(self.to_scalar())

    def __repr__(self):
        return f"UnitMonomial({format_scalar(self.to_scalar())!r})"


# ---------------------------------------------------------------------------
# text form:  3/2*z^2*q1^-1 + 1


def format_scalar(s: Scalar, conductor: int | None = None) -> str:
    """Render ``s``; ``z`` means zeta of ``conductor`` (default: s's own)."""
    if not s.terms:
        return "0"
    if conductor is not None and conductor != s.conductor:
        s = s.lift(_lcm(conductor, s.conductor))
        if s.conductor != conductor:
            raise ScalarError(f"scalar needs conductor {s.conductor}, not {conductor}")
    parts = []
    for (e, j), v in sorted(s.terms.items(), key=lambda kv: (_strip(kv[0][0]), kv[0][1]),
                            reverse=True):
        factors = []
        if j:
            factors.append("z" if j == 1 else f"z^{j}")
        for i, p in enumerate(e):
            if p:
                factors.append(f"q{i + 1}" if p == 1 else f"q{i + 1}^{p}")
        mag = abs(v)
        sign = "-" if v < 0 else "+"
        if factors:
            body = "*".join(factors) if mag == 1 else f"{mag}*" + "*".join(factors)
        else:
            body = str(mag)
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|(z)|(q\d+)|(\^)|(\*)|(/)|(\+)|(-)|(\()|(\)))")


def parse_scalar(text: str, conductor: int = 1, nparams: int = 0) -> Scalar:
    """Parse the scalar grammar: sums/products/powers of rationals, ``z``, ``qi``.

    ``z`` denotes zeta_conductor.  Integer powers may be negative for units.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ScalarError(f"unexpected character at {pos} in {text!r}")
        pos = m.end()
        kinds = ("num", "z", "q", "^", "*", "/", "+", "-", "(", ")")
        for kind, val in zip(kinds, m.groups()):
            if val is not None:
                tokens.append((kind, val))
                break
    parser = _ScalarParser(tokens, conductor, nparams, text)
    value = parser.expr()
    if parser.i != len(tokens):
        raise ScalarError(f"trailing input in {text!r}")
    return value


class _ScalarParser:
    def __init__(self, tokens, conductor, nparams, text):
        self.toks = tokens
        self.i = 0
        self.n = conductor
        self.k = nparams
        self.text = text

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, kind=None):
        if self.i >= len(self.toks):
            raise ScalarError(f"unexpected end of {self.text!r}")
        tok = self.toks[self.i]
        if kind and tok[0] != kind:
            raise ScalarError(f"expected {kind!r} in {self.text!r}")
        self.i += 1
        return tok

    def expr(self):
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        val = self.term()
        val = -val if sign < 0 else val
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.power()
        while self.peek() in ("*", "/"):
            op = self.take()[0]
            rhs = self.power()
            val = val * rhs if op == "*" else val / rhs
        return val

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            exp = int(self.take("num")[1])
            return base ** (sign * exp)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return Scalar.const(mpq(val))
        if kind == "z":
            return zeta(self.n)
        if kind == "q":
            return qvar(int(val[1:]), self.k)
        if kind == "(":
            v = self.expr()
            self.take(")")
            return v
        if kind == "-":
            return -self.power()
        raise ScalarError(f"unexpected {val!r} in {self.text!r}")
