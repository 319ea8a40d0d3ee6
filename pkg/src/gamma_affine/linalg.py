"""Sparse vectors over Scalars and row reduction with unit pivots.

A vector is a plain dict ``key -> Scalar`` with no zero entries.
"""

from __future__ import annotations

from .scalars import ONE, Scalar, ScalarError, as_scalar

__all__ = [
    "order_key",
    "vadd",
    "vscale",
    "vaxpy",
    "vsub",
    "vclean",
    "vsorted",
    "Echelon",
    "nullspace",
    "rank",
]


def order_key(x):
    """Total order on the label types we use (ints, strings, tuples of those)."""
    if isinstance(x, tuple):
        return (2, tuple(order_key(y) for y in x))
    if isinstance(x, str):
        return (1, x)
    return (0, x)


def vaxpy(acc: dict, v: dict, c=ONE) -> dict:
    """acc += c*v in place; returns acc."""
    if not isinstance(c, Scalar):
        c = as_scalar(c)
    if not c:
        return acc
    unit = c == ONE
    for k, x in v.items():
        y = x if unit else c * x
        old = acc.get(k)
        if old is None:
            acc[k] = y
        else:
            s = old + y
            if s:
                acc[k] = s
            else:
                del acc[k]
    return acc


def vadd(*vs) -> dict:
    out: dict = {}
    for v in vs:
        vaxpy(out, v)
    return out


def vsub(a: dict, b: dict) -> dict:
    return vaxpy(dict(a), b, -ONE)


def vscale(v: dict, c) -> dict:
    c = as_scalar(c)
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def vclean(v: dict) -> dict:
    return {k: x for k, x in v.items() if x}


def vsorted(v: dict) -> list:
    return sorted(v.items(), key=lambda kv: order_key(kv[0]))


class Echelon:
    """Incrementally maintained reduced echelon form of a span.

    ``columns`` fixes the basis order.  The pivot of each row is its *last*
    column (in that order) holding a unit, so the earliest basis vectors
    survive as representatives of the quotient.
    """

    def __init__(self, columns):
        self.columns = list(columns)
        self.pos = {c: i for i, c in enumerate(self.columns)}
        self.rows: dict = {}  # pivot column -> row with coefficient 1 there

    def reduce(self, v: dict) -> dict:
        # rows are fully reduced, so one pass over the pivots present suffices
        v = dict(v)
        for col in [c for c in v if c in self.rows]:
            c = v.get(col)
            if c:
                vaxpy(v, self.rows[col], -c)
        return v

    def add(self, v: dict) -> bool:
        """Insert v into the span; returns True if the rank grew."""
        for k in v:
            if k not in self.pos:
                raise KeyError(f"unknown column {k!r}")
        r = self.reduce(v)
        if not r:
            return False
        piv = None
        for col in sorted(r, key=self.pos.__getitem__, reverse=True):
            if r[col].is_unit():
                piv = col
                break
        if piv is None:
            raise ScalarError("row reduction needs a unit pivot; none available")
        r = vscale(r, r[piv].inverse())
        for col, row in self.rows.items():
            c = row.get(piv)
            if c:
                vaxpy(row, r, -c)
        self.rows[piv] = r
        return True

    def rank(self) -> int:
        return len(self.rows)

    def pivots(self) -> list:
        return sorted(self.rows, key=self.pos.__getitem__)

    def free_columns(self) -> list:
        return [c for c in self.columns if c not in self.rows]


def rank(vectors, columns) -> int:
    e = Echelon(columns)
    for v in vectors:
        e.add(v)
    return e.rank()


def nullspace(rows, columns) -> list[dict]:
    """Basis of {x : row . x = 0 for every row}, rows given as dicts over columns."""
    e = Echelon(columns)
    for r in rows:
        e.add(r)
    basis = []
    for free in e.free_columns():
        x = {free: ONE}
        for piv, row in e.rows.items():
            c = row.get(free)
            if c:
                x[piv] = -c
        basis.append(x)
    return basis


def express(basis: list[dict], target: dict) -> dict:
    """Coefficients c with sum c[i]*basis[i] == target; raises if not in the span."""
    cols = [("#", i) for i in range(len(basis))]
    entries: list = []
    seen = set()
    for v in list(basis) + [target]:
        for k in v:
            if k not in seen:
                seen.add(k)
                entries.append(k)
    e = Echelon(cols + [("@", k) for k in entries])
    for i, v in enumerate(basis):
        row = {("@", k): c for k, c in v.items()}
        row[("#", i)] = ONE
        e.add(row)
    red = e.reduce({("@", k): c for k, c in target.items()})
    if any(k[0] == "@" for k in red):
        raise ValueError("target is not in the span of the basis")
    return {k[1]: -c for k, c in red.items()}


def format_key(k) -> str:
    if isinstance(k, tuple) and len(k) == 2 and isinstance(k[0], tuple):
        g, u = k
        return f"{u}" if not any(g) else f"T{_fmt_group(g)}{u}"
    if isinstance(k, tuple):
        return "(" + ",".join(str(x) for x in k) + ")"
    return str(k)


def _fmt_group(g) -> str:
    return "(" + ",".join(str(x) for x in g) + ")" if len(g) != 1 else f"({g[0]})"


def vformat(v: dict, keyfmt=format_key) -> str:
    if not v:
        return "0"
    parts = []
    for k, c in vsorted(v):
        cs = str(c)
        name = keyfmt(k)
        if cs == "1":
            parts.append(name)
        elif cs == "-1":
            parts.append("-" + name)
        elif len(c.terms) == 1:
            parts.append(f"{cs}*{name}")
        else:
            parts.append(f"({cs})*{name}")
    return " + ".join(parts).replace("+ -", "- ")
