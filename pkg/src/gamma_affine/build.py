"""Turn parsed config sections into presentations."""

from __future__ import annotations

from . import algebras
from .conformal import affine_conformal_data, conformal_from_table, heisenberg_conformal, virasoro
from .lie import FinitePresentation

__all__ = ["build_presentation", "build_conformal", "BUILDER_OPTIONS"]

BUILDER_OPTIONS = {
    "sl2_chevalley": (),
    "corrupted_sl2": (),
    "sl2_bad_form": (),
    "heisenberg": (),
    "heisenberg1": (),
    "sl3_diagonal": (),
    "gN_permutation": ("N",),
    "gl_torus": ("labels",),
    "gl_zk": ("labels",),
    "slN_shift": ("n", "labels"),
}


def _err(cfg, section, key, msg):
    from .config import ConfigError

    sec = getattr(cfg, section) or {}
    return ConfigError([(sec.get("lines", {}).get(key, 0), msg)])


def _labels(text):
    out = []
    for tok in text.split():
        try:
            out.append(int(tok))
        except ValueError:
            out.append(tok)
    return out


def _same_group(a, b) -> bool:
    return a.free_rank == b.free_rank and tuple(a.torsion) == tuple(b.torsion)


def build_presentation(cfg):
    sec = cfg.algebra
    opts = dict(sec["options"])
    name = opts.pop("builder", None)
    if name is None:
        return _table_presentation(cfg, sec, opts)
    if name not in algebras.BUILDERS:
        raise _err(cfg, "algebra", "builder", f"unknown builder {name!r}")
    allowed = BUILDER_OPTIONS[name]
    for k in opts:
        if k not in allowed:
            raise _err(cfg, "algebra", k, f"builder {name} has no option {k!r}")
    G, chi = cfg.group, cfg.character
    if name in ("gl_torus", "gl_zk", "slN_shift"):
        if G.torsion or G.free_rank < 1:
            raise _err(cfg, "algebra", "builder", f"{name} needs a free group Z^k")
        sample = _labels(opts["labels"]) if "labels" in opts else None
        if name == "gl_zk":
            if sample is not None and G.free_rank > 1:
                raise _err(cfg, "algebra", "labels", "labels for gl_zk with k > 1 are not supported")
            p = algebras.gl_zk(G.free_rank, sample=sample, character=chi, name=f"gl_z{G.free_rank}")
        elif G.free_rank != 1:
            raise _err(cfg, "algebra", "builder", f"{name} needs the group Z")
        elif name == "gl_torus":
            p = algebras.gl_torus(sample=sample, phi=chi.images[0])
        else:
            n = int(opts.get("n", 2))
            p = algebras.slN_shift(n, sample=sample)
            p.character = chi
        return p
    kwargs = {}
    if name == "gN_permutation":
        kwargs["N"] = int(opts.get("N", 2))
    p = algebras.BUILDERS[name](**kwargs)
    if not _same_group(p.group, G):
        raise _err(cfg, "algebra", "builder",
                   f"builder {name} acts through {p.group}, config declares {G}")
    p.group = G
    p.character = chi
    return p


def _table_presentation(cfg, sec, opts):
    if "labels" not in opts:
        raise _err(cfg, "algebra", "labels", "explicit algebra needs labels or a builder")
    labels = opts["labels"].split()

    def flat(terms, n):
        out = {}
        for (s, lab), c in terms.items():
            if s:
                from .config import ConfigError

                raise ConfigError([(n, "T-powers are only meaningful in [conformal]")])
            out[lab] = c
        return out

    brackets = {args: flat(t, n) for n, args, t in sec["brackets"]}
    form = {args: c for n, args, c in sec["form"]}
    G = cfg.group
    action = [dict() for _ in range(G.ngens)]
    for n, (gi, lab), t in sec["action"]:
        i = int(gi) - 1
        if not 0 <= i < G.ngens:
            from .config import ConfigError

            raise ConfigError([(n, f"group generator index {gi} out of range")])
        action[i][lab] = flat(t, n)
    return FinitePresentation(labels, brackets, form, action, G, cfg.character,
                              name=cfg.name or "table")


def build_conformal(cfg):
    sec = cfg.conformal
    opts = dict(sec["options"])
    name = opts.pop("builder", None)
    if name == "virasoro":
        c = cfg.scalar(opts["c"]) if "c" in opts else None
        return virasoro(c, skew_broken=opts.get("broken", "no") == "skew")
    if name == "heisenberg":
        return heisenberg_conformal()
    if name == "affine":
        shift = int(opts.get("twist_shift", 0))
        return affine_conformal_data(cfg.presentation, twist_shift=shift)
    if name is not None:
        raise _err(cfg, "conformal", "builder", f"unknown conformal builder {name!r}")
    if "generators" not in opts:
        raise _err(cfg, "conformal", "generators", "conformal section needs generators")
    gens = opts["generators"].split()
    torsion = opts.get("torsion", "").split()
    table = {(a, b, int(n)): t for _, (a, b, n), t in sec["products"]}
    G = cfg.group
    action = [dict() for _ in range(G.ngens)]
    for _, (gi, lab), t in sec["action"]:
        action[int(gi) - 1][lab] = {g: c for (s, g), c in t.items()}
    return conformal_from_table(gens, torsion, table, G, cfg.character,
                                action if G.ngens else None, name=cfg.name or "conformal")
