"""Named check suites over a SessionConfig."""

from __future__ import annotations

from .affine import (TwistedAffine, UntwistedAffine, fixed_point_compare, jacobi_window_check,
                     permutation_iso_check, quotient_iso_check, twist_automorphism_check,
                     well_definedness_check)
from .lie import check_axioms, ideal_identity_check, psi_fixed_point_check
from .report import Report
from .scalars import ONE

__all__ = ["SUITES", "run_suite", "run_default", "dims_oracle"]


def _need_lie(cfg, rep, suite):
    if cfg.presentation is None:
        rep.record(suite, "skipped", "", witness="no [algebra] section")
        return False
    return True


def suite_lie(cfg, rep):
    if not _need_lie(cfg, rep, "lie-axioms"):
        return
    p = cfg.presentation
    rep.extend(check_axioms(p))
    rep.extend(ideal_identity_check(p))


def suite_fixed_point(cfg, rep):
    if not _need_lie(cfg, rep, "fixed-point"):
        return
    p = cfg.presentation
    if p.kind != "finite":
        rep.record("fixed-point", "skipped", "", witness="needs a finite group and basis")
        return
    rep.extend(psi_fixed_point_check(p))
    r = fixed_point_compare(TwistedAffine(p), cfg.window("fixed"))
    rep.extend(r)
    dims = getattr(r, "dims", None)
    if dims:
        rep.echo["fixed_point_dims"] = ",".join(str(dims[m]) for m in sorted(dims))


def suite_affine(cfg, rep):
    if not _need_lie(cfg, rep, "affine"):
        return
    p = cfg.presentation
    ta = TwistedAffine(p)
    M = cfg.window("affine")
    rep.extend(jacobi_window_check(ta, M))
    rep.extend(well_definedness_check(ta, min(M, 2)))
    if p.kind == "finite" and p.group.ngens:
        rep.extend(twist_automorphism_check(UntwistedAffine(p), min(M, 2)))


def suite_quotient(cfg, rep):
    if not _need_lie(cfg, rep, "quotient-iso"):
        return
    rep.extend(quotient_iso_check(cfg.presentation, cfg.window("quotient")))


def dims_oracle(ta, depth, labels=None) -> list[int]:
    """Coefficients of prod_n (1 - x^n)^(-d_n), d_n = dim of degree -n."""
    coeffs = [1] + [0] * depth
    for n in range(1, depth + 1):
        d = len(ta.degree_basis(-n, labels))
        for _ in range(d):
            for i in range(n, depth + 1):
                coeffs[i] += coeffs[i - n]
    return coeffs


def suite_module(cfg, rep):
    from .vacuum import build_basis, check_module_relations

    if not _need_lie(cfg, rep, "module"):
        return
    D = cfg.depth or 4
    ta = TwistedAffine(cfg.presentation)
    mod = build_basis(ta, D, cfg.level)
    dims = mod.dims()
    oracle = dims_oracle(ta, D)
    rep.record("dims-oracle", dims == oracle, f"depth={D}",
               witness=f"basis {dims} vs oracle {oracle}",
               dims=",".join(map(str, dims)))
    rep.extend(check_module_relations(mod, cfg.window("modes")))


def _candidates(p, radius=3):
    G = p.group
    chi = p.character
    seen = []
    for g in G.elements(radius) if not G.is_finite() else G.elements():
        v = chi.value(g)
        if v not in seen:
            seen.append(v)
    return seen


def suite_fields(cfg, rep):
    from .fields import (LocalityError, affine_vertex_products, detect_gamma_locality,
                         generator_field, quasi_jacobi_check, verify_commutator_formula,
                         yE_local_crosscheck)
    from .vacuum import build_basis

    if not _need_lie(cfg, rep, "fields"):
        return
    p = cfg.presentation
    ta = TwistedAffine(p)
    D = cfg.depth or 4
    mod = build_basis(ta, D, cfg.level)
    M = cfg.window("fields")
    vd = min(cfg.window("vec_degree"), D)
    cands = _candidates(p)
    if p.kind == "finite":
        keys = ta.degree_basis(-1) or p.labels[:1]
        labels = keys
    else:
        labels = p.sample_labels
        keys = [p.key(u) for u in labels]
    pairs = [(keys[i], keys[j]) for i in range(len(keys)) for j in range(len(keys))][:4]
    for u, v in pairs:
        rep.extend(verify_commutator_formula(mod, u, v, M=M, vec_degree=vd))
    chosen = None
    for u in keys:
        lab = u if p.kind == "finite" else u[1]
        a = generator_field(mod, lab)
        try:
            cert = detect_gamma_locality(a, a, cands, 6, M, vd)
        except LocalityError as e:
            rep.record("locality", False, "", witness=str(e), subject=str(lab))
            return
        rep.record("locality", True, cert.window, certificate=str(cert), subject=str(lab))
        if all(r == ONE or (ONE - r).is_unit() for r in cert.roots):
            chosen = (u, a, cert)
            break
    if chosen is None:
        rep.record("yE-products", "skipped", "",
                   witness="no self-pair with unit root differences for the iota-expansion")
        return
    u, a, cert = chosen
    rep.extend(yE_local_crosscheck(a, a, cert, vec_degree=min(vd, 2)))
    prods = affine_vertex_products(mod, u, u, cert, -2)
    rep.extend(quasi_jacobi_check(a, a, cert.roots, prods, st_window=2, vec_degree=min(vd, 2)))


def suite_permutation(cfg, rep):
    from .affine import TwistedAffine as TA
    from .algebras import heisenberg
    from .fields import detect_gamma_locality, generate_field_space, generator_field, permutation_field
    from .scalars import zeta
    from .vacuum import build_basis

    if not _need_lie(cfg, rep, "permutation"):
        return
    N = cfg.group.order()
    rep.extend(permutation_iso_check(N, cfg.window("quotient")))
    mod = build_basis(TA(heisenberg()), 6, cfg.level)
    a = generator_field(mod, "a")
    F = [permutation_field(a, N, j) for j in range(N)]
    cands = [zeta(N, j) for j in range(N)]
    bad = []
    for i in range(N):
        for j in range(N):
            c = detect_gamma_locality(F[i], F[j], cands)
            if c.roots != (zeta(N, j - i),) * 2:
                bad.append(f"F{i},F{j}: {c}")
    rep.record("permutation-certificates", not bad, "modes=[-3,3] vec_degree=2",
               witness="; ".join(bad), pairs=N * N)
    rep.extend(generate_field_space(F, 2, cands))


def suite_conformal(cfg, rep):
    from .conformal import (LoopAlgebra, TwistedLoop, affine_comparison_check,
                            check_conformal_axioms, check_gamma_conformal_axioms,
                            loop_equivariance_check, loop_jacobi_check)

    c = cfg.conformal_presentation
    if c is None:
        rep.record("conformal", "skipped", "", witness="no [conformal] section")
        return
    M = cfg.window("conformal")
    rep.extend(check_conformal_axioms(c, T_bound=1 if c.kind == "finite" else 0))
    rep.extend(check_gamma_conformal_axioms(c))
    trivial = c.group.ngens == 0
    rep.extend(loop_jacobi_check(LoopAlgebra(c) if trivial else TwistedLoop(c),
                                 M if c.kind == "finite" else min(M, 3)))
    if not trivial and c.kind == "finite":
        rep.extend(loop_equivariance_check(c, min(M, 3)))
    if cfg.conformal["options"].get("builder") == "affine":
        rep.extend(affine_comparison_check(cfg.presentation, M))


SUITES = {
    "lie-axioms": suite_lie,
    "fixed-point": suite_fixed_point,
    "affine": suite_affine,
    "quotient-iso": suite_quotient,
    "module": suite_module,
    "fields": suite_fields,
    "permutation": suite_permutation,
    "conformal": suite_conformal,
}


def run_suite(cfg, name: str = "default", window=None, depth=None) -> Report:
    """Run one named suite, or every suite the config lists for ``default``."""
    if window is not None:
        for k in ("lie", "affine", "modes", "fields", "quotient", "fixed", "conformal"):
            cfg.windows[k] = window
    if depth is not None:
        cfg.depth = depth
    names = list(cfg.suites) if name == "default" else [name]
    if name != "default" and name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    rep = Report(f"{cfg.name or cfg.source} suite={name}")
    rep.echo.update(cfg.echo())
    rep.echo["suites"] = " ".join(names)
    rep.echo["expect"] = cfg.expect
    for n in names:
        SUITES[n](cfg, rep)
    return rep


def run_default(cfg) -> Report:
    return run_suite(cfg, "default")
