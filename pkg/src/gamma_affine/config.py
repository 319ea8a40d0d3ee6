"""Line-oriented session configs.

Grammar (one statement per line, ``#`` starts a comment)::

    [meta]        name = ..., anchor = ..., expect = pass|fail
    [group]       free = <int>, torsion = <int> <int> ...
    [character]   conductor = <N>, params = <k>, images = <scalar> ; <scalar> ...
    [algebra]     builder = <name>, plus builder options as key = value
                  or an explicit table:
                  labels = e f h
                  bracket e f = h
                  form e f = 1
                  action 1 e = -1 : f        (image under group generator 1)
    [conformal]   builder = virasoro|heisenberg|affine  or
                  generators = L k
                  torsion = k
                  product L L 0 = T L
                  product L L 3 = q1/2 : k
    [module]      depth = <D>, level = <scalar>
    [windows]     <name> = <int>
    [suites]      run = <suite> <suite> ...

A term list is ``term ; term ; ...`` with ``term = [scalar :] [T^s] label``.
Scalars use the exact-scalar grammar with ``z`` = zeta_N and ``q1..qk``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .groups import AbelianGroup, Character, GroupError
from .scalars import ONE, Scalar, ScalarError, parse_scalar

__all__ = ["ConfigError", "SessionConfig", "parse_config", "load_config", "SECTIONS"]

SECTIONS = ("meta", "group", "character", "algebra", "conformal", "module", "windows", "suites")

DEFAULT_WINDOWS = {"lie": 4, "affine": 4, "modes": 3, "fields": 3, "quotient": 3,
                   "fixed": 4, "conformal": 4, "vec_degree": 2}


class ConfigError(ValueError):
    """Carries a list of (line, message) pairs."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(f"line {n}: {m}" if n else m for n, m in self.errors))


@dataclass
class SessionConfig:
    name: str = ""
    anchor: str = ""
    expect: str = "pass"
    group: AbelianGroup = None
    character: Character = None
    conductor: int = 1
    nparams: int = 0
    algebra: dict = field(default_factory=dict)
    conformal: dict = field(default_factory=dict)
    depth: int = 0
    level: Scalar = ONE
    windows: dict = field(default_factory=lambda: dict(DEFAULT_WINDOWS))
    suites: list = field(default_factory=list)
    source: str = ""
    _presentation: object = None
    _conformal: object = None

    def window(self, key: str) -> int:
        return self.windows.get(key, DEFAULT_WINDOWS.get(key, 3))

    def scalar(self, text: str) -> Scalar:
        return parse_scalar(text, self.conductor, self.nparams)

    @property
    def presentation(self):
        if self._presentation is None and self.algebra:
            from .build import build_presentation

            self._presentation = build_presentation(self)
        return self._presentation

    @property
    def conformal_presentation(self):
        if self._conformal is None and self.conformal:
            from .build import build_conformal

            self._conformal = build_conformal(self)
        return self._conformal

    def echo(self) -> dict:
        out = {"name": self.name, "group": str(self.group).replace(" ", ""),
               "conductor": self.conductor, "params": self.nparams}
        if self.character is not None:
            out["character"] = ";".join(str(x.to_scalar()) for x in self.character.images)
        if self.depth:
            out["depth"] = self.depth
            out["level"] = str(self.level)
        return out


_HEADER = re.compile(r"^\[([A-Za-z_-]+)\]$")
_KV = re.compile(r"^([A-Za-z_][\w.-]*)((?:\s+[^=\s]+)*)\s*=\s*(.*)$")


def parse_config(text: str, source: str = "<text>") -> SessionConfig:
    errors: list = []
    sections: dict = {}
    lines: dict = {}
    current = None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            current = m.group(1).lower()
            if current not in SECTIONS:
                errors.append((n, f"unknown section [{current}]"))
                current = None
                continue
            if current in sections:
                errors.append((n, f"duplicate section [{current}]"))
            sections.setdefault(current, [])
            lines[current] = n
            continue
        if current is None:
            errors.append((n, "statement outside of a section"))
            continue
        m = _KV.match(line)
        if not m:
            errors.append((n, f"expected 'key = value', got {line!r}"))
            continue
        key, args, value = m.group(1), m.group(2).split(), m.group(3).strip()
        sections[current].append((n, key, args, value))
    if "group" not in sections:
        errors.append((0, "missing group section"))
    if errors:
        raise ConfigError(errors)

    cfg = SessionConfig(source=source)
    _parse_meta(cfg, sections.get("meta", []), errors)
    _parse_group(cfg, sections["group"], errors)
    if not errors:
        _parse_character(cfg, sections.get("character", []), lines.get("character", 0), errors)
    if not errors:
        cfg.algebra = _table_section(cfg, sections.get("algebra", []), errors, "algebra")
        cfg.conformal = _table_section(cfg, sections.get("conformal", []), errors, "conformal")
        _parse_module(cfg, sections.get("module", []), errors)
        _parse_windows(cfg, sections.get("windows", []), errors)
        _parse_suites(cfg, sections.get("suites", []), errors)
    if not errors and not cfg.algebra and not cfg.conformal:
        errors.append((0, "missing algebra or conformal section"))
    if not errors:
        try:
            if cfg.algebra:
                cfg.presentation
            if cfg.conformal:
                cfg.conformal_presentation
        except ConfigError as e:
            errors.extend(e.errors)
        except (ValueError, KeyError, GroupError, ScalarError) as e:
            errors.append((lines.get("algebra", lines.get("conformal", 0)), f"cannot build: {e}"))
    if errors:
        raise ConfigError(errors)
    return cfg


def load_config(path) -> SessionConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise ConfigError([(0, f"cannot read {path}: {e.strerror}")])
    return parse_config(text, str(p))


def _int(value, n, errors, what, minimum=None):
    try:
        v = int(value)
    except ValueError:
        errors.append((n, f"{what} must be an integer, got {value!r}"))
        return None
    if minimum is not None and v < minimum:
        errors.append((n, f"{what} must be >= {minimum}"))
        return None
    return v


def _parse_meta(cfg, items, errors):
    for n, key, args, value in items:
        if key == "name":
            cfg.name = value
        elif key == "anchor":
            cfg.anchor = value
        elif key == "expect":
            if value not in ("pass", "fail"):
                errors.append((n, "expect must be 'pass' or 'fail'"))
            cfg.expect = value
        else:
            errors.append((n, f"unknown meta key {key!r}"))


def _parse_group(cfg, items, errors):
    free, torsion = 0, []
    for n, key, args, value in items:
        if key == "free":
            v = _int(value, n, errors, "free rank", 0)
            free = v if v is not None else 0
        elif key == "torsion":
            torsion = []
            for tok in value.split():
                v = _int(tok, n, errors, "torsion order", 2)
                if v is not None:
                    torsion.append(v)
        else:
            errors.append((n, f"unknown group key {key!r}"))
    cfg.group = AbelianGroup(free, torsion)


def _parse_character(cfg, items, header_line, errors):
    images_line, images_text = header_line, None
    for n, key, args, value in items:
        if key == "conductor":
            v = _int(value, n, errors, "conductor", 1)
            cfg.conductor = v or 1
        elif key == "params":
            v = _int(value, n, errors, "params", 0)
            cfg.nparams = v or 0
        elif key == "images":
            images_line, images_text = n, value
        else:
            errors.append((n, f"unknown character key {key!r}"))
    if errors:
        return
    G = cfg.group
    texts = [t.strip() for t in images_text.split(";")] if images_text else []
    if len(texts) != G.ngens:
        errors.append((images_line, f"character needs {G.ngens} images, got {len(texts)}"))
        return
    imgs = []
    for t in texts:
        try:
            imgs.append(parse_scalar(t, cfg.conductor, cfg.nparams))
        except ScalarError as e:
            errors.append((images_line, f"bad scalar {t!r}: {e}"))
            return
    try:
        cfg.character = Character(G, imgs)
    except (GroupError, ScalarError) as e:
        errors.append((images_line, str(e)))


def parse_terms(cfg, text: str) -> dict:
    """``[scalar :] [T^s] label ; ...`` -> {(s, label): Scalar}."""
    out: dict = {}
    text = text.strip()
    if text in ("", "0"):
        return out
    for part in text.split(";"):
        part = part.strip()
        if ":" in part:
            coef_text, rest = part.rsplit(":", 1)
            coef = cfg.scalar(coef_text.strip())
        else:
            coef, rest = ONE, part
        toks = rest.split()
        s = 0
        if len(toks) == 2:
            t = toks[0]
            if t == "T":
                s = 1
            elif t.startswith("T^"):
                s = int(t[2:])
            else:
                raise ValueError(f"expected T or T^s before the label, got {t!r}")
            toks = toks[1:]
        if len(toks) != 1:
            raise ValueError(f"cannot read term {part!r}")
        key = (s, toks[0])
        out[key] = out.get(key, Scalar()) + coef
    return {k: v for k, v in out.items() if v}


def _table_section(cfg, items, errors, what) -> dict:
    out: dict = {"options": {}, "brackets": [], "form": [], "action": [], "products": [],
                 "lines": {}}
    if not items:
        return {}
    for n, key, args, value in items:
        try:
            if key in ("bracket", "form", "product", "action"):
                need = {"bracket": 2, "form": 2, "product": 3, "action": 2}[key]
                if len(args) != need:
                    errors.append((n, f"{key} takes {need} arguments"))
                    continue
                if key == "form":
                    out["form"].append((n, tuple(args), cfg.scalar(value)))
                else:
                    out[{"bracket": "brackets", "product": "products", "action": "action"}[key]].append(
                        (n, tuple(args), parse_terms(cfg, value)))
            else:
                if args:
                    errors.append((n, f"{key} takes no arguments"))
                    continue
                out["options"][key] = value
                out["lines"][key] = n
        except (ValueError, ScalarError) as e:
            errors.append((n, str(e)))
    return out


def _parse_module(cfg, items, errors):
    for n, key, args, value in items:
        if key == "depth":
            v = _int(value, n, errors, "depth", 0)
            cfg.depth = v or 0
        elif key == "level":
            try:
                cfg.level = cfg.scalar(value)
            except ScalarError as e:
                errors.append((n, f"bad level: {e}"))
        else:
            errors.append((n, f"unknown module key {key!r}"))


def _parse_windows(cfg, items, errors):
    for n, key, args, value in items:
        v = _int(value, n, errors, f"window {key}", 0)
        if v is not None:
            cfg.windows[key] = v


def _parse_suites(cfg, items, errors):
    from .suites import SUITES

    for n, key, args, value in items:
        if key != "run":
            errors.append((n, f"unknown suites key {key!r}"))
            continue
        for s in value.split():
            if s not in SUITES:
                errors.append((n, f"unknown suite {s!r}"))
            else:
                cfg.suites.append(s)
