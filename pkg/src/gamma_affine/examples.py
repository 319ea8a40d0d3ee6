"""Catalogue of bundled example configs."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .config import SessionConfig, load_config, parse_config

__all__ = ["Example", "list_examples", "load_example", "example_path"]


@dataclass(frozen=True)
class Example:
    name: str
    anchor: str
    expect: str
    suites: tuple
    path: str


def _data():
    return resources.files("gamma_affine") / "data"


def example_path(name: str):
    p = _data() / f"{name}.cfg"
    if not p.is_file():
        raise KeyError(f"no bundled example {name!r}")
    return p


def load_example(name: str) -> SessionConfig:
    p = example_path(name)
    return parse_config(p.read_text(), f"{name}.cfg")


def list_examples() -> list[Example]:
    out = []
    for entry in sorted(_data().iterdir(), key=lambda e: e.name):
        if not entry.name.endswith(".cfg"):
            continue
        cfg = parse_config(entry.read_text(), entry.name)
        out.append(Example(cfg.name, cfg.anchor, cfg.expect, tuple(cfg.suites), str(entry)))
    return out
