"""Shipped model-graph fixtures.

Only models whose edge sets are pinned (or minimally constrained) by
published prose are shipped; entries reconstructed from partial
descriptions carry a "-compatible" suffix. Anything else is user-supplied
through model files. A catalog directory holds one ``<name>.model`` file
per entry; an optional ``strategy <name>`` line inside a file forces a
solver strategy (the pair-lock rule is only ever engaged this way).
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .graphs import ModelGraph, parse_model


def load_builtin() -> dict[str, ModelGraph]:
    """Models bundled with the package, keyed by name."""
    out: dict[str, ModelGraph] = {}
    root = resources.files(__package__) / "catalog"
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".model"):
            name = entry.name[: -len(".model")]
            out[name] = parse_model(entry.read_text(), name=name)
    return out


def load_dir(path: str | Path) -> dict[str, ModelGraph]:
    """Read every ``*.model`` file in a user catalog directory."""
    out: dict[str, ModelGraph] = {}
    for file in sorted(Path(path).glob("*.model")):
        out[file.stem] = parse_model(file.read_text(), name=file.stem)
    return out


def get(name: str) -> ModelGraph:
    models = load_builtin()
    if name not in models:
        known = ", ".join(sorted(models))
        raise KeyError(f"unknown catalog model {name!r}; shipped: {known}")
    return models[name]
