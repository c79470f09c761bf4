"""Named circuits shipped as JSON files in the package."""

from __future__ import annotations

from importlib import resources

from gsqc.circuit import CircuitSpec, parse_circuit


def preset_names() -> list:
    return sorted(p.name[:-5] for p in resources.files("gsqc.presets").iterdir() if p.name.endswith(".json"))


def load_preset(name: str) -> CircuitSpec:
    path = resources.files("gsqc.presets") / f"{name}.json"
    if not path.is_file():
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(preset_names())}")
    return parse_circuit(path.read_text())
