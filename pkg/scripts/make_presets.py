"""Regenerate the preset circuit files shipped in src/gsqc/presets."""

import math
from pathlib import Path

from gsqc.circuit import (
    Boost,
    Project,
    chain_circuit,
    dump_circuit,
    insert_teleportation,
    qft_circuit,
    single_qubit_circuit,
    two_qubit_circuit,
)

OUT = Path(__file__).resolve().parents[1] / "src" / "gsqc" / "presets"
ROOT10 = math.sqrt(10.0)

PRESETS = {
    "free-2row": lambda: single_qubit_circuit(2, None),
    "free-6row": lambda: single_qubit_circuit(6, None),
    "paper-1qubit-boost": lambda: single_qubit_circuit(6, Boost(10.0)),
    "single-project": lambda: single_qubit_circuit(6, Project(0, 10.0)),
    "paper-2qubit": lambda: two_qubit_circuit(4, 10.0),
    "two-qubit-mixed": lambda: two_qubit_circuit(4, 10.0, ("project", "boost")),
    "two-qubit-project": lambda: two_qubit_circuit(4, 10.0, ("project", "project")),
    "chain-3": lambda: chain_circuit(3, 0, 10.0),
    "chain-3-spaced": lambda: chain_circuit(3, 1, ROOT10),
    "qft-2": lambda: qft_circuit(2, ROOT10),
    "qft-2-plus": lambda: qft_circuit(2, ROOT10, inputs="+1"),
    "chain-2-teleport": lambda: insert_teleportation(chain_circuit(2, 0, ROOT10), "after-every-coupling"),
    "chain-3-teleport": lambda: insert_teleportation(chain_circuit(3, 0, ROOT10), "between-couplings"),
}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, make in PRESETS.items():
        dump_circuit(make(), OUT / f"{name}.json")
        print(f"wrote {name}")


if __name__ == "__main__":
    main()
