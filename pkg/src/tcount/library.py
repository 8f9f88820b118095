"""Reference unitaries and hand-written circuits used by tests and the CLI."""

from __future__ import annotations

from tcount.channel import UnitaryMatrix
from tcount.circuit import Circuit

# Qubit 1 is the most significant bit of the basis index.
TOFFOLI_PERMUTATION = (0, 1, 2, 3, 4, 5, 7, 6)
FREDKIN_PERMUTATION = (0, 1, 2, 3, 4, 6, 5, 7)

TOFFOLI_CIRCUIT_TEXT = """\
# Toffoli with 7 T gates; controls 1 and 2, target 3
qubits 3
H 3
CNOT 2 3
Tdg 3
CNOT 1 3
T 3
CNOT 2 3
Tdg 3
CNOT 1 3
T 2
T 3
H 3
CNOT 1 2
T 1
Tdg 2
CNOT 1 2
"""


def toffoli() -> UnitaryMatrix:
    return UnitaryMatrix.permutation(TOFFOLI_PERMUTATION)


def fredkin() -> UnitaryMatrix:
    """Controlled swap of qubits 2 and 3, control on qubit 1."""
    return UnitaryMatrix.permutation(FREDKIN_PERMUTATION)


def toffoli_circuit() -> Circuit:
    return Circuit.parse(TOFFOLI_CIRCUIT_TEXT)


def fredkin_circuit() -> Circuit:
    """CNOT(3,2) Toffoli CNOT(3,2): a swap conjugated Toffoli, still 7 T gates."""
    outer = Circuit.parse("CNOT 3 2", n=3)
    return outer + toffoli_circuit() + outer


def fredkin_circuit_text() -> str:
    return "# Fredkin with 7 T gates; control 1, swaps 2 and 3\n" + fredkin_circuit().to_text()
