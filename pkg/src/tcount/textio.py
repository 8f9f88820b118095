"""Text input: exact unitary matrices and circuits.

Matrix files start with ``unitary n=<n>`` followed by 2^n rows of 2^n
entries ``a,b,c,d,k``, meaning (a + b w + c w^2 + d w^3) / sqrt2^k with
w = e^{i pi/4}. Entries are separated by whitespace; ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from tcount.channel import ChannelRep, UnitaryMatrix, channel_from_circuit, channel_from_matrix
from tcount.circuit import Circuit, CircuitParseError
from tcount.clifford import check_membership
from tcount.ring import CycloElem

_HEADER = re.compile(r"unitary\s+n\s*=\s*(\d+)\s*$", re.IGNORECASE)
_ENTRY = re.compile(r"-?\d+(,-?\d+){3},\d+$")


class MembershipError(ValueError):
    """Matrix input is not a unitary generated by Clifford and T gates."""


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if line.strip():
            yield lineno, raw, line


def is_matrix_text(text: str) -> bool:
    for _, _, line in _content_lines(text):
        return line.split()[0].lower() == "unitary"
    return False


def parse_matrix(text: str) -> UnitaryMatrix:
    lines = list(_content_lines(text))
    if not lines:
        raise CircuitParseError("empty matrix file", 1, 1)
    lineno, raw, line = lines[0]
    m = _HEADER.match(line.strip())
    if not m:
        raise CircuitParseError("expected header 'unitary n=<n>'", lineno, raw.index(line.strip()) + 1)
    n = int(m.group(1))
    if n < 1:
        raise CircuitParseError("n must be at least 1", lineno, m.start(1) + 1)
    N = 2**n
    rows = lines[1:]
    if len(rows) != N:
        where = rows[N] if len(rows) > N else lines[-1]
        raise CircuitParseError(f"expected {N} matrix rows, found {len(rows)}", where[0], 1)
    entries = []
    for lineno, raw, line in rows:
        tokens = line.split()
        if len(tokens) != N:
            raise CircuitParseError(f"expected {N} entries, found {len(tokens)}", lineno, 1)
        row = []
        start = 0
        for tok in tokens:
            col = raw.index(tok, start) + 1
            start = col - 1 + len(tok)
            if not _ENTRY.match(tok):
                raise CircuitParseError(f"entry {tok!r} is not 'a,b,c,d,k' with integers, k >= 0", lineno, col)
            row.append(CycloElem.parse(tok))
        entries.append(row)
    return UnitaryMatrix.from_entries(entries, check=False)


def format_matrix(U: UnitaryMatrix) -> str:
    lines = [f"unitary n={U.n}"]
    for row in U.entries():
        lines.append(" ".join(str(e) for e in row))
    return "\n".join(lines) + "\n"


@dataclass
class LoadedInput:
    kind: str  # "matrix" or "circuit"
    n: int
    channel: ChannelRep
    matrix: UnitaryMatrix | None = None
    circuit: Circuit | None = None


def load_text(text: str, n: int | None = None) -> LoadedInput:
    """Parse matrix or circuit text; matrix input must pass the membership test."""
    if is_matrix_text(text):
        U = parse_matrix(text)
        if n is not None and U.n != n:
            raise ValueError(f"matrix is for n={U.n} qubits, --qubits says {n}")
        verdict = check_membership(U)
        if not verdict:
            raise MembershipError(verdict.message)
        return LoadedInput("matrix", U.n, channel_from_matrix(U, check=False), matrix=U)
    circuit = Circuit.parse(text, n)
    return LoadedInput("circuit", circuit.n, channel_from_circuit(circuit), circuit=circuit)


def load_file(path: str | Path, n: int | None = None) -> LoadedInput:
    return load_text(Path(path).read_text(), n)
