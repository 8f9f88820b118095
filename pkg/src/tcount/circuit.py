"""Gate lists over {H, T, S, Sdg, Tdg, X, Z, CNOT, SWAP} and their text format.

One gate per line, ``NAME q [q2]`` with 1-based qubits; ``#`` starts a comment.
An optional ``qubits <n>`` line fixes the register size.
"""

from __future__ import annotations

from dataclasses import dataclass, field

ONE_QUBIT = {"H", "T", "TDG", "S", "SDG", "X", "Z"}
TWO_QUBIT = {"CNOT", "SWAP"}
GATE_NAMES = ONE_QUBIT | TWO_QUBIT
_INVERSE = {"T": "TDG", "TDG": "T", "S": "SDG", "SDG": "S"}
_DISPLAY = {"TDG": "Tdg", "SDG": "Sdg"}


class CircuitParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        name = self.name.upper()
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if name not in GATE_NAMES:
            raise ValueError(f"unknown gate {self.name!r}")
        arity = 1 if name in ONE_QUBIT else 2
        if len(self.qubits) != arity:
            raise ValueError(f"{name} takes {arity} qubit(s), got {len(self.qubits)}")
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise ValueError(f"{name} needs two distinct qubits")

    def validate(self, n: int) -> None:
        for q in self.qubits:
            if not 1 <= q <= n:
                raise ValueError(f"qubit {q} out of range for n={n}")

    def inverse(self) -> Gate:
        return Gate(_INVERSE.get(self.name, self.name), self.qubits)

    def __str__(self) -> str:
        return " ".join([_DISPLAY.get(self.name, self.name), *map(str, self.qubits)])


def H(q: int) -> Gate:
    return Gate("H", (q,))


def S(q: int) -> Gate:
    return Gate("S", (q,))


def T(q: int) -> Gate:
    return Gate("T", (q,))


def CNOT(control: int, target: int) -> Gate:
    return Gate("CNOT", (control, target))


@dataclass
class Circuit:
    n: int
    gates: list[Gate] = field(default_factory=list)

    def __post_init__(self):
        if self.n is None:
            self.n = max((q for g in self.gates for q in g.qubits), default=1)
        for g in self.gates:
            g.validate(self.n)

    def t_count(self) -> int:
        return sum(g.name in ("T", "TDG") for g in self.gates)

    def inverse(self) -> Circuit:
        return Circuit(self.n, [g.inverse() for g in reversed(self.gates)])

    def __add__(self, other: Circuit) -> Circuit:
        if self.n != other.n:
            raise ValueError("cannot concatenate circuits on different registers")
        return Circuit(self.n, self.gates + other.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def to_text(self) -> str:
        lines = [f"qubits {self.n}"] + [str(g) for g in self.gates]
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> Circuit:
        gates = []
        positions = []
        declared = None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0]
            tokens = line.split()
            if not tokens:
                continue
            col = raw.index(tokens[0]) + 1
            head = tokens[0].upper()
            if head == "QUBITS":
                if len(tokens) != 2 or not tokens[1].isdigit():
                    raise CircuitParseError("expected 'qubits <n>'", lineno, col)
                declared = int(tokens[1])
                continue
            try:
                qubits = []
                for tok in tokens[1:]:
                    if not tok.lstrip("-").isdigit():
                        raise CircuitParseError(
                            f"qubit index {tok!r} is not an integer", lineno, raw.index(tok, col) + 1
                        )
                    qubits.append(int(tok))
                gates.append(Gate(head, tuple(qubits)))
                positions.append((lineno, col))
            except CircuitParseError:
                raise
            except ValueError as exc:
                raise CircuitParseError(str(exc), lineno, col) from None
        if declared is not None and n is not None and declared != n:
            raise ValueError(f"circuit declares {declared} qubits but {n} were requested")
        n = n if n is not None else declared
        if n is not None:
            for g, (lineno, col) in zip(gates, positions):
                try:
                    g.validate(n)
                except ValueError as exc:
                    raise CircuitParseError(str(exc), lineno, col) from None
        return cls(n, gates)
