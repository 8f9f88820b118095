"""Clifford recognition and synthesis, Pauli conjugators, and J_n membership."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tcount.channel import ChannelRep, NotUnitaryError, UnitaryMatrix
from tcount.circuit import CNOT, Circuit, Gate, H, S
from tcount.pauli import Pauli, SignedPauli, commutes, product_phase, real_sign
from tcount.ring import CycloElem, _omega_product


class SymplecticError(ValueError):
    """Generator images do not satisfy the Pauli commutation relations."""


def _conjugate_bits(name: str, qubits: tuple[int, ...], x: int, z: int, r: int):
    """Aaronson-Gottesman update of P -> g P g^dag on bits and sign bit r."""
    if name in ("H", "S", "SDG", "X", "Z"):
        a = qubits[0] - 1
        xa, za = (x >> a) & 1, (z >> a) & 1
        if name == "H":
            r ^= xa & za
            x = (x & ~(1 << a)) | (za << a)
            z = (z & ~(1 << a)) | (xa << a)
        elif name == "S":
            r ^= xa & za
            z ^= xa << a
        elif name == "SDG":
            r ^= xa & (za ^ 1)
            z ^= xa << a
        elif name == "X":
            r ^= za
        else:
            r ^= xa
        return x, z, r
    a, b = qubits[0] - 1, qubits[1] - 1
    xa, za, xb, zb = (x >> a) & 1, (z >> a) & 1, (x >> b) & 1, (z >> b) & 1
    if name == "CNOT":
        r ^= xa & zb & (xb ^ za ^ 1)
        x ^= xa << b
        z ^= zb << a
        return x, z, r
    if name == "SWAP":
        x = (x & ~((1 << a) | (1 << b))) | (xb << a) | (xa << b)
        z = (z & ~((1 << a) | (1 << b))) | (zb << a) | (za << b)
        return x, z, r
    raise ValueError(f"{name} is not a Clifford gate")


def conjugate_by_gate(gate: Gate, p: SignedPauli) -> SignedPauli:
    x, z, r = _conjugate_bits(gate.name, gate.qubits, p.pauli.x, p.pauli.z, int(p.sign == -1))
    return SignedPauli(Pauli(p.pauli.n, x, z), -1 if r else 1)


def conjugate_by_circuit(circuit: Circuit, p: SignedPauli) -> SignedPauli:
    """C p C^dag where C is the circuit's unitary (gates applied in order)."""
    for g in circuit.gates:
        p = conjugate_by_gate(g, p)
    return p


@dataclass(frozen=True)
class CliffordTableau:
    """Images of X_(i) and Z_(i) under conjugation by a Clifford."""

    n: int
    x_images: tuple[SignedPauli, ...]
    z_images: tuple[SignedPauli, ...]

    @classmethod
    def identity(cls, n: int) -> CliffordTableau:
        return cls(
            n,
            tuple(SignedPauli(Pauli.single(n, "X", q)) for q in range(1, n + 1)),
            tuple(SignedPauli(Pauli.single(n, "Z", q)) for q in range(1, n + 1)),
        )

    @classmethod
    def from_circuit(cls, circuit: Circuit) -> CliffordTableau:
        tab = cls.identity(circuit.n)
        for g in circuit.gates:
            tab = tab.apply_gate(g)
        return tab

    def validate(self) -> None:
        gens = [p.pauli for p in self.x_images + self.z_images]
        if len(self.x_images) != self.n or len(self.z_images) != self.n:
            raise SymplecticError("tableau needs n X images and n Z images")
        for i, p in enumerate(gens):
            for j, q in enumerate(gens):
                expect_anti = abs(i - j) == self.n
                if commutes(p, q) == expect_anti:
                    raise SymplecticError(f"generator images {i} and {j} break commutation relations")

    def conjugate(self, p: Pauli | SignedPauli) -> SignedPauli:
        """Image C P C^dag of an arbitrary signed Pauli."""
        sign = 1
        if isinstance(p, SignedPauli):
            sign, p = p.sign, p.pauli
        # P(x, z) = i^{|x&z|} X^x Z^z
        e = (p.x & p.z).bit_count() + (0 if sign == 1 else 2)
        cx = cz = 0
        factors = [self.x_images[q] for q in range(self.n) if (p.x >> q) & 1]
        factors += [self.z_images[q] for q in range(self.n) if (p.z >> q) & 1]
        for f in factors:
            e += product_phase(cx, cz, f.pauli.x, f.pauli.z) + (0 if f.sign == 1 else 2)
            cx ^= f.pauli.x
            cz ^= f.pauli.z
        return SignedPauli(Pauli(self.n, cx, cz), real_sign(e))

    def compose(self, inner: CliffordTableau) -> CliffordTableau:
        """Tableau of ``self . inner`` (inner applied first)."""
        return CliffordTableau(
            self.n,
            tuple(self.conjugate(p) for p in inner.x_images),
            tuple(self.conjugate(p) for p in inner.z_images),
        )

    def apply_gate(self, gate: Gate) -> CliffordTableau:
        """Tableau of ``gate . self``."""
        return CliffordTableau(
            self.n,
            tuple(conjugate_by_gate(gate, p) for p in self.x_images),
            tuple(conjugate_by_gate(gate, p) for p in self.z_images),
        )

    def channel(self) -> ChannelRep:
        size = 4**self.n
        A = np.zeros((size, size), np.int64)
        for s in range(size):
            img = self.conjugate(Pauli.from_index(self.n, s))
            A[img.pauli.index, s] = img.sign
        return ChannelRep(self.n, A, np.zeros_like(A), 0, reduced=True)

    def is_identity(self) -> bool:
        return self == CliffordTableau.identity(self.n)

    def __str__(self) -> str:
        rows = [f"X{q + 1} -> {p}" for q, p in enumerate(self.x_images)]
        rows += [f"Z{q + 1} -> {p}" for q, p in enumerate(self.z_images)]
        return "\n".join(rows)


def is_clifford(W: ChannelRep) -> CliffordTableau | None:
    mono = W.monomial
    if mono is None:
        return None
    perm, sign = mono
    n = W.n
    row_of = np.argsort(perm)  # column s has its nonzero at row row_of[s]

    def image(s: int) -> SignedPauli:
        r = int(row_of[s])
        return SignedPauli(Pauli.from_index(n, r), int(sign[r]))

    return CliffordTableau(
        n,
        tuple(image(1 << q) for q in range(n)),
        tuple(image(1 << (q + n)) for q in range(n)),
    )


def synthesize_clifford(tableau: CliffordTableau) -> Circuit:
    """Circuit over {H, S, CNOT} whose channel equals the tableau's.

    Reduces the tableau to the identity one qubit at a time, then inverts the
    reducing gate list.
    """
    tableau.validate()
    n = tableau.n
    cur = tableau
    ops: list[Gate] = []

    def emit(*gates: Gate) -> None:
        nonlocal cur
        for g in gates:
            cur = cur.apply_gate(g)
            ops.append(g)

    def letter(p: SignedPauli, q: int) -> tuple[int, int]:
        return (p.pauli.x >> (q - 1)) & 1, (p.pauli.z >> (q - 1)) & 1

    for i in range(1, n + 1):
        # image of X_i -> +-X_i
        for j in range(i, n + 1):
            bx, bz = letter(cur.x_images[i - 1], j)
            if bz and not bx:
                emit(H(j))
            elif bz and bx:
                emit(S(j))
        support = [j for j in range(i, n + 1) if letter(cur.x_images[i - 1], j)[0]]
        if not support:
            raise SymplecticError("X image vanished on the remaining qubits")
        if i not in support:
            emit(CNOT(support[0], i))
        for j in support:
            if j != i:
                emit(CNOT(i, j))
        # image of Z_i -> +-Z_i, leaving X_i alone
        for j in range(i + 1, n + 1):
            bx, bz = letter(cur.z_images[i - 1], j)
            if bx and not bz:
                emit(H(j))
            elif bx and bz:
                emit(S(j), H(j))
        for j in range(i + 1, n + 1):
            if letter(cur.z_images[i - 1], j)[1]:
                emit(CNOT(j, i))
        if letter(cur.z_images[i - 1], i)[0]:
            emit(H(i), S(i), H(i))
        if cur.x_images[i - 1].sign == -1:
            emit(S(i), S(i))
        if cur.z_images[i - 1].sign == -1:
            emit(H(i), S(i), S(i), H(i))

    if not cur.is_identity():
        raise SymplecticError("tableau did not reduce to the identity")
    out: list[Gate] = []
    for g in reversed(ops):
        out.extend([g, g, g] if g.name == "S" else [g])
    return Circuit(n, out)


def _z1_to(target: Pauli) -> Circuit:
    """Clifford circuit C with C Z_(1) C^dag = +target."""
    n = target.n
    support = [q for q in range(1, n + 1) if ((target.x | target.z) >> (q - 1)) & 1]
    pivot = support[0]
    gates: list[Gate] = []
    if pivot != 1:
        gates.append(Gate("SWAP", (1, pivot)))
    for q in support[1:]:
        gates.append(CNOT(q, pivot))
    for q in support:
        bx, bz = (target.x >> (q - 1)) & 1, (target.z >> (q - 1)) & 1
        if bx and not bz:
            gates.append(H(q))
        elif bx and bz:
            gates.extend([H(q), S(q)])
    return Circuit(n, gates)


def pauli_conjugator(p: Pauli, q: Pauli) -> Circuit:
    """Clifford circuit C with C p C^dag = +q (both non-identity)."""
    if p.n != q.n:
        raise ValueError(f"qubit count mismatch: {p.n} vs {q.n}")
    if p.is_identity() or q.is_identity():
        raise ValueError("pauli_conjugator needs non-identity Paulis")
    circuit = _z1_to(p).inverse() + _z1_to(q)
    image = conjugate_by_circuit(circuit, SignedPauli(p))
    assert image == SignedPauli(q), f"conjugator maps {p} to {image}"
    return circuit


# --------------------------------------------------------------------------
# Membership in J_n


def _galois(x: tuple[int, ...], j: int) -> tuple[int, ...]:
    """Apply the automorphism w -> w^j."""
    out = (0, 0, 0, 0)
    for i, c in enumerate(x):
        if c:
            e = (i * j) % 8
            term = [0, 0, 0, 0]
            term[e % 4] = -c if e >= 4 else c
            out = tuple(a + b for a, b in zip(out, term))
    return out


def _zw_div(x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, ...]:
    """Exact quotient in Z[w]; raises if y does not divide x."""
    cofactor = _omega_product(_omega_product(_galois(y, 3), _galois(y, 5)), _galois(y, 7))
    norm = _omega_product(y, cofactor)
    if any(norm[1:]) or norm[0] == 0:
        raise ZeroDivisionError("division by zero in Z[w]")
    num = _omega_product(x, cofactor)
    if any(c % norm[0] for c in num):
        raise ArithmeticError("inexact division in Z[w]")
    return tuple(c // norm[0] for c in num)


def _zw_sub(x, y):
    return tuple(a - b for a, b in zip(x, y))


def determinant(U: UnitaryMatrix) -> CycloElem:
    """Exact determinant by fraction-free (Bareiss) elimination over Z[w]."""
    N = U.dim
    M = [[tuple(int(v) for v in U.coeffs[:, i, j]) for j in range(N)] for i in range(N)]
    zero = (0, 0, 0, 0)
    sign = 1
    prev = (1, 0, 0, 0)
    for k in range(N - 1):
        if M[k][k] == zero:
            swap = next((i for i in range(k + 1, N) if M[i][k] != zero), None)
            if swap is None:
                return CycloElem()
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, N):
            for j in range(k + 1, N):
                num = _zw_sub(_omega_product(M[k][k], M[i][j]), _omega_product(M[i][k], M[k][j]))
                M[i][j] = _zw_div(num, prev)
        prev = M[k][k]
    d = M[N - 1][N - 1]
    return CycloElem(*(sign * c for c in d), U.k * N)


@dataclass(frozen=True)
class Membership:
    member: bool
    determinant: CycloElem
    message: str

    def __bool__(self) -> bool:
        return self.member


def check_membership(U: UnitaryMatrix) -> Membership:
    """Entries in Z[i, 1/sqrt2] hold by construction; test det U = e^{i pi N r / 8}."""
    if not U.is_unitary():
        raise NotUnitaryError("matrix is not exactly unitary")
    N = U.dim
    det = determinant(U)
    allowed = {CycloElem.omega(N * r // 2) for r in range(1, 9)} if N < 16 else {CycloElem.from_int(1)}
    if det in allowed:
        return Membership(True, det, f"det = {det} is an allowed root of unity for N={N}")
    return Membership(False, det, f"det = {det} is not of the form exp(i pi {N} r / 8)")
