"""Exact channel representations of Clifford+T unitaries.

A :class:`ChannelRep` stores an N^2 x N^2 matrix over Z[1/sqrt2] as two int64
arrays with a shared denominator, ``(A + B*sqrt2) / sqrt2**k``, where ``k`` is
kept minimal. The minimal shared exponent is exactly ``sde`` of the matrix.
Rows and columns are indexed by Pauli index (see :mod:`tcount.pauli`).
"""

from __future__ import annotations

from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from tcount.circuit import Circuit, Gate
from tcount.pauli import Pauli, SignedPauli, phase_table
from tcount.ring import CycloElem, RingReal

MAX_SDE = 60  # |a|, |b| <= 2^(k/2); keeps every int64 intermediate far from wrap


class NotUnitaryError(ValueError):
    pass


def _check_sde(k: int) -> None:
    if k > MAX_SDE:
        raise OverflowError(f"sde {k} exceeds the int64-safe limit {MAX_SDE}")


def _reduce(A: np.ndarray, B: np.ndarray, k: int):
    while k > 0 and not (A & 1).any():
        A, B, k = B, A >> 1, k - 1
    if k == 0 and not A.any() and not B.any():
        return A, B, 0
    return A, B, k


class ChannelRep:
    """Immutable exact channel representation."""

    __slots__ = ("n", "A", "B", "k", "__dict__")

    def __init__(self, n: int, A: np.ndarray, B: np.ndarray, k: int, *, reduced: bool = False):
        size = 4**n
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.shape != (size, size) or B.shape != (size, size):
            raise ValueError(f"expected {size}x{size} arrays for n={n}")
        if not reduced:
            A, B, k = _reduce(A, B, int(k))
        _check_sde(k)
        A.setflags(write=False)
        B.setflags(write=False)
        self.n = n
        self.A = A
        self.B = B
        self.k = k

    @classmethod
    def identity(cls, n: int) -> ChannelRep:
        size = 4**n
        return cls(n, np.eye(size, dtype=np.int64), np.zeros((size, size), np.int64), 0, reduced=True)

    @classmethod
    def from_entries(cls, n: int, entries: Sequence[Sequence[RingReal]]) -> ChannelRep:
        k = max((e.k for row in entries for e in row), default=0)
        size = 4**n
        A = np.zeros((size, size), np.int64)
        B = np.zeros((size, size), np.int64)
        for r, row in enumerate(entries):
            for s, e in enumerate(row):
                A[r, s], B[r, s] = e.aligned(k)
        return cls(n, A, B, k)

    @property
    def size(self) -> int:
        return self.A.shape[0]

    @property
    def sde(self) -> int:
        return self.k

    def entry(self, r: int, s: int) -> RingReal:
        return RingReal(int(self.A[r, s]), int(self.B[r, s]), self.k)

    def entries(self) -> list[list[RingReal]]:
        return [[self.entry(r, s) for s in range(self.size)] for r in range(self.size)]

    def to_float(self) -> np.ndarray:
        return (self.A + self.B * np.sqrt(2.0)) / np.sqrt(2.0) ** self.k

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChannelRep):
            return NotImplemented
        return (
            self.n == other.n
            and self.k == other.k
            and np.array_equal(self.A, other.A)
            and np.array_equal(self.B, other.B)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.k, self.A.tobytes(), self.B.tobytes()))

    def __repr__(self) -> str:
        return f"ChannelRep(n={self.n}, sde={self.k})"

    @cached_property
    def monomial(self) -> tuple[np.ndarray, np.ndarray] | None:
        """``(perm, sign)`` with ``self[r, perm[r]] = sign[r]`` if signed permutation."""
        if self.k != 0 or self.B.any():
            return None
        nz = self.A != 0
        if not (nz.sum(axis=1) == 1).all() or not (nz.sum(axis=0) == 1).all():
            return None
        perm = nz.argmax(axis=1)
        sign = self.A[np.arange(self.size), perm]
        if not (np.abs(sign) == 1).all():
            return None
        return perm, sign

    def transpose(self) -> ChannelRep:
        return ChannelRep(self.n, self.A.T.copy(), self.B.T.copy(), self.k, reduced=True)

    dagger = transpose

    def __matmul__(self, other: ChannelRep) -> ChannelRep:
        if not isinstance(other, ChannelRep):
            return NotImplemented
        if self.n != other.n:
            raise ValueError(f"qubit count mismatch: {self.n} vs {other.n}")
        mono = self.monomial
        if mono is not None:
            perm, sign = mono
            return ChannelRep(
                self.n, sign[:, None] * other.A[perm], sign[:, None] * other.B[perm], other.k, reduced=True
            )
        mono = other.monomial
        if mono is not None:
            # (M Q)[:, perm[r]] = sign[r] * M[:, r]
            perm, sign = mono
            inv = np.argsort(perm)
            s = sign[inv]
            return ChannelRep(self.n, self.A[:, inv] * s, self.B[:, inv] * s, self.k, reduced=True)
        _check_sde(self.k + other.k)
        A1, B1, A2, B2 = self.A, self.B, other.A, other.B
        A = A1 @ A2 + 2 * (B1 @ B2)
        B = A1 @ B2 + B1 @ A2
        return ChannelRep(self.n, A, B, self.k + other.k)

    def is_orthogonal(self) -> bool:
        return (self.transpose() @ self) == ChannelRep.identity(self.n)


# --------------------------------------------------------------------------
# Rotations R(P) = exp(i pi/8 (I - P))


@lru_cache(maxsize=None)
def _rotation_tables(n: int):
    """Per Pauli p: anticommuting rows, and the mixing coefficient for each.

    R(P) Q R(P)^dag = (Q + i Q P)/sqrt2 for Q anticommuting with P, so column
    Q of R^ carries c/sqrt2 at row Q^P, where i P_Q P = c P_{Q^P}.
    """
    phases = phase_table(n)
    size = 4**n
    tables = [None]
    idx = np.arange(size)
    for p in range(1, size):
        e = phases[:, p].astype(np.int64)
        anti = np.flatnonzero(e % 2 == 1)
        # c_s for column s: e=1 -> i*i = -1, e=3 -> i*(-i) = +1
        c = np.where(e == 1, -1, 1).astype(np.int64)
        partner = idx[anti] ^ p
        tables.append((anti, partner, c[partner], c[anti]))
    return tables


def rotate_arrays(n: int, A: np.ndarray, B: np.ndarray, k: int, p: int, inverse: bool = False):
    """Left-multiply ``(A + B sqrt2)/sqrt2^k`` by R^(P_p), or by its transpose."""
    anti, partner, coef, coef_t = _rotation_tables(n)[p]
    c = (coef_t if inverse else coef)[:, None]
    A2 = B << 1
    B2 = A.copy()
    A2[anti] = A[anti] + c * A[partner]
    B2[anti] = B[anti] + c * B[partner]
    A2, B2, k2 = _reduce(A2, B2, k + 1)
    _check_sde(k2)
    return A2, B2, k2


def rotate(W: ChannelRep, p: int | Pauli, inverse: bool = False) -> ChannelRep:
    """R^(P) W, or R^(P)^T W = R^(-P) W when ``inverse``."""
    if isinstance(p, Pauli):
        p = p.index
    if not 0 < p < 4**W.n:
        raise ValueError("rotation Pauli must be a non-identity Pauli")
    A, B, k = rotate_arrays(W.n, W.A, W.B, W.k, p, inverse)
    return ChannelRep(W.n, A, B, k, reduced=True)


def channel_of_rotation(p: Pauli | SignedPauli, n: int | None = None) -> ChannelRep:
    """Channel representation of R(+-P); R(-P) has the transposed channel."""
    inverse = False
    if isinstance(p, SignedPauli):
        inverse = p.sign == -1
        p = p.pauli
    if p.is_identity():
        raise ValueError("R(P) is only defined for non-identity P")
    return rotate(ChannelRep.identity(p.n), p.index, inverse)


def product_of_rotations(n: int, sequence: Iterable[int], W: ChannelRep | None = None) -> ChannelRep:
    """R^(p_last) ... R^(p_first) W for Pauli indices in application order."""
    if W is None:
        W = ChannelRep.identity(n)
    A, B, k = W.A, W.B, W.k
    for p in sequence:
        A, B, k = rotate_arrays(n, A, B, k, int(p))
    return ChannelRep(n, A, B, k, reduced=True)


# --------------------------------------------------------------------------
# Exact N x N unitaries over Z[omega, 1/sqrt2]


def _omega_matmul(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    out = np.zeros((4, X.shape[1], Y.shape[2]), dtype=object)
    for i in range(4):
        for j in range(4):
            prod = X[i] @ Y[j]
            e = i + j
            if e >= 4:
                out[e - 4] -= prod
            else:
                out[e] += prod
    return out


def _omega_shift(X: np.ndarray, power: int) -> np.ndarray:
    """Multiply coefficient stack by omega**power."""
    power %= 8
    out = X
    for _ in range(power):
        out = np.stack([-out[3], out[0], out[1], out[2]])
    return out


class UnitaryMatrix:
    """N x N matrix ``(C0 + C1 w + C2 w^2 + C3 w^3) / sqrt2**k`` with exact entries."""

    def __init__(self, n: int, coeffs: np.ndarray, k: int, *, check: bool = True):
        N = 2**n
        coeffs = np.asarray(coeffs, dtype=object)
        if coeffs.shape != (4, N, N):
            raise ValueError(f"expected coefficient stack of shape (4, {N}, {N})")
        k = int(k)
        while k > 0:
            a, b, c, d = coeffs
            if any(int(v) % 2 for v in (a - c).flat) or any(int(v) % 2 for v in (b - d).flat):
                break
            coeffs = np.stack([(b - d) // 2, (a + c) // 2, (b + d) // 2, (c - a) // 2])
            k -= 1
        if not coeffs.any():
            k = 0
        self.n = n
        self.coeffs = coeffs
        self.k = k
        if check and not self.is_unitary():
            raise NotUnitaryError("matrix is not exactly unitary")

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence[CycloElem]], *, check: bool = True) -> UnitaryMatrix:
        N = len(entries)
        n = N.bit_length() - 1
        if N < 2 or 2**n != N or any(len(row) != N for row in entries):
            raise ValueError("unitary must be a square matrix of size 2^n, n >= 1")
        k = max(e.k for row in entries for e in row)
        coeffs = np.zeros((4, N, N), dtype=object)
        for i, row in enumerate(entries):
            for j, e in enumerate(row):
                coeffs[:, i, j] = e.aligned(k)
        return cls(n, coeffs, k, check=check)

    @classmethod
    def identity(cls, n: int) -> UnitaryMatrix:
        N = 2**n
        coeffs = np.zeros((4, N, N), dtype=object)
        coeffs[0] = np.eye(N, dtype=np.int64).astype(object)
        return cls(n, coeffs, 0, check=False)

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> UnitaryMatrix:
        """Matrix sending basis state ``j`` to ``perm[j]``."""
        N = len(perm)
        coeffs = np.zeros((4, N, N), dtype=object)
        for j, i in enumerate(perm):
            coeffs[0, i, j] = 1
        return cls.from_coeffs(coeffs, 0)

    @classmethod
    def from_coeffs(cls, coeffs: np.ndarray, k: int, *, check: bool = True) -> UnitaryMatrix:
        N = coeffs.shape[1]
        return cls(N.bit_length() - 1, coeffs, k, check=check)

    @property
    def dim(self) -> int:
        return self.coeffs.shape[1]

    def entry(self, i: int, j: int) -> CycloElem:
        return CycloElem(*(int(v) for v in self.coeffs[:, i, j]), self.k)

    def entries(self) -> list[list[CycloElem]]:
        return [[self.entry(i, j) for j in range(self.dim)] for i in range(self.dim)]

    def to_complex(self) -> np.ndarray:
        w = np.exp(1j * np.pi / 4)
        c = self.coeffs.astype(float)
        return (c[0] + c[1] * w + c[2] * w**2 + c[3] * w**3) / np.sqrt(2.0) ** self.k

    def dagger(self) -> UnitaryMatrix:
        a, b, c, d = self.coeffs
        conj = np.stack([a, -d, -c, -b])
        return UnitaryMatrix(self.n, conj.transpose(0, 2, 1), self.k, check=False)

    def __matmul__(self, other: UnitaryMatrix) -> UnitaryMatrix:
        if self.n != other.n:
            raise ValueError(f"qubit count mismatch: {self.n} vs {other.n}")
        return UnitaryMatrix(self.n, _omega_matmul(self.coeffs, other.coeffs), self.k + other.k, check=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UnitaryMatrix):
            return NotImplemented
        return self.n == other.n and self.k == other.k and np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self) -> str:
        return f"UnitaryMatrix(n={self.n}, k={self.k})"

    def is_unitary(self) -> bool:
        prod = self.dagger() @ self
        return prod == UnitaryMatrix.identity(self.n)


def _bit_reverse(v: int, n: int) -> int:
    return int(format(v, f"0{n}b")[::-1], 2)


def channel_from_matrix(U: UnitaryMatrix, *, check: bool = True) -> ChannelRep:
    """Entry (r, s) is Tr(P_r U P_s U^dag) / 2^n, computed exactly."""
    if check and not U.is_unitary():
        raise NotUnitaryError("matrix is not exactly unitary")
    n, N = U.n, U.dim
    mask = N - 1
    size = N * N
    rows = np.arange(N)
    Ud = U.dagger().coeffs
    # matrix-bit masks for every Pauli index
    xm = [_bit_reverse(i & mask, n) for i in range(size)]
    zm = [_bit_reverse(i >> n, n) for i in range(size)]
    ym = [(i & mask & (i >> n)).bit_count() for i in range(size)]
    parity = np.array([[(z & j).bit_count() & 1 for j in range(N)] for z in range(N)])
    zsign = np.where(parity == 1, -1, 1).astype(object)

    A = np.zeros((size, size), dtype=object)
    B = np.zeros((size, size), dtype=object)
    for s in range(size):
        # (U P_s)[:, j] = i^{|xz|} (-1)^{z.j} U[:, j ^ x]
        UP = U.coeffs[:, :, rows ^ xm[s]] * zsign[zm[s]][None, None, :]
        UP = _omega_shift(UP, 2 * ym[s])
        M = _omega_matmul(UP, Ud)
        for x in range(N):
            diag = M[:, rows, rows ^ x]  # shape (4, N)
            sums = diag @ zsign.T  # column z: sum_j (-1)^{z.j} M[j, j^x]
            for z in range(N):
                r_x, r_z = _bit_reverse(x, n), _bit_reverse(z, n)
                r = r_x | (r_z << n)
                val = _omega_shift(sums[:, z : z + 1], 2 * (r_x & r_z).bit_count())[:, 0]
                a, b, c, d = (int(v) for v in val)
                if b + d != 0 or c != 0:
                    raise ArithmeticError(f"channel entry ({r}, {s}) has a nonzero imaginary part")
                A[r, s] = b - d
                B[r, s] = a
    # real part over sqrt2^(2k+1), then divide by N = sqrt2^(2n)
    k = 2 * U.k + 1 + 2 * n
    while k > 0 and all(int(v) % 2 == 0 for v in A.flat):
        A, B, k = B, A // 2, k - 1
    if not A.any() and not B.any():
        k = 0
    return ChannelRep(n, A.astype(np.int64), B.astype(np.int64), k, reduced=True)


# --------------------------------------------------------------------------
# Gates


def _gate_coeffs(name: str):
    # extra = (row, col, omega power[, sign]) for the single non-integer entry
    table = {
        "H": ([[1, 1], [1, -1]], None, 1),
        "X": ([[0, 1], [1, 0]], None, 0),
        "Z": ([[1, 0], [0, -1]], None, 0),
        "T": ([[1, 0], [0, 0]], (1, 1, 1), 0),
        "TDG": ([[1, 0], [0, 0]], (1, 1, 3, -1), 0),
        "S": ([[1, 0], [0, 0]], (1, 1, 2), 0),
        "SDG": ([[1, 0], [0, 0]], (1, 1, 2, -1), 0),
        "CNOT": ([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], None, 0),
        "SWAP": ([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], None, 0),
    }
    base, extra, k = table[name]
    size = len(base)
    coeffs = np.zeros((4, size, size), dtype=object)
    coeffs[0] = np.array(base, dtype=object)
    if extra is not None:
        i, j, power, *sign = extra
        coeffs[power, i, j] = sign[0] if sign else 1
    return coeffs, k


def gate_matrix(gate: Gate, n: int) -> UnitaryMatrix:
    """Exact N x N matrix of ``gate`` embedded in ``n`` qubits."""
    gate.validate(n)
    G, k = _gate_coeffs(gate.name)
    N = 2**n
    qs = gate.qubits
    bits = [n - q for q in qs]  # matrix bit position of each gate qubit, first = MSB of local index
    other = (N - 1) & ~sum(1 << b for b in bits)
    coeffs = np.zeros((4, N, N), dtype=object)
    local = np.zeros(N, dtype=np.int64)
    for j in range(N):
        v = 0
        for b in bits:
            v = (v << 1) | ((j >> b) & 1)
        local[j] = v
    for i in range(N):
        for j in range(N):
            if (i & other) == (j & other):
                coeffs[:, i, j] = G[:, local[i], local[j]]
    return UnitaryMatrix(n, coeffs, k, check=False)


@lru_cache(maxsize=None)
def gate_channel(gate: Gate, n: int) -> ChannelRep:
    return channel_from_matrix(gate_matrix(gate, n), check=False)


def circuit_matrix(circuit: Circuit) -> UnitaryMatrix:
    U = UnitaryMatrix.identity(circuit.n)
    for g in circuit.gates:
        U = gate_matrix(g, circuit.n) @ U
    return U


def channel_from_circuit(circuit: Circuit | Sequence[Gate], n: int | None = None) -> ChannelRep:
    """Product of per-gate channel reps, in circuit (time) order.

    An explicit ``n`` overrides the circuit's register size.
    """
    if isinstance(circuit, Circuit):
        if n is not None and n != circuit.n:
            circuit = Circuit(n, circuit.gates)
    else:
        circuit = Circuit(n, list(circuit))
    n = circuit.n
    W = ChannelRep.identity(n)
    for g in circuit.gates:
        g.validate(n)
        if g.name in ("T", "TDG"):
            W = rotate(W, Pauli.single(n, "Z", g.qubits[0]), inverse=g.name == "TDG")
        else:
            W = gate_channel(g, n) @ W
    return W
