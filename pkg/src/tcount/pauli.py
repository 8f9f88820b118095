"""Phase-free n-qubit Paulis in symplectic (x, z) form.

Qubit ``q`` (1-based) lives in bit ``q - 1`` of ``x`` and ``z``. The index of a
Pauli is ``x | (z << n)`` so index 0 is the identity and the product of two
Paulis has index ``i ^ j``. The operator for bits ``(x, z)`` is
``i^{|x & z|} X^x Z^z``, which makes ``(1, 1)`` the Hermitian ``Y = iXZ``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

_LETTERS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_BITS = {v: k for k, v in _LETTERS.items()}


class PhaseError(ValueError):
    """A Pauli product carried a phase of +-i where a real sign was required."""


@dataclass(frozen=True)
class Pauli:
    n: int
    x: int
    z: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a Pauli needs at least one qubit")
        limit = 1 << self.n
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise ValueError(f"bits out of range for n={self.n}")

    @classmethod
    def identity(cls, n: int) -> Pauli:
        return cls(n, 0, 0)

    @classmethod
    def from_index(cls, n: int, index: int) -> Pauli:
        if not 0 <= index < 4**n:
            raise ValueError(f"Pauli index {index} out of range for n={n}")
        mask = (1 << n) - 1
        return cls(n, index & mask, index >> n)

    @classmethod
    def from_label(cls, label: str) -> Pauli:
        """Parse a string such as ``"XIZ"``; the first letter is qubit 1."""
        x = z = 0
        for q, ch in enumerate(label.upper()):
            try:
                bx, bz = _BITS[ch]
            except KeyError:
                raise ValueError(f"bad Pauli letter {ch!r} in {label!r}") from None
            x |= bx << q
            z |= bz << q
        return cls(len(label), x, z)

    @classmethod
    def single(cls, n: int, letter: str, qubit: int) -> Pauli:
        """``letter`` acting on ``qubit`` (1-based), identity elsewhere."""
        if not 1 <= qubit <= n:
            raise ValueError(f"qubit {qubit} out of range for n={n}")
        bx, bz = _BITS[letter.upper()]
        return cls(n, bx << (qubit - 1), bz << (qubit - 1))

    @property
    def index(self) -> int:
        return self.x | (self.z << self.n)

    @property
    def label(self) -> str:
        return "".join(
            _LETTERS[(self.x >> q) & 1, (self.z >> q) & 1] for q in range(self.n)
        )

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class SignedPauli:
    pauli: Pauli
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def __neg__(self) -> SignedPauli:
        return SignedPauli(self.pauli, -self.sign)

    def __str__(self) -> str:
        return ("+" if self.sign == 1 else "-") + self.pauli.label


def _check_same_n(p: Pauli, q: Pauli) -> None:
    if p.n != q.n:
        raise ValueError(f"qubit count mismatch: {p.n} vs {q.n}")


def commutes(p: Pauli, q: Pauli) -> bool:
    _check_same_n(p, q)
    return ((p.x & q.z).bit_count() + (p.z & q.x).bit_count()) % 2 == 0


def product_phase(x1: int, z1: int, x2: int, z2: int) -> int:
    """Exponent e (mod 4) with P(x1,z1) P(x2,z2) = i^e P(x1^x2, z1^z2)."""
    e = (
        (x1 & z1).bit_count()
        + (x2 & z2).bit_count()
        + 2 * (z1 & x2).bit_count()
        - ((x1 ^ x2) & (z1 ^ z2)).bit_count()
    )
    return e % 4


def multiply(p: Pauli, q: Pauli) -> tuple[int, Pauli]:
    """Full product ``p q = i^e r``; returns ``(e, r)``."""
    _check_same_n(p, q)
    e = product_phase(p.x, p.z, q.x, q.z)
    return e, Pauli(p.n, p.x ^ q.x, p.z ^ q.z)


def real_sign(phase: int) -> int:
    """Convert a Z4 exponent to +-1, refusing +-i."""
    phase %= 4
    if phase == 0:
        return 1
    if phase == 2:
        return -1
    raise PhaseError(f"phase i^{phase} is not real")


def pauli_mul(p: Pauli, q: Pauli) -> SignedPauli:
    """Product up to a real sign.

    Only valid when the product's phase is +-1, i.e. when p and q commute;
    anticommuting products have phase +-i and raise :class:`PhaseError`.
    """
    e, r = multiply(p, q)
    return SignedPauli(r, real_sign(e))


def enumerate_nonidentity(n: int) -> list[Pauli]:
    if n < 1:
        raise ValueError("n must be at least 1")
    return [Pauli.from_index(n, i) for i in range(1, 4**n)]


@lru_cache(maxsize=None)
def phase_table(n: int) -> np.ndarray:
    """``table[i, j]`` is the exponent e with P_i P_j = i^e P_{i^j}."""
    size = 4**n
    mask = (1 << n) - 1
    table = np.zeros((size, size), dtype=np.int8)
    for i in range(size):
        x1, z1 = i & mask, i >> n
        for j in range(size):
            table[i, j] = product_phase(x1, z1, j & mask, j >> n)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def commutation_table(n: int) -> np.ndarray:
    """Boolean matrix, True where P_i and P_j anticommute."""
    size = 4**n
    mask = (1 << n) - 1
    idx = np.arange(size)
    x, z = idx & mask, idx >> n
    sym = np.bitwise_and.outer(x, z) ^ np.bitwise_and.outer(z, x)
    parity = np.vectorize(lambda v: int(v).bit_count() & 1)(sym)
    out = parity.astype(bool)
    out.setflags(write=False)
    return out
