"""Exact arithmetic in Z[1/sqrt2] and Z[omega, 1/sqrt2], omega = exp(i*pi/4).

Scalars are immutable and always held in canonical (sde-minimal) form.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from functools import total_ordering

SQRT2 = math.sqrt(2.0)
OMEGA = complex(SQRT2 / 2, SQRT2 / 2)

_REAL_STRUCT = struct.Struct("<qqH")
_CYCLO_STRUCT = struct.Struct("<qqqqH")
_I64_MIN, _I64_MAX = -(2**63), 2**63 - 1


def _check_i64(*values: int) -> None:
    for v in values:
        if not _I64_MIN <= v <= _I64_MAX:
            raise OverflowError(f"coefficient {v} does not fit in 64 bits")


def _reduce_real(a: int, b: int, k: int) -> tuple[int, int, int]:
    if a == 0 and b == 0:
        return 0, 0, 0
    # (a + b*sqrt2)/sqrt2^k with a even equals (b + (a/2)*sqrt2)/sqrt2^(k-1)
    while k > 0 and a % 2 == 0:
        a, b, k = b, a // 2, k - 1
    return a, b, k


@total_ordering
@dataclass(frozen=True, init=False)
class RingReal:
    """The value (a + b*sqrt2) / sqrt2**k.

    Ordering is by ``(k, a, b)`` of the canonical form. It is a fixed total
    order used for determinism, not numeric order.
    """

    a: int
    b: int
    k: int

    def __init__(self, a: int = 0, b: int = 0, k: int = 0) -> None:
        if k < 0:
            raise ValueError("denominator exponent must be nonnegative")
        a, b, k = _reduce_real(int(a), int(b), int(k))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "k", k)

    @classmethod
    def from_int(cls, x: int) -> RingReal:
        return cls(x, 0, 0)

    def aligned(self, k: int) -> tuple[int, int]:
        """Numerator ``(a, b)`` of this value over ``sqrt2**k`` (k >= self.k)."""
        if k < self.k:
            raise ValueError(f"cannot express sde-{self.k} value over sqrt2^{k}")
        a, b = self.a, self.b
        for _ in range(k - self.k):
            a, b = 2 * b, a
        return a, b

    @property
    def sde(self) -> int:
        return self.k

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __add__(self, other: RingReal | int) -> RingReal:
        if isinstance(other, int):
            other = RingReal.from_int(other)
        if not isinstance(other, RingReal):
            return NotImplemented
        k = max(self.k, other.k)
        a1, b1 = self.aligned(k)
        a2, b2 = other.aligned(k)
        return RingReal(a1 + a2, b1 + b2, k)

    __radd__ = __add__

    def __neg__(self) -> RingReal:
        return RingReal(-self.a, -self.b, self.k)

    def __sub__(self, other: RingReal | int) -> RingReal:
        return self + (-other)

    def __rsub__(self, other: RingReal | int) -> RingReal:
        return (-self) + other

    def __mul__(self, other: RingReal | int) -> RingReal:
        if isinstance(other, int):
            other = RingReal.from_int(other)
        if not isinstance(other, RingReal):
            return NotImplemented
        a = self.a * other.a + 2 * self.b * other.b
        b = self.a * other.b + self.b * other.a
        return RingReal(a, b, self.k + other.k)

    __rmul__ = __mul__

    def div_sqrt2(self) -> RingReal:
        return RingReal(self.a, self.b, self.k + 1)

    def __lt__(self, other: RingReal) -> bool:
        if not isinstance(other, RingReal):
            return NotImplemented
        return (self.k, self.a, self.b) < (other.k, other.a, other.b)

    def __float__(self) -> float:
        return (self.a + self.b * SQRT2) / SQRT2**self.k

    def __str__(self) -> str:
        return f"{self.a},{self.b},{self.k}"

    @classmethod
    def parse(cls, text: str) -> RingReal:
        a, b, k = (int(t) for t in text.split(","))
        return cls(a, b, k)

    def to_bytes(self) -> bytes:
        _check_i64(self.a, self.b)
        return _REAL_STRUCT.pack(self.a, self.b, self.k)

    @classmethod
    def from_bytes(cls, data: bytes) -> RingReal:
        return cls(*_REAL_STRUCT.unpack(data))


def _reduce_cyclo(a: int, b: int, c: int, d: int, k: int):
    if a == 0 and b == 0 and c == 0 and d == 0:
        return 0, 0, 0, 0, 0
    # x/sqrt2 = x*(w - w^3)/2 is integral iff a = c and b = d (mod 2)
    while k > 0 and (a - c) % 2 == 0 and (b - d) % 2 == 0:
        a, b, c, d = (b - d) // 2, (a + c) // 2, (b + d) // 2, (c - a) // 2
        k -= 1
    return a, b, c, d, k


def _omega_product(x: tuple[int, int, int, int], y: tuple[int, int, int, int]):
    out = [0, 0, 0, 0]
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            e = i + j
            if e >= 4:
                out[e - 4] -= xi * yj
            else:
                out[e] += xi * yj
    return tuple(out)


@dataclass(frozen=True, init=False)
class CycloElem:
    """The value (a + b*w + c*w^2 + d*w^3) / sqrt2**k with w^4 = -1."""

    a: int
    b: int
    c: int
    d: int
    k: int

    def __init__(self, a: int = 0, b: int = 0, c: int = 0, d: int = 0, k: int = 0) -> None:
        if k < 0:
            raise ValueError("denominator exponent must be nonnegative")
        vals = _reduce_cyclo(int(a), int(b), int(c), int(d), int(k))
        for name, v in zip("abcdk", vals):
            object.__setattr__(self, name, v)

    @classmethod
    def from_int(cls, x: int) -> CycloElem:
        return cls(x, 0, 0, 0, 0)

    @classmethod
    def omega(cls, power: int = 1) -> CycloElem:
        power %= 8
        coeffs = [0, 0, 0, 0]
        coeffs[power % 4] = -1 if power >= 4 else 1
        return cls(*coeffs, 0)

    @classmethod
    def from_real(cls, x: RingReal) -> CycloElem:
        # sqrt2 = w - w^3
        return cls(x.a, x.b, 0, -x.b, x.k)

    @property
    def coeffs(self) -> tuple[int, int, int, int]:
        return self.a, self.b, self.c, self.d

    def aligned(self, k: int) -> tuple[int, int, int, int]:
        if k < self.k:
            raise ValueError(f"cannot express sde-{self.k} value over sqrt2^{k}")
        x = self.coeffs
        for _ in range(k - self.k):
            x = _omega_product(x, (0, 1, 0, -1))
        return x

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: CycloElem | int) -> CycloElem:
        if isinstance(other, int):
            other = CycloElem.from_int(other)
        if not isinstance(other, CycloElem):
            return NotImplemented
        k = max(self.k, other.k)
        x, y = self.aligned(k), other.aligned(k)
        return CycloElem(*(p + q for p, q in zip(x, y)), k)

    __radd__ = __add__

    def __neg__(self) -> CycloElem:
        return CycloElem(-self.a, -self.b, -self.c, -self.d, self.k)

    def __sub__(self, other: CycloElem | int) -> CycloElem:
        return self + (-other)

    def __mul__(self, other: CycloElem | int) -> CycloElem:
        if isinstance(other, int):
            other = CycloElem.from_int(other)
        if not isinstance(other, CycloElem):
            return NotImplemented
        return CycloElem(*_omega_product(self.coeffs, other.coeffs), self.k + other.k)

    __rmul__ = __mul__

    def conj(self) -> CycloElem:
        # w -> w^7 = -w^3, w^2 -> -w^2, w^3 -> -w
        return CycloElem(self.a, -self.d, -self.c, -self.b, self.k)

    def real_part(self) -> RingReal:
        # Re = a + (b - d)/sqrt2 = ((b - d) + a*sqrt2)/sqrt2
        return RingReal(self.b - self.d, self.a, self.k + 1)

    def imag_part(self) -> RingReal:
        return RingReal(self.b + self.d, self.c, self.k + 1)

    def is_real(self) -> bool:
        return self.imag_part().is_zero()

    def __complex__(self) -> complex:
        w = OMEGA
        return (self.a + self.b * w + self.c * w**2 + self.d * w**3) / SQRT2**self.k

    def __str__(self) -> str:
        return f"{self.a},{self.b},{self.c},{self.d},{self.k}"

    @classmethod
    def parse(cls, text: str) -> CycloElem:
        parts = text.split(",")
        if len(parts) != 5:
            raise ValueError(f"expected 'a,b,c,d,k', got {text!r}")
        return cls(*(int(t) for t in parts))

    def to_bytes(self) -> bytes:
        _check_i64(self.a, self.b, self.c, self.d)
        return _CYCLO_STRUCT.pack(self.a, self.b, self.c, self.d, self.k)

    @classmethod
    def from_bytes(cls, data: bytes) -> CycloElem:
        return cls(*_CYCLO_STRUCT.unpack(data))


def sde(x: RingReal) -> int:
    return x.k
