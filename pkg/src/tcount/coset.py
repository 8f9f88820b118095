"""Coset labels modulo right Clifford multiplication and sorted coset databases."""

from __future__ import annotations

import bisect
import hashlib
import logging
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from tcount.channel import ChannelRep, product_of_rotations, rotate_arrays

log = logging.getLogger(__name__)

DIGEST_SIZE = 16
_HEADER = struct.Struct("<BHB")


class DigestCollisionError(RuntimeError):
    """Two different labels produced the same 128-bit digest."""


def _canonical_columns(A: np.ndarray, B: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    size = A.shape[1]
    cols = np.arange(size)
    first = ((A != 0) | (B != 0)).argmax(axis=0)
    a0, b0 = A[first, cols], B[first, cols]
    sign = np.where((a0 < 0) | ((a0 == 0) & (b0 < 0)), -1, 1)
    A = A * sign
    B = B * sign
    keys = np.empty((2 * A.shape[0], size), dtype=np.int64)
    keys[0::2] = A
    keys[1::2] = B
    # lexsort takes its primary key last; compare top-to-bottom, a before b
    order = np.lexsort(keys[::-1])
    return A[:, order], B[:, order]


def _serialize(n: int, k: int, A: np.ndarray, B: np.ndarray) -> bytes:
    peak = int(max(np.abs(A).max(initial=0), np.abs(B).max(initial=0)))
    for code, dtype in enumerate(("<i1", "<i2", "<i4", "<i8")):
        if peak < 2 ** (8 * 2**code - 1):
            break
    return _HEADER.pack(n, k, code) + A.astype(dtype).tobytes() + B.astype(dtype).tobytes()


def _digest(data: bytes) -> bytes:
    return hashlib.blake2b(data, digest_size=DIGEST_SIZE).digest()


@dataclass(frozen=True, eq=False)
class CosetLabel:
    """Canonical representative of the coset W * C_n.

    Columns are sign-normalized and sorted; the matrix keeps the common
    denominator sqrt2**k with k = sde(W). Labels order by (digest, bytes).
    """

    n: int
    k: int
    A: np.ndarray
    B: np.ndarray
    digest: bytes = field(repr=False)

    def to_bytes(self) -> bytes:
        return _serialize(self.n, self.k, self.A, self.B)

    def matrix(self) -> ChannelRep:
        return ChannelRep(self.n, self.A.copy(), self.B.copy(), self.k, reduced=True)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CosetLabel):
            return NotImplemented
        return (
            self.n == other.n
            and self.k == other.k
            and np.array_equal(self.A, other.A)
            and np.array_equal(self.B, other.B)
        )

    def __hash__(self) -> int:
        return hash(self.digest)

    def __lt__(self, other: CosetLabel) -> bool:
        return (self.digest, self.to_bytes()) < (other.digest, other.to_bytes())


def label_arrays(n: int, A: np.ndarray, B: np.ndarray, k: int) -> CosetLabel:
    LA, LB = _canonical_columns(A, B)
    LA.setflags(write=False)
    LB.setflags(write=False)
    return CosetLabel(n, k, LA, LB, _digest(_serialize(n, k, LA, LB)))


def coset_label(W: ChannelRep) -> CosetLabel:
    return label_arrays(W.n, W.A, W.B, W.k)


# --------------------------------------------------------------------------
# Databases


@dataclass(frozen=True)
class Record:
    """One coset representative: W = R(seq[-1]) ... R(seq[0])."""

    sequence: tuple[int, ...]
    digest: bytes


@dataclass(eq=False)
class CosetDatabase:
    """Stratum D_k^n: one representative per coset of T-count k, sorted by label."""

    n: int
    k: int
    records: list[Record]
    matrices: list[ChannelRep] | None = None
    _digests: list[bytes] = field(init=False, repr=False)

    def __post_init__(self):
        self._digests = [r.digest for r in self.records]
        if any(a >= b for a, b in zip(self._digests, self._digests[1:])):
            raise ValueError("database records must be strictly sorted by label digest")
        if self.matrices is not None and len(self.matrices) != len(self.records):
            raise ValueError("matrix list does not match the records")

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[Record]:
        return iter(self.records)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CosetDatabase):
            return NotImplemented
        if (self.n, self.k, self.records) != (other.n, other.k, other.records):
            return False
        if self.matrices is not None and other.matrices is not None:
            return self.matrices == other.matrices
        return True

    def matrix(self, i: int) -> ChannelRep:
        if self.matrices is not None:
            return self.matrices[i]
        return product_of_rotations(self.n, self.records[i].sequence)

    def find(self, digest: bytes) -> int | None:
        i = bisect.bisect_left(self._digests, digest)
        if i < len(self._digests) and self._digests[i] == digest:
            return i
        return None

    def label(self, i: int) -> CosetLabel:
        return coset_label(self.matrix(i))


def identity_database(n: int) -> CosetDatabase:
    ident = ChannelRep.identity(n)
    return CosetDatabase(n, 0, [Record((), coset_label(ident).digest)])


def db_lookup(dbs: Sequence[CosetDatabase], label: CosetLabel) -> tuple[int, int] | None:
    """Find ``label`` across strata; returns ``(k, record index)`` or None.

    A digest hit is confirmed by comparing full labels.
    """
    for db in dbs:
        if db.n != label.n:
            raise ValueError(f"database is for n={db.n}, label for n={label.n}")
        i = db.find(label.digest)
        if i is not None:
            if db.label(i) != label:
                raise DigestCollisionError(f"digest {label.digest.hex()} collides in D_{db.k}")
            return db.k, i
    return None


def _candidate_digests(args) -> list[bytes]:
    n, sequences = args
    size = 4**n
    out = []
    for seq in sequences:
        M = product_of_rotations(n, seq)
        for p in range(1, size):
            A, B, k = rotate_arrays(n, M.A, M.B, M.k, p)
            out.append(label_arrays(n, A, B, k).digest)
    return out


def _candidates(n: int, sequences: Sequence[tuple[int, ...]], n_jobs: int, chunk: int = 64):
    """Digests of R(P) M for M in ``sequences``, P in index order, in that order."""
    chunks = [sequences[i : i + chunk] for i in range(0, len(sequences), chunk)]
    if n_jobs <= 1:
        for c in chunks:
            yield c, _candidate_digests((n, c))
        return
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        for c, digests in zip(chunks, pool.map(_candidate_digests, [(n, c) for c in chunks])):
            yield c, digests


def extend_databases(dbs: list[CosetDatabase], K: int, *, n_jobs: int = 1, on_stratum=None) -> list[CosetDatabase]:
    """Grow a list of strata D_0..D_j to D_0..D_K.

    D_k collects R(P) M for M in D_(k-1) and every non-identity P, keeping a
    candidate iff its label is new across all strata so far. Output does not
    depend on ``n_jobs``: candidates are merged in a fixed order.
    """
    if not dbs:
        raise ValueError("need at least D_0")
    n = dbs[0].n
    size = 4**n
    seen: dict[bytes, tuple[int, tuple[int, ...]]] = {}
    for db in dbs:
        for r in db.records:
            seen[r.digest] = (db.k, r.sequence)
    dbs = list(dbs)
    while len(dbs) <= K:
        k = len(dbs)
        prev = dbs[-1]
        fresh: dict[bytes, tuple[int, ...]] = {}
        sequences = [r.sequence for r in prev.records]
        for chunk, digests in _candidates(n, sequences, n_jobs):
            it = iter(digests)
            for seq in chunk:
                for p in range(1, size):
                    d = next(it)
                    cand = seq + (p,)
                    known = seen.get(d)
                    if known is None:
                        seen[d] = (k, cand)
                        fresh[d] = cand
                    elif _label_of(n, known[1]) != _label_of(n, cand):
                        raise DigestCollisionError(f"digest {d.hex()} collides while building D_{k}")
        records = [Record(fresh[d], d) for d in sorted(fresh)]
        db = CosetDatabase(n, k, records)
        log.info("D_%d^%d: %d records", k, n, len(db))
        dbs.append(db)
        if on_stratum is not None:
            on_stratum(db)
    return dbs


def _label_of(n: int, seq: tuple[int, ...]) -> CosetLabel:
    return coset_label(product_of_rotations(n, seq))


def generate_databases(n: int, K: int, *, n_jobs: int = 1, on_stratum=None) -> list[CosetDatabase]:
    """Sorted coset databases D_0^n .. D_K^n."""
    if n < 1 or K < 0:
        raise ValueError("need n >= 1 and K >= 0")
    first = identity_database(n)
    if on_stratum is not None:
        on_stratum(first)
    return extend_databases([first], K, n_jobs=n_jobs, on_stratum=on_stratum)
