"""COUNT-T: decide whether T(U) <= m, and compute T(U) when it is.

The main routine is a meet-in-the-middle search over sorted coset databases;
:func:`count_t_naive` is an independent brute-force oracle for testing.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from concurrent.futures import ProcessPoolExecutor
from itertools import islice
from typing import Sequence

from tcount.channel import ChannelRep, rotate_arrays
from tcount.clifford import CliffordTableau, is_clifford
from tcount.coset import CosetDatabase, DigestCollisionError, label_arrays

log = logging.getLogger(__name__)

NAIVE_LIMIT = 10**8


class MissingStratumError(LookupError):
    def __init__(self, stratum: int):
        super().__init__(f"coset database D_{stratum} is required but not loaded")
        self.stratum = stratum


@dataclass(frozen=True)
class Witness:
    """U^ = R^(left) R^(right) C^, each sequence listing Paulis in application order."""

    left: tuple[int, ...]
    right: tuple[int, ...]
    clifford: CliffordTableau

    @property
    def rotations(self) -> tuple[int, ...]:
        return self.right + self.left


@dataclass(frozen=True)
class TCountResult:
    m: int
    tcount: int | None
    witness: Witness | None = None

    @property
    def decided(self) -> bool:
        """True when T(U) <= m."""
        return self.tcount is not None

    def __str__(self) -> str:
        return f"T-count = {self.tcount}" if self.decided else f"T-count > {self.m}"


def _undo(n: int, A, B, k, sequence: Sequence[int]):
    """R^(seq)^T applied to (A, B, k): peel rotations last-applied first."""
    for p in reversed(sequence):
        A, B, k = rotate_arrays(n, A, B, k, p, inverse=True)
    return A, B, k


def _witness(U: ChannelRep, left: tuple[int, ...], right: tuple[int, ...]) -> Witness:
    A, B, k = _undo(U.n, U.A, U.B, U.k, left)
    A, B, k = _undo(U.n, A, B, k, right)
    tab = is_clifford(ChannelRep(U.n, A, B, k, reduced=True))
    if tab is None:
        raise AssertionError("matched coset does not leave a Clifford remainder")
    return Witness(left, right, tab)


def _check_dbs(dbs: Sequence[CosetDatabase], n: int) -> int:
    for j, db in enumerate(dbs):
        if db.k != j:
            raise ValueError(f"strata must be D_0, D_1, ... in order; got D_{db.k} at position {j}")
        if db.n != n:
            raise ValueError(f"database D_{db.k} is for n={db.n}, unitary has n={n}")
    return len(dbs) - 1


def _prefixes(U: ChannelRep, dbs: Sequence[CosetDatabase], j: int):
    """Yield (stored stratum, virtual suffix, arrays) covering W of T-count j.

    Stored strata are used as is. Past the last stored stratum, W = R(P) M is
    enumerated on the fly without deduplication; R(P)^T is peeled from U once
    per P so the inner scan only undoes the stored part.
    """
    K = len(dbs) - 1
    if j <= K:
        yield j, (), (U.A, U.B, U.k)
        return
    for p in range(1, 4**U.n):
        A, B, k = rotate_arrays(U.n, U.A, U.B, U.k, p, inverse=True)
        Up = ChannelRep(U.n, A, B, k, reduced=True)
        for stored, suffix, arrays in _prefixes(Up, dbs, j - 1):
            yield stored, suffix + (p,), arrays


class _Scanner:
    """First index in a chunk of sequences whose W^T U lands in the target stratum."""

    def __init__(self, n: int, digests: Sequence[bytes]):
        self.n = n
        self.index = {d: i for i, d in enumerate(digests)}

    def __call__(self, job):
        A0, B0, k0, seqs = job
        for i, seq in enumerate(seqs):
            A, B, k = _undo(self.n, A0, B0, k0, seq)
            if label_arrays(self.n, A, B, k).digest in self.index:
                return i
        return None


_worker_scanner: _Scanner | None = None


def _init_worker(n, digests):
    global _worker_scanner
    _worker_scanner = _Scanner(n, digests)


def _worker_scan(job):
    return _worker_scanner(job)


def _lookup(db: CosetDatabase, A, B, k) -> int | None:
    label = label_arrays(db.n, A, B, k)
    i = db.find(label.digest)
    if i is not None and db.label(i) != label:
        raise DigestCollisionError(f"digest {label.digest.hex()} collides in D_{db.k}")
    return i


def count_t(
    U: ChannelRep,
    m: int,
    dbs: Sequence[CosetDatabase],
    *,
    extend: bool = False,
    n_jobs: int = 1,
    chunk: int = 256,
) -> TCountResult:
    """Meet-in-the-middle COUNT-T with split h = ceil(m/2).

    Step 2 looks U^ up in D_0..D_h; step 3 scans r = h+1..m and, for each W
    of T-count r-h, looks up the label of W^T U^ in D_h. The first hit decides.

    With ``extend``, a database list shorter than D_h is accepted: the split
    drops to the last stored stratum and missing W strata are enumerated one
    rotation layer at a time.

    ``n_jobs > 1`` scans chunks of W in worker processes. Chunks are resolved
    in order and the lowest index wins, so the witness matches a serial run.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    n = U.n
    K = _check_dbs(dbs, n)
    h = -(-m // 2)
    if K < h:
        if not extend or K < 1:
            raise MissingStratumError(h if K >= 0 else 0)
        h = K
    for j in range(h + 1):
        i = _lookup(dbs[j], U.A, U.B, U.k)
        if i is not None:
            seq = dbs[j].records[i].sequence
            return TCountResult(m, j, _witness(U, (), seq))
    target = dbs[h]
    if h + 1 > m:
        return TCountResult(m, None)
    digests = [r.digest for r in target.records]
    pool = None
    if n_jobs > 1:
        pool = ProcessPoolExecutor(max_workers=n_jobs, initializer=_init_worker, initargs=(n, digests))
        scan = _worker_scan
    else:
        scan = _Scanner(n, digests)
    try:
        for r in range(h + 1, m + 1):
            log.debug("meet-in-the-middle r=%d", r)
            jobs = _jobs(U, dbs, r - h, chunk)
            while True:
                batch = list(islice(jobs, max(1, 4 * n_jobs)))
                if not batch:
                    break
                hits = pool.map(scan, [j[1] for j in batch]) if pool else map(scan, [j[1] for j in batch])
                for (w_of, job), hit in zip(batch, hits):
                    if hit is None:
                        continue
                    w = w_of(hit)
                    A, B, k = _undo(n, U.A, U.B, U.k, w)
                    i = _lookup(target, A, B, k)
                    if i is None:
                        raise AssertionError("scanner hit not reproduced")
                    return TCountResult(m, r, _witness(U, w, target.records[i].sequence))
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    return TCountResult(m, None)


def _jobs(U: ChannelRep, dbs: Sequence[CosetDatabase], j: int, chunk: int):
    """Chunks of stored sequences paired with a map from chunk index to full W."""
    for stored, suffix, (A, B, k) in _prefixes(U, dbs, j):
        seqs = [r.sequence for r in dbs[stored].records]
        for s in range(0, len(seqs), chunk):
            part = seqs[s : s + chunk]
            yield (lambda i, part=part, suffix=suffix: part[i] + suffix), (A, B, k, part)


def count_t_naive(U: ChannelRep, m: int) -> TCountResult:
    """Brute force: smallest j <= m with R^(p_1)^T ... R^(p_j)^T U^ Clifford.

    Branches are cut when sde exceeds the remaining depth, since one rotation
    lowers sde by at most one.
    """
    n = U.n
    branching = 4**n - 1
    if branching**m > NAIVE_LIMIT:
        raise ValueError(f"naive search over {branching}^{m} products exceeds the guard")

    def search(A, B, k, depth: int, path: list[int]) -> list[int] | None:
        if depth == 0:
            if is_clifford(ChannelRep(n, A, B, k, reduced=True)) is not None:
                return path
            return None
        if k > depth:
            return None
        for p in range(1, branching + 1):
            A2, B2, k2 = rotate_arrays(n, A, B, k, p, inverse=True)
            found = search(A2, B2, k2, depth - 1, path + [p])
            if found is not None:
                return found
        return None

    for j in range(m + 1):
        path = search(U.A, U.B, U.k, j, [])
        if path is not None:
            # path peels p_1 first, so U^ = R(p_1) ... R(p_j) C^
            return TCountResult(m, j, _witness(U, (), tuple(reversed(path))))
    return TCountResult(m, None)


def tcount_single_qubit(U: ChannelRep) -> int:
    """T-count of a single-qubit unitary, read off as sde of its channel rep."""
    if U.n != 1:
        raise ValueError(f"single-qubit formula needs n=1, got n={U.n}")
    return U.sde
