"""Binary database files and the per-directory manifest.

File layout (little-endian): magic ``TCDB``, u16 version, u8 n, u8 k,
u8 format, u64 record count, the records, then a u64 checksum (8-byte
blake2b of everything before it). A record is u16 sequence length, u32
Pauli indices, an optional matrix block and the 16-byte label digest.

Matrix blocks: ``dense`` stores u16 sde, u8 width code and A, B at that
integer width; ``sparse`` stores, per row, u16 nnz then (u16 col, i64 a,
i64 b) triples. ``compact`` stores nothing and recomputes W on demand.
"""

from __future__ import annotations

import hashlib
import io
import json
import logging
import os
import struct
from pathlib import Path
from typing import Sequence

import numpy as np

from tcount.channel import ChannelRep
from tcount.coset import DIGEST_SIZE, CosetDatabase, Record, extend_databases, generate_databases

log = logging.getLogger(__name__)

MAGIC = b"TCDB"
VERSION = 1
FORMATS = {"compact": 0, "dense": 1, "sparse": 2}
_FORMAT_NAMES = {v: k for k, v in FORMATS.items()}
_HEADER = struct.Struct("<4sHBBBQ")
_WIDTHS = ("<i1", "<i2", "<i4", "<i8")
MANIFEST = "manifest.json"


class DatabaseFormatError(ValueError):
    """Bad magic, unsupported version, truncation or a checksum failure."""


class DimensionMismatchError(ValueError):
    pass


class IncompatibleManifestError(ValueError):
    pass


def _checksum(data: bytes) -> bytes:
    return hashlib.blake2b(data, digest_size=8).digest()


def _width_code(A: np.ndarray, B: np.ndarray) -> int:
    peak = int(max(np.abs(A).max(initial=0), np.abs(B).max(initial=0)))
    for code in range(4):
        if peak < 2 ** (8 * 2**code - 1):
            return code
    raise OverflowError("matrix entry does not fit in 64 bits")


def _write_matrix(out: io.BytesIO, W: ChannelRep, fmt: int) -> None:
    if fmt == FORMATS["dense"]:
        code = _width_code(W.A, W.B)
        out.write(struct.pack("<HB", W.k, code))
        out.write(W.A.astype(_WIDTHS[code]).tobytes())
        out.write(W.B.astype(_WIDTHS[code]).tobytes())
    elif fmt == FORMATS["sparse"]:
        out.write(struct.pack("<H", W.k))
        for r in range(W.size):
            cols = np.flatnonzero((W.A[r] != 0) | (W.B[r] != 0))
            out.write(struct.pack("<H", len(cols)))
            for c in cols:
                out.write(struct.pack("<Hqq", int(c), int(W.A[r, c]), int(W.B[r, c])))


def encode_database(db: CosetDatabase, fmt: str = "compact") -> bytes:
    code = FORMATS[fmt]
    out = io.BytesIO()
    out.write(_HEADER.pack(MAGIC, VERSION, db.n, db.k, code, len(db)))
    for i, rec in enumerate(db.records):
        out.write(struct.pack(f"<H{len(rec.sequence)}I", len(rec.sequence), *rec.sequence))
        if code:
            _write_matrix(out, db.matrix(i), code)
        out.write(rec.digest)
    body = out.getvalue()
    return body + _checksum(body)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, size: int) -> bytes:
        if self.pos + size > len(self.data):
            raise DatabaseFormatError("database file is truncated")
        chunk = self.data[self.pos : self.pos + size]
        self.pos += size
        return chunk

    def unpack(self, fmt: str):
        s = struct.calcsize(fmt)
        return struct.unpack(fmt, self.take(s))


def _read_matrix(rd: _Reader, n: int, code: int) -> ChannelRep:
    size = 4**n
    if code == FORMATS["dense"]:
        k, width = rd.unpack("<HB")
        if width > 3:
            raise DatabaseFormatError(f"bad integer width code {width}")
        nbytes = size * size * 2**width
        A = np.frombuffer(rd.take(nbytes), dtype=_WIDTHS[width]).astype(np.int64).reshape(size, size)
        B = np.frombuffer(rd.take(nbytes), dtype=_WIDTHS[width]).astype(np.int64).reshape(size, size)
    else:
        (k,) = rd.unpack("<H")
        A = np.zeros((size, size), dtype=np.int64)
        B = np.zeros((size, size), dtype=np.int64)
        for r in range(size):
            (nnz,) = rd.unpack("<H")
            for _ in range(nnz):
                c, a, b = rd.unpack("<Hqq")
                if c >= size:
                    raise DatabaseFormatError(f"column {c} out of range")
                A[r, c], B[r, c] = a, b
    return ChannelRep(n, A, B, k, reduced=True)


def decode_database(data: bytes, n: int | None = None) -> CosetDatabase:
    if len(data) < _HEADER.size + 8:
        raise DatabaseFormatError("database file is truncated")
    if data[:4] != MAGIC:
        raise DatabaseFormatError("not a coset database (bad magic)")
    body, stored = data[:-8], data[-8:]
    rd = _Reader(body)
    _, version, dn, k, code, count = rd.unpack(_HEADER.format)
    if version != VERSION:
        raise DatabaseFormatError(f"unsupported database version {version}")
    if _checksum(body) != stored:
        raise DatabaseFormatError("checksum mismatch: database file is corrupted")
    if code not in _FORMAT_NAMES:
        raise DatabaseFormatError(f"unknown storage format code {code}")
    if n is not None and dn != n:
        raise DimensionMismatchError(f"database is for n={dn} qubits, expected n={n}")
    records, matrices = [], [] if code else None
    for _ in range(count):
        (length,) = rd.unpack("<H")
        seq = rd.unpack(f"<{length}I") if length else ()
        if code:
            matrices.append(_read_matrix(rd, dn, code))
        records.append(Record(tuple(seq), rd.take(DIGEST_SIZE)))
    if rd.pos != len(body):
        raise DatabaseFormatError("trailing bytes after the last record")
    return CosetDatabase(dn, k, records, matrices)


def db_write(db: CosetDatabase, path: str | os.PathLike, fmt: str = "compact") -> int:
    data = encode_database(db, fmt)
    tmp = Path(str(path) + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)
    return len(data)


def db_read(path: str | os.PathLike, n: int | None = None) -> CosetDatabase:
    return decode_database(Path(path).read_bytes(), n)


# --------------------------------------------------------------------------
# Directory of strata


def stratum_file(n: int, k: int) -> str:
    return f"D{k}_n{n}.tcdb"


def read_manifest(directory: str | os.PathLike) -> dict | None:
    path = Path(directory) / MANIFEST
    if not path.exists():
        return None
    return json.loads(path.read_text())


def _write_manifest(directory: Path, manifest: dict) -> None:
    tmp = directory / (MANIFEST + ".tmp")
    tmp.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    os.replace(tmp, directory / MANIFEST)


def build_database_dir(
    directory: str | os.PathLike,
    n: int,
    K: int,
    fmt: str = "compact",
    *,
    n_jobs: int = 1,
    on_stratum=None,
) -> tuple[list[dict], bool]:
    """Make ``directory`` hold D_0..D_K for n qubits.

    Returns the manifest entries for the strata and whether anything was
    written. An existing manifest for the same n and format with at least K
    strata is a no-op; a shorter one is extended; any other is rejected.
    The manifest is rewritten after every stratum so an interrupted run keeps
    its completed strata.
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown storage format {fmt!r}")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = read_manifest(directory)
    if manifest is not None:
        if manifest.get("n") != n or manifest.get("format") != fmt or manifest.get("version") != VERSION:
            raise IncompatibleManifestError(
                f"{directory / MANIFEST} describes n={manifest.get('n')}, format={manifest.get('format')}; "
                f"requested n={n}, format={fmt}"
            )
        if manifest["K"] >= K:
            return manifest["strata"][: K + 1], False
        dbs = load_databases(directory, n)
        entries = list(manifest["strata"])
    else:
        dbs, entries = [], []
        manifest = {"n": n, "K": -1, "format": fmt, "version": VERSION, "strata": entries}

    def save(db: CosetDatabase) -> None:
        name = stratum_file(n, db.k)
        data = encode_database(db, fmt)
        tmp = directory / (name + ".tmp")
        tmp.write_bytes(data)
        os.replace(tmp, directory / name)
        entries.append({"k": db.k, "file": name, "records": len(db), "bytes": len(data), "checksum": _checksum(data).hex()})
        manifest["K"] = db.k
        manifest["strata"] = entries
        _write_manifest(directory, manifest)
        if on_stratum is not None:
            on_stratum(entries[-1])

    if dbs:
        extend_databases(dbs, K, n_jobs=n_jobs, on_stratum=save)
    else:
        generate_databases(n, K, n_jobs=n_jobs, on_stratum=save)
    return entries, True


def load_databases(directory: str | os.PathLike, n: int | None = None, upto: int | None = None) -> list[CosetDatabase]:
    """Read D_0..D_upto (default: every stratum in the manifest)."""
    directory = Path(directory)
    manifest = read_manifest(directory)
    if manifest is None:
        raise FileNotFoundError(f"no {MANIFEST} in {directory}")
    if n is not None and manifest["n"] != n:
        raise DimensionMismatchError(f"databases in {directory} are for n={manifest['n']} qubits, expected n={n}")
    last = manifest["K"] if upto is None else min(upto, manifest["K"])
    dbs = []
    for entry in manifest["strata"][: last + 1]:
        data = (directory / entry["file"]).read_bytes()
        if _checksum(data).hex() != entry["checksum"]:
            raise DatabaseFormatError(f"{entry['file']} does not match its manifest checksum")
        dbs.append(decode_database(data, manifest["n"]))
    return dbs


def database_files(directory: str | os.PathLike) -> Sequence[Path]:
    manifest = read_manifest(directory) or {"strata": []}
    return [Path(directory) / e["file"] for e in manifest["strata"]]
