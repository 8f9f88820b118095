import json

import pytest

from conftest import cached_databases
from tcount.storage import (
    FORMATS,
    DatabaseFormatError,
    DimensionMismatchError,
    IncompatibleManifestError,
    build_database_dir,
    db_read,
    db_write,
    decode_database,
    encode_database,
    load_databases,
)


@pytest.mark.parametrize("fmt", sorted(FORMATS))
def test_round_trip(tmp_path, fmt):
    db = cached_databases(2, 2)[2]
    path = tmp_path / "d2.tcdb"
    db_write(db, path, fmt)
    back = db_read(path)
    assert back == db and back.records == db.records
    if fmt != "compact":
        assert all(back.matrices[i] == db.matrix(i) for i in range(len(db)))
    assert encode_database(back, fmt) == path.read_bytes()


def test_corruption_detected(tmp_path):
    data = bytearray(encode_database(cached_databases(2, 1)[1]))
    data[40] ^= 0x10
    with pytest.raises(DatabaseFormatError, match="checksum"):
        decode_database(bytes(data))


def test_truncation_and_magic(tmp_path):
    data = encode_database(cached_databases(2, 1)[1])
    with pytest.raises(DatabaseFormatError):
        decode_database(data[:30])
    with pytest.raises(DatabaseFormatError, match="magic"):
        decode_database(b"XXXX" + data[4:])
    bumped = bytearray(data)
    bumped[4] = 9
    with pytest.raises(DatabaseFormatError, match="version"):
        decode_database(bytes(bumped))


def test_dimension_mismatch(tmp_path):
    path = tmp_path / "d.tcdb"
    db_write(cached_databases(2, 1)[1], path)
    with pytest.raises(DimensionMismatchError):
        db_read(path, n=3)


def test_directory_lifecycle(tmp_path):
    d = tmp_path / "n2"
    entries, wrote = build_database_dir(d, 2, 1)
    assert wrote and [e["records"] for e in entries] == [1, 15]
    manifest = json.loads((d / "manifest.json").read_text())
    assert manifest["K"] == 1 and manifest["format"] == "compact"
    before = {p.name: p.read_bytes() for p in d.iterdir()}
    _, wrote = build_database_dir(d, 2, 0)
    assert not wrote
    assert {p.name: p.read_bytes() for p in d.iterdir()} == before
    entries, wrote = build_database_dir(d, 2, 2)
    assert wrote and [e["records"] for e in entries] == [1, 15, 165]
    assert load_databases(d) == cached_databases(2, 2)
    with pytest.raises(IncompatibleManifestError):
        build_database_dir(d, 2, 2, "dense")
    with pytest.raises(IncompatibleManifestError):
        build_database_dir(d, 1, 2)
    with pytest.raises(DimensionMismatchError):
        load_databases(d, n=3)


def test_manifest_checksum_enforced(tmp_path):
    d = tmp_path / "n1"
    build_database_dir(d, 1, 2)
    f = d / "D2_n1.tcdb"
    data = bytearray(f.read_bytes())
    data[-1] ^= 1
    f.write_bytes(bytes(data))
    with pytest.raises(DatabaseFormatError):
        load_databases(d)
