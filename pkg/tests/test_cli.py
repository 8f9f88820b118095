import pytest

from tcount.channel import UnitaryMatrix, channel_from_circuit
from tcount.circuit import Circuit
from tcount.cli import main
from tcount.library import TOFFOLI_CIRCUIT_TEXT, toffoli
from tcount.textio import format_matrix, parse_matrix


@pytest.fixture
def db_dir(tmp_path, capsys):
    d = tmp_path / "db"
    assert main(["gen-db", "-n", "1", "-K", "3", "--db-dir", str(d)]) == 0
    assert main(["gen-db", "-n", "2", "-K", "2", "--db-dir", str(d)]) == 0
    capsys.readouterr()
    return d


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_db_output_and_rerun(tmp_path, capsys):
    d = str(tmp_path / "db")
    code, out, _ = run(capsys, "gen-db", "-n", "1", "-K", "0", "--db-dir", d)
    assert code == 0 and "D_0: 1 records" in out
    code, out, _ = run(capsys, "gen-db", "-n", "1", "-K", "0", "--db-dir", d)
    assert code == 0 and "nothing to do" in out
    code, _, err = run(capsys, "gen-db", "-n", "1", "-K", "1", "--format", "dense", "--db-dir", d)
    assert code == 1 and "format" in err
    code, out, _ = run(capsys, "gen-db", "-n", "2", "-K", "3", "--db-dir", d, "--output", "kv")
    assert code == 0 and "records=1695" in out


def test_count(tmp_path, capsys, db_dir):
    t = write(tmp_path, "t.txt", "T 1\n")
    code, out, _ = run(capsys, "count", t, "-m", "1", "--db-dir", str(db_dir))
    assert (code, out.strip()) == (0, "T-count = 1")
    code, out, _ = run(capsys, "count", t, "-m", "0", "--db-dir", str(db_dir))
    assert (code, out.strip()) == (2, "T-count > 0")
    code, out, _ = run(capsys, "count", t, "-m", "1", "--db-dir", str(db_dir), "--output", "kv", "--certificate")
    assert "tcount=1" in out and "rotations (applied first to last): Z" in out


def test_count_errors(tmp_path, capsys, db_dir):
    bad = write(tmp_path, "bad.txt", "H 1\nCNOT 1 1\n")
    code, _, err = run(capsys, "count", bad, "-m", "1", "--db-dir", str(db_dir))
    assert code == 1 and "line 2, column 1" in err
    t = write(tmp_path, "t.txt", "T 1\n")
    code, _, err = run(capsys, "count", t, "-m", "9", "--db-dir", str(db_dir))
    assert code == 1 and "D_4" in err
    nonmember = write(tmp_path, "d.txt", "unitary n=2\n" + "\n".join(
        " ".join("1,0,0,0,0" if i == j else "0,0,0,0,0" for j in range(4)) for i in range(3)
    ) + "\n0,0,0,0,0 0,0,0,0,0 0,0,0,0,0 0,1,0,0,0\n")
    code, _, err = run(capsys, "count", nonmember, "-m", "1", "--db-dir", str(db_dir))
    assert code == 1 and "not a Clifford+T unitary" in err
    big = write(tmp_path, "big.txt", "H 4\n")
    code, _, err = run(capsys, "count", big, "-m", "1", "--db-dir", str(db_dir))
    assert code == 1 and "--allow-any-n" in err


def test_synth(tmp_path, capsys, db_dir):
    t = write(tmp_path, "t.txt", "T 1\n")
    out_file = tmp_path / "out.txt"
    code, out, _ = run(capsys, "synth", t, "-m", "1", "--db-dir", str(db_dir), "-o", str(out_file))
    assert code == 0 and "T-count = 1" in out
    lines = [ln for ln in out_file.read_text().splitlines() if ln.split()[0] == "T"]
    assert len(lines) == 1
    code, _, err = run(capsys, "synth", write(tmp_path, "tht.txt", "T 1\nH 1\nT 1\n"), "-m", "1", "--db-dir", str(db_dir))
    assert code == 2 and "exceeds --max-m" in err
    two = write(tmp_path, "two.txt", "T 1\nCNOT 1 2\nT 2\nH 1\nT 1\n")
    code, out, _ = run(capsys, "synth", two, "-m", "4", "--db-dir", str(db_dir), "-o", str(out_file), "--peel")
    assert code == 0
    circ = Circuit.parse(out_file.read_text())
    assert channel_from_circuit(circ) == channel_from_circuit(Circuit.parse(open(two).read()))
    code, out, _ = run(capsys, "verify", str(out_file), two)
    assert code == 0


def test_sde(tmp_path, capsys, db_dir):
    ident = write(tmp_path, "id.txt", format_matrix(UnitaryMatrix.identity(1)))
    assert run(capsys, "sde", ident)[1].startswith("sde = 0")
    assert run(capsys, "sde", write(tmp_path, "t.txt", "T 1\n"))[1].startswith("sde = 1")
    htht = write(tmp_path, "h.txt", "H 1\nT 1\nH 1\nT 1\n")
    _, out, _ = run(capsys, "sde", htht, "--output", "kv")
    _, out2, _ = run(capsys, "count", htht, "-m", "2", "--db-dir", str(db_dir), "--output", "kv")
    assert "tcount=2" in out and "tcount=2" in out2
    code, _, err = run(capsys, "sde", write(tmp_path, "c.txt", "CNOT 1 2\n"))
    assert code == 1 and "n=1" in err


def test_verify(tmp_path, capsys):
    tof_c = write(tmp_path, "tof.txt", TOFFOLI_CIRCUIT_TEXT)
    tof_m = write(tmp_path, "tofm.txt", format_matrix(toffoli()))
    code, out, _ = run(capsys, "verify", tof_c, tof_m)
    assert code == 0 and "7 T gates" in out
    empty = write(tmp_path, "e.txt", "qubits 2\n")
    assert run(capsys, "verify", empty, write(tmp_path, "i.txt", format_matrix(UnitaryMatrix.identity(2))))[0] == 0
    code, out, _ = run(capsys, "verify", write(tmp_path, "t.txt", "T 1\n"), write(tmp_path, "s.txt", "S 1\n"))
    assert code == 1 and "mismatch at row X, column X" in out


def test_matrix_grammar_errors():
    with pytest.raises(ValueError, match="line 1"):
        parse_matrix("unitary m=1\n")
    with pytest.raises(ValueError, match="line 3, column 11"):
        parse_matrix("unitary n=1\n1,0,0,0,0 0,0,0,0,0\n0,0,0,0,0 0.5,0,0,0,0\n")
    with pytest.raises(ValueError, match="expected 2 matrix rows"):
        parse_matrix("unitary n=1\n1,0,0,0,0 0,0,0,0,0\n")
    U = parse_matrix(format_matrix(toffoli()))
    assert U == toffoli()
