"""``tcount`` command line: gen-db, count, synth, sde, verify.

Exit status: 0 when T(U) <= m is decided (or a check succeeds), 2 when the
T-count exceeds --max-m, 1 on any error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from tcount.channel import NotUnitaryError, channel_from_circuit
from tcount.circuit import CircuitParseError
from tcount.pauli import Pauli
from tcount.search import MissingStratumError, TCountResult, count_t, tcount_single_qubit
from tcount.storage import (
    FORMATS,
    DatabaseFormatError,
    DimensionMismatchError,
    IncompatibleManifestError,
    build_database_dir,
    load_databases,
    read_manifest,
)
from tcount.synth import TCountExceeded, extract_optimal_circuit
from tcount.textio import MembershipError, load_file

EXIT_OK, EXIT_ERROR, EXIT_EXCEEDS = 0, 1, 2
DB_ENV = "TCOUNT_DB_DIR"
MAX_SUPPORTED_N = 3

log = logging.getLogger("tcount")


class UsageError(ValueError):
    pass


def _emit(args, text: str, **fields) -> None:
    if args.output == "kv":
        for key, value in fields.items():
            print(f"{key}={value}")
    else:
        print(text)


def _check_n(args, n: int) -> None:
    if not args.allow_any_n and not 1 <= n <= MAX_SUPPORTED_N:
        raise UsageError(f"n={n} is outside [1, {MAX_SUPPORTED_N}]; pass --allow-any-n to override")


def db_path(args, n: int) -> Path:
    """Strata for n qubits live in <db-dir>/n<n>."""
    return Path(args.db_dir) / f"n{n}"


def _load_input(args, path):
    loaded = load_file(path, args.qubits)
    _check_n(args, loaded.n)
    return loaded


def _databases(args, n: int, m: int):
    h = -(-m // 2)
    directory = db_path(args, n)
    manifest = read_manifest(directory)
    have = -1 if manifest is None else manifest["K"]
    if have < h and not (args.extend and have >= 1):
        raise MissingStratumError(have + 1)
    return load_databases(directory, n, upto=h)


def _print_certificate(result: TCountResult, n: int) -> None:
    w = result.witness
    labels = [Pauli.from_index(n, p).label for p in w.rotations]
    print("rotations (applied first to last): " + (" ".join(labels) if labels else "(none)"))
    print("clifford:")
    for line in str(w.clifford).splitlines():
        print("  " + line)


def cmd_gen_db(args) -> int:
    n = args.qubits
    if n is None:
        raise UsageError("gen-db needs --qubits")
    _check_n(args, n)
    if args.max_k < 0:
        raise UsageError("--max-k must be nonnegative")
    directory = db_path(args, n)

    def report(entry):
        _emit(args, f"D_{entry['k']}: {entry['records']} records, {entry['bytes']} bytes",
              stratum=entry["k"], records=entry["records"], bytes=entry["bytes"])

    entries, wrote = build_database_dir(directory, n, args.max_k, args.format, n_jobs=args.jobs, on_stratum=report)
    if not wrote:
        for entry in entries:
            report(entry)
        _emit(args, f"databases in {directory} already cover D_0..D_{args.max_k}; nothing to do", changed=0)
    return EXIT_OK


def _verdict(args, result: TCountResult) -> int:
    if result.decided:
        _emit(args, str(result), verdict="decided", tcount=result.tcount, m=result.m)
        return EXIT_OK
    _emit(args, str(result), verdict="exceeds", tcount=f">{result.m}", m=result.m)
    return EXIT_EXCEEDS


def cmd_count(args) -> int:
    loaded = _load_input(args, args.input)
    dbs = _databases(args, loaded.n, args.max_m)
    result = count_t(loaded.channel, args.max_m, dbs, extend=args.extend, n_jobs=args.jobs)
    status = _verdict(args, result)
    if args.certificate and result.decided:
        _print_certificate(result, loaded.n)
    return status


def cmd_synth(args) -> int:
    loaded = _load_input(args, args.input)
    dbs = _databases(args, loaded.n, args.max_m)
    try:
        circuit = extract_optimal_circuit(
            loaded.channel, dbs, args.max_m, use_witness=not args.peel, extend=args.extend
        )
    except TCountExceeded:
        print(f"T-count exceeds --max-m={args.max_m}", file=sys.stderr)
        _emit(args, f"T-count > {args.max_m}", verdict="exceeds", m=args.max_m)
        return EXIT_EXCEEDS
    text = circuit.to_text()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    _emit(args, f"T-count = {circuit.t_count()}, gates = {len(circuit)}",
          tcount=circuit.t_count(), gates=len(circuit))
    return EXIT_OK


def cmd_sde(args) -> int:
    loaded = _load_input(args, args.input)
    if loaded.n != 1:
        raise UsageError(f"sde gives the T-count only for n=1; input has n={loaded.n}")
    t = tcount_single_qubit(loaded.channel)
    _emit(args, f"sde = {t} (T-count = {t})", sde=t, tcount=t)
    return EXIT_OK


def cmd_verify(args) -> int:
    circuit = _load_input(args, args.circuit)
    if circuit.kind != "circuit":
        raise UsageError(f"{args.circuit} is not a circuit file")
    target = _load_input(args, args.input)
    if circuit.circuit.n != target.n:
        raise UsageError(f"circuit acts on {circuit.circuit.n} qubits, input on {target.n}")
    got, want = channel_from_circuit(circuit.circuit), target.channel
    tcount = circuit.circuit.t_count()
    if got == want:
        _emit(args, f"equal; circuit has {tcount} T gates", equal=1, tcount=tcount)
        return EXIT_OK
    r, s = _first_difference(got, want)
    pr, ps = Pauli.from_index(target.n, r).label, Pauli.from_index(target.n, s).label
    _emit(args, f"mismatch at row {pr}, column {ps}: circuit {got.entry(r, s)} vs input {want.entry(r, s)}",
          equal=0, row=pr, column=ps, tcount=tcount)
    return EXIT_ERROR


def _first_difference(W, V):
    for r in range(W.size):
        for s in range(W.size):
            if W.entry(r, s) != V.entry(r, s):
                return r, s
    raise AssertionError("channels differ but no entry does")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--qubits", "-n", type=int, help="number of qubits (inferred from input when omitted)")
    common.add_argument("--db-dir", default=os.environ.get(DB_ENV, "tcount-db"),
                        help=f"database directory (default ${DB_ENV} or ./tcount-db)")
    common.add_argument("--jobs", "-j", type=int, default=1, help="worker processes")
    common.add_argument("--output", choices=("text", "kv"), default="text", help="text or key=value lines")
    common.add_argument("--allow-any-n", action="store_true", help="lift the 1 <= n <= 3 restriction")
    common.add_argument("-v", "--verbose", action="count", default=0)

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--max-m", "-m", type=int, required=True, help="decide whether T(U) <= m")
    search.add_argument("--extend", action="store_true",
                        help="allow fewer strata than ceil(m/2) by enumerating the missing layers on the fly")

    parser = argparse.ArgumentParser(prog="tcount", description="Exact T-count and T-optimal synthesis")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-db", parents=[common], help="build coset databases D_0..D_K")
    p.add_argument("--max-k", "-K", type=int, required=True)
    p.add_argument("--format", choices=sorted(FORMATS), default="compact")
    p.set_defaults(func=cmd_gen_db)

    p = sub.add_parser("count", parents=[common, search], help="decide T(U) <= m and report T(U)")
    p.add_argument("input", help="circuit or matrix file")
    p.add_argument("--certificate", action="store_true", help="print the witness rotations")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("synth", parents=[common, search], help="write a T-optimal circuit")
    p.add_argument("input")
    p.add_argument("--out", "-o", help="output circuit file (default stdout)")
    p.add_argument("--peel", action="store_true", help="peel rotations one COUNT-T call at a time")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("sde", parents=[common], help="single-qubit T-count via sde")
    p.add_argument("input")
    p.set_defaults(func=cmd_sde)

    p = sub.add_parser("verify", parents=[common], help="check a circuit against a target exactly")
    p.add_argument("circuit")
    p.add_argument("input")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "max_m", 0) < 0:
        print("error: --max-m must be nonnegative", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except CircuitParseError as exc:
        print(f"error: parse error at {exc}", file=sys.stderr)
    except MissingStratumError as exc:
        print(f"error: {exc}; run 'tcount gen-db' with a larger --max-k", file=sys.stderr)
    except (MembershipError, NotUnitaryError) as exc:
        print(f"error: input is not a Clifford+T unitary: {exc}", file=sys.stderr)
    except (UsageError, DimensionMismatchError, IncompatibleManifestError, DatabaseFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"error: {exc} (completed strata remain listed in the manifest)", file=sys.stderr)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
