"""Command-line front end.

Exit codes: 0 success; 1 verification failed (or an identity check failed);
2 no witness exists; 64 usage; 65 bad input data; 70 size cap exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time
from math import isqrt

from ._config import CONVENTION, FORMAT_VERSION, CapExceeded
from .linalg import rank
from .mtx import read_matrix, write_system
from .oracle import brute_force_generators, s_value
from .system import COSETS, build_system, s_coefficients
from .walsh import SignVector, walsh_transform
from .witness import (CertificateError, WitnessCertificate, build_tridiagonal, find_witness,
                      tridiagonal_rank, verify_certificate)

EX_OK, EX_FAIL, EX_NONE = 0, 1, 2
EX_USAGE, EX_DATAERR, EX_SOFTWARE = 64, 65, 70

log = logging.getLogger("circwit")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _even_n(args):
    if args.n < 2 or args.n % 2:
        raise UsageError(f"--n must be a positive even integer, got {args.n}")


def fingerprint(args) -> str:
    """Hash of the run configuration; thread count and output path excluded."""
    config = {k: v for k, v in sorted(vars(args).items())
              if k not in ("threads", "out", "func", "verbose")}
    config["convention"] = CONVENTION
    config["format_version"] = FORMAT_VERSION
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)


def cmd_oracle(args):
    report = brute_force_generators(args.n, fold=not args.no_fold, threads=args.threads)
    log.info("oracle n=%d elapsed %.3fs", args.n, report.elapsed)
    print(f"generators: {report.count}")
    _emit(args, json.dumps(report.to_dict(), indent=1, sort_keys=True) + "\n")
    return EX_OK


def cmd_system(args):
    _even_n(args)
    system = build_system(args.n, args.coset)
    if args.out:
        with open(args.out, "w") as fh:
            nnz = write_system(system, fh)
        print(f"wrote {args.out}: {system.nrows} rows x {system.ncols} cols, {nnz} entries")
    else:
        write_system(system, sys.stdout)
    return EX_OK


def _field(value: str):
    if value in ("auto", "rational", "Q"):
        return value
    try:
        return int(value)
    except ValueError:
        raise UsageError(f"--field must be auto, rational or a prime, got {value!r}") from None


def cmd_rank(args):
    field = _field(args.field)
    if args.file:
        try:
            with open(args.file) as fh:
                matrix, meta = read_matrix(fh)
        except OSError as exc:
            raise UsageError(str(exc)) from exc
        if meta.get("convention", CONVENTION) != CONVENTION:
            raise CertificateError(f"file convention {meta['convention']!r} does not match {CONVENTION!r}")
    elif args.n is not None:
        _even_n(args)
        matrix = build_system(args.n, args.coset)
    else:
        raise UsageError("rank needs --n or --file")
    t0 = time.perf_counter()
    result = rank(matrix, field=field, seed=args.seed)
    log.info("rank elapsed %.3fs", time.perf_counter() - t0)
    summary = result.summary()
    summary["full_column_rank"] = result.rank == result.ncols
    print(f"rank: {result.rank} / {result.ncols}")
    _emit(args, json.dumps(summary, indent=1, sort_keys=True) + "\n")
    return EX_OK


def cmd_witness(args):
    _even_n(args)
    if args.mode == "symmetric" and args.n % 4:
        raise UsageError("symmetric witnesses need --n divisible by 4")
    t0 = time.perf_counter()
    cert = find_witness(args.n, args.mode, seed=args.seed)
    log.info("witness search elapsed %.3fs", time.perf_counter() - t0)
    if cert is None:
        msg = f"no witness for n={args.n}: M(0) is not in the span of the system rows"
        if args.n <= 16:
            report = brute_force_generators(args.n, threads=args.threads)
            if report.count:
                msg += (f"; a circulant Hadamard matrix of order {args.n} exists,"
                        f" e.g. generated by {report.generators[0]}")
        print(msg)
        return EX_NONE
    print(f"witness: n={cert.n} kind={cert.kind} weights={len(cert.weights)}")
    _emit(args, cert.to_json())
    return EX_OK


def cmd_verify(args):
    try:
        cert = WitnessCertificate.load(args.certificate)
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    report = verify_certificate(cert, threads=args.threads, level=args.level)
    print("\n".join(report.lines()))
    return EX_OK if report.passed else EX_FAIL


def cmd_tridiag(args):
    _even_n(args)
    T = build_tridiagonal(args.n)
    for w, row in zip(T.weights, T.dense()):
        print(f"w={w:3d}: " + " ".join(str(v) for v in row))
    r = tridiagonal_rank(T)
    m = args.n // 4
    square = args.n % 4 == 0 and isqrt(m) ** 2 == m
    print(f"size: {len(T.weights)}")
    print(f"rank: {r}")
    print(f"n=4u^2: {'yes' if square else 'no'}")
    return EX_OK


def cmd_scoeffs(args):
    S = s_coefficients(args.n)
    width = max(1, (args.n + 3) // 4)
    lines = [f"# S coefficients n={args.n} terms={len(S)} total={S.total()}"]
    lines += [f"0x{g:0{width}x} {c}" for g, c in S.items()]
    _emit(args, "\n".join(lines) + "\n")
    return EX_OK


def cmd_wht_check(args):
    n = args.n
    values = walsh_transform(s_coefficients(n).to_dense())
    mismatches = negatives = 0
    zeros = []
    for x, v in enumerate(values):
        u = SignVector.from_mask(n, x)
        if v != s_value(u):
            mismatches += 1
        if v < 0:
            negatives += 1
        if v == 0:
            zeros.append(str(u))
    print(f"points: {len(values)}")
    print(f"mismatches: {mismatches}")
    print(f"negative: {negatives}")
    print(f"zeros: {len(zeros)}")
    for z in zeros[:16]:
        print(f"  {z}")
    return EX_OK if mismatches == 0 and negatives == 0 else EX_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="circwit", description=__doc__.splitlines()[0] if __doc__ else None)
    parser.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker threads (results do not depend on it)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="worker threads (results do not depend on it)")

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_, parents=[common])
        p.set_defaults(func=func)
        return p

    p = add("oracle", cmd_oracle, "exhaustive search for circulant Hadamard generators")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--no-fold", action="store_true", help="enumerate all 2^n vectors")
    p.add_argument("--out")

    p = add("system", cmd_system, "export the linear system in coordinate format")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--coset", choices=COSETS, default="both")
    p.add_argument("--out")

    p = add("rank", cmd_rank, "rank of the system (or of a coordinate-format file)")
    p.add_argument("--n", type=int)
    p.add_argument("--coset", choices=COSETS, default="both")
    p.add_argument("--file")
    p.add_argument("--field", default="auto", help="auto, rational, or a prime")
    p.add_argument("--seed", type=int, default=0, help="seed for the modular prime")
    p.add_argument("--out")

    p = add("witness", cmd_witness, "search for a non-existence certificate")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("full", "orbit-reduced", "symmetric"), default="full")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")

    p = add("verify", cmd_verify, "verify a certificate file")
    p.add_argument("certificate")
    p.add_argument("--level", choices=("auto", "full", "tridiagonal"), default="auto")

    p = add("tridiag", cmd_tridiag, "weight-symmetric tridiagonal system and its rank")
    p.add_argument("--n", type=int, required=True)

    p = add("scoeffs", cmd_scoeffs, "dump the S polynomial coefficients")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")

    p = add("wht-check", cmd_wht_check, "check the Walsh transform of S against direct evaluation")
    p.add_argument("--n", type=int, required=True)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    print(f"convention: {CONVENTION}")
    print(f"fingerprint: {fingerprint(args)}")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_USAGE
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_SOFTWARE
    except (CertificateError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_DATAERR


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
