"""Non-existence certificates: weights c_{gamma,d} whose combination of rows
equals the functional M(0), plus the weight-symmetric (tridiagonal) variant."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterator

from ._config import CONVENTION, FORMAT_VERSION, check_cap
from .linalg import RATIONAL, SparseMatrix, rank, solve_left
from .symmetry import SymmetryGroup, build_orbit_table, reduce_system
from .system import build_row, build_system

KINDS = ("full", "orbit-reduced", "symmetric")
FORMAT_NAME = "circwit-witness"
# Above this order a symmetric certificate is checked at the tridiagonal level.
SYMMETRIC_FULL_EXPANSION_MAX_N = 16


class CertificateError(ValueError):
    """Malformed certificate or one produced under a different convention."""


@dataclass
class TridiagonalSystem:
    """Rows: the aggregated expressions for w = 0, 2, ..., n written in the
    single-weight basis. Row w has C(n-w+2, 2) at w-2, w(n-w) at w, C(w+2, 2)
    at w+2."""

    n: int
    rows: dict

    @property
    def weights(self) -> list[int]:
        return list(range(0, self.n + 1, 2))

    def matrix(self) -> SparseMatrix:
        return SparseMatrix((self.rows[w] for w in self.weights), len(self.weights), RATIONAL)

    def iter_rows(self):
        for w in self.weights:
            yield w, {c // 2: v for c, v in self.rows[w].items()}

    @property
    def ncols(self) -> int:
        return len(self.weights)

    @property
    def nrows(self) -> int:
        return len(self.weights)

    def dense(self) -> list[list[int]]:
        size = len(self.weights)
        out = []
        for w in self.weights:
            row = [0] * size
            for c, v in self.rows[w].items():
                row[c // 2] = v
            out.append(row)
        return out


def build_tridiagonal(n: int) -> TridiagonalSystem:
    if n % 2 or n < 2:
        raise ValueError(f"n must be a positive even integer, got {n}")
    rows = {}
    for w in range(0, n + 1, 2):
        row = {}
        entries = ((w - 2, comb(n - w + 2, 2)), (w, w * (n - w)), (w + 2, comb(w + 2, 2)))
        for col, v in entries:
            if 0 <= col <= n and v:
                row[col] = v
        rows[w] = row
    return TridiagonalSystem(n, rows)


def tridiagonal_rank(T: TridiagonalSystem) -> int:
    return rank(T, field=RATIONAL).rank


def symmetric_witness(n: int, seed: int = 0) -> dict | None:
    """Weights c_w with sum_w c_w * (aggregate at weight w) = M(0), or None."""
    if n % 4:
        raise ValueError(f"symmetric witnesses need 4 | n (no Hadamard matrix of order {n} exists)")
    sol = solve_left(build_tridiagonal(n), {0: 1}, seed=seed)
    if sol is None:
        return None
    return {w: Fraction(c) for w, c in sorted(sol.coefficients.items())}


def _frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass
class WitnessCertificate:
    n: int
    kind: str
    weights: dict
    convention: str = CONVENTION
    provenance: dict = field(default_factory=dict)
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        if self.kind not in KINDS:
            raise CertificateError(f"unknown certificate kind {self.kind!r}")
        self.weights = {k: Fraction(v) for k, v in self.weights.items() if v}

    def to_dict(self) -> dict:
        width = max(1, (self.n + 3) // 4)
        if self.kind == "symmetric":
            weights = [{"w": w, "c": _frac_str(c)} for w, c in sorted(self.weights.items())]
        else:
            weights = [{"gamma": f"0x{g:0{width}x}", "d": d, "c": _frac_str(c)}
                       for (g, d), c in sorted(self.weights.items())]
        return {
            "format": FORMAT_NAME,
            "format_version": self.format_version,
            "n": self.n,
            "kind": self.kind,
            "convention": self.convention,
            "target": "M(0)",
            "provenance": self.provenance,
            "weights": weights,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "WitnessCertificate":
        try:
            data = json.loads(text)
            n = int(data["n"])
            kind = data["kind"]
            convention = data["convention"]
            raw = data["weights"]
            if kind == "symmetric":
                weights = {int(e["w"]): Fraction(e["c"]) for e in raw}
            else:
                weights = {(int(e["gamma"], 16), int(e["d"])): Fraction(e["c"]) for e in raw}
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise CertificateError(f"cannot parse certificate: {exc}") from exc
        return cls(n, kind, weights, convention, data.get("provenance", {}),
                   int(data.get("format_version", FORMAT_VERSION)))

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json())

    @classmethod
    def load(cls, path) -> "WitnessCertificate":
        with open(path) as fh:
            return cls.from_json(fh.read())


def find_witness(n: int, mode: str = "full", seed: int = 0, cap: int | None = None):
    """Search for a certificate; None means M(0) is not in the row space,
    i.e. a circulant Hadamard matrix of order n exists."""
    if n % 2 or n < 2:
        raise ValueError(f"n must be a positive even integer, got {n}")
    check_cap(n, cap, "witness search")
    provenance = {"solver": "streaming-sparse-elimination", "pivot": "markowitz-colcount",
                  "prime_seed": seed}
    if mode == "symmetric":
        weights = symmetric_witness(n, seed)
        if weights is None:
            return None
        provenance["system"] = "tridiagonal"
        return WitnessCertificate(n, "symmetric", weights, provenance=provenance)
    system = build_system(n, "even", cap=cap)
    if mode == "full":
        sol = solve_left(system, {system.column_index(0): 1}, seed=seed)
        provenance["system"] = "even-coset"
    elif mode == "orbit-reduced":
        reduced = reduce_system(system, build_orbit_table(n, cap))
        sol = solve_left(reduced, reduced.target(), seed=seed)
        provenance["system"] = "even-coset-orbit-reduced"
    else:
        raise ValueError(f"unknown mode {mode!r}; expected one of {KINDS}")
    if sol is None:
        return None
    provenance["prime"] = sol.prime
    return WitnessCertificate(n, mode, sol.coefficients, provenance=provenance)


@dataclass
class VerificationReport:
    n: int
    kind: str
    level: str
    passed: bool
    rows_used: int
    columns_checked: int
    residuals: list

    @property
    def nonzero_residuals(self) -> int:
        return len(self.residuals)

    def lines(self) -> list[str]:
        width = max(1, (self.n + 3) // 4)
        out = [f"n={self.n} kind={self.kind} level={self.level}",
               f"rows_used={self.rows_used} columns_checked={self.columns_checked}",
               f"nonzero_residual_columns={self.nonzero_residuals}"]
        for g, v in self.residuals[:20]:
            label = f"w={g}" if self.level == "tridiagonal" else f"gamma=0x{g:0{width}x}"
            out.append(f"  residual {label}: {_frac_str(v)}")
        out.append("PASS" if self.passed else "FAIL")
        return out


def _weighted_rows(cert: WitnessCertificate) -> Iterator[tuple[int, int, Fraction]]:
    n = cert.n
    half = n // 2
    if cert.kind == "full":
        for (g, d), c in sorted(cert.weights.items()):
            if not 0 <= g < (1 << n) or not 1 <= d <= half:
                raise CertificateError(f"weight key (0x{g:x}, {d}) outside the system")
            yield g, d, c
    elif cert.kind == "orbit-reduced":
        group = SymmetryGroup(n)
        for (r, d), c in sorted(cert.weights.items()):
            if not 0 <= r < (1 << n) or not 1 <= d <= half:
                raise CertificateError(f"weight key (0x{r:x}, {d}) outside the system")
            orbit = group.row_orbit(r, d)
            if min(orbit) != (r, d):
                raise CertificateError(f"key (0x{r:x}, {d}) is not a canonical orbit representative")
            for g, dd in sorted(orbit):
                yield g, dd, c
    else:
        for w, c in sorted(cert.weights.items()):
            if w % 2 or not 0 <= w <= n:
                raise CertificateError(f"symmetric weight index {w} must be even in 0..{n}")
            for support in combinations(range(n), w):
                g = sum(1 << i for i in support)
                for d in range(1, half + 1):
                    yield g, d, c


def _accumulate(n: int, items) -> dict:
    acc: dict[int, Fraction] = {}
    for g, d, c in items:
        for key, coef in build_row(g, d, n).terms.items():
            acc[key] = acc.get(key, 0) + c * coef
    return acc


def verify_certificate(cert: WitnessCertificate, threads: int = 1, level: str = "auto") -> VerificationReport:
    """Regenerate every weighted row from scratch and check that the weighted
    sum is exactly the unit functional at gamma = 0."""
    if cert.convention != CONVENTION:
        raise CertificateError(f"certificate convention {cert.convention!r} does not match {CONVENTION!r}")
    n = cert.n
    if n % 2 or n < 2:
        raise CertificateError(f"n must be a positive even integer, got {n}")
    if level == "auto":
        level = ("tridiagonal" if cert.kind == "symmetric" and n > SYMMETRIC_FULL_EXPANSION_MAX_N
                 else "full")
    if level == "tridiagonal":
        if cert.kind != "symmetric":
            raise CertificateError("tridiagonal-level verification applies to symmetric certificates only")
        T = build_tridiagonal(n)
        acc: dict[int, Fraction] = {}
        for w, c in cert.weights.items():
            if w not in T.rows:
                raise CertificateError(f"symmetric weight index {w} must be even in 0..{n}")
            for col, v in T.rows[w].items():
                acc[col] = acc.get(col, 0) + c * v
        acc[0] = acc.get(0, 0) - 1
        residuals = sorted((k, v) for k, v in acc.items() if v)
        return VerificationReport(n, cert.kind, level, not residuals, len(cert.weights),
                                  len(T.weights), residuals)

    items = list(_weighted_rows(cert))
    if threads > 1 and len(items) > 1:
        size = -(-len(items) // threads)
        blocks = [items[i:i + size] for i in range(0, len(items), size)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(lambda b: _accumulate(n, b), blocks))
        acc = {}
        for part in partials:
            for k, v in part.items():
                acc[k] = acc.get(k, 0) + v
    else:
        acc = _accumulate(n, items)
    acc[0] = acc.get(0, 0) - 1
    residuals = sorted((k, v) for k, v in acc.items() if v)
    return VerificationReport(n, cert.kind, level, not residuals, len(items), 1 << n, residuals)
