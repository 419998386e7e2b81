"""Sparse exact elimination over Q and prime fields.

Matrices are consumed as streams of ``(label, {column: value})`` rows, so the
(n/2) 2^n rows of the big systems never need to be resident at once; only the
echelon basis is kept. Any object with ``ncols`` and ``iter_rows()`` works as
a matrix.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from sympy import nextprime, prevprime

RATIONAL = "Q"


def choose_prime(seed: int = 0) -> int:
    """Deterministic pseudo-random prime in (2^30, 2^31)."""
    rnd = random.Random(seed)
    p = nextprime(rnd.randrange(2**30, 2**31))
    if p >= 2**31:
        p = prevprime(2**31)
    return int(p)


class SparseMatrix:
    def __init__(self, rows: Iterable[Mapping[int, object]], ncols: int, field=RATIONAL):
        self.ncols = ncols
        self.field = field
        self.rows = []
        for i, row in enumerate(rows):
            clean = {}
            for c, v in row.items():
                if not 0 <= c < ncols:
                    raise IndexError(f"row {i}: column {c} outside 0..{ncols - 1}")
                v = Fraction(v) if field == RATIONAL else int(v) % field
                if v:
                    clean[c] = v
            self.rows.append(clean)

    @classmethod
    def from_dense(cls, rows, field=RATIONAL) -> "SparseMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        return cls(({j: v for j, v in enumerate(r) if v} for r in rows), ncols, field)

    @classmethod
    def identity(cls, size: int, field=RATIONAL) -> "SparseMatrix":
        return cls(({i: 1} for i in range(size)), size, field)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def iter_rows(self):
        return enumerate(self.rows)

    def to_dense(self) -> list:
        zero = Fraction(0) if self.field == RATIONAL else 0
        out = []
        for r in self.rows:
            dense = [zero] * self.ncols
            for c, v in r.items():
                dense[c] = v
            out.append(dense)
        return out


@dataclass
class RankResult:
    rank: int
    field: str
    nrows: int
    ncols: int
    prime: int | None = None
    certified: bool = True
    pivot_columns: tuple = ()
    pivot_rows: tuple = ()
    basis_nnz: int = 0
    fill_in: int = 0
    max_bits: int = 0
    rows_consumed: int = 0

    def summary(self) -> dict:
        return {
            "rank": self.rank,
            "field": self.field,
            "prime": self.prime,
            "certified_rational_rank": self.certified,
            "nrows": self.nrows,
            "ncols": self.ncols,
            "rows_consumed": self.rows_consumed,
            "basis_nnz": self.basis_nnz,
            "fill_in": self.fill_in,
            "max_bits": self.max_bits,
        }


class Eliminator:
    """Incremental row echelon basis.

    Basis row i never contains the pivot column of an earlier basis row, so a
    new row is reduced by clearing pivot columns in insertion order. Pivot
    choice is Markowitz-like: the column of the reduced row that occurs in the
    fewest basis rows so far, ties broken toward the larger column index.
    """

    def __init__(self, ncols: int, prime: int | None = None, track: bool = False):
        self.ncols = ncols
        self.prime = prime
        self.track = track
        self.basis: dict[int, dict] = {}
        self.prov: dict[int, dict] = {}
        self.order: dict[int, int] = {}
        self.pivots: list[int] = []
        self.labels: list = []
        self.colcount: dict[int, int] = {}
        self.basis_nnz = 0
        self.pivot_input_nnz = 0
        self.max_bits = 0

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def full(self) -> bool:
        return self.rank == self.ncols

    def _convert(self, row: Mapping) -> dict:
        p = self.prime
        if p is None:
            return {c: Fraction(v) for c, v in row.items() if v}
        out = {}
        for c, v in row.items():
            if isinstance(v, Fraction):
                v = v.numerator * pow(v.denominator, -1, p)
            v %= p
            if v:
                out[c] = v
        return out

    def reduce(self, row: Mapping, prov: dict | None = None):
        """Reduce ``row`` against the basis; returns (remainder, provenance).

        ``prov`` accumulates minus the combination of original rows subtracted.
        """
        r = self._convert(row)
        p = self.prime
        basis, order = self.basis, self.order
        heap = [order[c] for c in r if c in basis]
        heapq.heapify(heap)
        while heap:
            c = self.pivots[heapq.heappop(heap)]
            f = r.get(c)
            if not f:
                continue
            for k, v in basis[c].items():
                if k in r:
                    x = r[k] - f * v
                    if p is not None:
                        x %= p
                    if x:
                        r[k] = x
                    else:
                        del r[k]
                else:
                    r[k] = -f * v if p is None else (-f * v) % p
                    if k in basis:
                        heapq.heappush(heap, order[k])
            if prov is not None:
                for lab, v in self.prov[c].items():
                    x = prov.get(lab, 0) - f * v
                    if p is not None:
                        x %= p
                    if x:
                        prov[lab] = x
                    else:
                        prov.pop(lab, None)
        return r, prov

    def insert(self, row: Mapping, label=None) -> bool:
        """Add a row; returns True when it was independent of the basis."""
        if self.full:
            return False
        prov = {label: (Fraction(1) if self.prime is None else 1)} if self.track else None
        r, prov = self.reduce(row, prov)
        if not r:
            return False
        cc = self.colcount
        piv = min(r, key=lambda c: (cc.get(c, 0), -c))
        f = r[piv]
        if self.prime is None:
            inv = 1 / f
            r = {k: v * inv for k, v in r.items()}
            if prov is not None:
                prov = {k: v * inv for k, v in prov.items()}
            bits = max(max(v.numerator.bit_length(), v.denominator.bit_length()) for v in r.values())
            self.max_bits = max(self.max_bits, bits)
        else:
            p = self.prime
            inv = pow(f, -1, p)
            r = {k: v * inv % p for k, v in r.items()}
            if prov is not None:
                prov = {k: v * inv % p for k, v in prov.items()}
        for k in r:
            cc[k] = cc.get(k, 0) + 1
        self.order[piv] = len(self.pivots)
        self.pivots.append(piv)
        self.labels.append(label)
        self.basis[piv] = r
        if prov is not None:
            self.prov[piv] = prov
        self.basis_nnz += len(r)
        self.pivot_input_nnz += len(row)
        return True

    def express(self, target: Mapping) -> dict | None:
        """Coefficients c (keyed by row label) with sum c_label * row = target,
        or None if target is outside the span. Needs ``track=True``."""
        if not self.track:
            raise RuntimeError("express() needs an Eliminator built with track=True")
        r, prov = self.reduce(target, {})
        if r:
            return None
        p = self.prime
        return {lab: (-v if p is None else (-v) % p) for lab, v in prov.items() if v}

    def reduced_basis(self) -> dict:
        """Fully reduced rows: each contains its own pivot and non-pivot columns only."""
        rref: dict[int, dict] = {}
        p = self.prime
        for piv in reversed(self.pivots):
            row = dict(self.basis[piv])
            for c in [c for c in row if c != piv and c in self.basis]:
                f = row.get(c)
                if not f:
                    continue
                for k, v in rref[c].items():
                    x = row.get(k, 0) - f * v
                    if p is not None:
                        x %= p
                    if x:
                        row[k] = x
                    else:
                        row.pop(k, None)
            rref[piv] = row
        return rref

    def result(self, nrows: int, rows_consumed: int, certified: bool) -> RankResult:
        return RankResult(
            rank=self.rank,
            field=RATIONAL if self.prime is None else f"GF({self.prime})",
            nrows=nrows,
            ncols=self.ncols,
            prime=self.prime,
            certified=certified,
            pivot_columns=tuple(self.pivots),
            pivot_rows=tuple(self.labels),
            basis_nnz=self.basis_nnz,
            fill_in=self.basis_nnz - self.pivot_input_nnz,
            max_bits=self.max_bits,
            rows_consumed=rows_consumed,
        )


def _eliminate(A, prime, track=False, only=None):
    elim = Eliminator(A.ncols, prime=prime, track=track)
    consumed = 0
    for label, row in A.iter_rows():
        if elim.full:
            break
        if only is not None and label not in only:
            continue
        consumed += 1
        elim.insert(row, label)
    return elim, consumed


def _nrows(A, consumed):
    return getattr(A, "nrows", consumed)


def rank(A, field="auto", seed: int = 0) -> RankResult:
    """Rank of a streamed matrix.

    field: ``"Q"``/``"rational"`` for exact rational rank, an int prime for
    rank over GF(p), or ``"auto"``: rank modulo a seeded 31-bit prime, replayed
    over Q only when the modular rank does not already reach min(nrows, ncols).
    A modular rank is always a lower bound for the rational rank.
    """
    if field in (RATIONAL, "rational"):
        elim, consumed = _eliminate(A, None)
        return elim.result(_nrows(A, consumed), consumed, True)
    if isinstance(field, int):
        elim, consumed = _eliminate(A, field)
        nrows = _nrows(A, consumed)
        return elim.result(nrows, consumed, elim.rank == min(nrows, A.ncols))
    if field != "auto":
        raise ValueError(f"unknown field {field!r}")
    p = choose_prime(seed)
    elim, consumed = _eliminate(A, p)
    nrows = _nrows(A, consumed)
    if elim.rank == min(nrows, A.ncols):
        return elim.result(nrows, consumed, True)
    elim, consumed = _eliminate(A, None)
    return elim.result(_nrows(A, consumed), consumed, True)


@dataclass
class LeftSolution:
    coefficients: dict
    prime: int
    seed: int
    independent_rows: int
    fallback: bool = False
    extra: dict = field(default_factory=dict)


def solve_left(A, target: Mapping, seed: int = 0) -> LeftSolution | None:
    """Find exact rational c with sum_label c[label] * row[label] == target.

    A modular pass picks out rows independent mod p (hence independent over Q);
    the rational solve then runs on those rows only. If that fails and the
    modular rank was not full, the solve is repeated over all rows so an unlucky
    prime cannot turn a solvable system into a reported None.
    Returns None when target is not in the row space.
    """
    p = choose_prime(seed)
    mod, _ = _eliminate(A, p)
    independent = set(mod.labels)
    elim, _ = _eliminate(A, None, track=True, only=independent)
    c = elim.express(target)
    fallback = False
    if c is None and not mod.full:
        fallback = True
        elim, _ = _eliminate(A, None, track=True)
        c = elim.express(target)
    if c is None:
        return None
    return LeftSolution(c, p, seed, elim.rank, fallback)


def kernel_basis(A) -> list[dict]:
    """Basis of {x : A x = 0} over Q as sparse {column: Fraction} vectors."""
    elim, _ = _eliminate(A, None)
    rref = elim.reduced_basis()
    free = [c for c in range(A.ncols) if c not in rref]
    basis = []
    for f in free:
        vec = {f: Fraction(1)}
        for piv, row in rref.items():
            v = row.get(f)
            if v:
                vec[piv] = -v
        basis.append(vec)
    return basis


def combine_rows(A, coefficients: Mapping) -> dict:
    """sum_label c[label] * row[label] as a sparse vector (exact)."""
    acc: dict[int, Fraction] = {}
    for label, row in A.iter_rows():
        c = coefficients.get(label)
        if not c:
            continue
        for k, v in row.items():
            acc[k] = acc.get(k, 0) + c * v
    return {k: v for k, v in acc.items() if v}


def apply(A, x: Mapping) -> list:
    """A x for a sparse vector x."""
    out = []
    for _, row in A.iter_rows():
        out.append(sum((v * x.get(k, 0) for k, v in row.items()), Fraction(0)))
    return out
