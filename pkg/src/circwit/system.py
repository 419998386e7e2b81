"""The homogeneous system sum_{j-k=d} M(gamma + pi_j + pi_k) = 0, the S
polynomial and the convolution S * M."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from ._config import CONVENTION, check_cap
from .walsh import GroupElement, WalshPolynomial, popcount, walsh_transform

COSETS = ("even", "odd", "both")


def _mask(g) -> int:
    return g.bits if isinstance(g, GroupElement) else int(g)


def pair_masks(d: int, n: int) -> list[int]:
    """Masks pi_j + pi_{j-d} for every pair at cyclic distance d.

    For d = n/2 each antipodal pair is listed once (j = 1..n/2).
    """
    if n % 2:
        raise ValueError(f"n must be even, got {n}")
    if not 1 <= d <= n // 2:
        raise ValueError(f"shift distance d={d} outside 1..{n // 2}")
    js = range(n // 2) if 2 * d == n else range(n)
    return [(1 << j) | (1 << ((j - d) % n)) for j in js]


@dataclass(frozen=True)
class EquationRow:
    gamma: int
    d: int
    n: int
    terms: dict

    def keys(self):
        return sorted(self.terms)

    def evaluate(self, u_mask: int) -> int:
        """sum of coefficient * u^key for the sign vector with mask u_mask."""
        return sum(-c if popcount(k & u_mask) & 1 else c for k, c in self.terms.items())


def build_row(gamma, d: int, n: int) -> EquationRow:
    g = _mask(gamma)
    if not 0 <= g < (1 << n):
        raise ValueError(f"gamma {g:#x} outside Z_2^{n}")
    terms: dict[int, int] = {}
    for p in pair_masks(d, n):
        key = g ^ p
        terms[key] = terms.get(key, 0) + 1
    return EquationRow(g, d, n, terms)


def coset_masks(n: int, coset: str) -> Iterator[int]:
    if coset not in COSETS:
        raise ValueError(f"unknown coset {coset!r}; expected one of {COSETS}")
    for g in range(1 << n):
        if coset == "both" or (popcount(g) & 1) == (coset == "odd"):
            yield g


class MtilingSystem:
    """Streaming view of all rows (gamma, d), gamma in the chosen parity coset,
    in lexicographic (gamma, d) order. Rows are regenerated on every pass.

    Column indices: for ``both`` the column of M(gamma) is gamma itself; for a
    single coset it is gamma >> 1 (exactly one of 2i, 2i+1 has each parity, so
    this is the rank of gamma inside the coset).
    """

    def __init__(self, n: int, coset: str = "both", cap: int | None = None):
        if n % 2 or n < 2:
            raise ValueError(f"n must be a positive even integer, got {n}")
        if coset not in COSETS:
            raise ValueError(f"unknown coset {coset!r}; expected one of {COSETS}")
        check_cap(n, cap, "system")
        self.n = n
        self.coset = coset
        self.half = n // 2
        self.convention = CONVENTION

    @property
    def ncols(self) -> int:
        return (1 << self.n) if self.coset == "both" else (1 << (self.n - 1))

    @property
    def nrows(self) -> int:
        return self.half * self.ncols

    def column_index(self, gamma) -> int:
        g = _mask(gamma)
        if self.coset == "both":
            return g
        if (popcount(g) & 1) != (self.coset == "odd"):
            raise ValueError(f"{g:#x} is not in the {self.coset} coset")
        return g >> 1

    def column_mask(self, index: int) -> int:
        if self.coset == "both":
            return index
        hi = index << 1
        return hi if (popcount(hi) & 1) == (self.coset == "odd") else hi | 1

    def gammas(self) -> Iterator[int]:
        return coset_masks(self.n, self.coset)

    def rows(self) -> Iterator[EquationRow]:
        pairs = [pair_masks(d, self.n) for d in range(1, self.half + 1)]
        for g in self.gammas():
            for d, ps in enumerate(pairs, start=1):
                terms: dict[int, int] = {}
                for p in ps:
                    terms[g ^ p] = terms.get(g ^ p, 0) + 1
                yield EquationRow(g, d, self.n, terms)

    def iter_rows(self):
        """(label, {column: coefficient}) pairs; labels are (gamma, d)."""
        col = self.column_index
        for row in self.rows():
            yield (row.gamma, row.d), {col(k): c for k, c in row.terms.items()}

    def nnz(self) -> int:
        per_gamma = sum(len(pair_masks(d, self.n)) for d in range(1, self.half + 1))
        return per_gamma * (self.ncols)


def build_system(n: int, coset: str = "both", cap: int | None = None) -> MtilingSystem:
    return MtilingSystem(n, coset, cap)


def s_coefficients(n: int) -> WalshPolynomial:
    """Walsh coefficients of sum_{d=1}^{n-1} (sum_j u_j u_{j+d})^2.

    Each product u_j u_{j+d} u_k u_{k+d} contributes +1 at the XOR of the four
    unit masks.
    """
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    coeffs: dict[int, int] = {}
    for d in range(1, n):
        prods = [(1 << j) ^ (1 << ((j + d) % n)) for j in range(n)]
        for a in prods:
            for b in prods:
                key = a ^ b
                coeffs[key] = coeffs.get(key, 0) + 1
    return WalshPolynomial(n, coeffs)


def convolve(S: WalshPolynomial, M: Sequence, method: str = "direct") -> list:
    """(S * M)(gamma) = sum_rho M(gamma + rho) S(rho).

    ``method='direct'`` sums over the support of S; ``method='walsh'`` multiplies
    Walsh transforms and transforms back.
    """
    size = 1 << S.n
    if len(M) != size:
        raise ValueError(f"M has length {len(M)}, expected 2^{S.n} = {size}")
    if method == "direct":
        out = [Fraction(0)] * size
        support = S.items()
        for g in range(size):
            out[g] = sum((M[g ^ r] * c for r, c in support), Fraction(0))
        return out
    if method == "walsh":
        fs = walsh_transform(S.to_dense())
        fm = walsh_transform([Fraction(v) for v in M])
        prod = walsh_transform([a * b for a, b in zip(fs, fm)])
        return [v / size for v in prod]
    raise ValueError(f"unknown convolution method {method!r}")


def character_vector(n: int, u_mask: int) -> list:
    """Dense M(gamma) = u^gamma over all gamma."""
    return [-1 if popcount(g & u_mask) & 1 else 1 for g in range(1 << n)]
