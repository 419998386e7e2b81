"""Brute-force ground truth: periodic autocorrelations, exhaustive search for
circulant Hadamard generators, and Turyn's admissibility filter."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import isqrt

import numpy as np
from sympy import factorint

from ._config import CapExceeded
from .walsh import SignVector

MAX_N_FOLDED = 28
MAX_N_UNFOLDED = 24
CHUNK = 1 << 18


def periodic_autocorrelation(u: SignVector, d: int) -> int:
    n = u.n
    if not 0 <= d < n:
        raise ValueError(f"shift {d} outside 0..{n - 1}")
    return sum(u[j] * u[(j + d) % n] for j in range(n))


def is_circulant_hadamard(u: SignVector) -> bool:
    """True iff every non-trivial periodic autocorrelation vanishes."""
    return all(periodic_autocorrelation(u, d) == 0 for d in range(1, u.n // 2 + 1))


def circulant_matrix(u) -> list[list[int]]:
    """c[i][j] = u[j - i] (indices mod n)."""
    u = list(u)
    n = len(u)
    return [[u[(j - i) % n] for j in range(n)] for i in range(n)]


def s_value(u: SignVector) -> int:
    """sum_{d=1}^{n-1} (sum_j u_j u_{j+d})^2; zero exactly for generators."""
    return sum(periodic_autocorrelation(u, d) ** 2 for d in range(1, u.n))


@dataclass
class SearchReport:
    n: int
    generators: list
    folded: bool
    elapsed: float = field(default=0.0, compare=False)

    @property
    def count(self) -> int:
        return len(self.generators)

    def to_dict(self) -> dict:
        # elapsed is left out so reports are reproducible byte for byte
        return {
            "kind": "circulant-hadamard-search",
            "n": self.n,
            "count": self.count,
            "symmetry_folding": self.folded,
            "generators": [str(u) for u in self.generators],
        }


def _scan(n: int, masks: np.ndarray) -> np.ndarray:
    full = (1 << n) - 1
    ok = np.ones(masks.shape, dtype=bool)
    for d in range(1, n // 2 + 1):
        rot = ((masks >> d) | (masks << (n - d))) & full
        ok &= np.bitwise_count(masks ^ rot).astype(np.int64) * 2 == n
    return masks[ok]


def _scan_range(n: int, lo: int, hi: int, step: int) -> list[int]:
    found = []
    for start in range(lo, hi, CHUNK):
        masks = np.arange(start, min(hi, start + CHUNK), dtype=np.int64) * step
        found.extend(int(m) for m in _scan(n, masks))
    return found


def brute_force_generators(n: int, fold: bool = True, threads: int = 1) -> SearchReport:
    """All +-1 vectors u of length n generating a circulant Hadamard matrix.

    With ``fold`` only u_1 = +1 is enumerated and the negations are added back;
    negation preserves every autocorrelation, so the count is exact.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    cap = MAX_N_FOLDED if fold else MAX_N_UNFOLDED
    if n > cap:
        raise CapExceeded(f"exhaustive search is capped at n={cap} ({'folded' if fold else 'unfolded'})")
    t0 = time.perf_counter()
    if n == 1:
        masks = [0, 1]
    elif n % 2:
        # odd n: every autocorrelation is odd, never zero
        masks = []
    else:
        total = 1 << (n - 1) if fold else 1 << n
        step = 2 if fold else 1
        parts = max(1, threads)
        bounds = [total * i // parts for i in range(parts + 1)]
        if parts > 1:
            with ThreadPoolExecutor(max_workers=parts) as pool:
                chunks = list(pool.map(lambda i: _scan_range(n, bounds[i], bounds[i + 1], step), range(parts)))
        else:
            chunks = [_scan_range(n, 0, total, step)]
        masks = [m for chunk in chunks for m in chunk]
        if fold:
            full = (1 << n) - 1
            masks += [m ^ full for m in masks]
    gens = [SignVector.from_mask(n, m) for m in sorted(masks)]
    return SearchReport(n, gens, fold, time.perf_counter() - t0)


def turyn_admissible(n: int) -> tuple[bool, str]:
    """n = 4u^2 with u > 1 odd and not a prime power."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n % 4:
        return False, f"{n} is not divisible by 4"
    m = n // 4
    u = isqrt(m)
    if u * u != m:
        return False, f"n/4 = {m} is not a perfect square"
    if u == 1:
        return False, "u = 1 (the order-4 case is the classical exception)"
    if u % 2 == 0:
        return False, f"u = {u} is even"
    primes = factorint(u)
    if len(primes) == 1:
        (p, e), = primes.items()
        return False, f"u = {u} = {p}^{e} is a prime power"
    return True, f"u = {u} is odd and not a prime power"
