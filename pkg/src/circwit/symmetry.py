"""Symmetries of the system: index maps j -> k*j + t (mod n), gcd(k, n) = 1.

The maps act on characters by moving coordinates and on shift distances by
d -> k*d folded into 1..n/2. Orbits of characters give the reduced columns,
orbits of (gamma, d) the reduced rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from ._config import CONVENTION, check_cap
from .system import MtilingSystem, pair_masks


def fold_distance(d: int, n: int) -> int:
    d %= n
    return min(d, n - d)


def multipliers(n: int) -> list[int]:
    if n == 1:
        return [0]
    return [k for k in range(1, n) if gcd(k, n) == 1]


def index_permutation(k: int, t: int, n: int) -> list[int]:
    """0-based image list of the 1-based map j -> k*j + t (mod n, in 1..n)."""
    if gcd(k, n) != 1:
        raise ValueError(f"multiplier {k} is not coprime to n={n}")
    return [(k * (i + 1) + t - 1) % n for i in range(n)]


def permute_mask(mask: int, perm) -> int:
    out = 0
    for i, target in enumerate(perm):
        if mask >> i & 1:
            out |= 1 << target
    return out


def apply_index_map(gamma, k: int, t: int, n: int) -> int:
    """Move bit j of gamma to position k*j + t (1-based, mod n)."""
    g = int(getattr(gamma, "bits", gamma))
    return permute_mask(g, index_permutation(k, t, n))


class SymmetryGroup:
    """All affine index maps j -> k*j + t with k a unit mod n; order n*phi(n).

    Elements are (k, t) pairs, listed with k then t ascending; element 0 is the
    identity.
    """

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"n must be positive, got {n}")
        self.n = n
        self.elements = [(k, t) for k in multipliers(n) for t in range(n)]
        self.index = {g: i for i, g in enumerate(self.elements)}
        self.perms = [index_permutation(k, t, n) if n > 1 else [0] for k, t in self.elements]

    def __len__(self) -> int:
        return len(self.elements)

    def compose(self, a, b):
        """a after b."""
        (k1, t1), (k2, t2) = a, b
        return ((k1 * k2) % self.n, (k1 * t2 + t1) % self.n) if self.n > 1 else (0, 0)

    def inverse(self, a):
        k, t = a
        if self.n == 1:
            return (0, 0)
        kinv = pow(k, -1, self.n)
        return (kinv, (-kinv * t) % self.n)

    def act(self, g, mask: int) -> int:
        return permute_mask(mask, self.perms[self.index[g]])

    def act_on_distance(self, g, d: int) -> int:
        return fold_distance(g[0] * d, self.n)

    def row_orbit(self, gamma: int, d: int) -> set:
        """All (g.gamma, g.d) by brute force over the group."""
        return {(permute_mask(gamma, perm), fold_distance(k * d, self.n))
                for (k, _), perm in zip(self.elements, self.perms)}

    def cycle_counts(self) -> list[int]:
        counts = []
        for perm in self.perms:
            seen = [False] * self.n
            c = 0
            for i in range(self.n):
                if not seen[i]:
                    c += 1
                    j = i
                    while not seen[j]:
                        seen[j] = True
                        j = perm[j]
            counts.append(c)
        return counts

    def burnside_count(self) -> int:
        """Number of orbits on Z_2^n: average of 2^(cycles of g)."""
        total = sum(2 ** c for c in self.cycle_counts())
        q, r = divmod(total, len(self))
        assert r == 0
        return q


def d_class(d: int, n: int) -> int:
    """gcd(d, n); d1, d2 are equivalent iff their classes agree."""
    if not 1 <= d <= n // 2:
        raise ValueError(f"shift distance d={d} outside 1..{n // 2}")
    return gcd(d, n)


class OrbitTable:
    """Canonical representative (minimum mask over all n*phi(n) images) of every
    element of Z_2^n, plus one group element carrying each mask to its rep."""

    def __init__(self, n: int, cap: int | None = None):
        check_cap(n, cap, "orbit table")
        self.n = n
        self.group = SymmetryGroup(n)
        masks = np.arange(1 << n, dtype=np.int64)
        best = masks.copy()
        arg = np.zeros(1 << n, dtype=np.int32)
        for gi, perm in enumerate(self.group.perms):
            if gi == 0:
                continue
            img = np.zeros_like(masks)
            for i, target in enumerate(perm):
                img |= ((masks >> i) & 1) << target
            better = img < best
            best[better] = img[better]
            arg[better] = gi
        self._rep = best
        self._transporter = arg
        reps, counts = np.unique(best, return_counts=True)
        self.reps = [int(r) for r in reps]
        self.size = {int(r): int(c) for r, c in zip(reps, counts)}
        self._stabilizers: dict[int, list] = {}
        self._dmin: dict[int, dict] = {}

    def rep(self, gamma) -> int:
        return int(self._rep[int(getattr(gamma, "bits", gamma))])

    def transporter(self, gamma):
        return self.group.elements[int(self._transporter[int(getattr(gamma, "bits", gamma))])]

    def members(self, rep: int) -> list[int]:
        return [int(x) for x in np.nonzero(self._rep == rep)[0]]

    def stabilizer(self, rep: int) -> list:
        if rep not in self._stabilizers:
            g = self.group
            self._stabilizers[rep] = [e for e, perm in zip(g.elements, g.perms)
                                      if permute_mask(rep, perm) == rep]
        return self._stabilizers[rep]

    def _dmap(self, rep: int) -> dict:
        if rep not in self._dmin:
            stab = self.stabilizer(rep)
            n = self.n
            self._dmin[rep] = {d: min(fold_distance(k * d, n) for k, _ in stab)
                               for d in range(1, n // 2 + 1)}
        return self._dmin[rep]

    def row_key(self, gamma: int, d: int) -> tuple[int, int]:
        """Canonical representative (rep gamma, min d) of the orbit of (gamma, d)."""
        r = self.rep(gamma)
        k, _ = self.transporter(gamma)
        return r, self._dmap(r)[fold_distance(k * d, self.n)]

    def row_orbit_size(self, rep: int, d: int) -> int:
        stab = self.stabilizer(rep)
        dorbit = {fold_distance(k * d, self.n) for k, _ in stab}
        return self.size[rep] * len(dorbit)

    def row_reps(self, rep: int) -> list[int]:
        return sorted(set(self._dmap(rep).values()))

    def export_text(self) -> str:
        """One line per orbit: rep (hex), orbit-stabilizer size, member count."""
        width = max(1, (self.n + 3) // 4)
        lines = [f"# orbit table n={self.n} group_order={len(self.group)} orbits={len(self.reps)}",
                 "# rep size members"]
        for r in self.reps:
            predicted = len(self.group) // len(self.stabilizer(r))
            lines.append(f"0x{r:0{width}x} {predicted} {self.size[r]}")
        return "\n".join(lines) + "\n"


def build_orbit_table(n: int, cap: int | None = None) -> OrbitTable:
    return OrbitTable(n, cap)


class ReducedSystem:
    """The system restricted to weights constant on row orbits.

    Rows are row-orbit reps (gamma_rep, d), columns are gamma-orbit reps of the
    coset. Entry [R, O] is the total coefficient that the rows of orbit R put on
    the single representative column of O (not summed over O). Because that
    total is constant on O, a vector c solves the reduced system with target
    unit-at-orbit-of-0 iff its lift solves the full system with target M(0).
    """

    scaling = "entry = sum over rows of the row orbit of the coefficient on the column representative"

    def __init__(self, system: MtilingSystem, orbits: OrbitTable):
        if system.n != orbits.n:
            raise ValueError(f"order mismatch: system n={system.n}, orbits n={orbits.n}")
        self.n = n = system.n
        self.coset = system.coset
        self.orbits = orbits
        self.convention = CONVENTION
        colreps = [r for r in orbits.reps
                   if system.coset == "both" or (bin(r).count("1") & 1) == (system.coset == "odd")]
        self.column_reps = colreps
        self.col_index = {r: i for i, r in enumerate(colreps)}
        keys = sorted((r, d) for r in colreps for d in orbits.row_reps(r))
        self.row_keys = keys
        entries: dict = {k: {} for k in keys}
        pairs = {d: pair_masks(d, n) for d in range(1, n // 2 + 1)}
        for ci, x in enumerate(colreps):
            for d, ps in pairs.items():
                for p in ps:
                    key = orbits.row_key(x ^ p, d)
                    row = entries[key]
                    row[ci] = row.get(ci, 0) + 1
        self.entries = entries

    @property
    def ncols(self) -> int:
        return len(self.column_reps)

    @property
    def nrows(self) -> int:
        return len(self.row_keys)

    def iter_rows(self):
        for key in self.row_keys:
            yield key, self.entries[key]

    def target(self) -> dict:
        """Unit at the orbit of 0 (a singleton orbit)."""
        return {self.col_index[0]: 1}

    def lift(self, weights: dict) -> dict:
        """Constant-on-orbit weights {(gamma, d): c} for the full system."""
        group = self.orbits.group
        out = {}
        for (r, d), c in weights.items():
            for key in group.row_orbit(r, d):
                out[key] = c
        return out


def reduce_system(system: MtilingSystem, orbits: OrbitTable) -> ReducedSystem:
    return ReducedSystem(system, orbits)
