"""Bit-level model of the group Z_2^n, its characters and the Walsh transform.

Elements of Z_2^n and of its dual are both stored as n-bit integer masks.
Coordinate j (1-based in the public API) lives in bit j-1. For sign vectors
a set bit means the entry is -1, so the all-ones vector is mask 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


def popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True, order=True)
class GroupElement:
    """A character gamma of Z_2^n (equivalently an element of Z_2^n)."""

    n: int
    bits: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"order must be positive, got {self.n}")
        if not 0 <= self.bits < (1 << self.n):
            raise ValueError(f"mask {self.bits:#x} has bits above position {self.n - 1}")

    @classmethod
    def zero(cls, n: int) -> "GroupElement":
        return cls(n, 0)

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> "GroupElement":
        bits = 0
        for j in indices:
            bits ^= basis_element(j, n).bits
        return cls(n, bits)

    @classmethod
    def from_vector(cls, vec: Sequence[int]) -> "GroupElement":
        """From a 0-1 row vector (gamma_1, ..., gamma_n)."""
        bits = 0
        for i, v in enumerate(vec):
            if v not in (0, 1):
                raise ValueError(f"character entries must be 0 or 1, got {v!r}")
            bits |= v << i
        return cls(len(vec), bits)

    def __add__(self, other: "GroupElement") -> "GroupElement":
        if other.n != self.n:
            raise ValueError(f"order mismatch: {self.n} vs {other.n}")
        return GroupElement(self.n, self.bits ^ other.bits)

    __xor__ = __add__

    @property
    def weight(self) -> int:
        return popcount(self.bits)

    def indices(self) -> tuple[int, ...]:
        return tuple(j + 1 for j in range(self.n) if self.bits >> j & 1)

    def to_vector(self) -> tuple[int, ...]:
        return tuple(self.bits >> j & 1 for j in range(self.n))

    def __int__(self) -> int:
        return self.bits

    def __str__(self) -> str:
        return "".join(str(b) for b in self.to_vector())


@dataclass(frozen=True)
class SignVector:
    """A +-1 vector u = (u_1, ..., u_n)."""

    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise ValueError("sign vector must be non-empty")
        for e in entries:
            if e not in (1, -1):
                raise ValueError(f"sign vector entries must be +1 or -1, got {e!r}")

    @property
    def n(self) -> int:
        return len(self.entries)

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "SignVector":
        return cls(tuple(-1 if mask >> j & 1 else 1 for j in range(n)))

    @classmethod
    def parse(cls, text: str) -> "SignVector":
        """Parse either '+--+' or '1,-1,-1,1'."""
        text = text.strip()
        if text and set(text) <= {"+", "-"}:
            return cls(tuple(1 if c == "+" else -1 for c in text))
        return cls(tuple(int(tok) for tok in text.replace(" ", "").strip("()").split(",")))

    def to_mask(self) -> int:
        mask = 0
        for j, e in enumerate(self.entries):
            if e == -1:
                mask |= 1 << j
        return mask

    def to_element(self) -> GroupElement:
        return GroupElement(self.n, self.to_mask())

    def __getitem__(self, j):
        return self.entries[j]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __str__(self) -> str:
        return "".join("+" if e == 1 else "-" for e in self.entries)


@dataclass
class WalshPolynomial:
    """Sparse exact-rational function on the characters of Z_2^n.

    ``coeffs`` maps integer masks to Fractions; missing masks are zero.
    """

    n: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        limit = 1 << self.n
        clean = {}
        for key, value in self.coeffs.items():
            key = int(key)
            if not 0 <= key < limit:
                raise ValueError(f"key {key:#x} outside Z_2^{self.n}")
            value = Fraction(value)
            if value:
                clean[key] = value
        self.coeffs = clean

    def __getitem__(self, key) -> Fraction:
        return self.coeffs.get(int(key), Fraction(0))

    def __len__(self) -> int:
        return len(self.coeffs)

    def items(self):
        return sorted(self.coeffs.items())

    def __add__(self, other: "WalshPolynomial") -> "WalshPolynomial":
        if other.n != self.n:
            raise ValueError(f"order mismatch: {self.n} vs {other.n}")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return WalshPolynomial(self.n, out)

    def scale(self, c) -> "WalshPolynomial":
        c = Fraction(c)
        return WalshPolynomial(self.n, {k: c * v for k, v in self.coeffs.items()})

    def total(self) -> Fraction:
        return sum(self.coeffs.values(), Fraction(0))

    def support_weights(self) -> set:
        return {popcount(k) for k in self.coeffs}

    def to_dense(self) -> list:
        out = [Fraction(0)] * (1 << self.n)
        for k, v in self.coeffs.items():
            out[k] = v
        return out

    @classmethod
    def from_dense(cls, values: Sequence) -> "WalshPolynomial":
        n = _log2_exact(len(values))
        return cls(n, {k: v for k, v in enumerate(values) if v})

    def evaluate(self, u: SignVector):
        """sum_gamma f(gamma) u^gamma."""
        if u.n != self.n:
            raise ValueError(f"order mismatch: {self.n} vs {u.n}")
        x = u.to_mask()
        return sum((-v if popcount(k & x) & 1 else v for k, v in self.coeffs.items()), Fraction(0))


def _as_mask(g) -> int:
    return g.bits if isinstance(g, GroupElement) else int(g)


def _log2_exact(length: int) -> int:
    if length < 1 or length & (length - 1):
        raise ValueError(f"length {length} is not a power of two")
    return length.bit_length() - 1


def weight(gamma) -> int:
    """Number of 1-coordinates of gamma."""
    return popcount(_as_mask(gamma))


def basis_element(j: int, n: int) -> GroupElement:
    """pi_j: the unit character at 1-based coordinate j."""
    if not 1 <= j <= n:
        raise IndexError(f"coordinate {j} out of range 1..{n}")
    return GroupElement(n, 1 << (j - 1))


def evaluate_character(gamma, u: SignVector) -> int:
    """u^gamma, the product of u_j over the coordinates selected by gamma."""
    if isinstance(gamma, GroupElement) and gamma.n != u.n:
        raise ValueError(f"order mismatch: character has n={gamma.n}, vector has n={u.n}")
    return -1 if popcount(_as_mask(gamma) & u.to_mask()) & 1 else 1


def walsh_transform(f: Sequence) -> list:
    """Unnormalised Walsh transform: out[x] = sum_gamma f[gamma] * (-1)^<gamma, x>.

    Exact for int/Fraction input. Applying it twice multiplies by 2^n.
    """
    out = list(f)
    length = len(out)
    _log2_exact(length)
    h = 1
    while h < length:
        for start in range(0, length, 2 * h):
            for i in range(start, start + h):
                a, b = out[i], out[i + h]
                out[i] = a + b
                out[i + h] = a - b
        h *= 2
    return out


def _columns(A: Sequence[Sequence[int]]) -> list:
    n = len(A)
    for row in A:
        if len(row) != n:
            raise ValueError("matrix must be square")
        for e in row:
            if e not in (1, -1):
                raise ValueError(f"matrix entries must be +1 or -1, got {e!r}")
    return [SignVector(tuple(A[i][j] for i in range(n))) for j in range(n)]


def matrix_fourier(A: Sequence[Sequence[int]], gamma) -> int:
    """A-hat(gamma): sum over the columns a_j of A of a_j^gamma."""
    cols = _columns(A)
    return sum(evaluate_character(gamma, a) for a in cols)


def quotient(a: SignVector, b: SignVector) -> SignVector:
    """Coordinate-wise a/b."""
    if a.n != b.n:
        raise ValueError("order mismatch")
    return SignVector(tuple(x // y for x, y in zip(a, b)))


def fourier_square_double_sum(A: Sequence[Sequence[int]], gamma) -> int:
    """sum_{j,k} (a_j/a_k)^gamma, which equals matrix_fourier(A, gamma)**2."""
    cols = _columns(A)
    return sum(evaluate_character(gamma, quotient(a, b)) for a in cols for b in cols)


def orthogonal_pair_character(n: int) -> int:
    """(h_j/h_k)^gamma at gamma = all-ones for orthogonal +-1 columns h_j != h_k.

    Orthogonal columns disagree in exactly n/2 coordinates, so the quotient
    has n/2 entries equal to -1.
    """
    if n % 2:
        raise ValueError("orthogonal +-1 vectors need even length")
    return -1 if (n // 2) % 2 else 1


def all_ones_double_sum(n: int) -> int:
    """Right side of |H-hat|^2 = sum_{j,k} (h_j/h_k)^gamma at gamma = all-ones for
    any n x n matrix with pairwise orthogonal +-1 columns: n diagonal terms equal
    to 1 plus n(n-1) off-diagonal terms."""
    return n + n * (n - 1) * orthogonal_pair_character(n)
