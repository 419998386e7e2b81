"""Coordinate-format (Matrix Market) text export and import of systems."""

from __future__ import annotations

from fractions import Fraction

from .linalg import RATIONAL, SparseMatrix
from .system import MtilingSystem

HEADER = "%%MatrixMarket matrix coordinate integer general"


def write_system(system: MtilingSystem, fh) -> int:
    """Rows in (gamma, d) order, 1-based indices. Returns the entry count."""
    fh.write(HEADER + "\n")
    fh.write(f"% n={system.n}\n")
    fh.write(f"% coset={system.coset}\n")
    fh.write(f"% convention={system.convention}\n")
    fh.write("% rows=(gamma,d) lexicographic; row=rank(gamma)*(n/2)+d\n")
    fh.write("% cols=" + ("gamma+1" if system.coset == "both" else "(gamma>>1)+1") + "\n")
    nnz = system.nnz()
    fh.write(f"{system.nrows} {system.ncols} {nnz}\n")
    written = 0
    for i, (_, row) in enumerate(system.iter_rows(), start=1):
        for c in sorted(row):
            fh.write(f"{i} {c + 1} {row[c]}\n")
            written += 1
    if written != nnz:
        raise RuntimeError(f"wrote {written} entries, header promised {nnz}")
    return written


def read_matrix(fh, field=RATIONAL) -> tuple[SparseMatrix, dict]:
    """Parse a coordinate file; ``% key=value`` comments are returned as metadata."""
    first = fh.readline()
    if not first.startswith("%%MatrixMarket") or "coordinate" not in first:
        raise ValueError("not a coordinate-format Matrix Market file")
    if "symmetric" in first or "skew" in first or "hermitian" in first:
        raise ValueError("only general matrices are supported")
    meta = {}
    line = fh.readline()
    while line.startswith("%"):
        body = line.lstrip("%").strip()
        if "=" in body and not body.startswith("rows=") and not body.startswith("cols="):
            k, _, v = body.partition("=")
            meta[k.strip()] = v.strip()
        line = fh.readline()
    try:
        nrows, ncols, nnz = (int(x) for x in line.split())
    except ValueError:
        raise ValueError(f"bad size line: {line!r}") from None
    rows = [dict() for _ in range(nrows)]
    count = 0
    for line in fh:
        if not line.strip() or line.startswith("%"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"bad entry line: {line!r}")
        i, j, v = int(parts[0]), int(parts[1]), Fraction(parts[2])
        if not (1 <= i <= nrows and 1 <= j <= ncols):
            raise ValueError(f"entry ({i}, {j}) outside {nrows}x{ncols}")
        rows[i - 1][j - 1] = rows[i - 1].get(j - 1, 0) + v
        count += 1
    if count != nnz:
        raise ValueError(f"expected {nnz} entries, found {count}")
    return SparseMatrix(rows, ncols, field), meta
