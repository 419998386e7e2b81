import json
from fractions import Fraction
from itertools import combinations
from math import isqrt

import pytest

from circwit.oracle import brute_force_generators
from circwit.symmetry import SymmetryGroup
from circwit.system import pair_masks
from circwit.witness import (CertificateError, WitnessCertificate, build_tridiagonal, find_witness,
                             symmetric_witness, tridiagonal_rank, verify_certificate)


def aggregated_expansion(n):
    """For each even w: sum over |gamma| = w, d, pairs of M(gamma + pair),
    collected by the weight of the resulting key. Fails if a coefficient is not
    constant on a weight class."""
    pairs = [p for d in range(1, n // 2 + 1) for p in pair_masks(d, n)]
    table = {}
    for w in range(0, n + 1, 2):
        acc = {}
        for support in combinations(range(n), w):
            g = sum(1 << i for i in support)
            for p in pairs:
                acc[g ^ p] = acc.get(g ^ p, 0) + 1
        by_weight = {}
        for key, c in acc.items():
            by_weight.setdefault(bin(key).count("1"), set()).add(c)
        row = {}
        for wt, cs in by_weight.items():
            assert len(cs) == 1, f"coefficient not constant at weight {wt}"
            row[wt] = cs.pop()
        table[w] = row
    return table


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_tridiagonal_entries_match_expansion(n):
    assert build_tridiagonal(n).rows == aggregated_expansion(n)


def test_tridiagonal_examples():
    assert build_tridiagonal(4).dense() == [[0, 1, 0], [6, 4, 6], [0, 1, 0]]
    assert build_tridiagonal(8).dense() == [
        [0, 1, 0, 0, 0], [28, 12, 6, 0, 0], [0, 15, 16, 15, 0], [0, 0, 6, 12, 28], [0, 0, 0, 1, 0]]
    with pytest.raises(ValueError):
        build_tridiagonal(7)


@pytest.mark.parametrize("n", [4, 10, 16, 30])
def test_tridiagonal_shape(n):
    T = build_tridiagonal(n)
    dense = T.dense()
    size = n // 2 + 1
    assert len(dense) == size
    assert len(T.rows[0]) == len(T.rows[n]) == 1
    for i in range(size):
        assert dense[i] == dense[size - 1 - i][::-1]
        assert all(v == 0 for j, v in enumerate(dense[i]) if abs(i - j) > 1)


@pytest.mark.parametrize("n,expected", [(4, 2), (8, 5), (12, 7), (16, 8), (36, 18), (100, 50)])
def test_tridiagonal_rank_examples(n, expected):
    assert tridiagonal_rank(build_tridiagonal(n)) == expected


def test_tridiagonal_rank_dichotomy_up_to_100():
    for n in range(4, 101, 4):
        m = n // 4
        square = isqrt(m) ** 2 == m
        assert tridiagonal_rank(build_tridiagonal(n)) == (n // 2 if square else n // 2 + 1), n


def test_symmetric_witness():
    assert symmetric_witness(4) is None
    assert symmetric_witness(16) is None
    for n in (8, 12):
        c = symmetric_witness(n)
        T = build_tridiagonal(n)
        acc = {}
        for w, cw in c.items():
            for col, v in T.rows[w].items():
                acc[col] = acc.get(col, 0) + cw * v
        assert {k: v for k, v in acc.items() if v} == {0: 1}
    with pytest.raises(ValueError):
        symmetric_witness(6)


def test_find_witness_order4_none():
    assert find_witness(4, "full") is None
    assert find_witness(4, "orbit-reduced") is None


@pytest.mark.parametrize("n,mode", [(8, "full"), (8, "orbit-reduced"), (12, "orbit-reduced"),
                                    (8, "symmetric"), (12, "symmetric")])
def test_found_certificates_verify(n, mode):
    cert = find_witness(n, mode)
    assert cert.kind == mode
    report = verify_certificate(cert)
    assert report.passed and report.nonzero_residuals == 0
    assert report.columns_checked == 1 << n


def test_perturbed_certificate_fails():
    cert = find_witness(8, "full")
    key = sorted(cert.weights)[0]
    bad = WitnessCertificate(8, "full", dict(cert.weights))
    bad.weights[key] += 1
    report = verify_certificate(bad)
    assert not report.passed and report.nonzero_residuals > 0
    assert any("residual gamma=0x" in line for line in report.lines())


@pytest.mark.parametrize("n,mode", [(8, "full"), (12, "orbit-reduced"), (12, "symmetric")])
def test_certificate_roundtrip(n, mode, tmp_path):
    cert = find_witness(n, mode)
    path = tmp_path / "c.cert"
    cert.save(path)
    again = WitnessCertificate.load(path)
    assert again.weights == cert.weights and again.kind == cert.kind
    assert again.to_json() == cert.to_json()
    assert verify_certificate(again) == verify_certificate(cert)


def test_certificate_json_shape():
    data = json.loads(find_witness(8, "full").to_json())
    assert data["format_version"] == 1 and data["convention"] == "half-range-antipodal"
    entry = data["weights"][0]
    assert set(entry) == {"gamma", "d", "c"}
    num, den = entry["c"].split("/")
    assert int(den) > 0 and Fraction(int(num), int(den)) != 0


def test_unknown_fields_ignored():
    data = json.loads(find_witness(8, "orbit-reduced").to_json())
    data["comment"] = "extra"
    data["provenance"]["host"] = "x"
    cert = WitnessCertificate.from_json(json.dumps(data))
    assert verify_certificate(cert).passed


def test_convention_mismatch_rejected():
    cert = find_witness(8, "full")
    cert.convention = "double-counted-antipodal"
    with pytest.raises(CertificateError):
        verify_certificate(cert)


def test_non_canonical_orbit_key_rejected():
    cert = find_witness(8, "orbit-reduced")
    (g, d), c = next((k, v) for k, v in sorted(cert.weights.items()) if k[0])
    other = max(SymmetryGroup(8).row_orbit(g, d))
    assert other != (g, d)
    with pytest.raises(CertificateError):
        verify_certificate(WitnessCertificate(8, "orbit-reduced", {other: c}))


def test_malformed_certificate():
    with pytest.raises(CertificateError):
        WitnessCertificate.from_json('{"n": 8}')
    with pytest.raises(CertificateError):
        WitnessCertificate.from_json("not json")


def test_symmetric_tridiagonal_level():
    for n in (20, 24):
        cert = find_witness(n, "symmetric")
        report = verify_certificate(cert)
        assert report.level == "tridiagonal" and report.passed
    cert = find_witness(12, "symmetric")
    assert verify_certificate(cert, level="tridiagonal").passed


def test_verify_threads_do_not_change_report():
    cert = find_witness(12, "orbit-reduced")
    assert verify_certificate(cert, threads=1) == verify_certificate(cert, threads=4)


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12])
def test_witness_oracle_exclusivity(n):
    generators = brute_force_generators(n).count
    cert = find_witness(n, "orbit-reduced")
    assert (generators > 0) != (cert is not None)
    if cert is not None:
        assert verify_certificate(cert).passed


@pytest.mark.slow
def test_order16_orbit_reduced_witness():
    cert = find_witness(16, "orbit-reduced")
    assert cert is not None
    assert verify_certificate(cert).passed
