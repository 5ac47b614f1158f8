"""Local generator coordinates and everywhere-local membership certificates."""

from __future__ import annotations

from itertools import product

import pytest

from shacert import (
    CertificateFailure,
    CurveFamily,
    LocalClass,
    ParameterError,
    ResidueClass,
    SearchParams,
    canonicalize,
    local_generators,
    search_tuple,
    verify_membership,
)


@pytest.fixture(scope="module")
def tup5():
    return search_tuple(SearchParams(5, 1, -1, t=2, limit=1_000_000))


@pytest.fixture(scope="module")
def curve5(tup5):
    return CurveFamily(5, 1, -1, tup5.primes)


@pytest.fixture(scope="module")
def tup7():
    return search_tuple(SearchParams(7, 1, -1, t=2, limit=1_000_000))


@pytest.fixture(scope="module")
def curve7(tup7):
    return CurveFamily(7, 1, -1, tup7.primes)


def test_local_generator_coordinates(curve5, curve7):
    for curve in (curve5, curve7):
        p = curve.p
        for ell in curve.k_primes:
            g0, g1 = local_generators(curve, ell)
            assert g0 == (LocalClass(-2 % p, -3 % p), LocalClass(1, 1))
            assert g1 == (LocalClass(1, 1), LocalClass(-2 % p, -2 % p))


def test_local_generator_sum_is_the_coordinate_sum(curve5):
    # image of D0 + D1 has coordinates ((-1,-2),(-1,-1)) mod p
    p = 5
    g0, g1 = local_generators(curve5, curve5.k_primes[0])
    summed = (
        LocalClass((g0[0].valuation + g1[0].valuation) % p,
                   (g0[0].unit_index + g1[0].unit_index) % p),
        LocalClass((g0[1].valuation + g1[1].valuation) % p,
                   (g0[1].unit_index + g1[1].unit_index) % p),
    )
    assert summed == (LocalClass(4, 3), LocalClass(4, 4))


def test_local_generators_are_independent(curve5):
    # valuation minor [[-2, 1], [1, -2]] has determinant 3, nonzero mod 5
    g0, g1 = local_generators(curve5, curve5.k_primes[0])
    det = (g0[0].valuation * g1[1].valuation - g1[0].valuation * g0[1].valuation) % 5
    assert det == 3


def test_local_generators_error_paths(curve5):
    with pytest.raises(ParameterError):
        local_generators(curve5, 13)  # not a tuple prime
    # 11 = 1 mod 5 but 2 is not a 5th power mod 11, violating condition (3)
    bad_curve = CurveFamily(5, 1, 1, (11,))
    with pytest.raises(CertificateFailure) as err:
        local_generators(bad_curve, 11)
    assert "factor 2" in str(err.value)
    # 41 = 1 mod 5 and 3 IS a 5th power mod 41, violating condition (4)
    assert pow(3, 40 // 5, 41) == 1
    gluing_degenerate = CurveFamily(5, 1, 1, (41,))
    with pytest.raises(CertificateFailure) as err:
        local_generators(gluing_degenerate, 41)
    assert "(3/41)" in str(err.value)


def test_membership_single_prime_twist(tup5, curve5):
    q = canonicalize({tup5.primes[0]: 1}, 5)
    cert = verify_membership(q, curve5, tup5)
    assert cert.passed
    report = cert.report_for(str(tup5.primes[0]))
    assert report.case == "torsion-combination"
    assert report.witness == (1, 3)  # (1, -2) mod 5
    other = cert.report_for(str(tup5.primes[1]))
    assert other.case == "local-pth-power" and other.verdict


def test_membership_identity_twist(tup5, curve5):
    cert = verify_membership(ResidueClass.identity(5), curve5, tup5)
    assert cert.passed
    assert all(r.case != "torsion-combination" for r in cert.reports)


def test_membership_mixed_twist(tup5, curve5):
    q = canonicalize({tup5.primes[0]: 1, tup5.primes[1]: 3}, 5)
    cert = verify_membership(q, curve5, tup5)
    assert cert.passed
    for ell in tup5.primes:
        assert cert.report_for(str(ell)).case == "torsion-combination"


def test_membership_report_covers_every_critical_place(tup5, curve5):
    q = canonicalize({tup5.primes[0]: 2}, 5)
    cert = verify_membership(q, curve5, tup5)
    labels = [r.place_label for r in cert.reports]
    assert labels[0] == "oo"
    assert labels[-1] == "other"
    assert set(labels[1:-1]) == {str(ell) for ell in sorted(tup5.ramified | set(tup5.primes))}
    # places of bad reduction never fall into the summary entry
    assert len(labels) == 2 + len(tup5.ramified | set(tup5.primes))


def test_membership_passes_for_every_subset_power(tup5, curve5):
    # local solubility cannot distinguish proper subsets; that is the
    # global obstruction's job
    p = 5
    for e0, e1 in product(range(p), repeat=2):
        q = canonicalize({tup5.primes[0]: e0, tup5.primes[1]: e1}, p)
        assert verify_membership(q, curve5, tup5).passed, (e0, e1)


def test_membership_witness_round_trip(tup7, curve7):
    from shacert import TorsionElement, local_class, torsion_image_D

    q = canonicalize({tup7.primes[1]: 4}, 7)
    cert = verify_membership(q, curve7, tup7)
    report = cert.report_for(str(tup7.primes[1]))
    a, b = report.witness
    image = torsion_image_D(TorsionElement(a, b), curve7)
    assert local_class(image, tup7.primes[1], 7) == local_class(q, tup7.primes[1], 7)


def test_membership_rejects_unsupported_twists(tup5, curve5):
    with pytest.raises(ParameterError):
        verify_membership(canonicalize(7, 5), curve5, tup5)
    with pytest.raises(ParameterError):
        verify_membership(canonicalize(2, 7), curve5, tup5)
