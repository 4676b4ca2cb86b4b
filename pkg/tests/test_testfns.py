import math

import pytest

from discrete_hardy.errors import ValidationError
from discrete_hardy.functionals import weighted_lhs, local_energy
from discrete_hardy.lattice import Domain
from discrete_hardy.testfns import (TestFamily, family_kind, materialize, un_lhs_bound, un_rhs_bound, vn_lhs_bound, one_minus_vn_lhs_bound,
                                    vn_energy_bound, beta_function, fit_exponent, family_lhs_exact, un_energy_exact, vn_energy_exact,
                                    INFINITE)


def test_family_aliases():
    assert family_kind('vn') == 'TENT_VN'
    assert TestFamily('complement', 3, 1).kind == 'COMPLEMENT_1_MINUS_VN'
    with pytest.raises(ValidationError):
        family_kind('gaussian')
    with pytest.raises(ValidationError):
        TestFamily('un', 0, 2)


def test_materialize():
    u = materialize(TestFamily('un', 2, 2), Domain('NONNEGATIVE', 2, 3))
    assert u[(2, 2)] == 1.0 and u[(3, 0)] == 0.0
    v = materialize(TestFamily('vn', 4, 1), Domain('NONNEGATIVE', 1, 5))
    assert v.values.tolist() == [1.0, 0.75, 0.5, 0.25, 0.0, 0.0]
    with pytest.raises(ValidationError):
        materialize(TestFamily('un', 4, 2), Domain('NONNEGATIVE', 2, 4))
    with pytest.raises(ValidationError):
        materialize(TestFamily('un', 2, 2), Domain('NONNEGATIVE', 3, 4))


def test_un_energy():
    u = materialize(TestFamily('un', 4, 2), Domain('NONNEGATIVE', 2, 5))
    assert local_energy(u, 2.0, 'LOCAL_INCLUDE_ORIGIN') == un_energy_exact(2, 4) == 20.0
    assert un_rhs_bound(2, 2.0, 4) == 32.0
    # the increments are 0 or 1, so the energy does not depend on p
    assert local_energy(u, 0.7, 'LOCAL_INCLUDE_ORIGIN') == pytest.approx(20.0)


@pytest.mark.parametrize('d, p, n', [(1, 2.0, 5), (2, 2.0, 4), (2, 1.5, 6), (3, 3.0, 3)])
def test_vn_energy(d, p, n):
    v = materialize(TestFamily('vn', n, d), Domain('NONNEGATIVE', d, n + 1))
    assert local_energy(v, p, 'LOCAL_INCLUDE_ORIGIN') == pytest.approx(vn_energy_exact(d, p, n), rel=1e-12)
    assert local_energy(v, p, 'LOCAL_EXCLUDE_ORIGIN') == pytest.approx(vn_energy_exact(d, p, n, exclude_origin=True), rel=1e-12)
    assert vn_energy_exact(d, p, n) <= vn_energy_bound(d, p, n)


def test_vn_energy_example():
    assert vn_energy_exact(2, 2.0, 4) == pytest.approx(2.5)
    assert vn_energy_exact(2, 2.0, 4, exclude_origin=True) == pytest.approx(2.25)


def test_un_lhs():
    family = TestFamily('un', 4, 2)
    exact = family_lhs_exact(family, 1.0, 2.0)
    assert exact == pytest.approx(121/12, rel=1e-14)
    assert exact >= un_lhs_bound(2, 1.0, 4) == 8.0
    u = materialize(family, Domain('NONNEGATIVE', 2, 5))
    assert weighted_lhs(u, 2.0, 1.0) == pytest.approx(exact, rel=1e-12)
    assert un_lhs_bound(2, 2.0, 4) == pytest.approx(2*math.log(5))
    assert un_lhs_bound(2, 1.5, 4) == pytest.approx(4*(5**0.5 - 1))


def test_vn_lhs():
    family = TestFamily('vn', 4, 2)
    exact = family_lhs_exact(family, 1.0, 2.0)
    assert exact == pytest.approx(1.6875 + 0.625 + 7/48, rel=1e-12)
    assert vn_lhs_bound(2, 1.0, 2.0, 4) == pytest.approx(2/3, rel=1e-12)
    u = materialize(family, Domain('NONNEGATIVE', 2, 5))
    assert weighted_lhs(u, 2.0, 1.0) == pytest.approx(exact, rel=1e-12)
    with pytest.raises(ValidationError):
        vn_lhs_bound(2, 2.0, 2.0, 4)


def test_complement_lhs():
    family = TestFamily('complement', 3, 1)
    exact = family_lhs_exact(family, 2.0, 2.0)
    assert exact == pytest.approx(2/9 + math.pi**2/6 - 1.25, rel=1e-12)
    assert exact >= one_minus_vn_lhs_bound(1, 2.0, 2.0, 3) == pytest.approx(1/3)
    truncated = family_lhs_exact(family, 2.0, 2.0, radius=10**5)
    assert 0 < exact - truncated < 2e-5
    assert family_lhs_exact(family, 1.0, 2.0) == INFINITE
    assert one_minus_vn_lhs_bound(1, 1.0, 2.0, 3) == INFINITE
    with pytest.raises(ValidationError):
        one_minus_vn_lhs_bound(2, 1.0, 2.0, 3)


@pytest.mark.parametrize('d, t', [(1, 1.5), (1, 2.0), (2, 3.0), (2, 4.0), (3, 5.0)])
def test_complement_bound_holds(d, t):
    for n in (1, 2, 5, 20):
        assert family_lhs_exact(TestFamily('complement', n, d), t, 2.0) >= one_minus_vn_lhs_bound(d, t, 2.0, n)


def test_complement_matches_lattice_sum():
    family = TestFamily('complement', 3, 2)
    u = materialize(family, Domain('NONNEGATIVE', 2, 12))
    assert weighted_lhs(u, 2.0, 3.0) == pytest.approx(family_lhs_exact(family, 3.0, 2.0, radius=12), rel=1e-12)


def test_beta_function():
    assert beta_function(3, 1) == pytest.approx(1/3, rel=1e-14)
    assert beta_function(0.5, 0.5) == pytest.approx(math.pi, rel=1e-14)
    with pytest.raises(ValidationError):
        beta_function(0, 1)


def test_fit_exponent():
    fit = fit_exponent([(n, 3*n**1.5) for n in (4, 8, 16, 32)])
    assert fit['slope'] == pytest.approx(1.5, abs=1e-12)
    assert fit['intercept'] == pytest.approx(math.log(3), abs=1e-12)
    assert fit['residual'] < 1e-12
    # log growth reads as a small positive slope over this range
    assert 0 < fit_exponent([(n, math.log(n)) for n in (4, 16, 64, 256)])['slope'] < 0.35


def test_fit_exponent_rejects_bad_samples():
    with pytest.raises(ValidationError):
        fit_exponent([(1, 1.0), (2, 2.0)])
    with pytest.raises(ValidationError):
        fit_exponent([(1, 1.0), (2, 0.0), (3, 1.0)])
    with pytest.raises(ValidationError):
        fit_exponent([(2, 1.0), (1, 1.0), (3, 1.0)])
