import json
import math

import pytest

from discrete_hardy.constants import (HardyParams, ConstantReport, theorem_constant, minimal_K, lemma_constant, lemma_constant_bound,
                                      path_constant, trivial_lemma_constant, K_condition_holds)
from discrete_hardy.errors import ValidationError, RegimeError, NumericError


@pytest.mark.parametrize('s, p, d, expected', [(1, 2, 3, 4), (0.25, 2, 1, 5), (2, 0.5, 2, 2)])
def test_minimal_K(s, p, d, expected):
    assert minimal_K(s, p, d) == expected
    assert K_condition_holds(s, p, expected, abs(s*p - d))
    assert not K_condition_holds(s, p, expected - 1, abs(s*p - d)) or expected == 1


def test_minimal_K_with_delta():
    assert minimal_K(0.25, 2, 1, delta=0.5) == 5
    assert minimal_K(1, 2, 3, delta=1) == 4


def test_minimal_K_rejects_critical_and_tiny_gaps():
    with pytest.raises(RegimeError):
        minimal_K(1, 2, 2)
    with pytest.raises(RegimeError):
        minimal_K(1, 2, 3, delta=0.01)


@pytest.mark.parametrize('d, p, s, K, expected', [(3, 2, 1, 4, 32768/7), (1, 2, 0.25, 5, 64.0), (1, 1, 1, 1, 16.0)])
def test_lemma_constant(d, p, s, K, expected):
    assert lemma_constant(d, p, s, K) == pytest.approx(expected, rel=1e-12)


def test_lemma_constant_bound_dominates():
    for d in range(2, 7):
        assert lemma_constant(d, 2, 0.5, 3) <= lemma_constant_bound(2, 0.5, 3)


@pytest.mark.parametrize('k, s, p, expected', [(4, 1, 2, 0.625), (2, 0.25, 2, 17.501470), (1, 3, 1, 4/3)])
def test_path_constant(k, s, p, expected):
    assert path_constant(k, s, p) == pytest.approx(expected, rel=1e-6)


@pytest.mark.parametrize('p, d, N, expected', [(2, 1, 2, 2.0), (1, 1, 3, 2.0), (2, 2, 1, 2.0), (2, 1, 16, 2*3**14)])
def test_trivial_lemma_constant(p, d, N, expected):
    assert trivial_lemma_constant(p, d, N) == expected


def test_trivial_lemma_constant_overflows_to_inf():
    assert trivial_lemma_constant(4, 3, 2**12) == math.inf


def test_theorem_constant_fractional_small_sp():
    report = theorem_constant(HardyParams('T12_1', d=1, p=2, s=0.25, delta=0.5))
    assert report.K == 5
    assert report.value == pytest.approx(64.0, rel=1e-12)
    assert report.value == report.recompute()


def test_theorem_constant_local_below_gap():
    report = theorem_constant(HardyParams('T11_2', d=3, p=2, delta=1))
    assert report.K == 4
    assert report.value == pytest.approx(10240.0, rel=1e-12)
    assert [e['factor'] for e in report.assembly] == ['2', 'C(1,p,s,K)', 'C_L(K,s,p)', 'd^((p v 1)-2)']


def test_theorem_constant_local_above_gap():
    report = theorem_constant(HardyParams('T11_3', d=1, p=2))
    assert report.K == 4
    assert report.value == pytest.approx(320 + 4*3**14, rel=1e-12)
    assert report.s_used == 1.0


@pytest.mark.parametrize('params, expected', [
    (HardyParams('T11_1', d=2, p=1), 48.0),
    (HardyParams('T12_3', d=1, p=2, s=1), 512.0),
    (HardyParams('T12_2', d=1, p=2, s=0.5, eps=0.5), 4*2**9.5),
    (HardyParams('LEM21_SMALL', d=3, p=2, s=1), 32768/7),
    (HardyParams('LEM41_BOX', d=1, p=2, N=2), 2.0),
])
def test_theorem_constant_values(params, expected):
    assert theorem_constant(params).value == pytest.approx(expected, rel=1e-12)


def test_full_lattice_factors():
    half = theorem_constant(HardyParams('T12_1', d=1, p=2, s=0.25, delta=0.5)).value
    full = theorem_constant(HardyParams('T12_1', d=1, p=2, s=0.25, delta=0.5, lattice='FULL')).value
    assert full == pytest.approx(half*(2**0.5 + 1), rel=1e-12)
    half = theorem_constant(HardyParams('T11_3', d=1, p=2)).value
    full = theorem_constant(HardyParams('T11_3', d=1, p=2, lattice='FULL')).value
    assert full == pytest.approx(2*half, rel=1e-12)


def test_weight_max_costs_a_factor():
    outer = theorem_constant(HardyParams('T11_4', d=2, p=2, eps=1.0))
    maxed = theorem_constant(HardyParams('T11_4', d=2, p=2, eps=1.0, weight='max'))
    assert maxed.value > outer.value
    assert outer.s_used == 1.5
    assert outer.K == maxed.K == 5


def test_overflowing_constant_is_reported():
    # K = 9 puts the small-box recursion on B_512 beyond float range
    with pytest.raises(NumericError):
        theorem_constant(HardyParams('T11_4', d=2, p=2, eps=0.5))


def test_user_K():
    assert theorem_constant(HardyParams('T11_3', d=1, p=2, K=6)).K == 6
    with pytest.raises(ValidationError):
        theorem_constant(HardyParams('T11_3', d=1, p=2, K=3))


@pytest.mark.parametrize('params', [
    HardyParams('T11_1', d=1, p=0.5),
    HardyParams('T11_2', d=2, p=2),
    HardyParams('T11_2', d=3, p=2, delta=1.5),
    HardyParams('T11_3', d=2, p=2),
    HardyParams('T11_4', d=2, p=2),
    HardyParams('T11_5', d=2, p=0.5, eps=0.1),
    HardyParams('T12_1', d=1, p=2, s=0.5),
    HardyParams('T12_2', d=1, p=2, s=0.4, eps=0.1),
    HardyParams('T12_3', d=2, p=2, s=1),
    HardyParams('LEM21_LARGE', d=2, p=2, s=0.5),
    HardyParams('LEM21_SMALL', d=2, p=2, s=0.5, lattice='FULL'),
    HardyParams('LEM41_BOX', d=1, p=2),
    HardyParams('T99', d=1, p=2),
])
def test_invalid_regimes(params):
    with pytest.raises(ValidationError):
        theorem_constant(params)


def test_params_accessors():
    params = HardyParams('T12_2', d=2, p=2, s=1, eps=0.2)
    assert params.lhs_exponent() == pytest.approx(2.2)
    assert str(params.rhs_variant()) == 'FRAC_WEIGHTED(0.2)'
    assert params.requires_origin_zero()
    assert HardyParams.from_dict(params.to_dict()) == params
    assert HardyParams('T11_2', d=3, p=2).resolved_delta() == 1.0


def test_report_json():
    report = theorem_constant(HardyParams('T11_3', d=1, p=2))
    data = json.loads(report.to_json())
    assert data['value'] == report.value
    assert ConstantReport(**data).recompute() == report.value
