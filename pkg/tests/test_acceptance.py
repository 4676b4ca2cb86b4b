import numpy as np
import pytest
from scipy.linalg import eigh_tridiagonal

from discrete_hardy.constants import HardyParams, theorem_constant
from discrete_hardy.functionals import weighted_lhs, local_energy
from discrete_hardy.lattice import Domain
from discrete_hardy.lattice_function import LatticeFunction
from discrete_hardy.optimizer import best_constant_p2
from discrete_hardy.paths import edge_usage_census
from discrete_hardy.verify import run_campaign

pytestmark = pytest.mark.slow


def log_sine(N):
    '''sqrt(n) sin(pi ln n / ln(N+1)), the near-extremal profile of the one-dimensional Hardy quotient.'''
    dom = Domain('NONNEGATIVE', 1, N)
    n = np.arange(N + 1, dtype=np.float64)
    values = np.zeros(N + 1)
    values[1:] = np.sqrt(n[1:]) * np.sin(np.pi*np.log(n[1:])/np.log(N + 1))
    return LatticeFunction(dom, values)


def box_optimum(N):
    '''Exact sup of sum u(j)^2/j^2 over 2 sum (u(j+1) - u(j))^2 with u(0) = u(N+1) = 0.

    With u = j w the pencil becomes the symmetric tridiagonal matrix below, and the sup is one over its smallest eigenvalue.
    '''
    j = np.arange(1, N + 1, dtype=np.float64)
    lowest = eigh_tridiagonal(4*j**2, -2*j[:-1]*j[1:], eigvals_only=True, select='i', select_range=(0, 0))[0]
    return 1/lowest


def test_one_dimensional_best_constant_chain():
    params = HardyParams('T11_3', d=1, p=2)
    estimates, witness = [], None
    for N in (64, 256, 1024, 4096):
        trial = log_sine(N)
        trial_ratio = weighted_lhs(trial, 2.0, 2.0)/local_energy(trial, 2.0, 'LOCAL_INCLUDE_ORIGIN')
        start = trial if witness is None else witness
        result = best_constant_p2(params, N, init=start, max_iter=2000)
        assert result.converged
        assert result.estimate >= trial_ratio*(1 - 1e-7)
        assert result.estimate == pytest.approx(box_optimum(N), rel=1e-7)
        witness = result.witness
        estimates.append(result.estimate)
    assert all(b >= a*(1 - 1e-12) for a, b in zip(estimates[:-1], estimates[1:]))
    assert estimates[-1] < 2.0
    assert estimates[-1] == pytest.approx(1.4996, abs=1e-4)
    assert estimates[-1] <= theorem_constant(params).value


@pytest.mark.parametrize('n, k, d', [(3, 1, 3), (2, 2, 3), (3, 2, 2)])
def test_census_bound_on_larger_annuli(n, k, d):
    census = edge_usage_census(n, k, d)
    assert all(census.max_count(b) <= census.bound() for b in census.betas)
    assert census.max_count() <= census.summed_bound()


def test_campaign_over_all_regimes():
    report = run_campaign(regimes=['T11_1', 'T11_2', 'T11_3', 'T11_4', 'T11_5', 'T12_1', 'T12_2', 'T12_3'], lattices=['NONNEGATIVE', 'FULL'],
                          dims=[1, 2], p_values=[0.5, 1.0, 2.0, 3.0], s_values=[0.5, 1.0, 1.5], eps_values=[0.5], N=6, trials=5)
    assert report.ok
    assert len(report.cells) > 20
