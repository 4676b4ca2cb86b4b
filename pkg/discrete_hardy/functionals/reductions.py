'''Creation Date: 18/10/26

Deterministic reductions and the |z|^p primitive shared by every functional.

All sums go through pairwise_sum, a fixed binary reduction tree. Parallel kernels write one partial per outer index and reduce those
partials with the same tree, so results do not depend on the numba thread count.
'''

import os

import numpy as np
import numba

from ..errors import NumericError
from ..lattice import LatticePoint

THREADS_ENV = 'HARDY_THREADS'


@numba.njit(cache=True)
def pairwise_sum(values):
    '''Sum of a 1D float64 array by a fixed pairwise tree.

    INPUTS:
        values : np.ndarray
            (n,) float64 array. Not modified.

    OUTPUTS:
        total : float
    '''
    n = values.shape[0]
    if n == 0:
        return 0.0
    buf = values.copy()
    while n > 1:
        half = n // 2
        for i in range(half):
            buf[i] = buf[2*i] + buf[2*i+1]
        if n % 2 == 1:
            buf[half] = buf[n-1]
            n = half + 1
        else:
            n = half
    return buf[0]


@numba.njit(cache=True)
def abs_pow_scalar(a, p):
    '''a^p for a >= 0, with 0 -> 0 for every p > 0.'''
    if a == 0.0:
        return 0.0
    if p == 1.0:
        return a
    if p == 2.0:
        return a*a
    return np.exp(p*np.log(a))


def abs_pow(z, p):
    '''Elementwise |z|^p as exp(p ln|z|), with 0 -> 0. Matches abs_pow_scalar bit for bit on the p = 1, 2 fast paths.'''
    a = np.abs(np.asarray(z))
    if p == 1.0:
        return a.astype(np.float64)
    if p == 2.0:
        return (a*a).astype(np.float64)
    out = np.zeros(a.shape, dtype=np.float64)
    nz = a > 0
    out[nz] = np.exp(p*np.log(a[nz]))
    return out


def tree_sum(arr):
    '''pairwise_sum over any array, flattened in C-order.'''
    return pairwise_sum(np.ascontiguousarray(np.ravel(arr), dtype=np.float64))


def check_finite(terms, points, what):
    '''Raises NumericError naming the first lattice point whose term is not finite.

    INPUTS:
        terms : np.ndarray
            (n,) array of summands.

        points : np.ndarray
            (n,d) array with the lattice point each summand belongs to.

        what : str
            Name of the functional, for the message.
    '''
    bad = ~np.isfinite(terms)
    if bad.any():
        k = int(np.argmax(bad))
        point = LatticePoint(points[k])
        raise NumericError(f'{what}: non-finite term {terms[k]} at {tuple(point)}.', index=point)


def resolve_threads(threads=None):
    '''Thread count from the argument, then the HARDY_THREADS env var; None leaves numba's default.'''
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        if env:
            threads = int(env)
    return threads


def set_threads(threads=None, verbose=False):
    '''Caps the numba worker pool. Returns the count in effect.'''
    threads = resolve_threads(threads)
    if threads is not None:
        threads = max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS))
        numba.set_num_threads(threads)
    if verbose: print(f'numba threads: {numba.get_num_threads()}')
    return numba.get_num_threads()
