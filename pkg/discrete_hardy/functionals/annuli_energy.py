'''Creation Date: 18/10/26

Dyadic annuli energy: sum over n >= 1, j in A_n, m in A_(n+K) of |u(j) - u(m)|^p 2^(-(n+K)(d+sp)).

Only the nonzero values of u are enumerated. A_n points outside the support, or inside it with u = 0, all contribute |u(m)|^p against
every nonzero partner. Their number follows from the closed-form annulus size, so annuli far larger than the box are never enumerated.
'''

import numpy as np
import numba

from .reductions import pairwise_sum, abs_pow, abs_pow_scalar, tree_sum
from ..lattice import annulus_level, annulus_size
from ..errors import ValidationError, NumericError


def annuli_energy(u, s, p, K, verbose=False):
    '''Annuli energy of a compactly supported function on Z_+^d.

    INPUTS:
        u : LatticeFunction
            Function on a NONNEGATIVE domain.

        s, p : float
            Smoothness index and power, both > 0.

        K : int
            Annulus gap, K >= 1.

        verbose : bool
            Flag for printing out debug statements

    OUTPUTS:
        value : float
    '''
    if verbose: print('==== discrete_hardy.functionals.annuli_energy()')
    if u.domain.lattice != 'NONNEGATIVE':
        raise ValidationError('annuli_energy is defined on the NONNEGATIVE lattice only.')
    if int(K) != K or K < 1:
        raise ValidationError(f'K should be an integer >= 1, was {K}.')
    if s <= 0 or p <= 0:
        raise ValidationError(f's and p should be > 0, were s={s}, p={p}.')
    d = u.domain.dimension
    levels = annulus_level(u.domain.norms())
    nonzero = u.values != 0
    if not nonzero.any():
        return 0.0
    top = int(levels[nonzero].max())

    terms = []
    for n in range(1, top + 1):
        a = u.values[nonzero & (levels == n)]
        b = u.values[nonzero & (levels == n + K)]
        if a.size == 0 and b.size == 0:
            continue
        a_zero = annulus_size(n, d) - a.size
        b_zero = annulus_size(n + K, d) - b.size
        pair_sum = _cross_pair_sum(np.array(a.real, dtype=np.float64), np.array(a.imag, dtype=np.float64),
                                   np.array(b.real, dtype=np.float64), np.array(b.imag, dtype=np.float64), float(p))
        pair_sum += float(b_zero)*tree_sum(abs_pow(a, p)) + float(a_zero)*tree_sum(abs_pow(b, p))
        terms.append(pair_sum * 2.0**(-(n + K)*(d + s*p)))
        if verbose: print(f'n={n}: {a.size} x {b.size} nonzero pairs')

    value = tree_sum(np.array(terms)) if terms else 0.0
    if not np.isfinite(value):
        raise NumericError(f'annuli_energy overflowed for s={s}, p={p}, K={K}.')
    return float(value)


@numba.njit(parallel=True, cache=True)
def _cross_pair_sum(a_re, a_im, b_re, b_im, p):
    '''sum over i, j of |a_i - b_j|^p, one pairwise-reduced row per i.'''
    rows = np.zeros(a_re.shape[0])
    for i in numba.prange(a_re.shape[0]):
        buf = np.zeros(b_re.shape[0])
        for j in range(b_re.shape[0]):
            buf[j] = abs_pow_scalar(np.hypot(a_re[i] - b_re[j], a_im[i] - b_im[j]), p)
        rows[i] = pairwise_sum(buf)
    return pairwise_sum(rows)
