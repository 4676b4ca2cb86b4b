'''Creation Date: 18/10/26

Truncated fractional p-energy: the sum over ordered pairs j != m of |u(j) - u(m)|^p ||j - m||_inf^-(sp+d).

Pairs are restricted to the support box enlarged by a margin M. Every term is nonnegative, so the truncated value is a lower bound for
the infinite sum and is nondecreasing in M.

Numba is used for the pair loops. The outer index runs in parallel. Each outer index j fills its own row buffer, which is reduced by the
pairwise tree, and the row totals are reduced by the same tree.
'''

import numpy as np
import numba

from . import create_kernel
from .energy_variant import as_variant
from .reductions import pairwise_sum, abs_pow_scalar
from ..errors import ValidationError, NumericError


def fractional_energy(u, s, p, variant, margin=0, return_margin=False, verbose=False):
    '''Ordered-pair fractional energy of u over the support box enlarged by margin.

    INPUTS:
        u : LatticeFunction
            The function, zero outside its support box.

        s : float
            Smoothness index, s > 0.

        p : float
            Power, p > 0.

        variant : EnergyVariant or str
            FRAC_FULL, FRAC_EXCLUDE_ORIGIN, or FRAC_WEIGHTED(eps) (kernel exponent sp+d+eps).

        margin : int
            Truncation margin M >= 0.

        return_margin : bool
            If True return (value, margin) so callers can track the truncation alongside the value.

        verbose : bool
            Flag for printing out debug statements

    OUTPUTS:
        value : float
            (or (value, margin) when return_margin is set)
    '''
    if verbose: print('==== discrete_hardy.functionals.fractional_energy()')
    variant = as_variant(variant)
    if not variant.is_fractional:
        raise ValidationError(f'fractional_energy needs a FRAC_* variant, was {variant}.')
    if s <= 0 or p <= 0:
        raise ValidationError(f's and p should be > 0, were s={s}, p={p}.')
    if margin < 0 or int(margin) != margin:
        raise ValidationError(f'margin should be an integer >= 0, was {margin}.')

    domain = u.domain.enlarged(int(margin))
    values = u.embedded(domain).values.ravel()
    coords = domain.points()
    nz = np.flatnonzero(values)
    if verbose: print(f'evaluation box {domain.shape}, {nz.size} nonzero values')
    if nz.size == 0:
        return (0.0, int(margin)) if return_margin else 0.0

    kernel = create_kernel.power(kernel_exponent(s, p, domain.dimension, variant), domain.side - 1)
    origin = _origin_flat(domain) if variant.tag == 'FRAC_EXCLUDE_ORIGIN' else -1
    value = _fractional_pair_sum(np.array(values.real, dtype=np.float64), np.array(values.imag, dtype=np.float64),
                                 coords, nz, values != 0, origin, kernel, float(p))
    if not np.isfinite(value):
        raise NumericError(f'fractional_energy overflowed for s={s}, p={p}, margin={margin}.')
    return (float(value), int(margin)) if return_margin else float(value)


def kernel_exponent(s, p, d, variant):
    '''Decay of the power kernel: sp + d, plus eps for FRAC_WEIGHTED.'''
    alpha = s*p + d
    if variant.tag == 'FRAC_WEIGHTED':
        alpha += variant.eps
    return alpha


def _origin_flat(domain):
    return int(np.ravel_multi_index(domain.origin_index, domain.shape))


@numba.njit(parallel=True, cache=True)
def _fractional_pair_sum(values_re, values_im, coords, nz, is_nz, origin, kernel, p):
    '''Twice the unordered pair sum. Row j (j nonzero) covers partners m that are zero, or nonzero with m > j, so each pair with a nonzero
    endpoint is visited once. Pairs touching `origin` are skipped (origin = -1 disables the exclusion).'''
    n = values_re.shape[0]
    d = coords.shape[1]
    rows = np.zeros(nz.shape[0])
    for r in numba.prange(nz.shape[0]):
        j = nz[r]
        if j == origin:
            continue
        buf = np.zeros(n)
        for m in range(n):
            if m == j or m == origin:
                continue
            if is_nz[m] and m < j:
                continue
            dr = values_re[j] - values_re[m]
            di = values_im[j] - values_im[m]
            if dr == 0.0 and di == 0.0:
                continue
            dist = 0
            for q in range(d):
                c = abs(coords[j, q] - coords[m, q])
                if c > dist:
                    dist = c
            buf[m] = abs_pow_scalar(np.hypot(dr, di), p) * kernel[dist]
        rows[r] = pairwise_sum(buf)
    return 2.0 * pairwise_sum(rows)


@numba.njit(parallel=True, cache=True)
def fractional_form_diagonal(coords, adm, origin, kernel):
    '''Row sums D_j = sum over m in the evaluation box, m != j (and m != origin when origin >= 0) of the kernel, for every admissible j.

    INPUTS:
        coords : np.ndarray
            (n,d) int64 coordinates of the evaluation box.

        adm : np.ndarray
            (k,) flat indices of the admissible (free) points.

        origin : int
            Flat index of an excluded point, or -1.

        kernel : np.ndarray
            Power-kernel table.

    OUTPUTS:
        diag : np.ndarray
            (k,) float64 array.
    '''
    n = coords.shape[0]
    d = coords.shape[1]
    diag = np.zeros(adm.shape[0])
    for r in numba.prange(adm.shape[0]):
        j = adm[r]
        buf = np.zeros(n)
        for m in range(n):
            if m == j or m == origin:
                continue
            dist = 0
            for q in range(d):
                c = abs(coords[j, q] - coords[m, q])
                if c > dist:
                    dist = c
            buf[m] = kernel[dist]
        diag[r] = pairwise_sum(buf)
    return diag


@numba.njit(parallel=True, cache=True)
def fractional_form_offdiag(coords, adm, kernel, x):
    '''y_j = sum over admissible m != j of kernel(||j - m||) x_m, the off-diagonal part of the p = 2 form as a matrix-free product.'''
    k = adm.shape[0]
    d = coords.shape[1]
    y = np.zeros(k)
    for r in numba.prange(k):
        j = adm[r]
        buf = np.zeros(k)
        for c_idx in range(k):
            if c_idx == r:
                continue
            m = adm[c_idx]
            dist = 0
            for q in range(d):
                c = abs(coords[j, q] - coords[m, q])
                if c > dist:
                    dist = c
            buf[c_idx] = kernel[dist] * x[c_idx]
        y[r] = pairwise_sum(buf)
    return y


@numba.njit(parallel=True, cache=True)
def fractional_energy_gradient(coords, adm, values, origin, kernel, p):
    '''Gradient of the ordered-pair fractional energy with respect to the real values at the admissible points.

    values holds the full evaluation-box table (zero off the admissible set). For p > 1 the derivative is
    2p sum_m kernel |u_j - u_m|^(p-2) (u_j - u_m).
    '''
    n = coords.shape[0]
    d = coords.shape[1]
    grad = np.zeros(adm.shape[0])
    for r in numba.prange(adm.shape[0]):
        j = adm[r]
        buf = np.zeros(n)
        for m in range(n):
            if m == j or m == origin:
                continue
            diff = values[j] - values[m]
            if diff == 0.0:
                continue
            dist = 0
            for q in range(d):
                c = abs(coords[j, q] - coords[m, q])
                if c > dist:
                    dist = c
            buf[m] = kernel[dist] * abs_pow_scalar(abs(diff), p - 1.0) * np.sign(diff)
        grad[r] = 2.0 * p * pairwise_sum(buf)
    return grad
