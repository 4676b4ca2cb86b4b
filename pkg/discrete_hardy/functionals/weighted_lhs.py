'''Creation Date: 18/10/26

The weighted left-hand side shared by every inequality.
'''

import numpy as np

from .reductions import abs_pow, tree_sum, check_finite
from ..errors import ValidationError


def weighted_lhs(u, p, t, norm_range=None, verbose=False):
    '''Exact value of sum over j != 0 of |u(j)|^p ||j||_inf^(-t).

    INPUTS:
        u : LatticeFunction
            The function, compactly supported on its domain box.

        p : float
            Power on |u|, p > 0.

        t : float
            Weight exponent.

        norm_range : None, tuple (lo, hi)
            If given, only points with lo <= ||j||_inf < hi are summed (hi may be None for no upper limit). The origin is excluded
            regardless.

        verbose : bool
            Flag for printing out debug statements

    OUTPUTS:
        value : float
    '''
    if verbose: print('==== discrete_hardy.functionals.weighted_lhs()')
    if p <= 0:
        raise ValidationError(f'p should be > 0, was {p}.')
    norms = u.domain.norms()
    mask = norms > 0
    if norm_range is not None:
        lo, hi = norm_range
        mask &= norms >= lo
        if hi is not None:
            mask &= norms < hi
    mask &= u.values != 0
    if not mask.any():
        return 0.0

    r = norms[mask].astype(np.float64)
    terms = abs_pow(u.values[mask], p) * np.exp(-t*np.log(r))
    check_finite(terms, np.argwhere(mask) + u.domain.lower, 'weighted_lhs')
    return float(tree_sum(terms))
