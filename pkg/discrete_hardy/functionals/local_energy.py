'''Creation Date: 18/10/26

Nearest-neighbour p-energy of a lattice function (the discrete Dirichlet energy), in the ordered-pair convention: every unordered edge is
counted once per endpoint that the variant admits as the outer index.

The support box is zero-padded by one layer wherever the lattice continues (high side only on Z_+^d, both sides on Z^d). That way every
edge leaving the support is summed exactly.
'''

import numpy as np

from .energy_variant import as_variant
from .reductions import abs_pow, tree_sum, check_finite
from ..errors import ValidationError


def local_energy(u, p, variant, within_box=False, verbose=False):
    '''Ordered-pair sum of |u(j) - u(k)|^p over neighbours k ~ j, restricted to the variant's index ranges.

    INPUTS:
        u : LatticeFunction
            The function, zero outside its support box.

        p : float
            Power, p > 0.

        variant : EnergyVariant or str
            One of the LOCAL_* variants.

        within_box : bool
            If True only edges with both ends inside the support box are summed (the energy restricted to B_N).

        verbose : bool
            Flag for printing out debug statements

    OUTPUTS:
        value : float
    '''
    if verbose: print('==== discrete_hardy.functionals.local_energy()')
    variant = as_variant(variant)
    if not variant.is_local:
        raise ValidationError(f'local_energy needs a LOCAL_* variant, was {variant}.')
    if p <= 0:
        raise ValidationError(f'p should be > 0, was {p}.')

    pad, weights = edge_weights(u.domain, variant, within_box)
    values = np.pad(u.values, [pad]*u.domain.dimension)
    terms = []
    for q, w in enumerate(weights):
        diff = np.diff(values, axis=q)
        terms.append((abs_pow(diff, p) * w).ravel())
    terms = np.concatenate(terms)
    total = tree_sum(terms)
    if not np.isfinite(total):
        check_finite(terms, _edge_tails(u.domain, pad), 'local_energy')
    return float(total)


def edge_weights(domain, variant, within_box=False):
    '''Ordered-pair weight of every unordered edge (a, a+e_q) of the padded box.

    INPUTS:
        domain : Domain
            The support box.

        variant : EnergyVariant
            A LOCAL_* variant.

        within_box : bool
            Skip the padding layer.

    OUTPUTS:
        pad : tuple (low, high)
            Padding width applied on each axis.

        weights : list of np.ndarray
            Entry q has the padded shape shortened by one along axis q. Entry [a] is the weight of the edge between padded index a and
            a+e_q: 2 for a plain edge counted in both orders, 0 for an excluded edge, and the sum of endpoint weights for LOCAL_WEIGHTED.
    '''
    pad = _pad_widths(domain, within_box)
    norms = _padded_norms(domain, pad)
    weights = []
    for q in range(domain.dimension):
        na, nb = _axis_pair(norms, q)
        if variant.tag == 'LOCAL_INCLUDE_ORIGIN':
            w = np.full(na.shape, 2.0)
        elif variant.tag == 'LOCAL_EXCLUDE_ORIGIN':
            w = 2.0 * ((na > 0) & (nb > 0))
        elif variant.weight == 'outer':
            w = _inv_pow(na, variant.eps) + _inv_pow(nb, variant.eps)
        else:
            # neighbours are never both the origin, so the max norm is >= 1
            count = (na > 0).astype(np.float64) + (nb > 0)
            w = count * np.exp(-variant.eps*np.log(np.maximum(na, nb)))
        weights.append(w)
    return pad, weights


def edge_list(domain, variant, within_box=False):
    '''Flat edge list of the local form, for assembling it as a matrix.

    OUTPUTS:
        a, b : np.ndarray
            (n_edges,) int64 flat indices into the support box (C-order), or -1 for padding points outside it.

        w : np.ndarray
            (n_edges,) positive weights, so that local_energy(u, 2, variant) = sum w |u[a] - u[b]|^2 with u[-1] read as 0.
    '''
    variant = as_variant(variant)
    if not variant.is_local:
        raise ValidationError(f'edge_list needs a LOCAL_* variant, was {variant}.')
    pad, weights = edge_weights(domain, variant, within_box)
    index = np.pad(np.arange(domain.n_points, dtype=np.int64).reshape(domain.shape), [pad]*domain.dimension, constant_values=-1)
    a_all, b_all, w_all = [], [], []
    for q, w in enumerate(weights):
        ia, ib = _axis_pair(index, q)
        keep = (w > 0) & ((ia >= 0) | (ib >= 0))
        a_all.append(ia[keep])
        b_all.append(ib[keep])
        w_all.append(w[keep])
    return np.concatenate(a_all), np.concatenate(b_all), np.concatenate(w_all)


def _pad_widths(domain, within_box):
    if within_box:
        return (0, 0)
    return (0, 1) if domain.lattice == 'NONNEGATIVE' else (1, 1)


def _padded_norms(domain, pad):
    lower = domain.lower - pad[0]
    side = domain.side + pad[0] + pad[1]
    coords = np.abs(np.arange(lower, lower + side)).astype(np.float64)
    norms = np.zeros((side,)*domain.dimension)
    for q in range(domain.dimension):
        view = [1]*domain.dimension
        view[q] = side
        norms = np.maximum(norms, coords.reshape(view))
    return norms


def _axis_pair(arr, q):
    lo = [slice(None)]*arr.ndim
    hi = [slice(None)]*arr.ndim
    lo[q] = slice(0, -1)
    hi[q] = slice(1, None)
    return arr[tuple(lo)], arr[tuple(hi)]


def _inv_pow(norms, eps):
    out = np.zeros(norms.shape)
    nz = norms > 0
    out[nz] = np.exp(-eps*np.log(norms[nz]))
    return out


def _edge_tails(domain, pad):
    '''Coordinates of the lower endpoint of every edge, in the order local_energy concatenates its terms.'''
    lower = domain.lower - pad[0]
    side = domain.side + pad[0] + pad[1]
    grid = np.indices((side,)*domain.dimension) + lower
    tails = []
    for q in range(domain.dimension):
        lo = [slice(None)] + [slice(None)]*domain.dimension
        lo[q+1] = slice(0, -1)
        tails.append(grid[tuple(lo)].reshape(domain.dimension, -1).T)
    return np.concatenate(tails)
