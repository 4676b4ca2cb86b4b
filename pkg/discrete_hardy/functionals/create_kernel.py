'''Creation Date: 18/10/26

Kernel tables for the nonlocal functionals.
'''

import numpy as np


def power(exponent, max_radius, verbose=False):
    '''Table of the power kernel r^(-exponent) indexed by the sup-norm distance r.

    Distances between distinct lattice points are at least 1, so entry 0 is unused and set to 0.

    INPUTS:
        exponent : float
            The kernel decay, sp + d for the fractional energy (plus eps for the weighted variant).

        max_radius : int
            The largest distance that will be looked up.

        verbose : bool
            Flag for printing out debug statements

    OUTPUTS:
        kernel : np.ndarray
            (max_radius+1,) float64 array with kernel[r] = r^(-exponent).
    '''
    if verbose: print('==== discrete_hardy.functionals.create_kernel.power()')
    kernel = np.zeros(int(max_radius) + 1)
    r = np.arange(1, int(max_radius) + 1, dtype=np.float64)
    kernel[1:] = np.exp(-exponent*np.log(r))
    return kernel
