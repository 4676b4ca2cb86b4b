'''Creation Date: 18/10/26

Radial test families on Z_+^d used to show that the weight exponents of the local inequalities cannot be lowered, their closed-form
bounds, and exact values by shell summation.

    u_n = 1 on ||x||_inf <= n, else 0            (INDICATOR_UN)
    v_n = (1 - ||x||_inf/n)_+                    (TENT_VN)
    1 - v_n = min(||x||_inf/n, 1)                (COMPLEMENT_1_MINUS_VN)

Every family is a function of r = ||x||_inf only, and the sphere S_r of Z_+^d has (r+1)^d - r^d points. Sums of radial functions
therefore reduce to one-dimensional sums over r. The *_exact functions use this, and serve as oracles for the lattice functionals.
'''

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .lattice import Domain, shell_size
from .lattice_function import LatticeFunction
from .errors import ValidationError

FAMILY_KINDS = ('INDICATOR_UN', 'TENT_VN', 'COMPLEMENT_1_MINUS_VN')
FAMILY_ALIASES = {'un': 'INDICATOR_UN', 'vn': 'TENT_VN', 'complement': 'COMPLEMENT_1_MINUS_VN',
                  'UN': 'INDICATOR_UN', 'VN': 'TENT_VN', 'COMPLEMENT': 'COMPLEMENT_1_MINUS_VN'}
INFINITE = math.inf


def family_kind(kind):
    '''Canonical family tag from a tag or a short alias (un, vn, complement).'''
    kind = FAMILY_ALIASES.get(kind, kind)
    if kind not in FAMILY_KINDS:
        raise ValidationError(f'family should be one of {FAMILY_KINDS} or {sorted(FAMILY_ALIASES)}, was {kind}.')
    return kind


@dataclass(frozen=True)
class TestFamily:
    '''One member of a test family: its kind, scale n >= 1 and dimension d.'''
    __test__ = False

    kind: str
    n: int
    d: int

    def __post_init__(self):
        object.__setattr__(self, 'kind', family_kind(self.kind))
        if int(self.n) != self.n or self.n < 1:
            raise ValidationError(f'scale n should be an integer >= 1, was {self.n}.')
        if int(self.d) != self.d or self.d < 1:
            raise ValidationError(f'dimension d should be an integer >= 1, was {self.d}.')

    def radial(self, r):
        '''Family value as a function of r = ||x||_inf (array in, array out).'''
        r = np.asarray(r, dtype=np.float64)
        if self.kind == 'INDICATOR_UN':
            return (r <= self.n).astype(np.float64)
        tent = np.maximum(1.0 - r/self.n, 0.0)
        if self.kind == 'TENT_VN':
            return tent
        return 1.0 - tent


def materialize(family, dom, verbose=False):
    '''Values of a family member on the support box of dom.

    INPUTS:
        family : TestFamily

        dom : Domain
            Box of radius >= n+1 for INDICATOR_UN and TENT_VN. COMPLEMENT_1_MINUS_VN does not have compact support, so the box radius is
            its truncation radius and the caller has to account for the missing tail.

        verbose : bool
            Flag for printing out debug statements

    OUTPUTS:
        u : LatticeFunction
    '''
    if verbose: print('==== discrete_hardy.testfns.materialize()')
    if dom.dimension != family.d:
        raise ValidationError(f'family dimension {family.d} differs from domain dimension {dom.dimension}.')
    if family.kind != 'COMPLEMENT_1_MINUS_VN' and dom.radius < family.n + 1:
        raise ValidationError(f'{family.kind} with n={family.n} needs a box of radius >= {family.n + 1}, was {dom.radius}.')
    if dom.radius < 1:
        raise ValidationError('the box radius should be >= 1.')
    return LatticeFunction(dom, family.radial(dom.norms()))


def _check_n(n):
    if int(n) != n or n < 1:
        raise ValidationError(f'scale n should be an integer >= 1, was {n}.')


def un_lhs_bound(d, t, n):
    '''Lower bound for sum_(j != 0) |u_n(j)|^p ||j||^-t (independent of p), t > 0.

    d/(d-t) n^(d-t) if d-t >= 1; d/|d-t| |(n+1)^(d-t) - 1| if d-t < 1 and d != t; d ln(n+1) if d = t.
    '''
    _check_n(n)
    if not t > 0:
        raise ValidationError(f'un_lhs_bound needs t > 0, was {t}.')
    gap = d - t
    if math.isclose(gap, 0.0, abs_tol=1e-12):
        return d*math.log(n + 1)
    if gap >= 1:
        return d/gap * n**gap
    return d/abs(gap) * abs((n + 1)**gap - 1)


def un_rhs_bound(d, p, n):
    '''Upper bound for the full ordered local energy of u_n: 2dn^(d-1) + 2^(d+1) d n^(d-2) for d >= 2, 2dn^(d-1) for d = 1.'''
    _check_n(n)
    if not p > 0:
        raise ValidationError(f'p should be > 0, was {p}.')
    value = 2*d*n**(d - 1)
    if d >= 2:
        value += 2**(d + 1) * d * float(n)**(d - 2)
    return float(value)


def vn_lhs_bound(d, t, p, n):
    '''Lower bound d n^(d-t) (B(p+1, d-t) - n^-m/m) with m = (d-t) ^ 1, for 0 < t < d. May be negative for small n.'''
    _check_n(n)
    if not 0 < t < d:
        raise ValidationError(f'vn_lhs_bound needs 0 < t < d, got t={t}, d={d}.')
    m = min(d - t, 1.0)
    return d * n**(d - t) * (beta_function(p + 1, d - t) - n**(-m)/m)


def one_minus_vn_lhs_bound(d, t, p, n):
    '''Lower bound for the weighted sum of |1 - v_n|^p: n^(d-t) for t > d, INFINITE for t = d.

    The derivation bounds the tail by d/(t-d) n^(d-t), so the displayed form is established for d < t <= 2d.
    '''
    _check_n(n)
    if t < d and not math.isclose(t, d):
        raise ValidationError(f'one_minus_vn_lhs_bound needs t >= d, got t={t}, d={d}.')
    if math.isclose(t, d):
        return INFINITE
    return float(n)**(d - t)


def vn_energy_bound(d, p, n):
    '''Upper bound for the full ordered local energy of v_n: 2n^(d-p) + 2^(d+1) n^(d-1-p) (second term only for d >= 2).'''
    _check_n(n)
    if not p > 0:
        raise ValidationError(f'p should be > 0, was {p}.')
    value = 2.0 * float(n)**(d - p)
    if d >= 2:
        value += 2.0**(d + 1) * float(n)**(d - 1 - p)
    return value


def beta_function(a, b):
    '''Euler Beta B(a, b) = exp(ln Gamma(a) + ln Gamma(b) - ln Gamma(a+b)).'''
    if not (a > 0 and b > 0):
        raise ValidationError(f'Beta function needs positive arguments, got a={a}, b={b}.')
    return float(np.exp(special.betaln(a, b)))


def fit_exponent(samples):
    '''Least-squares slope of log(value) against log(n).

    INPUTS:
        samples : list of (n, value)
            At least 3 samples, n strictly increasing, values positive.

    OUTPUTS:
        fit : dict
            {slope, intercept, residual}, residual being the 2-norm of the log residuals.
    '''
    samples = list(samples)
    if len(samples) < 3:
        raise ValidationError(f'fit_exponent needs at least 3 samples, got {len(samples)}.')
    n = np.array([s[0] for s in samples], dtype=np.float64)
    v = np.array([s[1] for s in samples], dtype=np.float64)
    if np.any(np.diff(n) <= 0) or np.any(n <= 0):
        raise ValidationError('fit_exponent needs positive, strictly increasing scales n.')
    if np.any(~np.isfinite(v)) or np.any(v <= 0):
        raise ValidationError('fit_exponent needs finite positive values.')
    x, y = np.log(n), np.log(v)
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    residual = float(np.linalg.norm(y - (slope*x + intercept)))
    return {'slope': float(slope), 'intercept': float(intercept), 'residual': residual}


def family_lhs_exact(family, t, p, radius=None):
    '''sum over j != 0 of |f(j)|^p ||j||^-t by shell summation.

    INPUTS:
        family : TestFamily

        t, p : float

        radius : None, int
            Truncation radius for COMPLEMENT_1_MINUS_VN. When None the complement sum is evaluated to infinity: a partial sum up to n
            plus a Hurwitz zeta tail for t > d, INFINITE for t <= d.

    OUTPUTS:
        value : float
    '''
    d, n = family.d, family.n
    if family.kind != 'COMPLEMENT_1_MINUS_VN':
        return _shell_sum(family, t, p, 1, n)
    if radius is not None:
        return _shell_sum(family, t, p, 1, int(radius))
    if t <= d:
        return INFINITE
    head = _shell_sum(family, t, p, 1, n - 1)
    # on r >= n the complement is 1, and (r+1)^d - r^d = sum_(i<d) C(d,i) r^i
    tail = math.fsum(math.comb(d, i) * float(special.zeta(t - i, n)) for i in range(d))
    return head + tail


def _shell_sum(family, t, p, lo, hi):
    if hi < lo:
        return 0.0
    r = np.arange(lo, hi + 1, dtype=np.float64)
    shells = np.array([shell_size(int(k), family.d) for k in range(lo, hi + 1)], dtype=np.float64)
    f = family.radial(r)
    terms = shells * np.abs(f)**p * r**(-t)
    return math.fsum(terms)


def un_energy_exact(d, n):
    '''Full ordered local energy of u_n: every x in S_n has one outward edge per coordinate equal to n, 2d(n+1)^(d-1) in total.'''
    _check_n(n)
    return float(2*d*(n + 1)**(d - 1))


def vn_energy_exact(d, p, n, exclude_origin=False):
    '''Ordered local energy of v_n: increments are 1/n between S_k and S_(k+1) for k < n, and there are d(k+1)^(d-1) such edges.

    With exclude_origin the d edges at the origin are dropped (the LOCAL_EXCLUDE_ORIGIN form).
    '''
    _check_n(n)
    edges = math.fsum(d * float(m)**(d - 1) for m in range(1, n + 1))
    if exclude_origin:
        edges -= d
    return 2.0 * edges * float(n)**(-p)
