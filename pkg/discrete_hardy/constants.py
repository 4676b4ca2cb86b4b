'''Creation Date: 18/10/26

Explicit constants of the discrete Hardy inequalities, and the theorem-level assemblies that combine them.

FUNCTIONS:
    minimal_K
        Smallest annulus gap K making the dyadic annulus lemma applicable.

    lemma_constant, lemma_constant_bound
        The annulus lemma constant C(d,p,s,K), and its dimension-free bound used where sp < d.

    path_constant
        The constant C_L(k,s,p) from comparing annuli pairs with nearest-neighbour edges along axis paths.

    trivial_lemma_constant
        The small-box constant c(p,d,N), built by induction over the l1-radius.

    theorem_constant
        Assembles the constant for one regime and records every factor in a trace.
'''

import json
import math
from dataclasses import dataclass, field, asdict
from typing import Optional

from .errors import ValidationError, RegimeError, NumericError
from .functionals import EnergyVariant
from .lattice import LATTICE_KINDS

REGIMES = ('T11_1', 'T11_2', 'T11_3', 'T11_4', 'T11_5', 'T12_1', 'T12_2', 'T12_3', 'LEM21_SMALL', 'LEM21_LARGE', 'LEM41_BOX')
LOCAL_REGIMES = ('T11_1', 'T11_2', 'T11_3', 'T11_4', 'T11_5')
FRACTIONAL_REGIMES = ('T12_1', 'T12_2', 'T12_3')
ORIGIN_ZERO_REGIMES = ('T11_3', 'T11_4', 'T11_5', 'T12_2', 'T12_3', 'LEM41_BOX')
# the two families of lattice reductions to Z^d
GAP_BELOW_REGIMES = ('T11_1', 'T11_2', 'T12_1')
GAP_ABOVE_REGIMES = ('T11_3', 'T11_4', 'T11_5', 'T12_2', 'T12_3')

MAX_K = 64
REL_TOL = 1e-12
OVERFLOW_LIMIT = 1e300


def _close(a, b):
    return math.isclose(a, b, rel_tol=REL_TOL, abs_tol=REL_TOL)


def _pow2(x):
    try:
        return 2.0**x
    except OverflowError:
        return math.inf


@dataclass
class HardyParams:
    '''Regime tag plus its parameters.

    s is only read by the fractional and annulus-lemma regimes; the local regimes derive it. delta = None means the largest admissible
    value (d - p for T11_2, d - sp for T12_1). K = None means the minimal admissible gap. N is the box radius and is only used by
    LEM41_BOX. weight picks the LOCAL_WEIGHTED form for T11_4.
    '''
    regime: str
    d: int
    p: float
    s: Optional[float] = None
    t: Optional[float] = None
    eps: Optional[float] = None
    delta: Optional[float] = None
    K: Optional[int] = None
    lattice: str = 'NONNEGATIVE'
    N: Optional[int] = None
    weight: str = 'outer'

    def validate(self):
        '''Raises ValidationError naming the first violated condition. Returns self for chaining.'''
        d, p, s, eps = self.d, self.p, self.s, self.eps
        reg = self.regime
        if reg not in REGIMES:
            raise ValidationError(f'regime should be one of {REGIMES}, was {reg}.')
        if int(d) != d or d < 1:
            raise ValidationError(f'd should be an integer >= 1, was {d}.')
        if not p > 0:
            raise ValidationError(f'p should be > 0, was {p}.')
        if self.lattice not in LATTICE_KINDS:
            raise ValidationError(f'lattice should be one of {LATTICE_KINDS}, was {self.lattice}.')
        if self.K is not None and (int(self.K) != self.K or self.K < 1):
            raise ValidationError(f'K should be an integer >= 1 or AUTO, was {self.K}.')
        if self.weight not in ('outer', 'max'):
            raise ValidationError(f"weight should be 'outer' or 'max', was {self.weight}.")

        needs_s = reg in FRACTIONAL_REGIMES or reg.startswith('LEM21')
        if needs_s and (s is None or not s > 0):
            raise ValidationError(f'{reg} needs s > 0, was {s}.')
        if reg in ('T11_4', 'T11_5', 'T12_2') and (eps is None or not eps > 0):
            raise ValidationError(f'{reg} needs eps > 0, was {eps}.')
        if reg.startswith('LEM') and self.lattice != 'NONNEGATIVE':
            raise ValidationError(f'{reg} is stated on the NONNEGATIVE lattice only.')

        if reg == 'T11_1' and not (p <= 1 < d):
            raise ValidationError(f'T11_1 requires 0 < p <= 1 < d, got p={p}, d={d}.')
        if reg == 'T11_2':
            if not (1 <= p < d):
                raise ValidationError(f'T11_2 requires 1 <= p < d, got p={p}, d={d}.')
            self._check_delta(d - p)
        if reg == 'T11_3' and not d < p:
            raise ValidationError(f'T11_3 requires d < p, got p={p}, d={d}.')
        if reg == 'T11_4' and not _close(d, p):
            raise ValidationError(f'T11_4 requires d = p, got p={p}, d={d}.')
        if reg == 'T11_5' and not (d == 1 and p < 1):
            raise ValidationError(f'T11_5 requires d = 1 and 0 < p < 1, got p={p}, d={d}.')
        if reg == 'T12_1':
            if not s*p < d or _close(s*p, d):
                raise ValidationError(f'T12_1 requires sp < d, got sp={s*p}, d={d}.')
            self._check_delta(d - s*p)
        if reg == 'T12_2' and not _close(s*p, d):
            raise ValidationError(f'T12_2 requires sp = d, got sp={s*p}, d={d}.')
        if reg == 'T12_3' and not (s*p > d and not _close(s*p, d)):
            raise ValidationError(f'T12_3 requires sp > d, got sp={s*p}, d={d}.')
        if reg == 'LEM21_SMALL' and not (s*p < d and not _close(s*p, d)):
            raise ValidationError(f'LEM21_SMALL requires sp < d, got sp={s*p}, d={d}.')
        if reg == 'LEM21_LARGE' and not (s*p > d and not _close(s*p, d)):
            raise ValidationError(f'LEM21_LARGE requires sp > d, got sp={s*p}, d={d}.')
        if reg == 'LEM41_BOX' and (self.N is None or int(self.N) != self.N or self.N < 1):
            raise ValidationError(f'LEM41_BOX needs a box radius N >= 1, was {self.N}.')
        return self

    def _check_delta(self, gap):
        if self.delta is not None and not (0 < self.delta <= gap*(1 + REL_TOL)):
            raise ValidationError(f'{self.regime} requires 0 < delta <= {gap}, was {self.delta}.')

    def resolved_delta(self):
        if self.regime == 'T11_1':
            return 1.0
        if self.delta is not None:
            return float(self.delta)
        if self.regime == 'T11_2':
            return float(self.d - self.p)
        if self.regime == 'T12_1':
            return float(self.d - self.s*self.p)
        return None

    def s_used(self):
        '''The smoothness index the regime's proof works with.'''
        reg = self.regime
        if reg in ('T11_1', 'T11_2'):
            return max(1/self.p, 1.0)
        if reg in ('T11_3', 'T11_5', 'LEM41_BOX'):
            return 1.0
        if reg == 'T11_4':
            return 1.0 + self.eps/self.p
        if reg == 'T12_2':
            return self.s + self.eps/self.p
        return float(self.s)

    def lhs_exponent(self):
        '''Weight exponent t of the left side.'''
        reg, p = self.regime, self.p
        if reg == 'T11_1':
            return 1.0
        if reg in ('T11_2', 'T11_3'):
            return float(p)
        if reg == 'T11_4':
            return p + self.eps
        if reg == 'T11_5':
            return 1.0 + self.eps
        if reg == 'T12_2':
            return self.s*p + self.eps
        if reg == 'LEM41_BOX':
            return 0.0
        return self.s*p

    def rhs_variant(self):
        '''EnergyVariant of the right side; None for the annulus lemma, whose right side is annuli_energy.'''
        reg = self.regime
        if reg in ('T11_1', 'T11_2'):
            return EnergyVariant('LOCAL_EXCLUDE_ORIGIN')
        if reg in ('T11_3', 'T11_5', 'LEM41_BOX'):
            return EnergyVariant('LOCAL_INCLUDE_ORIGIN')
        if reg == 'T11_4':
            return EnergyVariant('LOCAL_WEIGHTED', self.eps, self.weight)
        if reg == 'T12_1':
            return EnergyVariant('FRAC_EXCLUDE_ORIGIN')
        if reg == 'T12_2':
            return EnergyVariant('FRAC_WEIGHTED', self.eps)
        if reg == 'T12_3':
            return EnergyVariant('FRAC_FULL')
        return None

    def requires_origin_zero(self):
        return self.regime in ORIGIN_ZERO_REGIMES

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


@dataclass
class ConstantReport:
    '''A theorem constant and the trace of how it was assembled.

    assembly lists factors as {term, factor, value, source}. The reported value is the sum over terms of the product of that term's
    factors.
    '''
    value: float
    K: Optional[int]
    s_used: float
    regime: str
    assembly: list = field(default_factory=list)

    def recompute(self):
        terms = {}
        for entry in self.assembly:
            terms[entry['term']] = terms.get(entry['term'], 1.0) * entry['value']
        return math.fsum(terms.values())

    def to_dict(self):
        return asdict(self)

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)


def minimal_K(s, p, d, delta=None):
    '''Smallest K >= 1 with 2^(sp+1) (2^(p-1) v 1) 2^(-K gap) <= 1.

    INPUTS:
        s, p : float
            Smoothness index and power.

        d : int
            Dimension.

        delta : None, float
            The gap to use. Defaults to |sp - d|. The local and sp < d regimes pass the proof's delta instead.

    OUTPUTS:
        K : int
    '''
    sp = s*p
    if delta is None:
        gap = abs(sp - d)
        if _close(sp, d):
            raise RegimeError(f'minimal_K needs sp != d, got sp={sp}, d={d}.')
    else:
        gap = float(delta)
        if not gap > 0:
            raise RegimeError(f'minimal_K needs a positive gap, got {delta}.')
    lead = sp + 1 + max(p - 1, 0.0)
    estimate = lead/gap
    if estimate > MAX_K + 1:
        raise RegimeError(f'minimal_K would exceed {MAX_K} (gap {gap} too small for sp={sp}).')

    def satisfied(K):
        return lead - K*gap <= REL_TOL*max(1.0, lead)

    K = max(1, math.ceil(estimate))
    while K > 1 and satisfied(K - 1):
        K -= 1
    while not satisfied(K):
        K += 1
    if K > MAX_K:
        raise RegimeError(f'minimal_K = {K} exceeds {MAX_K} (gap {gap} too small for sp={sp}).')
    return K


def K_condition_holds(s, p, K, gap):
    '''Whether 2^(sp+1)(2^(p-1) v 1) 2^(-K gap) <= 1.'''
    lead = s*p + 1 + max(p - 1, 0.0)
    return lead - K*gap <= REL_TOL*max(1.0, lead)


def lemma_constant(d, p, s, K):
    '''C(d,p,s,K) = 2^(sp+1+K(d ^ sp)) (2^(p-1) v 1) / (1 - 2^-d).'''
    if K < 1:
        raise ValidationError(f'K should be >= 1, was {K}.')
    sp = s*p
    return _pow2(sp + 1 + K*min(d, sp)) * max(_pow2(p - 1), 1.0) / (1 - 2.0**(-d))


def lemma_constant_bound(p, s, K):
    '''2^(sp+2+Ksp) (2^(p-1) v 1): bounds C(d,p,s,K) for every d > sp, with no dependence on d.'''
    if K < 1:
        raise ValidationError(f'K should be >= 1, was {K}.')
    sp = s*p
    return _pow2(sp + 2 + K*sp) * max(_pow2(p - 1), 1.0)


def path_constant(k, s, p):
    '''C_L(k,s,p), including its leading factor 2, with the three cases sp < p v 1, sp = p v 1 and sp > p v 1.'''
    if k < 1:
        raise ValidationError(f'k should be >= 1, was {k}.')
    q = max(p, 1.0)
    sp = s*p
    lead = 2.0 * _pow2(k*(q - sp - 1))
    if _close(sp, q):
        return lead * (k + 1)
    if sp < q:
        return lead * _pow2(q - sp) / (1 - _pow2(sp - q))
    return lead * _pow2(k*(sp - q)) / (1 - _pow2(q - sp))


def trivial_lemma_constant(p, d, N):
    '''Small-box constant c(p,d,N): c_1 = 1/2, c_(r+1) = (1 + a) c_r v a with a = 2^(p-1) v 1, run to r = Nd.

    Returns inf once the recursion passes 1e300.
    '''
    if N < 1:
        raise ValidationError(f'N should be >= 1, was {N}.')
    a = max(_pow2(p - 1), 1.0)
    c = 0.5
    r = 1
    steps = N*d
    while r < steps:
        c = max((1 + a)*c, a)
        if c > OVERFLOW_LIMIT:
            return math.inf
        r += 1
    return c


def theorem_constant(params, verbose=False):
    '''Assembles the constant for one regime the way its proof composes it.

    INPUTS:
        params : HardyParams
            Valid parameters for the regime.

        verbose : bool
            Flag for printing out debug statements

    OUTPUTS:
        report : ConstantReport
            value, K, s_used and the assembly trace.
    '''
    if verbose: print('==== discrete_hardy.constants.theorem_constant()')
    params.validate()
    reg, d, p = params.regime, params.d, params.p
    s = params.s_used()
    trace = []

    def add(term, factor, value, source):
        trace.append({'term': term, 'factor': factor, 'value': float(value), 'source': source})

    K = None
    if reg in ('T11_1', 'T11_2'):
        K = _resolve_K(params, s, p, d, params.resolved_delta())
        add(0, '2', 2.0, 'annulus lemma, dimension-free doubling')
        add(0, 'C(1,p,s,K)', lemma_constant_bound(p, s, K), f'annulus lemma constant, sp<d form, s=(1/p) v 1={s!r}')
        add(0, 'C_L(K,s,p)', path_constant(K, s, p), 'axis path comparison of annuli pairs with edges')
        add(0, 'd^((p v 1)-2)', float(d)**(max(p, 1.0) - 2), 'Holder factor along paths')

    elif reg == 'T11_3':
        K = _resolve_K(params, s, p, d, None)
        _large_gap_local(add, d, p, s, K, eps=0.0)

    elif reg == 'T11_4':
        K = _resolve_K(params, s, p, d, None)
        _large_gap_local(add, d, p, s, K, eps=params.eps, weight=params.weight)

    elif reg == 'T11_5':
        p1 = 1.0 + params.eps
        K = _resolve_K(params, 1.0, p1, 1, None)
        add(0, 'concavity', 1.0, f'|u|^(p/(1+eps)) reduction to the d<p case with p\'={p1!r}')
        _large_gap_local(add, 1, p1, 1.0, K, eps=0.0)

    elif reg == 'T12_1':
        K = _resolve_K(params, s, p, d, params.resolved_delta())
        add(0, 'C(1,p,s,K)', lemma_constant_bound(p, s, K), 'annulus lemma constant, sp<d form')

    elif reg in ('T12_2', 'T12_3', 'LEM21_SMALL', 'LEM21_LARGE'):
        K = _resolve_K(params, s, p, d, None)
        source = 'annulus lemma constant'
        if reg == 'T12_2':
            source += f', s raised to s+eps/p={s!r}'
        add(0, 'C(d,p,s,K)', lemma_constant(d, p, s, K), source)

    elif reg == 'LEM41_BOX':
        add(0, 'c(p,d,N)', trivial_lemma_constant(p, d, params.N), 'small-box induction constant')

    if params.lattice == 'FULL':
        terms = sorted({e['term'] for e in trace})
        if reg in GAP_BELOW_REGIMES:
            t = params.lhs_exponent()
            for term in terms:
                add(term, '2^t+1', _pow2(t) + 1, 'shifted-octant reduction to Z^d')
        else:
            for term in terms:
                add(term, '2^d', _pow2(d), 'overlapping-octant reduction to Z^d')

    report = ConstantReport(value=0.0, K=K, s_used=s, regime=reg, assembly=trace)
    report.value = report.recompute()
    if not (math.isfinite(report.value) and report.value > 0):
        raise NumericError(f'{reg} constant is not finite and positive: {report.value}.')
    if verbose: print(f'{reg}: K={K}, value={report.value!r}')
    return report


def _large_gap_local(add, d, p, s, K, eps=0.0, weight='outer'):
    '''Annulus part plus small-box part of the d <= p local constants.'''
    add(0, 'C(d,p,s,K)', lemma_constant(d, p, s, K), 'annulus lemma constant')
    add(0, 'C_L(K,s,p)', path_constant(K, s, p), 'axis path comparison of annuli pairs with edges')
    add(0, 'd^((p v 1)-2)', float(d)**(max(p, 1.0) - 2), 'Holder factor along paths')
    if eps > 0 and weight == 'max':
        add(0, '2^eps', _pow2(eps), '||j|| >= (||j|| v ||k||)/2 for neighbours')
    add(1, '2', 2.0, 'small box counted on both sides of the split')
    if eps > 0:
        add(1, '2', 2.0, 'pairs at the origin mirrored into j != 0')
    add(1, 'c(p,d,2^K)', trivial_lemma_constant(p, d, 2**K), 'small-box induction constant on B_(2^K)')
    if eps > 0:
        add(1, '(2^K)^eps', _pow2(K*eps), 'max-weight bound inside B_(2^K)')


def _resolve_K(params, s, p, d, delta):
    '''User K (checked against the lemma condition) or the minimal one.'''
    if params.K is None:
        return minimal_K(s, p, d, delta)
    gap = delta if delta is not None else abs(s*p - d)
    if not K_condition_holds(s, p, params.K, gap):
        raise ValidationError(f'K={params.K} violates 2^(sp+1)(2^(p-1) v 1) 2^(-K gap) <= 1 for sp={s*p}, gap={gap}.')
    return int(params.K)
