'''Creation Date: 18/10/26

Verification harness. Random test functions are generated per profile, each inequality is checked with its assembled constant, and the
largest observed ratio per parameter cell is tracked. Optimality probes evaluate the test families at growing scales.

A campaign walks the product of its parameter grids cell by cell. Trial t of cell c draws its function from the 64-bit seed
SeedSequence([seed, c, t]), so every record is determined by the configuration alone. Trials run one after the other; the numba kernels
inside each functional carry the parallelism, with deterministic reductions.
'''

import csv
import io
import itertools
import json
import math
import re
from dataclasses import dataclass, field, asdict
from typing import Optional

import numpy as np

from . import __version__
from .constants import HardyParams, theorem_constant, LOCAL_REGIMES, FRACTIONAL_REGIMES
from .errors import HardyError, ValidationError, RegimeError
from .functionals import weighted_lhs, local_energy, fractional_energy, annuli_energy
from .lattice import Domain
from .lattice_function import LatticeFunction
from .testfns import TestFamily, materialize, family_lhs_exact, fit_exponent, family_kind

PROFILE_TAGS = ('IID_UNIFORM', 'RADIAL_DECAY', 'SPARSE_SPIKES', 'BOUNDARY_LOCALIZED', 'SMOOTH_TENTLIKE')
PROFILE_DEFAULTS = {'RADIAL_DECAY': 1.0, 'SPARSE_SPIKES': 3}
PASS_TOL = 1e-9
_PARSE = re.compile(r'^\s*([A-Z_]+)\s*(?:\(\s*([^)]*)\s*\))?\s*$')

DEFAULT_CAMPAIGN = {
    'regimes': ['T11_3'],
    'lattices': ['NONNEGATIVE'],
    'dims': [1],
    'p_values': [2.0],
    's_values': [None],
    'eps_values': [None],
    'delta': None,
    'K': None,
    'weight': 'outer',
    'N': 16,
    'margin': None,
    'trials': 10,
    'seed': 0,
    'profiles': list(PROFILE_TAGS),
    'complex_values': False,
}

DEFAULT_PROBE = {
    'n_list': [8, 16, 32, 64],
    'complement_radius': None,
}

# sharp weight exponent each local regime claims
CLAIMED_EXPONENT = {'T11_1': 'one', 'T11_2': 'p', 'T11_3': 'p', 'T11_4': 'p', 'T11_5': 'one'}
SHARP_SLACK = 0.1
LOG_GROWTH = 1.1


@dataclass(frozen=True)
class GeneratorProfile:
    '''Tag and parameter of a random-function generator. param is alpha for RADIAL_DECAY and k for SPARSE_SPIKES.'''
    tag: str
    param: Optional[float] = None
    complex_values: bool = False

    def __post_init__(self):
        if self.tag not in PROFILE_TAGS:
            raise ValidationError(f'profile should be one of {PROFILE_TAGS}, was {self.tag}.')
        if self.param is None and self.tag in PROFILE_DEFAULTS:
            object.__setattr__(self, 'param', PROFILE_DEFAULTS[self.tag])
        if self.param is not None and self.tag not in PROFILE_DEFAULTS:
            raise ValidationError(f'{self.tag} takes no parameter.')
        if self.tag == 'RADIAL_DECAY' and not self.param >= 0:
            raise ValidationError(f'RADIAL_DECAY needs alpha >= 0, was {self.param}.')
        if self.tag == 'SPARSE_SPIKES' and (int(self.param) != self.param or self.param < 1):
            raise ValidationError(f'SPARSE_SPIKES needs an integer k >= 1, was {self.param}.')

    @classmethod
    def parse(cls, text, complex_values=False):
        '''GeneratorProfile from 'TAG' or 'TAG(param)'.'''
        if isinstance(text, GeneratorProfile):
            return text
        match = _PARSE.match(str(text))
        if match is None:
            raise ValidationError(f'could not parse profile {text!r}.')
        tag, arg = match.groups()
        param = float(arg) if arg else None
        if tag == 'SPARSE_SPIKES' and param is not None:
            param = int(param)
        return cls(tag, param, complex_values)

    def __str__(self):
        return self.tag if self.param is None else f'{self.tag}({self.param:g})'


def trial_seed(seed, cell, trial):
    '''64-bit seed of one trial, derived by counter from the campaign seed.'''
    return int(np.random.SeedSequence([int(seed), int(cell), int(trial)]).generate_state(1, dtype=np.uint64)[0])


def random_test_function(dom, profile, seed, origin_zero=False, verbose=False):
    '''Deterministic random function on the box of dom.

    INPUTS:
        dom : Domain

        profile : GeneratorProfile or str

        seed : int

        origin_zero : bool
            Set u(0) = 0 (the side condition of several regimes).

        verbose : bool
            Flag for printing out debug statements

    OUTPUTS:
        u : LatticeFunction
    '''
    if verbose: print('==== discrete_hardy.verify.random_test_function()')
    profile = GeneratorProfile.parse(profile)
    rng = np.random.default_rng(seed)
    norms = dom.norms()
    tag = profile.tag

    if tag == 'IID_UNIFORM':
        values = _uniform(rng, dom.shape, profile.complex_values)

    elif tag == 'RADIAL_DECAY':
        shells = np.arange(dom.radius + 1, dtype=np.float64)
        envelope = (1 + shells)**(-profile.param) * rng.uniform(0.5, 1.0, size=shells.size)
        envelope = np.minimum.accumulate(envelope)
        amplitude = rng.uniform(0.5, 2.0)
        if profile.complex_values:
            amplitude = amplitude * np.exp(1j*rng.uniform(0, 2*np.pi))
        values = amplitude * envelope[norms]

    elif tag == 'SPARSE_SPIKES':
        candidates = np.arange(dom.n_points)
        if origin_zero:
            candidates = candidates[norms.ravel() > 0]
        k = min(int(profile.param), candidates.size)
        values = np.zeros(dom.n_points, dtype=np.complex128 if profile.complex_values else np.float64)
        picks = rng.choice(candidates, size=k, replace=False)
        spikes = rng.uniform(0.5, 2.0, size=k) * rng.choice([-1.0, 1.0], size=k)
        if profile.complex_values:
            spikes = spikes * np.exp(1j*rng.uniform(0, 2*np.pi, size=k))
        values[picks] = spikes
        values = values.reshape(dom.shape)

    elif tag == 'BOUNDARY_LOCALIZED':
        width = max(1, dom.radius // 8)
        values = _uniform(rng, dom.shape, profile.complex_values) * (norms >= dom.radius - width)

    else:
        values = np.zeros(dom.shape, dtype=np.complex128 if profile.complex_values else np.float64)
        points = dom.points()
        for _ in range(int(rng.integers(1, 4))):
            centre = points[rng.integers(points.shape[0])]
            width = int(rng.integers(1, max(2, dom.radius) + 1))
            amplitude = rng.uniform(-1.0, 1.0)
            if profile.complex_values:
                amplitude = amplitude * np.exp(1j*rng.uniform(0, 2*np.pi))
            dist = np.abs(points - centre).max(axis=1).reshape(dom.shape)
            values = values + amplitude * np.maximum(1.0 - dist/width, 0.0)

    if origin_zero:
        values = np.array(values)
        values[dom.origin_index] = 0
    return LatticeFunction(dom, values)


def _uniform(rng, shape, complex_values):
    values = rng.uniform(-1.0, 1.0, size=shape)
    if complex_values:
        values = values + 1j*rng.uniform(-1.0, 1.0, size=shape)
    return values


@dataclass
class VerificationRecord:
    '''One checked inequality instance. Serialised with the key "pass" for `passed`.'''
    params: HardyParams
    seed: Optional[int]
    profile: str
    lhs: Optional[float]
    rhs: Optional[float]
    constant: Optional[float]
    ratio: Optional[float]
    passed: bool
    margin_used: int = 0
    offset: float = 0.0
    error: Optional[str] = None

    def to_dict(self):
        data = asdict(self)
        data['pass'] = data.pop('passed')
        return data

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        data['passed'] = data.pop('pass')
        data['params'] = HardyParams.from_dict(data['params'])
        return cls(**data)

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def verify_inequality(params, u, margin=None, constant=None, seed=None, profile='MANUAL', verbose=False):
    '''Checks one inequality on one function.

    INPUTS:
        params : HardyParams
            Regime and parameters. u(0) = 0 is checked, not assumed, where the regime requires it.

        u : LatticeFunction
            Function on a domain of the regime's lattice and dimension.

        margin : None, int
            Truncation margin for fractional right sides. Defaults to the box radius N.

        constant : None, float
            Precomputed theorem constant. Computed when None.

        seed, profile :
            Provenance copied into the record.

        verbose : bool
            Flag for printing out debug statements

    OUTPUTS:
        record : VerificationRecord
    '''
    if verbose: print('==== discrete_hardy.verify.verify_inequality()')
    params.validate()
    dom = u.domain
    if dom.lattice != params.lattice or dom.dimension != params.d:
        raise ValidationError(f'{dom} does not match lattice {params.lattice} in dimension {params.d}.')
    if params.requires_origin_zero() and u.origin_value() != 0:
        raise ValidationError(f'{params.regime} requires u(0) = 0, got {u.origin_value()}.')
    if params.regime == 'LEM41_BOX' and dom.radius != params.N:
        raise ValidationError(f'LEM41_BOX checks the box B_{params.N}, the function lives on a box of radius {dom.radius}.')
    report = theorem_constant(params) if constant is None or params.regime.startswith('LEM21') else None
    if constant is None:
        constant = report.value

    reg, p = params.regime, params.p
    t = params.lhs_exponent()
    offset, margin_used = 0.0, 0
    if reg == 'LEM21_SMALL':
        lhs = weighted_lhs(u, p, t)
        rhs = annuli_energy(u, params.s, p, report.K)
    elif reg == 'LEM21_LARGE':
        lhs = weighted_lhs(u, p, t, norm_range=(2**report.K, None))
        offset = weighted_lhs(u, p, t, norm_range=(1, 2**report.K))
        rhs = annuli_energy(u, params.s, p, report.K)
    elif reg == 'LEM41_BOX':
        lhs = weighted_lhs(u, p, 0.0)
        rhs = local_energy(u, p, params.rhs_variant(), within_box=True)
    elif reg in LOCAL_REGIMES:
        lhs = weighted_lhs(u, p, t)
        rhs = local_energy(u, p, params.rhs_variant())
    else:
        margin_used = dom.radius if margin is None else int(margin)
        lhs = weighted_lhs(u, p, t)
        rhs = fractional_energy(u, params.s, p, params.rhs_variant(), margin=margin_used)

    excess = max(lhs - offset, 0.0)
    if rhs > 0:
        ratio = excess/rhs
    else:
        ratio = 0.0 if excess == 0 else math.inf
    passed = bool(lhs <= (constant*rhs + offset)*(1 + PASS_TOL) or (lhs == 0 and rhs == 0))
    if verbose: print(f'{reg}: lhs={lhs!r} rhs={rhs!r} ratio={ratio!r} pass={passed}')
    return VerificationRecord(params=params, seed=seed, profile=str(profile), lhs=lhs, rhs=rhs, constant=constant, ratio=ratio,
                              passed=passed, margin_used=margin_used, offset=offset)


@dataclass
class CampaignReport:
    '''Records of a campaign plus one summary per parameter cell.

    cells holds {params, constant, max_ratio, trials, violations, errors} per cell; skipped holds {params, error} for cells whose
    parameters are invalid or whose constant could not be assembled.
    '''
    config: dict
    records: list = field(default_factory=list)
    cells: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    @property
    def violations(self):
        return [r for r in self.records if r.error is None and not r.passed]

    @property
    def errors(self):
        return [r for r in self.records if r.error is not None]

    @property
    def ok(self):
        return not self.violations and not self.errors

    def header(self, command='verify'):
        return {'library': 'discrete_hardy', 'version': __version__, 'command': command, 'config': self.config}

    def write_jsonl(self, target, command='verify'):
        '''One header line, then one VerificationRecord per line. target is a path or a text stream.'''
        lines = [json.dumps({'header': self.header(command)}, sort_keys=True)]
        lines += [r.to_json() for r in self.records]
        _write_text(target, '\n'.join(lines) + '\n')

    def write_summary_csv(self, target, command='verify'):
        '''Per-cell summary table, preceded by a '# {header}' line.'''
        buf = io.StringIO()
        buf.write('# ' + json.dumps(self.header(command), sort_keys=True) + '\n')
        writer = csv.writer(buf, lineterminator='\n')
        writer.writerow(SUMMARY_COLUMNS)
        for cell in self.cells:
            writer.writerow(_summary_row(cell))
        _write_text(target, buf.getvalue())

    def summary_rows(self):
        return [dict(zip(SUMMARY_COLUMNS, _summary_row(cell))) for cell in self.cells]


SUMMARY_COLUMNS = ['regime', 'lattice', 'd', 'p', 's', 't', 'eps', 'max_ratio', 'constant', 'trials', 'violations', 'errors']


def _summary_row(cell):
    params = HardyParams.from_dict(cell['params'])
    return [params.regime, params.lattice, params.d, repr(params.p), _fmt(params.s), repr(params.lhs_exponent()), _fmt(params.eps),
            repr(cell['max_ratio']), repr(cell['constant']), cell['trials'], cell['violations'], cell['errors']]


def _fmt(x):
    return '' if x is None else repr(x)


def _write_text(target, text):
    if hasattr(target, 'write'):
        target.write(text)
    else:
        with open(target, 'w', newline='') as f:
            f.write(text)


def read_jsonl(source):
    '''Parses a campaign JSONL file (path or stream) back into (header, records).'''
    if hasattr(source, 'read'):
        lines = source.read().splitlines()
    else:
        with open(source) as f:
            lines = f.read().splitlines()
    lines = [line for line in lines if line.strip()]
    if not lines:
        raise ValidationError('empty JSONL input.')
    first = json.loads(lines[0])
    header = first.get('header')
    if header is None:
        raise ValidationError('JSONL input has no header line.')
    return header, [VerificationRecord.from_dict(json.loads(line)) for line in lines[1:]]


def read_summary_csv(source):
    '''Parses a campaign summary CSV into (header, rows as dicts of strings).'''
    if hasattr(source, 'read'):
        text = source.read()
    else:
        with open(source) as f:
            text = f.read()
    first, _, body = text.partition('\n')
    if not first.startswith('# '):
        raise ValidationError('summary CSV has no header comment line.')
    return json.loads(first[2:]), list(csv.DictReader(io.StringIO(body)))


def campaign_cells(config):
    '''Distinct, ordered HardyParams cells of a campaign, plus the list of invalid combinations.'''
    cells, skipped, seen = [], [], set()
    grid = itertools.product(config['regimes'], config['lattices'], config['dims'], config['p_values'], config['s_values'],
                             config['eps_values'])
    for regime, lattice, d, p, s, eps in grid:
        uses_s = regime in FRACTIONAL_REGIMES or regime.startswith('LEM21')
        uses_eps = regime in ('T11_4', 'T11_5', 'T12_2')
        params = HardyParams(regime=regime, d=int(d), p=float(p), s=float(s) if uses_s and s is not None else None,
                             eps=float(eps) if uses_eps and eps is not None else None, delta=config['delta'], K=config['K'],
                             lattice=lattice, N=int(config['N']) if regime == 'LEM41_BOX' else None,
                             weight=config['weight'] if regime == 'T11_4' else 'outer')
        key = json.dumps(params.to_dict(), sort_keys=True)
        if key in seen:
            continue
        seen.add(key)
        try:
            params.validate()
        except HardyError as e:
            skipped.append({'params': params.to_dict(), 'error': f'{type(e).__name__}: {e}'})
            continue
        cells.append(params)
    return cells, skipped


def run_campaign(config=None, verbose=False, **kwargs):
    '''Randomised verification over a parameter grid.

    INPUTS:
        config : dict
            Keys of DEFAULT_CAMPAIGN; missing keys take the defaults and unknown keys are ignored. Keyword arguments override config.

        verbose : bool
            Flag for printing out debug statements

    OUTPUTS:
        report : CampaignReport
            Per-trial errors are recorded, never raised.

    Trials run one after another in (cell, trial) order. Each trial draws from its own seed and the numba kernels parallelise the
    functional evaluations internally, so the report is the same for any thread count.
    '''
    if verbose: print('==== discrete_hardy.verify.run_campaign()')
    resolved = {**DEFAULT_CAMPAIGN, **(config or {}), **kwargs}
    resolved = {k: resolved[k] for k in DEFAULT_CAMPAIGN}
    resolved['profiles'] = [str(GeneratorProfile.parse(prof)) for prof in resolved['profiles']]
    if int(resolved['trials']) < 0:
        raise ValidationError(f'trials should be >= 0, was {resolved["trials"]}.')
    if not resolved['profiles']:
        raise ValidationError('a campaign needs at least one profile.')
    profiles = [GeneratorProfile.parse(prof, resolved['complex_values']) for prof in resolved['profiles']]

    report = CampaignReport(config=resolved)
    cells, report.skipped = campaign_cells(resolved)
    if int(resolved['trials']) == 0:
        return report

    for c, params in enumerate(cells):
        try:
            constant = theorem_constant(params).value
            dom = Domain(params.lattice, params.d, int(resolved['N']))
        except HardyError as e:
            report.skipped.append({'params': params.to_dict(), 'error': f'{type(e).__name__}: {e}'})
            continue

        max_ratio, violations, errors = 0.0, 0, 0
        for trial in range(int(resolved['trials'])):
            seed = trial_seed(resolved['seed'], c, trial)
            profile = profiles[trial % len(profiles)]
            try:
                u = random_test_function(dom, profile, seed, origin_zero=params.requires_origin_zero())
                record = verify_inequality(params, u, margin=resolved['margin'], constant=constant, seed=seed, profile=str(profile))
            except HardyError as e:
                record = VerificationRecord(params=params, seed=seed, profile=str(profile), lhs=None, rhs=None, constant=constant,
                                            ratio=None, passed=False, error=f'{type(e).__name__}: {e}')
            report.records.append(record)
            if record.error is not None:
                errors += 1
                continue
            max_ratio = max(max_ratio, record.ratio)
            violations += not record.passed

        report.cells.append({'params': params.to_dict(), 'constant': constant, 'max_ratio': max_ratio,
                             'trials': int(resolved['trials']), 'violations': violations, 'errors': errors})
        if verbose: print(f'{params.regime} d={params.d} p={params.p} s={params.s}: max ratio {max_ratio!r} vs {constant!r}, '
                          f'{violations} violations, {errors} errors')
    return report


def _squared(n):
    return n*n


def _claimed_exponent(regime, p):
    if regime not in CLAIMED_EXPONENT:
        raise RegimeError(f'optimality probes cover {tuple(CLAIMED_EXPONENT)}, was {regime}.')
    return 1.0 if CLAIMED_EXPONENT[regime] == 'one' else float(p)


def _check_family(kind, d, p, t):
    if kind == 'INDICATOR_UN' and not t > 0:
        raise RegimeError(f'INDICATOR_UN probes need t > 0, was {t}.')
    if kind == 'TENT_VN' and not (p > 1 and 0 < t < d):
        raise RegimeError(f'TENT_VN probes need p > 1 and 0 < t < d, got p={p}, t={t}, d={d}.')
    if kind == 'COMPLEMENT_1_MINUS_VN' and not (t >= d or math.isclose(t, d)):
        raise RegimeError(f'COMPLEMENT_1_MINUS_VN probes need t >= d, got t={t}, d={d}.')


def optimality_probe(regime, t, family, n_list=None, d=1, p=2.0, eps=None, complement_radius=None, verbose=False):
    '''Evaluates lhs_t(f_n)/rhs(f_n) for a test family at the scales n_list and classifies the growth.

    The right side is the LOCAL_EXCLUDE_ORIGIN energy. For the complement family it equals the energy of v_n, and its left side is the
    shell sum truncated at complement_radius(n) (default n^2).

    INPUTS:
        regime : str
            T11_1 .. T11_5; fixes the claimed sharp exponent (1 for T11_1 and T11_5, p otherwise).

        t : float
            Trial weight exponent.

        family : str
            Family kind or alias.

        n_list : list of int
            At least 3 strictly increasing scales.

        d : int

        p : float

        eps : None, float
            Unused by the evaluation; recorded for reference.

        complement_radius : None, callable
            n -> truncation radius for the complement family.

        verbose : bool
            Flag for printing out debug statements

    OUTPUTS:
        result : dict
            {ratios: [(n, ratio, lhs, rhs)], fitted, expected, verdict}. verdict is SHARP or INCONCLUSIVE when claimed - t > 0,
            LOG_DIVERGENT or NOT_DIVERGENT at the threshold t = claimed, NOT_DIVERGENT or INCONCLUSIVE when t exceeds the claim.
    '''
    if verbose: print('==== discrete_hardy.verify.optimality_probe()')
    kind = family_kind(family)
    claimed = _claimed_exponent(regime, p)
    _check_family(kind, d, p, t)
    n_list = [int(n) for n in (n_list or DEFAULT_PROBE['n_list'])]
    if len(n_list) < 3 or any(b <= a for a, b in zip(n_list[:-1], n_list[1:])) or n_list[0] < 1:
        raise ValidationError(f'n_list should hold at least 3 strictly increasing scales >= 1, was {n_list}.')
    radius_of = complement_radius or DEFAULT_PROBE['complement_radius'] or _squared

    ratios = []
    for n in n_list:
        dom = Domain('NONNEGATIVE', d, n + 1)
        if kind == 'COMPLEMENT_1_MINUS_VN':
            lhs = family_lhs_exact(TestFamily(kind, n, d), t, p, radius=int(radius_of(n)))
            u = materialize(TestFamily('TENT_VN', n, d), dom)
        else:
            u = materialize(TestFamily(kind, n, d), dom)
            lhs = weighted_lhs(u, p, t)
        rhs = local_energy(u, p, 'LOCAL_EXCLUDE_ORIGIN')
        ratios.append((n, lhs/rhs, lhs, rhs))
        if verbose: print(f'n={n}: lhs={lhs!r} rhs={rhs!r} ratio={lhs/rhs!r}')

    fitted = fit_exponent([(n, r) for n, r, _, _ in ratios])
    expected = claimed - t
    values = [r for _, r, _, _ in ratios]
    if math.isclose(expected, 0.0, abs_tol=1e-12):
        growing = all(b > a for a, b in zip(values[:-1], values[1:])) and values[-1] >= LOG_GROWTH*values[0]
        verdict = 'LOG_DIVERGENT' if growing else 'NOT_DIVERGENT'
    elif expected > 0:
        verdict = 'SHARP' if fitted['slope'] >= expected - SHARP_SLACK else 'INCONCLUSIVE'
    else:
        verdict = 'NOT_DIVERGENT' if fitted['slope'] <= SHARP_SLACK else 'INCONCLUSIVE'
    return {'regime': regime, 'family': kind, 'd': d, 'p': p, 't': t, 'eps': eps, 'ratios': ratios, 'fitted': fitted,
            'expected': expected, 'verdict': verdict}
