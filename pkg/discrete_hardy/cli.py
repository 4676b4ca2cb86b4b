'''Creation Date: 18/10/26

Command line interface: discrete-hardy <command> [flags].

    constants   assembled theorem constants for a parameter grid (JSON)
    verify      randomised verification campaign (JSONL records, or CSV summary)
    probe       optimality probe series (n, ratio) for a test family
    optimize    best-constant estimate on one box
    sweep       optimize or verify across (d, p, s, N) grids (CSV)
    census      edge-usage census of the axis paths
    testfn      exact values of the test families against their bounds

Parameter flags carry the symbols they stand for (--d --p --s --t --eps --delta --K --N). Every output starts with a header holding the
resolved configuration and the library version.

Exit codes: 0 ok, 1 violations or per-trial errors, 2 invalid configuration, 3 capacity or numeric failure. Failures print
{"error": <class>, "message": <text>} on stderr.
'''

import argparse
import csv
import io
import itertools
import json
import math
import sys

from . import __version__
from .constants import HardyParams, theorem_constant, REGIMES
from .errors import ValidationError, RegimeError, CapacityError, NumericError
from .functionals import set_threads, weighted_lhs, local_energy
from .lattice import Domain, LATTICE_KINDS
from .optimizer import best_constant_p2, best_constant_general
from .paths import edge_usage_census
from .testfns import (TestFamily, materialize, family_kind, family_lhs_exact, un_lhs_bound, un_rhs_bound, vn_lhs_bound,
                      one_minus_vn_lhs_bound, vn_energy_bound)
from .verify import run_campaign, optimality_probe, PROFILE_TAGS

FORMATS = ('json', 'jsonl', 'csv')


def _k_value(text):
    return None if text.upper() == 'AUTO' else int(text)


def _add_params(parser, grid=True):
    nargs = '+' if grid else None
    parser.add_argument('--regime', nargs=nargs, default=['T11_3'] if grid else 'T11_3', help=f'one of {REGIMES}')
    parser.add_argument('--lattice', nargs=nargs, default=['NONNEGATIVE'] if grid else 'NONNEGATIVE', help=f'one of {LATTICE_KINDS}')
    parser.add_argument('--d', nargs=nargs, type=int, default=[1] if grid else 1)
    parser.add_argument('--p', nargs=nargs, type=float, default=[2.0] if grid else 2.0)
    parser.add_argument('--s', nargs=nargs, type=float, default=[None] if grid else None)
    parser.add_argument('--eps', nargs=nargs, type=float, default=[None] if grid else None)
    parser.add_argument('--delta', type=float, default=None)
    parser.add_argument('--K', type=_k_value, default=None, help='annulus gap, or AUTO for the minimal one')
    parser.add_argument('--weight', default='outer', choices=['outer', 'max'])


def _add_common(parser, fmt='json'):
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--threads', type=int, default=None, help='numba worker count (falls back to HARDY_THREADS)')
    parser.add_argument('--out', default=None, help='output path, stdout when omitted')
    parser.add_argument('--format', default=fmt, choices=FORMATS)
    parser.add_argument('--verbose', action='store_true')


def build_parser():
    parser = argparse.ArgumentParser(prog='discrete-hardy', description='Verification toolkit for discrete Hardy inequalities.')
    parser.add_argument('--version', action='version', version=f'discrete_hardy {__version__}')
    sub = parser.add_subparsers(dest='command', required=True)

    cmd = sub.add_parser('constants', help='assembled theorem constants')
    _add_params(cmd)
    cmd.add_argument('--N', type=int, default=None, help='box radius (LEM41_BOX)')
    _add_common(cmd)

    cmd = sub.add_parser('verify', help='randomised verification campaign')
    _add_params(cmd)
    cmd.add_argument('--N', type=int, default=16)
    cmd.add_argument('--margin', type=int, default=None)
    cmd.add_argument('--trials', type=int, default=10)
    cmd.add_argument('--profiles', nargs='+', default=list(PROFILE_TAGS))
    cmd.add_argument('--complex', action='store_true', help='complex-valued random functions')
    _add_common(cmd, fmt='jsonl')

    cmd = sub.add_parser('probe', help='optimality probe series')
    _add_params(cmd, grid=False)
    cmd.add_argument('--t', type=float, required=True)
    cmd.add_argument('--family', required=True, help='un, vn or complement')
    cmd.add_argument('--n-list', type=int, nargs='+', default=[8, 16, 32, 64])
    _add_common(cmd)

    cmd = sub.add_parser('optimize', help='best-constant estimate')
    _add_params(cmd, grid=False)
    cmd.add_argument('--N', type=int, default=64)
    cmd.add_argument('--margin', type=int, default=None)
    _add_optimize(cmd)
    cmd.add_argument('--witness', default=None, help='write the witness as CSV to this path')
    _add_common(cmd)

    cmd = sub.add_parser('sweep', help='optimize or verify across parameter grids')
    _add_params(cmd)
    cmd.add_argument('--task', default='optimize', choices=['optimize', 'verify'])
    cmd.add_argument('--N', type=int, nargs='+', default=[16, 64])
    cmd.add_argument('--margin', type=int, default=None)
    cmd.add_argument('--trials', type=int, default=10)
    _add_optimize(cmd)
    _add_common(cmd, fmt='csv')

    cmd = sub.add_parser('census', help='edge-usage census of axis paths')
    cmd.add_argument('--n', type=int, required=True)
    cmd.add_argument('--k', type=int, required=True)
    cmd.add_argument('--d', type=int, required=True)
    cmd.add_argument('--beta', default='ALL', help='shift index or ALL')
    _add_common(cmd)

    cmd = sub.add_parser('testfn', help='test families against their bounds')
    cmd.add_argument('--family', required=True, help='un, vn or complement')
    cmd.add_argument('--d', type=int, default=1)
    cmd.add_argument('--t', type=float, required=True)
    cmd.add_argument('--p', type=float, default=2.0)
    cmd.add_argument('--n', type=int, nargs='+', required=True)
    _add_common(cmd)
    return parser


def _add_optimize(parser):
    parser.add_argument('--tol', type=float, default=None)
    parser.add_argument('--max-iter', type=int, default=None)
    parser.add_argument('--restarts', type=int, default=None)
    parser.add_argument('--method', default='auto', choices=['auto', 'p2', 'general'])


def _header(args):
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ('out', 'verbose', 'threads', 'format')}
    return {'library': 'discrete_hardy', 'version': __version__, 'command': args.command, 'config': config}


def _emit(args, text):
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, 'w', newline='') as f:
            f.write(text)


def _csv_text(header, columns, rows):
    buf = io.StringIO()
    buf.write('# ' + json.dumps(header, sort_keys=True) + '\n')
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(columns)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(header, key, payload):
    return json.dumps({'header': header, key: payload}, sort_keys=True, indent=1) + '\n'


def _param_grid(args, N=None):
    '''Distinct HardyParams over the flag grids, in flag order.'''
    out = []
    for regime, lattice, d, p, s, eps in itertools.product(args.regime, args.lattice, args.d, args.p, args.s, args.eps):
        params = HardyParams(regime=regime, d=d, p=p, s=s, eps=eps, delta=args.delta, K=args.K, lattice=lattice,
                             N=N if regime == 'LEM41_BOX' else None, weight=args.weight)
        if params not in out:
            out.append(params)
    return out


def cmd_constants(args):
    grid = _param_grid(args, args.N)
    results = []
    for params in grid:
        try:
            report = theorem_constant(params, verbose=args.verbose)
        except (ValidationError, RegimeError) as e:
            if len(grid) == 1:
                raise
            results.append({'params': params.to_dict(), 'error': type(e).__name__, 'message': str(e)})
            continue
        results.append({'params': params.to_dict(), **report.to_dict()})
    if args.format == 'csv':
        rows = [[r['params']['regime'], r['params']['lattice'], r['params']['d'], r['params']['p'], r['params']['s'],
                 r['params']['eps'], r.get('K'), repr(r['value']) if 'value' in r else r['message']] for r in results]
        _emit(args, _csv_text(_header(args), ['regime', 'lattice', 'd', 'p', 's', 'eps', 'K', 'value'], rows))
    else:
        _emit(args, _json_text(_header(args), 'results', results))
    return 0


def _campaign_config(args, N):
    return {'regimes': args.regime, 'lattices': args.lattice, 'dims': args.d, 'p_values': args.p, 's_values': args.s,
            'eps_values': args.eps, 'delta': args.delta, 'K': args.K, 'weight': args.weight, 'N': N, 'margin': args.margin,
            'trials': args.trials, 'seed': args.seed, 'profiles': getattr(args, 'profiles', list(PROFILE_TAGS)),
            'complex_values': getattr(args, 'complex', False)}


def cmd_verify(args):
    report = run_campaign(_campaign_config(args, args.N), verbose=args.verbose)
    buf = io.StringIO()
    if args.format == 'csv':
        report.write_summary_csv(buf)
    else:
        report.write_jsonl(buf)
    _emit(args, buf.getvalue())
    if args.out is not None:
        print(f'{len(report.records)} records, {len(report.violations)} violations, {len(report.errors)} errors, '
              f'{len(report.skipped)} skipped cells')
    return 0 if report.ok else 1


def cmd_probe(args):
    result = optimality_probe(args.regime, args.t, args.family, args.n_list, d=args.d, p=args.p, eps=args.eps, verbose=args.verbose)
    header = _header(args)
    if args.format == 'csv':
        header['fitted'], header['verdict'] = result['fitted'], result['verdict']
        rows = [[n, repr(r), repr(lhs), repr(rhs)] for n, r, lhs, rhs in result['ratios']]
        _emit(args, _csv_text(header, ['n', 'ratio', 'lhs', 'rhs'], rows))
    else:
        _emit(args, _json_text(header, 'probe', result))
    return 0


def _optimize_one(args, params, N, init=None):
    use_p2 = args.method == 'p2' or (args.method == 'auto' and math.isclose(params.p, 2.0))
    if use_p2:
        return best_constant_p2(params, N, tol=args.tol, max_iter=args.max_iter, margin=args.margin, init=init, seed=args.seed,
                                verbose=args.verbose)
    return best_constant_general(params, N, restarts=args.restarts, tol=args.tol, max_iter=args.max_iter, margin=args.margin,
                                 init=init, seed=args.seed, verbose=args.verbose)


def cmd_optimize(args):
    params = HardyParams(regime=args.regime, d=args.d, p=args.p, s=args.s, eps=args.eps, delta=args.delta, K=args.K,
                         lattice=args.lattice, weight=args.weight)
    result = _optimize_one(args, params, args.N)
    if args.witness:
        result.witness_to_csv(args.witness)
    payload = result.to_dict()
    payload['constant'] = theorem_constant(params).value
    _emit(args, _json_text(_header(args), 'result', payload))
    return 0


def cmd_sweep(args):
    if args.task == 'verify':
        rows, ok = [], True
        for N in args.N:
            report = run_campaign(_campaign_config(args, N), verbose=args.verbose)
            ok &= report.ok
            rows += [[N] + list(r.values()) for r in report.summary_rows()]
        columns = ['N', 'regime', 'lattice', 'd', 'p', 's', 't', 'eps', 'max_ratio', 'constant', 'trials', 'violations', 'errors']
        _emit(args, _csv_text(_header(args), columns, rows))
        return 0 if ok else 1

    rows = []
    for params in _param_grid(args):
        try:
            constant = theorem_constant(params).value
        except (ValidationError, RegimeError):
            continue
        witness = None
        for N in sorted(args.N):
            # the witness of the smaller box seeds the next one
            result = _optimize_one(args, params, N, init=witness)
            witness = result.witness
            rows.append([params.regime, params.lattice, params.d, repr(params.p), params.s, params.eps, N, result.margin,
                         repr(result.estimate), repr(constant), result.converged, ' '.join(result.flags)])
    columns = ['regime', 'lattice', 'd', 'p', 's', 'eps', 'N', 'margin', 'estimate', 'constant', 'converged', 'flags']
    _emit(args, _csv_text(_header(args), columns, rows))
    return 0


def cmd_census(args):
    beta = args.beta if args.beta == 'ALL' else int(args.beta)
    census = edge_usage_census(args.n, args.k, args.d, beta=beta, verbose=args.verbose)
    within = all(census.max_count(b) <= census.bound() for b in census.betas)
    if beta == 'ALL':
        within &= census.max_count() <= census.summed_bound()
    if args.format == 'csv':
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator='\n')
        buf.write('# ' + json.dumps(_header(args), sort_keys=True) + '\n')
        writer.writerow(['tail', 'head', 'axis', 'count', 'bound'])
        for tail, head, q, count, bound in census.rows():
            writer.writerow([' '.join(map(str, tail)), ' '.join(map(str, head)), q, count, bound])
        _emit(args, buf.getvalue())
    else:
        payload = {'per_beta': {str(b): v for b, v in census.per_beta().items()}, 'max_count': census.max_count(),
                   'bound': census.bound(), 'summed_bound': census.summed_bound(), 'within_bound': within}
        _emit(args, _json_text(_header(args), 'census', payload))
    return 0 if within else 1


def testfn_rows(family, d, t, p, n_list):
    '''(family, d, t, p, n, lhs_exact, lhs_bound, rhs_exact, rhs_bound) per scale.'''
    kind = family_kind(family)
    rows = []
    for n in n_list:
        fam = TestFamily(kind, n, d)
        if kind == 'INDICATOR_UN':
            u = materialize(fam, Domain('NONNEGATIVE', d, n + 1))
            lhs, lhs_bound = weighted_lhs(u, p, t), un_lhs_bound(d, t, n)
            rhs, rhs_bound = local_energy(u, p, 'LOCAL_INCLUDE_ORIGIN'), un_rhs_bound(d, p, n)
        elif kind == 'TENT_VN':
            u = materialize(fam, Domain('NONNEGATIVE', d, n + 1))
            lhs, lhs_bound = weighted_lhs(u, p, t), vn_lhs_bound(d, t, p, n)
            rhs, rhs_bound = local_energy(u, p, 'LOCAL_INCLUDE_ORIGIN'), vn_energy_bound(d, p, n)
        else:
            v = materialize(TestFamily('TENT_VN', n, d), Domain('NONNEGATIVE', d, n + 1))
            lhs, lhs_bound = family_lhs_exact(fam, t, p), one_minus_vn_lhs_bound(d, t, p, n)
            rhs, rhs_bound = local_energy(v, p, 'LOCAL_INCLUDE_ORIGIN'), vn_energy_bound(d, p, n)
        rows.append([kind, d, t, p, n, lhs, lhs_bound, rhs, rhs_bound])
    return rows


def cmd_testfn(args):
    rows = testfn_rows(args.family, args.d, args.t, args.p, args.n)
    columns = ['family', 'd', 't', 'p', 'n', 'lhs_exact', 'lhs_bound', 'rhs_exact', 'rhs_bound']
    if args.format == 'csv':
        _emit(args, _csv_text(_header(args), columns, [[repr(c) if isinstance(c, float) else c for c in r] for r in rows]))
    else:
        _emit(args, _json_text(_header(args), 'rows', [dict(zip(columns, r)) for r in rows]))
    return 0


COMMANDS = {'constants': cmd_constants, 'verify': cmd_verify, 'probe': cmd_probe, 'optimize': cmd_optimize, 'sweep': cmd_sweep,
            'census': cmd_census, 'testfn': cmd_testfn}


def _fail(e, code):
    sys.stderr.write(json.dumps({'error': type(e).__name__, 'message': str(e)}) + '\n')
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        set_threads(args.threads, verbose=args.verbose)
        return COMMANDS[args.command](args)
    except (ValidationError, RegimeError) as e:
        return _fail(e, 2)
    except (CapacityError, NumericError) as e:
        return _fail(e, 3)


if __name__ == '__main__':
    sys.exit(main())
