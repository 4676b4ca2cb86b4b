import io
import json

import pytest

from discrete_hardy.cli import main, build_parser
from discrete_hardy.cli import testfn_rows as cli_testfn_rows
from discrete_hardy.verify import read_jsonl, read_summary_csv


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_constants_json(capsys):
    code, out, _ = run(capsys, 'constants', '--regime', 'T12_1', '--d', '1', '--p', '2', '--s', '0.25', '--delta', '0.5')
    assert code == 0
    data = json.loads(out)
    assert data['header']['command'] == 'constants'
    assert data['results'][0]['K'] == 5
    assert data['results'][0]['value'] == pytest.approx(64.0)


def test_constants_grid_with_invalid_cell(capsys):
    code, out, _ = run(capsys, 'constants', '--regime', 'T11_3', '--d', '1', '2', '--p', '2', '--format', 'csv')
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith('# ')
    assert lines[1] == 'regime,lattice,d,p,s,eps,K,value'
    assert 'T11_3 requires d < p' in lines[3]


def test_invalid_configuration_exit_code(capsys):
    code, out, err = run(capsys, 'constants', '--regime', 'T11_3', '--d', '2', '--p', '2')
    assert code == 2 and out == ''
    assert json.loads(err)['error'] == 'ValidationError'


def test_K_flag():
    args = build_parser().parse_args(['constants', '--K', 'AUTO'])
    assert args.K is None
    assert build_parser().parse_args(['constants', '--K', '6']).K == 6


def test_verify_jsonl(capsys, tmp_path):
    out_path = tmp_path / 'records.jsonl'
    code, out, _ = run(capsys, 'verify', '--regime', 'T11_3', '--d', '1', '--p', '3', '--N', '6', '--trials', '5', '--seed', '9',
                       '--out', str(out_path))
    assert code == 0
    assert out.startswith('5 records, 0 violations')
    header, records = read_jsonl(out_path)
    assert header['config']['seed'] == 9
    assert len(records) == 5 and all(r.passed for r in records)


def test_verify_csv(capsys):
    code, out, _ = run(capsys, 'verify', '--regime', 'T12_3', '--d', '1', '--p', '2', '--s', '1', '1.5', '--N', '5', '--trials', '3',
                       '--format', 'csv', '--profiles', 'IID_UNIFORM', 'SPARSE_SPIKES(2)')
    assert code == 0
    header, rows = read_summary_csv(io.StringIO(out))
    assert header['config']['profiles'] == ['IID_UNIFORM', 'SPARSE_SPIKES(2)']
    assert [row['s'] for row in rows] == ['1.0', '1.5']


def test_probe(capsys):
    code, out, _ = run(capsys, 'probe', '--regime', 'T11_5', '--p', '0.5', '--t', '1', '--family', 'un', '--n-list', '4', '8', '16')
    assert code == 0
    probe = json.loads(out)['probe']
    assert probe['verdict'] == 'LOG_DIVERGENT'
    assert [r[0] for r in probe['ratios']] == [4, 8, 16]


def test_probe_csv(capsys):
    code, out, _ = run(capsys, 'probe', '--regime', 'T11_3', '--t', '1.5', '--family', 'complement', '--format', 'csv')
    assert code == 0
    header = json.loads(out.splitlines()[0][2:])
    assert header['verdict'] == 'SHARP'
    assert out.splitlines()[1] == 'n,ratio,lhs,rhs'


def test_probe_invalid_family(capsys):
    code, _, err = run(capsys, 'probe', '--regime', 'T11_3', '--t', '1', '--family', 'vn')
    assert code == 2
    assert json.loads(err)['error'] == 'RegimeError'


def test_optimize(capsys, tmp_path):
    witness = tmp_path / 'witness.csv'
    code, out, _ = run(capsys, 'optimize', '--regime', 'T11_3', '--N', '1', '--witness', str(witness))
    assert code == 0
    result = json.loads(out)['result']
    assert result['estimate'] == pytest.approx(0.25)
    assert result['method'] == 'power_iteration'
    assert result['estimate'] <= result['constant']
    lines = witness.read_text().splitlines()
    assert lines[:2] == ['x1,value', '0,0.0'] and len(lines) == 3


def test_optimize_general_method(capsys):
    code, out, _ = run(capsys, 'optimize', '--regime', 'T11_3', '--d', '1', '--p', '3', '--N', '3', '--restarts', '2')
    assert code == 0
    assert json.loads(out)['result']['method'] == 'lbfgsb'


def test_sweep_optimize(capsys):
    code, out, _ = run(capsys, 'sweep', '--regime', 'T11_3', '--d', '1', '--p', '2', '--N', '4', '2')
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == 'regime,lattice,d,p,s,eps,N,margin,estimate,constant,converged,flags'
    rows = [line.split(',') for line in lines[2:]]
    assert [row[6] for row in rows] == ['2', '4']
    assert float(rows[0][8]) <= float(rows[1][8])*(1 + 1e-10)


def test_sweep_verify(capsys):
    code, out, _ = run(capsys, 'sweep', '--task', 'verify', '--regime', 'T11_3', '--p', '3', '--N', '3', '5', '--trials', '2')
    assert code == 0
    rows = out.splitlines()[2:]
    assert [row.split(',')[0] for row in rows] == ['3', '5']


def test_census(capsys):
    code, out, _ = run(capsys, 'census', '--n', '1', '--k', '1', '--d', '2')
    assert code == 0
    census = json.loads(out)['census']
    assert census['within_bound'] is True
    assert set(census['per_beta']) == {'0', '1'}


def test_census_capacity(capsys):
    code, _, err = run(capsys, 'census', '--n', '3', '--k', '3', '--d', '3')
    assert code == 3
    assert json.loads(err)['error'] == 'CapacityError'


def test_testfn(capsys):
    code, out, _ = run(capsys, 'testfn', '--family', 'vn', '--d', '2', '--t', '1', '--n', '4', '8')
    assert code == 0
    rows = json.loads(out)['rows']
    assert rows[0]['lhs_exact'] == pytest.approx(2.4583333, rel=1e-6)
    assert rows[0]['lhs_bound'] == pytest.approx(2/3)
    assert all(r['rhs_exact'] <= r['rhs_bound'] for r in rows)


def test_testfn_rows_complement():
    rows = cli_testfn_rows('complement', 1, 2.0, 2.0, [3])
    assert rows[0][5] == pytest.approx(0.61715, rel=1e-4)
    assert rows[0][6] == pytest.approx(1/3)
