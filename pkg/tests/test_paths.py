import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from discrete_hardy.errors import ValidationError, CapacityError
from discrete_hardy.paths import LatticePath, build_path, build_shifted_path, path_violations, is_valid_path, edge_usage_census


def test_build_path_example():
    path = build_path((1, 4, 7), (2, 4, 5))
    assert [tuple(x) for x in path] == [(1, 4, 7), (2, 4, 7), (2, 4, 6), (2, 4, 5)]
    assert path.length == 3
    assert path.steps() == [(0, 1), (2, -1), (2, -1)]
    assert is_valid_path(path)


def test_build_path_single_point():
    path = build_path((3, 3), (3, 3))
    assert len(path) == 1 and path.length == 0 and is_valid_path(path)


def test_build_shifted_path_example():
    path = build_shifted_path((1, 4, 7), (2, 4, 5), 1)
    assert [tuple(x) for x in path] == [(1, 4, 7), (1, 4, 6), (1, 4, 5), (2, 4, 5)]
    assert path.axis_order == (1, 2, 0)
    assert is_valid_path(path)
    with pytest.raises(ValidationError):
        build_shifted_path((1, 4, 7), (2, 4, 5), 3)


@given(st.integers(1, 4).flatmap(lambda d: st.tuples(st.lists(st.integers(0, 20), min_size=d, max_size=d),
                                                     st.lists(st.integers(0, 20), min_size=d, max_size=d),
                                                     st.integers(0, d - 1))))
@settings(max_examples=200, deadline=None)
def test_shifted_paths_are_valid(case):
    j, m, beta = case
    path = build_shifted_path(j, m, beta)
    assert path_violations(path) == []
    assert tuple(path.points[0]) == tuple(j) and tuple(path.points[-1]) == tuple(m)
    assert path.length == sum(abs(a - b) for a, b in zip(j, m))


def test_path_violations_detected():
    assert 'not a unit step' in path_violations(LatticePath([(0, 0), (1, 1)]))[0]
    problems = path_violations(LatticePath([(0, 0), (1, 0), (0, 0)]))
    assert any('both directions' in msg for msg in problems)
    assert any('l1 distance' in msg for msg in problems)
    assert any('order' in msg for msg in path_violations(LatticePath([(0, 0), (0, 1), (1, 1)], (0, 1))))


def test_census_one_dimension():
    census = edge_usage_census(1, 1, 1)
    assert census.edge_counts(0) == {((1,), (2,)): 2, ((2,), (3,)): 1}
    assert census.outside_band[0] == 0
    assert census.bound() == 8


@pytest.mark.parametrize('n, k, d', [(1, 1, 2), (2, 1, 2), (1, 2, 2), (2, 2, 2), (1, 1, 3), (2, 1, 3)])
def test_census_within_bound(n, k, d):
    census = edge_usage_census(n, k, d)
    for beta in range(d):
        assert census.max_count(beta) <= census.bound()
    assert census.max_count() <= census.summed_bound()


def test_census_matches_explicit_paths():
    n, k, d, beta = 1, 1, 2, 1
    census = edge_usage_census(n, k, d, beta=beta)
    from discrete_hardy.lattice import annulus_points
    expected = {}
    for j in annulus_points(n, d):
        for m in annulus_points(n + k, d):
            pts = build_shifted_path(j, m, beta).points
            for a, b in zip(pts[:-1], pts[1:]):
                expected[(a, b)] = expected.get((a, b), 0) + 1
    assert census.edge_counts(beta) == expected
    assert sum(expected.values()) == int(np.sum(census.counts[beta]))


def test_census_rows_and_csv(tmp_path):
    census = edge_usage_census(1, 1, 2)
    rows = census.rows()
    assert all(count <= bound for *_, count, bound in rows)
    assert rows[0][4] == census.summed_bound()
    census.to_csv(tmp_path / 'census.csv', beta=0)
    lines = (tmp_path / 'census.csv').read_text().splitlines()
    assert lines[0] == 'tail,head,axis,count,bound'
    assert len(lines) == len(census.rows(0)) + 1


def test_census_limits():
    with pytest.raises(ValidationError):
        edge_usage_census(0, 1, 2)
    with pytest.raises(ValidationError):
        edge_usage_census(1, 1, 2, beta=2)
    with pytest.raises(CapacityError):
        edge_usage_census(3, 2, 3, max_pairs=10**4)
