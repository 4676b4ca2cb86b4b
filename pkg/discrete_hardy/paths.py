'''Creation Date: 18/10/26

Axis-ordered lattice paths between points of two dyadic annuli, their cyclically shifted variants, and an exhaustive edge-usage census
that checks the counting bound for these paths.

The census is a brute-force oracle (d <= 3, n <= 3, k <= 2). Paths are walked step by step inside a numba kernel, so the pair set is
never materialised.
'''

import csv
from dataclasses import dataclass, field

import numpy as np
import numba

from .lattice import LatticePoint, annulus_array, DEFAULT_POINT_BUDGET
from .errors import ValidationError, CapacityError

CENSUS_CHUNKS = 16


@dataclass
class LatticePath:
    '''Ordered points x_0, ..., x_N of a path, and the order in which its axes are traversed.'''
    points: list
    axis_order: tuple = None

    def __post_init__(self):
        self.points = [LatticePoint(x) for x in self.points]
        if self.axis_order is None:
            self.axis_order = tuple(range(self.points[0].d))

    @property
    def length(self):
        return len(self.points) - 1

    def steps(self):
        '''List of (axis, sign) for each step.'''
        out = []
        for a, b in zip(self.points[:-1], self.points[1:]):
            diff = b - a
            q = next((i for i, c in enumerate(diff) if c != 0), 0)
            out.append((q, int(np.sign(diff[q]))))
        return out

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


def build_path(j, m):
    '''The path from j to m that moves along axis 1 first, then axis 2, and so on, stepping by sign(m_q - j_q).

    INPUTS:
        j, m : LatticePoint or tuple
            End points of equal dimension. j = m gives the single-point path.

    OUTPUTS:
        path : LatticePath
    '''
    return _axis_path(LatticePoint(j), LatticePoint(m), tuple(range(len(j))))


def build_shifted_path(j, m, beta):
    '''pat^beta(j, m): sigma^-beta applied pointwise to build_path(sigma^beta j, sigma^beta m), where sigma(x) = (x_2, ..., x_d, x_1).

    The result traverses axes in the order beta, beta+1, ..., d-1, 0, ..., beta-1 (0-based).
    '''
    j, m = LatticePoint(j), LatticePoint(m)
    d = j.d
    if int(beta) != beta or not 0 <= beta < d:
        raise ValidationError(f'shift index beta should satisfy 0 <= beta < {d}, was {beta}.')
    base = build_path(_shift(j, beta), _shift(m, beta))
    order = tuple((q + beta) % d for q in range(d))
    return LatticePath([_shift(x, -beta) for x in base.points], order)


def _shift(x, beta):
    '''sigma^beta(x).'''
    return LatticePoint(np.roll(np.asarray(x), -beta))


def _axis_path(j, m, order):
    if j.d != m.d:
        raise ValidationError(f'end points have different dimensions: {j.d} and {m.d}.')
    points = [j]
    cur = list(j)
    for q in order:
        step = 1 if m[q] > cur[q] else -1
        while cur[q] != m[q]:
            cur[q] += step
            points.append(LatticePoint(cur))
    return LatticePath(points, order)


def path_violations(path):
    '''Checks a path against the four defining properties and returns a list of violation messages (empty when valid):
    unit steps, no axis traversed in both directions, axes traversed contiguously in path.axis_order, and length equal to the l1
    distance of the end points.'''
    problems = []
    steps = []
    for t, (a, b) in enumerate(zip(path.points[:-1], path.points[1:])):
        diff = b - a
        if diff.norm_1() != 1:
            problems.append(f'step {t} from {tuple(a)} to {tuple(b)} is not a unit step')
            continue
        q = next(i for i, c in enumerate(diff) if c != 0)
        steps.append((q, diff[q]))

    for q in range(path.points[0].d):
        signs = {s for axis, s in steps if axis == q}
        if len(signs) > 1:
            problems.append(f'axis {q} traversed in both directions')

    rank = {q: i for i, q in enumerate(path.axis_order)}
    ranks = [rank[q] for q, _ in steps]
    if any(r1 > r2 for r1, r2 in zip(ranks[:-1], ranks[1:])):
        problems.append(f'axes not traversed in the order {path.axis_order}')

    ends = path.points[-1] - path.points[0]
    if path.length != ends.norm_1():
        problems.append(f'length {path.length} differs from l1 distance {ends.norm_1()}')
    return problems


def is_valid_path(path):
    return not path_violations(path)


@dataclass
class CensusResult:
    '''Edge usage of all paths pat^beta(j, m), j in A_n, m in A_(n+k).

    counts[beta] is a flat array over directed edges: slot (v*d + q)*2 + dir for the edge leaving vertex v (C-order index in the box
    [0, 2^(n+k)-1]^d) along axis q, dir 0 for +e_q and 1 for -e_q.
    '''
    n: int
    k: int
    d: int
    betas: tuple
    side: int
    counts: dict = field(default_factory=dict)
    outside_band: dict = field(default_factory=dict)

    def bound(self):
        '''Per-beta bound 2^((d+1)n) 2^(kd).'''
        return 2**((self.d + 1)*self.n) * 2**(self.k*self.d)

    def summed_bound(self):
        '''Bound for the counts summed over all shifts: 2 * 2^((d+1)n) 2^(kd).'''
        return 2*self.bound()

    def axis_bound(self, position):
        '''Bound for an edge along the axis traversed at 0-based position `position`: 2^((d+1)n) 2^(k(d-position)).'''
        return 2**((self.d + 1)*self.n) * 2**(self.k*(self.d - position))

    def max_count(self, beta=None):
        '''Largest count for one shift, or for the sum over all computed shifts when beta is None.'''
        return int(self.total_counts().max() if beta is None else self.counts[beta].max())

    def total_counts(self):
        return sum(self.counts[b] for b in self.betas)

    def per_beta(self):
        return {b: {'max_count': self.max_count(b), 'bound': self.bound(), 'outside_band': self.outside_band[b]} for b in self.betas}

    def edge_counts(self, beta=None):
        '''{(x, y): count} for every traversed directed edge.'''
        counts = self.total_counts() if beta is None else self.counts[beta]
        out = {}
        for slot in np.flatnonzero(counts):
            x, q, sign = self._decode(slot)
            out[(x, x.shifted(q, sign))] = int(counts[slot])
        return out

    def rows(self, beta=None):
        '''(edge tail, edge head, axis q (1-based), count, bound) for every traversed directed edge.'''
        bound = self.bound() if beta is not None or len(self.betas) == 1 else self.summed_bound()
        counts = self.total_counts() if beta is None else self.counts[beta]
        rows = []
        for slot in np.flatnonzero(counts):
            x, q, sign = self._decode(slot)
            rows.append((tuple(x), tuple(x.shifted(q, sign)), q + 1, int(counts[slot]), bound))
        return rows

    def to_csv(self, path, beta=None):
        with open(path, 'w', newline='') as f:
            writer = csv.writer(f)
            writer.writerow(['tail', 'head', 'axis', 'count', 'bound'])
            for tail, head, q, count, bound in self.rows(beta):
                writer.writerow([' '.join(map(str, tail)), ' '.join(map(str, head)), q, count, bound])

    def _decode(self, slot):
        v, rest = divmod(int(slot), 2*self.d)
        q, direction = divmod(rest, 2)
        x = LatticePoint(np.unravel_index(v, (self.side,)*self.d))
        return x, q, 1 if direction == 0 else -1


def edge_usage_census(n, k, d, beta='ALL', max_pairs=DEFAULT_POINT_BUDGET, verbose=False):
    '''Counts, for every directed edge, the pairs (j, m) in A_n x A_(n+k) whose shifted path pat^beta(j, m) traverses it.

    INPUTS:
        n : int
            Inner annulus level, n >= 1.

        k : int
            Level gap, k >= 1.

        d : int
            Dimension.

        beta : int or 'ALL'
            Shift index, or 'ALL' for every shift 0..d-1.

        max_pairs : int
            Budget on #A_n * #A_(n+k).

        verbose : bool
            Flag for printing out debug statements

    OUTPUTS:
        census : CensusResult
    '''
    if verbose: print('==== discrete_hardy.paths.edge_usage_census()')
    if n < 1 or k < 1 or d < 1:
        raise ValidationError(f'census needs n >= 1, k >= 1, d >= 1, got n={n}, k={k}, d={d}.')
    betas = tuple(range(d)) if beta == 'ALL' else (int(beta),)
    for b in betas:
        if not 0 <= b < d:
            raise ValidationError(f'shift index beta should satisfy 0 <= beta < {d}, was {b}.')
    inner = annulus_array(n, d, max_pairs)
    outer = annulus_array(n + k, d, max_pairs)
    if inner.shape[0] * outer.shape[0] > max_pairs:
        raise CapacityError(f'census over {inner.shape[0]} x {outer.shape[0]} pairs exceeds the budget {max_pairs}.')

    side = 2**(n + k)
    result = CensusResult(n=n, k=k, d=d, betas=betas, side=side)
    for b in betas:
        order = np.array([(q + b) % d for q in range(d)], dtype=np.int64)
        chunks = min(CENSUS_CHUNKS, inner.shape[0])
        counts, outside = _census_kernel(inner, outer, order, side, n, k, chunks)
        result.counts[b] = counts
        result.outside_band[b] = int(outside)
        if verbose: print(f'beta={b}: max count {counts.max()}, bound {result.bound()}, vertices outside band {outside}')
    return result


@numba.njit(parallel=True, cache=True)
def _census_kernel(inner, outer, order, side, n, k, chunks):
    '''Walks every path once. Each chunk of inner points owns a count array, and the integer totals are merged at the end.'''
    d = inner.shape[1]
    n_slots = side**d * 2 * d
    counts = np.zeros((chunks, n_slots), dtype=np.int64)
    outside = np.zeros(chunks, dtype=np.int64)
    for c in numba.prange(chunks):
        cur = np.zeros(d, dtype=np.int64)
        for a in range(c, inner.shape[0], chunks):
            for b in range(outer.shape[0]):
                for q in range(d):
                    cur[q] = inner[a, q]
                for i in range(d):
                    q = order[i]
                    target = outer[b, q]
                    while cur[q] != target:
                        step = 1 if target > cur[q] else -1
                        v = 0
                        for r in range(d):
                            v = v*side + cur[r]
                        counts[c, (v*d + q)*2 + (0 if step > 0 else 1)] += 1
                        cur[q] += step
                        top = 0
                        for r in range(d):
                            if cur[r] > top:
                                top = cur[r]
                        level = 0
                        while top > 0:
                            level += 1
                            top >>= 1
                        if level < n or level > n + k:
                            outside[c] += 1
    return counts.sum(axis=0), outside.sum()
