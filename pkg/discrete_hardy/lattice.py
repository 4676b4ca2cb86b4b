'''Creation Date: 18/10/26

Lattice substrate for every sum in the library: points, norms, the neighbour relation, support boxes, dyadic annuli and sphere decompositions.

All enumerations are lexicographic (C-order over the box), so any table built from them is reproducible bit for bit.

FUNCTIONS:
    annulus_size, annulus_array, annulus_points
        The dyadic annulus A_n = [0, 2^n-1]^d minus [0, 2^(n-1)-1]^d, with A_0 the origin.

    annulus_level
        Vectorised level map x -> n such that x is in A_n.

    shell_size, face_size, corner_size, sphere_decomposition
        The sphere S_k = {||x||_inf = k} split into the face set W_k and the corners S_k minus W_k.

    neighbors
        Unit-distance neighbours of a point inside a lattice.
'''

import numpy as np

from .errors import ValidationError, CapacityError

LATTICE_KINDS = ('NONNEGATIVE', 'FULL')
NEIGHBOR_VARIANTS = ('ALL_LATTICE', 'EXCLUDE_ORIGIN')
DEFAULT_POINT_BUDGET = 10**8
_COORD_LIMIT = 2**31


class LatticePoint(tuple):
    '''An integer d-tuple. Behaves as a tuple (hashable, comparable) with norm accessors on top.'''

    def __new__(cls, coords):
        coords = tuple(int(c) for c in coords)
        if len(coords) == 0:
            raise ValidationError('LatticePoint needs at least one coordinate.')
        if any(abs(c) > _COORD_LIMIT for c in coords):
            raise ValidationError(f'coordinates of {coords} exceed 2^31 in absolute value.')
        return super().__new__(cls, coords)

    @classmethod
    def origin(cls, d):
        return cls((0,)*d)

    @classmethod
    def unit(cls, q, d, sign=1):
        '''The unit vector sign*e_q, with q counted from 0.'''
        coords = [0]*d
        coords[q] = sign
        return cls(coords)

    @property
    def d(self):
        return len(self)

    def norm_inf(self):
        return max(abs(c) for c in self)

    def norm_1(self):
        return sum(abs(c) for c in self)

    def norm(self, p=2):
        return float(sum(abs(c)**p for c in self))**(1/p)

    def is_origin(self):
        return all(c == 0 for c in self)

    def shifted(self, q, step):
        '''Returns the point moved by step along axis q.'''
        coords = list(self)
        coords[q] += step
        return LatticePoint(coords)

    def __sub__(self, other):
        return LatticePoint(a - b for a, b in zip(self, other))

    def __repr__(self):
        return f'LatticePoint{tuple(self)}'


class Domain:
    '''Support box of a compactly supported function, plus the lattice it lives in.

    The box is [0,N]^d for the NONNEGATIVE lattice and [-N,N]^d for the FULL lattice. Values of a function on the domain are stored as a
    d-dimensional array of shape (side,)*d, where array index i along an axis holds coordinate lower+i.
    '''

    def __init__(self, lattice='NONNEGATIVE', dimension=1, radius=1, max_points=DEFAULT_POINT_BUDGET):
        '''Initialisation function.

        INPUTS:
            lattice : str
                'NONNEGATIVE' for Z_+^d or 'FULL' for Z^d.

            dimension : int
                The lattice dimension d >= 1.

            radius : int
                The support radius N >= 0 in the sup-norm.

            max_points : int
                Point budget; a box with more points than this raises a CapacityError.
        '''
        if lattice not in LATTICE_KINDS:
            raise ValidationError(f'lattice should be one of {LATTICE_KINDS}, was {lattice}.')
        if int(dimension) != dimension or dimension < 1:
            raise ValidationError(f'dimension should be an integer >= 1, was {dimension}.')
        if int(radius) != radius or radius < 0:
            raise ValidationError(f'radius should be an integer >= 0, was {radius}.')
        self.lattice = lattice
        self.dimension = int(dimension)
        self.radius = int(radius)
        self.max_points = max_points
        if self.n_points > max_points:
            raise CapacityError(f'box of side {self.side} in dimension {self.dimension} has {self.n_points} points, budget is {max_points}.')

    @property
    def d(self):
        return self.dimension

    @property
    def lower(self):
        return 0 if self.lattice == 'NONNEGATIVE' else -self.radius

    @property
    def side(self):
        return self.radius + 1 if self.lattice == 'NONNEGATIVE' else 2*self.radius + 1

    @property
    def shape(self):
        return (self.side,)*self.dimension

    @property
    def n_points(self):
        return self.side**self.dimension

    @property
    def origin_index(self):
        return (-self.lower,)*self.dimension

    def enlarged(self, margin):
        '''The same lattice with the box grown by margin in every direction (intersected with the lattice).'''
        if margin < 0:
            raise ValidationError(f'margin should be >= 0, was {margin}.')
        return Domain(self.lattice, self.dimension, self.radius + int(margin), self.max_points)

    def coordinates(self):
        '''1D array of the coordinate values along any axis.'''
        return np.arange(self.lower, self.lower + self.side)

    def points(self):
        '''(n_points, d) int64 array of every box point, in lexicographic order.'''
        grid = np.indices(self.shape).reshape(self.dimension, -1).T
        return grid + self.lower

    def norms(self):
        '''Array of shape self.shape holding ||x||_inf for every box point.'''
        coords = np.abs(self.coordinates())
        out = np.zeros(self.shape, dtype=np.int64)
        for q in range(self.dimension):
            view = [1]*self.dimension
            view[q] = self.side
            out = np.maximum(out, coords.reshape(view))
        return out

    def in_lattice(self, x):
        return self.lattice == 'FULL' or all(c >= 0 for c in x)

    def contains(self, x):
        return self.in_lattice(x) and len(x) == self.dimension and max(abs(c) for c in x) <= self.radius

    def index_of(self, x):
        '''Array index of point x, or None when x lies outside the box.'''
        if not self.contains(x):
            return None
        return tuple(c - self.lower for c in x)

    def __eq__(self, other):
        return isinstance(other, Domain) and (self.lattice, self.dimension, self.radius) == (other.lattice, other.dimension, other.radius)

    def __hash__(self):
        return hash((self.lattice, self.dimension, self.radius))

    def __repr__(self):
        return f'Domain(lattice={self.lattice!r}, dimension={self.dimension}, radius={self.radius})'


def annulus_size(n, d):
    '''Closed form #A_n: 1 for n = 0, otherwise 2^(nd)(1 - 2^-d).'''
    if n < 0 or d < 1:
        raise ValidationError(f'annulus needs n >= 0 and d >= 1, got n={n}, d={d}.')
    if n == 0:
        return 1
    return 2**(n*d) - 2**((n-1)*d)


def annulus_array(n, d, max_points=DEFAULT_POINT_BUDGET):
    '''Dyadic annulus A_n as an (#A_n, d) int64 array, in lexicographic order.

    INPUTS:
        n : int
            Annulus level, n >= 0.

        d : int
            Dimension, d >= 1.

        max_points : int
            Point budget for the enclosing box [0, 2^n-1]^d.

    OUTPUTS:
        points : np.ndarray
            (#A_n, d) array of the annulus members.
    '''
    annulus_size(n, d)
    if n == 0:
        return np.zeros((1, d), dtype=np.int64)
    side = 2**n
    if side**d > max_points:
        raise CapacityError(f'annulus A_{n} in dimension {d} needs a box of {side**d} points, budget is {max_points}.')
    grid = np.indices((side,)*d).reshape(d, -1).T.astype(np.int64)
    return grid[grid.max(axis=1) >= 2**(n-1)]


def annulus_points(n, d, max_points=DEFAULT_POINT_BUDGET):
    '''Dyadic annulus A_n as a list of LatticePoint.'''
    return [LatticePoint(row) for row in annulus_array(n, d, max_points)]


def annulus_level(norms):
    '''Level of each point given its sup-norms: 0 at the origin, otherwise the n with 2^(n-1) <= ||x||_inf <= 2^n - 1.'''
    return np.frexp(np.asarray(norms, dtype=np.float64))[1].astype(np.int64)


def shell_size(k, d):
    '''#S_k = (k+1)^d - k^d on Z_+^d.'''
    return (k + 1)**d - k**d


def face_size(k, d):
    '''#W_k = d k^(d-1).'''
    return d * k**(d-1)


def corner_size(k, d):
    '''#(S_k minus W_k) = (k+1)^d - k^d - d k^(d-1); zero when d = 1.'''
    return shell_size(k, d) - face_size(k, d)


def sphere_decomposition(k, d, max_points=DEFAULT_POINT_BUDGET):
    '''Splits the sphere S_k of Z_+^d into the face set W_k and the remaining corner points.

    INPUTS:
        k : int
            Sphere radius, k >= 1.

        d : int
            Dimension, d >= 1.

    OUTPUTS:
        faces : list of LatticePoint
            Points of S_k where exactly one coordinate equals k.

        corners : list of LatticePoint
            Points of S_k where at least two coordinates equal k.
    '''
    if k < 1 or d < 1:
        raise ValidationError(f'sphere decomposition needs k >= 1 and d >= 1, got k={k}, d={d}.')
    if (k + 1)**d > max_points:
        raise CapacityError(f'sphere S_{k} in dimension {d} needs a box of {(k+1)**d} points, budget is {max_points}.')
    grid = np.indices((k + 1,)*d).reshape(d, -1).T
    hits = (grid == k).sum(axis=1)
    faces = [LatticePoint(row) for row in grid[hits == 1]]
    corners = [LatticePoint(row) for row in grid[hits > 1]]
    return faces, corners


def neighbors(x, dom, variant='ALL_LATTICE'):
    '''All y with |x - y| = 1 lying in dom's lattice (not just its box), sorted.

    INPUTS:
        x : LatticePoint or tuple
            A point of dom's lattice.

        dom : Domain
            Supplies the lattice kind.

        variant : str
            'ALL_LATTICE' keeps every lattice neighbour, 'EXCLUDE_ORIGIN' drops the origin.

    OUTPUTS:
        ys : list of LatticePoint
    '''
    if variant not in NEIGHBOR_VARIANTS:
        raise ValidationError(f'neighbor variant should be one of {NEIGHBOR_VARIANTS}, was {variant}.')
    x = LatticePoint(x)
    out = []
    for q in range(len(x)):
        for step in (-1, 1):
            y = x.shifted(q, step)
            if not dom.in_lattice(y):
                continue
            if variant == 'EXCLUDE_ORIGIN' and y.is_origin():
                continue
            out.append(y)
    return sorted(out)
