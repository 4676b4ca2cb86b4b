'''Creation Date: 18/10/26

Container for a compactly supported function u on a Domain, the object every functional consumes.
'''

import csv

import numpy as np

from .lattice import Domain, LatticePoint
from .errors import ValidationError, NumericError


class LatticeFunction:
    '''Dense value table of a function on the support box of a Domain. Values outside the box are 0 by construction.'''
    _REQ_VALS = ['domain', 'values']

    def __init__(self, domain: Domain, values: np.ndarray):
        '''Initialisation function.

        INPUTS:
            domain : Domain
                The lattice, dimension and support box of the function.

            values : np.ndarray
                Array of shape domain.shape. Index i along an axis corresponds to coordinate domain.lower + i. Real tables are stored as
                float64 and complex tables as complex128. Every entry must be finite.
        '''
        self.domain = domain
        values = np.asarray(values)
        if values.ndim != domain.dimension:
            raise ValidationError(f'dimensions for values not correct. Should be {domain.dimension}, was {values.ndim}.')
        if values.shape != domain.shape:
            raise ValidationError(f'shape of values {values.shape} incompatible with {domain}. Should be {domain.shape}.')
        dtype = np.complex128 if np.iscomplexobj(values) else np.float64
        self.values = np.ascontiguousarray(values, dtype=dtype)

        bad = ~np.isfinite(self.values)
        if bad.any():
            idx = np.unravel_index(np.argmax(bad), self.values.shape)
            point = LatticePoint(np.asarray(idx) + domain.lower)
            raise NumericError(f'non-finite value {self.values[idx]} at {tuple(point)}.', index=point)

    @classmethod
    def zeros(cls, domain, dtype=np.float64):
        return cls(domain, np.zeros(domain.shape, dtype=dtype))

    @classmethod
    def from_points(cls, domain, point_values):
        '''Builds a function from a {point: value} mapping; unlisted box points are 0.'''
        is_complex = any(np.iscomplexobj(v) for v in point_values.values())
        values = np.zeros(domain.shape, dtype=np.complex128 if is_complex else np.float64)
        for point, value in point_values.items():
            idx = domain.index_of(point)
            if idx is None:
                raise ValidationError(f'point {tuple(point)} lies outside {domain}.')
            values[idx] = value
        return cls(domain, values)

    @classmethod
    def from_callable(cls, domain, func):
        '''Builds a function from func(points) evaluated on the (n_points, d) coordinate array.'''
        values = np.asarray(func(domain.points()))
        return cls(domain, values.reshape(domain.shape))

    @property
    def is_complex(self):
        return np.iscomplexobj(self.values)

    def __getitem__(self, point):
        '''Value at a lattice point; 0 outside the support box.'''
        idx = self.domain.index_of(point)
        if idx is None:
            return 0.0
        return self.values[idx]

    def origin_value(self):
        return self.values[self.domain.origin_index]

    def with_origin_zeroed(self):
        values = self.values.copy()
        values[self.domain.origin_index] = 0
        return LatticeFunction(self.domain, values)

    def scaled(self, lam):
        return LatticeFunction(self.domain, self.values * lam)

    def permuted(self, perm):
        '''The function u(x_perm) obtained by permuting coordinate axes.'''
        return LatticeFunction(self.domain, np.transpose(self.values, perm))

    def embedded(self, domain):
        '''Zero-extension of u onto a larger box of the same lattice and dimension.'''
        if domain.lattice != self.domain.lattice or domain.dimension != self.domain.dimension:
            raise ValidationError(f'cannot embed a function on {self.domain} into {domain}.')
        if domain.radius < self.domain.radius:
            raise ValidationError(f'cannot embed into a smaller box: {domain.radius} < {self.domain.radius}.')
        offset = self.domain.lower - domain.lower
        values = np.zeros(domain.shape, dtype=self.values.dtype)
        window = tuple(slice(offset, offset + self.domain.side) for _ in range(domain.dimension))
        values[window] = self.values
        return LatticeFunction(domain, values)

    def support_radius(self):
        '''Largest ||x||_inf with u(x) != 0, or -1 when u vanishes identically.'''
        nz = self.values != 0
        if not nz.any():
            return -1
        return int(self.domain.norms()[nz].max())

    def to_csv(self, path):
        '''Writes (point, value) rows; complex tables get separate real and imaginary columns.'''
        d = self.domain.dimension
        header = [f'x{q+1}' for q in range(d)]
        header += ['real', 'imag'] if self.is_complex else ['value']
        with open(path, 'w', newline='') as f:
            writer = csv.writer(f)
            writer.writerow(header)
            for point, value in zip(self.domain.points(), self.values.ravel()):
                row = [int(c) for c in point]
                row += [repr(float(value.real)), repr(float(value.imag))] if self.is_complex else [repr(float(value))]
                writer.writerow(row)

    def __repr__(self):
        '''Tabulated overview of the stored data.'''
        ret_str = 'LatticeFunction:\n'
        ret_str += f'{"domain":<8} | {repr(self.domain)} \n'
        ret_str += f'{"values":<8} | {type(self.values).__name__:<16} | {self.values.shape} {self.values.dtype} \n'
        ret_str += f'{"support":<8} | radius {self.support_radius()} \n'
        return ret_str
