'''Creation Date: 18/10/26

Numerical estimates of the best constant c*(regime, N) = sup lhs(u)/rhs(u) over functions supported in the box of radius N.

The free values are those at the box points other than the origin. The origin is pinned to 0: some regimes require u(0) = 0, and in the
others the origin value does not enter the left side. Dropping it also removes the constants from the EXCLUDE_ORIGIN kernels.

p = 2: both sides are quadratic forms, lhs = x'Ax with A diagonal, and the sup is the top eigenvalue of the pencil (A, B). Power
iteration x <- B^-1 A x converges to it. B is a sparse graph Laplacian for local forms, factorised once. Fractional forms are dense and
only available matrix-free, so they are solved by a fixed number of conjugate gradient steps warm-started from the previous solution.

general p: L-BFGS-B ascent of the ratio from several random starts, with an analytic gradient for p > 1 and central differences
otherwise. For p < 1 the ratio is neither smooth nor concave and the result is only a lower bound on c*.
'''

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse, optimize
from scipy.sparse import linalg as splinalg

from .constants import HardyParams, LOCAL_REGIMES, FRACTIONAL_REGIMES
from .errors import ValidationError, NumericError
from .functionals import weighted_lhs, local_energy, fractional_energy, edge_list, create_kernel, tree_sum, abs_pow
from .functionals.fractional_energy import (kernel_exponent, fractional_form_diagonal, fractional_form_offdiag,
                                            fractional_energy_gradient)
from .lattice import Domain
from .lattice_function import LatticeFunction

DEFAULT_OPTIMIZE = {
    'tol': 1e-10,
    'max_iter': 500,
    'inner_steps': 50,
    'restarts': None,
    'seed': 0,
    'margin': None,
}
FD_STEP = 1e-6


@dataclass
class OptimizeResult:
    '''Best-constant estimate and the witness that attains it.

    history lists (iteration, ratio, best ratio so far) for the p = 2 method and (restart, ratio, best ratio so far) for the general
    method. The p = 2 ratios are nondecreasing when the rhs form is solved exactly (local regimes).
    '''
    estimate: float
    iterations: int
    converged: bool
    witness: LatticeFunction
    history: list = field(default_factory=list)
    method: str = 'power_iteration'
    flags: list = field(default_factory=list)
    params: HardyParams = None
    N: int = 0
    margin: int = 0

    def to_dict(self, include_witness=False):
        data = {'estimate': self.estimate, 'iterations': self.iterations, 'converged': self.converged,
                'history': [list(h) for h in self.history], 'method': self.method, 'flags': list(self.flags),
                'params': self.params.to_dict() if self.params is not None else None, 'N': self.N, 'margin': self.margin}
        if include_witness:
            data['witness'] = [[*map(int, x), float(v)] for x, v in zip(self.witness.domain.points(), self.witness.values.ravel())]
        return data

    def to_json(self, include_witness=False, **kwargs):
        return json.dumps(self.to_dict(include_witness), **kwargs)

    def witness_to_csv(self, path):
        self.witness.to_csv(path)


class _RatioProblem:
    '''lhs(x)/rhs(x) as a function of the free values x, for one regime on one box.'''

    def __init__(self, params, N, margin=None):
        params.validate()
        if params.regime not in LOCAL_REGIMES + FRACTIONAL_REGIMES:
            raise ValidationError(f'best-constant estimation covers {LOCAL_REGIMES + FRACTIONAL_REGIMES}, was {params.regime}.')
        if int(N) != N or N < 1:
            raise ValidationError(f'N should be an integer >= 1, was {N}.')
        self.params = params
        self.p = float(params.p)
        self.t = params.lhs_exponent()
        self.variant = params.rhs_variant()
        self.domain = Domain(params.lattice, params.d, int(N))
        norms = self.domain.norms().ravel()
        self.free = np.flatnonzero(norms > 0)
        self.weights = np.exp(-self.t*np.log(norms[self.free].astype(np.float64)))
        self.local = params.regime in LOCAL_REGIMES
        self.margin = 0 if self.local else (self.domain.radius if margin is None else int(margin))
        if self.local:
            self._setup_local()
        else:
            self._setup_fractional()

    @property
    def size(self):
        return self.free.size

    def _setup_local(self):
        a, b, w = edge_list(self.domain, self.variant)
        slot = np.full(self.domain.n_points, -1, dtype=np.int64)
        slot[self.free] = np.arange(self.free.size)
        # -1 marks a pinned value: the origin, or a padding point outside the box
        self.ea = np.where(a >= 0, slot[np.maximum(a, 0)], -1)
        self.eb = np.where(b >= 0, slot[np.maximum(b, 0)], -1)
        keep = (self.ea >= 0) | (self.eb >= 0)
        self.ea, self.eb, self.ew = self.ea[keep], self.eb[keep], w[keep]

    def _setup_fractional(self):
        box = self.domain.enlarged(self.margin)
        self.coords = box.points()
        inner = self.domain.points() - box.lower
        flat = np.ravel_multi_index(inner.T, box.shape)
        self.free_box = flat[self.free].astype(np.int64)
        self.box = box
        self.origin_box = int(np.ravel_multi_index(box.origin_index, box.shape)) if self.variant.tag == 'FRAC_EXCLUDE_ORIGIN' else -1
        exponent = kernel_exponent(self.params.s, self.p, self.params.d, self.variant)
        self.kernel = create_kernel.power(exponent, box.side - 1)
        self._diag = None

    def to_function(self, x):
        values = np.zeros(self.domain.n_points)
        values[self.free] = x
        return LatticeFunction(self.domain, values.reshape(self.domain.shape))

    def lhs(self, x):
        return tree_sum(self.weights * abs_pow(x, self.p))

    def rhs(self, x):
        if self.local:
            xe = np.append(x, 0.0)
            return tree_sum(self.ew * abs_pow(xe[self.ea] - xe[self.eb], self.p))
        return fractional_energy(self.to_function(x), self.params.s, self.p, self.variant, margin=self.margin)

    def ratio(self, x):
        rhs = self.rhs(x)
        return self.lhs(x)/rhs if rhs > 0 else 0.0

    def lhs_grad(self, x):
        return self.p * self.weights * np.abs(x)**(self.p - 1) * np.sign(x)

    def rhs_grad(self, x):
        p = self.p
        if self.local:
            xe = np.append(x, 0.0)
            diff = xe[self.ea] - xe[self.eb]
            g = p * self.ew * np.abs(diff)**(p - 1) * np.sign(diff)
            grad = np.zeros(self.size + 1)
            np.add.at(grad, self.ea, g)
            np.add.at(grad, self.eb, -g)
            return grad[:-1]
        values = np.zeros(self.box.n_points)
        values[self.free_box] = x
        return fractional_energy_gradient(self.coords, self.free_box, values, self.origin_box, self.kernel, p)

    def evaluate(self, u):
        '''Ratio of a witness through the public functionals.'''
        lhs = weighted_lhs(u, self.p, self.t)
        if self.local:
            rhs = local_energy(u, self.p, self.variant)
        else:
            rhs = fractional_energy(u, self.params.s, self.p, self.variant, margin=self.margin)
        return lhs/rhs if rhs > 0 else 0.0

    def initial(self, init, rng):
        '''Free values of a warm start (embedded into this box), or a positive random vector.'''
        if init is None:
            return rng.uniform(0.5, 1.5, size=self.size)
        if init.domain.radius > self.domain.radius:
            raise ValidationError(f'warm start on radius {init.domain.radius} does not fit the box of radius {self.domain.radius}.')
        values = np.real(init.embedded(self.domain).values).ravel()[self.free]
        if not np.any(values):
            raise ValidationError('warm start vanishes on the free points.')
        return values.astype(np.float64)

    # p = 2 pencil

    def form_matrix(self):
        '''Sparse rhs form B (local regimes, p = 2), with x'Bx = rhs(x).'''
        n = self.size
        ea, eb, w = self.ea, self.eb, self.ew
        both = (ea >= 0) & (eb >= 0)
        rows = np.concatenate([ea[ea >= 0], eb[eb >= 0], ea[both], eb[both]])
        cols = np.concatenate([ea[ea >= 0], eb[eb >= 0], eb[both], ea[both]])
        vals = np.concatenate([w[ea >= 0], w[eb >= 0], -w[both], -w[both]])
        return sparse.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsc()

    def form_matvec(self, x):
        '''B x for fractional regimes, p = 2: B = 2(diag(D) - offdiagonal kernel).'''
        if self._diag is None:
            self._diag = fractional_form_diagonal(self.coords, self.free_box, self.origin_box, self.kernel)
        return 2.0*(self._diag*x - fractional_form_offdiag(self.coords, self.free_box, self.kernel, np.ascontiguousarray(x)))


def _resolve(kwargs):
    return {**DEFAULT_OPTIMIZE, **{k: v for k, v in kwargs.items() if k in DEFAULT_OPTIMIZE and v is not None}}


def best_constant_p2(params, N, tol=None, max_iter=None, inner_steps=None, margin=None, init=None, seed=None, verbose=False):
    '''Power iteration for the top eigenvalue of the pencil (A, B) with A the lhs form and B the rhs form.

    INPUTS:
        params : HardyParams
            A local or fractional regime with p = 2.

        N : int
            Box radius.

        tol : float
            Stop when successive ratios differ by less than tol relatively.

        max_iter : int
            Outer iteration cap. converged is False when it is reached.

        inner_steps : int
            Conjugate gradient steps per solve (fractional regimes).

        margin : None, int
            Truncation margin of the fractional form, default N.

        init : None, LatticeFunction
            Warm start, e.g. the witness of a smaller box.

        seed : int
            Seed of the random positive start.

        verbose : bool
            Flag for printing out debug statements

    OUTPUTS:
        result : OptimizeResult
    '''
    if verbose: print('==== discrete_hardy.optimizer.best_constant_p2()')
    opts = _resolve({'tol': tol, 'max_iter': max_iter, 'inner_steps': inner_steps, 'margin': margin, 'seed': seed})
    if not math.isclose(params.p, 2.0):
        raise ValidationError(f'best_constant_p2 needs p = 2, was {params.p}.')
    prob = _RatioProblem(params, N, opts['margin'])
    A = prob.weights
    x = prob.initial(init, np.random.default_rng(opts['seed']))

    if prob.local:
        B = prob.form_matrix()
        solve_factor = splinalg.factorized(B)

        def solve(b, x0):
            return solve_factor(b)

        def matvec(y):
            return B @ y
    else:
        op = splinalg.LinearOperator((prob.size, prob.size), matvec=prob.form_matvec, dtype=np.float64)
        prob.form_matvec(np.zeros(prob.size))
        jacobi = splinalg.LinearOperator((prob.size, prob.size), matvec=lambda r: r/(2.0*prob._diag), dtype=np.float64)

        def solve(b, x0):
            y, _ = splinalg.cg(op, b, x0=x0, rtol=1e-14, atol=0.0, maxiter=opts['inner_steps'], M=jacobi)
            return y
        matvec = prob.form_matvec

    def rayleigh(y):
        by = matvec(y)
        denom = float(y @ by)
        if not denom > 0:
            raise NumericError('rhs form is not positive on the iterate.')
        return float(y @ (A*y))/denom, math.sqrt(denom)

    ratio, scale = rayleigh(x)
    x = x/scale
    best, best_x = ratio, x
    history = [(0, ratio, best)]
    converged = False
    it = 0
    for it in range(1, opts['max_iter'] + 1):
        # B^-1 A x is close to ratio*x near convergence
        y = solve(A*x, ratio*x)
        new_ratio, scale = rayleigh(y)
        x = y/scale
        if new_ratio > best:
            best, best_x = new_ratio, x
        history.append((it, new_ratio, best))
        if verbose and it % 50 == 0: print(f'iteration {it}: ratio {new_ratio!r}')
        if abs(new_ratio - ratio) <= opts['tol']*abs(new_ratio):
            converged = True
            break
        ratio = new_ratio

    witness = prob.to_function(best_x)
    estimate = prob.evaluate(witness)
    if verbose: print(f'estimate {estimate!r} after {it} iterations, converged={converged}')
    return OptimizeResult(estimate=estimate, iterations=it, converged=converged, witness=witness, history=history,
                          method='power_iteration', flags=[], params=params, N=int(N), margin=prob.margin)


def best_constant_general(params, N, restarts=None, tol=None, max_iter=None, margin=None, init=None, seed=None, verbose=False):
    '''Maximises lhs/rhs by L-BFGS-B on -ratio from several starts.

    INPUTS:
        params : HardyParams
            A local or fractional regime, any p > 0.

        N : int
            Box radius.

        restarts : None, int
            Number of random starts. Defaults to 8 for p < 1 and 3 otherwise.

        tol : float
            ftol of L-BFGS-B.

        max_iter : int
            Iteration cap per start.

        margin : None, int
            Truncation margin of the fractional form, default N.

        init : None, LatticeFunction
            Warm start, tried before the random starts.

        seed : int
            Start k draws from default_rng([seed, k]).

        verbose : bool
            Flag for printing out debug statements

    OUTPUTS:
        result : OptimizeResult
            flags holds LOWER_BOUND_ONLY for p < 1. Ties between starts go to the earlier start.

    The starts run one after another. Parallelism lives in the numba kernels that evaluate each ratio, so the winner and its value do
    not depend on the thread count.
    '''
    if verbose: print('==== discrete_hardy.optimizer.best_constant_general()')
    opts = _resolve({'tol': tol, 'max_iter': max_iter, 'margin': margin, 'seed': seed, 'restarts': restarts})
    prob = _RatioProblem(params, N, opts['margin'])
    p = prob.p
    n_restarts = opts['restarts'] if opts['restarts'] is not None else (8 if p < 1 else 3)

    def objective(x):
        rhs = prob.rhs(x)
        if not rhs > 0:
            return 0.0
        return -prob.lhs(x)/rhs

    if p > 1:
        def gradient(x):
            lhs, rhs = prob.lhs(x), prob.rhs(x)
            if not rhs > 0:
                return np.zeros_like(x)
            return -(prob.lhs_grad(x)*rhs - lhs*prob.rhs_grad(x))/rhs**2
    else:
        def gradient(x):
            return central_difference(objective, x)

    starts = [] if init is None else [prob.initial(init, None)]
    starts += [prob.initial(None, np.random.default_rng([int(opts['seed']), k])) for k in range(n_restarts)]

    best, best_x, history, total_iter, converged = -math.inf, None, [], 0, False
    for k, x0 in enumerate(starts):
        rhs0 = prob.rhs(x0)
        if not rhs0 > 0:
            continue
        x0 = x0/rhs0**(1/p)
        res = optimize.minimize(objective, x0, jac=gradient, method='L-BFGS-B',
                                options={'maxiter': opts['max_iter'], 'ftol': opts['tol'], 'gtol': 1e-12})
        total_iter += int(res.nit)
        value = -float(res.fun)
        if value > best:
            best, best_x, converged = value, res.x, bool(res.success)
        history.append((k, value, best))
        if verbose: print(f'start {k}: ratio {value!r} after {res.nit} iterations ({res.message})')
    if best_x is None:
        raise NumericError('every start has a vanishing rhs.')

    witness = prob.to_function(best_x)
    estimate = prob.evaluate(witness)
    flags = ['LOWER_BOUND_ONLY'] if p < 1 else []
    return OptimizeResult(estimate=estimate, iterations=total_iter, converged=converged, witness=witness, history=history,
                          method='lbfgsb', flags=flags, params=params, N=int(N), margin=prob.margin)


def central_difference(f, x, step=FD_STEP):
    '''Central-difference gradient with step h = step*||x||_inf.'''
    h = step*max(np.max(np.abs(x)), 1e-300)
    grad = np.zeros_like(x)
    e = np.zeros_like(x)
    for i in range(x.size):
        e[i] = h
        grad[i] = (f(x + e) - f(x - e))/(2*h)
        e[i] = 0.0
    return grad
