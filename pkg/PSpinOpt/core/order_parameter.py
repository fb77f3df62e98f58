# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import numpy as np

from .errors import OutsideConeError, DomainError, DimensionMismatchError


def uniform_grid(M):
    """
    Uniform grid q_i = i/M, i = 0..M.
    """
    if int(M) != M or M < 1:
        raise DomainError('Grid size must be a positive integer.')
    return np.linspace(0., 1., int(M) + 1)


def ramp_apply(w, M):
    """
    Computes sum_k w_k (1 - max(q_i, q_k)) for every node i, in O(M).

    :param w: array of length M with the jumps at q_0..q_{M-1}.
    """
    cells = np.cumsum(w)
    tail = np.concatenate([np.cumsum(cells[::-1])[::-1], [0.]])
    return tail / M


def ramp_adjoint(u, M):
    """
    Adjoint of *ramp_apply*: returns sum_i u_i (1 - max(q_i, q_k)) for k = 0..M-1.
    """
    idx = np.arange(M + 1)
    prefix = np.cumsum(u)
    suffix = np.cumsum((u * (M - idx))[::-1])[::-1]
    k = np.arange(M)
    return (prefix[:-1] * (M - k) + suffix[1:]) / M


def ramp_matrix(M):
    """
    Dense matrix R_ik = 1 - max(q_i, q_k), i = 0..M, k = 0..M-1.
    """
    q = uniform_grid(M)
    return 1. - np.maximum(q[:, None], q[None, :-1])


class OrderParameter(object):
    """
    Discretized zero-temperature order parameter represented by the profile zhat(q) = L - int_0^q zeta.

    zhat is the piecewise-linear interpolant of its grid values, so zeta is constant on each cell.

    :param zhat: array of M+1 values zhat(q_i) on the uniform grid.
    :param check: validate membership in the cone (positive, nonincreasing, concave).
    """

    def __init__(self, zhat, check=True):
        zhat = np.array(zhat, dtype=float)
        if zhat.ndim != 1 or zhat.size < 2:
            raise DimensionMismatchError('zhat must be a one dimensional array with at least two values.')
        self.zhat = zhat
        self.M = zhat.size - 1
        self.grid = uniform_grid(self.M)
        if check:
            self.validate()

    @classmethod
    def from_cone(cls, zhat1, w, check=True):
        """
        Builds the profile from its value at q=1 and the nonnegative jumps w of zeta at q_0..q_{M-1}.
        """
        w = np.asarray(w, dtype=float)
        return cls(zhat1 + ramp_apply(w, w.size), check=check)

    @classmethod
    def replica_symmetric(cls, L, M):
        return cls(np.full(M + 1, float(L)))

    @property
    def delta(self):
        return 1. / self.M

    @property
    def L(self):
        return float(self.zhat[0])

    @property
    def zhat1(self):
        return float(self.zhat[-1])

    @property
    def zeta(self):
        """
        Cell values of zeta (length M), clamped at zero.
        """
        return np.maximum(-np.diff(self.zhat) * self.M, 0.)

    @property
    def zeta_nodes(self):
        """
        zeta(q_i) at the M+1 nodes, zeta(1) taken as zeta(1^-).
        """
        z = self.zeta
        return np.concatenate([z, z[-1:]])

    @property
    def jumps(self):
        """
        Increments of zeta: zeta(q_0) at index 0, then cell-to-cell differences.
        """
        z = self.zeta
        return np.concatenate([z[:1], np.diff(z)])

    @property
    def Z(self):
        """
        Z(q) = int_0^q zeta at the nodes.
        """
        return self.L - self.zhat

    def validate(self, rtol=1e-10):
        scale = rtol * max(1., float(np.max(np.abs(self.zhat))))
        if not np.all(np.isfinite(self.zhat)) or np.any(self.zhat <= 0):
            raise OutsideConeError('Order parameter outside the cone: zhat must stay positive.')
        if np.any(np.diff(self.zhat) > scale):
            raise OutsideConeError('Order parameter outside the cone: zhat must be nonincreasing.')
        if self.M > 1 and np.any(np.diff(self.zhat, 2) > scale):
            raise OutsideConeError('Order parameter outside the cone: zhat must be concave.')
        return True

    def resample(self, M):
        """
        Profile interpolated on a uniform grid with M cells.
        """
        return OrderParameter(np.interp(uniform_grid(M), self.grid, self.zhat), check=False)

    def to_dict(self):
        return {'grid_size': self.M, 'L': self.L, 'zhat1': self.zhat1,
                'zhat': self.zhat.tolist(), 'zeta': self.zeta.tolist()}


def random_order_parameter(M, rng, scale=1.):
    """
    Random member of the cone: positive zhat(1) and sparse exponential jumps of zeta.

    :param M: number of cells.
    :param rng: numpy Generator.
    """
    w = rng.exponential(scale, size=M) * (rng.random(M) < 0.2)
    return OrderParameter.from_cone(0.05 + rng.random() * scale, w)


class PositiveTempOrderParameter(object):
    """
    Discretized positive-temperature order parameter: a nondecreasing step function x on the grid cells
    with values in [0, 1] and last cell equal to 1.

    :param x: array of M cell values x(q) for q in [q_j, q_{j+1}).
    :param beta: inverse temperature.
    """

    def __init__(self, x, beta, check=True):
        x = np.array(x, dtype=float)
        if x.ndim != 1 or x.size < 2:
            raise DimensionMismatchError('x must be a one dimensional array with at least two values.')
        if not np.isfinite(beta) or beta <= 0:
            raise DomainError('Inverse temperature must be positive.')
        self.x = x
        self.beta = float(beta)
        self.M = x.size
        self.grid = uniform_grid(self.M)
        if check:
            self.validate()

    def validate(self, tol=1e-12):
        if np.any(self.x < -tol) or np.any(self.x > 1 + tol):
            raise OutsideConeError('x must take values in [0, 1].')
        if np.any(np.diff(self.x) < -tol):
            raise OutsideConeError('x must be nondecreasing.')
        if self.x[-1] < 1 - tol:
            raise OutsideConeError('x must equal 1 on a terminal segment starting before q=1.')
        return True

    @property
    def q_hat_index(self):
        """
        Index of the first node from which x = 1.
        """
        return int(np.argmax(self.x >= 1 - 1e-12))

    @property
    def q_hat(self):
        return float(self.grid[self.q_hat_index])

    @property
    def xhat(self):
        """
        int_q^1 x at the M+1 nodes.
        """
        return np.concatenate([np.cumsum(self.x[::-1])[::-1], [0.]]) / self.M

    def to_dict(self):
        return {'grid_size': self.M, 'beta': self.beta, 'q_hat': self.q_hat, 'x': self.x.tolist()}
