# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import logging
import struct
import numpy as np

from ..core.errors import CapacityError, DimensionMismatchError, DomainError
from ..core.mixture import Mixture

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 2e8
_MAGIC = b'PSPN'
_FORMAT_VERSION = 1


def tensor_rng(seed, *keys):
    """
    Counter-based generator keyed by the seed and integer keys (degree, path index, ...).
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed)] + [int(k) for k in keys])))


def _contract_except(tensor, sigma, keep):
    out = tensor
    for axis in reversed(range(tensor.ndim)):
        if axis not in keep:
            out = np.tensordot(out, sigma, axes=([axis], [0]))
    return out


class HamiltonianInstance(object):
    """
    Finite-N mixed p-spin Hamiltonian H(s) = sum_p gamma_p N^{-(p-1)/2} <G^(p), s^{(x)p}> with
    unsymmetrized i.i.d. standard Gaussian tensors G^(p).

    :param N: dimension.
    :param mixture: Mixture.
    :param seed: integer seed.
    :param tensors: dictionary degree -> array of shape (N,)*p.
    """

    def __init__(self, N, mixture, seed, tensors):
        self.N = int(N)
        self.mixture = mixture
        self.seed = int(seed)
        self.tensors = tensors
        self._scales = dict((p, g * self.N ** (-(p - 1) / 2.)) for p, g in mixture.coeffs.items())

    def _check(self, sigma):
        sigma = np.asarray(sigma, dtype=float)
        if sigma.shape != (self.N,):
            raise DimensionMismatchError('Expected a vector of size ' + str(self.N) + ', got shape ' + str(sigma.shape) + '.')
        return sigma

    def energy(self, sigma):
        sigma = self._check(sigma)
        return float(sum(c * _contract_except(self.tensors[p], sigma, ()) for p, c in self._scales.items()))

    def gradient(self, sigma):
        sigma = self._check(sigma)
        grad = np.zeros(self.N)
        for p, c in self._scales.items():
            for a in range(p):
                grad += c * _contract_except(self.tensors[p], sigma, (a,))
        return grad

    def hessian(self, sigma):
        sigma = self._check(sigma)
        hess = np.zeros((self.N, self.N))
        for p, c in self._scales.items():
            for a in range(p):
                for b in range(a + 1, p):
                    part = c * _contract_except(self.tensors[p], sigma, (a, b))
                    hess += part + part.T
        return hess

    def hessian_vector_product(self, sigma, u):
        u = self._check(u)
        return self.hessian(sigma).dot(u)

    def energy_and_gradient(self, sigma):
        return self.energy(sigma), self.gradient(sigma)


def sample(N, m, seed, budget=DEFAULT_BUDGET):
    """
    Samples the Gaussian tensors of every degree with a positive coefficient.

    Raises CapacityError when sum_p N^p exceeds the budget.
    """
    if int(N) != N or N < 2:
        raise DomainError('Dimension must be an integer >= 2.')
    N = int(N)
    sizes = dict((p, float(N) ** p) for p in m.degrees)
    if sum(sizes.values()) > budget:
        worst = max(sizes, key=sizes.get)
        raise CapacityError('Tensor budget exceeded: degree ' + str(worst) + ' needs ' + '%.3g' % sizes[worst] +
                            ' entries (total %.3g > budget %.3g).' % (sum(sizes.values()), budget))
    tensors = {}
    for p in m.degrees:
        tensors[p] = tensor_rng(seed, p).standard_normal(N ** p).reshape((N,) * p)
    logger.debug('Sampled Hamiltonian N=%d degrees=%s seed=%d', N, m.degrees, seed)
    return HamiltonianInstance(N, m, seed, tensors)


def project_to_sphere(x):
    x = np.asarray(x, dtype=float)
    return x * (np.sqrt(x.size) / np.linalg.norm(x))


def random_point(N, rng):
    return project_to_sphere(rng.standard_normal(N))


def overlap(sigma1, sigma2):
    return float(np.dot(sigma1, sigma2) / len(sigma1))


def check_sphere(sigma, tol=1e-9):
    sigma = np.asarray(sigma, dtype=float)
    if abs(np.dot(sigma, sigma) - sigma.size) > tol * sigma.size:
        raise DomainError('Point is not on the sphere of radius sqrt(N).')
    return sigma


def tangent_basis(sigma):
    """
    Orthonormal basis (N x N-1) of the tangent space at sigma: the last N-1 columns of the Householder
    reflection sending e_1 to sigma/sqrt(N).
    """
    N = sigma.size
    unit = sigma / np.linalg.norm(sigma)
    u = -unit
    u[0] += 1.
    norm2 = np.dot(u, u)
    if norm2 < 1e-24:
        return np.eye(N)[:, 1:]
    basis = -2. / norm2 * np.outer(u, u[1:])
    basis[1:, :] += np.eye(N - 1)
    return basis


def spherical_ops(h, sigma, basis=None):
    """
    Radial derivative <sigma, grad H>/N, tangent gradient and spherical Hessian (projected Hessian minus
    radial times identity) in the tangent basis.
    """
    sigma = h._check(sigma)
    grad = h.gradient(sigma)
    radial = float(np.dot(sigma, grad) / h.N)
    B = tangent_basis(sigma) if basis is None else basis
    hess_sp = B.T.dot(h.hessian(sigma)).dot(B)
    hess_sp = 0.5 * (hess_sp + hess_sp.T) - radial * np.eye(B.shape[1])
    return {'radial': radial, 'grad_sp': B.T.dot(grad), 'hess_sp': hess_sp, 'basis': B, 'grad': grad}


def save_tensors(h, path):
    """
    Binary dump: magic, format version, N, seed, number of degrees, degrees, gammas, then each tensor as
    little-endian float64 in degree order.
    """
    degrees = sorted(h.tensors)
    coeffs = h.mixture.coeffs
    with open(path, 'wb') as fileout:
        fileout.write(_MAGIC)
        fileout.write(struct.pack('<IIQI', _FORMAT_VERSION, h.N, h.seed, len(degrees)))
        fileout.write(struct.pack('<%dI' % len(degrees), *degrees))
        fileout.write(struct.pack('<%dd' % len(degrees), *[coeffs[p] for p in degrees]))
        for p in degrees:
            fileout.write(np.ascontiguousarray(h.tensors[p], dtype='<f8').tobytes())


def load_tensors(path):
    with open(path, 'rb') as filein:
        if filein.read(4) != _MAGIC:
            raise ValueError('Not a tensor dump: ' + str(path))
        version, N, seed, count = struct.unpack('<IIQI', filein.read(20))
        if version != _FORMAT_VERSION:
            raise ValueError('Unsupported tensor dump version ' + str(version) + '.')
        degrees = struct.unpack('<%dI' % count, filein.read(4 * count))
        gammas = struct.unpack('<%dd' % count, filein.read(8 * count))
        tensors = {}
        for p in degrees:
            data = filein.read(8 * N ** p)
            tensors[p] = np.frombuffer(data, dtype='<f8').astype(float).reshape((N,) * p)
    return HamiltonianInstance(N, Mixture(dict(zip(degrees, gammas))), seed, tensors)
