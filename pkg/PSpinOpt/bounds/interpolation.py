# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import logging
import numpy as np
from scipy.integrate import simpson

from ..core.errors import SingularPathError, DomainError

logger = logging.getLogger(__name__)


class PathSegment(object):
    """
    Piece [t0, t1] of a piecewise-linear path with constant derivative *direction*, along which the measure is
    alpha(t) = c * zeta(q0 + kappa (t - t0)). With kappa = 0 the measure is the constant c * zeta(q0^-).
    """

    def __init__(self, t0, t1, direction, c, kappa, q0):
        self.t0 = float(t0)
        self.t1 = float(t1)
        self.direction = np.asarray(direction, dtype=float)
        self.c = float(c)
        self.kappa = float(kappa)
        self.q0 = float(q0)

    @property
    def length(self):
        return self.t1 - self.t0


class InterpolationPath(object):
    """
    Matrix interpolation data: an orthogonal family of rank-one matrices J_i = v_i v_i^T spanning every matrix
    involved, the shift matrix, the entrywise weights of the covariance map, the target overlap matrix and
    the path segments.

    :param vectors: list of the generating vectors v_i.
    :param shift: shift matrix (in the span of the J_i).
    :param weights: entrywise weights W of the covariance map X -> W * xi(X).
    :param overlap: overlap matrix reached at the end of the path.
    :param segments: list of PathSegment covering [0, T].
    """

    def __init__(self, vectors, shift, weights, overlap, segments):
        self.vectors = [np.asarray(v, dtype=float) for v in vectors]
        self.basis = [np.outer(v, v) for v in self.vectors]
        self.shift = np.asarray(shift, dtype=float)
        self.weights = np.asarray(weights, dtype=float)
        self.overlap = np.asarray(overlap, dtype=float)
        self.segments = segments

    @property
    def horizon(self):
        return self.segments[-1].t1

    def coefficients(self, X):
        """
        Coordinates of X in the rank-one basis, <X, J_i>/|v_i|^4 (last axes are the matrix axes).
        """
        return np.stack([np.sum(X * J, axis=(-2, -1)) / np.dot(v, v) ** 2
                         for v, J in zip(self.vectors, self.basis)], axis=-1)

    def value(self, t):
        """
        Phi(t) for a scalar t in [0, T].
        """
        Phi = np.zeros_like(self.shift)
        for seg in self.segments:
            Phi = Phi + np.clip(t - seg.t0, 0., seg.length) * seg.direction
        return Phi


def _segment_nodes(seg, M):
    if seg.length <= 0:
        return np.array([seg.t0, seg.t1])
    if seg.kappa > 0:
        q_end = seg.q0 + seg.kappa * seg.length
        grid = np.arange(1, M) / float(M)
        inner = grid[(grid > seg.q0 + 1e-14) & (grid < q_end - 1e-14)]
        nodes = np.concatenate([[seg.t0], seg.t0 + (inner - seg.q0) / seg.kappa, [seg.t1]])
    else:
        nodes = np.linspace(seg.t0, seg.t1, max(4, int(np.ceil(seg.length * M))) + 1)
    return nodes


def _cumulative_measure(seg, t, op):
    '''
    int_{t0}^t alpha for the segment measure, exact for the piecewise-linear zhat.
    '''
    if seg.kappa > 0:
        q = np.clip(seg.q0 + seg.kappa * (t - seg.t0), 0., 1.)
        Z = op.Z
        return seg.c / seg.kappa * (np.interp(q, op.grid, Z) - np.interp(seg.q0, op.grid, Z))
    cell = min(max(int(np.ceil(seg.q0 * op.M)) - 1, 0), op.M - 1)
    return seg.c * op.zeta[cell] * (t - seg.t0)


def evaluate_path(path, m, op, substeps=2):
    """
    Evaluates the interpolation bound

        <W xi'(Q), Lshift> - int <W xi''(Phi) Phi', C(t)> dt + int <(Lshift - C(t))^-1, Phi'> dt,
        C(t) = int_0^t alpha Phi',

    with the inverse pairing computed in the rank-one basis (sum of D_i/A_i) and composite Simpson rules on
    every cell of the mapped solver grid.

    :param path: InterpolationPath.
    :param m: Mixture.
    :param op: OrderParameter of the minimizer.
    :param substeps: even number of Simpson subintervals per cell.
    Returns a dictionary with the three terms and the bound.
    """
    if substeps < 2 or substeps % 2:
        raise DomainError('substeps must be an even integer >= 2.')
    xi1 = m.polynomial(1)
    xi2 = m.polynomial(2)
    W = path.weights
    term1 = float(np.sum(W * xi1(path.overlap) * path.shift))

    shift_coeffs = path.coefficients(path.shift)
    Phi0 = np.zeros_like(path.shift)
    C0 = np.zeros_like(path.shift)
    term2 = 0.
    term3 = 0.
    s = np.linspace(0., 1., substeps + 1)
    for seg in path.segments:
        if seg.length <= 0:
            continue
        nodes = _segment_nodes(seg, op.M)
        t = nodes[:-1, None] + np.diff(nodes)[:, None] * s[None, :]
        cumulative = _cumulative_measure(seg, t, op)
        D = seg.direction

        Phi = Phi0 + (t - seg.t0)[..., None, None] * D
        C = C0 + cumulative[..., None, None] * D
        integrand2 = np.sum(W * xi2(Phi) * D * C, axis=(-2, -1))
        term2 += float(np.sum(simpson(integrand2, x=t, axis=1)))

        d_coeffs = path.coefficients(D)
        active = np.abs(d_coeffs) > 0
        A = shift_coeffs - path.coefficients(C0) - cumulative[..., None] * d_coeffs
        if np.any(A[..., active] <= 0):
            raise SingularPathError('Non-positive inverse coefficient on [%g, %g] (min %g).'
                                    % (seg.t0, seg.t1, float(np.min(A[..., active]))))
        integrand3 = np.sum(d_coeffs[active] / A[..., active], axis=-1)
        term3 += float(np.sum(simpson(integrand3, x=t, axis=1)))

        end = _cumulative_measure(seg, np.array(seg.t1), op)
        Phi0 = Phi0 + seg.length * D
        C0 = C0 + float(end) * D

    bound = term1 - term2 + term3
    logger.debug('evaluate_path: terms %.10f %.10f %.10f bound %.10f', term1, term2, term3, bound)
    return {'term1': term1, 'term2': term2, 'term3': term3, 'bound': bound}


def monotonicity_report(path, n_times=50):
    """
    PSD monotonicity of the path at n_times uniform times (smallest eigenvalue of the increments), the trace
    residual |Tr Phi(t) - t| and the endpoint residual |Phi(T) - Q|.
    """
    times = np.linspace(0., path.horizon, n_times)
    values = [path.value(t) for t in times]
    increments = [b - a for a, b in zip(values[:-1], values[1:])]
    min_eig = min(float(np.min(np.linalg.eigvalsh(0.5 * (X + X.T)))) for X in increments)
    trace_residual = max(abs(np.trace(P) - t) for P, t in zip(values, times))
    endpoint_residual = float(np.max(np.abs(values[-1] - path.overlap)))
    return {'min_increment_eig': min_eig, 'trace_residual': float(trace_residual),
            'endpoint_residual': endpoint_residual}
