# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import numpy as np
import matplotlib.pyplot as plt


def plot_order_parameter(op, report):
    '''
    zhat and zeta of a minimizer (top) with G and g (bottom); the points of T are marked on g.
    '''
    fig = plt.figure(figsize=(8, 7))
    plt.subplot(2, 1, 1)
    plt.plot(op.grid, op.zhat, 'b-', lw=2, label='zhat')
    plt.plot(op.grid, op.zeta_nodes, 'r-', lw=1, label='zeta')
    plt.xlabel('q')
    plt.legend(loc='upper left')
    plt.grid(True)
    plt.subplot(2, 1, 2)
    plt.plot(report.grid, report.G, 'k-', lw=1, label='G')
    plt.plot(report.grid, report.g, 'g-', lw=2, label='g')
    plt.plot(report.grid[report.T_indices], report.g[report.T_indices], 'g.', markersize=3)
    plt.xlabel('q')
    plt.legend(loc='upper left')
    plt.grid(True)
    return fig


def plot_spectrum(rec, pred=None, bins=40):
    '''
    Histogram of the spherical Hessian spectrum of a record, with the predicted edges when given.
    '''
    fig = plt.figure(figsize=(8, 5))
    plt.hist(rec.eigs, bins=bins, density=True, color='b', alpha=0.6)
    if pred is not None:
        plt.axvline(x=pred.lambda_plus, color='r', label='lambda_+')
        plt.axvline(x=pred.lambda_minus, color='r', ls='--', label='lambda_-')
        plt.legend(loc='upper left')
    plt.xlabel('eigenvalue')
    plt.title('Spherical Hessian spectrum (E/N = %.4f)' % rec.energy_per_N)
    plt.grid(True)
    return fig


def plot_replica_slopes(ladder):
    '''
    Difference quotients of both bounds along the eps ladder against the first-order targets.
    '''
    eps = np.array([r['eps'] for r in ladder['rows']])
    fig = plt.figure(figsize=(10, 4))
    for k, (key, target) in enumerate([('slope2', 'two_replica'), ('slope3', 'three_replica')]):
        plt.subplot(1, 2, k + 1)
        plt.semilogx(eps, [r[key] for r in ladder['rows']], 'bo-', label='difference quotient')
        plt.axhline(y=ladder['targets'][target], color='r', label='target')
        plt.xlabel('eps')
        plt.title(target.replace('_', '-'))
        plt.legend(loc='best')
        plt.grid(True)
    return fig


def plot_overlap_decay(summary):
    '''
    Mean overlap R(x_0, x_t) with one standard error band.
    '''
    t = np.asarray(summary['t'])
    mean = np.asarray(summary['mean_R'])
    err = np.asarray(summary['stderr_R'])
    fig = plt.figure(figsize=(8, 5))
    keep = t > 0
    plt.semilogx(t[keep], mean[keep], 'b-', lw=2)
    plt.fill_between(t[keep], (mean - err)[keep], (mean + err)[keep], color='b', alpha=0.2)
    plt.xlabel('t')
    plt.ylabel('R(x_0, x_t)')
    plt.ylim(min(0., float(np.min(mean))) - 0.05, 1.05)
    plt.grid(True)
    return fig
