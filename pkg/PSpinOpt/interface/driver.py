# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import copy
import logging
import os
import numpy as np

from ..core.errors import InvalidVariableNameError
from ..core.mixture import Mixture, predicates, e_infinity_pm
from ..util.general import get_workers

logger = logging.getLogger(__name__)

COMMANDS = ('solve', 'predict', 'sample-landscape', 'replica-bound', 'langevin', 'report')

PASS, FAIL, NOT_REACHED = 'pass', 'fail', 'not-reached'


def _verdict(condition):
    return PASS if condition else FAIL


class PSpinDriver(object):
    """
    The class for driving solver, landscape, bound and dynamics runs according to the configuration.

    :param config: validated configuration (defaults when None).
    :param outputEng: OutputEng receiving the artifacts (nothing is written when None).
    :param workers: number of worker processes, read from the environment when None.
    """

    def __init__(self, config=None, outputEng=None, workers=None):

        if config is None:
            from .config_parser import default_config
            self.config = copy.deepcopy(default_config)
        else:
            self.config = config
        self.outputEng = outputEng
        self.workers = get_workers() if workers is None else workers
        self._solution = None

    def _save(self, kind, command, content, data):
        if self.outputEng is not None:
            return self.outputEng.save(kind, command, content, data)

    def _get_mixture(self):
        """
        Imports the mixture.
        """
        return Mixture.fromConfig(self.config['mixture'])

    def _get_solution(self):
        """
        Minimizer of the zero-temperature functional with its stationarity report and prediction (cached).
        """
        if self._solution is None:
            from ..parisi.zero_temperature import minimize_Q, stationarity_report
            m = self._get_mixture()
            s = self.config['solver']
            op, pred = minimize_Q(m, M=int(s['grid-size']), tol=s['tolerance'], max_iter=int(s['maximum-iterations']),
                                  method=s['method'], tol_rsb=s['tol-rsb'])
            self._solution = (m, op, pred, stationarity_report(op, m))
        return self._solution

    def _get_instance(self, seed, N=None):
        """
        Samples a Hamiltonian instance.
        """
        from ..landscape.hamiltonian import sample, save_tensors
        c = self.config['landscape']
        N = int(c['N'] if N is None else N)
        h = sample(N, self._get_mixture(), seed, budget=c['budget'])
        if c['dump-tensors'] and self.outputEng is not None:
            path = os.path.join(self.outputEng.outpath, self.config['experiment-name'] + '_tensors_' + str(seed) + '.bin')
            save_tensors(h, path)
        return h

    def run_solve(self):
        from ..parisi.zero_temperature import evaluate_Q
        m, op, pred, report = self._get_solution()
        form_a, form_b = evaluate_Q(op, m)
        result = {'mixture': m.to_config(), 'gs': pred.gs, 'form_b': form_b, 'L': op.L, 'zhat1': op.zhat1,
                  'full_rsb_endpoint': pred.full_rsb_endpoint, 'prediction': pred.to_dict(),
                  'stationarity': report.to_dict(), 'grid_size': op.M}
        rows = [[q, z, zeta, G, g] for q, z, zeta, G, g in zip(op.grid, op.zhat, op.zeta_nodes, report.G, report.g)]
        self._save('csv', 'solve', 'order_parameter', {'columns': ['q', 'zhat', 'zeta', 'G', 'g'], 'rows': rows})

        betas = self.config['positive-temperature']['betas']
        if betas:
            result['positive_temperature'] = self._positive_temperature(m, op, pred, betas)
        if self.outputEng is not None and self.outputEng.plots:
            from ..plotting.plots_parisi import plot_order_parameter
            self._save('plot', 'solve', 'order_parameter', {'figure': plot_order_parameter(op, report)})
        self._save('json', 'solve', 'summary', result)
        return result

    def _positive_temperature(self, m, op, pred, betas):
        from ..parisi.positive_temperature import minimize_cs_positive_temp, zero_temperature_distance
        c = self.config['positive-temperature']
        rows = []
        for beta in betas:
            x_op, F = minimize_cs_positive_temp(m, beta, M=int(c['grid-size']), tol=c['tolerance'],
                                                max_iter=int(c['maximum-iterations']), method=c['method'])
            distance = zero_temperature_distance(x_op, op)
            rows.append([float(beta), F, F / beta, pred.gs - F / beta, x_op.q_hat,
                         distance['l1_zeta'], distance['sup_zhat']])
        columns = ['beta', 'F', 'F_over_beta', 'gap_to_gs', 'q_hat', 'l1_zeta', 'sup_zhat']
        self._save('csv', 'solve', 'positive_temperature', {'columns': columns, 'rows': rows})
        return [dict(zip(columns, row)) for row in rows]

    def run_predict(self):
        from ..parisi.zero_temperature import gs_derivative, t_interval_at_one, full_rsb_density_profile
        m, op, pred, report = self._get_solution()
        has_interval, width = t_interval_at_one(report)
        density = full_rsb_density_profile(op, m, report)
        finite = density[np.isfinite(density)]
        result = {'mixture': m.to_config(), 'prediction': pred.to_dict(), 'gs': pred.gs,
                  'e_inf_minus': pred.e_inf_minus, 'e_inf_plus': pred.e_inf_plus,
                  'gs_derivative': gs_derivative(m, op), 'r': pred.r, 'predicates': predicates(m),
                  'stationarity': report.to_dict(),
                  'full_rsb': {'t_interval_at_one': has_interval, 'interval_width': width,
                               'density_min': float(np.min(finite)) if finite.size else None,
                               'density_max': float(np.max(finite)) if finite.size else None}}
        self._save('json', 'predict', 'summary', result)
        return result

    def run_sample_landscape(self):
        from ..landscape.ascent import run_restarts
        from ..landscape.checks import bulk_edge_check, prediction_check, best_records
        from ..landscape.clustering import cluster_level_set, level_set
        m, op, pred, _ = self._get_solution()
        c = self.config['landscape']
        even = predicates(m)['is_even']
        records = []
        clusters = []
        searches = []
        for instance in range(int(c['instances'])):
            seed = int(self.config['seed']) + instance
            h = self._get_instance(seed)
            recs = run_restarts(h, int(c['restarts']), seed=seed, workers=self.workers,
                                tol_grad=c['tol-grad'], max_steps=int(c['max-steps']))
            records.extend(recs)
            deep = best_records([r for r in recs if r.converged] or recs, c['deep-fraction'])
            # with an energy window the clustered set is the level set around GS
            pool = deep if c['delta'] is None else level_set([r for r in recs if r.converged], c['delta'], pred.gs)
            if len(pool) >= 2:
                clusters.append(cluster_level_set(pool, threshold=c['cluster-threshold'], fold=even))
            if even and c['pair-eps']:
                searches.extend(self._pair_searches(h, deep[0], c))

        rows = [r.to_row(c['k-frac']) for r in records]
        columns = ['seed', 'restart', 'energy_per_N', 'radial', 'lambda_1', 'lambda_k', 'lambda_min', 'converged']
        self._save('csv', 'sample-landscape', 'records', {'columns': columns, 'rows': rows})

        converged = [r for r in records if r.converged]
        deepest = best_records(converged or records, c['deep-fraction'])
        result = {'mixture': m.to_config(), 'prediction': pred.to_dict(), 'count': len(records),
                  'converged': len(converged), 'best_energy': max(r.energy_per_N for r in records),
                  'gap_to_gs': pred.gs - max(r.energy_per_N for r in records),
                  'bulk_edges': [bulk_edge_check(r, m, c['k-frac']) for r in deepest],
                  'prediction_check': prediction_check(converged, pred, c['delta'], is_even=even),
                  'max_lambda_1_converged': max([r.lambda_1 for r in converged]) if converged else None,
                  'clusters': [dict((k, v) for k, v in cl.items() if k != 'labels') for cl in clusters],
                  'pair_searches': searches}
        if self.outputEng is not None and self.outputEng.plots:
            from ..plotting.plots_parisi import plot_spectrum
            self._save('plot', 'sample-landscape', 'spectrum', {'figure': plot_spectrum(deepest[0], pred)})
        self._save('json', 'sample-landscape', 'summary', result)
        return result

    def _pair_searches(self, h, record, c):
        from ..landscape.searches import constrained_pair_search, constrained_triple_search
        start = [(record.sigma, None)]
        out = []
        for eps in c['pair-eps']:
            pair = constrained_pair_search(h, eps, starts=start, seed=h.seed)
            entry = {'seed': h.seed, 'eps': eps, 'pair_value': pair['value'], 'pair_converged': pair['converged']}
            if eps < 0.25:
                triple = constrained_triple_search(h, eps, starts=start, seed=h.seed)
                entry.update({'triple_value': triple['value'], 'triple_converged': triple['converged'],
                              'overlap_residual': triple['overlap_residual']})
            out.append(entry)
        return out

    def run_replica_bound(self):
        from ..bounds.replica import bound_ladder, matrix_identities_check, phi_monotonicity_check
        m, op, pred, _ = self._get_solution()
        c = self.config['replica-bound']
        ladder = bound_ladder(m, op, c['eps-ladder'], int(c['substeps']))
        identities = matrix_identities_check()
        monotonicity = phi_monotonicity_check(m, op, max(c['eps-ladder']))
        targets = ladder['targets']
        rows = [[r['eps'], r['bound2'], r['bound3'], r['slope2'], r['slope3'], targets['two_replica'],
                 targets['three_replica'], ladder['refinement']] for r in ladder['rows']]
        columns = ['eps', 'bound2', 'bound3', 'slope2', 'slope3', 'target2', 'target3', 'residual']
        self._save('csv', 'replica-bound', 'ladder', {'columns': columns, 'rows': rows})
        result = {'mixture': m.to_config(), 'gs': pred.gs, 'ladder': ladder, 'identities': identities,
                  'monotonicity': monotonicity}
        if self.outputEng is not None and self.outputEng.plots:
            from ..plotting.plots_parisi import plot_replica_slopes
            self._save('plot', 'replica-bound', 'slopes', {'figure': plot_replica_slopes(ladder)})
        self._save('json', 'replica-bound', 'summary', result)
        return result

    def run_langevin(self):
        from ..dynamics.langevin import LangevinConfig, run_paths
        from ..landscape.ascent import run_restarts
        from ..landscape.hamiltonian import random_point, tensor_rng
        c = self.config['langevin']
        seed = int(self.config['seed'])
        h = self._get_instance(seed, N=c['N'])
        if c['start'] == 'ascent':
            recs = run_restarts(h, int(c['start-restarts']), seed=seed, workers=self.workers)
            x0 = max(recs, key=lambda r: r.energy_per_N).sigma
        elif c['start'] == 'random':
            x0 = random_point(h.N, tensor_rng(seed, 0))
        else:
            raise InvalidVariableNameError('Invalid langevin start selected: ' + str(c['start']) + '.')
        cfg = LangevinConfig(h, x0, c['beta'], c['horizon'], dt=c['dt'], seed=seed, records=int(c['records']),
                             record_times=c['record-times'])
        summary = run_paths(cfg, int(c['paths']), workers=self.workers)
        rows = [[t, mr, se, me] for t, mr, se, me in zip(summary['t'], summary['mean_R'], summary['stderr_R'],
                                                          summary['mean_energy'])]
        self._save('csv', 'langevin', 'overlap', {'columns': ['t', 'mean_R', 'stderr_R', 'mean_energy'], 'rows': rows})
        result = {'mixture': self._get_mixture().to_config(), 'beta': cfg.beta, 'dt': cfg.dt, 'N': h.N,
                  'paths': int(c['paths']), 'min_mean_R': summary['min_mean_R'],
                  'start_energy': h.energy(cfg.x0) / h.N, 'series': summary}
        if self.outputEng is not None and self.outputEng.plots:
            from ..plotting.plots_parisi import plot_overlap_decay
            self._save('plot', 'langevin', 'overlap', {'figure': plot_overlap_decay(summary)})
        self._save('json', 'langevin', 'summary', result)
        return result

    def _search_bound_verdicts(self, m, op, searches, slack):
        """
        Best pair and triple values against half of the two- and three-replica bounds at the same eps.
        """
        from ..bounds.replica import two_replica_bound, three_replica_bound
        pair_ok, triple_ok = [], []
        for entry in searches:
            eps = entry['eps']
            if eps < 0.3:
                pair_ok.append(entry['pair_value'] <= two_replica_bound(m, op, eps) / 2. + slack)
            if 'triple_value' in entry and eps < 0.2:
                triple_ok.append(entry['triple_value'] <= three_replica_bound(m, op, eps) / 2. + slack)
        return {'pair-search-bound': _verdict(all(pair_ok)) if pair_ok else NOT_REACHED,
                'triple-search-bound': _verdict(all(triple_ok)) if triple_ok else NOT_REACHED}

    def run_report(self):
        """
        Cross-joins the solver predictions with the enabled landscape, bound and dynamics runs into a verdict
        table: every claim is 'pass', 'fail' or 'not-reached'.
        """
        from ..parisi.zero_temperature import gs_derivative, t_interval_at_one
        m, op, pred, report = self._get_solution()
        tol = self.config['report']
        include = tol['include']
        even = predicates(m)['is_even']
        verdicts = {}

        verdicts['stationarity'] = _verdict(report.max_residual <= tol['stationarity-tol'])
        verdicts['lambda-plus-nonpositive'] = _verdict(pred.lambda_plus <= 1e-6)
        if pred.e_inf_minus is None:
            verdicts['gs-above-e-inf-minus'] = NOT_REACHED
            verdicts['gs-below-e-inf-plus'] = NOT_REACHED
        else:
            verdicts['gs-above-e-inf-minus'] = _verdict(pred.gs >= pred.e_inf_minus - tol['threshold-tol'])
            verdicts['gs-below-e-inf-plus'] = (_verdict(pred.gs <= pred.e_inf_plus + tol['threshold-tol'])
                                               if pred.full_rsb_endpoint else NOT_REACHED)
        derivative = gs_derivative(m, op)
        verdicts['envelope-identity'] = _verdict(abs(derivative - pred.r) <= tol['envelope-tol'] * (1. + abs(pred.r)))
        # a T-interval ending at q=1 forces the full-RSB endpoint
        verdicts['full-rsb-justification'] = (_verdict(pred.full_rsb_endpoint) if t_interval_at_one(report)[0]
                                              else NOT_REACHED)

        sections = {}
        for claim in ('radial-derivative', 'bulk-edge', 'outlier-edge', 'two-replica-slope', 'three-replica-slope',
                      'pair-search-bound', 'triple-search-bound', 'langevin-plateau'):
            verdicts[claim] = NOT_REACHED

        if 'landscape' in include:
            landscape = self.run_sample_landscape()
            sections['landscape'] = {'best_energy': landscape['best_energy'], 'gap_to_gs': landscape['gap_to_gs']}
            check = landscape['prediction_check']
            if check['count'] > 0:
                verdicts['radial-derivative'] = _verdict(check['max_radial_gap'] <= tol['radial-tol'])
                verdicts['bulk-edge'] = _verdict(check['max_bulk_gap'] <= tol['edge-tol'])
                if even:
                    verdicts['outlier-edge'] = _verdict(check['max_lambda_1'] <= pred.lambda_plus + tol['edge-tol'])
            if landscape['pair_searches']:
                verdicts.update(self._search_bound_verdicts(m, op, landscape['pair_searches'], tol['bound-tol']))

        if 'replica-bound' in include and even:
            bounds = self.run_replica_bound()
            ladder = bounds['ladder']
            for claim, key, target in (('two-replica-slope', 'slope2', 'two_replica'),
                                       ('three-replica-slope', 'slope3', 'three_replica')):
                expected = ladder['targets'][target]
                allowed = max(tol['slope-rtol'] * abs(expected), tol['slope-atol'])
                verdicts[claim] = _verdict(abs(ladder[key] - expected) <= allowed)
            sections['replica-bound'] = {'slope2': ladder['slope2'], 'slope3': ladder['slope3'],
                                         'targets': ladder['targets']}

        if 'langevin' in include:
            dynamics = self.run_langevin()
            sections['langevin'] = {'min_mean_R': dynamics['min_mean_R']}
            if even and pred.lambda_plus < 0:
                verdicts['langevin-plateau'] = _verdict(dynamics['min_mean_R'] >= tol['plateau'])

        result = {'mixture': m.to_config(), 'prediction': pred.to_dict(), 'gs_derivative': derivative,
                  'e_inf': e_infinity_pm(m), 'verdicts': verdicts, 'sections': sections}
        self._save('json', 'report', 'verdicts', result)
        return result

    def run(self, command):
        """
        Runs *command* and returns its result dictionary.
        """
        runners = {'solve': self.run_solve, 'predict': self.run_predict,
                   'sample-landscape': self.run_sample_landscape, 'replica-bound': self.run_replica_bound,
                   'langevin': self.run_langevin, 'report': self.run_report}
        if command not in runners:
            raise InvalidVariableNameError('Invalid command selected: ' + str(command) + '.')
        logger.info('Running %s for %s', command, self.config['experiment-name'])
        return runners[command]()
