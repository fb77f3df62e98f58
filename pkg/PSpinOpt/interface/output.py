# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import json
import logging
import os
import numpy as np

from ..util.io import gen_datestr, version_header, format_value

logger = logging.getLogger(__name__)


def to_serializable(value):
    """
    Converts numpy scalars and arrays to plain Python values; non-finite floats become None.
    """
    if isinstance(value, dict):
        return dict((str(k), to_serializable(v)) for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return [to_serializable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_serializable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value) if np.isfinite(value) else None
    return value


class DataSaver(object):

    def __init__(self, outpath, prjname=''):
        self.outpath = outpath
        self.prjname = prjname

    def filename(self, command, content, extension):
        return os.path.join(self.outpath, self.prjname + '_' + command + '_' + content + '.' + extension)

    def save_data(self, command, content, data):
        pass


class JsonReport(DataSaver):
    """
    Structured results and verdicts, stamped with the creation date and the package version.
    """

    def save_data(self, command, content, data):
        from ..__version__ import __version__
        payload = {'created': gen_datestr(), 'version': __version__, 'command': command,
                   'experiment-name': self.prjname}
        payload.update(to_serializable(data))
        path = self.filename(command, content, 'json')
        with open(path, 'w') as fileout:
            json.dump(payload, fileout, indent=2, sort_keys=True)
        return path


class CsvSeries(DataSaver):
    """
    Series written as a version-stamped comment line, a column line and rows of exact values.

    :param data: dictionary with 'columns' (list of names) and 'rows' (list of lists).
    """

    def save_data(self, command, content, data):
        path = self.filename(command, content, 'csv')
        with open(path, 'w') as fileout:
            fileout.write(version_header(command) + '\n')
            fileout.write(','.join(data['columns']) + '\n')
            for row in data['rows']:
                fileout.write(','.join(format_value(v) for v in row) + '\n')
        return path


class PlotSaver(DataSaver):
    """
    Saves a matplotlib figure as png.

    :param data: dictionary with the 'figure'.
    """

    def save_data(self, command, content, data):
        import matplotlib.pyplot as plt
        path = self.filename(command, content, 'png')
        figure = data['figure']
        figure.savefig(path)
        plt.close(figure)
        return path


class OutputEng(object):

    _support_savers = {
                            'json': JsonReport,
                            'csv': CsvSeries,
                            'plot': PlotSaver,
                            }

    def __init__(self, config, outpath=None):
        self.config = config
        self.outpath = os.getcwd() if outpath is None else outpath
        if not os.path.isdir(self.outpath):
            os.makedirs(self.outpath)
        self.plots = bool(config['output']['plots'])
        self.data_savers = dict((kind, saver(self.outpath, config['experiment-name']))
                                for kind, saver in self._support_savers.items())
        self.written = []

    def save(self, kind, command, content, data):
        """
        Dispatches *data* to the saver of type *kind*; plots are skipped unless enabled in the config.
        """
        if kind == 'plot' and not self.plots:
            return None
        path = self.data_savers[kind].save_data(command, content, data)
        self.written.append(path)
        logger.info('Wrote %s', path)
        return path
