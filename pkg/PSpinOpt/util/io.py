# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)


def gen_datestr():
    """
    Returns a string with the yy/mm/dd and  hh/mm/ss
    """
    from datetime import datetime
    dt = datetime.now()
    return str(dt.year)+'.'+str(dt.month)+'.'+str(dt.day)+'_'+str(dt.hour)+'.'+str(dt.minute)+'.'+str(dt.second)


def version_header(command):
    """
    First line of every CSV series: a comment carrying the package version and the command.
    """
    from ..__version__ import __version__
    return '# PSpinOpt ' + __version__ + ' ' + command


def format_value(value):
    """
    Exact textual form of a CSV cell: repr for floats, str otherwise, empty for None.
    """
    import numpy as np
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)
