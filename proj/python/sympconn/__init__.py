"""Exact local computations on Fedosov manifolds.

Charts and point data are passed as the JSON text of the chart and point
file formats. Results are plain Python values with rationals as strings.
"""

import functools
import json

from . import _core

__all__ = [
    "SympconnError",
    "check",
    "curvature",
    "ricci",
    "sectional",
    "normal_tensors",
    "realize",
    "functional_dims",
    "run_cli",
]


class SympconnError(Exception):
    """A library error; `info` holds the same fields as the CLI error JSON."""

    def __init__(self, info):
        super().__init__(info.get("message", ""))
        self.info = info
        self.kind = info.get("kind")
        self.condition = info.get("condition")


def _translated(fn, decode=True):
    @functools.wraps(fn)
    def call(*args, **kwargs):
        try:
            result = fn(*args, **kwargs)
        except _core.Error as e:
            raise SympconnError(json.loads(str(e))["error"]) from None
        return json.loads(result) if decode else result

    return call


def _text(chart):
    return chart if isinstance(chart, str) else json.dumps(chart)


def check(chart, order=None):
    return _translated(_core.check)(_text(chart), order)


def curvature(chart, order=None, at_base=False):
    return _translated(_core.curvature)(_text(chart), order, at_base)


def ricci(chart, order=None):
    return _translated(_core.ricci)(_text(chart), order)


def sectional(chart, x, y):
    return _translated(_core.sectional)(_text(chart), [str(v) for v in x], [str(v) for v in y])


def normal_tensors(chart, rmax=None, order=None):
    return _translated(_core.normal_tensors)(_text(chart), rmax, order)


def realize(point_data, order=None):
    """Chart file (as a dict) realizing the given curvature data."""
    return _translated(_core.realize)(_text(point_data), order)


def functional_dims(n):
    return _translated(_core.functional_dims)(n)


def run_cli(args):
    """Run the command line tool in-process; returns (exit_code, stdout, stderr)."""
    return _core.run_cli(list(args))
