"""Exact symbolic engine for gauging two-dimensional sigma models on Dirac
structures: twisted Poisson verification, symmetry algebras, equivariant
extensions, and emission of the resulting action functionals.

The heavy lifting happens in the `_dsigma` extension module; this wrapper
decodes its JSON reports into plain dictionaries.
"""

import json

from _dsigma import Model, ModelParseError, parse_model, run as _run

__all__ = [
    "Model",
    "ModelParseError",
    "parse_model",
    "run",
    "check_poisson",
    "check_dirac",
    "symmetries",
    "extend",
    "gauge",
]


def run(model, command, sub="", degree=-1, algebra="g", assert_orbit=False,
        emit="json", samples=20, seed=1):
    """Run a command against a parsed model.

    Returns (exit_code, report) where report is a dict for JSON output and a
    string for LaTeX output.  Exit codes: 0 pass, 1 fail/none, 3 inconclusive.
    """
    code, payload = _run(model, command, sub, degree, algebra, assert_orbit,
                         emit, samples, seed)
    if emit == "latex":
        return code, payload
    return code, json.loads(payload)


def check_poisson(model, **kw):
    return run(model, "check", sub="poisson", **kw)


def check_dirac(model, **kw):
    return run(model, "check", sub="dirac", **kw)


def symmetries(model, degree=-1, algebra="g", **kw):
    return run(model, "symmetries", degree=degree, algebra=algebra, **kw)


def extend(model, degree=-1, algebra="g", **kw):
    return run(model, "extend", degree=degree, algebra=algebra, **kw)


def gauge(model, degree=-1, algebra="g", emit="json", **kw):
    return run(model, "gauge", degree=degree, algebra=algebra, emit=emit, **kw)
