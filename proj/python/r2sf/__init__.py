"""Rank-two presemifields, their linear sets and known-family comparison.

Thin wrappers over the C++ extension; JSON results are decoded to dicts.
Family parameters are passed as keyword arguments in element text syntax
("0", "g^k" or "[c0,c1,...]"), e.g. ``nuclei("dA", 3, 1, 3, a="g")``.
"""

import json

from . import _r2sf
from ._r2sf import (
    CapExceeded,
    ConstraintViolation,
    InternalError,
    InvalidArgument,
    REPORT_SCHEMA_VERSION,
    suite_names,
)

__all__ = [
    "CapExceeded",
    "ConstraintViolation",
    "InternalError",
    "InvalidArgument",
    "REPORT_SCHEMA_VERSION",
    "distinguish",
    "field_info",
    "nuclei",
    "run",
    "spread",
    "suite_names",
    "weight_spectrum",
    "zero_divisor_free",
]


def field_info(p, h, n):
    return json.loads(_r2sf.field_info(p, h, n))


def spread(family, p, h, n, **params):
    """Entries m11, m12, m21, m22 as (x-part, y-part) q-polynomial strings."""
    return _r2sf.spread(family, p, h, n, params)


def zero_divisor_free(family, p, h, n, workers=1, **params):
    return _r2sf.zero_divisor_free(family, p, h, n, params, workers)


def nuclei(family, p, h, n, method="spreadset", seed=0, **params):
    return json.loads(_r2sf.nuclei(family, p, h, n, params, method, seed))


def weight_spectrum(family, p, h, n, workers=1, **params):
    """[x_1, ..., x_n] of the associated linear set."""
    return _r2sf.weight_spectrum(family, p, h, n, params, workers)


def distinguish(family, p, h, n, mode="exhaustive", workers=1, **params):
    return json.loads(_r2sf.distinguish(family, p, h, n, params, mode, workers))


def run(command, family="dA", p=3, h=1, n=3, mode="exhaustive", nuclei="spreadset",
        derive="", suite="", cap=100000000, seed=0, workers=1, **params):
    """Runs a CLI command in-process; returns (exit_code, report dict)."""
    code, doc = _r2sf.run(command, family, p, h, n, params, mode, nuclei, derive, suite,
                          cap, seed, workers)
    return code, json.loads(doc)
