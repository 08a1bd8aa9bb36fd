"""Python front end for the eccprove C++ library.

Bit vectors are strings of '0'/'1' with index 0 first. Configuration keys
match the CLI's JSON config (family, m, t, k, plan, fixed_data, ...).
"""

import json

from . import _eccprove
from ._eccprove import BudgetExceeded, InvalidInput, ParseError

__all__ = [
    "BudgetExceeded",
    "InvalidInput",
    "ParseError",
    "code",
    "count_patterns",
    "decode",
    "encode",
    "min_distance",
    "oracle",
    "solve",
    "verify",
]


def _cfg(config):
    return json.dumps(config or {})


def count_patterns(n, max_weight):
    """Number of error patterns of weight 1..max_weight in n bits, exact."""
    return int(_eccprove.count_patterns(n, max_weight))


def code(config=None):
    return json.loads(_eccprove.code_json(_cfg(config)))


def min_distance(config=None):
    return _eccprove.min_distance(_cfg(config))


def encode(config, data):
    return _eccprove.encode(_cfg(config), data)


def decode(config, received):
    """Returns (flag, data, ecc, syndrome); flag 0 is no_err, w is err_w."""
    return _eccprove.decode(_cfg(config), received)


def verify(config=None):
    """Builds and proves a verification plan; returns the report dict."""
    return json.loads(_eccprove.verify_json(_cfg(config)))


def oracle(config=None):
    return json.loads(_eccprove.oracle_json(_cfg(config)))


def solve(clauses, num_vars=0, budget=0):
    """DIMACS-style integer clauses. Returns (status, model)."""
    return _eccprove.solve([list(c) for c in clauses], num_vars, budget)
