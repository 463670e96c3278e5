"""Coordinate Bethe ansatz classification of three-state spin chains.

Hamiltonians are dicts in the same JSON shape the command-line tool reads:
either raw entries {"p": [re, im], ..., "v": [[...], [...], [...]]} or a
family preset {"family": "gZF", "branch": 0, "free": {...}}. Complex values
may be given as Python complex numbers.
"""

import json

from . import _core
from ._core import Error, HypothesisError, ModeError, ParseError, SingularError

__all__ = [
    "Error", "HypothesisError", "ModeError", "ParseError", "SingularError",
    "catalog", "classify", "construct", "spectrum", "two_site_matrix", "verify",
]


def _encode(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, dict):
        return {k: _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    return value


def _dump(h):
    return h if isinstance(h, str) else json.dumps(_encode(h))


def classify(h, tol_constraint=1e-9, seed=0x5EED):
    return json.loads(_core.classify(_dump(h), tol_constraint, seed))


def spectrum(h, L=4, M=(1, 2), **options):
    return json.loads(_core.spectrum(_dump(h), L, M[0], M[1], **options))


def verify(h, L=4, M=(1, 2), **options):
    return json.loads(_core.verify(_dump(h), L, M[0], M[1], **options))


def catalog(seed=0x5EED):
    return json.loads(_core.catalog(seed))


def construct(family, free, branch=0):
    """Raw Hamiltonian entries of a family member."""
    return json.loads(_core.construct(family, branch, json.dumps(_encode(free))))


def two_site_matrix(h):
    """The 9x9 two-site matrix as a complex numpy array."""
    return _core.two_site_matrix(_dump(h))
