"""Stratified reduction of abelian weight systems.

Thin convenience layer over the compiled core: inputs and outputs cross the
boundary as JSON documents, exposed here as plain dicts.
"""

import json as _json

from _core import IntegrityError, InputError, links, schema_version, stratify, verify

__all__ = [
    "IntegrityError",
    "InputError",
    "schema_version",
    "stratify_dict",
    "links_dict",
    "verify_dict",
    "stratify",
    "links",
    "verify",
]


def _to_text(system):
    if isinstance(system, str):
        return system
    return _json.dumps(system)


def stratify_dict(system):
    """Partition of the quotient for a weight-system dict (or JSON text)."""
    return _json.loads(stratify(_to_text(system)))


def links_dict(system, max_depth=-1):
    """Recursive link tree for a weight-system dict (or JSON text)."""
    return _json.loads(links(_to_text(system), max_depth))


def verify_dict(system, samples=20000, seed=1, eps_scale=3.0):
    """Monte Carlo verification report for a weight-system dict (or JSON text)."""
    return _json.loads(verify(_to_text(system), samples, seed, eps_scale))
