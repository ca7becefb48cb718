"""Stable and meta-stable contract networks on hypergraphs with path-independent choice."""

from .choice import Linear, Quota, Table, Union, Weak, choose
from .core import Contract, Instance, augment_autarkic, restrict, validate
from .errors import ContractNetError, InputError, PreconditionError, ResourceError, TheoremViolation
from .metastable import is_metastable, minimize, solve_metastable
from .stability import enumerate_stable, is_stable

__all__ = [
    "Contract", "Instance", "Linear", "Weak", "Quota", "Union", "Table", "choose",
    "restrict", "validate", "augment_autarkic", "is_stable", "enumerate_stable",
    "is_metastable", "solve_metastable", "minimize", "ContractNetError", "InputError",
    "PreconditionError", "ResourceError", "TheoremViolation",
]
