"""Dilithium signatures with a branchless sparse multiplication signing path.

The signing-side products c*s1 and c*s2 are computed from an index-encoded
challenge and a widened (-s, s) secret layout using packed byte-lane
kernels, optionally fused with the rejection norm checks; the NTT remains
available as a backend and as a correctness oracle.
"""

from .params import LEVELS, ParameterSet, param_set
from .scheme import Backend, Dilithium, SignTrace, default_backend, keygen, sign, verify

__version__ = "0.1.0"

__all__ = [
    "Backend",
    "Dilithium",
    "LEVELS",
    "ParameterSet",
    "SignTrace",
    "default_backend",
    "keygen",
    "param_set",
    "sign",
    "verify",
    "__version__",
]
