"""Heterodyne multiphoton squeezed states of two bosonic modes.

Submodules
----------
fock         truncated two-mode Fock space, ladder operators, ``exp_apply``
canonical    transformation parameters and canonicity checks
hamiltonian  transformed modes and the four-photon Hamiltonian
states       closed-form wavefunctions
statistics   photon-number distributions, moments and sweeps
oracle       brute-force Fock-space constructions of the same states
processes    energy-conserving multiphoton terms and pump designs
cli          ``hempss`` command-line entry point
"""

from .canonical import CanonicalBranch, CanonicalParams, validate
from .errors import HempssError
from .fock import FockCutoff, FockOperator, FockState
from .numerics import QuadratureConfig, QuadratureRule

__all__ = [
    "CanonicalBranch",
    "CanonicalParams",
    "FockCutoff",
    "FockOperator",
    "FockState",
    "HempssError",
    "QuadratureConfig",
    "QuadratureRule",
    "validate",
]

__version__ = "0.1.0"
