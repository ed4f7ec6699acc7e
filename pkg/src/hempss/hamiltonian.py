"""Transformed mode operators and the four-photon Hamiltonian in Fock space.

For ``F(Z) = Z**2`` the diagonal Hamiltonian ``H = b1^dag b1 + b2^dag b2``
expands into

    H = A0 + B0 (n1 + n2) + C0 (a1^dag2 a1^2 + a2^dag2 a2^2) + K n1 n2
        + [D1 a1^dag a2^dag + D2 a1^dag2 a2 + D2' a1 a2^dag2 + D3 a1^dag3
           + D3' a2^dag3 + D4 a1^dag2 a2^dag2
           + D5 (a1^dag2 a1 a2^dag + a1^dag a2^dag2 a2) + h.c.]

The cross-Kerr coefficient is ``K = 4 C0 = 2 |gamma|^2``; that is what the
operator product produces (see ``test_hamiltonian.py``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from . import _io
from .canonical import CanonicalBranch, detect_branch, require_canonical
from .errors import BranchError, InvalidCutoffError, UnsupportedOrderError
from .fock import FockOperator, identity, make_mode_operators

CROSS_KERR_FACTOR = 4.0


@dataclass(frozen=True)
class HamiltonianCoefficients:
    A0: float
    B0: float
    C0: float
    D1: complex
    D2: complex
    D2p: complex
    D3: complex
    D3p: complex
    D4: complex
    D5: complex

    def as_array(self):
        return np.array([complex(getattr(self, f.name)) for f in fields(self)])

    def max_abs_diff(self, other):
        return float(np.max(np.abs(self.as_array() - other.as_array())))

    def to_dict(self):
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = float(v) if f.name in ("A0", "B0", "C0") else [float(v.real), float(v.imag)]
        return out

    def to_json(self):
        """Coefficient dump, floats at 17 significant digits."""
        return _io.dumps17(self.to_dict())

    @classmethod
    def from_dict(cls, data):
        kw = {}
        for f in fields(cls):
            v = data[f.name]
            kw[f.name] = float(v) if f.name in ("A0", "B0", "C0") else complex(v[0], v[1])
        return cls(**kw)


@dataclass(frozen=True, eq=False)
class TransformedModes:
    b1: FockOperator
    b2: FockOperator
    params: object
    cutoff: object

    @property
    def safe_total(self):
        """Largest ``n1 + n2`` where products of two transformed modes are exact."""
        margin = 2 * (2 * max(self.params.order, 1))
        return min(self.cutoff.n1_max, self.cutoff.n2_max) - margin

    def commutator_errors(self, max_total=None):
        """Projected max-abs deviations of the four canonical commutators."""
        k = self.safe_total if max_total is None else max_total
        b1, b2 = self.b1, self.b2
        b1d, b2d = b1.dag(), b2.dag()
        eye = identity(self.cutoff)
        return {
            "[b1,b1+]-I": ((b1 @ b1d) - (b1d @ b1) - eye).projected_max_abs(k),
            "[b2,b2+]-I": ((b2 @ b2d) - (b2d @ b2) - eye).projected_max_abs(k),
            "[b1,b2]": ((b1 @ b2) - (b2 @ b1)).projected_max_abs(k),
            "[b1,b2+]": ((b1 @ b2d) - (b2d @ b1)).projected_max_abs(k),
        }

    def diagonal_hamiltonian(self):
        return (self.b1.dag() @ self.b1) + (self.b2.dag() @ self.b2)


def heterodyne_operator(p, cutoff):
    """``Z = (e^{-i theta2} a2 + e^{i theta1} a1^dag) / sqrt(2)``."""
    a1, a2 = make_mode_operators(cutoff)
    return (np.exp(-1j * p.theta2) * a2 + np.exp(1j * p.theta1) * a1.dag()) / math.sqrt(2.0)


def build_transformed_modes(p, cutoff, tol=1e-10):
    require_canonical(p, tol)
    if 2 * p.order + 2 > min(cutoff.n1_max, cutoff.n2_max):
        raise InvalidCutoffError(
            f"cutoff {cutoff.as_list()} too small for order {p.order}: need >= {2 * p.order + 2}"
        )
    a1, a2 = make_mode_operators(cutoff)
    Z = heterodyne_operator(p, cutoff)
    Zd = Z.dag()
    mu, nu = p.mu, p.nu
    b1 = mu * a1 + nu * a2.dag() + p.gamma * (Z ** p.order)
    b2 = mu * a2 + nu * a1.dag() + p.chi * (Zd ** p.order)
    return TransformedModes(b1=b1, b2=b2, params=p, cutoff=cutoff)


def generic_coefficients(p):
    if p.order != 2:
        raise UnsupportedOrderError(f"closed-form coefficients exist only for order 2, got {p.order}")
    g = p.gamma_mod
    mu, nu = p.mu, p.nu
    muc, nuc = mu.conjugate(), nu.conjugate()
    t1, t2, d1, d2 = p.theta1, p.theta2, p.delta1, p.delta2
    e = lambda x: np.exp(1j * x)
    return HamiltonianCoefficients(
        A0=g**2 + 2 * abs(nu) ** 2,
        B0=abs(mu) ** 2 + abs(nu) ** 2 + 2 * g**2,
        C0=0.5 * g**2,
        D1=complex(2 * muc * nu + 2 * g**2 * e(t1 + t2)),
        D2=complex(g * e(t1) * (0.5 * e(t1 - d2) * mu + e(-(t2 + d2)) * nu + e(-(t2 - d1)) * muc + 0.5 * e(t1 + d1) * nuc)),
        D2p=complex(g * e(t2) * (0.5 * e(t2 - d1) * mu + e(-(t1 + d1)) * nu + e(-(t1 - d2)) * muc + 0.5 * e(t2 + d2) * nuc)),
        D3=complex(0.5 * g * e(2 * t1) * (e(d1) * muc + e(-d2) * nu)),
        D3p=complex(0.5 * g * e(2 * t2) * (e(d2) * muc + e(-d1) * nu)),
        D4=complex(0.5 * g**2 * e(2 * (t1 + t2))),
        D5=complex(g**2 * e(t1 + t2)),
    )


def specialized_coefficients(p):
    """Closed forms valid on ``delta1 + delta2 - phi = 0``, ``theta1 + theta2 - phi = pi``."""
    if p.order != 2:
        raise UnsupportedOrderError(f"closed-form coefficients exist only for order 2, got {p.order}")
    if detect_branch(p) is not CanonicalBranch.DeltaZero_ThetaPi:
        raise BranchError("specialized coefficients require branch DeltaZero_ThetaPi")
    g, r = p.gamma_mod, p.r
    t1, t2, d1, d2, phi = p.theta1, p.theta2, p.delta1, p.delta2, p.phi
    e = lambda x: np.exp(1j * x)
    er = math.exp(r)
    return HamiltonianCoefficients(
        A0=g**2 + 2 * math.sinh(r) ** 2,
        B0=math.cosh(r) ** 2 + math.sinh(r) ** 2 + 2 * g**2,
        C0=0.5 * g**2,
        D1=complex(e(phi) * (math.sinh(2 * r) - 2 * g**2)),
        D2=complex(-0.5 * g * er * e(2 * t1 - d2)),
        D2p=complex(-0.5 * g * er * e(2 * t2 - d1)),
        D3=complex(0.5 * g * er * e(2 * t1 + d1)),
        D3p=complex(0.5 * g * er * e(2 * t2 + d2)),
        D4=complex(0.5 * g**2 * e(2 * phi)),
        D5=complex(-(g**2) * e(phi)),
    )


def build_fock_hamiltonian(c, cutoff, cross_kerr_factor=CROSS_KERR_FACTOR):
    """Hermitian matrix of the four-photon Hamiltonian.

    ``cross_kerr_factor`` multiplies ``C0`` in front of ``n1 n2``.
    """
    if min(cutoff.n1_max, cutoff.n2_max) < 4:
        raise InvalidCutoffError("degree-4 monomials need cutoffs >= 4")
    a1, a2 = make_mode_operators(cutoff)
    c1, c2 = a1.dag(), a2.dag()
    n1, n2 = c1 @ a1, c2 @ a2
    H = float(c.A0) * identity(cutoff)
    H = H + float(c.B0) * (n1 + n2)
    H = H + float(c.C0) * ((c1 @ c1 @ a1 @ a1) + (c2 @ c2 @ a2 @ a2))
    H = H + cross_kerr_factor * float(c.C0) * (n1 @ n2)
    K = (
        c.D1 * (c1 @ c2)
        + c.D2 * (c1 @ c1 @ a2)
        + c.D2p * (a1 @ c2 @ c2)
        + c.D3 * (c1 @ c1 @ c1)
        + c.D3p * (c2 @ c2 @ c2)
        + c.D4 * (c1 @ c1 @ c2 @ c2)
        + c.D5 * ((c1 @ c1 @ a1 @ c2) + (c1 @ c2 @ c2 @ a2))
    )
    return H + K + K.dag()


def diagonalization_error(p, cutoff, coefficients=None, max_total=None):
    """Projected ``max |b1^dag b1 + b2^dag b2 - H|`` for order-2 parameters."""
    modes = build_transformed_modes(p, cutoff)
    c = generic_coefficients(p) if coefficients is None else coefficients
    H = build_fock_hamiltonian(c, cutoff)
    k = modes.safe_total if max_total is None else max_total
    return (modes.diagonal_hamiltonian() - H).projected_max_abs(k)
