"""Brute-force Fock-space constructions used as ground truth.

Two independent routes build the joint eigenstate of the transformed modes:

* :func:`joint_eigenstate` takes the smallest right singular vector of the
  stacked matrix ``[b1 - beta1; b2 - beta2]``;
* :func:`unitary_construction` applies two-mode squeezing, displacements and
  the cubic unitary ``exp(-Delta Z^3 + Delta* Z^dag^3)`` to the vacuum.

The first route needs no phase conventions, so it arbitrates the sign and
rotated-mode conventions that the second route depends on.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import _io
from .canonical import require_canonical
from .errors import (
    ConvergenceError,
    ConventionMismatchError,
    DimensionError,
    NonUniqueStateError,
    TruncationError,
    UnsupportedOrderError,
)
from .fock import FockState, exp_apply, make_mode_operators, pnd_of_state
from .hamiltonian import build_transformed_modes, heterodyne_operator
from .states import delta

# Conventions used by the unitary route, fixed against the eigenvector route
# (see test_oracle.py::test_convention_table_is_the_only_working_choice).
#   rotated_mode_sign: a_theta = exp(rotated_mode_sign * i * theta) * a
#   squeeze_sign:      g = squeeze_sign * r * exp(-i (theta1 + theta2 - phi))
CONVENTION = {"rotated_mode_sign": -1, "squeeze_sign": +1}

RESIDUAL_TOL = 1e-6
UNIQUENESS_RATIO = 10.0
FIDELITY_FLOOR = 0.999


class Route(enum.Enum):
    JointEigen = "JointEigen"
    UnitaryConstruction = "UnitaryConstruction"


@dataclass(frozen=True, eq=False)
class OracleResult:
    """A Fock-space state with its eigen-equation residuals.

    ``residual1``/``residual2`` are ``||(b_i - beta_i) psi||`` restricted to
    rows at least ``edge_margin`` photons inside the box in both modes; the
    unrestricted values are kept as ``boundary_residual1/2``.
    """

    state: FockState
    residual1: float
    residual2: float
    route: Route
    fidelity_vs_other_route: float = math.nan
    boundary_residual1: float = math.nan
    boundary_residual2: float = math.nan
    edge_margin: int = 0
    diagnostics: dict = field(default_factory=dict)

    def pnd(self):
        return pnd_of_state(self.state)

    def to_dict(self):
        out = self.state.to_dict()
        out["metadata"] = {
            "residual1": self.residual1,
            "residual2": self.residual2,
            "route": self.route.value,
            "fidelity": None if math.isnan(self.fidelity_vs_other_route) else self.fidelity_vs_other_route,
            "boundary_residual1": self.boundary_residual1,
            "boundary_residual2": self.boundary_residual2,
            "edge_margin": self.edge_margin,
        }
        return out

    def to_json(self):
        return _io.dumps17(self.to_dict())


def edge_margin(order):
    """Rows this far from the box edge see no truncated ladder products."""
    return 2 * order + 2


def _interior_rows(cutoff, margin):
    n1, n2 = cutoff.labels()
    return np.flatnonzero((n1 <= cutoff.n1_max - margin) & (n2 <= cutoff.n2_max - margin))


def _residuals(modes, beta1, beta2, v, margin):
    r1 = modes.b1.apply(v) - beta1 * v
    r2 = modes.b2.apply(v) - beta2 * v
    rows = _interior_rows(modes.cutoff, margin)
    return (
        float(np.linalg.norm(r1[rows])),
        float(np.linalg.norm(r2[rows])),
        float(np.linalg.norm(r1)),
        float(np.linalg.norm(r2)),
    )


def _inverse_iteration(lu, matvec, start, deflate=None, tol=1e-13, max_iter=200):
    """Smallest eigenpair of a Hermitian PSD matrix given its LU factorization."""
    x = start / np.linalg.norm(start)
    lam_old = math.inf
    for _ in range(max_iter):
        if deflate is not None:
            x = x - deflate * np.vdot(deflate, x)
        y = lu.solve(x)
        if deflate is not None:
            y = y - deflate * np.vdot(deflate, y)
        x = y / np.linalg.norm(y)
        lam = float(np.vdot(x, matvec(x)).real)
        if abs(lam - lam_old) <= tol * max(abs(lam), 1e-300) or lam <= 1e-300:
            return max(lam, 0.0), x
        lam_old = lam
    raise ConvergenceError("inverse iteration did not converge", residual=abs(lam - lam_old))


def joint_eigenstate(p, beta1, beta2, cutoff, tol=RESIDUAL_TOL):
    """Least-squares joint eigenvector of ``(b1, b2)`` with eigenvalues ``(beta1, beta2)``."""
    require_canonical(p)
    modes = build_transformed_modes(p, cutoff)
    dim = cutoff.dim
    eye = sp.identity(dim, dtype=complex, format="csr")
    M = sp.vstack([
        sp.csr_matrix(modes.b1.matrix) - beta1 * eye,
        sp.csr_matrix(modes.b2.matrix) - beta2 * eye,
    ]).tocsr()
    normal = (M.conj().T @ M).tocsc()
    matvec = lambda x: M.conj().T @ (M @ x)
    # shift 0; a tiny diagonal keeps the factorization defined if the pencil is exactly singular
    lu = spla.splu(normal + 1e-300 * sp.identity(dim, format="csc"))
    start = np.ones(dim, dtype=complex)
    lam1, v = _inverse_iteration(lu, matvec, start)
    lam2, _ = _inverse_iteration(lu, matvec, start, deflate=v, tol=1e-6)
    s1, s2 = math.sqrt(lam1), math.sqrt(lam2)
    if s2 <= UNIQUENESS_RATIO * s1:
        raise NonUniqueStateError(
            f"smallest singular values {s1:.3e} and {s2:.3e} are not separated by {UNIQUENESS_RATIO:g}x"
        )
    state = FockState(v, cutoff).with_fixed_phase()
    margin = edge_margin(p.order)
    r1, r2, R1, R2 = _residuals(modes, beta1, beta2, state.amplitudes, margin)
    if max(r1, r2) > tol:
        raise TruncationError(
            f"eigen-equation residual {max(r1, r2):.3e} exceeds {tol:g}; increase the cutoff"
        )
    return OracleResult(
        state=state, residual1=r1, residual2=r2, route=Route.JointEigen,
        boundary_residual1=R1, boundary_residual2=R2, edge_margin=margin,
        diagnostics={"singular_values": [s1, s2]},
    )


def rotated_modes(p, cutoff, convention=CONVENTION):
    a1, a2 = make_mode_operators(cutoff)
    s = convention["rotated_mode_sign"]
    return np.exp(s * 1j * p.theta1) * a1, np.exp(s * 1j * p.theta2) * a2


def squeeze_parameter(p, convention=CONVENTION):
    return convention["squeeze_sign"] * p.r * np.exp(-1j * (p.theta1 + p.theta2 - p.phi))


def cubic_generator_rotated(p, cutoff, convention=CONVENTION):
    """``-(Delta / 2 sqrt 2) [A^3 + 3 A^2 B + 3 A B^2 + B^3] + h.c.`` with ``A = a_theta1^dag``, ``B = a_theta2``."""
    at1, at2 = rotated_modes(p, cutoff, convention)
    A, B = at1.dag(), at2
    poly = (A @ A @ A) + 3.0 * (A @ A @ B) + 3.0 * (A @ B @ B) + (B @ B @ B)
    K = (-delta(p) / (2.0 * math.sqrt(2.0))) * poly
    return K - K.dag()


def cubic_generator_heterodyne(p, cutoff):
    """``-Delta Z^3 + Delta* Z^dag^3``."""
    Z = heterodyne_operator(p, cutoff)
    D = delta(p)
    return (-D) * (Z @ Z @ Z) + np.conj(D) * (Z.dag() @ Z.dag() @ Z.dag())


def unitary_construction(p, beta1, beta2, cutoff, convention=CONVENTION, reference=None,
                         tol=RESIDUAL_TOL):
    """``U D1(alpha1) D2(alpha2) S12(g) |00>`` for second-order nonlinearity.

    ``reference`` is the eigenvector-route result to compare against; it is
    computed when omitted.
    """
    if p.order != 2:
        raise UnsupportedOrderError("the cubic unitary is defined for order 2")
    require_canonical(p)
    a1, a2 = make_mode_operators(cutoff)
    at1, at2 = rotated_modes(p, cutoff, convention)
    g = squeeze_parameter(p, convention)
    S = (-g) * (at1.dag() @ at2.dag())
    S = S - S.dag()
    mu, nu = p.mu, p.nu
    al1 = mu.conjugate() * beta1 - nu * np.conj(beta2)
    al2 = mu.conjugate() * beta2 - nu * np.conj(beta1)
    D1 = al1 * a1.dag() - np.conj(al1) * a1
    D2 = al2 * a2.dag() - np.conj(al2) * a2

    v = FockState.vacuum(cutoff).amplitudes
    for gen in (S, D1, D2):
        v = exp_apply(gen, v, tol=1e-14)
    if p.gamma_mod > 0:
        v = exp_apply(cubic_generator_rotated(p, cutoff, convention), v, tol=1e-14)
    state = FockState(v, cutoff).normalized().with_fixed_phase()

    modes = build_transformed_modes(p, cutoff)
    margin = edge_margin(p.order)
    r1, r2, R1, R2 = _residuals(modes, beta1, beta2, state.amplitudes, margin)
    if reference is None:
        reference = joint_eigenstate(p, beta1, beta2, cutoff, tol=tol)
    if reference.state.cutoff != cutoff:
        raise DimensionError("reference state has a different cutoff")
    fid = abs(reference.state.inner(state))
    if fid < FIDELITY_FLOOR:
        raise ConventionMismatchError(
            f"fidelity {fid:.6f} with the eigenvector route is below {FIDELITY_FLOOR}; "
            "the convention table does not describe these parameters"
        )
    return OracleResult(
        state=state, residual1=r1, residual2=r2, route=Route.UnitaryConstruction,
        fidelity_vs_other_route=fid, boundary_residual1=R1, boundary_residual2=R2,
        edge_margin=margin, diagnostics={"g": [g.real, g.imag]},
    )


def compare_pnd(o, g):
    """Largest ``|P_oracle - P_grid|`` over the shared ``(n1, n2)`` range."""
    P = np.abs(o.state.as_grid()) ** 2
    Q = g.values
    k1 = min(P.shape[0], Q.shape[0])
    k2 = min(P.shape[1], Q.shape[1])
    return float(np.max(np.abs(P[:k1, :k2] - Q[:k1, :k2])))
