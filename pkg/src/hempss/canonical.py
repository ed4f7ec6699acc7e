"""Parameters of the two-mode nonlinear Bogoliubov transformation.

    b1 = mu a1 + nu a2^dag + |gamma| e^{i delta1} Z^n
    b2 = mu a2 + nu a1^dag + |chi|   e^{i delta2} (Z^dag)^n
    Z  = (e^{-i theta2} a2 + e^{i theta1} a1^dag) / sqrt(2)

with ``mu = cosh r`` and ``nu = sinh r e^{i phi}``.  The heterodyne mixing
coefficients ``alpha = e^{i theta1}/sqrt(2)`` and ``beta = e^{i theta2}/sqrt(2)``
have equal moduli by construction, so the only nontrivial constraint left is
the single complex condition evaluated by :func:`residual_nlcc1`.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

TWO_PI = 2.0 * math.pi
ANGLE_TOL = 1e-9
DEGENERATE_TOL = 1e-9


def wrap_angle(x):
    """Map an angle to ``[0, 2 pi)``."""
    y = math.fmod(float(x), TWO_PI)
    if y < 0:
        y += TWO_PI
    # fmod can land on 2pi after the shift for tiny negative inputs
    return 0.0 if y >= TWO_PI else y


def angle_close(x, target, tol=ANGLE_TOL):
    """True if ``x`` equals ``target`` modulo 2 pi."""
    d = wrap_angle(x - target)
    return min(d, TWO_PI - d) < tol


class CanonicalBranch(enum.Enum):
    """Limiting solutions for ``(delta1 + delta2 - phi, theta1 + theta2 - phi)``."""

    DeltaZero_ThetaPi = (0.0, math.pi)
    DeltaPi_ThetaZero = (math.pi, 0.0)

    @property
    def delta_sum(self):
        return self.value[0]

    @property
    def theta_sum(self):
        return self.value[1]


@dataclass(frozen=True)
class CanonicalParams:
    r: float
    phi: float = 0.0
    gamma_mod: float = 0.0
    chi_mod: float = 0.0
    delta1: float = 0.0
    delta2: float = 0.0
    theta1: float = 0.0
    theta2: float = 0.0
    order: int = 2

    def __post_init__(self):
        for name in ("phi", "delta1", "delta2", "theta1", "theta2"):
            object.__setattr__(self, name, wrap_angle(getattr(self, name)))
        for name in ("r", "gamma_mod", "chi_mod"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)
        if self.gamma_mod < 0 or self.chi_mod < 0:
            raise ValueError("nonlinear coupling moduli must be non-negative")
        if int(self.order) != self.order or self.order < 1:
            raise ValueError(f"nonlinearity order must be an integer >= 1, got {self.order!r}")
        object.__setattr__(self, "order", int(self.order))

    @classmethod
    def on_branch(cls, branch, r, gamma_mod, *, phi=0.0, delta1=0.0, theta1=0.0, order=2):
        """Complete a parameter set onto ``branch`` with ``|chi| = |gamma|``.

        ``delta2`` and ``theta2`` are solved from the branch angle sums.
        """
        branch = CanonicalBranch(branch) if not isinstance(branch, CanonicalBranch) else branch
        return cls(
            r=r,
            phi=phi,
            gamma_mod=gamma_mod,
            chi_mod=gamma_mod,
            delta1=delta1,
            delta2=branch.delta_sum + phi - delta1,
            theta1=theta1,
            theta2=branch.theta_sum + phi - theta1,
            order=order,
        )

    @property
    def mu(self):
        return complex(math.cosh(self.r))

    @property
    def nu(self):
        return math.sinh(self.r) * complex(math.cos(self.phi), math.sin(self.phi))

    @property
    def gamma(self):
        return self.gamma_mod * np.exp(1j * self.delta1)

    @property
    def chi(self):
        return self.chi_mod * np.exp(1j * self.delta2)

    @property
    def alpha(self):
        return np.exp(1j * self.theta1) / math.sqrt(2.0)

    @property
    def beta(self):
        return np.exp(1j * self.theta2) / math.sqrt(2.0)

    @property
    def delta_sum(self):
        """``delta1 + delta2 - phi`` wrapped to ``[0, 2 pi)``."""
        return wrap_angle(self.delta1 + self.delta2 - self.phi)

    @property
    def theta_sum(self):
        """``theta1 + theta2 - phi`` wrapped to ``[0, 2 pi)``."""
        return wrap_angle(self.theta1 + self.theta2 - self.phi)

    def replace(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        return asdict(self)

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data):
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown parameter fields: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def linear_coeffs(p):
    """``(mu, nu) = (cosh r, sinh r e^{i phi})``."""
    return p.mu, p.nu


def residual_nlcc1(p):
    """Residual of the single complex canonical condition; zero iff canonical."""
    c, s = math.cosh(p.r), math.sinh(p.r)
    e = lambda x: complex(math.cos(x), math.sin(x))
    return (
        c * p.chi_mod * e(-(p.delta2 - p.theta1))
        - s * p.chi_mod * e(-(p.delta2 + p.theta2 - p.phi))
        + c * p.gamma_mod * e(p.delta1 - p.theta2)
        - s * p.gamma_mod * e(p.delta1 + p.theta1 - p.phi)
    )


def imaginary_condition(p):
    """``(|chi|^2 - |gamma|^2) sin(theta1 + theta2 - phi)``; must vanish for real r."""
    return (p.chi_mod**2 - p.gamma_mod**2) * math.sin(p.theta1 + p.theta2 - p.phi)


@dataclass(frozen=True)
class TanhRhs:
    """Outcome of evaluating the right-hand side for ``tanh r`` on ``|chi| = |gamma|``.

    ``kind`` is ``"value"``, ``"degenerate"`` (0/0: r is free) or ``"infinite"``
    (``tanh r = +-1``).  ``physical`` is False for values with ``|tanh r| > 1``.
    """

    kind: str
    value: float | None = None

    @property
    def physical(self):
        if self.kind != "value":
            return self.kind == "degenerate"
        return abs(self.value) < 1.0


def tanh_r_rhs(p, tol=DEGENERATE_TOL):
    if abs(p.chi_mod - p.gamma_mod) > 1e-12 * max(1.0, p.gamma_mod):
        raise ValueError("tanh r relation only applies on the |chi| = |gamma| branch")
    num = math.cos(p.theta1 + p.theta2 - p.phi) + math.cos(p.delta1 + p.delta2 - p.phi)
    den = 1.0 + math.cos(p.delta1 + p.delta2 + p.theta1 + p.theta2 - 2.0 * p.phi)
    if abs(num) < tol and abs(den) < tol:
        return TanhRhs("degenerate")
    if abs(den) < tol:
        return TanhRhs("infinite", math.copysign(math.inf, num))
    value = num / den
    if abs(abs(value) - 1.0) < tol:
        return TanhRhs("infinite", value)
    return TanhRhs("value", value)


def detect_branch(p, tol=ANGLE_TOL):
    for branch in CanonicalBranch:
        if angle_close(p.delta_sum, branch.delta_sum, tol) and angle_close(p.theta_sum, branch.theta_sum, tol):
            return branch
    return None


@dataclass(frozen=True)
class ValidationReport:
    linear_residual: float
    alpha_beta_residual: float
    nlcc1_residual: float
    imaginary_residual: float
    branch: CanonicalBranch | None
    tol: float
    passed: bool = field(init=False)

    def __post_init__(self):
        worst = max(
            abs(self.linear_residual),
            abs(self.alpha_beta_residual),
            self.nlcc1_residual,
            abs(self.imaginary_residual),
        )
        object.__setattr__(self, "passed", bool(worst < self.tol))

    @property
    def residuals(self):
        return {
            "linear": self.linear_residual,
            "alpha_beta": self.alpha_beta_residual,
            "nlcc1": self.nlcc1_residual,
            "imaginary": self.imaginary_residual,
        }

    def to_dict(self):
        return {
            "passed": self.passed,
            "tol": self.tol,
            "branch": self.branch.name if self.branch else None,
            "residuals": self.residuals,
        }

    def summary(self):
        lines = [f"canonical: {'PASS' if self.passed else 'FAIL'} (tol={self.tol:g})"]
        for name, value in self.residuals.items():
            lines.append(f"  {name:<11s} {value: .3e}")
        lines.append(f"  branch      {self.branch.name if self.branch else 'none'}")
        return "\n".join(lines)


def validate(p, tol=1e-10):
    if tol <= 0:
        raise ValueError("tol must be positive")
    mu, nu = linear_coeffs(p)
    return ValidationReport(
        linear_residual=abs(mu) ** 2 - abs(nu) ** 2 - 1.0,
        alpha_beta_residual=abs(p.alpha) ** 2 - abs(p.beta) ** 2,
        nlcc1_residual=abs(residual_nlcc1(p)),
        imaginary_residual=imaginary_condition(p),
        branch=detect_branch(p),
        tol=tol,
    )


def require_canonical(p, tol=1e-10):
    """Raise :class:`ConstraintError` unless ``p`` passes :func:`validate`."""
    from .errors import ConstraintError

    report = validate(p, tol)
    if not report.passed:
        worst = max(report.residuals.items(), key=lambda kv: abs(kv[1]))
        raise ConstraintError(
            f"non-canonical parameters: {worst[0]} residual {worst[1]:.3e} exceeds {tol:g}",
            residuals=report.residuals,
        )
    return report
