"""Analytic heterodyne multiphoton squeezed-state wavefunctions.

The entangled-state wavefunction has the closed form

    psi(z) = N exp(-a |z|^2 + Gamma1 z* + Gamma2 z - B(z, z*)),
    B(z, z*) = wB1 z*^(n+1)/(n+1) + wB2 z^(n+1)/(n+1)

(``wB1, wB2`` are the nonlinear wavefunction coefficients, not the mode
operators).  In this closed form the function argument is the complex
conjugate of the label of the heterodyne eigenket ``|z>`` used by
:func:`overlap_fock_z`, i.e. ``<z|psi> = psi(conj(z))``.  The photon-number
integrals in :mod:`hempss.statistics` account for that.

Normalization follows the completeness measure ``(2/pi) dz1 dz2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import gammaln

from .canonical import angle_close, require_canonical
from .errors import BranchError, ConvergenceError, ExponentRangeError, SingularTransformationError
from .numerics import QuadratureConfig, grid_2d, laguerre_table, nodes_1d

SINGULAR_TOL = 1e-12
EXP_LIMIT = 700.0


@dataclass(frozen=True)
class HeterodynePoint:
    z: complex

    def __post_init__(self):
        z = complex(self.z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ValueError("heterodyne point must be finite")
        object.__setattr__(self, "z", z)

    @property
    def z1(self):
        return self.z.real

    @property
    def z2(self):
        return self.z.imag


def _as_z(pt):
    return pt.z if isinstance(pt, HeterodynePoint) else pt


@dataclass(frozen=True)
class WaveParams:
    a: complex
    wB1: complex
    wB2: complex
    Gamma1: complex
    Gamma2: complex
    norm: float
    order: int
    beta1: complex
    beta2: complex

    def with_norm(self, norm):
        return replace(self, norm=float(norm))

    def exponent(self, z):
        """Complex exponent of the unnormalized wavefunction."""
        z = np.asarray(z, dtype=complex)
        zc = np.conj(z)
        k = self.order + 1
        B = (self.wB1 * zc**k + self.wB2 * z**k) / k
        return -self.a * (z * zc).real + self.Gamma1 * zc + self.Gamma2 * z - B

    def nonlinear_exponent(self, z):
        """``B(z, z*)``; purely imaginary for canonical parameters."""
        z = np.asarray(z, dtype=complex)
        k = self.order + 1
        return (self.wB1 * np.conj(z) ** k + self.wB2 * z**k) / k

    def gaussian_center(self):
        """Peak of ``|psi|^2`` when ``Re B = 0``."""
        return (self.Gamma1 + np.conj(self.Gamma2)) / (2.0 * self.a.real)


def wave_params(p, beta1, beta2, tol=1e-10):
    require_canonical(p, tol)
    e = lambda x: complex(math.cos(x), math.sin(x))
    mu, nu = p.mu, p.nu
    mu1, mu2 = e(p.theta1) * mu, e(p.theta2) * mu
    nu1, nu2 = e(-p.theta1) * nu, e(-p.theta2) * nu
    den1 = mu1 - nu2
    den2 = mu2 - nu1
    if abs(den1) < SINGULAR_TOL or abs(den2) < SINGULAR_TOL:
        raise SingularTransformationError("vanishing denominator in the wavefunction coefficients")
    s2 = math.sqrt(2.0)
    return WaveParams(
        a=(mu1 + nu2) / den1,
        wB1=s2 * p.gamma_mod * e(p.delta1) / den1,
        wB2=s2 * p.chi_mod * e(p.delta2) / den2,
        Gamma1=s2 * complex(beta1) / den1,
        Gamma2=s2 * complex(beta2) / den2,
        norm=1.0,
        order=p.order,
        beta1=complex(beta1),
        beta2=complex(beta2),
    )


def eval_entangled_wavefunction(w, pt):
    z = _as_z(pt)
    expo = w.exponent(z)
    if np.any(np.real(expo) > EXP_LIMIT):
        raise ExponentRangeError("wavefunction exponent exceeds the floating-point range")
    out = w.norm * np.exp(expo)
    return complex(out) if np.ndim(out) == 0 else out


def analytic_norm(w):
    """Normalization from the Gaussian integral; valid when ``a`` is real and ``Re B = 0``."""
    a = w.a.real
    c = w.Gamma1 + np.conj(w.Gamma2)
    return math.sqrt(a) * math.exp(-abs(c) ** 2 / (4.0 * a))


def _norm_box(w, q):
    a = w.a.real
    if a <= 0:
        raise ConvergenceError("wavefunction is not normalizable: Re(a) <= 0")
    center = w.gaussian_center()
    # |psi|^2 has standard deviation 1/(2 sqrt(a)) per axis
    return center, max(q.half_extent, 10.0 / (2.0 * math.sqrt(a)))


def _square_integral(w, q, points):
    center, R = _norm_box(w, q)
    z, wt = grid_2d(q, center, R, points)
    re = 2.0 * np.real(w.exponent(z))
    shift = re.max()
    return math.exp(shift) * float(np.sum(wt * np.exp(re - shift)))


def normalize(w, q=QuadratureConfig()):
    """Copy of ``w`` with ``(2/pi) integral |psi|^2 dz1 dz2 = 1``."""
    coarse = _square_integral(w, q, q.points_per_axis)
    fine = _square_integral(w, q, 2 * q.points_per_axis)
    change = abs(fine - coarse) / abs(fine)
    if change > q.convergence_rel_tol:
        raise ConvergenceError(
            f"normalization integral changed by {change:.2e} under grid doubling",
            residual=change,
        )
    return w.with_norm(1.0 / math.sqrt(2.0 / math.pi * fine))


def _coordinate_integral(w, x1, x2, q, points):
    z1 = 0.5 * (x1 + x2)
    a = w.a.real
    # z2-Gaussian centre of |psi| at fixed z1
    c2 = -(w.Gamma2 - w.Gamma1).imag / (2.0 * a) if a > 0 else 0.0
    R = max(q.half_extent, 12.0 / math.sqrt(max(a, 1e-300)))
    z2, wt = nodes_1d(q.rule, points, c2, R)
    expo = w.exponent(z1 + 1j * z2) + 1j * (x2 - x1) * z2
    if np.any(expo.real > EXP_LIMIT):
        raise ExponentRangeError("wavefunction exponent exceeds the floating-point range")
    return 2.0 / math.pi * w.norm * complex(np.sum(wt * np.exp(expo)))


def eval_coordinate_wavefunction(w, p, x1, x2, q=QuadratureConfig(), abs_tol=1e-8):
    """Quadrature-space wavefunction from a 1-D Fourier integral over ``z2``.

    ``psi(x1, x2) = (2/pi) * integral dz2 exp(i (x2 - x1) z2) psi(z1, z2)`` with
    ``z1 = (x1 + x2) / 2``.
    """
    n = q.points_per_axis
    coarse = _coordinate_integral(w, x1, x2, q, n)
    fine = _coordinate_integral(w, x1, x2, q, 2 * n)
    if abs(fine - coarse) > abs_tol:
        raise ConvergenceError(
            f"coordinate integral changed by {abs(fine - coarse):.2e} under grid doubling",
            residual=abs(fine - coarse),
        )
    return fine


def xi_expression(p):
    """Complex value of the cubic-phase strength expression (real on canonical branches)."""
    psi = p.theta1 + p.theta2 - p.phi
    c, s = math.cosh(p.r), math.sinh(p.r)
    num = c - s * complex(math.cos(psi), math.sin(psi))
    den = math.cosh(2 * p.r) - math.sinh(2 * p.r) * math.cos(psi)
    return 2.0 * math.sqrt(2.0) / 3.0 * p.gamma_mod * num / den


def xi(p, tol=1e-10):
    if p.order != 2:
        raise BranchError("the cubic-phase strength is defined for order 2")
    require_canonical(p, tol)
    return float(xi_expression(p).real)


def delta(p, tol=1e-10):
    """Cubic coupling ``Delta`` of ``U = exp(-Delta Z^3 + Delta* Z^dag^3)`` (quotient form)."""
    if p.order != 2:
        raise BranchError("Delta is defined for order 2")
    require_canonical(p, tol)
    den = p.mu - p.nu * complex(math.cos(p.theta1 + p.theta2), -math.sin(p.theta1 + p.theta2))
    if abs(den) < SINGULAR_TOL:
        raise SingularTransformationError("vanishing denominator in Delta")
    phase = complex(math.cos(p.delta1 - p.theta1), math.sin(p.delta1 - p.theta1))
    return math.sqrt(2.0) * p.gamma_mod * phase / (3.0 * den)


def signed_squeezing(p):
    """``r`` on the theta-sum-pi branch and ``-r`` on the theta-sum-zero branch."""
    if p.r == 0.0:
        return 0.0
    if angle_close(p.theta_sum, math.pi):
        return p.r
    if angle_close(p.theta_sum, 0.0):
        return -p.r
    raise BranchError("exponential form of Delta needs theta1 + theta2 - phi in {0, pi}")


def delta_exponential_form(p, tol=1e-10):
    """``Delta = sqrt(2) e^{-r} |gamma| e^{i(delta1 - theta1)} / 3`` with the signed ``r``."""
    require_canonical(p, tol)
    r = signed_squeezing(p)
    phase = complex(math.cos(p.delta1 - p.theta1), math.sin(p.delta1 - p.theta1))
    return math.sqrt(2.0) * math.exp(-r) * p.gamma_mod * phase / 3.0


@dataclass(frozen=True)
class CubicPhaseParams:
    Xi: float
    Delta: complex


def cubic_phase_params(p):
    return CubicPhaseParams(Xi=xi(p), Delta=delta(p))


def eval_cubic_closed_form(p, beta1, beta2, x1, x2, norm=None):
    """Closed-form quadrature wavefunction for ``F(Z) = Z^2`` and ``delta1 - theta1 = pi/2``.

    ``norm`` defaults to :func:`analytic_norm` of the matching :class:`WaveParams`.
    """
    if p.order != 2 or not angle_close(p.delta1 - p.theta1, math.pi / 2):
        raise BranchError("closed form requires order 2 and delta1 - theta1 = pi/2")
    w = wave_params(p, beta1, beta2)
    N = analytic_norm(w) if norm is None else norm
    X = xi(p)
    a = w.a.real
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    s = 0.5 * (x1 + x2)
    width = a - 1.5j * X * (x1 + x2)
    diff = (x1 - x2) + (w.Gamma1 - w.Gamma2)
    out = (
        2.0 / math.sqrt(math.pi) * N / np.sqrt(width)
        * np.exp(-diff**2 / (4.0 * a - 6.0j * X * (x1 + x2)))
        * np.exp(-1j * X * s**3 - a * s**2 + (w.Gamma1 + w.Gamma2) * s)
    )
    return complex(out) if np.ndim(out) == 0 else out


def log_overlap_prefactor(n1, n2):
    """``log(2^((M-m)/2) sqrt(m!/M!))`` for the Fock/heterodyne overlap."""
    m, M = min(n1, n2), max(n1, n2)
    return 0.5 * (M - m) * math.log(2.0) + 0.5 * (gammaln(m + 1) - gammaln(M + 1))


def overlap_fock_z(n1, n2, pt, theta1=0.0, theta2=0.0):
    """``<n1, n2 | z>`` for the heterodyne eigenket ``|z>``."""
    if n1 < 0 or n2 < 0:
        raise ValueError("photon numbers must be non-negative")
    z = complex(_as_z(pt))
    m, M = min(n1, n2), max(n1, n2)
    k = M - m
    sign = -1.0 if m % 2 else 1.0
    phase = complex(math.cos(n1 * theta1 + n2 * theta2), math.sin(n1 * theta1 + n2 * theta2))
    lag = float(laguerre_table(m, k, 2.0 * abs(z) ** 2)[m])
    if k and z == 0:
        return 0j
    log_mag = log_overlap_prefactor(n1, n2) - abs(z) ** 2
    if k:
        log_mag += k * math.log(abs(z))
        ang = math.atan2(z.imag, z.real)
        # z*^(n1-m) z^(n2-m)
        phase *= complex(math.cos(ang * (n2 - n1)), math.sin(ang * (n2 - n1)))
    return sign * phase * lag * math.exp(log_mag)
