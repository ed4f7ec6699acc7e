"""Quadrature rules and Laguerre polynomials used by the wavefunction code."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np


class QuadratureRule(enum.Enum):
    TRAPEZOID = "trapezoid"
    GAUSS_LEGENDRE = "gauss_legendre"


@dataclass(frozen=True)
class QuadratureConfig:
    """Tensor-product rule on the box ``|z1 - c1|, |z2 - c2| <= half_extent``.

    ``half_extent`` is a floor: integrators widen the box when the integrand's
    Gaussian envelope needs more room.  Integrators that refine by doubling
    stop at ``max_points_per_axis``.
    """

    half_extent: float = 4.0
    points_per_axis: int = 128
    rule: QuadratureRule = QuadratureRule.GAUSS_LEGENDRE
    convergence_rel_tol: float = 1e-6
    max_points_per_axis: int = 512

    def __post_init__(self):
        if not isinstance(self.rule, QuadratureRule):
            object.__setattr__(self, "rule", QuadratureRule(self.rule))
        if self.points_per_axis < 32:
            raise ValueError("points_per_axis must be >= 32")
        if self.half_extent < 4:
            raise ValueError("half_extent must be >= 4")
        if self.max_points_per_axis < self.points_per_axis:
            raise ValueError("max_points_per_axis must be >= points_per_axis")
        if self.convergence_rel_tol <= 0:
            raise ValueError("convergence_rel_tol must be positive")

    def doubled(self):
        return replace(self, points_per_axis=2 * self.points_per_axis)

    def to_dict(self):
        return {
            "half_extent": self.half_extent,
            "points_per_axis": self.points_per_axis,
            "rule": self.rule.value,
            "convergence_rel_tol": self.convergence_rel_tol,
            "max_points_per_axis": self.max_points_per_axis,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


@lru_cache(maxsize=32)
def _unit_nodes(rule, n):
    if rule is QuadratureRule.GAUSS_LEGENDRE:
        x, w = np.polynomial.legendre.leggauss(n)
    else:
        x = np.linspace(-1.0, 1.0, n)
        w = np.full(n, 2.0 / (n - 1))
        w[0] = w[-1] = 1.0 / (n - 1)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def nodes_1d(rule, n, center, half_extent):
    x, w = _unit_nodes(QuadratureRule(rule), int(n))
    return center + half_extent * x, half_extent * w


def grid_2d(config, center=0j, half_extent=None, points=None):
    """Flattened complex nodes ``z`` and weights for ``d z1 d z2``."""
    R = config.half_extent if half_extent is None else half_extent
    n = config.points_per_axis if points is None else points
    x, wx = nodes_1d(config.rule, n, center.real, R)
    y, wy = nodes_1d(config.rule, n, center.imag, R)
    X, Y = np.meshgrid(x, y, indexing="ij")
    W = np.outer(wx, wy)
    return (X + 1j * Y).ravel(), W.ravel()


def laguerre(m, alpha, x):
    """Generalized Laguerre polynomial ``L_m^(alpha)(x)`` by three-term recurrence."""
    if m < 0 or alpha < 0:
        raise ValueError("laguerre needs m >= 0 and alpha >= 0")
    return laguerre_table(m, alpha, x)[m]


def laguerre_table(m_max, alpha, x):
    """Stack ``[L_0^(alpha)(x), ..., L_m_max^(alpha)(x)]`` along a new first axis."""
    x = np.asarray(x, dtype=float)
    out = np.empty((m_max + 1,) + x.shape)
    out[0] = 1.0
    if m_max >= 1:
        out[1] = 1.0 + alpha - x
    for k in range(1, m_max):
        out[k + 1] = ((2 * k + 1 + alpha - x) * out[k] - (k + alpha) * out[k - 1]) / (k + 1)
    return out
