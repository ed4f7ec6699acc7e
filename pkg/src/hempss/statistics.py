"""Photon statistics of the analytic states by two-dimensional quadrature.

``P(n1, n2) = |<n1, n2|psi>|^2`` with

    <n1, n2|psi> = (2/pi) * integral d^2z <n1, n2|z> <z|psi>

and ``<z|psi> = psi(conj z)`` for the closed-form ``psi`` of :mod:`hempss.states`.
Each term of the integrand is assembled in log space so that Fock numbers
around 60 do not overflow.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from . import _io
from .canonical import validate
from .errors import ConvergenceError, HempssError, NormalizationError, TruncationError
from .fock import default_cutoff
from .numerics import QuadratureConfig, QuadratureRule, grid_2d, laguerre, laguerre_table
from .states import normalize, wave_params

__all__ = [
    "QuadratureConfig",
    "QuadratureRule",
    "PNDGrid",
    "Moments",
    "SweepTable",
    "laguerre",
    "pnd",
    "pnd_adaptive",
    "moments",
    "diagonal_mass_ratio",
    "estimate_mean_photons",
    "sweep_gamma",
    "sweep_theta",
]

NEGATIVE_TOL = 1e-12
MASS_TOL = 1e-6
MOMENT_MASS_TOL = 1e-4


@dataclass(frozen=True, eq=False)
class PNDGrid:
    """Photon-number distribution ``values[n1, n2]`` for ``n1, n2 <= n_max``."""

    values: np.ndarray
    total_mass: float
    convergence_estimate: float

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 2:
            raise ValueError("PND values must be a matrix")
        if np.any(v < -NEGATIVE_TOL):
            raise NormalizationError(f"negative probability {v.min():.3e}")
        v = np.clip(v, 0.0, None)
        if self.total_mass > 1.0 + MASS_TOL:
            raise NormalizationError(f"total probability {self.total_mass:.9f} exceeds 1")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def n_max(self):
        return min(self.values.shape) - 1

    def __getitem__(self, idx):
        return float(self.values[idx])

    def rows(self):
        n1, n2 = np.indices(self.values.shape)
        return [(int(a), int(b), float(p)) for a, b, p in zip(n1.ravel(), n2.ravel(), self.values.ravel())]

    def to_csv(self):
        return _io.csv_text(["n1", "n2", "P"], self.rows())

    def write_csv(self, path):
        _io.write_csv(path, ["n1", "n2", "P"], self.rows())


@dataclass(frozen=True)
class Moments:
    mean_n1: float
    mean_n2: float
    mean_n1n2: float
    g2_cross: float

    def to_dict(self):
        return {
            "mean_n1": self.mean_n1,
            "mean_n2": self.mean_n2,
            "mean_n1n2": self.mean_n1n2,
            "g2": self.g2_cross,
        }


def _pnd_box(w, n_max, q):
    """Square covering the support of ``|<z|psi>|`` intersected with that of the overlaps."""
    a = w.a.real
    # |<z|psi>| ~ exp(-a |z - conj(z0)|^2)
    center = np.conj(w.gaussian_center())
    reach_psi = 10.0 / math.sqrt(2.0 * a)
    # |<n|z>| is negligible beyond |z| ~ sqrt(n_max) + a few
    reach_fock = abs(center) + math.sqrt(n_max + 1.0) + 6.0
    return complex(center), max(q.half_extent, min(reach_psi, reach_fock))


def _pnd_values(w, p, n_max, q, points):
    center, R = _pnd_box(w, n_max, q)
    z, wt = grid_2d(q, center, R, points)
    # <z|psi> = psi(conj z); the normalization is kept as a log offset
    base = w.exponent(np.conj(z)) - (z * np.conj(z)).real + math.log(w.norm)
    if np.any(base.real > 700.0):
        raise ConvergenceError("integrand exceeds the floating-point range")
    absz = np.abs(z)
    with np.errstate(divide="ignore"):
        logabs = np.log(absz)
    ang = np.angle(z)
    x = 2.0 * absz**2
    values = np.zeros((n_max + 1, n_max + 1))
    for k in range(-n_max, n_max + 1):
        ak = abs(k)
        m_top = n_max - ak
        if ak:
            # z^k for n2 > n1, conj(z)^|k| for n1 > n2
            expo = base + ak * logabs + 1j * k * ang
            expo = np.where(absz == 0.0, -np.inf, expo)
        else:
            expo = base
        g = wt * np.exp(expo)
        L = laguerre_table(m_top, ak, x)
        integrals = np.abs((L @ g.real) + 1j * (L @ g.imag))
        m = np.arange(m_top + 1)
        n1, n2 = (m, m + k) if k >= 0 else (m - k, m)
        log_scale = 0.5 * ak * math.log(2.0) + 0.5 * (gammaln(m + 1) - gammaln(m + ak + 1))
        values[n1, n2] = (2.0 / math.pi * np.exp(log_scale) * integrals) ** 2
    return values


def pnd(w, p, n_max, q=QuadratureConfig()):
    """Photon-number distribution of a normalized analytic state.

    The grid starts at ``q.points_per_axis`` and is doubled until two
    successive grids agree; ``convergence_estimate`` is the largest change of
    any entry in that last doubling, relative to the largest entry.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    n = q.points_per_axis
    coarse = _pnd_values(w, p, n_max, q, n)
    while True:
        fine = _pnd_values(w, p, n_max, q, 2 * n)
        peak = max(float(fine.max()), 1e-300)
        change = float(np.max(np.abs(fine - coarse))) / peak
        if change <= q.convergence_rel_tol:
            break
        if 4 * n > q.max_points_per_axis:
            raise ConvergenceError(
                f"PND changed by {change:.2e} (relative to its peak) under grid doubling",
                residual=change,
                diagnostics={"n_max": n_max, "points_per_axis": 2 * n},
            )
        n, coarse = 2 * n, fine
    return PNDGrid(values=fine, total_mass=math.fsum(fine.ravel()), convergence_estimate=change)


def estimate_mean_photons(p, beta1, beta2):
    """Rough per-mode photon number, used only as a starting size for grids.

    Exact for the Gaussian part (squeezing plus displacement) and inflated by
    an empirical factor for the cubic nonlinearity.
    """
    mu, nu = p.mu, p.nu
    a1 = mu.conjugate() * beta1 - nu * np.conj(beta2)
    a2 = mu.conjugate() * beta2 - nu * np.conj(beta1)
    lin = math.sinh(p.r) ** 2 + max(abs(a1), abs(a2)) ** 2
    return lin * (1.0 + 10.0 * p.gamma_mod * math.exp(abs(p.r)))


def _next_n_max(g, mass_tol):
    """Extrapolate the geometric decay of both marginals to the needed ``n_max``."""
    N = g.n_max
    deficit = 1.0 - g.total_mass
    ratios = []
    for marginal in (g.values.sum(axis=1), g.values.sum(axis=0)):
        lo, hi = marginal[max(N - 5, 0)], marginal[N]
        if lo > 0 and 0 < hi < lo:
            ratios.append((hi / lo) ** (1.0 / min(5, N)))
    if not ratios or deficit <= 0:
        return int(math.ceil(1.5 * N)) + 1
    rho = max(ratios)
    extra = math.log(mass_tol / (4.0 * deficit)) / math.log(rho)
    return int(min(2 * N + 1, max(N + 4, math.ceil(N + extra))))


def pnd_adaptive(w, p, q=QuadratureConfig(), n_max=None, mass_tol=MASS_TOL, max_n=120):
    """:func:`pnd` with ``n_max`` grown until the captured mass is within ``mass_tol`` of 1."""
    if n_max is None:
        n_max = default_cutoff(estimate_mean_photons(p, w.beta1, w.beta2))
    n_max = min(n_max, max_n)
    while True:
        g = pnd(w, p, n_max, q)
        if 1.0 - g.total_mass <= mass_tol:
            return g
        if n_max >= max_n:
            raise TruncationError(
                f"probability mass {g.total_mass:.9f} still short of 1 at n_max={n_max}"
            )
        n_max = min(max_n, _next_n_max(g, mass_tol))


def moments(g):
    if abs(1.0 - g.total_mass) > MOMENT_MASS_TOL:
        raise TruncationError(
            f"PND captures mass {g.total_mass:.6f}; raise n_max before taking moments"
        )
    P = g.values
    n1, n2 = np.indices(P.shape)
    m1 = math.fsum((n1 * P).ravel())
    m2 = math.fsum((n2 * P).ravel())
    m12 = math.fsum((n1 * n2 * P).ravel())
    g2 = m12 / (m1 * m2) if m1 > 0 and m2 > 0 else math.nan
    return Moments(mean_n1=m1, mean_n2=m2, mean_n1n2=m12, g2_cross=g2)


def diagonal_mass_ratio(g):
    """Fraction of the captured probability lying on ``n1 == n2``."""
    return math.fsum(np.diag(g.values)) / g.total_mass


PARAM_COLUMNS = [
    "r", "phi", "gamma_mod", "chi_mod", "delta1", "delta2", "theta1", "theta2",
    "beta1_re", "beta1_im", "beta2_re", "beta2_im",
]
RESULT_COLUMNS = ["n_max", "total_mass", "mean_n1", "mean_n2", "mean_n1n2", "g2", "error"]


@dataclass
class SweepTable:
    rows: list = field(default_factory=list)

    columns = PARAM_COLUMNS + RESULT_COLUMNS

    def column(self, name):
        return [row[name] for row in self.rows]

    def ok_rows(self):
        return [row for row in self.rows if not row["error"]]

    def to_csv(self):
        return _io.csv_text(self.columns, [[row[c] for c in self.columns] for row in self.rows])

    def write_csv(self, path):
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(self.to_csv())


def _betas(beta):
    if isinstance(beta, (tuple, list)):
        b1, b2 = beta
    else:
        b1 = b2 = beta
    return complex(b1), complex(b2)


def _point(p, beta1, beta2, q):
    row = {
        "r": p.r, "phi": p.phi, "gamma_mod": p.gamma_mod, "chi_mod": p.chi_mod,
        "delta1": p.delta1, "delta2": p.delta2, "theta1": p.theta1, "theta2": p.theta2,
        "beta1_re": beta1.real, "beta1_im": beta1.imag,
        "beta2_re": beta2.real, "beta2_im": beta2.imag,
        "n_max": "", "total_mass": "", "mean_n1": "", "mean_n2": "", "mean_n1n2": "", "g2": "",
        "error": "",
    }
    try:
        report = validate(p)
        if not report.passed:
            raise HempssError("non-canonical grid point")
        w = normalize(wave_params(p, beta1, beta2), q)
        g = pnd_adaptive(w, p, q)
        m = moments(g)
    except HempssError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}".replace(",", ";")
        return row
    row.update(
        n_max=g.n_max, total_mass=g.total_mass, mean_n1=m.mean_n1, mean_n2=m.mean_n2,
        mean_n1n2=m.mean_n1n2, g2=m.g2_cross,
    )
    return row


def _run(points, q, threads):
    if threads <= 1:
        rows = [_point(p, b1, b2, q) for p, b1, b2 in points]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda t: _point(t[0], t[1], t[2], q), points))
    return SweepTable(rows=rows)


def sweep_gamma(template, beta, gamma_values, q=QuadratureConfig(), threads=1):
    """Moments against ``|gamma| = |chi|`` with every other parameter from ``template``."""
    b1, b2 = _betas(beta)
    points = [(template.replace(gamma_mod=g, chi_mod=g), b1, b2) for g in gamma_values]
    return _run(points, q, threads)


def sweep_theta(template, beta, theta1_grid, theta2_grid, q=QuadratureConfig(), threads=1):
    """Moments on a ``(theta1, theta2)`` grid, rows ordered theta1-major.

    ``phi`` follows ``theta1 + theta2`` so that the template's
    ``theta1 + theta2 - phi`` stays fixed; ``delta2`` is shifted along with
    ``phi`` to keep ``delta1 + delta2 - phi`` fixed too.
    """
    b1, b2 = _betas(beta)
    t_sum, d_sum = template.theta_sum, template.delta_sum
    points = []
    for t1 in theta1_grid:
        for t2 in theta2_grid:
            phi = t1 + t2 - t_sum
            points.append((
                template.replace(theta1=t1, theta2=t2, phi=phi, delta2=d_sum + phi - template.delta1),
                b1, b2,
            ))
    return _run(points, q, threads)
