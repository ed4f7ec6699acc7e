"""Multiphoton interaction terms allowed by energy conservation, and pump designs.

A term ``kappa^{js}_{lm} a1^dag^j a2^dag^s a1^l a2^m E_a E_b`` of an order-n
susceptibility couples ``n + 1`` fields.  The classical pumps ``E_a, E_b``
(each ``~ exp(-i Omega t)``) always come as one designated pair.  The
term survives the rotating-wave average when

    (j - l) omega1 + (s - m) omega2 = Omega_a + Omega_b

Kerr self- and cross-phase terms carry no pump and are only generated at
order 3.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import _io
from .errors import (
    AmbiguityError,
    CoverageError,
    IncompleteInputError,
    InfeasibleDesignError,
    UnsupportedOrderError,
)

COMMENSURABILITY_MAX = 6


@dataclass(frozen=True)
class Pump:
    omega: float
    wavevector: tuple | None = None
    amplitude: complex = 1.0

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"pump frequency must be positive, got {self.omega!r}")
        if self.wavevector is not None:
            k = tuple(float(x) for x in self.wavevector)
            if len(k) != 3:
                raise ValueError("wavevector must have three components")
            object.__setattr__(self, "wavevector", k)
        object.__setattr__(self, "amplitude", complex(self.amplitude))

    def to_dict(self):
        return {
            "omega": float(self.omega),
            "wavevector": None if self.wavevector is None else list(self.wavevector),
            "amplitude": [self.amplitude.real, self.amplitude.imag],
        }


@dataclass(frozen=True)
class PumpFactor:
    index: int
    conjugated: bool = False


@dataclass(frozen=True)
class ProcessTerm:
    exponents: tuple
    susceptibility_order: int
    pumps: tuple = ()

    @property
    def kappa_label(self):
        j, s, l, m = self.exponents
        return f"k^{{{j}{s}}}_{{{l}{m}}}"

    @property
    def quantum_degree(self):
        return sum(self.exponents)

    @property
    def is_kerr(self):
        j, s, l, m = self.exponents
        return not self.pumps and (j, s) == (l, m)

    def monomial(self):
        j, s, l, m = self.exponents
        parts = []
        for name, k in (("a1^dag", j), ("a2^dag", s), ("a1", l), ("a2", m)):
            if k:
                parts.append(name if k == 1 else f"{name}^{k}")
        return " ".join(parts) or "1"

    def energy_mismatch(self, mode_freqs, pumps):
        w1, w2 = mode_freqs
        j, s, l, m = self.exponents
        bal = (j - l) * w1 + (s - m) * w2
        for f in self.pumps:
            om = pumps[f.index].omega
            bal += om if f.conjugated else -om
        return abs(bal)

    def to_dict(self):
        j, s, l, m = self.exponents
        return {
            "j": j, "s": s, "l": l, "m": m,
            "order": self.susceptibility_order,
            "pumps": [{"index": f.index, "conjugated": f.conjugated} for f in self.pumps],
            "kappa": self.kappa_label,
        }


@dataclass(frozen=True)
class FrequencyRelation:
    """``sum(omega[lhs]) = sum(omega[rhs])`` over the ``order + 1`` mixing frequencies."""

    lhs_indices: tuple
    rhs_indices: tuple
    order: int

    def __post_init__(self):
        if not self.lhs_indices or not self.rhs_indices:
            raise ValueError("both sides of a frequency relation need at least one frequency")
        if len(self.lhs_indices) + len(self.rhs_indices) != self.order + 1:
            raise ValueError("an order-n relation involves n + 1 frequencies")

    @property
    def shape(self):
        return (len(self.lhs_indices), len(self.rhs_indices))

    def __str__(self):
        lhs = " + ".join(f"w{i + 1}" for i in self.lhs_indices)
        rhs = " + ".join(f"w{i + 1}" for i in self.rhs_indices)
        return f"{lhs} = {rhs}"


def splitting_conditions(order):
    """Distinct ways to split ``order + 1`` frequencies into two balanced sums."""
    if not 2 <= order <= 5:
        raise UnsupportedOrderError(f"splitting conditions are tabulated for orders 2-5, got {order}")
    idx = tuple(range(order + 1))
    return [
        FrequencyRelation(idx[:s], idx[s:], order)
        for s in range(1, (order + 1) // 2 + 1)
    ]


def default_tol(*freqs):
    return 1e-9 * max(freqs)


def check_incommensurate(omega1, omega2, tol=None, q_max=COMMENSURABILITY_MAX):
    """Raise :class:`AmbiguityError` if ``q1 omega1 = q2 omega2`` for some ``q1, q2 <= q_max``.

    Only small integer relations are examined, so this is a heuristic.
    """
    if omega1 <= 0 or omega2 <= 0:
        raise ValueError("mode frequencies must be positive")
    tol = default_tol(omega1, omega2) if tol is None else tol
    for q1 in range(1, q_max + 1):
        for q2 in range(1, q_max + 1):
            if abs(q1 * omega1 - q2 * omega2) < tol:
                raise AmbiguityError(
                    f"mode frequencies are commensurate: {q1}*omega1 = {q2}*omega2"
                )


def consecutive_pairs(n_pumps):
    if n_pumps % 2:
        raise ValueError("pumps are used in pairs; got an odd number")
    return [(i, i + 1) for i in range(0, n_pumps, 2)]


def _conjugate_exponents(e):
    j, s, l, m = e
    return (l, m, j, s)


def _representative(e):
    """Creation-dominant member of a hermitian-conjugate pair."""
    c = _conjugate_exponents(e)
    key = lambda x: (x[0] + x[1] - x[2] - x[3], x)
    return max(e, c, key=key)


def enumerate_terms(order, mode_freqs, pumps, max_mode_exponent=4, tol=None,
                    include_kerr=True, pairs=None):
    """Energy-conserving interaction terms, one per hermitian-conjugate pair.

    ``order`` may be one susceptibility order or an iterable of orders.
    ``pairs`` lists the designated pump pairs (default ``(0,1), (2,3), ...``).
    Output is sorted lexicographically in ``(j, s, l, m)``, then order.
    """
    orders = [order] if isinstance(order, (int, np.integer)) else list(order)
    w1, w2 = mode_freqs
    tol = default_tol(w1, w2, *(p.omega for p in pumps)) if tol is None else tol
    check_incommensurate(w1, w2, tol)
    pairs = consecutive_pairs(len(pumps)) if pairs is None else [tuple(p) for p in pairs]

    found = {}
    rng = range(max_mode_exponent + 1)
    for n in orders:
        if n < 1:
            raise UnsupportedOrderError(f"susceptibility order must be >= 1, got {n}")
        for e in itertools.product(rng, repeat=4):
            j, s, l, m = e
            degree = j + s + l + m
            if degree == 0:
                continue
            bal = (j - l) * w1 + (s - m) * w2
            if degree == n + 1 and include_kerr and n == 3 and abs(bal) < tol and (j, s) == (l, m):
                term = ProcessTerm(e, n, ())
                found.setdefault((_representative(e), n, ()), term)
            if degree != n - 1:
                continue
            for a, b in pairs:
                need = pumps[a].omega + pumps[b].omega
                if abs(bal - need) < tol:
                    fac = (PumpFactor(a), PumpFactor(b))
                    term = ProcessTerm(e, n, fac)
                    rep = _representative(e)
                    if rep == e:
                        found.setdefault((rep, n, (a, b)), term)
    terms = sorted(found.values(), key=lambda t: (t.exponents, t.susceptibility_order, t.pumps))
    for t in terms:
        assert t.energy_mismatch(mode_freqs, pumps) < tol
    return terms


def terms_to_json(terms):
    return _io.dumps17([t.to_dict() for t in terms])


def check_phase_matching(t, mode_wavevectors, pumps, tol=1e-9):
    """``|sum of creation-side k - sum of annihilation-side k|``.

    Returns ``(residual, matched)``.
    """
    k1, k2 = mode_wavevectors
    if k1 is None or k2 is None:
        raise IncompleteInputError("both quantum-mode wavevectors are required")
    k1, k2 = np.asarray(k1, float), np.asarray(k2, float)
    j, s, l, m = t.exponents
    bal = (j - l) * k1 + (s - m) * k2
    for f in t.pumps:
        kv = pumps[f.index].wavevector
        if kv is None:
            raise IncompleteInputError(f"pump {f.index} has no wavevector")
        bal = bal + np.asarray(kv) if f.conjugated else bal - np.asarray(kv)
    res = float(np.linalg.norm(bal))
    return res, res < tol


@dataclass(frozen=True)
class PumpRelation:
    pair: tuple
    total: float
    fraction: float
    process: str

    def to_dict(self):
        return {"pumps": list(self.pair), "sum": self.total, "fraction": self.fraction,
                "process": self.process}


@dataclass(frozen=True)
class PumpDesign:
    omega1: float
    omega2: float
    relations: tuple
    pumps: tuple = field(default=())

    @property
    def sums(self):
        return [r.total for r in self.relations]

    def to_dict(self):
        return {
            "omega1": self.omega1,
            "omega2": self.omega2,
            "relations": [r.to_dict() for r in self.relations],
            "pumps": [p.to_dict() for p in self.pumps],
        }

    def to_json(self):
        return _io.dumps17(self.to_dict())


def _design(omega1, omega2, layout, fractions):
    check_incommensurate(omega1, omega2)
    if fractions is None:
        fractions = [0.5] * len(layout)
    elif np.isscalar(fractions):
        fractions = [float(fractions)] * len(layout)
    if len(fractions) != len(layout):
        raise ValueError(f"need {len(layout)} splitting fractions, got {len(fractions)}")
    relations, pumps = [], []
    for i, ((c1, c2, process), f) in enumerate(zip(layout, fractions)):
        if not 0.0 < f < 1.0:
            raise ValueError("splitting fractions must lie strictly between 0 and 1")
        total = c1 * omega1 + c2 * omega2
        if total <= 0:
            raise InfeasibleDesignError(
                f"pump pair {2 * i},{2 * i + 1} would need a non-positive frequency sum {total:.6g}"
            )
        relations.append(PumpRelation((2 * i, 2 * i + 1), total, float(f), process))
        for om in (f * total, (1.0 - f) * total):
            # collinear propagation in a nondispersive medium: k = omega z-hat
            pumps.append(Pump(om, (0.0, 0.0, om)))
    return PumpDesign(float(omega1), float(omega2), tuple(relations), tuple(pumps))


FOUR_PHOTON_DESIGN = (
    (1, 1, "a1^dag a2^dag; a1^dag^2 a2^dag a1; a1^dag a2^dag^2 a2"),
    (2, 2, "a1^dag^2 a2^dag^2"),
    (3, 0, "a1^dag^3"),
    (0, 3, "a2^dag^3"),
    (2, -1, "a1^dag^2 a2"),
    (-1, 2, "a2^dag^2 a1"),
)

CUBIC_UNITARY_DESIGN = (
    (3, 0, "a1^dag^3"),
    (0, 3, "a2^dag^3"),
    (2, -1, "a1^dag^2 a2"),
    (-1, 2, "a2^dag^2 a1"),
)


def pump_design_four_photon(omega1, omega2, fractions=None):
    """Twelve pumps realizing every monomial of the four-photon Hamiltonian."""
    return _design(omega1, omega2, FOUR_PHOTON_DESIGN, fractions)


def pump_design_hempss(omega1, omega2, fractions=None):
    """Eight pumps realizing the cubic exponent of the state-generating unitary."""
    return _design(omega1, omega2, CUBIC_UNITARY_DESIGN, fractions)


# monomial -> (coefficient name, multiplier)
COEFFICIENT_MAP = {
    (1, 1, 0, 0): ("D1", 1.0),
    (2, 0, 0, 1): ("D2", 1.0),
    (0, 2, 1, 0): ("D2p", 1.0),
    (3, 0, 0, 0): ("D3", 1.0),
    (0, 3, 0, 0): ("D3p", 1.0),
    (2, 2, 0, 0): ("D4", 1.0),
    (2, 1, 1, 0): ("D5", 1.0),
    (1, 2, 0, 1): ("D5", 1.0),
    (2, 0, 2, 0): ("C0", 1.0),
    (0, 2, 0, 2): ("C0", 1.0),
}


@dataclass(frozen=True)
class CouplingAssignment:
    """Required ``kappa * E_a * E_b`` products per monomial.

    ``kerr_ratio`` is ``kappa^{20}_{20} / kappa^{11}_{11}``.  ``kerr_ratio_ok``
    tells whether it is within ``ratio_tol`` of ``reference_kerr_ratio``; it
    is a diagnostic, not a requirement.
    """

    products: dict
    kappas: dict
    kerr_ratio: float
    reference_kerr_ratio: float
    kerr_ratio_ok: bool

    def to_dict(self):
        enc = lambda z: [complex(z).real, complex(z).imag]
        return {
            "products": {k: enc(v) for k, v in self.products.items()},
            "kappas": {k: None if v is None else enc(v) for k, v in self.kappas.items()},
            "kerr_ratio": self.kerr_ratio,
            "reference_kerr_ratio": self.reference_kerr_ratio,
            "kerr_ratio_ok": self.kerr_ratio_ok,
        }

    def to_json(self):
        return _io.dumps17(self.to_dict())


def match_couplings(target, terms, pumps=None, ratio_tol=0.05, reference_kerr_ratio=2.0,
                    cross_kerr_factor=None):
    """Coefficient each process term must carry to reproduce ``target``.

    With ``pumps`` given, the symbolic ``kappa`` values are solved as
    ``product / (E_a E_b)``; otherwise they are left as ``None``.
    """
    from .hamiltonian import CROSS_KERR_FACTOR

    k_cross = CROSS_KERR_FACTOR if cross_kerr_factor is None else cross_kerr_factor
    cmap = dict(COEFFICIENT_MAP)
    cmap[(1, 1, 1, 1)] = ("C0", k_cross)
    by_mono = {}
    for t in terms:
        by_mono.setdefault(t.exponents, t)
    missing = []
    products, kappas = {}, {}
    for mono, (name, mult) in cmap.items():
        value = mult * complex(getattr(target, name))
        if value == 0:
            continue
        t = by_mono.get(mono)
        if t is None:
            missing.append(mono)
            continue
        label = t.kappa_label
        products[label] = value
        if pumps is not None and t.pumps:
            e = np.prod([pumps[f.index].amplitude for f in t.pumps])
            kappas[label] = value / e
        else:
            kappas[label] = value if not t.pumps else None
    if missing:
        err = CoverageError(f"no process term for monomials {sorted(missing)}")
        err.missing = sorted(missing)
        raise err
    self_k = complex(target.C0)
    cross_k = k_cross * self_k
    ratio = (self_k / cross_k).real if cross_k != 0 else math.nan
    ok = bool(abs(ratio - reference_kerr_ratio) <= ratio_tol * abs(reference_kerr_ratio)) if cross_k != 0 else True
    return CouplingAssignment(products, kappas, ratio, reference_kerr_ratio, ok)
