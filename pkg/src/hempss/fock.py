"""Truncated two-mode Fock space.

Basis states ``|n1, n2>`` with ``0 <= n1 <= n1_max`` and ``0 <= n2 <= n2_max``
are stored row-major in ``n1``: flat index ``n1 * (n2_max + 1) + n2``.  The
order is part of the serialized format and must not change.

Ladder monomials are kept as CSR matrices; an operator whose fill exceeds 25%
is converted to a dense array.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ConvergenceError, DimensionError, InvalidCutoffError, NormalizationError

DENSE_FILL_THRESHOLD = 0.25
DUMP_THRESHOLD = 1e-15


@dataclass(frozen=True)
class FockCutoff:
    n1_max: int
    n2_max: int

    def __post_init__(self):
        for name in ("n1_max", "n2_max"):
            value = getattr(self, name)
            if int(value) != value or value < 0:
                raise InvalidCutoffError(f"{name} must be a non-negative integer, got {value!r}")

    @classmethod
    def square(cls, n_max):
        return cls(int(n_max), int(n_max))

    @classmethod
    def for_mean_photons(cls, mean1, mean2=None):
        """Cutoff from the Gaussian-tail heuristic ``ceil(m + 8 sqrt(m) + 10)`` per mode."""
        mean2 = mean1 if mean2 is None else mean2
        return cls(default_cutoff(mean1), default_cutoff(mean2))

    @property
    def dim(self):
        return (self.n1_max + 1) * (self.n2_max + 1)

    @property
    def shape(self):
        return (self.n1_max + 1, self.n2_max + 1)

    def index(self, n1, n2):
        if not (0 <= n1 <= self.n1_max and 0 <= n2 <= self.n2_max):
            raise IndexError(f"|{n1},{n2}> outside cutoff {self.as_list()}")
        return n1 * (self.n2_max + 1) + n2

    def labels(self):
        """Arrays ``(n1, n2)`` of photon numbers for every flat index."""
        return np.divmod(np.arange(self.dim), self.n2_max + 1)

    def as_list(self):
        return [self.n1_max, self.n2_max]


def default_cutoff(mean_photons):
    mean_photons = max(float(mean_photons), 0.0)
    return int(math.ceil(mean_photons + 8.0 * math.sqrt(mean_photons) + 10.0))


def _store(matrix):
    """Apply the storage policy: sparse CSR unless more than 25% filled."""
    if sp.issparse(matrix):
        matrix = matrix.tocsr()
        matrix.sum_duplicates()
        matrix.eliminate_zeros()
        n = matrix.shape[0] * matrix.shape[1]
        if n and matrix.nnz / n > DENSE_FILL_THRESHOLD:
            return matrix.toarray()
        return matrix
    return np.asarray(matrix, dtype=complex)


@dataclass(frozen=True, eq=False)
class FockState:
    amplitudes: np.ndarray
    cutoff: FockCutoff

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape[0] != self.cutoff.dim:
            raise DimensionError(
                f"state has {amps.shape[0]} amplitudes, cutoff {self.cutoff.as_list()} needs {self.cutoff.dim}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("state amplitudes must be finite")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, cutoff, n1, n2):
        amps = np.zeros(cutoff.dim, dtype=complex)
        amps[cutoff.index(n1, n2)] = 1.0
        return cls(amps, cutoff)

    @classmethod
    def vacuum(cls, cutoff):
        return cls.basis(cutoff, 0, 0)

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self):
        n = self.norm()
        if n == 0:
            raise NormalizationError("cannot normalize the zero vector")
        return FockState(self.amplitudes / n, self.cutoff)

    def amplitude(self, n1, n2):
        return self.amplitudes[self.cutoff.index(n1, n2)]

    def as_grid(self):
        """Amplitudes reshaped to ``(n1_max + 1, n2_max + 1)``."""
        return self.amplitudes.reshape(self.cutoff.shape)

    def inner(self, other):
        """``<self|other>``."""
        _check_same_cutoff(self.cutoff, other.cutoff)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def with_fixed_phase(self):
        """Copy whose largest-magnitude amplitude is real and positive."""
        k = int(np.argmax(np.abs(self.amplitudes)))
        phase = np.exp(-1j * np.angle(self.amplitudes[k]))
        return FockState(self.amplitudes * phase, self.cutoff)

    def to_dict(self):
        n1, n2 = self.cutoff.labels()
        keep = np.abs(self.amplitudes) >= DUMP_THRESHOLD
        entries = [
            [int(i), int(j), float(c.real), float(c.imag)]
            for i, j, c in zip(n1[keep], n2[keep], self.amplitudes[keep])
        ]
        return {"cutoff": self.cutoff.as_list(), "entries": entries}

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data):
        cutoff = FockCutoff(*data["cutoff"])
        amps = np.zeros(cutoff.dim, dtype=complex)
        for n1, n2, re, im in data["entries"]:
            amps[cutoff.index(int(n1), int(n2))] = complex(re, im)
        return cls(amps, cutoff)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class FockOperator:
    matrix: object
    cutoff: FockCutoff

    def __post_init__(self):
        m = _store(self.matrix)
        if m.shape != (self.cutoff.dim, self.cutoff.dim):
            raise DimensionError(f"matrix shape {m.shape} does not match cutoff {self.cutoff.as_list()}")
        if not sp.issparse(m):
            m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def is_sparse(self):
        return sp.issparse(self.matrix)

    def toarray(self):
        return self.matrix.toarray() if self.is_sparse else np.array(self.matrix)

    def dag(self):
        return adjoint(self)

    def _binary(self, other, fn):
        if isinstance(other, FockOperator):
            _check_same_cutoff(self.cutoff, other.cutoff)
            return FockOperator(fn(self.matrix, other.matrix), self.cutoff)
        return NotImplemented

    def __add__(self, other):
        if np.isscalar(other):
            return FockOperator(self.matrix + other * sp.identity(self.cutoff.dim, format="csr"), self.cutoff)
        return self._binary(other, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other):
        if np.isscalar(other):
            return self + (-other)
        return self._binary(other, lambda x, y: x - y)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FockOperator(-self.matrix, self.cutoff)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return FockOperator(self.matrix * scalar, self.cutoff)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def __matmul__(self, other):
        if isinstance(other, FockState):
            _check_same_cutoff(self.cutoff, other.cutoff)
            return FockState(self.matrix @ other.amplitudes, self.cutoff)
        return compose(self, other)

    def __pow__(self, k):
        if int(k) != k or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        out = identity(self.cutoff)
        for _ in range(int(k)):
            out = out @ self
        return out

    def apply(self, amplitudes):
        return self.matrix @ amplitudes

    def projected(self, max_total):
        """Dense block on the subspace ``n1 + n2 <= max_total``."""
        n1, n2 = self.cutoff.labels()
        idx = np.flatnonzero(n1 + n2 <= max_total)
        if self.is_sparse:
            return self.matrix[idx][:, idx].toarray()
        return np.asarray(self.matrix)[np.ix_(idx, idx)]

    def projected_max_abs(self, max_total):
        block = self.projected(max_total)
        return float(np.abs(block).max()) if block.size else 0.0

    def to_dict(self):
        coo = sp.coo_matrix(self.matrix)
        n1, n2 = self.cutoff.labels()
        keep = np.abs(coo.data) >= DUMP_THRESHOLD
        entries = [
            [int(n1[i]), int(n2[i]), int(n1[j]), int(n2[j]), float(c.real), float(c.imag)]
            for i, j, c in sorted(zip(coo.row[keep], coo.col[keep], coo.data[keep]), key=lambda t: (t[0], t[1]))
        ]
        return {"cutoff": self.cutoff.as_list(), "entries": entries}

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data):
        cutoff = FockCutoff(*data["cutoff"])
        rows, cols, vals = [], [], []
        for m1, m2, n1, n2, re, im in data["entries"]:
            rows.append(cutoff.index(int(m1), int(m2)))
            cols.append(cutoff.index(int(n1), int(n2)))
            vals.append(complex(re, im))
        mat = sp.csr_matrix((vals, (rows, cols)), shape=(cutoff.dim, cutoff.dim), dtype=complex)
        return cls(mat, cutoff)


def _check_same_cutoff(c1, c2):
    if c1 != c2:
        raise DimensionError(f"cutoff mismatch: {c1.as_list()} vs {c2.as_list()}")


def identity(cutoff):
    return FockOperator(sp.identity(cutoff.dim, dtype=complex, format="csr"), cutoff)


def zero_operator(cutoff):
    return FockOperator(sp.csr_matrix((cutoff.dim, cutoff.dim), dtype=complex), cutoff)


def make_mode_operators(cutoff):
    """Annihilation operators ``(a1, a2)`` on the truncated two-mode space."""
    if cutoff.n1_max < 1 or cutoff.n2_max < 1:
        raise InvalidCutoffError(f"mode operators need cutoffs >= 1, got {cutoff.as_list()}")

    def ladder(n_max):
        return sp.diags(np.sqrt(np.arange(1, n_max + 1, dtype=float)), 1, format="csr", dtype=complex)

    eye1 = sp.identity(cutoff.n1_max + 1, dtype=complex, format="csr")
    eye2 = sp.identity(cutoff.n2_max + 1, dtype=complex, format="csr")
    a1 = sp.kron(ladder(cutoff.n1_max), eye2, format="csr")
    a2 = sp.kron(eye1, ladder(cutoff.n2_max), format="csr")
    return FockOperator(a1, cutoff), FockOperator(a2, cutoff)


def compose(A, B):
    """Operator product ``A B``."""
    _check_same_cutoff(A.cutoff, B.cutoff)
    return FockOperator(A.matrix @ B.matrix, A.cutoff)


def adjoint(A):
    m = A.matrix
    return FockOperator(m.conj().T if not A.is_sparse else m.conj().transpose(), A.cutoff)


def commutator(A, B):
    return compose(A, B) - compose(B, A)


def _norm1(matrix):
    if sp.issparse(matrix):
        return float(abs(matrix).sum(axis=0).max()) if matrix.nnz else 0.0
    return float(np.abs(matrix).sum(axis=0).max()) if matrix.size else 0.0


def exp_apply(A, v, tol=1e-12, max_terms=80, theta=1.0):
    """Return ``exp(A) v`` by a scaled Taylor series.

    The exponent is split into ``s = ceil(||A||_1 / theta)`` equal steps and
    each step's series is summed until two consecutive terms fall below
    ``tol / s`` (relative to the current vector norm), so the accumulated
    truncation error stays below ``tol``.

    Raises
    ------
    ConvergenceError
        If a step needs more than ``max_terms`` Taylor terms.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if isinstance(v, FockState):
        _check_same_cutoff(A.cutoff, v.cutoff)
        x = np.array(v.amplitudes, dtype=complex)
    else:
        x = np.array(v, dtype=complex)
    matrix = A.matrix
    if not (np.all(np.isfinite(matrix.data)) if sp.issparse(matrix) else np.all(np.isfinite(matrix))):
        raise ValueError("operator has non-finite entries")

    norm = _norm1(matrix)
    if norm == 0.0:
        return FockState(x, A.cutoff) if isinstance(v, FockState) else x
    steps = max(1, int(math.ceil(norm / theta)))
    step_tol = tol / steps
    for _ in range(steps):
        scale = max(np.linalg.norm(x), 1.0)
        term = x
        total = x.copy()
        below = 0
        for j in range(1, max_terms + 1):
            term = (matrix @ term) / (steps * j)
            total += term
            if np.linalg.norm(term) <= step_tol * scale:
                below += 1
                if below == 2:
                    break
            else:
                below = 0
        else:
            raise ConvergenceError(
                f"Taylor series did not converge within {max_terms} terms",
                residual=float(np.linalg.norm(term)),
            )
        x = total
    return FockState(x, A.cutoff) if isinstance(v, FockState) else x


def pnd_of_state(v):
    """Photon-number distribution ``|<n1,n2|v>|^2`` of a normalized state."""
    from .statistics import PNDGrid

    norm = v.norm()
    if abs(norm - 1.0) > 1e-6:
        raise NormalizationError(f"state norm {norm:.3e} deviates from 1 by more than 1e-6")
    values = np.abs(v.as_grid()) ** 2
    return PNDGrid(values=values, total_mass=float(values.sum()), convergence_estimate=0.0)
