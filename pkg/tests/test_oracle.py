import json
import math

import numpy as np
import pytest

from hempss.canonical import CanonicalBranch, CanonicalParams
from hempss.errors import ConventionMismatchError, NonUniqueStateError, TruncationError, UnsupportedOrderError
from hempss.fock import FockCutoff, FockState, exp_apply, make_mode_operators
from hempss.oracle import (
    CONVENTION,
    Route,
    compare_pnd,
    cubic_generator_heterodyne,
    cubic_generator_rotated,
    joint_eigenstate,
    unitary_construction,
)
from hempss.states import normalize, wave_params
from hempss.statistics import pnd

PI = math.pi


@pytest.fixture(scope="module")
def acc():
    return CanonicalParams(r=0.8, gamma_mod=0.1, chi_mod=0.1, delta1=PI, delta2=0.0)


@pytest.fixture(scope="module")
def eigen40(acc):
    return joint_eigenstate(acc, 1, 1, FockCutoff.square(40))


def test_joint_eigenstate_residuals(eigen40):
    assert eigen40.route is Route.JointEigen
    assert max(eigen40.residual1, eigen40.residual2) < 1e-6
    s1, s2 = eigen40.diagnostics["singular_values"]
    assert s2 > 10 * s1
    assert abs(eigen40.state.norm() - 1) < 1e-12


def test_residual_shrinks_with_cutoff(acc):
    res = [joint_eigenstate(acc, 1, 1, FockCutoff.square(n), tol=1.0).residual1 for n in (24, 32)]
    assert res[1] < res[0] / 5


def test_small_cutoff_is_truncation_error(acc):
    with pytest.raises(TruncationError):
        joint_eigenstate(acc, 1, 1, FockCutoff.square(16))


def test_coherent_limit():
    # r = gamma = 0: b_i = a_i, so the state is a product of coherent states
    p = CanonicalParams(r=0.0)
    o = joint_eigenstate(p, 0.5, -0.3j, FockCutoff.square(20))
    a1, a2 = make_mode_operators(FockCutoff.square(20))
    v = FockState.vacuum(FockCutoff.square(20)).amplitudes
    v = exp_apply(0.5 * a1.dag() - 0.5 * a1, v)
    v = exp_apply(-0.3j * a2.dag() - 0.3j * a2, v)
    assert abs(np.vdot(o.state.amplitudes, v)) == pytest.approx(1.0, abs=1e-10)


def test_tmsv_limit():
    p = CanonicalParams(r=0.8)
    o = joint_eigenstate(p, 0, 0, FockCutoff.square(30))
    P = np.abs(o.state.as_grid()) ** 2
    t = math.tanh(0.8) ** 2
    assert P[0, 0] == pytest.approx(1 / math.cosh(0.8) ** 2, abs=1e-9)
    assert P[1, 1] == pytest.approx(t / math.cosh(0.8) ** 2, abs=1e-9)
    assert (P - np.diag(np.diag(P))).max() < 1e-12


def test_pnd_matches_quadrature(acc, eigen40):
    g = pnd(normalize(wave_params(acc, 1, 1)), acc, 12)
    assert compare_pnd(eigen40, g) < 1e-6


def test_unitary_route(acc, eigen40):
    u = unitary_construction(acc, 1, 1, FockCutoff.square(40), reference=eigen40)
    assert u.route is Route.UnitaryConstruction
    assert u.fidelity_vs_other_route > 1 - 1e-6
    assert max(u.residual1, u.residual2) < 1e-5


def test_generators_agree(acc):
    c = FockCutoff.square(12)
    diff = cubic_generator_rotated(acc, c) - cubic_generator_heterodyne(acc, c)
    assert np.abs(diff.toarray()).max() < 1e-10
    K = cubic_generator_heterodyne(acc, c)
    assert np.abs((K + K.dag()).toarray()).max() < 1e-15


@pytest.fixture(scope="module")
def rotated_case():
    p = CanonicalParams.on_branch(CanonicalBranch.DeltaZero_ThetaPi, 0.5, 0.1, delta1=0.3, theta1=0.7)
    c = FockCutoff.square(40)
    return p, c, joint_eigenstate(p, 0.5, 0.2j, c, tol=1e-4)


def test_convention_table_is_the_only_working_choice(rotated_case):
    p, c, ref = rotated_case
    assert unitary_construction(p, 0.5, 0.2j, c, reference=ref).fidelity_vs_other_route > 0.9999
    for key in CONVENTION:
        flipped = dict(CONVENTION, **{key: -CONVENTION[key]})
        with pytest.raises(ConventionMismatchError):
            unitary_construction(p, 0.5, 0.2j, c, convention=flipped, reference=ref)


def test_unitary_order_guard():
    with pytest.raises(UnsupportedOrderError):
        unitary_construction(CanonicalParams(r=0.1, order=3), 0, 0, FockCutoff.square(10))


def test_non_unique_state(monkeypatch):
    # with b1 = b2 = 0 every state is a joint eigenvector
    from hempss import oracle
    from hempss.fock import zero_operator

    class Zero:
        def __init__(self, c):
            self.b1 = self.b2 = zero_operator(c)
            self.cutoff = c

    monkeypatch.setattr(oracle, "build_transformed_modes", lambda p, c: Zero(c))
    with pytest.raises(NonUniqueStateError):
        joint_eigenstate(CanonicalParams(r=0.0), 0, 0, FockCutoff.square(4))


def test_result_serialization(eigen40):
    d = json.loads(eigen40.to_json())
    assert d["metadata"]["route"] == "JointEigen"
    assert d["metadata"]["fidelity"] is None
    assert d["metadata"]["edge_margin"] == 6
