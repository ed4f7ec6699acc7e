import math

import pytest

from hempss.canonical import CanonicalParams

PI = math.pi


@pytest.fixture
def acceptance_params():
    """r=0.8, |gamma|=|chi|=0.1, all mixing angles 0, delta1=pi."""
    return CanonicalParams(r=0.8, gamma_mod=0.1, chi_mod=0.1, delta1=PI, delta2=0.0)


@pytest.fixture
def symmetric_params():
    return CanonicalParams(r=0.8, gamma_mod=0.1, chi_mod=0.1, delta1=PI / 2, delta2=PI / 2)
