import numpy as np
import pytest

from passivemor import StateSpaceModel, ph_to_statespace, random_ph


@pytest.fixture
def m1():
    """The 1-state reference model Z(s) = 1/(s+1) + 1."""
    return StateSpaceModel(A=[[-1.0]], B=[[1.0]], C=[[1.0]], D=[[1.0]])


def make_strictly_passive(n=6, m=2, seed=0, lambda_min_w=0.5):
    """Random strictly passive state-space model (from a definite
    port-Hamiltonian draw)."""
    return ph_to_statespace(random_ph(n, m, lambda_min_w, seed))


@pytest.fixture
def random_passive():
    return make_strictly_passive
