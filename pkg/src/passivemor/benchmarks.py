"""Deterministic benchmark generators.

An RLC ladder driven at an impedance port (current in, voltage out) and a
random normalized port-Hamiltonian model with a prescribed passivity
radius.  Both are strictly passive by construction and reproducible from
their parameters (the random generator uses numpy's seeded PCG64 stream).
"""

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .model import PortHamiltonianModel, StateSpaceModel
from .passivity import is_strictly_passive

__all__ = ["BenchmarkSpec", "rlc_ladder", "random_ph"]


def rlc_ladder(sections, r_val=1.0, l_val=1.0, c_val=1.0):
    """Single-port RLC ladder with ``2 * sections`` states.

    Topology: node ``k`` carries a capacitor ``C`` to ground and connects
    to node ``k+1`` (the last node to ground) through an inductor ``L`` in
    series with a resistor ``R``.  The port current feeds node 1 through a
    series resistor ``R``, so the driving-point impedance has feedthrough
    ``D = R`` and the model is strictly passive for any positive component
    values (verified on construction).

    States are ``[v_1..v_N, i_1..i_N]`` (capacitor voltages, inductor
    currents); input is the port current, output the port voltage.
    """
    sections = int(sections)
    if sections < 1:
        raise ValueError("need at least one ladder section")
    if min(r_val, l_val, c_val) <= 0:
        raise ValueError("component values must be positive")
    nsec = sections
    n = 2 * nsec
    a = np.zeros((n, n))
    for k in range(nsec):
        # capacitor node balance: C v_k' = i_{k-1} - i_k  (i_0 is the input)
        a[k, nsec + k] = -1.0 / c_val
        if k >= 1:
            a[k, nsec + k - 1] = 1.0 / c_val
        # inductor branch: L i_k' = v_k - v_{k+1} - R i_k  (v_{N+1} = 0)
        a[nsec + k, k] = 1.0 / l_val
        if k + 1 < nsec:
            a[nsec + k, k + 1] = -1.0 / l_val
        a[nsec + k, nsec + k] = -r_val / l_val
    b = np.zeros((n, 1))
    b[0, 0] = 1.0 / c_val
    c = np.zeros((1, n))
    c[0, 0] = 1.0
    d = np.array([[r_val]])
    model = StateSpaceModel(A=a, B=b, C=c, D=d)
    diag = is_strictly_passive(model)
    if not diag:
        raise NumericalError(f"ladder construction is not strictly passive: {diag.reason}")
    return model


def random_ph(n, m, lambda_min_w=0.5, seed=0):
    """Random normalized port-Hamiltonian model with passivity radius
    ``lambda_min_w``.

    The dissipation block ``[[R, P], [P^T, S]]`` is a seeded Gaussian
    symmetric matrix whose spectrum is translated so its smallest
    eigenvalue equals ``lambda_min_w`` exactly; the energy-flux block
    ``[[-J, -G], [G^T, N]]`` is the skew part of a second Gaussian draw.
    ``Q = I``.  Identical ``(n, m, lambda_min_w, seed)`` give bit-identical
    models.
    """
    n, m = int(n), int(m)
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    if lambda_min_w <= 0:
        raise ValueError("lambda_min_w must be positive")
    rng = np.random.default_rng(int(seed))
    gw = rng.standard_normal((n + m, n + m))
    w0 = (gw + gw.T) / 2.0
    evals, q = np.linalg.eigh(w0)
    w = q @ np.diag(evals - evals.min() + float(lambda_min_w)) @ q.T
    w = (w + w.T) / 2.0
    gv = rng.standard_normal((n + m, n + m))
    vph = (gv - gv.T) / 2.0  # [[-J, -G], [G^T, N]]
    return PortHamiltonianModel(
        J=-vph[:n, :n],
        R=w[:n, :n],
        Q=np.eye(n),
        G=-vph[:n, n:],
        P=w[:n, n:],
        N=vph[n:, n:],
        S=w[n:, n:],
    )


@dataclass(frozen=True)
class BenchmarkSpec:
    """Parameters of a benchmark model, buildable and serialization-stable."""

    kind: str
    sections: int = 0
    r_val: float = 1.0
    l_val: float = 1.0
    c_val: float = 1.0
    n: int = 0
    m: int = 0
    lambda_min_w: float = 0.5
    seed: int = 0

    def build(self):
        """Returns ``(state_space, ph_or_None)``."""
        if self.kind == "rlc-ladder":
            if self.sections < 1:
                raise ValueError("rlc-ladder needs sections >= 1")
            return rlc_ladder(self.sections, self.r_val, self.l_val, self.c_val), None
        if self.kind == "random-ph":
            from .model import ph_to_statespace

            ph = random_ph(self.n, self.m, self.lambda_min_w, self.seed)
            return ph_to_statespace(ph), ph
        raise ValueError(f"unknown benchmark kind {self.kind!r}")
