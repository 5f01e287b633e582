"""Gibbs states of one free fermion-boson pair and their behaviour under the flows.

The state is ``omega(X) = Tr(rho X)`` with ``rho = exp(-beta N)/Z`` on the
truncated space.  Every boson-side assertion carries the analytic tail
bound of the truncated geometric distribution as its tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fock
from .dynamics import (
    SpectralEvolution,
    SuperchargeSpec,
    _dense,
    build_G,
    build_GA,
    heisenberg,
    odd_flow_quadratic,
    pairs_to_operator,
    twisted_leibniz,
)
from .fock import ConfigError, ModeConfig, Operator, comm, dag

THERMAL_CUTOFF = 40
# floating-point floor added to the analytic tail bound
ROUNDOFF = 1e-12


@dataclass(frozen=True)
class ThermalParams:
    beta: float
    cutoff: int = THERMAL_CUTOFF

    def __post_init__(self):
        if not self.beta > 0:
            raise ConfigError(f"beta must be positive, got {self.beta}")

    @property
    def x(self) -> float:
        return float(np.exp(self.beta))

    @property
    def tolerance(self) -> float:
        return tail_bound(self.x, self.cutoff) + ROUNDOFF

    def config(self) -> ModeConfig:
        return ModeConfig(1, 1, self.cutoff)


def tail_bound(x: float, cutoff: int) -> float:
    """``(cutoff+1) x^-cutoff / (1 - 1/x)^2``, bounding the truncation error of boson moments."""
    if x <= 1:
        raise ConfigError("x = exp(beta) must exceed 1")
    return float((cutoff + 1) * x ** (-cutoff) / (1 - 1 / x) ** 2)


def gibbs(H: Operator, beta: float) -> np.ndarray:
    """``exp(-beta H) / Tr exp(-beta H)``, shifted by the ground energy to avoid overflow."""
    if not beta > 0:
        raise ConfigError(f"beta must be positive, got {beta}")
    H = _dense(H)
    if np.max(np.abs(H - H.conj().T)) > 1e-12:
        raise ValueError("H is not hermitian")
    w, V = np.linalg.eigh(H)
    p = np.exp(-beta * (w - w[0]))
    p /= p.sum()
    return (V * p) @ V.conj().T


def expect(rho: np.ndarray, X: Operator) -> complex:
    return complex(np.trace(rho @ _dense(X)))


def _setup(params: ThermalParams):
    config = params.config()
    G = _dense(build_G(SuperchargeSpec(config)))
    N = _dense(fock.number_ops(config).N)
    return config, G, N, gibbs(N, params.beta)


def mode_occupation_check(beta: float, cutoff: int = THERMAL_CUTOFF) -> dict:
    """The four occupation expectations against ``1/(1+x), x/(1+x), 1/(x-1), x/(x-1)``."""
    p = ThermalParams(beta, cutoff)
    config, _, _, rho = _setup(p)
    x = p.x
    a = fock.annihilator(config, "fermion", 0)
    b = fock.annihilator(config, "boson", 0)
    # the truncated b b^+ vanishes on the top level; that loss is of tail order
    exact = {
        "a^+a": 1 / (1 + x),
        "aa^+": x / (1 + x),
        "b^+b": 1 / (x - 1),
        "bb^+": x / (x - 1),
    }
    values = {
        "a^+a": expect(rho, dag(a) @ a).real,
        "aa^+": expect(rho, a @ dag(a)).real,
        "b^+b": expect(rho, dag(b) @ b).real,
        "bb^+": expect(rho, b @ dag(b)).real,
    }
    errors = {k: abs(values[k] - exact[k]) for k in exact}
    return {
        "beta": beta, "x": x, "cutoff": cutoff, "tolerance": p.tolerance,
        "values": values, "exact": exact, "errors": errors,
        "passed": all(e <= p.tolerance for e in errors.values()),
    }


def ia_invariance(beta: float, s: float, cutoff: int = THERMAL_CUTOFF) -> dict:
    """``omega(a^+(s) a(s))`` under flow Ia and the vanishing intermediate expectations."""
    p = ThermalParams(beta, cutoff)
    config, G, _, rho = _setup(p)
    a = fock.annihilator(config, "fermion", 0)
    n_f = dag(a) @ a
    U = SpectralEvolution(G).unitary(s)
    evolved = expect(rho, heisenberg(n_f, U)).real
    GA = _dense(build_GA(config))
    return {
        "beta": beta, "s": s, "x": p.x,
        "omega_nf": expect(rho, n_f).real,
        "omega_nf_evolved": evolved,
        "invariance_defect": abs(evolved - 1 / (1 + p.x)),
        "omega_comm_nf_G": abs(expect(rho, comm(n_f, G))),
        "omega_G_comm_nf_G": abs(expect(rho, G @ comm(n_f, G))),
        "omega_comm_G_GA": abs(expect(rho, comm(G, GA))),
    }


def ib_drift(beta: float, s: float, cutoff: int = THERMAL_CUTOFF) -> dict:
    """Drift of ``omega(Q)``, ``Q = a^+ b``, along the Ib flow.

    ``first_order = omega(Q) + s omega(delta Q)`` with ``delta Q`` from the
    twisted product rule; ``all_orders`` evolves ``Q`` exactly on the
    quadratic pair space.  Both should equal ``s omega(H)``.
    """
    p = ThermalParams(beta, cutoff)
    config, G, N, rho = _setup(p)
    a = fock.annihilator(config, "fermion", 0)
    b = fock.annihilator(config, "boson", 0)
    Q = dag(a) @ b
    dQ = twisted_leibniz(dag(a), True, b, False, G)
    first = expect(rho, Q) + s * expect(rho, dQ)
    evolved = pairs_to_operator(config, odd_flow_quadratic({("ad", "b"): 1.0}, s))
    x = p.x
    return {
        "beta": beta, "s": s, "x": x,
        "first_order": complex(first),
        "all_orders": expect(rho, evolved),
        "s_omega_H": s * expect(rho, N).real,
        "exact": s * (1 / (1 + x) + 1 / (x - 1)),
        "delta_Q_minus_H": fock.max_abs(dQ - G @ G),
        "tolerance": abs(s) * tail_bound(x, cutoff) + ROUNDOFF,
    }


def kms_defect(beta: float, cutoff: int = 6, n_samples: int = 20, seed: int = 0) -> float:
    """Max of ``|omega(X Y) - omega(Y e^{-beta H} X e^{beta H})|`` over random monomials.

    ``H = G^2`` on a small space so that ``e^{beta H}`` stays finite.
    """
    config = ModeConfig(1, 1, cutoff)
    G = _dense(build_G(SuperchargeSpec(config)))
    H = G @ G
    rho = gibbs(H, beta)
    w, V = np.linalg.eigh(H)
    fwd = (V * np.exp(-beta * w)) @ V.conj().T
    bwd = (V * np.exp(beta * w)) @ V.conj().T
    a = fock.annihilator(config, "fermion", 0)
    b = fock.annihilator(config, "boson", 0)
    letters = [a, dag(a), b, dag(b)]
    rng = np.random.default_rng(seed)

    def monomial():
        out = np.eye(config.dim, dtype=complex)
        for i in rng.integers(0, 4, size=rng.integers(1, 4)):
            out = out @ letters[i]
        return out

    worst = 0.0
    for _ in range(n_samples):
        X, Y = monomial(), monomial()
        lhs = expect(rho, X @ Y)
        rhs = expect(rho, Y @ fwd @ X @ bwd)
        worst = max(worst, abs(lhs - rhs))
    return worst


def thermal_table(betas, ss, cutoff: int = THERMAL_CUTOFF) -> list[tuple]:
    """Rows ``beta, s, omega_nf, omega_nb, omega_nf_evolved, drift_ib``."""
    rows = []
    for beta in betas:
        occ = mode_occupation_check(beta, cutoff)
        for s in ss:
            inv = ia_invariance(beta, s, cutoff)
            drift = ib_drift(beta, s, cutoff)
            rows.append((
                float(beta), float(s), inv["omega_nf"], occ["values"]["b^+b"],
                inv["omega_nf_evolved"], drift["all_orders"].real,
            ))
    return rows
