"""Susinos: vacuum-supported combinations that only pick up a phase.

``A_pm = P0 (a -/+ b)`` with ``P0`` the projector onto the Fock vacuum
(``f(b^+b)`` is the indicator of ``n_b = 0``).  Under ``exp(i s G)`` they
transform as ``A_pm -> exp(+/- i s) A_pm``.
"""

from __future__ import annotations

from math import factorial
from typing import NamedTuple

import numpy as np

from . import fock
from .dynamics import (
    SpectralEvolution,
    SuperchargeSpec,
    build_G,
    build_GA,
    heisenberg,
    opnorm,
)
from .fock import ConfigError, ModeConfig, Operator, anticomm, comm, dag


class SusinoPair(NamedTuple):
    A_plus: Operator
    A_minus: Operator
    P0: Operator


def _single_pair(config: ModeConfig):
    if (config.n_fermion, config.n_boson) != (1, 1):
        raise ConfigError("susinos live on one fermion and one boson mode")
    a = fock.annihilator(config, "fermion", 0)
    b = fock.annihilator(config, "boson", 0)
    return a, b


def build_P0(config: ModeConfig) -> Operator:
    """``P0 = a a^+ f(b^+ b)`` = projector onto the vacuum."""
    _single_pair(config)
    P0 = np.zeros((config.dim, config.dim), dtype=complex)
    vac = fock.basis_index(config, (0,), (0,))
    P0[vac, vac] = 1.0
    return P0


def build_susinos(config: ModeConfig) -> SusinoPair:
    a, b = _single_pair(config)
    P0 = build_P0(config)
    return SusinoPair(P0 @ (a - b), P0 @ (a + b), P0)


def susino_evolution(pair: SusinoPair, G: Operator, s: float) -> tuple[Operator, Operator]:
    U = SpectralEvolution(G).unitary(s)
    return heisenberg(pair.A_plus, U), heisenberg(pair.A_minus, U)


def phase_of(X: Operator, Y: Operator) -> tuple[complex, float]:
    """Best ``c`` with ``Y ~ c X`` and the relative residual ``|Y - c X| / |X|``."""
    x, y = np.ravel(X), np.ravel(Y)
    nx = np.vdot(x, x).real
    if nx == 0:
        raise ValueError("cannot extract a phase relative to the zero operator")
    c = np.vdot(x, y) / nx
    return complex(c), float(np.linalg.norm(y - c * x) / np.sqrt(nx))


def statistics_report(pair: SusinoPair) -> dict:
    """Neither boson nor fermion: both brackets with the adjoint miss the identity."""
    one = np.eye(pair.P0.shape[0])
    out = {}
    for name, A in (("plus", pair.A_plus), ("minus", pair.A_minus)):
        out[f"commutator_defect_{name}"] = opnorm(comm(A, dag(A)) - one)
        out[f"anticommutator_defect_{name}"] = opnorm(anticomm(A, dag(A)) - one)
        out[f"square_{name}"] = fock.max_abs(A @ A)
    return out


def exciton_phases(pair: SusinoPair, G: Operator, s: float) -> dict:
    """Phase rates ``gamma`` under ``exp(i s G)``: +/-1 for ``A_pm``, 0 or +/-2 for products.

    In the Fock representation ``A_pm A_mp^+`` vanishes (the two susinos
    annihilate orthogonal vectors into the vacuum), so the excitons are
    taken in the order ``A_mp^+ A_pm``.
    """
    U = SpectralEvolution(G).unitary(s)
    Ap, Am = pair.A_plus, pair.A_minus
    products = {
        "A+": Ap,
        "A-": Am,
        "A+^ A+": dag(Ap) @ Ap,
        "A-^ A-": dag(Am) @ Am,
        "A-^ A+": dag(Am) @ Ap,
        "A+^ A-": dag(Ap) @ Am,
    }
    out = {}
    for name, X in products.items():
        c, resid = phase_of(X, heisenberg(X, U))
        out[name] = {"gamma": float(np.angle(c) / s), "modulus": abs(c), "residual": resid}
    return out


def _susino_coefficient(k: int) -> float:
    # makes <L_k|L_k> = k so that A_(m,n) A_(n,r) = n A_(m,r)
    return np.sqrt(k / (2.0 * factorial(k - 1)))


def build_A_mn(config: ModeConfig, m: int, n: int, sign: int = +1) -> Operator:
    """Generalised susino ``A_(m,n)+/-`` absorbing ``n`` and creating ``m`` quanta.

    ``A = c_m c_n (a^+ b^+^{m-1} -/+ b^+^m / sqrt(m)) P0 (a b^{n-1} -/+ b^n / sqrt(n))``
    with ``c_k = sqrt(k / (2 (k-1)!))``.  The two factors are eigenvectors of
    ``G`` with eigenvalues ``-/+ sqrt(m)`` and ``-/+ sqrt(n)``, which gives

    * ``A_(m,n)^+ = A_(n,m)``,
    * ``A_(m,n) A_(n,r) = n A_(m,r)``,
    * ``exp(isG) A_(m,n) exp(-isG) = exp(+/- i s (sqrt(n) - sqrt(m))) A_(m,n)``,

    and ``A_(1,1)+/- = A_pm^+ A_pm / 2``.
    """
    if m < 1 or n < 1:
        raise ConfigError("m and n must be >= 1")
    if config.boson_cutoff < m + n + 2:
        raise ConfigError(f"cutoff {config.boson_cutoff} too small for (m, n) = ({m}, {n})")
    if sign not in (+1, -1):
        raise ConfigError("sign must be +1 or -1")
    a, b = _single_pair(config)
    ad, bd = dag(a), dag(b)
    P0 = build_P0(config)
    mp = np.linalg.matrix_power

    def left(k):
        return _susino_coefficient(k) * (ad @ mp(bd, k - 1) - sign * mp(bd, k) / np.sqrt(k))

    return left(m) @ P0 @ dag(left(n))


def ga_oscillation(pair: SusinoPair, config: ModeConfig, r: float) -> tuple[Operator, Operator]:
    """Conjugation by ``exp(i r G_A)``; rotates ``(A+, A-)`` rigidly."""
    U = SpectralEvolution(build_GA(config)).unitary(r)
    return heisenberg(pair.A_plus, U), heisenberg(pair.A_minus, U)


def perturbed_evolution(config: ModeConfig, alpha: float, t: float) -> dict:
    """Evolution under ``H_alpha = H + alpha G + alpha^2/4``.

    Reports the identity defect ``|H_alpha - (G + alpha/2)^2|``, the phases
    acquired by ``A_pm``, and how far ``a(t)`` and ``b(t)`` are from being
    multiples of ``a`` and ``b``.
    """
    G = build_G(SuperchargeSpec(config))
    H = G @ G
    one = np.eye(config.dim)
    H_alpha = H + alpha * G + alpha**2 / 4 * one
    shifted = G + alpha / 2 * one
    w, V = np.linalg.eigh(H_alpha)
    U = (V * np.exp(1j * w * t)) @ V.conj().T
    pair = build_susinos(config)
    a, b = _single_pair(config)
    out = {"alpha": alpha, "t": t, "identity_defect": fock.max_abs(H_alpha - shifted @ shifted)}
    for name, X in (("A+", pair.A_plus), ("A-", pair.A_minus), ("a", a), ("b", b)):
        c, resid = phase_of(X, heisenberg(X, U))
        out[name] = {"phase": float(np.angle(c)), "modulus": abs(c), "residual": resid}
    return out
