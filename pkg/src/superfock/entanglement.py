"""Reduced density matrices and entanglement of supercharge eigenvectors.

Entropies are von Neumann entropies in nats.  Subsystems are addressed by
tensor-factor slots in the order of :attr:`ModeConfig.dims` (bosons first,
then fermions).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import xlogy

from . import fock
from .dynamics import SuperchargeSpec, build_G
from .fock import ConfigError, ModeConfig

LN2 = float(np.log(2.0))
PHI_STEPS = 256
KBAR_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)


def phi_grid(steps: int = PHI_STEPS) -> np.ndarray:
    """``[0, pi]`` in steps of ``pi/steps`` (both ends included)."""
    return np.pi * np.arange(steps + 1) / steps


# ---------------------------------------------------------------------------
# partial traces and entropy
# ---------------------------------------------------------------------------

def partial_trace(psi: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Density matrix of the slots ``keep`` for the pure state ``psi``."""
    keep = sorted(set(keep))
    rest = [k for k in range(len(dims)) if k not in keep]
    t = np.asarray(psi).reshape(dims)
    t = np.transpose(t, keep + rest)
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1
    m = t.reshape(dk, -1)
    return m @ m.conj().T


def _slots(config: ModeConfig, keep) -> list[int]:
    if keep == "fermions":
        return list(range(config.n_boson, config.n_boson + config.n_fermion))
    if keep == "bosons":
        return list(range(config.n_boson))
    if isinstance(keep, tuple) and len(keep) == 2 and isinstance(keep[0], str):
        kind, i = keep
        return [i if kind == "boson" else config.n_boson + i]
    return list(keep)


def reduce(state: np.ndarray, config: ModeConfig, keep, atol: float = 1e-10) -> np.ndarray:
    """Reduced density matrix of a normalized state.

    ``keep`` is ``"fermions"``, ``"bosons"``, ``("fermion", i)``,
    ``("boson", j)`` or an explicit list of slots.
    """
    norm = np.linalg.norm(state)
    if abs(norm - 1.0) > atol:
        raise ValueError(f"state is not normalized (norm {norm})")
    return partial_trace(state, config.dims, _slots(config, keep))


def entropy_from_eigenvalues(lam) -> float:
    lam = np.clip(np.real(np.asarray(lam, dtype=complex)), 0.0, None)
    return float(-np.sum(xlogy(lam, lam)))


def entropy(rho: np.ndarray) -> float:
    """``-Tr rho ln rho`` with ``0 ln 0 = 0``."""
    return entropy_from_eigenvalues(np.linalg.eigvalsh(rho))


# ---------------------------------------------------------------------------
# one fermion, one boson
# ---------------------------------------------------------------------------

def single_mode_eigenvectors(config: ModeConfig, n: int) -> tuple[np.ndarray, np.ndarray]:
    """``(|1, n-1> +/- |0, n>)/sqrt(2)``, eigenvectors of ``G`` for ``+/- sqrt(n)``.

    ``n = 0`` returns the vacuum twice.
    """
    if (config.n_fermion, config.n_boson) != (1, 1):
        raise ConfigError("single-mode eigenvectors need F = B = 1")
    if not 0 <= n <= config.boson_cutoff:
        raise ConfigError(f"n = {n} outside [0, {config.boson_cutoff}]")
    if n == 0:
        vac = fock.basis_vector(config, (0,), (0,))
        return vac, vac
    up = fock.basis_vector(config, (1,), (n - 1,))
    down = fock.basis_vector(config, (0,), (n,))
    return (up + down) / np.sqrt(2), (up - down) / np.sqrt(2)


# ---------------------------------------------------------------------------
# two fermions, two bosons
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwoModeParams:
    """Occupations, coupling ``k`` (``k1 = 1``, ``k2 = k``) and weights ``A, B``."""

    n_b1: int = 0
    n_b2: int = 0
    k: float = 1.0
    A: complex = 0.0
    B: complex = 1.0

    def __post_init__(self):
        if abs(abs(self.A) ** 2 + abs(self.B) ** 2 - 1) > 1e-12:
            raise ValueError("weights must satisfy |A|^2 + |B|^2 = 1")

    @property
    def kbar(self) -> float:
        return float(self.k * np.sqrt((self.n_b2 + 1) / (self.n_b1 + 1)))

    @classmethod
    def from_mixing(cls, kbar: float, phi: float, relative_phase: float = 0.0, n_b1: int = 0, n_b2: int = 0):
        """``A = sin(phi) e^{i relative_phase}``, ``B = cos(phi)``, ``k`` chosen to give ``kbar``."""
        k = kbar * np.sqrt((n_b1 + 1) / (n_b2 + 1))
        return cls(n_b1, n_b2, float(k), np.sin(phi) * np.exp(1j * relative_phase), np.cos(phi))

    def config(self) -> ModeConfig:
        return ModeConfig(2, 2, max(self.n_b1, self.n_b2) + 2, couplings=(1.0, self.k))


class TwoModeBasis(NamedTuple):
    psi: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    Phi1: np.ndarray
    Phi2: np.ndarray
    eigenvalue: float


def _psi(config: ModeConfig, n1: int, n2: int):
    # psi_j = |n_f1, n_b1, n_f2, n_b2>
    vec = fock.basis_vector
    return (
        vec(config, (1, 1), (n1, n2)),
        vec(config, (1, 0), (n1, n2 + 1)),
        vec(config, (0, 1), (n1 + 1, n2)),
        vec(config, (0, 0), (n1 + 1, n2 + 1)),
    )


def two_mode_components(kbar: float, sign: int = +1) -> tuple[np.ndarray, np.ndarray]:
    """Components of ``Phi1, Phi2`` on ``psi_1..psi_4``.

    ``Phi1 = (sqrt(1+kbar^2), -/+kbar, +/-1, 0) / sqrt(2(1+kbar^2))`` and
    ``Phi2 = (0, +/-1, +/-kbar, sqrt(1+kbar^2)) / sqrt(2(1+kbar^2))``; the
    upper sign gives ``G``-eigenvalue ``+sqrt(E)``.
    """
    r = np.sqrt(1 + kbar**2)
    norm = np.sqrt(2 * (1 + kbar**2))
    phi1 = np.array([r, -sign * kbar, sign, 0.0]) / norm
    phi2 = np.array([0.0, sign, sign * kbar, r]) / norm
    return phi1, phi2


def two_mode_eigenbasis(params: TwoModeParams, sign: int = +1, config: ModeConfig | None = None) -> TwoModeBasis:
    config = config or params.config()
    if max(params.n_b1, params.n_b2) + 1 > config.boson_cutoff:
        raise ConfigError("occupations exceed the boson cutoff")
    psi = _psi(config, params.n_b1, params.n_b2)
    c1, c2 = two_mode_components(params.kbar, sign)
    Phi1 = sum(c * p for c, p in zip(c1, psi))
    Phi2 = sum(c * p for c, p in zip(c2, psi))
    E = 1 + params.n_b1 + params.k**2 * (1 + params.n_b2)
    return TwoModeBasis(psi, Phi1, Phi2, sign * float(np.sqrt(E)))


def susino_state(params: TwoModeParams, sign: int = +1) -> tuple[np.ndarray, ModeConfig]:
    config = params.config()
    basis = two_mode_eigenbasis(params, sign, config)
    return params.A * basis.Phi1 + params.B * basis.Phi2, config


def density_eigenvalues_closed_form(A: complex, B: complex, kbar: float) -> np.ndarray:
    """Spectrum of the two-fermion reduced state of ``A Phi1 + B Phi2``."""
    if abs(abs(A) ** 2 + abs(B) ** 2 - 1) > 1e-10:
        raise ValueError("weights must satisfy |A|^2 + |B|^2 = 1")
    d = 2 * (1 + kbar**2)
    return np.array([
        abs(A) ** 2 / 2,
        abs(B - kbar * A) ** 2 / d,
        abs(A + kbar * B) ** 2 / d,
        abs(B) ** 2 / 2,
    ])


def mixing_entropy(kbar, phi):
    """Closed-form ``E(kbar, phi)`` for ``A = sin(phi)``, ``B = cos(phi)``; broadcasts."""
    kbar, phi = np.broadcast_arrays(np.asarray(kbar, float), np.asarray(phi, float))
    s, c = np.sin(phi), np.cos(phi)
    d = 2 * (1 + kbar**2)
    lam = [s**2 / 2, (c - kbar * s) ** 2 / d, (s + kbar * c) ** 2 / d, c**2 / 2]
    return -sum(xlogy(x, x) for x in lam)


def brute_force_entropy(params: TwoModeParams, keep="fermions") -> float:
    state, config = susino_state(params)
    return entropy(reduce(state, config, keep))


def entanglement_surface(kbars: Sequence[float] = KBAR_GRID, phis: Sequence[float] | None = None):
    """Rows ``(kbar, phi, E)`` and the max closed-form vs partial-trace discrepancy."""
    phis = phi_grid() if phis is None else np.asarray(phis)
    rows, worst = [], 0.0
    for kb in kbars:
        E = mixing_entropy(kb, phis)
        for phi, e in zip(phis, E):
            bf = brute_force_entropy(TwoModeParams.from_mixing(kb, phi))
            worst = max(worst, abs(bf - e))
            rows.append((float(kb), float(phi), float(e)))
    return rows, worst


# ---------------------------------------------------------------------------
# extremal points
# ---------------------------------------------------------------------------

def extremal_function(phi, kbar: float, literal: bool = False):
    """``dE/dphi`` for the real mixing ``A = sin phi, B = cos phi``.

    ``u v ln(u^2/v^2) / (1+kbar^2) - s c ln(s^2/c^2)`` with ``u = c - kbar s``,
    ``v = s + kbar c``.  ``literal=True`` uses the literal prefactor
    ``1/(2(1+kbar^2))`` instead, whose roots are not stationary points.
    """
    phi = np.asarray(phi, dtype=float)
    s, c = np.sin(phi), np.cos(phi)
    u, v = c - kbar * s, s + kbar * c
    pref = 1.0 / ((2.0 if literal else 1.0) * (1 + kbar**2))
    # x ln(x^2) written through xlogy so that the zeros of u, v, s, c are finite
    return pref * (v * xlogy(u, u * u) - u * xlogy(v, v * v)) - (c * xlogy(s, s * s) - s * xlogy(c, c * c))


class ExtremumResult(NamedTuple):
    kbar: float
    roots: list[float]
    derivative: list[float]
    bracketed: bool


def extremum_solve(kbar: float, literal: bool = False, n_scan: int = 4000, xtol: float = 1e-12) -> ExtremumResult:
    """Roots of :func:`extremal_function` on ``(0, pi)`` by sign-change bracketing."""
    if kbar < 0:
        raise ValueError("kbar must be non-negative")
    # offset grid so that the symmetric roots (pi/4, pi/2, ...) never sit on a node
    grid = np.linspace(0, np.pi, n_scan + 1)[1:-1] + np.pi / (7.3 * n_scan)
    f = extremal_function(grid, kbar, literal)
    roots = []
    for i in np.nonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0)[0]:
        roots.append(brentq(extremal_function, grid[i], grid[i + 1], args=(kbar, literal), xtol=xtol))
    deriv = [central_derivative(kbar, r) for r in roots]
    return ExtremumResult(float(kbar), roots, deriv, bool(roots))


def central_derivative(kbar: float, phi: float, h: float = 1e-5) -> float:
    return float((mixing_entropy(kbar, phi + h) - mixing_entropy(kbar, phi - h)) / (2 * h))


# ---------------------------------------------------------------------------
# single-fermion entanglement
# ---------------------------------------------------------------------------

def per_fermion_entropy(kbar: float, phis: Sequence[float] | None = None):
    """Rows ``(kbar, phi, E1, E2)``: entropy of fermion mode 1 and of fermion mode 2."""
    phis = phi_grid() if phis is None else np.asarray(phis)
    rows = []
    for phi in phis:
        state, config = susino_state(TwoModeParams.from_mixing(kbar, phi))
        e1 = entropy(reduce(state, config, ("fermion", 0)))
        e2 = entropy(reduce(state, config, ("fermion", 1)))
        rows.append((float(kbar), float(phi), e1, e2))
    return rows


def zero_clusters(values: Sequence[float], atol: float = 1e-8) -> int:
    """Number of maximal runs of consecutive entries below ``atol``."""
    mask = np.asarray(values) < atol
    return int(np.sum(mask[1:] & ~mask[:-1]) + (1 if mask.size and mask[0] else 0))


def two_mode_G(params: TwoModeParams) -> np.ndarray:
    return build_G(SuperchargeSpec(params.config()))
