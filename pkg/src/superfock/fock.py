"""Truncated Bose-Fermi Fock spaces and their ladder operators.

The Hilbert space for ``F`` fermionic and ``B`` bosonic modes is the tensor
product

    H = H_b1 (x) ... (x) H_bB (x) H_f1 (x) ... (x) H_fF

with every boson factor truncated to occupations ``0..cutoff``.  Basis
vectors are enumerated lexicographically over
``(n_b1, ..., n_bB, n_f1, ..., n_fF)`` with the last slot varying fastest,
so fermionic slots always vary fastest.  See ``docs/basis.md``.

Fermionic annihilators carry a Jordan-Wigner string over the lower-indexed
fermion modes, which makes ``|n_f1, n_f2, ...> = (a_1^+)^{n_f1} (a_2^+)^{n_f2} ... |0>``.

All operators are dense complex ``numpy`` arrays up to ``DENSE_LIMIT`` and
``scipy.sparse`` CSR matrices above it.  Cached operators are returned
read-only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import NamedTuple, Union

import numpy as np
import scipy.sparse as sp

Operator = Union[np.ndarray, sp.csr_matrix]

DENSE_LIMIT = 4096
DEFAULT_MAX_DIM = 1 << 20
ATOL = 1e-10


class ConfigError(ValueError):
    """Invalid mode configuration or precondition violation."""


@dataclass(frozen=True)
class ModeConfig:
    """Mode counts, boson cutoff and couplings of a truncated Fock space.

    ``couplings`` defaults to all ones.  ``safe_margin`` is the default
    margin used by :func:`safe_projector`.
    """

    n_fermion: int = 1
    n_boson: int = 1
    boson_cutoff: int = 12
    couplings: tuple[float, ...] = field(default=())
    safe_margin: int = 0
    max_dim: int = DEFAULT_MAX_DIM

    def __post_init__(self):
        if self.n_fermion < 1 or self.n_boson < 1:
            raise ConfigError("need at least one fermionic and one bosonic mode")
        if self.boson_cutoff < 2:
            raise ConfigError(f"boson cutoff must be >= 2, got {self.boson_cutoff}")
        if not self.couplings:
            object.__setattr__(self, "couplings", (1.0,) * self.n_fermion)
        else:
            object.__setattr__(self, "couplings", tuple(float(k) for k in self.couplings))
        if len(self.couplings) != self.n_fermion:
            raise ConfigError(
                f"expected {self.n_fermion} couplings, got {len(self.couplings)}"
            )
        if not 0 <= self.safe_margin <= self.boson_cutoff:
            raise ConfigError(
                f"safe margin {self.safe_margin} outside [0, {self.boson_cutoff}]"
            )
        if self.dim > self.max_dim:
            raise ConfigError(f"Hilbert dimension {self.dim} exceeds budget {self.max_dim}")

    @property
    def boson_dim(self) -> int:
        return self.boson_cutoff + 1

    @property
    def dims(self) -> tuple[int, ...]:
        """Tensor factor dimensions in enumeration order (bosons, then fermions)."""
        return (self.boson_dim,) * self.n_boson + (2,) * self.n_fermion

    @property
    def dim(self) -> int:
        return 2**self.n_fermion * self.boson_dim**self.n_boson

    def with_cutoff(self, cutoff: int) -> "ModeConfig":
        return ModeConfig(
            self.n_fermion, self.n_boson, cutoff, self.couplings,
            min(self.safe_margin, cutoff), self.max_dim,
        )


class BasisState(NamedTuple):
    fermion_occ: tuple[int, ...]
    boson_occ: tuple[int, ...]


def enumerate_basis(config: ModeConfig) -> list[BasisState]:
    """All basis states in index order; fermionic slots vary fastest."""
    ranges = [range(config.boson_dim)] * config.n_boson + [range(2)] * config.n_fermion
    return [
        BasisState(tuple(occ[config.n_boson:]), tuple(occ[: config.n_boson]))
        for occ in itertools.product(*ranges)
    ]


def basis_index(config: ModeConfig, fermion_occ, boson_occ) -> int:
    """Position of ``|fermion_occ, boson_occ>`` in :func:`enumerate_basis`."""
    occ = tuple(boson_occ) + tuple(fermion_occ)
    if len(occ) != len(config.dims):
        raise ConfigError("occupation tuple has wrong length")
    for n, d in zip(occ, config.dims):
        if not 0 <= n < d:
            raise ConfigError(f"occupation {occ} outside the truncated space")
    return int(np.ravel_multi_index(occ, config.dims))


def basis_vector(config: ModeConfig, fermion_occ, boson_occ) -> np.ndarray:
    v = np.zeros(config.dim, dtype=complex)
    v[basis_index(config, fermion_occ, boson_occ)] = 1.0
    return v


def _finish(m: sp.spmatrix, dim: int) -> Operator:
    if dim <= DENSE_LIMIT:
        out = np.asarray(m.toarray(), dtype=complex)
        out.setflags(write=False)
        return out
    return sp.csr_matrix(m, dtype=complex)


def _embed(config: ModeConfig, slot: int, local: sp.spmatrix, jw: bool = False) -> sp.spmatrix:
    z = sp.diags([1.0, -1.0])
    factors = []
    for k, d in enumerate(config.dims):
        if k == slot:
            factors.append(local)
        elif jw and config.n_boson <= k < slot:
            factors.append(z)
        else:
            factors.append(sp.identity(d))
    return reduce(lambda x, y: sp.kron(x, y, format="csr"), factors)


@lru_cache(maxsize=256)
def annihilator(config: ModeConfig, kind: str, index: int) -> Operator:
    """Annihilator of fermion or boson mode ``index`` (0-based).

    Bosons: ``b|n> = sqrt(n)|n-1>``, truncated at the cutoff.  Fermions
    carry the Jordan-Wigner sign string so that distinct modes anticommute.
    """
    if kind == "boson":
        if not 0 <= index < config.n_boson:
            raise ConfigError(f"boson index {index} out of range")
        local = sp.diags(np.sqrt(np.arange(1, config.boson_dim, dtype=float)), 1)
        m = _embed(config, index, local)
    elif kind == "fermion":
        if not 0 <= index < config.n_fermion:
            raise ConfigError(f"fermion index {index} out of range")
        local = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
        m = _embed(config, config.n_boson + index, local, jw=True)
    else:
        raise ConfigError(f"unknown mode kind {kind!r}")
    return _finish(m, config.dim)


def creator(config: ModeConfig, kind: str, index: int) -> Operator:
    return dag(annihilator(config, kind, index))


def dag(x: Operator) -> Operator:
    return x.conj().T


def identity(config: ModeConfig) -> Operator:
    return _finish(sp.identity(config.dim, format="csr"), config.dim)


def _occupations(config: ModeConfig) -> np.ndarray:
    """(dim, n_boson + n_fermion) integer occupation table in index order."""
    return np.array(np.unravel_index(np.arange(config.dim), config.dims)).T


def _diag(values: np.ndarray, dim: int) -> Operator:
    return _finish(sp.diags(values.astype(complex)), dim)


class NumberOps(NamedTuple):
    N_f: Operator
    N_b: Operator
    N: Operator


@lru_cache(maxsize=64)
def number_ops(config: ModeConfig) -> NumberOps:
    """Total fermion number, boson number and their sum, all diagonal."""
    occ = _occupations(config)
    nb = occ[:, : config.n_boson].sum(axis=1)
    nf = occ[:, config.n_boson:].sum(axis=1)
    return NumberOps(_diag(nf, config.dim), _diag(nb, config.dim), _diag(nf + nb, config.dim))


def mode_number(config: ModeConfig, kind: str, index: int) -> Operator:
    occ = _occupations(config)
    col = index if kind == "boson" else config.n_boson + index
    return _diag(occ[:, col], config.dim)


@lru_cache(maxsize=64)
def parity(config: ModeConfig) -> Operator:
    """Fermionic parity ``(-1)^{N_f}``."""
    nf = _occupations(config)[:, config.n_boson:].sum(axis=1)
    return _diag((-1.0) ** nf, config.dim)


def safe_projector(config: ModeConfig, margin: int | None = None) -> Operator:
    """Projector onto basis states with every boson occupation <= cutoff - margin."""
    m = config.safe_margin if margin is None else margin
    if not 0 <= m <= config.boson_cutoff:
        raise ConfigError(f"margin {m} outside [0, {config.boson_cutoff}]")
    occ = _occupations(config)[:, : config.n_boson]
    keep = (occ <= config.boson_cutoff - m).all(axis=1)
    return _diag(keep.astype(float), config.dim)


def comm(x: Operator, y: Operator) -> Operator:
    if x.shape != y.shape:
        raise ConfigError(f"dimension mismatch {x.shape} vs {y.shape}")
    return x @ y - y @ x


def anticomm(x: Operator, y: Operator) -> Operator:
    if x.shape != y.shape:
        raise ConfigError(f"dimension mismatch {x.shape} vs {y.shape}")
    return x @ y + y @ x


def max_abs(x: Operator) -> float:
    """Largest absolute entry; the default defect measure."""
    if sp.issparse(x):
        return float(abs(x).max()) if x.nnz else 0.0
    return float(np.max(np.abs(x))) if x.size else 0.0


def defect(x: Operator, y: Operator, projector: Operator | None = None) -> float:
    """Max-entry distance between ``x`` and ``y``, optionally compressed by ``projector``."""
    d = x - y
    if projector is not None:
        d = projector @ d @ projector
    return max_abs(d)
