"""The Grassmann module A + theta*B over a truncated Fock space.

Elements are stored as (body, soul) pairs.  ``theta**2 = 0`` is structural:
the product never forms a soul-soul term, so the soul is an exact two-sided
ideal.  theta anticommutes with odd and commutes with even operators, which
is encoded by the parity twist ``kappa(X) = P X P`` with ``P = (-1)^{N_f}``
and the rule ``theta X = kappa(X) theta``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import fock
from .fock import ModeConfig, Operator


@dataclass(frozen=True)
class GradedElement:
    body: Operator
    soul: Operator

    def __add__(self, other: "GradedElement") -> "GradedElement":
        return GradedElement(self.body + other.body, self.soul + other.soul)

    def __sub__(self, other: "GradedElement") -> "GradedElement":
        return GradedElement(self.body - other.body, self.soul - other.soul)

    def __neg__(self) -> "GradedElement":
        return GradedElement(-self.body, -self.soul)

    def scale(self, c: complex) -> "GradedElement":
        return GradedElement(c * self.body, c * self.soul)

    def is_soul(self, atol: float = 0.0) -> bool:
        return fock.max_abs(self.body) <= atol


def distance(x: GradedElement, y: GradedElement, projector: Operator | None = None) -> float:
    return max(
        fock.defect(x.body, y.body, projector),
        fock.defect(x.soul, y.soul, projector),
    )


class GradedAlgebra:
    """Twisted product and conjugation on body/soul pairs for one config."""

    def __init__(self, config: ModeConfig):
        self.config = config
        self.P = fock.parity(config)
        self._zero = fock.identity(config) * 0
        self._one = fock.identity(config)

    # -- elements ------------------------------------------------------------
    def element(self, body: Operator | None = None, soul: Operator | None = None) -> GradedElement:
        return GradedElement(
            self._zero if body is None else body,
            self._zero if soul is None else soul,
        )

    def one(self) -> GradedElement:
        return self.element(self._one)

    def theta(self) -> GradedElement:
        return self.element(soul=self._one)

    # -- structure -----------------------------------------------------------
    def parity_twist(self, x: Operator) -> Operator:
        """``kappa(x) = P x P``; odd parts flip sign, even parts are fixed."""
        return self.P @ x @ self.P

    def gmul(self, x: GradedElement, y: GradedElement) -> GradedElement:
        if x.body.shape != y.body.shape:
            raise fock.ConfigError("dimension mismatch")
        return GradedElement(
            x.body @ y.body,
            self.parity_twist(x.body) @ y.soul + x.soul @ y.body,
        )

    def gstar(self, x: GradedElement) -> GradedElement:
        # (A + theta B)* = A* + B* theta = A* + theta kappa(B*)
        return GradedElement(fock.dag(x.body), self.parity_twist(fock.dag(x.soul)))

    def grassmann_unitary(self, G: Operator, s: float) -> GradedElement:
        """``exp(i s G_theta)`` with ``G_theta = -i theta G``; exactly ``1 + s theta G``."""
        return self.element(self._one, s * G)

    def grassmann_flow(self, x: GradedElement, G: Operator, s: float) -> GradedElement:
        U = self.grassmann_unitary(G, s)
        return self.gmul(self.gmul(U, x), self.gstar(U))

    @staticmethod
    def body_projection(x: GradedElement) -> Operator:
        """Image in a Hilbert-space representation, where the soul is zero."""
        return x.body


def generator_theta(G: Operator, algebra: GradedAlgebra) -> GradedElement:
    """``G_theta = -i theta G`` as a pure-soul element."""
    return algebra.element(soul=-1j * G)


def theta_matrix_model(config: ModeConfig):
    """Matrix model of theta on ``H (x) C^2``.

    Returns ``(theta, embed)``: ``theta = (-1)^{N_f} (x) tau_-`` with
    ``tau_- = (tau_x - i tau_y)/2``, and ``embed(X) = X (x) 1``.  The matrix
    satisfies ``theta^2 = {theta, a} = [theta, b] = 0`` but
    ``theta^dagger theta != 0``, so it is a representation of the algebra,
    not a *-representation.
    """
    tau_minus = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
    P = fock.parity(config)
    P = P.toarray() if sp.issparse(P) else P
    theta = np.kron(P, tau_minus)

    def embed(x: Operator) -> np.ndarray:
        x = x.toarray() if sp.issparse(x) else x
        return np.kron(x, np.eye(2))

    return theta, embed
