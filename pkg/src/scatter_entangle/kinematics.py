"""Momentum coordinates for two distinguishable particles on a line.

Everything runs in natural units (hbar = 1) and in momentum representation.
The centre-of-mass / relative split (p, q) diagonalizes a Galilean-invariant
scattering operator, so these maps underpin every other module: p = p1 + p2
is conserved, while q = mu2*p1 - mu1*p2 is what the potential acts on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

__all__ = [
    "MassPartition",
    "PairMomentum",
    "JacobiMomentum",
    "pair_to_jacobi",
    "jacobi_to_pair",
    "reflect_momenta",
]

ArrayLike = Union[float, np.ndarray]


class PairMomentum(NamedTuple):
    """Single-particle momenta (p1, p2); fields may be scalars or arrays."""

    p1: ArrayLike
    p2: ArrayLike


class JacobiMomentum(NamedTuple):
    """Total momentum p = p1 + p2 and relative momentum q = mu2*p1 - mu1*p2."""

    p: ArrayLike
    q: ArrayLike


@dataclass(frozen=True)
class MassPartition:
    """Two-particle masses, stored as the mass fraction mu1 = m1/M and total M.

    Storing (mu1, M) instead of (m1, m2) makes mu1 + mu2 == 1 hold exactly in
    floating point, which keeps the reflection-map identities testable at
    machine precision.
    """

    mu1: float
    M: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.mu1 < 1.0:
            raise ValueError(f"mass fraction mu1 must lie in (0, 1), got {self.mu1}")
        if not self.M > 0.0:
            raise ValueError(f"total mass must be positive, got {self.M}")

    @classmethod
    def from_masses(cls, m1: float, m2: float) -> "MassPartition":
        """Build from individual masses m1, m2 (both > 0)."""
        if not (m1 > 0.0 and m2 > 0.0):
            raise ValueError(f"masses must be positive, got m1={m1}, m2={m2}")
        return cls(mu1=m1 / (m1 + m2), M=m1 + m2)

    @property
    def mu2(self) -> float:
        return 1.0 - self.mu1

    @property
    def m1(self) -> float:
        return self.mu1 * self.M

    @property
    def m2(self) -> float:
        return self.mu2 * self.M

    @property
    def mu_red(self) -> float:
        """Reduced mass m1*m2/M = mu1*mu2*M."""
        return self.mu1 * self.mu2 * self.M


def pair_to_jacobi(pm: PairMomentum, mp: MassPartition) -> JacobiMomentum:
    """Map single-particle momenta to (total, relative) momenta.

    The map ((p1, p2) -> (p1 + p2, mu2*p1 - mu1*p2)) has |det| = 1, so
    momentum-space integrals carry over without a measure factor.
    """
    p1, p2 = pm
    return JacobiMomentum(p=p1 + p2, q=mp.mu2 * p1 - mp.mu1 * p2)


def jacobi_to_pair(jm: JacobiMomentum, mp: MassPartition) -> PairMomentum:
    """Inverse of :func:`pair_to_jacobi`: p1 = mu1*p + q, p2 = mu2*p - q."""
    p, q = jm
    return PairMomentum(p1=mp.mu1 * p + q, p2=mp.mu2 * p - q)


def reflect_momenta(pm: PairMomentum, mp: MassPartition) -> PairMomentum:
    """Image of (p1, p2) under reversal of the relative momentum, q -> -q.

    Linear, involutive, total-momentum preserving, with determinant -1. For
    equal masses it reduces to the swap (p1, p2) -> (p2, p1). Composing with
    :func:`pair_to_jacobi` yields (p, -q) exactly.
    """
    p1, p2 = pm
    mu1, mu2 = mp.mu1, mp.mu2
    return PairMomentum(
        p1=(mu1 - mu2) * p1 + 2.0 * mu1 * p2,
        p2=2.0 * mu2 * p1 + (mu2 - mu1) * p2,
    )
