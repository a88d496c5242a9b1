"""Transmission/reflection amplitudes t(q), r(q) for 1D potentials.

Implemented potentials: impenetrable core (t = 0, r = -1), single Dirac
delta, and a symmetric double Dirac delta built by composing point-scatterer
transfer matrices. Conventions:

* q is the incident relative momentum and must be positive. The models are
  even under q -> -q; callers that need amplitudes on the outgoing branch
  evaluate at |q| (see the wavefunction module).
* A point scatterer of strength alpha couples through b = mu_red * alpha
  (hbar = 1); the single delta has r = i/(x - i), t = 1 + r with x = q/b.
* Double-delta amplitudes come from the composed transfer matrix, which keeps
  |t|^2 + |r|^2 = 1 exact. The shortcut "r = t - 1" holds only for a single
  scatterer at the origin and is not used for composites. Resonant
  transmission happens at the roots of tan(2*a*q) = -q/b.
* Attractive and repulsive deltas scatter identically in modulus and the
  adopted phase convention, so strengths are stored as |alpha|.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from .kinematics import MassPartition

__all__ = [
    "PotentialKind",
    "AmplitudePair",
    "TransferMatrix",
    "AmplitudeModel",
    "hardcore_amplitudes",
    "delta_amplitudes",
    "point_scatterer_tm",
    "compose",
    "tm_amplitudes",
    "double_delta_amplitudes",
    "find_resonances",
    "unitarity_residual",
]

ComplexLike = Union[complex, np.ndarray]


class PotentialKind(enum.Enum):
    HARD_CORE = "hard_core"
    DIRAC_DELTA = "delta"
    DOUBLE_DIRAC_DELTA = "double_delta"
    COMPOSITE = "composite"


class AmplitudePair(NamedTuple):
    """Transmission and reflection amplitudes at common momenta."""

    t: ComplexLike
    r: ComplexLike


class TransferMatrix(NamedTuple):
    """2x2 complex matrix relating plane-wave coefficients left of a scatterer
    to those on its right, tagged with the momentum grid it was built on."""

    m11: ComplexLike
    m12: ComplexLike
    m21: ComplexLike
    m22: ComplexLike
    q: np.ndarray


def _as_positive_q(q) -> np.ndarray:
    arr = np.asarray(q, dtype=float)
    if not np.all(arr > 0.0):
        raise ValueError("relative momentum q must be positive (incident convention)")
    return arr


def _pair_like(q, t: np.ndarray, r: np.ndarray) -> AmplitudePair:
    # scalar in, scalar out
    if np.ndim(q) == 0:
        return AmplitudePair(complex(t), complex(r))
    return AmplitudePair(t, r)


def hardcore_amplitudes(q) -> AmplitudePair:
    """Impenetrable core: t = 0, r = -1 at every momentum."""
    arr = _as_positive_q(q)
    t = np.zeros(arr.shape, dtype=complex)
    r = np.full(arr.shape, -1.0 + 0.0j)
    return _pair_like(q, t, r)


def delta_amplitudes(q, alpha: float, mp: MassPartition) -> AmplitudePair:
    """Single delta of strength alpha: r = i/(x - i), t = 1 + r, x = q/(mu_red*alpha)."""
    arr = _as_positive_q(q)
    if not alpha > 0.0:
        raise ValueError(f"delta strength must be positive, got {alpha}")
    x = arr / (mp.mu_red * alpha)
    r = 1j / (x - 1j)
    return _pair_like(q, 1.0 + r, r)


def point_scatterer_tm(
    q, alpha: float, position: float, mp: MassPartition
) -> TransferMatrix:
    """Transfer matrix of a delta of strength alpha >= 0 sitting at ``position``.

    With g = i*b/q, b = mu_red*alpha:

        M = [[1 + g,              g*exp(+2i*q*position)],
             [-g*exp(-2i*q*position),          1 - g   ]]

    det M = 1 identically; alpha = 0 gives the identity. The sign of g is
    fixed so that a single scatterer at the origin reproduces
    :func:`delta_amplitudes` exactly.
    """
    arr = _as_positive_q(q)
    if alpha < 0.0:
        raise ValueError(f"scatterer strength must be non-negative, got {alpha}")
    g = 1j * (mp.mu_red * alpha) / arr
    phase = np.exp(2j * arr * position)
    return TransferMatrix(
        m11=1.0 + g,
        m12=g * phase,
        m21=-g / phase,
        m22=1.0 - g,
        q=arr,
    )


def compose(tms: Sequence[TransferMatrix]) -> TransferMatrix:
    """Compose transfer matrices of scatterers listed from left to right.

    The product is taken in propagation order (rightmost matrix acts last),
    so compose([A, B]) = B @ A entrywise. All matrices must share the same
    momentum grid.
    """
    if len(tms) == 0:
        raise ValueError("need at least one transfer matrix")
    first_q = np.asarray(tms[0].q)
    for tm in tms[1:]:
        if not np.array_equal(np.asarray(tm.q), first_q):
            raise ValueError("transfer matrices evaluated on different momentum grids")
    total = tms[0]
    for nxt in tms[1:]:
        total = TransferMatrix(
            m11=nxt.m11 * total.m11 + nxt.m12 * total.m21,
            m12=nxt.m11 * total.m12 + nxt.m12 * total.m22,
            m21=nxt.m21 * total.m11 + nxt.m22 * total.m21,
            m22=nxt.m21 * total.m12 + nxt.m22 * total.m22,
            q=first_q,
        )
    return total


def tm_amplitudes(tm: TransferMatrix) -> AmplitudePair:
    """Extract (t, r) from a transfer matrix: t = det(M)/M22, r = -M21/M22."""
    det = tm.m11 * tm.m22 - tm.m12 * tm.m21
    t = det / tm.m22
    r = -tm.m21 / tm.m22
    return _pair_like(tm.q, np.asarray(t), np.asarray(r))


def double_delta_amplitudes(
    q, alpha: float, half_separation: float, mp: MassPartition
) -> AmplitudePair:
    """Two deltas of strength alpha at -a and +a, composed via transfer matrices."""
    arr = _as_positive_q(q)
    if not alpha > 0.0:
        raise ValueError(f"delta strength must be positive, got {alpha}")
    if not half_separation > 0.0:
        raise ValueError(f"half separation must be positive, got {half_separation}")
    left = point_scatterer_tm(arr, alpha, -half_separation, mp)
    right = point_scatterer_tm(arr, alpha, +half_separation, mp)
    t, r = tm_amplitudes(compose([left, right]))
    return _pair_like(q, np.asarray(t), np.asarray(r))


def unitarity_residual(pair: AmplitudePair) -> ComplexLike:
    """| |t|^2 + |r|^2 - 1 |, elementwise."""
    return np.abs(np.abs(pair.t) ** 2 + np.abs(pair.r) ** 2 - 1.0)


@dataclass(frozen=True)
class AmplitudeModel:
    """A potential plus the masses it scatters, exposing amplitudes(q).

    ``scatterers`` is a tuple of (strength, position) pairs, populated for the
    double-delta and composite kinds.
    """

    kind: PotentialKind
    masses: MassPartition
    alpha: float = 0.0
    half_separation: Optional[float] = None
    scatterers: Optional[Tuple[Tuple[float, float], ...]] = None

    def __post_init__(self) -> None:
        if self.kind in (PotentialKind.DIRAC_DELTA, PotentialKind.DOUBLE_DIRAC_DELTA):
            # only |alpha| matters for elastic scattering; normalize here
            object.__setattr__(self, "alpha", abs(self.alpha))
            if not self.alpha > 0.0:
                raise ValueError("delta potentials need a nonzero strength")
        if self.kind is PotentialKind.DOUBLE_DIRAC_DELTA:
            if self.half_separation is None or not self.half_separation > 0.0:
                raise ValueError("double delta needs a positive half separation")
        if self.kind is PotentialKind.COMPOSITE:
            if not self.scatterers:
                raise ValueError("composite model needs at least one scatterer")
            norm = tuple((abs(s), float(x)) for s, x in self.scatterers)
            if any(s < 0.0 for s, _ in norm):  # pragma: no cover - abs() above
                raise ValueError("scatterer strengths must be non-negative")
            object.__setattr__(self, "scatterers", norm)

    @classmethod
    def hard_core(cls, masses: MassPartition) -> "AmplitudeModel":
        return cls(kind=PotentialKind.HARD_CORE, masses=masses)

    @classmethod
    def dirac_delta(cls, alpha: float, masses: MassPartition) -> "AmplitudeModel":
        return cls(kind=PotentialKind.DIRAC_DELTA, masses=masses, alpha=alpha)

    @classmethod
    def double_dirac_delta(
        cls, alpha: float, half_separation: float, masses: MassPartition
    ) -> "AmplitudeModel":
        return cls(
            kind=PotentialKind.DOUBLE_DIRAC_DELTA,
            masses=masses,
            alpha=alpha,
            half_separation=half_separation,
            scatterers=((abs(alpha), -half_separation), (abs(alpha), half_separation)),
        )

    @classmethod
    def composite(
        cls, scatterers: Sequence[Tuple[float, float]], masses: MassPartition
    ) -> "AmplitudeModel":
        ordered = tuple(sorted(((s, x) for s, x in scatterers), key=lambda sx: sx[1]))
        return cls(kind=PotentialKind.COMPOSITE, masses=masses, scatterers=ordered)

    @property
    def strength_scale(self) -> float:
        """b = mu_red * alpha, the momentum scale of a point scatterer."""
        return self.masses.mu_red * self.alpha

    def amplitudes(self, q) -> AmplitudePair:
        """(t(q), r(q)) for incident relative momenta q > 0."""
        if self.kind is PotentialKind.HARD_CORE:
            return hardcore_amplitudes(q)
        if self.kind is PotentialKind.DIRAC_DELTA:
            return delta_amplitudes(q, self.alpha, self.masses)
        if self.kind is PotentialKind.DOUBLE_DIRAC_DELTA:
            return double_delta_amplitudes(
                q, self.alpha, self.half_separation, self.masses
            )
        arr = _as_positive_q(q)
        tms = [
            point_scatterer_tm(arr, s, x, self.masses) for s, x in self.scatterers
        ]
        t, r = tm_amplitudes(compose(tms))
        return _pair_like(q, np.asarray(t), np.asarray(r))


def find_resonances(
    model: AmplitudeModel, q_range: Tuple[float, float], count: int = 8
) -> np.ndarray:
    """Momenta of perfect transmission for a double delta, ascending.

    Roots of tan(2*a*q) = -q/b inside ``q_range``, located by a sign-change
    scan of h(q) = sin(2*a*q) + (q/b)*cos(2*a*q) and polished with brentq.
    Each returned root satisfies | |t(q)|^2 - 1 | <= 1e-10. At most ``count``
    roots are returned.
    """
    if model.kind is not PotentialKind.DOUBLE_DIRAC_DELTA:
        raise ValueError("resonance search applies to the double delta only")
    lo, hi = q_range
    if not (0.0 < lo < hi):
        raise ValueError(f"need 0 < lo < hi, got ({lo}, {hi})")
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")

    a = model.half_separation
    b = model.strength_scale

    def h(q: float) -> float:
        return np.sin(2.0 * a * q) + (q / b) * np.cos(2.0 * a * q)

    # at least ~16 samples per oscillation period pi/(2a)
    n_scan = max(1024, int(np.ceil((hi - lo) * (2.0 * a / np.pi) * 16)) + 1)
    qs = np.linspace(lo, hi, n_scan)
    hs = np.sin(2.0 * a * qs) + (qs / b) * np.cos(2.0 * a * qs)

    roots = []
    for i in np.nonzero(np.sign(hs[:-1]) * np.sign(hs[1:]) < 0)[0]:
        root = brentq(h, qs[i], qs[i + 1], xtol=1e-15 * hi, rtol=4 * np.finfo(float).eps)
        t, _ = model.amplitudes(root)
        if abs(abs(t) ** 2 - 1.0) <= 1e-10:
            roots.append(root)
        if len(roots) >= count:
            break
    return np.asarray(roots, dtype=float)
