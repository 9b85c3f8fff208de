"""Domain types and SE(2)-invariant geometry of the planar three-vortex system.

Positions live in the complex plane. The shape of a configuration is encoded
by the squared side lengths ``b_i = |z_j - z_k|**2`` ((i, j, k) cyclic in
(1, 2, 3)) together with the oriented triangle area ``delta``; the quadruple
(b1, b2, b3, delta) is a point of the extended configuration space used by
the reduction machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CollisionConfiguration, ZeroStrength

__all__ = [
    "VortexStrengths",
    "VortexConfig",
    "ExtendedPoint",
    "ConservedSet",
    "validate_strengths",
    "shape_map",
    "heron_residual",
    "conserved_quantities",
    "CYCLIC",
]

# Cyclic index triples (i, j, k) of (0, 1, 2); b_i pairs vortices j and k.
CYCLIC = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


@dataclass(frozen=True)
class VortexStrengths:
    """The three circulations together with derived constants.

    ``w0 > 0`` (the compact regime) is the only case in which the reduced
    leaves are spheres.  ``pauli_admissible`` records whether the symbol
    family of :mod:`trivortex.shape_algebra` exists for these strengths.
    """

    gamma: tuple[float, float, float]
    gamma_tot: float
    w0: float
    compact: bool
    pauli_admissible: bool

    @property
    def gamma_array(self) -> np.ndarray:
        return np.array(self.gamma, dtype=np.float64)

    @property
    def gamma_product(self) -> float:
        g1, g2, g3 = self.gamma
        return g1 * g2 * g3


def validate_strengths(g1: float, g2: float, g3: float) -> VortexStrengths:
    """Validate circulations and populate the derived constants.

    Raises ``ZeroStrength`` for a vanishing circulation.  A vanishing total
    is legal (the full dynamics remains well defined) but marks the record
    as not admissible for the symbol construction.
    """
    gamma = (float(g1), float(g2), float(g3))
    if not all(math.isfinite(g) for g in gamma):
        raise ZeroStrength(f"circulations must be finite, got {gamma}")
    if any(g == 0.0 for g in gamma):
        raise ZeroStrength(f"circulations must be nonzero, got {gamma}")
    g1, g2, g3 = gamma
    gamma_tot = g1 + g2 + g3
    w0 = 1.0 / (g1 * g2) + 1.0 / (g2 * g3) + 1.0 / (g3 * g1)
    admissible = (
        gamma_tot != 0.0
        and (g1 * g2 * g3) / gamma_tot > 0.0
        and gamma_tot != g3
    )
    return VortexStrengths(
        gamma=gamma,
        gamma_tot=gamma_tot,
        w0=w0,
        compact=w0 > 0.0,
        pauli_admissible=admissible,
    )


@dataclass(frozen=True)
class VortexConfig:
    """Three vortex positions in the plane; the full phase-space point."""

    z: np.ndarray

    def __post_init__(self) -> None:
        z = np.asarray(self.z, dtype=np.complex128)
        if z.shape != (3,):
            raise ValueError(f"expected 3 positions, got shape {z.shape}")
        if not np.all(np.isfinite(z)):
            raise ValueError("positions must be finite")
        object.__setattr__(self, "z", z)

    @property
    def xy(self) -> np.ndarray:
        """Positions as an interleaved real vector (x1, y1, x2, y2, x3, y3)."""
        out = np.empty(6)
        out[0::2] = self.z.real
        out[1::2] = self.z.imag
        return out

    @staticmethod
    def from_xy(y: np.ndarray) -> "VortexConfig":
        return VortexConfig(y[0::2] + 1j * y[1::2])


@dataclass(frozen=True)
class ExtendedPoint:
    """A point (b1, b2, b3, delta) of the extended configuration space.

    Images of actual configurations have b >= 0 and zero Heron residual;
    general points are unconstrained.
    """

    b: np.ndarray
    delta: float

    def __post_init__(self) -> None:
        b = np.asarray(self.b, dtype=np.float64)
        if b.shape != (3,):
            raise ValueError(f"expected 3 squared sides, got shape {b.shape}")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "delta", float(self.delta))

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.b[0], self.b[1], self.b[2], self.delta])

    @staticmethod
    def from_vec(v: np.ndarray) -> "ExtendedPoint":
        return ExtendedPoint(b=np.asarray(v[:3], dtype=np.float64), delta=float(v[3]))


@dataclass(frozen=True)
class ConservedSet:
    """Values of the classical first integrals at one configuration.

    ``m`` is not independent: m = gamma_tot*theta0 - gamma_tot**2*|z0|**2.
    ``psi0`` is the sum -sum_{n<k} G_n G_k ln|z_n - z_k| = 2*pi*h, stored as
    an alias of the energy rather than a separate state.  ``v0`` is the
    strength constant sum_{n<k} G_n G_k; the measured virial rate
    Im sum_a G_a conj(z_a) dz_a/dt equals v0 / (2*pi).
    """

    z0: complex
    theta0: float
    h: float
    m: float
    v0: float
    psi0: float


def shape_map(cfg: VortexConfig) -> ExtendedPoint:
    """Squared side lengths and oriented area of the vortex triangle.

    Invariant under rotations and translations of the configuration;
    conjugation negates ``delta``.  Collisions are legal here (b_i = 0).
    """
    z = cfg.z
    b = np.array(
        [
            abs(z[1] - z[2]) ** 2,
            abs(z[2] - z[0]) ** 2,
            abs(z[0] - z[1]) ** 2,
        ]
    )
    delta = 0.5 * ((z[2] - z[0]).conjugate() * (z[0] - z[1])).imag
    return ExtendedPoint(b=b, delta=delta)


def heron_residual(p: ExtendedPoint) -> float:
    """(4*delta)**2 + b1**2 + b2**2 + b3**2 - 2*(b1*b2 + b2*b3 + b3*b1).

    Zero exactly on shapes realizable by a planar triangle.
    """
    b1, b2, b3 = p.b
    return (4.0 * p.delta) ** 2 + b1**2 + b2**2 + b3**2 - 2.0 * (b1 * b2 + b2 * b3 + b3 * b1)


def conserved_quantities(cfg: VortexConfig, s: VortexStrengths) -> ConservedSet:
    """Evaluate the first integrals at ``cfg``.

    Raises ``CollisionConfiguration`` when two vortices coincide exactly
    (the energy is undefined there).  For gamma_tot = 0 the center of
    vorticity is undefined and ``z0`` is NaN.
    """
    z = cfg.z
    g = s.gamma_array
    p = shape_map(cfg)
    if np.any(p.b == 0.0):
        raise CollisionConfiguration("coincident vortices: energy undefined")

    z0 = complex((g @ z) / s.gamma_tot) if s.gamma_tot != 0.0 else complex(np.nan)
    theta0 = float(g @ (np.abs(z) ** 2))
    # pair (j, k) across from vortex i carries weight gamma_j * gamma_k
    w = np.array([g[1] * g[2], g[2] * g[0], g[0] * g[1]])
    h = -0.25 / math.pi * float(w @ np.log(p.b))
    m = float(w @ p.b)
    v0 = float(w.sum())
    return ConservedSet(z0=z0, theta0=theta0, h=h, m=m, v0=v0, psi0=2.0 * math.pi * h)
