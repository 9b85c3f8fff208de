"""Canonical coordinate chain from positions to action-type variables.

Three changes of variables are composed:

  T1  positions -> (center of vorticity Z0, relative vectors r, s), with
      r = z2 - z1 and s the offset of z3 from the 1-2 partial center;
  T2  polar action-angle pairs (j1, theta1), (j2, theta2) for r and s,
      with weights A = g1*g2/(g1+g2) and B = (g1+g2)*g3/gamma_tot;
  T3  the mixing (I1, I2) = (j2 - j1, j1 + j2),
      (phi1, phi2) = ((theta2 - theta1)/2, (theta1 + theta2)/2).

The bridge to dual-basis coordinates is then algebraic:

  a0 = I2,  a1 = I1,
  a2 = sqrt(I2^2 - I1^2) * cos(2*phi1),
  a3 = sqrt(I2^2 - I1^2) * sin(2*phi1).

``check_symplectic`` verifies numerically that each map transports the
appropriate weighted symplectic matrix onto the next one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import VortexConfig, VortexStrengths
from .errors import (
    DegenerateMass,
    DomainError,
    NegativeCoefficient,
    SingularPoint,
    ZeroVector,
)
from .shape_algebra import PauliCoords

__all__ = [
    "JBHState",
    "ActionAngleState",
    "MixedState",
    "t1_forward",
    "t1_inverse",
    "t2_forward",
    "t2_inverse",
    "t3_forward",
    "t3_inverse",
    "mixed_to_pauli",
    "ab_coefficients",
    "check_symplectic",
]


@dataclass(frozen=True)
class JBHState:
    """Center of vorticity plus the two relative vectors."""

    z0: complex
    r: complex
    s: complex


@dataclass(frozen=True)
class ActionAngleState:
    """Rescaled center coordinates and two polar action-angle pairs.

    Actions are nonnegative; angles are principal values in (-pi, pi].
    """

    kx: float
    ky: float
    j1: float
    j2: float
    theta1: float
    theta2: float


@dataclass(frozen=True)
class MixedState:
    """Difference/sum actions with half-difference/half-sum angles.

    |i1| <= i2 always; phi1 lies in [0, pi).
    """

    kx: float
    ky: float
    i1: float
    i2: float
    phi1: float
    phi2: float


def ab_coefficients(s: VortexStrengths) -> tuple[float, float]:
    """The polar-pair weights A = g1*g2/(g1+g2), B = (g1+g2)*g3/gamma_tot."""
    g1, g2, g3 = s.gamma
    if g1 + g2 == 0.0 or s.gamma_tot == 0.0:
        raise DegenerateMass(f"weights undefined for gamma={s.gamma}")
    return g1 * g2 / (g1 + g2), (g1 + g2) * g3 / s.gamma_tot


def _principal(angle: float) -> float:
    """Wrap into (-pi, pi]."""
    wrapped = math.remainder(angle, 2.0 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


def t1_forward(cfg: VortexConfig, s: VortexStrengths) -> JBHState:
    """Positions to (Z0, r, s); a complex-linear map of determinant one."""
    g1, g2, g3 = s.gamma
    if g1 + g2 == 0.0:
        raise DegenerateMass("gamma1 + gamma2 = 0: partial center undefined")
    if s.gamma_tot == 0.0:
        raise DegenerateMass("gamma_tot = 0: center of vorticity undefined")
    z = cfg.z
    z0 = (g1 * z[0] + g2 * z[1] + g3 * z[2]) / s.gamma_tot
    r = z[1] - z[0]
    sv = z[2] - (g1 * z[0] + g2 * z[1]) / (g1 + g2)
    return JBHState(z0=complex(z0), r=complex(r), s=complex(sv))


def t1_inverse(j: JBHState, s: VortexStrengths) -> VortexConfig:
    g1, g2, g3 = s.gamma
    if g1 + g2 == 0.0 or s.gamma_tot == 0.0:
        raise DegenerateMass(f"inverse undefined for gamma={s.gamma}")
    nu12 = j.z0 - (g3 / s.gamma_tot) * j.s
    z1 = nu12 - (g2 / (g1 + g2)) * j.r
    z2 = nu12 + (g1 / (g1 + g2)) * j.r
    z3 = nu12 + j.s
    return VortexConfig(np.array([z1, z2, z3]))


def t2_forward(j: JBHState, s: VortexStrengths) -> ActionAngleState:
    """Relative vectors to weighted polar action-angle pairs."""
    A, B = ab_coefficients(s)
    if A <= 0.0 or B <= 0.0:
        raise NegativeCoefficient(f"A={A:.6g}, B={B:.6g} must both be positive")
    if j.r == 0:
        raise ZeroVector("r = 0: binary collision z1 = z2, angle undefined")
    if j.s == 0:
        raise ZeroVector("s = 0: vortex 3 at the 1-2 partial center, angle undefined")
    kx = math.sqrt(s.gamma_tot) * j.z0.real
    ky = math.sqrt(s.gamma_tot) * j.z0.imag
    return ActionAngleState(
        kx=kx,
        ky=ky,
        j1=0.5 * A * abs(j.r) ** 2,
        j2=0.5 * B * abs(j.s) ** 2,
        theta1=_principal(math.atan2(j.r.imag, j.r.real)),
        theta2=_principal(math.atan2(j.s.imag, j.s.real)),
    )


def t2_inverse(aa: ActionAngleState, s: VortexStrengths) -> JBHState:
    A, B = ab_coefficients(s)
    if A <= 0.0 or B <= 0.0:
        raise NegativeCoefficient(f"A={A:.6g}, B={B:.6g} must both be positive")
    z0 = (aa.kx + 1j * aa.ky) / math.sqrt(s.gamma_tot)
    r = math.sqrt(2.0 * aa.j1 / A) * np.exp(1j * aa.theta1)
    sv = math.sqrt(2.0 * aa.j2 / B) * np.exp(1j * aa.theta2)
    return JBHState(z0=complex(z0), r=complex(r), s=complex(sv))


def t3_forward(aa: ActionAngleState) -> MixedState:
    """Mix the two action-angle pairs.

    phi1 is reduced modulo pi into [0, pi); the same multiple of pi is added
    to phi2 so the pair still reconstructs the original angles on the torus
    (shifting both by pi is a whole-plane rotation, i.e. the same shape).
    """
    phi1 = 0.5 * (aa.theta2 - aa.theta1)
    phi2 = 0.5 * (aa.theta1 + aa.theta2)
    shift = math.floor(phi1 / math.pi)
    phi1 -= shift * math.pi
    phi2 -= shift * math.pi
    if phi1 >= math.pi:  # guard the rounding edge of the floor
        phi1 -= math.pi
        phi2 -= math.pi
    return MixedState(
        kx=aa.kx,
        ky=aa.ky,
        i1=aa.j2 - aa.j1,
        i2=aa.j1 + aa.j2,
        phi1=phi1,
        phi2=_principal(phi2),
    )


def t3_inverse(m: MixedState) -> ActionAngleState:
    return ActionAngleState(
        kx=m.kx,
        ky=m.ky,
        j1=0.5 * (m.i2 - m.i1),
        j2=0.5 * (m.i2 + m.i1),
        theta1=_principal(m.phi2 - m.phi1),
        theta2=_principal(m.phi2 + m.phi1),
    )


def mixed_to_pauli(m: MixedState) -> PauliCoords:
    """Dual-basis coordinates of the shape described by a mixed state."""
    if abs(m.i1) > m.i2 * (1.0 + 1e-12):
        raise DomainError(f"|i1|={abs(m.i1):.6g} exceeds i2={m.i2:.6g}")
    radial = math.sqrt(max(m.i2**2 - m.i1**2, 0.0))
    return PauliCoords(
        a=np.array(
            [
                m.i2,
                m.i1,
                radial * math.cos(2.0 * m.phi1),
                radial * math.sin(2.0 * m.phi1),
            ]
        )
    )


# ---------------------------------------------------------------------------
# Numerical symplecticity check

_J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def _omega(weights: tuple[float, float, float], pairs: tuple[tuple[int, int], ...]) -> np.ndarray:
    """Assemble a 6x6 symplectic matrix from weighted coordinate pairs."""
    out = np.zeros((6, 6))
    for w, (p, q) in zip(weights, pairs):
        out[p, q] = w
        out[q, p] = -w
    return out


_ADJACENT = (((0, 1), (2, 3), (4, 5)))
_INTERLEAVED = (((0, 1), (2, 4), (3, 5)))


def _config_to_vec(cfg: VortexConfig) -> np.ndarray:
    return cfg.xy


def _jbh_to_vec(j: JBHState) -> np.ndarray:
    return np.array([j.z0.real, j.z0.imag, j.r.real, j.r.imag, j.s.real, j.s.imag])


def _aa_to_vec(aa: ActionAngleState) -> np.ndarray:
    return np.array([aa.kx, aa.ky, aa.j1, aa.j2, aa.theta1, aa.theta2])


def _mixed_to_vec(m: MixedState) -> np.ndarray:
    return np.array([m.kx, m.ky, m.i1, m.i2, m.phi1, m.phi2])


def _vec_to_config(v: np.ndarray) -> VortexConfig:
    return VortexConfig.from_xy(v)


def _vec_to_jbh(v: np.ndarray) -> JBHState:
    return JBHState(z0=complex(v[0], v[1]), r=complex(v[2], v[3]), s=complex(v[4], v[5]))


def _vec_to_aa(v: np.ndarray) -> ActionAngleState:
    return ActionAngleState(kx=v[0], ky=v[1], j1=v[2], j2=v[3], theta1=v[4], theta2=v[5])


def _wrap_diff(diff: np.ndarray, periods: tuple[float | None, ...]) -> np.ndarray:
    out = diff.copy()
    for m, period in enumerate(periods):
        if period is not None:
            out[m] = (out[m] + 0.5 * period) % period - 0.5 * period
    return out


def _numeric_jacobian(
    fn, v0: np.ndarray, periods: tuple[float | None, ...], step: float
) -> np.ndarray:
    jac = np.empty((6, 6))
    for m in range(6):
        e = np.zeros(6)
        e[m] = step
        diff = _wrap_diff(fn(v0 + e) - fn(v0 - e), periods)
        jac[:, m] = diff / (2.0 * step)
    return jac


def check_symplectic(map_id: str, at, s: VortexStrengths) -> float:
    """Max-norm residual of J^T * Omega_target * J - Omega_source.

    ``map_id`` is one of "T1", "T2", "T3", "composite"; ``at`` is a state of
    the corresponding source space (a configuration for T1 and the
    composite).  The Jacobian is taken by central differences with step
    1e-6 times the coordinate scale; angle-valued outputs are differenced
    modulo their period.
    """
    g = s.gamma_array
    A, B = ab_coefficients(s)
    pi2 = 2.0 * math.pi

    omega0 = _omega(tuple(g), _ADJACENT)
    omega1 = _omega((s.gamma_tot, A, B), _ADJACENT)
    omega2 = _omega((1.0, 1.0, 1.0), _INTERLEAVED)
    omega3 = _omega((1.0, 1.0, 1.0), _INTERLEAVED)

    if map_id == "T1":
        v0 = _config_to_vec(at)
        fn = lambda v: _jbh_to_vec(t1_forward(_vec_to_config(v), s))
        periods: tuple[float | None, ...] = (None,) * 6
        src, tgt = omega0, omega1
    elif map_id == "T2":
        v0 = _jbh_to_vec(at)
        fn = lambda v: _aa_to_vec(t2_forward(_vec_to_jbh(v), s))
        periods = (None, None, None, None, pi2, pi2)
        src, tgt = omega1, omega2
    elif map_id == "T3":
        v0 = _aa_to_vec(at)
        fn = lambda v: _mixed_to_vec(t3_forward(_vec_to_aa(v)))
        periods = (None, None, None, None, math.pi, math.pi)
        src, tgt = omega2, omega3
    elif map_id == "composite":
        v0 = _config_to_vec(at)
        fn = lambda v: _mixed_to_vec(
            t3_forward(t2_forward(t1_forward(_vec_to_config(v), s), s))
        )
        periods = (None, None, None, None, math.pi, math.pi)
        src, tgt = omega0, omega3
    else:
        raise ValueError(f"unknown map id {map_id!r}")

    scale = max(1.0, float(np.abs(v0).max()))
    step = 1e-6 * scale
    if map_id in ("T2", "composite"):
        jbh = at if map_id == "T2" else t1_forward(at, s)
        if min(abs(jbh.r), abs(jbh.s)) < 16.0 * step:
            raise SingularPoint("evaluation point too close to r = 0 or s = 0")

    jac = _numeric_jacobian(fn, v0, periods, step)
    return float(np.abs(jac.T @ tgt @ jac - src).max())
