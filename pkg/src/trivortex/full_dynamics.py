"""Hamiltonian flow of three point vortices in the plane.

The velocity of each vortex is induced by the other two:

    dz_a/dt = (i / 2*pi) * sum_{b != a} gamma_b * (z_a - z_b) / |z_a - z_b|**2

These are Hamilton's equations for h = -(1/2*pi) * sum_{a<b} G_a G_b
ln|z_a - z_b| under the weighted symplectic form sum_a gamma_a dx_a ^ dy_a,
whose Poisson bracket is

    {f, g} = sum_a (1/gamma_a) * (df/dx_a dg/dy_a - df/dy_a dg/dx_a).

Integration uses an embedded Runge-Kutta 5(4) pair with adaptive step
control; symplecticity is monitored through the first integrals rather than
enforced.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .core import ConservedSet, VortexConfig, VortexStrengths, conserved_quantities, shape_map
from .errors import CollisionConfiguration

__all__ = [
    "IntegratorOptions",
    "Termination",
    "Trajectory",
    "ScalarField",
    "vortex_rhs",
    "canonical_bracket",
    "integrate_full",
    "write_trajectory_csv",
    "coordinate_field",
    "squared_side_field",
    "oriented_area_field",
    "hamiltonian_field",
]

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class IntegratorOptions:
    """Tolerances and safeguards shared by the integrators.

    ``collision_epsilon`` is a threshold on the squared side lengths (not the
    distances), which keeps the monitoring square-root free.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    collision_epsilon: float = 1e-10

    def __post_init__(self) -> None:
        if not (self.rel_tol > 0 and self.abs_tol > 0 and self.max_step > 0):
            raise ValueError("tolerances must be positive")
        if self.collision_epsilon <= 0:
            raise ValueError("collision_epsilon must be positive")


class Termination(enum.Enum):
    COMPLETED = "completed"
    COLLISION_DETECTED = "collision_detected"
    STEP_FAILURE = "step_failure"


def _rhs_xy(y: np.ndarray, g: Sequence[float]) -> np.ndarray:
    """Velocity field on interleaved real coordinates; no collision guard."""
    x1, y1, x2, y2, x3, y3 = y
    g1, g2, g3 = g
    d12x, d12y = x1 - x2, y1 - y2
    d13x, d13y = x1 - x3, y1 - y3
    d23x, d23y = x2 - x3, y2 - y3
    r12 = d12x * d12x + d12y * d12y
    r13 = d13x * d13x + d13y * d13y
    r23 = d23x * d23x + d23y * d23y
    # i*(dx + i*dy) = -dy + i*dx, so x gets -dy terms and y gets +dx terms
    c = 1.0 / _TWO_PI
    return np.array(
        [
            -c * (g2 * d12y / r12 + g3 * d13y / r13),
            c * (g2 * d12x / r12 + g3 * d13x / r13),
            -c * (-g1 * d12y / r12 + g3 * d23y / r23),
            c * (-g1 * d12x / r12 + g3 * d23x / r23),
            -c * (-g1 * d13y / r13 - g2 * d23y / r23),
            c * (-g1 * d13x / r13 - g2 * d23x / r23),
        ]
    )


def vortex_rhs(
    cfg: VortexConfig,
    s: VortexStrengths,
    collision_epsilon: float = 1e-10,
) -> np.ndarray:
    """Complex velocities (dz1/dt, dz2/dt, dz3/dt) at a configuration.

    Raises ``CollisionConfiguration`` when a squared pair distance falls
    below ``collision_epsilon``.
    """
    p = shape_map(cfg)
    if p.b.min() < collision_epsilon:
        raise CollisionConfiguration(
            f"min squared distance {p.b.min():.3e} below {collision_epsilon:.3e}"
        )
    v = _rhs_xy(cfg.xy, s.gamma)
    return v[0::2] + 1j * v[1::2]


# ---------------------------------------------------------------------------
# Scalar fields and the canonical bracket


@dataclass(frozen=True)
class ScalarField:
    """Real function of a configuration, optionally with analytic gradient.

    ``value`` takes the complex position triple; ``grad`` returns the six
    partials with respect to (x1, y1, x2, y2, x3, y3).  Fields without a
    gradient are differenced centrally by the bracket.
    """

    value: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray] | None = None


def coordinate_field(axis: str, index: int) -> ScalarField:
    """The coordinate function x_index or y_index (index in 1..3)."""
    if axis not in ("x", "y") or index not in (1, 2, 3):
        raise ValueError(f"unknown coordinate {axis}{index}")
    slot = 2 * (index - 1) + (0 if axis == "x" else 1)

    def value(z: np.ndarray) -> float:
        return float(z[index - 1].real if axis == "x" else z[index - 1].imag)

    def grad(z: np.ndarray) -> np.ndarray:
        out = np.zeros(6)
        out[slot] = 1.0
        return out

    return ScalarField(value=value, grad=grad)


def squared_side_field(i: int) -> ScalarField:
    """b_i = |z_j - z_k|**2 as a field on configurations (i in 1..3)."""
    if i not in (1, 2, 3):
        raise ValueError(f"side index must be 1..3, got {i}")
    j, k = [(1, 2), (2, 0), (0, 1)][i - 1]

    def value(z: np.ndarray) -> float:
        return float(abs(z[j] - z[k]) ** 2)

    def grad(z: np.ndarray) -> np.ndarray:
        d = z[j] - z[k]
        out = np.zeros(6)
        out[2 * j] = 2.0 * d.real
        out[2 * j + 1] = 2.0 * d.imag
        out[2 * k] = -2.0 * d.real
        out[2 * k + 1] = -2.0 * d.imag
        return out

    return ScalarField(value=value, grad=grad)


def oriented_area_field() -> ScalarField:
    """The oriented triangle area as a field on configurations."""

    def value(z: np.ndarray) -> float:
        return 0.5 * ((z[2] - z[0]).conjugate() * (z[0] - z[1])).imag

    def grad(z: np.ndarray) -> np.ndarray:
        x, y = z.real, z.imag
        return 0.5 * np.array(
            [
                y[1] - y[2],
                x[2] - x[1],
                y[2] - y[0],
                x[0] - x[2],
                y[0] - y[1],
                x[1] - x[0],
            ]
        )

    return ScalarField(value=value, grad=grad)


def hamiltonian_field(s: VortexStrengths) -> ScalarField:
    """The interaction energy as a field, with analytic gradient."""
    g = s.gamma_array

    def value(z: np.ndarray) -> float:
        total = 0.0
        for a in range(3):
            for b in range(a + 1, 3):
                total += g[a] * g[b] * math.log(abs(z[a] - z[b]))
        return -total / _TWO_PI

    def grad(z: np.ndarray) -> np.ndarray:
        out = np.zeros(6)
        for a in range(3):
            for b in range(3):
                if b == a:
                    continue
                d = z[a] - z[b]
                w = g[a] * g[b] / (abs(d) ** 2 * _TWO_PI)
                out[2 * a] -= w * d.real
                out[2 * a + 1] -= w * d.imag
        return out

    return ScalarField(value=value, grad=grad)


def _fd_grad(fn: Callable[[np.ndarray], float], z: np.ndarray, step: float) -> np.ndarray:
    out = np.empty(6)
    y0 = np.empty(6)
    y0[0::2], y0[1::2] = z.real, z.imag
    for m in range(6):
        yp, ym = y0.copy(), y0.copy()
        yp[m] += step
        ym[m] -= step
        out[m] = (
            fn(yp[0::2] + 1j * yp[1::2]) - fn(ym[0::2] + 1j * ym[1::2])
        ) / (2.0 * step)
    return out


def canonical_bracket(
    f: ScalarField,
    g: ScalarField,
    at: VortexConfig,
    s: VortexStrengths,
    fd_step: float | None = None,
) -> float:
    """Poisson bracket of two fields at a configuration.

    Gradients are taken analytically when the field provides them, otherwise
    by central differences with step 1e-6 times the coordinate scale.
    """
    z = at.z
    step = fd_step if fd_step is not None else 1e-6 * max(1.0, float(np.abs(z).max()))
    gf = f.grad(z) if f.grad is not None else _fd_grad(f.value, z, step)
    gg = g.grad(z) if g.grad is not None else _fd_grad(g.value, z, step)
    gamma = s.gamma_array
    return float(
        np.sum((gf[0::2] * gg[1::2] - gf[1::2] * gg[0::2]) / gamma)
    )


# ---------------------------------------------------------------------------
# Trajectories


@dataclass
class Trajectory:
    """Sampled solution of the full dynamics with per-sample first integrals."""

    times: np.ndarray
    states: list[VortexConfig]
    diagnostics: list[ConservedSet]
    termination: Termination
    strengths: VortexStrengths
    dense: object | None = field(default=None, repr=False)

    @property
    def positions(self) -> np.ndarray:
        """(n_samples, 3) complex array of positions."""
        return np.array([st.z for st in self.states])

    def drift_summary(self) -> dict[str, float]:
        """Max relative deviation of h, theta0 and z0 from their start values."""
        if not self.diagnostics:
            return {"h": math.nan, "theta0": math.nan, "z0": math.nan}
        d0 = self.diagnostics[0]
        hs = np.array([d.h for d in self.diagnostics])
        th = np.array([d.theta0 for d in self.diagnostics])
        z0 = np.array([d.z0 for d in self.diagnostics])
        h_scale = max(abs(d0.h), 1e-300)
        th_scale = max(abs(d0.theta0), 1e-300)
        z_scale = max(abs(d0.z0), 1.0)
        return {
            "h": float(np.abs(hs - d0.h).max() / h_scale),
            "theta0": float(np.abs(th - d0.theta0).max() / th_scale),
            "z0": float(np.abs(z0 - d0.z0).max() / z_scale),
        }


def integrate_full(
    cfg0: VortexConfig,
    s: VortexStrengths,
    t_end: float,
    opts: IntegratorOptions | None = None,
) -> Trajectory:
    """Integrate the vortex equations from ``cfg0`` over [0, t_end].

    Terminates early (flagging the trajectory) when the smallest squared
    side drops below ``opts.collision_epsilon``.  Samples are the accepted
    solver steps; a dense interpolant is attached for later evaluation.
    """
    if opts is None:
        opts = IntegratorOptions()
    if not t_end > 0.0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    gamma = s.gamma

    p0 = shape_map(cfg0)
    if p0.b.min() < opts.collision_epsilon:
        diag = [] if p0.b.min() == 0.0 else [conserved_quantities(cfg0, s)]
        return Trajectory(
            times=np.array([0.0]),
            states=[cfg0],
            diagnostics=diag,
            termination=Termination.COLLISION_DETECTED,
            strengths=s,
        )

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        return _rhs_xy(y, gamma)

    def collision(t: float, y: np.ndarray) -> float:
        b_min = min(
            (y[0] - y[2]) ** 2 + (y[1] - y[3]) ** 2,
            (y[0] - y[4]) ** 2 + (y[1] - y[5]) ** 2,
            (y[2] - y[4]) ** 2 + (y[3] - y[5]) ** 2,
        )
        return b_min - opts.collision_epsilon

    collision.terminal = True  # type: ignore[attr-defined]

    sol = solve_ivp(
        rhs,
        (0.0, float(t_end)),
        cfg0.xy,
        method="RK45",
        rtol=opts.rel_tol,
        atol=opts.abs_tol,
        max_step=opts.max_step,
        dense_output=True,
        events=[collision],
    )
    if sol.status == -1:
        termination = Termination.STEP_FAILURE
    elif sol.status == 1:
        termination = Termination.COLLISION_DETECTED
    else:
        termination = Termination.COMPLETED

    states = [VortexConfig.from_xy(sol.y[:, k]) for k in range(sol.y.shape[1])]
    diagnostics = [conserved_quantities(st, s) for st in states]
    return Trajectory(
        times=sol.t.copy(),
        states=states,
        diagnostics=diagnostics,
        termination=termination,
        strengths=s,
        dense=sol.sol,
    )


def write_trajectory_csv(traj: Trajectory, path: str) -> None:
    """Write samples as CSV: t,x1,y1,x2,y2,x3,y3,h,theta0,z0x,z0y."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,x1,y1,x2,y2,x3,y3,h,theta0,z0x,z0y\n")
        for t, st, d in zip(traj.times, traj.states, traj.diagnostics):
            row = [
                t,
                st.z[0].real,
                st.z[0].imag,
                st.z[1].real,
                st.z[1].imag,
                st.z[2].real,
                st.z[2].imag,
                d.h,
                d.theta0,
                d.z0.real,
                d.z0.imag,
            ]
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
