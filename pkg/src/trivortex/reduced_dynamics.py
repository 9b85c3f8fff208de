"""Reduced vortex dynamics on the shape sphere.

On the leaf a0 = mu, a1^2 + a2^2 + a3^2 = mu^2 the energy depends on the
point only through the recovered squared sides, and the evolution is the
Lie-Poisson flow

    da0/dt = 0,      d(a1, a2, a3)/dt = 2 * a x grad h,

where grad h is taken in (a1, a2, a3) through the linear inverse coordinate
change (the sign of the cross product is validated against the projected
full flow rather than assumed).  Integration renormalizes the radius after
every accepted step by default, since |a| is a Casimir.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import RK45, OdeSolution
from scipy.optimize import least_squares

from .core import shape_map
from .errors import CollisionPoint, MismatchedSetup, TripleCollision
from .full_dynamics import IntegratorOptions, Termination, Trajectory
from .shape_algebra import PauliBasis, PauliCoords

__all__ = [
    "ReducedState",
    "ReducedTrajectory",
    "validate_reduced_state",
    "reduced_hamiltonian",
    "reduced_hamiltonian_gradient",
    "reduced_rhs",
    "integrate_reduced",
    "compare_flows",
    "find_relative_equilibria",
    "write_reduced_csv",
]

_QUARTER_PI_INV = 1.0 / (4.0 * math.pi)


@dataclass(frozen=True)
class ReducedState:
    """A point of the leaf a0 = mu on the shape sphere."""

    a: PauliCoords
    mu: float

    @staticmethod
    def from_coords(a: PauliCoords) -> "ReducedState":
        return ReducedState(a=a, mu=float(a.a[0]))


def validate_reduced_state(st: ReducedState, tol: float = 1e-9) -> None:
    """Check mu > 0, a0 = mu, and the on-sphere condition to ``tol``."""
    if not st.mu > 0.0:
        raise TripleCollision(f"mu must be positive, got {st.mu}")
    a = st.a.a
    if abs(a[0] - st.mu) > tol * st.mu:
        raise ValueError(f"a0 = {a[0]} does not match mu = {st.mu}")
    radius = float(np.linalg.norm(a[1:]))
    if abs(radius - st.mu) > tol * st.mu:
        raise ValueError(
            f"|a| = {radius} is off the sphere of radius {st.mu} beyond tolerance {tol}"
        )


def _pair_weights(pb: PauliBasis) -> np.ndarray:
    g1, g2, g3 = pb.strengths.gamma
    return np.array([g2 * g3, g3 * g1, g1 * g2])


def reduced_hamiltonian(a: PauliCoords, pb: PauliBasis) -> float:
    """Energy at dual coordinates; +inf when a recovered side vanishes.

    Equals the full interaction energy of any configuration whose shape maps
    to ``a``; it does not depend on a3.
    """
    b = pb.from_a[:3, :] @ a.a
    if b.min() <= 0.0:
        return math.inf
    w = _pair_weights(pb)
    return float(-_QUARTER_PI_INV * (w @ np.log(b)))


def reduced_hamiltonian_gradient(a: PauliCoords, pb: PauliBasis) -> np.ndarray:
    """Analytic gradient (dh/da0 .. dh/da3) through the linear side recovery."""
    Fb = pb.from_a[:3, :]
    b = Fb @ a.a
    if b.min() <= 0.0:
        raise CollisionPoint(f"vanishing side at a={a.a.tolist()}")
    w = _pair_weights(pb)
    return -_QUARTER_PI_INV * ((w / b) @ Fb)


def reduced_rhs(st: ReducedState, pb: PauliBasis) -> np.ndarray:
    """Tangent vector (da0, da1, da2, da3) of the reduced flow.

    da0 is identically zero and the spatial part is orthogonal to a by
    construction.
    """
    grad = reduced_hamiltonian_gradient(st.a, pb)
    out = np.zeros(4)
    out[1:] = 2.0 * np.cross(st.a.avec, grad[1:])
    return out


@dataclass
class ReducedTrajectory:
    """Sampled reduced solution with per-sample Casimir bookkeeping.

    ``casimir_drift`` holds the relative radius deviation measured *before*
    the per-step renormalization, i.e. the raw drift of the integrator.
    """

    times: np.ndarray
    states: list[ReducedState]
    casimir_drift: np.ndarray
    termination: Termination
    basis: PauliBasis
    dense: object | None = field(default=None, repr=False)

    def coords(self) -> np.ndarray:
        """(n_samples, 4) array of dual coordinates."""
        return np.array([st.a.a for st in self.states])

    def energy_drift(self) -> float:
        """Max relative deviation of the energy from its initial value."""
        h = np.array([reduced_hamiltonian(st.a, self.basis) for st in self.states])
        return float(np.abs(h - h[0]).max() / max(abs(h[0]), 1e-300))


def integrate_reduced(
    st0: ReducedState,
    pb: PauliBasis,
    t_end: float,
    opts: IntegratorOptions | None = None,
    renormalize: bool = True,
) -> ReducedTrajectory:
    """Integrate the reduced flow from ``st0`` over [0, t_end].

    After every accepted step the spatial part is rescaled back to radius mu
    (skipped with ``renormalize=False`` for drift measurement; the projection
    is within the solver tolerance, so the cached final stage stays
    consistent).  Halts with a collision flag when a recovered squared side
    drops below ``opts.collision_epsilon``.
    """
    if opts is None:
        opts = IntegratorOptions()
    if not t_end > 0.0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    validate_reduced_state(st0)
    mu = st0.mu
    Fb = pb.from_a[:3, :]
    w = _pair_weights(pb)

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        b = Fb @ np.array([mu, y[0], y[1], y[2]])
        grad = -_QUARTER_PI_INV * ((w / b) @ Fb[:, 1:])
        return 2.0 * np.cross(y, grad)

    y0 = st0.a.avec.copy()
    if (Fb @ st0.a.a).min() < opts.collision_epsilon:
        return ReducedTrajectory(
            times=np.array([0.0]),
            states=[st0],
            casimir_drift=np.array([abs(float(np.linalg.norm(y0)) - mu) / mu]),
            termination=Termination.COLLISION_DETECTED,
            basis=pb,
        )
    solver = RK45(
        rhs,
        0.0,
        y0,
        t_bound=float(t_end),
        rtol=opts.rel_tol,
        atol=opts.abs_tol,
        max_step=opts.max_step,
    )
    times = [0.0]
    vecs = [y0.copy()]
    drift = [abs(float(np.linalg.norm(y0)) - mu) / mu]
    interpolants = []
    termination = Termination.COMPLETED

    while solver.status == "running":
        solver.step()
        if solver.status == "failed":
            termination = Termination.STEP_FAILURE
            break
        interpolants.append(solver.dense_output())
        radius = float(np.linalg.norm(solver.y))
        drift.append(abs(radius - mu) / mu)
        if renormalize and radius > 0.0:
            solver.y = solver.y * (mu / radius)
        times.append(solver.t)
        vecs.append(solver.y.copy())
        b = Fb @ np.array([mu, *solver.y])
        if b.min() < opts.collision_epsilon:
            termination = Termination.COLLISION_DETECTED
            break

    states = [
        ReducedState(a=PauliCoords(a=np.array([mu, *v])), mu=mu) for v in vecs
    ]
    dense = OdeSolution(np.array(times[: len(interpolants) + 1]), interpolants) if interpolants else None
    return ReducedTrajectory(
        times=np.array(times),
        states=states,
        casimir_drift=np.array(drift),
        termination=termination,
        basis=pb,
        dense=dense,
    )


def _shape_coords_from_xy(Y: np.ndarray, to_a: np.ndarray) -> np.ndarray:
    """Dual coordinates from interleaved position samples of shape (6, n)."""
    x1, y1, x2, y2, x3, y3 = Y
    b1 = (x2 - x3) ** 2 + (y2 - y3) ** 2
    b2 = (x3 - x1) ** 2 + (y3 - y1) ** 2
    b3 = (x1 - x2) ** 2 + (y1 - y2) ** 2
    delta = 0.5 * ((x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1))
    return to_a @ np.vstack([b1, b2, b3, delta])


def compare_flows(
    full: Trajectory, pb: PauliBasis, reduced: ReducedTrajectory, n_grid: int = 512
) -> float:
    """Sup-norm gap between the projected full flow and the reduced flow.

    Both trajectories are evaluated on a common uniform grid over the
    overlap of their time ranges (through their dense interpolants when
    available).  The projection of the full flow is translation invariant,
    so off-center trajectories compare as if recentered.
    """
    if full.strengths.gamma != pb.strengths.gamma:
        raise MismatchedSetup("full trajectory strengths differ from the basis strengths")
    if reduced.basis.strengths.gamma != pb.strengths.gamma or not np.array_equal(
        reduced.basis.to_a, pb.to_a
    ):
        raise MismatchedSetup("reduced trajectory was built with a different basis")

    a_full0 = pb.to_a @ shape_map(full.states[0]).vec
    a_red0 = reduced.states[0].a.a
    scale0 = max(1.0, float(np.abs(a_red0).max()))
    if np.abs(a_full0 - a_red0).max() > 1e-9 * scale0:
        raise MismatchedSetup(
            f"initial points differ: {a_full0.tolist()} vs {a_red0.tolist()}"
        )

    t_max = min(float(full.times[-1]), float(reduced.times[-1]))
    grid = np.linspace(0.0, t_max, n_grid)

    if full.dense is not None:
        Y = full.dense(grid)
    else:
        pos = full.positions
        Y = np.empty((6, n_grid))
        for k in range(3):
            Y[2 * k] = np.interp(grid, full.times, pos[:, k].real)
            Y[2 * k + 1] = np.interp(grid, full.times, pos[:, k].imag)
    a_full = _shape_coords_from_xy(Y, pb.to_a)

    mu = reduced.states[0].mu
    if reduced.dense is not None:
        avec = np.asarray(reduced.dense(grid))
    else:
        coords = reduced.coords()
        avec = np.vstack(
            [np.interp(grid, reduced.times, coords[:, 1 + k]) for k in range(3)]
        )
    a_red = np.vstack([np.full(n_grid, mu), avec])

    return float(np.abs(a_full - a_red).max())


def find_relative_equilibria(
    mu: float, pb: PauliBasis, grid_n: int = 16
) -> list[ReducedState]:
    """Critical points of the energy on the sphere of radius ``mu``.

    Scans a grid_n x grid_n chart grid (plus the two poles), refines each
    seed in local tangent coordinates, keeps points where |a x grad h|
    vanishes to tolerance, and deduplicates.  Points next to collisions are
    skipped.
    """
    if not mu > 0.0:
        raise TripleCollision(f"mu must be positive, got {mu}")
    Fb = pb.from_a[:3, :]
    w = _pair_weights(pb)

    def grad3(avec: np.ndarray) -> np.ndarray:
        b = Fb @ np.array([mu, *avec])
        if b.min() <= 0.0:
            raise CollisionPoint("vanishing side")
        return -_QUARTER_PI_INV * ((w / b) @ Fb[:, 1:])

    seeds = [np.array([0.0, 0.0, mu]), np.array([0.0, 0.0, -mu])]
    for i in range(grid_n):
        a3 = -mu + 2.0 * mu * (i + 0.5) / grid_n
        rho = math.sqrt(mu**2 - a3**2)
        for j in range(grid_n):
            alpha = 2.0 * math.pi * j / grid_n
            seeds.append(np.array([rho * math.cos(alpha), rho * math.sin(alpha), a3]))

    found: list[np.ndarray] = []
    for seed in seeds:
        b = Fb @ np.array([mu, *seed])
        if b.min() < 1e-6 * mu:
            continue
        normal = seed / np.linalg.norm(seed)
        # local orthonormal tangent frame at the seed
        helper = np.zeros(3)
        helper[int(np.argmin(np.abs(normal)))] = 1.0
        e1 = np.cross(normal, helper)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(normal, e1)

        def residual(u: np.ndarray) -> np.ndarray:
            p = seed + u[0] * e1 + u[1] * e2
            p = mu * p / np.linalg.norm(p)
            bb = Fb @ np.array([mu, *p])
            if bb.min() <= 0.0:
                return np.full(3, 1e6)
            return np.cross(p, grad3(p))

        try:
            fit = least_squares(
                residual, np.zeros(2), method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15,
                max_nfev=400,
            )
        except CollisionPoint:
            continue
        p = seed + fit.x[0] * e1 + fit.x[1] * e2
        p = mu * p / np.linalg.norm(p)
        bb = Fb @ np.array([mu, *p])
        if bb.min() <= 0.0:
            continue
        res = float(np.linalg.norm(np.cross(p, grad3(p))))
        if res > 1e-10 * (1.0 + mu * float(np.linalg.norm(grad3(p)))):
            continue
        if all(np.linalg.norm(p - q) > 1e-6 * mu for q in found):
            found.append(p)

    found.sort(key=lambda p: (round(p[2] / mu, 6), math.atan2(p[1], p[0])))
    return [
        ReducedState(a=PauliCoords(a=np.array([mu, *p])), mu=mu) for p in found
    ]


def write_reduced_csv(rt: ReducedTrajectory, path: str) -> None:
    """Write samples as CSV: t,a0,a1,a2,a3,h,casimir_drift."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,a0,a1,a2,a3,h,casimir_drift\n")
        for t, st, drift in zip(rt.times, rt.states, rt.casimir_drift):
            h = reduced_hamiltonian(st.a, rt.basis)
            row = [t, *st.a.a, h, drift]
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
