"""Phase portraits on the shape sphere in its two cylindrical charts.

The energy restricted to a sphere a0 = mu is a function of (a1, a2) only, so
its level sets are cylinder sections.  Two charts are supported:

  phi chart    u = a1 (the difference action I1), v = 2*phi1, with the
               cylindrical axis along the a1 direction;
  alpha chart  u = a3 (proportional to the oriented area), v = alpha the
               polar angle in the (a1, a2) plane, the most symmetric view.

Binary collisions sit on the equator a3 = 0 and are marked; grid cells at or
next to them carry +inf.  Contours are extracted by marching squares with
linear interpolation, treating v as periodic.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import PoleSingularity, TripleCollision
from .shape_algebra import PauliBasis, PauliCoords

__all__ = [
    "Chart",
    "ChartPoint",
    "PortraitGrid",
    "chart_to_pauli",
    "pauli_to_chart",
    "binary_collision_points",
    "sample_portrait",
    "extract_contours",
    "default_levels",
    "write_grid_csv",
    "write_portrait_svg",
]

_TWO_PI = 2.0 * math.pi


class Chart(enum.Enum):
    PHI = "phi"
    ALPHA = "alpha"


@dataclass(frozen=True)
class ChartPoint:
    """A point (u, v) of a cylindrical chart; v is 2*phi1 or alpha."""

    chart: Chart
    u: float
    v: float


@dataclass(frozen=True)
class PortraitGrid:
    """Energy samples on a uniform chart grid.

    ``values[i, j]`` is the energy at (u[i], v[j]); +inf marks collision
    cells.  ``collision_points`` are the binary collisions on this leaf.
    """

    mu: float
    chart: Chart
    nu: int
    nv: int
    u: np.ndarray
    v: np.ndarray
    values: np.ndarray
    collision_points: list[ChartPoint]


def chart_to_pauli(cp: ChartPoint, mu: float) -> PauliCoords:
    """Sphere point of a chart point on the leaf of radius ``mu``.

    The alpha chart degenerates at |u| = mu (every angle names the same
    pole), which is rejected; the phi chart keeps its endpoint rows, where
    the degenerate direction is the 1-2 collision axis.
    """
    if abs(cp.u) > mu:
        raise ValueError(f"|u| = {abs(cp.u)} exceeds mu = {mu}")
    if cp.chart is Chart.ALPHA and abs(cp.u) == mu:
        raise PoleSingularity(f"alpha chart undefined at |u| = mu = {mu}")
    rho = math.sqrt(max(mu**2 - cp.u**2, 0.0))
    if cp.chart is Chart.PHI:
        return PauliCoords(
            a=np.array([mu, cp.u, rho * math.cos(cp.v), rho * math.sin(cp.v)])
        )
    return PauliCoords(
        a=np.array([mu, rho * math.cos(cp.v), rho * math.sin(cp.v), cp.u])
    )


def pauli_to_chart(a: PauliCoords, chart: Chart) -> ChartPoint:
    """Chart coordinates of an on-sphere point; the angle is in [0, 2*pi).

    Raises ``PoleSingularity`` for the alpha chart at |a3| = mu (and for the
    phi chart at |a1| = mu), where the angle is undefined.
    """
    v4 = a.a
    mu = float(np.linalg.norm(v4[1:]))
    if chart is Chart.PHI:
        u, p, q = v4[1], v4[2], v4[3]
    else:
        u, p, q = v4[3], v4[1], v4[2]
    if p == 0.0 and q == 0.0:
        raise PoleSingularity(f"chart angle undefined at |u| = mu = {mu}")
    return ChartPoint(chart=chart, u=float(u), v=float(math.atan2(q, p) % _TWO_PI))


_COLLISION_RAYS = (
    np.array([0.0, 1.0, 1.0, 0.0]),  # z2 = z3
    np.array([1.0, 0.0, 1.0, 0.0]),  # z1 = z3
    np.array([1.0, 1.0, 0.0, 0.0]),  # z1 = z2
)


def binary_collision_points(pb: PauliBasis, mu: float) -> list[PauliCoords]:
    """The binary collisions on the leaf of radius ``mu``, as sphere points.

    Ordered by the vanishing side (b1, b2, b3), i.e. collisions 2-3, 1-3,
    1-2.  Rays whose a0-component is not positive miss this leaf and are
    omitted.
    """
    out = []
    for ray in _COLLISION_RAYS:
        a = pb.to_a @ ray
        if a[0] <= 0.0:
            continue
        out.append(PauliCoords(a=a * (mu / a[0])))
    return out


def sample_portrait(
    mu: float,
    pb: PauliBasis,
    chart: Chart,
    nu: int,
    nv: int,
    collision_epsilon: float = 1e-10,
) -> PortraitGrid:
    """Sample the energy on a uniform ``nu`` x ``nv`` chart grid.

    The angle v runs over [0, 2*pi) without endpoint duplication.  In the
    alpha chart the u rows are offset by half a cell so the poles (where the
    angle degenerates) are never sampled; the phi chart includes its
    endpoint rows, which are the 1-2 collision directions.  Nodes whose
    recovered sides fall below ``collision_epsilon`` and nodes within one
    cell of a binary collision are set to +inf.
    """
    if not mu > 0.0:
        raise TripleCollision(f"mu must be positive, got {mu}")
    if nu < 8 or nv < 8:
        raise ValueError(f"need at least 8 points per axis, got {nu} x {nv}")

    if chart is Chart.ALPHA:
        du = 2.0 * mu / nu
        u = -mu + du * (np.arange(nu) + 0.5)
    else:
        du = 2.0 * mu / (nu - 1)
        u = np.linspace(-mu, mu, nu)
    dv = _TWO_PI / nv
    v = dv * np.arange(nv)

    Fb = pb.from_a[:3, :]
    g1, g2, g3 = pb.strengths.gamma
    w = np.array([g2 * g3, g3 * g1, g1 * g2])
    values = np.empty((nu, nv))
    for i in range(nu):
        rho = math.sqrt(max(mu**2 - u[i] ** 2, 0.0))
        for j in range(nv):
            if chart is Chart.PHI:
                a4 = np.array([mu, u[i], rho * math.cos(v[j]), rho * math.sin(v[j])])
            else:
                a4 = np.array([mu, rho * math.cos(v[j]), rho * math.sin(v[j]), u[i]])
            b = Fb @ a4
            if b.min() < collision_epsilon:
                values[i, j] = math.inf
            else:
                values[i, j] = -float(w @ np.log(b)) / (4.0 * math.pi)

    collisions = []
    for a in binary_collision_points(pb, mu):
        try:
            cp = pauli_to_chart(a, chart)
        except PoleSingularity:
            # collision on the chart axis: flag the whole adjacent row
            pole_u = mu if (a.a[1] if chart is Chart.PHI else a.a[3]) > 0 else -mu
            rows = np.nonzero(np.abs(u - pole_u) <= du)[0]
            values[rows, :] = math.inf
            cp = ChartPoint(chart=chart, u=pole_u, v=0.0)
            collisions.append(cp)
            continue
        collisions.append(cp)
        # one-cell neighborhoods, with slack so nodes exactly one spacing
        # away flag consistently regardless of rounding
        rows = np.nonzero(np.abs(u - cp.u) <= du * (1.0 + 1e-9))[0]
        dv_wrapped = np.abs((v - cp.v + math.pi) % _TWO_PI - math.pi)
        cols = np.nonzero(dv_wrapped <= dv * (1.0 + 1e-9))[0]
        for i in rows:
            values[i, cols] = math.inf

    return PortraitGrid(
        mu=mu, chart=chart, nu=nu, nv=nv, u=u, v=v, values=values,
        collision_points=collisions,
    )


def default_levels(grid: PortraitGrid, n: int = 12) -> np.ndarray:
    """Evenly spaced levels between the finite minimum and a high quantile."""
    finite = grid.values[np.isfinite(grid.values)]
    if finite.size == 0:
        return np.array([])
    lo = float(finite.min())
    hi = float(np.quantile(finite, 0.95))
    if hi <= lo:
        return np.array([lo])
    return np.linspace(lo, hi, n + 2)[1:-1]


# ---------------------------------------------------------------------------
# Marching squares on the (u, v-periodic) grid

# segment table: for each corner-occupancy case, pairs of cell edges joined
# by a contour segment.  Corners are (0: u-,v-), (1: u-,v+), (2: u+,v+),
# (3: u+,v-); edges are 0: v- side, 1: v+ side, 2: u- side, 3: u+ side.
_EDGE_LOOKUP: dict[int, tuple[tuple[int, int], ...]] = {
    0: (),
    1: ((0, 2),),
    2: ((2, 1),),
    3: ((0, 1),),
    4: ((1, 3),),
    6: ((2, 3),),
    7: ((0, 3),),
    8: ((3, 0),),
    9: ((3, 2),),
    11: ((3, 1),),
    12: ((1, 0),),
    13: ((1, 2),),
    14: ((2, 0),),
    15: (),
}


def _cell_edges(iu: int, iv: int, nv: int):
    """Edge identifiers of cell (iu, iv): (v-, v+, u-, u+) sides."""
    ivp = (iv + 1) % nv
    return (
        ("u", iu, iv),    # v- side: from (iu, iv) to (iu+1, iv)
        ("u", iu, ivp),   # v+ side
        ("v", iu, iv),    # u- side: from (iu, iv) to (iu, iv+1)
        ("v", iu + 1, iv),  # u+ side
    )


def extract_contours(
    grid: PortraitGrid, levels: "list[float] | np.ndarray"
) -> list[list[np.ndarray]]:
    """Marching-squares polylines for each level.

    Returns one list of (n, 2) arrays with columns (u, v) per requested
    level.  Cells touching a non-finite value are excluded, so contours
    never cross collision cells.  Polylines are chained across the periodic
    seam in v; a closed loop repeats its first vertex at the end (possibly
    shifted by 2*pi in v when the loop winds around the cylinder).  Levels
    outside the sampled range yield empty lists.
    """
    u, v, vals = grid.u, grid.v, grid.values
    nu, nv = grid.nu, grid.nv
    dv = _TWO_PI / nv
    out: list[list[np.ndarray]] = []

    for level in np.atleast_1d(np.asarray(levels, dtype=np.float64)):
        segments: dict[tuple, list[tuple]] = {}
        points: dict[tuple, np.ndarray] = {}

        def interp(eid: tuple) -> np.ndarray:
            kind, iu, iv = eid
            if kind == "u":
                f0, f1 = vals[iu, iv], vals[iu + 1, iv]
                p0 = np.array([u[iu], v[iv]])
                p1 = np.array([u[iu + 1], v[iv]])
            else:
                ivp = (iv + 1) % nv
                f0, f1 = vals[iu, iv], vals[iu, ivp]
                p0 = np.array([u[iu], v[iv]])
                p1 = np.array([u[iu], v[iv] + dv])
            t = (level - f0) / (f1 - f0)
            return p0 + t * (p1 - p0)

        for iu in range(nu - 1):
            for iv in range(nv):
                ivp = (iv + 1) % nv
                corners = (
                    vals[iu, iv], vals[iu, ivp], vals[iu + 1, ivp], vals[iu + 1, iv]
                )
                if not all(math.isfinite(c) for c in corners):
                    continue
                case = sum(1 << k for k, c in enumerate(corners) if c > level)
                if case in (5, 10):
                    center = sum(corners) / 4.0
                    if case == 5:
                        pairs = ((2, 1), (3, 0)) if center > level else ((0, 2), (1, 3))
                    else:
                        pairs = ((0, 2), (1, 3)) if center > level else ((2, 1), (3, 0))
                else:
                    pairs = _EDGE_LOOKUP[case]
                if not pairs:
                    continue
                edges = _cell_edges(iu, iv, nv)
                for ea, eb in pairs:
                    ida, idb = edges[ea], edges[eb]
                    for eid in (ida, idb):
                        if eid not in points:
                            points[eid] = interp(eid)
                    segments.setdefault(ida, []).append(idb)
                    segments.setdefault(idb, []).append(ida)

        out.append(_chain_polylines(segments, points))
    return out


def _chain_polylines(
    segments: dict[tuple, list[tuple]], points: dict[tuple, np.ndarray]
) -> list[np.ndarray]:
    """Join crossing points into polylines; unwrap v along each chain."""
    remaining = {eid: list(nbrs) for eid, nbrs in segments.items()}
    polylines = []

    def walk(start: tuple) -> list[tuple]:
        chain = [start]
        current = start
        while remaining.get(current):
            nxt = remaining[current].pop()
            remaining[nxt].remove(current)
            chain.append(nxt)
            current = nxt
        return chain

    # open chains first (endpoints have odd degree)
    for eid in list(remaining):
        if len(remaining.get(eid, [])) == 1:
            polylines.append(walk(eid))
    # remaining cycles
    for eid in list(remaining):
        if remaining.get(eid):
            polylines.append(walk(eid))

    out = []
    for chain in polylines:
        coords = np.array([points[eid] for eid in chain])
        if len(coords) > 1:
            coords[:, 1] = np.unwrap(coords[:, 1], period=_TWO_PI)
        out.append(coords)
    return out


def write_grid_csv(grid: PortraitGrid, path: str) -> None:
    """Write the grid as CSV rows u,v,h, row-major in u; inf spelled 'inf'."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("u,v,h\n")
        for i in range(grid.nu):
            for j in range(grid.nv):
                fh.write(
                    f"{grid.u[i]:.17g},{grid.v[j]:.17g},{grid.values[i, j]:.17g}\n"
                )


def write_portrait_svg(
    grid: PortraitGrid, levels: "list[float] | np.ndarray", path: str
) -> None:
    """Render contours and collision dots to a standalone 800x500 SVG."""
    width, height = 800, 500
    margin = 40.0
    u_lo, u_hi = -grid.mu, grid.mu
    contours = extract_contours(grid, levels)

    def to_px(pt: np.ndarray) -> tuple[float, float]:
        x = margin + (pt[1] % _TWO_PI) / _TWO_PI * (width - 2 * margin)
        y = margin + (u_hi - pt[0]) / (u_hi - u_lo) * (height - 2 * margin)
        return x, y

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{margin}" y="{margin}" width="{width - 2 * margin}" '
        f'height="{height - 2 * margin}" fill="none" stroke="#888"/>',
    ]
    for polylines in contours:
        if not polylines:
            continue
        path_data = []
        for line in polylines:
            # split strokes at the seam so wrapped loops do not smear
            pieces: list[list[tuple[float, float]]] = [[]]
            prev_wrap = None
            for pt in line:
                wrap = math.floor(pt[1] / _TWO_PI)
                if prev_wrap is not None and wrap != prev_wrap:
                    pieces.append([])
                pieces[-1].append(to_px(pt))
                prev_wrap = wrap
            for piece in pieces:
                if len(piece) < 2:
                    continue
                d = "M " + " L ".join(f"{x:.2f} {y:.2f}" for x, y in piece)
                path_data.append(d)
        if path_data:
            parts.append(
                f'<path d="{" ".join(path_data)}" fill="none" stroke="#1f4e8c" '
                'stroke-width="1.2"/>'
            )
    for cp in grid.collision_points:
        x, y = to_px(np.array([cp.u, cp.v]))
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="black"/>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
