"""The Poisson algebra on the extended configuration space.

Linear functionals on (b1, b2, b3, delta)-space close under the bracket
induced by the full dynamics, so they form a four-dimensional Lie algebra.
This module constructs a one-parameter family of bases (sigma0..sigma3)
satisfying the commutation relations of (i times) the identity and the spin
matrices, which identifies the space with u(2)* carrying its Lie-Poisson
structure.  Coordinates a = (a0..a3) in the dual basis make the Casimirs
explicit: a0, and the Heron value written as a quadratic form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import CYCLIC, ExtendedPoint, VortexStrengths
from .errors import BadParameter, DegenerateSubspace, NotAdmissible

__all__ = [
    "Covector",
    "PauliBasis",
    "PauliCoords",
    "PauliResiduals",
    "bracket_V",
    "structure_tensor",
    "build_A_matrix",
    "s_gamma_basis",
    "default_x",
    "q_matrix",
    "make_pauli",
    "pauli_closed_form",
    "verify_pauli",
    "special_form_residual",
    "to_pauli_coords",
    "from_pauli_coords",
    "casimirs",
    "lie_poisson_structure_residual",
]

_BASIS_NAMES = ("b1", "b2", "b3", "delta")


@dataclass(frozen=True)
class Covector:
    """Linear functional c1*b1 + c2*b2 + c3*b3 + cd*delta on shape space."""

    cb: np.ndarray
    cd: float

    def __post_init__(self) -> None:
        cb = np.asarray(self.cb, dtype=np.float64)
        if cb.shape != (3,):
            raise ValueError(f"expected 3 side coefficients, got shape {cb.shape}")
        object.__setattr__(self, "cb", cb)
        object.__setattr__(self, "cd", float(self.cd))

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.cb[0], self.cb[1], self.cb[2], self.cd])

    @staticmethod
    def from_vec(v: np.ndarray) -> "Covector":
        v = np.asarray(v, dtype=np.float64)
        return Covector(cb=v[:3].copy(), cd=float(v[3]))

    def __call__(self, p: ExtendedPoint) -> float:
        return float(self.cb @ p.b + self.cd * p.delta)

    def __add__(self, other: "Covector") -> "Covector":
        return Covector.from_vec(self.vec + other.vec)

    def __sub__(self, other: "Covector") -> "Covector":
        return Covector.from_vec(self.vec - other.vec)

    def __mul__(self, c: float) -> "Covector":
        return Covector.from_vec(c * self.vec)

    __rmul__ = __mul__

    def __neg__(self) -> "Covector":
        return Covector.from_vec(-self.vec)


def structure_tensor(s: VortexStrengths) -> np.ndarray:
    """C[i, j, :] = coefficients of the bracket of basis functionals i and j.

    Index order (b1, b2, b3, delta).  The defining relations, for (i, j, k)
    cyclic:

        {b_i, b_j}   = -8 * delta / gamma_k
        {b_i, delta} = 1/2 * [ (1/gamma_j - 1/gamma_k) * b_i
                               + (1/gamma_j + 1/gamma_k) * (b_j - b_k) ]
    """
    g = s.gamma
    C = np.zeros((4, 4, 4))
    for i, j, k in CYCLIC:
        C[i, j, 3] = -8.0 / g[k]
        C[j, i, 3] = 8.0 / g[k]
        row = np.zeros(4)
        row[i] += 0.5 * (1.0 / g[j] - 1.0 / g[k])
        row[j] += 0.5 * (1.0 / g[j] + 1.0 / g[k])
        row[k] -= 0.5 * (1.0 / g[j] + 1.0 / g[k])
        C[i, 3, :] = row
        C[3, i, :] = -row
    return C


def bracket_V(xi: Covector, eta: Covector, s: VortexStrengths) -> Covector:
    """Bracket of two linear functionals; bilinear, antisymmetric, closed."""
    C = structure_tensor(s)
    return Covector.from_vec(np.einsum("i,j,ijk->k", xi.vec, eta.vec, C))


def build_A_matrix(s: VortexStrengths) -> np.ndarray:
    """Matrix of x -> {x, delta} on side functionals, in the basis b_i/gamma_i.

    Its kernel is spanned by (1, 1, 1); the kernel of the literal transpose
    is spanned by (g2+g3, g3+g1, g1+g2), equivalently (1, 1, 1) spans the
    kernel of the adjoint taken in the inner product weighted by those
    sums.  Squared, the matrix acts as -gamma_tot/(g1*g2*g3) times the
    identity on the admissible plane.
    """
    g1, g2, g3 = s.gamma
    return (0.5 / (g1 * g2 * g3)) * np.array(
        [
            [g1 * (g3 - g2), -g1 * (g1 + g3), g1 * (g1 + g2)],
            [g2 * (g2 + g3), g2 * (g1 - g3), -g2 * (g1 + g2)],
            [-g3 * (g2 + g3), g3 * (g1 + g3), g3 * (g2 - g1)],
        ]
    )


def q_matrix(s: VortexStrengths) -> np.ndarray:
    """The symmetric form normalizing the in-plane symbol; positive definite
    for positive strengths."""
    g1, g2, g3 = s.gamma
    return np.array(
        [
            [(g2 + g3) ** 2, g1 * g2, g1 * g3],
            [g1 * g2, (g3 + g1) ** 2, g2 * g3],
            [g1 * g3, g2 * g3, (g1 + g2) ** 2],
        ]
    )


def _normal(s: VortexStrengths) -> np.ndarray:
    g1, g2, g3 = s.gamma
    return np.array([g2 + g3, g3 + g1, g1 + g2])


def s_gamma_basis(s: VortexStrengths) -> tuple[np.ndarray, np.ndarray]:
    """A basis of the plane perpendicular to (g2+g3, g3+g1, g1+g2).

    Returns the pair ((-g3-g1, g2+g3, 0), (-g1-g2, 0, g2+g3)) whenever it is
    nondegenerate; if g2 + g3 vanishes those two vectors are parallel, and a
    cross-product fallback basis of the same plane is used instead.
    """
    g1, g2, g3 = s.gamma
    n = _normal(s)
    scale = max(abs(x) for x in s.gamma)
    if abs(g2 + g3) > 1e-12 * scale:
        v1 = np.array([-g3 - g1, g2 + g3, 0.0])
        v2 = np.array([-g1 - g2, 0.0, g2 + g3])
        return v1, v2
    # Fallback: n is never the zero vector for nonzero strengths, so crossing
    # it with the least-aligned axis always yields a nonzero in-plane vector.
    axis = np.zeros(3)
    axis[int(np.argmin(np.abs(n)))] = 1.0
    v1 = np.cross(n, axis)
    v2 = np.cross(n, v1)
    if np.linalg.norm(v1) == 0.0 or np.linalg.norm(v2) == 0.0:
        raise DegenerateSubspace(f"no parameter plane basis for gamma={s.gamma}")
    return v1, v2


def default_x(s: VortexStrengths) -> np.ndarray:
    """The distinguished family parameter (1, 1, -(gt+g3)/(gt-g3)).

    This representative places the 1-2 binary collision on the positive
    a1-axis.  Singular when gamma_tot = gamma3.
    """
    gt, g3 = s.gamma_tot, s.gamma[2]
    if gt == g3:
        raise BadParameter(
            "default family parameter undefined for gamma_tot = gamma3; pass x explicitly"
        )
    return np.array([1.0, 1.0, -(gt + g3) / (gt - g3)])


def _hat(x: np.ndarray, s: VortexStrengths) -> Covector:
    """Parameter vector -> side functional sum x_i * b_i / gamma_i."""
    g = s.gamma_array
    return Covector(cb=x / g, cd=0.0)


@dataclass(frozen=True)
class PauliBasis:
    """A basis (sigma0..sigma3) of shape functionals with spin-type brackets.

    ``to_a`` stacks the four coefficient rows, so ``a = to_a @ (b, delta)``
    are the coordinates in the dual basis; ``from_a`` is its inverse.
    """

    sigma: tuple[Covector, Covector, Covector, Covector]
    strengths: VortexStrengths
    x_param: np.ndarray
    to_a: np.ndarray
    from_a: np.ndarray


@dataclass(frozen=True)
class PauliCoords:
    """Coordinates (a0, a1, a2, a3) in the dual of a symbol basis."""

    a: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.a, dtype=np.float64)
        if a.shape != (4,):
            raise ValueError(f"expected 4 coordinates, got shape {a.shape}")
        object.__setattr__(self, "a", a)

    @property
    def a0(self) -> float:
        return float(self.a[0])

    @property
    def avec(self) -> np.ndarray:
        """The spatial part (a1, a2, a3)."""
        return self.a[1:]


def make_pauli(s: VortexStrengths, x: np.ndarray | None = None) -> PauliBasis:
    """Construct the symbol basis for the strengths and a family parameter.

    With ``x`` omitted the distinguished representative of
    :func:`default_x` is used, for which the coefficients reduce to closed
    form (:func:`pauli_closed_form`).  A supplied ``x`` must be a nonzero
    vector of the admissible plane; its sign is normalized so that the first
    nonzero component is positive, making the construction deterministic on
    projective classes.
    """
    g1, g2, g3 = s.gamma
    gt = s.gamma_tot
    if gt == 0.0 or (g1 * g2 * g3) / gt <= 0.0:
        raise NotAdmissible(
            f"gamma1*gamma2*gamma3/gamma_tot must be positive, got gamma={s.gamma}"
        )
    if x is None:
        x = default_x(s)
    else:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (3,):
            raise BadParameter(f"family parameter must have 3 components, got {x.shape}")
        nrm = np.linalg.norm(x)
        if nrm == 0.0:
            raise BadParameter("family parameter must be nonzero")
        n = _normal(s)
        if abs(x @ n) > 1e-10 * nrm * np.linalg.norm(n):
            raise BadParameter(
                f"family parameter {x.tolist()} is not perpendicular to {n.tolist()}"
            )
    nz = np.nonzero(x)[0]
    if x[nz[0]] < 0.0:
        x = -x

    C = structure_tensor(s)
    xQx = float(x @ q_matrix(s) @ x)
    sigma3 = Covector(cb=np.zeros(3), cd=2.0 * math.sqrt(g1 * g2 * g3 / gt))
    sigma1 = (g1 * g2 * g3 / (math.sqrt(2.0) * math.sqrt(xQx))) * _hat(x, s)
    sigma2 = Covector.from_vec(
        -0.5 * np.einsum("i,j,ijk->k", sigma3.vec, sigma1.vec, C)
    )
    sigma0 = Covector(cb=np.array([g2 * g3, g3 * g1, g1 * g2]) / (2.0 * gt), cd=0.0)
    sigma = (sigma0, sigma1, sigma2, sigma3)
    to_a = np.vstack([sg.vec for sg in sigma])
    try:
        from_a = np.linalg.inv(to_a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - unreachable for valid x
        raise BadParameter(f"degenerate symbol basis for x={x.tolist()}") from exc
    return PauliBasis(sigma=sigma, strengths=s, x_param=x, to_a=to_a, from_a=from_a)


def pauli_closed_form(s: VortexStrengths) -> np.ndarray:
    """Closed-form coefficient rows of the distinguished basis.

    Valid in the admissible regime with gamma_tot != gamma3; equals the
    ``to_a`` matrix produced by :func:`make_pauli` with the default
    parameter.
    """
    g1, g2, g3 = s.gamma
    gt = s.gamma_tot
    root = math.sqrt(g1 * g2 * g3 / gt)
    return np.array(
        [
            [g2 * g3 / (2 * gt), g3 * g1 / (2 * gt), g1 * g2 / (2 * gt), 0.0],
            [
                g2 * g3 / (2 * gt),
                g3 * g1 / (2 * gt),
                -g1 * g2 * (gt + g3) / ((gt - g3) * 2 * gt),
                0.0,
            ],
            [-0.5 * root, 0.5 * root, 0.5 * root * (g1 - g2) / (g1 + g2), 0.0],
            [0.0, 0.0, 0.0, 2.0 * root],
        ]
    )


@dataclass(frozen=True)
class PauliResiduals:
    """Relative residuals of the defining algebraic identities of a basis."""

    pauli_residual: float
    center_residual: float
    jacobi_residual: float

    def as_dict(self) -> dict[str, float]:
        return {
            "pauli_residual": self.pauli_residual,
            "center_residual": self.center_residual,
            "jacobi_residual": self.jacobi_residual,
        }

    @property
    def worst(self) -> float:
        return max(self.pauli_residual, self.center_residual, self.jacobi_residual)


def _rel(residual_vec: np.ndarray, scale: float) -> float:
    return float(np.abs(residual_vec).max() / scale)


def verify_pauli(pb: PauliBasis) -> PauliResiduals:
    """Residuals of the spin commutation relations, centrality of sigma0,
    and the Jacobi identity over the basis.

    The Jacobi identity is checked on the distinct index triples, which
    determine the alternating trilinear form.  All residuals are relative to
    the coefficient scale of the terms entering each identity, so a correct
    basis reports values at rounding level regardless of the magnitude of
    the strengths.
    """
    s = pb.strengths
    C = structure_tensor(s)
    sig = np.vstack([sg.vec for sg in pb.sigma])

    # table[i, j, :] = coefficients of the bracket of sigma_i with sigma_j
    table = np.einsum("ip,jq,pqm->ijm", sig, sig, C)
    # double[i, j, k, :] = bracket of sigma_i with (bracket of sigma_j, sigma_k)
    double = np.einsum("ip,jkq,pqm->ijkm", sig, table, C)

    pauli = 0.0
    for i, j, k in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        lhs = table[i, j]
        scale = max(np.abs(lhs).max(), 2.0 * np.abs(sig[k]).max())
        pauli = max(pauli, _rel(lhs + 2.0 * sig[k], scale))

    cmax = np.abs(C).max()
    tiny = np.finfo(float).tiny
    center = 0.0
    for i in range(4):
        scale = np.abs(sig[0]).max() * np.abs(sig[i]).max() * cmax + tiny
        center = max(center, _rel(table[0, i], scale))

    jacobi = 0.0
    for i in range(4):
        for j in range(i + 1, 4):
            for k in range(j + 1, 4):
                r = double[i, j, k] + double[j, k, i] + double[k, i, j]
                scale = (
                    np.abs(sig[i]).max()
                    * np.abs(sig[j]).max()
                    * np.abs(sig[k]).max()
                ) * cmax**2 + tiny
                jacobi = max(jacobi, _rel(r, scale))

    return PauliResiduals(
        pauli_residual=pauli, center_residual=center, jacobi_residual=jacobi
    )


def special_form_residual(s: VortexStrengths) -> float:
    """Max relative deviation of the default-parameter basis from its closed
    form."""
    computed = make_pauli(s).to_a
    reference = pauli_closed_form(s)
    return float(np.abs(computed - reference).max() / np.abs(reference).max())


def to_pauli_coords(p: ExtendedPoint, pb: PauliBasis) -> PauliCoords:
    """Coordinates of a shape point in the dual basis: a_i = sigma_i(p)."""
    return PauliCoords(a=pb.to_a @ p.vec)


def from_pauli_coords(a: PauliCoords, pb: PauliBasis) -> ExtendedPoint:
    """Inverse of :func:`to_pauli_coords`."""
    return ExtendedPoint.from_vec(pb.from_a @ a.a)


def casimirs(a: PauliCoords, s: VortexStrengths) -> tuple[float, float]:
    """The two Casimirs at dual coordinates ``a``.

    Returns ``(i2, h_tilde)`` with i2 = a0 and h_tilde the Heron value
    4*gamma_tot/(g1*g2*g3) * (a1^2 + a2^2 + a3^2 - a0^2).  Physical shapes
    live on the half-cone h_tilde = 0, a0 >= 0.

    The i2 normalization is fixed so that i2 equals the sum of the two
    actions of :mod:`trivortex.transforms` (and half the angular impulse on
    centered configurations, M / (2*gamma_tot)); a convention scaling it by
    gamma_tot also circulates and is deliberately not used here.
    """
    g1, g2, g3 = s.gamma
    v = a.a
    h_tilde = 4.0 * s.gamma_tot / (g1 * g2 * g3) * (v[1] ** 2 + v[2] ** 2 + v[3] ** 2 - v[0] ** 2)
    return float(v[0]), h_tilde


def lie_poisson_structure_residual(pb: PauliBasis) -> float:
    """Deviation of the basis structure constants from the spin algebra.

    Expresses each bracket of basis functionals back in the basis itself and
    compares against c^k_{ij} = -2*eps_{ijk} (with the zeroth row and column
    vanishing).  This is the coordinate content of the statement that the
    dual-coordinate map is a Poisson transformation onto u(2)* with its
    Lie-Poisson bracket.
    """
    s = pb.strengths
    C = structure_tensor(s)
    sig = np.vstack([sg.vec for sg in pb.sigma])
    eps = np.zeros((4, 4, 4))
    for i, j, k in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        eps[i, j, k] = -2.0
        eps[j, i, k] = 2.0
    worst = 0.0
    for i in range(4):
        for j in range(4):
            brk = np.einsum("i,j,ijk->k", sig[i], sig[j], C)
            # from_a.T maps side-basis coefficient vectors to sigma-basis ones
            coeffs = pb.from_a.T @ brk
            worst = max(worst, float(np.abs(coeffs - eps[i, j]).max()))
    return worst
