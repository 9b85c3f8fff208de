import math

import numpy as np
import pytest

from trivortex import (
    BadParameter,
    Covector,
    NotAdmissible,
    PauliCoords,
    VortexConfig,
    bracket_V,
    build_A_matrix,
    canonical_bracket,
    casimirs,
    from_pauli_coords,
    heron_residual,
    make_pauli,
    q_matrix,
    s_gamma_basis,
    shape_map,
    to_pauli_coords,
    validate_strengths,
    verify_pauli,
)
from trivortex.core import ExtendedPoint
from trivortex.full_dynamics import oriented_area_field, squared_side_field
from trivortex.shape_algebra import (
    PauliBasis,
    default_x,
    lie_poisson_structure_residual,
    pauli_closed_form,
    special_form_residual,
    structure_tensor,
)

from conftest import (
    EQUILATERAL,
    FIG_STRENGTHS,
    random_config,
    random_family_parameter,
    random_strengths,
)

S111 = validate_strengths(1, 1, 1)

B1 = Covector([1, 0, 0], 0)
B2 = Covector([0, 1, 0], 0)
B3 = Covector([0, 0, 1], 0)
D = Covector([0, 0, 0], 1)


class TestBracket:
    def test_side_side(self):
        out = bracket_V(B1, B2, S111)
        assert np.allclose(out.vec, [0, 0, 0, -8])

    def test_side_area(self):
        out = bracket_V(B1, D, S111)
        assert np.allclose(out.vec, [0, 1, -1, 0])

    def test_antisymmetry(self, rng):
        for _ in range(20):
            s = random_strengths(rng, positive=False)
            xi = Covector.from_vec(rng.normal(size=4))
            eta = Covector.from_vec(rng.normal(size=4))
            assert np.allclose(
                bracket_V(xi, eta, s).vec, -bracket_V(eta, xi, s).vec
            )
            cmax = np.abs(structure_tensor(s)).max()
            self_bracket = np.abs(bracket_V(xi, xi, s).vec).max()
            assert self_bracket < 1e-14 * cmax * np.abs(xi.vec).max() ** 2

    def test_jacobi_identity_on_basis(self, rng):
        basis = [B1, B2, B3, D]
        for _ in range(20):
            s = random_strengths(rng, positive=False)
            cmax = np.abs(structure_tensor(s)).max()
            for i in range(4):
                for j in range(i + 1, 4):
                    for k in range(j + 1, 4):
                        r = (
                            bracket_V(basis[i], bracket_V(basis[j], basis[k], s), s).vec
                            + bracket_V(basis[j], bracket_V(basis[k], basis[i], s), s).vec
                            + bracket_V(basis[k], bracket_V(basis[i], basis[j], s), s).vec
                        )
                        assert np.abs(r).max() < 1e-12 * cmax**2

    def test_matches_canonical_bracket(self, rng):
        # the shape map is a Poisson map: brackets computed upstairs on the
        # configuration space agree with the structure constants downstairs
        fields = [squared_side_field(i) for i in (1, 2, 3)] + [oriented_area_field()]
        basis = [B1, B2, B3, D]
        for _ in range(25):
            s = random_strengths(rng, positive=False)
            cfg = random_config(rng)
            point = shape_map(cfg)
            for i in range(4):
                for j in range(i + 1, 4):
                    upstairs = canonical_bracket(fields[i], fields[j], cfg, s)
                    downstairs = bracket_V(basis[i], basis[j], s)(point)
                    scale = max(1.0, abs(upstairs), abs(downstairs))
                    assert abs(upstairs - downstairs) < 1e-10 * scale


class TestAMatrix:
    def test_symmetric_display(self):
        A = build_A_matrix(S111)
        assert np.allclose(A, [[0, -1, 1], [1, 0, -1], [-1, 1, 0]])

    def test_kernel_both_sides(self, rng):
        # (1,1,1) kills A; the transpose is killed by the weighted normal,
        # i.e. (1,1,1) kills the adjoint in the weighted inner product
        ones = np.ones(3)
        for _ in range(20):
            s = random_strengths(rng, positive=False)
            g1, g2, g3 = s.gamma
            n = np.array([g2 + g3, g3 + g1, g1 + g2])
            A = build_A_matrix(s)
            scale = np.abs(A).max() * max(1.0, np.abs(n).max())
            assert np.abs(A @ ones).max() < 1e-12 * scale
            assert np.abs(A.T @ n).max() < 1e-12 * scale

    def test_matches_bracket(self, rng):
        # columns are the bracket of b_j/gamma_j with the area functional
        for _ in range(10):
            s = random_strengths(rng, positive=False)
            g = s.gamma_array
            A = build_A_matrix(s)
            for j in range(3):
                xi = Covector.from_vec(np.eye(4)[j] / g[j])
                col = bracket_V(xi, D, s).vec[:3] * g
                assert np.allclose(A[:, j], col, rtol=1e-12, atol=1e-14)

    def test_squares_to_scalar_on_plane(self, rng):
        v = np.array([-2.0, 2.0, 0.0])
        A = build_A_matrix(S111)
        assert np.allclose(A @ (A @ v), [6, -6, 0])
        for _ in range(20):
            s = random_strengths(rng)
            A = build_A_matrix(s)
            x = random_family_parameter(rng, s)
            lam = s.gamma_tot / s.gamma_product
            assert np.allclose(A @ (A @ x), -lam * x, rtol=1e-10, atol=1e-10 * abs(lam) * np.abs(x).max())


class TestSGammaBasis:
    def test_symmetric_case(self):
        v1, v2 = s_gamma_basis(S111)
        assert np.allclose(v1, [-2, 2, 0])
        assert np.allclose(v2, [-2, 0, 2])

    def test_orthogonal_to_normal(self, rng):
        for _ in range(30):
            s = random_strengths(rng, positive=False)
            g1, g2, g3 = s.gamma
            n = np.array([g2 + g3, g3 + g1, g1 + g2])
            for v in s_gamma_basis(s):
                assert abs(n @ v) < 1e-12 * np.linalg.norm(n) * np.linalg.norm(v)
                assert np.linalg.norm(v) > 0

    def test_fallback_when_degenerate(self):
        # gamma2 + gamma3 = 0 makes the standard pair parallel
        s = validate_strengths(1, -1, 1)
        v1, v2 = s_gamma_basis(s)
        n = np.array([0.0, 2.0, 0.0])
        assert abs(n @ v1) < 1e-12 and abs(n @ v2) < 1e-12
        assert np.linalg.norm(np.cross(v1, v2)) > 1e-12

    def test_default_x_lies_in_plane(self, rng):
        for _ in range(30):
            s = random_strengths(rng)
            x = default_x(s)
            g1, g2, g3 = s.gamma
            n = np.array([g2 + g3, g3 + g1, g1 + g2])
            assert abs(n @ x) < 1e-10 * np.linalg.norm(n) * np.linalg.norm(x)

    def test_default_x_singular(self):
        s = validate_strengths(1, -1, 2)  # gamma_tot equals gamma3
        with pytest.raises(BadParameter):
            default_x(s)


class TestQMatrix:
    def test_symmetric_case(self):
        assert np.allclose(q_matrix(S111), [[4, 1, 1], [1, 4, 1], [1, 1, 4]])

    def test_quadratic_value(self):
        x = np.array([1.0, 1.0, -2.0])
        assert x @ q_matrix(S111) @ x == pytest.approx(18)

    def test_gram_identity(self, rng):
        # Q = T^t T + 2 diag(g2 g3, g3 g1, g1 g2)
        for _ in range(20):
            s = random_strengths(rng)
            g1, g2, g3 = s.gamma
            T = np.array([[0, g3, g2], [g3, 0, g1], [g2, g1, 0]])
            expected = T.T @ T + 2 * np.diag([g2 * g3, g3 * g1, g1 * g2])
            assert np.allclose(q_matrix(s), expected, rtol=1e-14)

    def test_positive_definite_for_positive_strengths(self, rng):
        for _ in range(20):
            s = random_strengths(rng)
            np.linalg.cholesky(q_matrix(s))  # raises if not positive definite


class TestMakePauli:
    def test_symmetric_coefficients(self):
        pb = make_pauli(S111)
        r3 = math.sqrt(3)
        assert np.allclose(pb.sigma[0].vec, [1 / 6, 1 / 6, 1 / 6, 0])
        assert np.allclose(pb.sigma[1].vec, [1 / 6, 1 / 6, -1 / 3, 0])
        assert np.allclose(pb.sigma[2].vec, [-1 / (2 * r3), 1 / (2 * r3), 0, 0])
        assert np.allclose(pb.sigma[3].vec, [0, 0, 0, 2 / r3])

    def test_closed_form_sweep(self, rng):
        worst = 0.0
        for _ in range(100):
            s = random_strengths(rng)
            worst = max(worst, special_form_residual(s))
        assert worst < 1e-12

    def test_figure_strengths(self):
        s = validate_strengths(*FIG_STRENGTHS)
        assert special_form_residual(s) < 1e-12

    def test_not_admissible(self):
        with pytest.raises(NotAdmissible):
            make_pauli(validate_strengths(1, -1, 1))

    def test_zero_total_not_admissible(self):
        with pytest.raises(NotAdmissible):
            make_pauli(validate_strengths(1, 1, -2))

    def test_bad_parameters(self):
        with pytest.raises(BadParameter):
            make_pauli(S111, np.array([1.0, 0.0, 0.0]))  # not in the plane
        with pytest.raises(BadParameter):
            make_pauli(S111, np.zeros(3))

    def test_sign_normalization(self, rng):
        s = random_strengths(rng)
        x = random_family_parameter(rng, s)
        pb_plus = make_pauli(s, x)
        pb_minus = make_pauli(s, -x)
        assert np.allclose(pb_plus.to_a, pb_minus.to_a)

    def test_inverse_consistency(self, rng):
        for _ in range(30):
            s = random_strengths(rng)
            pb = make_pauli(s, random_family_parameter(rng, s))
            assert np.abs(pb.to_a @ pb.from_a - np.eye(4)).max() < 1e-12


class TestVerifyPauli:
    def test_symmetric_exact(self):
        res = verify_pauli(make_pauli(S111))
        assert res.worst < 1e-14

    def test_corrupted_basis_flagged(self):
        pb = make_pauli(S111)
        bad = PauliBasis(
            sigma=(pb.sigma[0], pb.sigma[1], pb.sigma[2], 2.0 * pb.sigma[3]),
            strengths=pb.strengths,
            x_param=pb.x_param,
            to_a=pb.to_a,
            from_a=pb.from_a,
        )
        assert verify_pauli(bad).pauli_residual > 0.1

    def test_random_family_sweep(self, rng):
        worst = 0.0
        for _ in range(100):
            s = random_strengths(rng)
            pb = make_pauli(s, random_family_parameter(rng, s))
            worst = max(worst, verify_pauli(pb).worst)
        assert worst < 1e-12

    def test_family_invariance(self, rng):
        # sigma0 and sigma3 do not depend on the parameter ray; sigma1 and
        # sigma2 rotate inside their plane, so a0, a3 and a1^2 + a2^2 agree
        for _ in range(20):
            s = random_strengths(rng)
            pb1 = make_pauli(s, random_family_parameter(rng, s))
            pb2 = make_pauli(s, random_family_parameter(rng, s))
            cfg = random_config(rng)
            p = shape_map(cfg)
            a1 = to_pauli_coords(p, pb1).a
            a2 = to_pauli_coords(p, pb2).a
            scale = max(1.0, np.abs(a1).max())
            assert abs(a1[0] - a2[0]) < 1e-10 * scale
            assert abs(a1[3] - a2[3]) < 1e-10 * scale
            r1 = a1[1] ** 2 + a1[2] ** 2
            r2 = a2[1] ** 2 + a2[2] ** 2
            assert abs(r1 - r2) < 1e-10 * scale**2


class TestCoords:
    def test_equilateral_north_pole(self):
        pb = make_pauli(S111)
        a = to_pauli_coords(shape_map(EQUILATERAL), pb)
        assert np.allclose(a.a, [1.5, 0, 0, 1.5], atol=1e-14)

    def test_collision_on_positive_a1_axis(self):
        pb = make_pauli(S111)
        a = to_pauli_coords(ExtendedPoint([1, 1, 0], 0), pb)
        assert np.allclose(a.a, [1 / 3, 1 / 3, 0, 0], atol=1e-15)

    def test_linearity(self, rng):
        s = random_strengths(rng)
        pb = make_pauli(s)
        p = shape_map(random_config(rng))
        a1 = to_pauli_coords(p, pb).a
        a2 = to_pauli_coords(ExtendedPoint(2 * p.b, 2 * p.delta), pb).a
        assert np.allclose(a2, 2 * a1, rtol=1e-14)

    def test_symmetric_inverse_formulas(self, rng):
        pb = make_pauli(S111)
        a = PauliCoords(rng.normal(size=4))
        p = from_pauli_coords(a, pb)
        a0, a1, a2, a3 = a.a
        r3 = math.sqrt(3)
        assert p.b[0] == pytest.approx(2 * a0 + a1 - r3 * a2, rel=1e-12, abs=1e-12)
        assert p.b[1] == pytest.approx(2 * a0 + a1 + r3 * a2, rel=1e-12, abs=1e-12)
        assert p.b[2] == pytest.approx(2 * (a0 - a1), rel=1e-12, abs=1e-12)
        assert p.delta == pytest.approx(r3 / 2 * a3, rel=1e-12, abs=1e-12)

    def test_collision_inverse(self):
        pb = make_pauli(S111)
        p = from_pauli_coords(PauliCoords([1 / 3, 1 / 3, 0, 0]), pb)
        assert np.allclose(p.vec, [1, 1, 0, 0], atol=1e-14)

    def test_round_trip(self, rng):
        for _ in range(20):
            s = random_strengths(rng)
            pb = make_pauli(s, random_family_parameter(rng, s))
            p = ExtendedPoint(rng.normal(size=3), rng.normal())
            back = from_pauli_coords(to_pauli_coords(p, pb), pb)
            assert np.abs(back.vec - p.vec).max() < 1e-13 * max(1, np.abs(p.vec).max())


class TestCasimirs:
    def test_equilateral_values(self):
        i2, h = casimirs(PauliCoords([1.5, 0, 0, 1.5]), S111)
        assert i2 == 1.5
        assert h == pytest.approx(0, abs=1e-14)

    def test_hyperboloid_leaf(self):
        i2, h = casimirs(PauliCoords([1, 0, 0, 0]), S111)
        assert h == pytest.approx(-12)  # -4*gamma_tot/(g1*g2*g3)

    def test_cone_vertex(self):
        i2, h = casimirs(PauliCoords([0, 0, 0, 0]), S111)
        assert i2 == 0 and h == 0

    def test_matches_heron_through_inverse(self, rng):
        # the quadratic Casimir is the Heron value of the recovered point
        for _ in range(30):
            s = random_strengths(rng)
            pb = make_pauli(s, random_family_parameter(rng, s))
            a = PauliCoords(rng.normal(size=4))
            _, h_tilde = casimirs(a, s)
            residual = heron_residual(from_pauli_coords(a, pb))
            assert h_tilde == pytest.approx(residual, rel=1e-9, abs=1e-9 * max(1, abs(h_tilde)))

    def test_i2_equals_half_moment_ratio(self, rng):
        # a0 = M / (2*gamma_tot) on images of configurations
        for _ in range(20):
            s = random_strengths(rng)
            pb = make_pauli(s)
            cfg = random_config(rng)
            from trivortex import conserved_quantities

            c = conserved_quantities(cfg, s)
            a = to_pauli_coords(shape_map(cfg), pb)
            assert a.a0 == pytest.approx(c.m / (2 * s.gamma_tot), rel=1e-12)


class TestLieAlgebraStructure:
    def test_structure_constants_match_spin_matrices(self):
        # commutators of i*(identity, spin matrices) reproduce the table
        sigma_tilde = [
            np.eye(2, dtype=complex),
            np.array([[0, 1], [1, 0]], dtype=complex),
            np.array([[0, -1j], [1j, 0]], dtype=complex),
            np.array([[1, 0], [0, -1]], dtype=complex),
        ]
        mats = [1j * m for m in sigma_tilde]

        def decompose(M):
            return np.array([(-1j * M @ sigma_tilde[k]).trace().real / 2 for k in range(4)])

        pb = make_pauli(S111)
        from trivortex.shape_algebra import structure_tensor

        C = structure_tensor(S111)
        sig = np.vstack([sg.vec for sg in pb.sigma])
        for i in range(4):
            for j in range(4):
                matrix_side = decompose(mats[i] @ mats[j] - mats[j] @ mats[i])
                brk = np.einsum("p,q,pqk->k", sig[i], sig[j], C)
                vortex_side = pb.from_a.T @ brk
                assert np.allclose(matrix_side, vortex_side, atol=1e-13)

    def test_lie_poisson_constants(self, rng):
        for _ in range(20):
            s = random_strengths(rng)
            pb = make_pauli(s, random_family_parameter(rng, s))
            assert lie_poisson_structure_residual(pb) < 1e-12

    def test_closed_form_matrix_invertible(self, rng):
        for _ in range(10):
            s = random_strengths(rng)
            M = pauli_closed_form(s)
            assert np.isfinite(np.linalg.cond(M))
