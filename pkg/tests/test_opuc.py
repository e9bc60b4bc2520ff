import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matmoments.errors import DegreeExceeds, DimensionMismatch, NotInterior, SizeGuard
from matmoments.generate import discrete_uniform
from matmoments.interval import circle_abar
from matmoments.matcore import det
from matmoments.measures import CircleMeasure, MomentSequence, circle_moments
from matmoments.moment_space import build_toeplitz, canonical_sequence, moment_ball
from matmoments.opuc import (
    MatrixPolynomial,
    evaluate,
    inner_left,
    inner_left_moments,
    inner_right,
    inner_right_moments,
    monic_system,
    monic_szego_residuals,
    psi_determinantal,
    reverse,
    szego_residuals,
    determinantal_check,
    verblunsky_extract,
    verblunsky_from_recursion,
)

from conftest import seeded_measure


def random_poly(rng, n, p):
    return MatrixPolynomial(rng.standard_normal((n + 1, p, p)) + 1j * rng.standard_normal((n + 1, p, p)))


class TestPolynomial:
    def test_constant(self):
        np.testing.assert_array_equal(evaluate(MatrixPolynomial(np.eye(2)), 3 + 4j), np.eye(2))

    def test_monomial(self):
        np.testing.assert_allclose(MatrixPolynomial.monomial(1, 2)(1j), 1j * np.eye(2))

    def test_against_terms(self, rng):
        P = random_poly(rng, 3, 2)
        z = 0.7 - 0.2j
        np.testing.assert_allclose(P(z), sum(P.coeffs[k] * z ** k for k in range(4)), atol=1e-14)

    def test_vectorized_matches_pointwise(self, backend, rng):
        P = random_poly(rng, 4, 3)
        zs = np.exp(1j * rng.uniform(0, 6, 7))
        np.testing.assert_allclose(P.at(zs), [P(z) for z in zs], atol=1e-13)

    def test_degree_and_leading(self):
        c = np.zeros((4, 2, 2))
        c[2] = np.eye(2)
        P = MatrixPolynomial(c)
        assert P.degree == 2
        np.testing.assert_array_equal(P.leading, np.eye(2))

    def test_arithmetic(self, rng):
        P, Q = random_poly(rng, 2, 2), random_poly(rng, 3, 2)
        A = rng.standard_normal((2, 2))
        z = 0.3 + 0.9j
        np.testing.assert_allclose((P + Q)(z), P(z) + Q(z), atol=1e-13)
        np.testing.assert_allclose((P - Q)(z), P(z) - Q(z), atol=1e-13)
        np.testing.assert_allclose(P.lmul(A)(z), A @ P(z), atol=1e-13)
        np.testing.assert_allclose(P.rmul(A)(z), P(z) @ A, atol=1e-13)
        np.testing.assert_allclose(P.shift(2)(z), z ** 2 * P(z), atol=1e-13)

    def test_immutable(self):
        P = MatrixPolynomial(np.eye(2))
        with pytest.raises(ValueError):
            P.coeffs[0, 0, 0] = 2


class TestReverse:
    def test_constant(self):
        R = reverse(MatrixPolynomial(np.eye(2)), 1)
        np.testing.assert_array_equal(R.coeffs, [np.zeros((2, 2)), np.eye(2)])

    def test_linear(self, rng):
        P = random_poly(rng, 1, 2)
        R = reverse(P, 1)
        np.testing.assert_array_equal(R.coeffs[0], P.coeffs[1].conj().T)
        np.testing.assert_array_equal(R.coeffs[1], P.coeffs[0].conj().T)

    def test_definition(self, rng):
        P = random_poly(rng, 2, 2)
        z = 0.4 + 0.5j
        np.testing.assert_allclose(reverse(P, 3)(z), z ** 3 * P(1 / np.conj(z)).conj().T, atol=1e-12)

    def test_degree_exceeds(self, rng):
        with pytest.raises(DegreeExceeds):
            reverse(random_poly(rng, 3, 2), 2)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(0, 5), p=st.integers(1, 3))
    def test_involution_and_product_rule(self, seed, n, p):
        rng = np.random.default_rng(seed)
        P = random_poly(rng, n, p)
        A = rng.standard_normal((p, p)) + 1j * rng.standard_normal((p, p))
        np.testing.assert_array_equal(reverse(reverse(P, n), n).coeffs, P.coeffs)
        # equal up to rounding of the two matrix products
        np.testing.assert_allclose(reverse(P.lmul(A), n).coeffs,
                                   reverse(P, n).rmul(A.conj().T).coeffs, rtol=0, atol=1e-13)


class TestInnerProducts:
    def test_constants(self):
        mu = seeded_measure(1, 2, 4)
        seq = circle_moments(mu, 1)
        one, z = MatrixPolynomial.monomial(0, 2), MatrixPolynomial.monomial(1, 2)
        np.testing.assert_allclose(inner_right(one, one, mu), seq.gamma(0), atol=1e-14)
        np.testing.assert_allclose(inner_right(one, z, mu), seq.gamma(1), atol=1e-14)

    def test_against_moments(self, backend, rng):
        mu = seeded_measure(2, 2, 6)
        seq = circle_moments(mu, 4)
        P, Q = random_poly(rng, 2, 2), random_poly(rng, 2, 2)
        np.testing.assert_allclose(inner_right(P, Q, mu), inner_right_moments(P, Q, seq), atol=1e-12)
        np.testing.assert_allclose(inner_left(P, Q, mu), inner_left_moments(P, Q, seq), atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            inner_right(MatrixPolynomial(np.eye(3)), MatrixPolynomial(np.eye(3)), seeded_measure(1, 2, 3))


class TestDeterminantal:
    def test_scalar_order_one(self):
        g0, g1 = 2.0, 0.5 + 0.3j
        seq = MomentSequence.from_gammas([[[g0]], [[g1]]])
        psi = psi_determinantal(seq, 1, "R")
        np.testing.assert_allclose(psi.coeffs[:, 0, 0], [-g1, g0])

    def test_uniform(self):
        seq = circle_moments(discrete_uniform(6, 1), 3)
        for m in range(4):
            np.testing.assert_allclose(psi_determinantal(seq, m).coeffs[:, 0, 0],
                                       np.eye(m + 1)[m], atol=1e-14)

    def test_leading_coefficient(self):
        seq = circle_moments(seeded_measure(3, 2, 5), 2)
        detT = det(build_toeplitz(seq, 2)).real
        b = moment_ball(seq, 2)
        np.testing.assert_allclose(psi_determinantal(seq, 2, "R").leading,
                                   detT * np.linalg.inv(b.right), rtol=1e-10)
        np.testing.assert_allclose(psi_determinantal(seq, 2, "L").leading,
                                   detT * np.linalg.inv(b.left), rtol=1e-10)

    def test_size_guard(self):
        with pytest.raises(SizeGuard):
            psi_determinantal(circle_moments(seeded_measure(3, 2, 6), 4), 4)

    @pytest.mark.parametrize("p", [1, 2])
    def test_matches_monic(self, p):
        seq = circle_moments(seeded_measure(4 + p, p, 6), 4)
        sys = monic_system(seq, 3)
        for m in range(4):
            d = det(build_toeplitz(seq, m)).real
            b = moment_ball(seq, m)
            right = psi_determinantal(seq, m, "R").rmul(b.right / d)
            left = psi_determinantal(seq, m, "L").lmul(b.left / d)
            np.testing.assert_allclose(right.coeffs, sys.monic_R[m].coeffs, atol=1e-8)
            np.testing.assert_allclose(left.coeffs, sys.monic_L[m].coeffs, atol=1e-8)

    def test_determinantal_uniform(self):
        r = determinantal_check(circle_moments(discrete_uniform(5, 2), 3), 3)
        assert max(r[:5]) <= 1e-14

    def test_determinantal_scalar_order_one(self):
        g0, g1 = 1.5, 0.4 - 0.2j
        seq = MomentSequence.from_gammas([[[g0]], [[g1]]])
        psi = psi_determinantal(seq, 1)
        top = inner_right_moments(MatrixPolynomial.monomial(1, 1), psi, seq)
        assert top[0, 0] == pytest.approx(g0 ** 2 - abs(g1) ** 2)

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_determinantal_seeded(self, m):
        seq = circle_moments(seeded_measure(6, 2, 6), m)
        r = determinantal_check(seq, m)
        T = build_toeplitz(seq, m)
        assert max(r.residual_low, r.residual_top) <= 1e-8 * np.linalg.norm(T, 2) ** (m + 1)
        assert r.relative <= 1e-8


class TestMonicSystem:
    def test_uniform(self):
        sys = monic_system(circle_moments(discrete_uniform(6, 2), 5), 5)
        for m in range(6):
            z = MatrixPolynomial.monomial(m, 2).coeffs
            np.testing.assert_allclose(sys.monic_R[m].coeffs, z, atol=1e-14)
            np.testing.assert_allclose(sys.orthonormal_L[m].coeffs, z, atol=1e-14)
        for r in sys.rho_R + sys.rho_L:
            np.testing.assert_allclose(r, np.eye(2), atol=1e-14)

    def test_scalar_first(self):
        seq = circle_moments(seeded_measure(7, 1, 4), 2)
        sys = monic_system(seq, 1)
        g0, g1 = seq.gamma(0)[0, 0], seq.gamma(1)[0, 0]
        # <1, Phi_1> = Gamma_1 + c Gamma_0 = 0 for Phi_1(z) = z + c
        np.testing.assert_allclose(sys.monic_R[1].coeffs[:, 0, 0], [-g1 / g0, 1])

    def test_requires_interior(self):
        seq = circle_moments(seeded_measure(8, 2, 3), 4)
        with pytest.raises(NotInterior):
            monic_system(seq, 3)

    @pytest.mark.parametrize("seed", range(5))
    def test_orthogonality_and_normalization(self, seed):
        mu = seeded_measure(60 + seed, 1 + seed % 3, 7)
        seq = circle_moments(mu, 6)
        sys = monic_system(seq, 6)
        p = mu.p
        for m in range(7):
            normT = np.linalg.norm(build_toeplitz(seq, m), 2)
            for k in range(m):
                zk = MatrixPolynomial.monomial(k, p)
                assert np.abs(inner_right(zk, sys.monic_R[m], mu)).max() <= 1e-9 * normT
                assert np.abs(inner_left(sys.monic_L[m], zk, mu)).max() <= 1e-9 * normT
            np.testing.assert_allclose(sys.monic_R[m].leading, np.eye(p), atol=1e-10)
            np.testing.assert_allclose(inner_right(sys.orthonormal_R[m], sys.orthonormal_R[m], mu),
                                       np.eye(p), atol=1e-9)
            np.testing.assert_allclose(inner_left(sys.orthonormal_L[m], sys.orthonormal_L[m], mu),
                                       np.eye(p), atol=1e-9)
            b = moment_ball(seq, m)
            np.testing.assert_allclose(sys.orthonormal_R[m].leading, b.right_isqrt, atol=1e-9)
            np.testing.assert_allclose(sys.orthonormal_L[m].leading, b.left_isqrt, atol=1e-9)

    def test_tilde_identity(self):
        seq = circle_moments(seeded_measure(9, 2, 5), 3)
        for m in range(4):
            assert determinantal_check(seq, m).tilde <= 1e-8 * determinantal_check(seq, m).scale


class TestVerblunsky:
    def test_uniform(self):
        seq = circle_moments(discrete_uniform(6, 2), 5)
        for m in range(5):
            np.testing.assert_allclose(verblunsky_extract(seq, m), 0, atol=1e-14)

    def test_symmetric_two_atoms(self):
        mu = CircleMeasure.from_atoms([np.pi / 2, -np.pi / 2], np.full((2, 1, 1), 0.5))
        np.testing.assert_allclose(verblunsky_extract(circle_moments(mu, 1), 0), 0, atol=1e-15)

    @pytest.mark.parametrize("seed", range(6))
    def test_equals_canonical(self, seed):
        seq = circle_moments(seeded_measure(70 + seed, 2, 6), 5)
        cs = canonical_sequence(seq)
        sys = monic_system(seq, 5)
        for m in range(5):
            np.testing.assert_allclose(verblunsky_extract(seq, m), cs.A[m], atol=1e-9)
            hl, hr = verblunsky_from_recursion(sys, m)
            np.testing.assert_allclose(hl, cs.A[m], atol=1e-9)
            np.testing.assert_allclose(hr, cs.A[m], atol=1e-9)


class TestSzegoRecursion:
    def test_uniform(self):
        mu = discrete_uniform(6, 2)
        sys = monic_system(circle_moments(mu, 5), 5)
        for m in range(5):
            assert max(szego_residuals(sys, [np.zeros((2, 2))] * 5, mu, m)) <= 1e-14

    def test_scalar_two_atoms(self):
        mu = CircleMeasure.from_atoms([0.3, 2.0], np.array([[[0.4]], [[0.6]]]))
        seq = circle_moments(mu, 1)
        sys = monic_system(seq, 1)
        assert max(szego_residuals(sys, canonical_sequence(seq).A, mu, 0)) <= 1e-10

    @pytest.mark.parametrize("seed", range(4))
    def test_seeded(self, seed):
        mu = seeded_measure(80 + seed, 2, 7)
        seq = circle_moments(mu, 6)
        sys = monic_system(seq, 6)
        A = canonical_sequence(seq).A
        for m in range(6):
            assert max(szego_residuals(sys, A, mu, m)) <= 1e-8

    def test_detects_wrong_coefficients(self):
        mu = seeded_measure(90, 2, 5)
        seq = circle_moments(mu, 3)
        sys = monic_system(seq, 3)
        wrong = [a.conj().T for a in canonical_sequence(seq).A]
        assert max(szego_residuals(sys, wrong, mu, 1)) > 1e-4


class TestMonicSzego:
    def test_uniform(self):
        mu = discrete_uniform(6, 2)
        sys = monic_system(circle_moments(mu, 5), 5)
        for m in range(5):
            assert max(monic_szego_residuals(sys, [np.zeros((2, 2))] * 5, m, mu)) <= 1e-14

    def test_scalar_reduction(self):
        mu = seeded_measure(91, 1, 8, symmetric=True)
        seq = circle_moments(mu, 6)
        sys = monic_system(seq, 6)
        A, abar = circle_abar(seq, 6)
        np.testing.assert_allclose(np.array(abar), np.array(A), atol=1e-14)
        for m in range(6):
            assert max(monic_szego_residuals(sys, abar, m, mu)) <= 1e-10

    @pytest.mark.parametrize("seed", range(4))
    def test_seeded_symmetric(self, seed):
        mu = seeded_measure(92 + seed, 2, 10, symmetric=True)
        seq = circle_moments(mu, 8)
        sys = monic_system(seq, 8)
        _, abar = circle_abar(seq, 8)
        for m in range(8):
            assert max(monic_szego_residuals(sys, abar, m, mu)) <= 1e-8

    def test_reversed_right_polynomial_fails(self):
        # the right recursion needs the reversed *left* polynomial
        from matmoments.opuc import probe_points
        mu = seeded_measure(96, 2, 10, symmetric=True)
        seq = circle_moments(mu, 6)
        sys = monic_system(seq, 5)
        _, abar = circle_abar(seq, 5)
        m = 2
        alt = (sys.monic_R[m].shift() - sys.monic_R[m + 1]
               - reverse(sys.monic_R[m], m).rmul(abar[m]))
        assert np.abs(alt.at(probe_points(mu))).max() > 1e-4
