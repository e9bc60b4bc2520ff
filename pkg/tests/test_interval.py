import json

import numpy as np
import pytest
from scipy.optimize import linprog

from matmoments.errors import InsufficientData, NotInterior, NotSymmetric, DimensionMismatch
from matmoments.generate import discrete_uniform
from matmoments.interval import (
    abar_from_A,
    bounds_check,
    canonical_U,
    canonical_link_check,
    circle_abar,
    geronimus_check,
    geronimus_forward,
    hankel_build,
    hankel_interior,
    recurrence_direct,
    recurrence_from_abar,
    recurrence_residual,
    s_bounds,
    vu_identity_residuals,
)
from matmoments.measures import (
    IntervalMeasure,
    circle_moments,
    interval_moments,
    szego_map,
)
from matmoments.moment_space import canonical_sequence, moment_ball

from conftest import seeded_measure

I2 = np.eye(2)


def two_point(p=2):
    return IntervalMeasure.from_atoms([-1.0, 1.0], np.array([np.eye(p) / 2] * 2))


def chebyshev_nodes(N, p=1):
    xs = np.cos((2 * np.arange(N) + 1) * np.pi / (2 * N))
    return IntervalMeasure.from_atoms(xs, np.repeat(np.eye(p)[None] / N, N, axis=0))


def lp_extremes(s, n, grid=np.linspace(-1, 1, 2001)):
    """Range of the n-th moment over measures on a grid sharing s_0..s_{n-1}."""
    A = np.vander(grid, n, increasing=True).T
    out = []
    for sign in (1, -1):
        res = linprog(sign * grid ** n, A_eq=A, b_eq=s[:n], bounds=(0, None), method="highs")
        assert res.status == 0
        out.append(grid ** n @ res.x)
    return out  # (min, max)


class TestHankel:
    def test_two_point(self):
        H = hankel_build(interval_moments(two_point(), 2), 2)
        np.testing.assert_allclose(H.H_under, np.eye(4), atol=1e-15)
        np.testing.assert_allclose(H.H_over, np.zeros((2, 2)), atol=1e-15)

    def test_single_atom(self):
        S = interval_moments(IntervalMeasure.from_atoms([1.0], I2[None]), 6)
        for n in (2, 4):
            H = hankel_build(S, n).H_under
            np.testing.assert_allclose(H, np.kron(np.ones((n // 2 + 1,) * 2), I2))

    @pytest.mark.parametrize("n", range(7))
    def test_shapes_and_symmetry(self, n):
        mu = szego_map(seeded_measure(3, 2, 10, symmetric=True))
        H = hankel_build(interval_moments(mu, n), n)
        m, odd = divmod(n, 2)
        assert H.H_under.shape == (2 * (m + 1),) * 2
        assert H.H_over.shape == (2 * (m + 1 if odd else m),) * 2
        assert H.h_under.shape == (2 * m, 2)
        assert H.h_over.shape == (2 * (m if odd else max(m - 1, 0)), 2)
        for M in (H.H_under, H.H_over):
            assert np.abs(M - M.T).max(initial=0) <= 1e-14 and np.abs(M.imag).max(initial=0) == 0

    def test_insufficient(self):
        with pytest.raises(InsufficientData):
            hankel_build(interval_moments(two_point(), 2), 3)


class TestBounds:
    def test_first(self):
        S = interval_moments(szego_map(seeded_measure(1, 2, 6, symmetric=True)), 1)
        b = s_bounds(S, 1)
        np.testing.assert_array_equal(b.s_plus, S[0])
        np.testing.assert_array_equal(b.s_minus, -S[0])

    def test_two_point_second(self):
        b = s_bounds(interval_moments(two_point(), 2), 2)
        np.testing.assert_allclose(b.s_plus, I2)
        np.testing.assert_allclose(b.s_minus, 0, atol=1e-15)

    @pytest.mark.parametrize("seed", range(5))
    def test_generating_measure_between(self, seed):
        mu = szego_map(seeded_measure(10 + seed, 1 + seed % 3, 12, symmetric=True))
        S = interval_moments(mu, 6)
        for n in range(1, 7):
            lo, hi = bounds_check(S, n)
            scale = np.linalg.norm(S[0], 2)
            assert lo >= -1e-10 * scale and hi >= -1e-10 * scale

    def test_boundary_refused(self):
        S = interval_moments(two_point(), 5)
        with pytest.raises(NotInterior):
            s_bounds(S, 5)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_scalar_extremes_against_lp(self, n):
        mu = IntervalMeasure.from_atoms([-0.8, -0.3, 0.1, 0.55, 0.9],
                                        np.array([[[w]] for w in (0.1, 0.3, 0.2, 0.25, 0.15)]))
        S = interval_moments(mu, n)
        b = s_bounds(S, n)
        lo, hi = lp_extremes(S.s[:, 0, 0].real, n)
        assert b.s_minus[0, 0].real == pytest.approx(lo, abs=1e-5)
        assert b.s_plus[0, 0].real == pytest.approx(hi, abs=1e-5)


class TestCanonicalU:
    def test_two_point(self):
        cu = canonical_U(interval_moments(two_point(), 4))
        np.testing.assert_allclose(cu.U[0], I2 / 2, atol=1e-15)
        np.testing.assert_allclose(cu.U[1], I2, atol=1e-12)
        assert cu.n_mu == 2

    def test_uniform_image(self):
        S = interval_moments(szego_map(discrete_uniform(12, 2)), 10)
        cu = canonical_U(S)
        assert len(cu.U) >= 10
        for u in cu.U[:10]:
            np.testing.assert_allclose(u, I2 / 2, atol=1e-12)

    def test_scalar_against_lp(self):
        mu = IntervalMeasure.from_atoms([-0.7, -0.1, 0.4, 0.95],
                                        np.array([[[w]] for w in (0.3, 0.2, 0.4, 0.1)]))
        S = interval_moments(mu, 5)
        cu = canonical_U(S)
        s = S.s[:, 0, 0].real
        for n in range(2, 6):
            lo, hi = lp_extremes(s, n)
            assert cu.U[n - 1][0, 0].real == pytest.approx((s[n] - lo) / (hi - lo), abs=1e-4)

    @pytest.mark.parametrize("seed", range(4))
    def test_properties(self, seed):
        S = interval_moments(szego_map(seeded_measure(20 + seed, 2, 12, symmetric=True)), 10)
        cu = canonical_U(S)
        for u, ub, asym in zip(cu.U, cu.U_bar, cu.asymmetry):
            ev = np.linalg.eigvalsh(u)
            assert ev[0] >= -1e-8 and ev[-1] <= 1 + 1e-8
            assert asym <= 1e-9
            np.testing.assert_allclose(np.sort(np.linalg.eigvals(ub).real), ev, atol=1e-9)


class TestCircleSide:
    def test_abar_zero(self):
        seq = circle_moments(discrete_uniform(6, 2), 5)
        A, abar = circle_abar(seq, 5)
        np.testing.assert_allclose(np.array(abar), 0, atol=1e-14)

    def test_abar_scalar(self):
        seq = circle_moments(seeded_measure(1, 1, 8, symmetric=True), 7)
        A, abar = circle_abar(seq, 6)
        np.testing.assert_allclose(np.array(abar), np.array(A), atol=1e-14)

    def test_abar_spectrum(self):
        seq = circle_moments(seeded_measure(2, 2, 10, symmetric=True), 8)
        A, abar = circle_abar(seq, 8)
        for a, b in zip(A, abar):
            np.testing.assert_allclose(np.sort_complex(np.linalg.eigvals(a)),
                                       np.sort_complex(np.linalg.eigvals(b)), atol=1e-9)

    def test_abar_needs_balls(self):
        seq = circle_moments(seeded_measure(2, 2, 10, symmetric=True), 3)
        with pytest.raises(DimensionMismatch):
            abar_from_A(canonical_sequence(seq).A, [moment_ball(seq, 0)])

    def test_forward_trivial(self):
        np.testing.assert_allclose(geronimus_forward([np.zeros((2, 2)), I2]), [I2 / 2, I2])

    @pytest.mark.parametrize("seed", range(5))
    def test_forward_matches_interval(self, seed):
        mu = seeded_measure(30 + seed, 1 + seed % 3, 10, symmetric=True)
        cs = canonical_sequence(circle_moments(mu, 5))
        cu = canonical_U(interval_moments(szego_map(mu), 5))
        for u, v in zip(geronimus_forward(cs.A), cu.U):
            np.testing.assert_allclose(u, v, atol=1e-9)


class TestRecurrence:
    def test_zero_abar(self):
        rec = recurrence_from_abar([np.zeros((2, 2))] * 9, 3)
        np.testing.assert_allclose(rec.B[0], I2 / 2)
        for m in range(1, 4):
            np.testing.assert_allclose(rec.B[m], I2 / 4)
        for c in rec.C:
            np.testing.assert_allclose(c, I2)

    def test_boundary_factor(self):
        abar = [np.zeros((2, 2))] * 5
        abar[1] = -I2  # Abar_2
        assert np.abs(recurrence_from_abar(abar, 1).B[0]).max() == 0

    def test_insufficient(self):
        with pytest.raises(InsufficientData):
            recurrence_from_abar([np.zeros((2, 2))] * 4, 1)

    def test_two_point_polynomials(self):
        d = recurrence_direct(interval_moments(two_point(), 3), 0)
        np.testing.assert_allclose(d.P[1].coeffs, [np.zeros((2, 2)), I2], atol=1e-15)
        np.testing.assert_allclose(d.P[2].coeffs, [-I2, np.zeros((2, 2)), I2], atol=1e-15)

    def test_chebyshev_scalar(self):
        d = recurrence_direct(interval_moments(chebyshev_nodes(12), 9), 3)
        np.testing.assert_allclose([b[0, 0] for b in d.rec.B], [0.5, 0.25, 0.25, 0.25], atol=1e-12)
        np.testing.assert_allclose([c[0, 0] for c in d.rec.C], [1, 1, 1, 1], atol=1e-12)
        # P_m are monic Chebyshev polynomials of the first kind for m >= 1
        for m in range(1, 5):
            T = np.polynomial.chebyshev.cheb2poly([0] * m + [1]) / 2 ** (m - 1)
            np.testing.assert_allclose(d.P[m].coeffs[:, 0, 0].real, T, atol=1e-12)

    def test_zero_abar_matches_direct(self):
        rec = recurrence_from_abar([np.zeros((1, 1))] * 7, 2)
        d = recurrence_direct(interval_moments(chebyshev_nodes(12), 7), 2)
        for a, b in zip(rec.B + rec.C, d.rec.B + d.rec.C):
            np.testing.assert_allclose(a, b, atol=1e-12)

    @pytest.mark.parametrize("seed", range(4))
    def test_direct_orthogonality_and_residual(self, seed):
        mu = szego_map(seeded_measure(40 + seed, 2, 12, symmetric=True))
        S = interval_moments(mu, 7)
        d = recurrence_direct(S, 2)
        assert d.residual <= 1e-9
        assert recurrence_residual(d.P, d.rec) == d.residual
        for m, P in enumerate(d.P):
            np.testing.assert_allclose(P.leading, I2, atol=1e-12)
            for k in range(m):
                moment = sum(x ** k * w @ P(x) for x, w in mu.atoms())
                assert np.abs(moment).max() <= 1e-10

    def test_direct_needs_interior(self):
        with pytest.raises(NotInterior):
            recurrence_direct(interval_moments(two_point(), 5), 1)


class TestGeronimus:
    def test_uniform(self):
        rep = geronimus_check(discrete_uniform(12, 2), 2)
        assert rep.B_discrepancy <= 1e-9 and rep.C_discrepancy <= 1e-9
        np.testing.assert_allclose(rep.direct.B[0], I2 / 2, atol=1e-10)
        for m in (1, 2):
            np.testing.assert_allclose(rep.direct.B[m], I2 / 4, atol=1e-10)
        for c in rep.direct.C:
            np.testing.assert_allclose(c, I2, atol=1e-10)

    def test_scalar_six_atoms(self):
        rep = geronimus_check(seeded_measure(50, 1, 6, symmetric=True), 1)
        assert max(rep.B_discrepancy, rep.C_discrepancy) <= 1e-8

    @pytest.mark.parametrize("seed", range(4))
    def test_matrix(self, seed):
        rep = geronimus_check(seeded_measure(51 + seed, 2, 10, symmetric=True), 2)
        assert max(rep.B_discrepancy, rep.C_discrepancy) <= 1e-8

    def test_report_json(self):
        rep = geronimus_check(seeded_measure(55, 2, 8, symmetric=True), 1)
        d = json.loads(json.dumps(rep.to_json()))
        assert set(d) == {"B_discrepancy", "C_discrepancy", "per_index", "n_checked"}
        assert d["n_checked"] == 2 and len(d["per_index"]) == 2

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetric):
            geronimus_check(seeded_measure(56, 2, 8), 1)

    def test_too_few_atoms(self):
        with pytest.raises(NotInterior):
            geronimus_check(seeded_measure(57, 2, 4, symmetric=True), 2)


class TestLinks:
    @pytest.mark.parametrize("seed", range(5))
    def test_canonical_link(self, seed):
        r = canonical_link_check(seeded_measure(60 + seed, 1 + seed % 3, 10, symmetric=True), 8)
        assert max(r.symmetric) <= 1e-9 and max(r.nonsymmetric) <= 1e-9

    @pytest.mark.parametrize("seed", range(5))
    def test_vu_identity(self, seed):
        S = interval_moments(szego_map(seeded_measure(70 + seed, 2, 12, symmetric=True)), 8)
        assert max(vu_identity_residuals(S)) <= 1e-9

    def test_link_not_symmetric(self):
        with pytest.raises(NotSymmetric):
            canonical_link_check(seeded_measure(75, 2, 6))

    def test_hankel_interior(self):
        S = interval_moments(two_point(), 3)
        assert hankel_interior(S, 1) and not hankel_interior(S, 2)
