import numpy as np
import pytest

from pointint import (
    BoundaryPair,
    ConfigurationError,
    DomainError,
    PointConfiguration,
    diagonal_pair,
    friedrichs_pair,
    im_weyl_boundary,
    krein_pair,
    scattering_matrix,
)
from pointint.matrixkernel import norm2

from conftest import random_config, random_self_adjoint_pair

FOUR_PI = 4 * np.pi


def two_centers(d, r=1.0):
    return PointConfiguration(d, [[0.0] * d, [r] + [0.0] * (d - 1)])


def scalar_phase(alpha, x):
    k = np.sqrt(x) / FOUR_PI
    return (alpha + 1j * k) / (alpha - 1j * k)


class TestBoundaryWeyl:
    def test_examples(self):
        bw = im_weyl_boundary(PointConfiguration(3, [[0, 0, 0]]), 1.0)
        assert bw.imag_part[0, 0] == pytest.approx(1 / FOUR_PI)
        bw = im_weyl_boundary(random_config(np.random.default_rng(1), 2, m_max=4), 3.7)
        np.testing.assert_allclose(np.diag(bw.imag_part), 0.25)
        bw = im_weyl_boundary(two_centers(3, 1.0), np.pi**2)
        assert abs(bw.imag_part[0, 1]) < 1e-16

    def test_closed_form_matches_numeric(self, rng):
        for d in (2, 3):
            for _ in range(30):
                c = random_config(rng, d, n=int(rng.integers(1, 3)))
                x = 10.0 ** rng.uniform(-2, 3)
                bw = im_weyl_boundary(c, x)
                assert np.max(np.abs(bw.M_plus.imag - bw.imag_part)) <= 1e-10

    def test_2d_low_energy_rank_one(self, rng):
        c = random_config(rng, 2, m_max=4)
        for k in range(2, 9):
            bw = im_weyl_boundary(c, 10.0**-k)
            assert np.max(np.abs(bw.imag_part - 0.25)) < 10.0 ** (-k) * 10
        c2 = two_centers(2, 1.0)
        assert im_weyl_boundary(c2, 1e-14).rank == 1

    def test_domain(self):
        with pytest.raises(DomainError):
            im_weyl_boundary(two_centers(3), 0.0)


class TestScattering:
    def test_friedrichs_is_identity(self, rng):
        for d in (2, 3):
            c = random_config(rng, d)
            for x in (0.1, 1.0, 10.0):
                res = scattering_matrix(friedrichs_pair(c), c, x)
                np.testing.assert_allclose(res.S_matrix, np.eye(res.rank), atol=1e-15)

    def test_scalar_phase(self):
        c = PointConfiguration(3, [[0, 0, 0]])
        for alpha in (-2.0, 0.3, 1.0):
            for x in np.geomspace(1e-3, 1e4, 30):
                res = scattering_matrix(diagonal_pair(c, [alpha]), c, x)
                assert abs(res.S_matrix[0, 0] - scalar_phase(alpha, x)) <= 1e-12

    def test_cli_example_value(self):
        c = PointConfiguration(3, [[0, 0, 0]])
        S = scattering_matrix(diagonal_pair(c, [1.0]), c, 1.0).S_matrix[0, 0]
        assert S == pytest.approx((1 + 1j / FOUR_PI) / (1 - 1j / FOUR_PI), abs=1e-14)

    def test_weak_coupling_limit(self):
        c = PointConfiguration(3, [[0, 0, 0]])
        for alpha in (1e4, 1e6, 1e8):
            S = scattering_matrix(diagonal_pair(c, [alpha]), c, 1.0).S_matrix[0, 0]
            assert abs(S - 1) <= 1.01 * 2 / (FOUR_PI * alpha)

    def test_unitarity(self, rng):
        for _ in range(40):
            d = int(rng.choice([2, 3]))
            c = random_config(rng, d, n=int(rng.integers(1, 3)))
            pair = random_self_adjoint_pair(rng, c.size)
            for x in (0.1, 1.0, 10.0, 100.0):
                res = scattering_matrix(pair, c, x)
                assert res.unitarity_defect <= 1e-8
                assert norm2(res.full @ res.full.conj().T - np.eye(c.size)) <= 1e-8

    def test_krein_pair_unitary(self, rng):
        for d in (2, 3):
            c = random_config(rng, d)
            assert scattering_matrix(krein_pair(c), c, 2.0).unitarity_defect <= 1e-10

    def test_reduced_rank_2d(self):
        c = two_centers(2, 1.0)
        res = scattering_matrix(diagonal_pair(c, [0.2, 0.2]), c, 1e-14)
        assert res.rank == 1 and res.S_matrix.shape == (1, 1)
        assert res.unitarity_defect <= 1e-8

    def test_non_self_adjoint_rejected(self):
        c = two_centers(3)
        with pytest.raises(ConfigurationError):
            scattering_matrix(BoundaryPair([[0, 1], [0, 0]], np.eye(2)), c, 1.0)
