"""Covariance construction and channel sampling tests."""

import numpy as np
import pytest

from dprsma.channel import (
    GroupGeometry,
    UserLinkParams,
    apply_csi_error,
    build_one_ring_covariance,
    effective_ula_azimuth,
    one_ring_matrix,
    sample_channel,
    truncate_rank,
)

GEO = GroupGeometry(
    azimuth_deg=30.0, distance_m=170.0, radius_m=30.0,
    user_distances_m=(200.0, 170.0, 140.0),
)


def test_effective_azimuth_fold():
    assert effective_ula_azimuth(30.0) == pytest.approx(30.0)
    assert effective_ula_azimuth(190.0) == pytest.approx(10.0)
    assert effective_ula_azimuth(350.0) == pytest.approx(-10.0)
    assert effective_ula_azimuth(510.0) == pytest.approx(-30.0)


def test_angular_spread_matches_reference_geometry():
    assert GEO.angular_spread_deg == pytest.approx(10.0, abs=0.1)


def test_point_scatterer_limit_is_steering_outer_product():
    theta = 30.0
    R = one_ring_matrix(theta, 1e-9, 8)
    m = np.arange(8)
    steer = np.exp(-1j * np.pi * m * np.sin(np.deg2rad(theta)))
    expected = np.outer(steer, steer.conj())
    assert np.abs(R - expected).max() < 1e-8
    assert np.linalg.matrix_rank(R, tol=1e-8) == 1


def test_covariance_invariants():
    cov = build_one_ring_covariance(GEO, 50)
    R = cov.R
    assert np.abs(R - R.conj().T).max() <= 1e-12
    assert np.abs(np.diag(R) - 1.0).max() < 1e-12
    ev = np.linalg.eigvalsh(R)
    assert ev.min() >= -1e-10 * ev.max()
    assert np.trace(R).real == pytest.approx(50.0, abs=1e-9)
    assert cov.eigvals.sum() <= 50.0 + 1e-9


def test_truncate_rank_rule():
    cov = build_one_ring_covariance(GEO, 50)
    assert truncate_rank(cov, m_bar=6, num_groups=4).trunc_rank == min(cov.rank, 15)
    # single group: no truncation
    solo = truncate_rank(cov, m_bar=6, num_groups=1)
    assert solo.trunc_rank == cov.rank


def test_truncate_rank_cap_applies_to_large_ranks():
    # rank-40 model with 50 antennas: cap = floor((50 - 3) / 3) = 15
    from dprsma.channel import CovarianceModel
    rng = np.random.default_rng(0)
    A = rng.standard_normal((50, 40)) + 1j * rng.standard_normal((50, 40))
    R = A @ A.conj().T / 40
    ev, U = np.linalg.eigh(R)
    big = CovarianceModel(R=R, eigvecs=np.ascontiguousarray(U[:, ::-1][:, :40]),
                          eigvals=ev[::-1][:40].copy(), rank=40, trunc_rank=40)
    assert truncate_rank(big, m_bar=6, num_groups=4).trunc_rank == 15
    # rank 10 stays below the cap
    small = CovarianceModel(R=R, eigvecs=np.ascontiguousarray(U[:, ::-1][:, :10]),
                            eigvals=ev[::-1][:10].copy(), rank=10, trunc_rank=10)
    assert truncate_rank(small, m_bar=6, num_groups=4).trunc_rank == 10


def test_truncation_semi_unitarity():
    cov = truncate_rank(build_one_ring_covariance(GEO, 50), 6, 4)
    U = cov.eigvecs
    assert np.abs(U.conj().T @ U - np.eye(cov.trunc_rank)).max() <= 1e-10


def test_sampling_determinism():
    cov = truncate_rank(build_one_ring_covariance(GEO, 50), 6, 4)
    link = UserLinkParams.from_distance(170.0, 4e4, 2.5)
    s1 = sample_channel(cov, link, np.random.default_rng(7))
    s2 = sample_channel(cov, link, np.random.default_rng(7))
    assert np.array_equal(s1.g_vv, s2.g_vv)
    assert np.array_equal(s1.g_hh, s2.g_hh)


def test_sampling_moments():
    cov = truncate_rank(build_one_ring_covariance(GEO, 50), 6, 4)
    rng = np.random.default_rng(11)
    n = 100_000
    r = cov.trunc_rank
    g = (rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))) / np.sqrt(2)
    h = g @ (cov.eigvecs * np.sqrt(cov.eigvals)).T
    energy = (np.abs(h) ** 2).sum(axis=1)
    target = cov.eigvals.sum()
    se = energy.std() / np.sqrt(n)
    assert abs(energy.mean() - target) < 3 * se


def test_single_eigenmode_is_exponential():
    # one retained eigenvalue of 4 -> |h|^2 ~ Exp with mean 4
    rng = np.random.default_rng(3)
    n = 100_000
    g = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
    h2 = 4.0 * np.abs(g) ** 2
    se = h2.std() / np.sqrt(n)
    assert abs(h2.mean() - 4.0) < 3 * se


def test_karhunen_loeve_consistency():
    cov = truncate_rank(build_one_ring_covariance(GEO, 24), 6, 4)
    rng = np.random.default_rng(23)
    n = 200_000
    r = cov.trunc_rank
    g = (rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))) / np.sqrt(2)
    h = g @ (cov.eigvecs * np.sqrt(cov.eigvals)).T
    emp = np.einsum("ti,tj->ij", h, h.conj()) / n
    target = (cov.eigvecs * cov.eigvals) @ cov.eigvecs.conj().T
    # entrywise within 5 relative standard errors (se ~ scale/sqrt(n))
    scale = np.sqrt(np.outer(np.abs(np.diag(target)), np.abs(np.diag(target))))
    assert (np.abs(emp - target) <= 5 * scale / np.sqrt(n) + 1e-12).all()


class TestCsiError:
    def test_zero_error_identity(self):
        x = np.arange(6.0) + 1j
        assert apply_csi_error(x, 0.0, np.random.default_rng(0)) is x

    def test_full_replacement_uncorrelated(self):
        rng = np.random.default_rng(1)
        n = 10_000
        x = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
        y = apply_csi_error(x, 1.0, rng)
        corr = np.abs(np.vdot(x, y)) / n
        assert corr < 3.0 / np.sqrt(n)

    def test_variance_preserving_mix(self):
        rng = np.random.default_rng(2)
        n = 100_000
        x = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
        y = apply_csi_error(x, 0.3, rng)
        var = (np.abs(y) ** 2).mean()
        corr2 = np.abs(np.vdot(x, y) / n) ** 2 / (
            (np.abs(x) ** 2).mean() * var
        )
        assert var == pytest.approx(1.0, abs=3.0 / np.sqrt(n))
        assert corr2 == pytest.approx(0.7, abs=4.0 / np.sqrt(n))

    def test_domain_errors(self):
        x = np.ones(3, dtype=complex)
        with pytest.raises(ValueError):
            apply_csi_error(x, -0.1, np.random.default_rng(0))
        with pytest.raises(ValueError):
            apply_csi_error(x, 1.5, np.random.default_rng(0))


def test_bad_geometry_rejected():
    with pytest.raises(ValueError):
        GroupGeometry(azimuth_deg=0, distance_m=20.0, radius_m=30.0, user_distances_m=(10.0,))
