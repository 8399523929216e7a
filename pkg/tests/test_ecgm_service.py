import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.stats import multivariate_normal

from app.core.exception import AppException
from app.dtos.gaussian_dto import ECGM, GaussianState
from app.ml import symplectic
from app.schemas.measurement import MeasurementParams
from app.schemas.probe import ProbeSpec


def test_heterodyne_has_zero_energy(ecgm_service):
    m = ecgm_service.heterodyne(3)
    assert m.energy == pytest.approx(0.0, abs=1e-15)
    assert m.label == "heterodyne"


def test_heterodyne_outcome_covariance(ecgm_service, probe_service):
    spec = ProbeSpec.isothermal(1.0, 0.7, 2)
    cov = ecgm_service.outcome_covariance(probe_service.phased_probe(spec, [0.3, 0.1]), ecgm_service.heterodyne(2))
    assert_allclose(cov, 1.7 * np.eye(4), atol=1e-14)


def test_squeezed_product_energy(ecgm_service):
    m = ecgm_service.squeezed_product([1.0, 2.5], [0.2, -0.7])
    assert m.energy == pytest.approx(3.5, rel=1e-12)


def test_homodyne_limit_energy(ecgm_service):
    m = ecgm_service.homodyne_limit(2)
    assert m.energy == pytest.approx(1e8, rel=1e-9)
    assert m.label == "homodyne"


def test_separable_seed_squeezes_along_mean_derivative(ecgm_service):
    thetas, energies = [0.4, -1.1], [2.0, 0.5]
    m = ecgm_service.separable_seed(energies, thetas)
    noise = m.outcome_noise
    for j, (theta, e) in enumerate(zip(thetas, energies)):
        u = np.array([-math.sin(theta), math.cos(theta)])
        block = noise[2 * j : 2 * j + 2, 2 * j : 2 * j + 2]
        r = math.asinh(math.sqrt(e))
        assert u @ block @ u == pytest.approx(math.exp(-2 * r) / 2, rel=1e-10)


def test_optimal_ecgm_energy_survives_rotation(ecgm_service):
    m = ecgm_service.optimal_ecgm(4.0)
    assert m.energy == pytest.approx(4.0, rel=1e-12)
    assert ecgm_service.optimal_ecgm(4.0, [0.8, -0.3]).energy == pytest.approx(4.0, rel=1e-12)


def test_negative_energies_rejected(ecgm_service):
    with pytest.raises(AppException) as exc:
        ecgm_service.squeezed_product([-1.0], [0.0])
    assert exc.value.error_code == "error.ecgm.negative-energy"


def test_dimension_mismatch_rejected(ecgm_service, probe_service, vacuum_probe):
    with pytest.raises(AppException) as exc:
        ecgm_service.outcome_covariance(probe_service.probe_state(vacuum_probe), ecgm_service.heterodyne(3))
    assert exc.value.error_code == "error.ecgm.dimension-mismatch"


def test_ecgm_rejects_unphysical_seed():
    with pytest.raises(AppException):
        ECGM(n_modes=1, cov_s=0.1 * np.eye(2))


def test_density_peak_value(ecgm_service, probe_service, vacuum_probe):
    state = probe_service.phased_probe(vacuum_probe, [0.0, 0.0])
    m = ecgm_service.heterodyne(2)
    # covariance I on four quadratures
    assert ecgm_service.outcome_density(state, m, state.mean) == pytest.approx((2 * math.pi) ** -2)
    assert ecgm_service.log_outcome_density(state, m, state.mean) == pytest.approx(-2 * math.log(2 * math.pi))


def test_density_integrates_to_one(ecgm_service, probe_service, vacuum_probe):
    state = probe_service.phased_probe(vacuum_probe, [0.3, -0.5])
    m = ecgm_service.optimal_ecgm(2.0)
    cov = ecgm_service.outcome_covariance(state, m)
    proposal = multivariate_normal(mean=state.mean, cov=2.0 * cov)
    z = proposal.rvs(size=1_000_000, random_state=np.random.default_rng(17))
    weights = ecgm_service.outcome_density(state, m, z) / proposal.pdf(z)
    assert weights.mean() == pytest.approx(1.0, abs=0.01)


def test_log_density_is_quadratic_on_rays(ecgm_service, probe_service, vacuum_probe, rng):
    state = probe_service.phased_probe(vacuum_probe, [0.7, 0.2])
    m = ecgm_service.squeezed_product([1.5, 0.4], [0.3, -0.9])
    cov_inv = np.linalg.inv(ecgm_service.outcome_covariance(state, m))
    t = np.linspace(-3.0, 3.0, 9)
    for _ in range(5):
        origin, direction = rng.normal(size=4), rng.normal(size=4)
        z = origin + np.outer(t, direction)
        density = ecgm_service.outcome_density(state, m, z)
        assert np.all(density > 0.0)
        log_p = ecgm_service.log_outcome_density(state, m, z)
        coeffs, residuals, *_ = np.polyfit(t, log_p, 2, full=True)
        assert residuals.size == 0 or residuals[0] < 1e-16
        assert coeffs[0] == pytest.approx(-0.5 * direction @ cov_inv @ direction, rel=1e-9)


def test_sampling_is_reproducible_and_matches_moments(ecgm_service, probe_service, vacuum_probe):
    state = probe_service.phased_probe(vacuum_probe, [0.2, -0.4])
    m = ecgm_service.optimal_ecgm(2.0)
    first = ecgm_service.sample_outcomes(state, m, 200_000, seed=11)
    second = ecgm_service.sample_outcomes(state, m, 200_000, seed=11)
    assert first.shape == (200_000, 4)
    assert np.array_equal(first, second)

    cov = ecgm_service.outcome_covariance(state, m)
    assert_allclose(first.mean(axis=0), state.mean, atol=0.02)
    assert_allclose(np.cov(first, rowvar=False), cov, atol=0.05 * np.abs(cov).max())


def test_sample_count_must_be_positive(ecgm_service, probe_service, vacuum_probe):
    with pytest.raises(AppException):
        ecgm_service.sample_outcomes(probe_service.probe_state(vacuum_probe), ecgm_service.heterodyne(2), 0, seed=1)


def test_gaussian_state_transform_round_trip():
    state = GaussianState(mean=np.array([1.0, 0.0]), cov=0.5 * np.eye(2))
    r = symplectic.phase_rotation([0.6])
    back = state.transformed(r).transformed(r.T)
    assert_allclose(back.mean, state.mean, atol=1e-15)


def test_two_mode_seed_energy(ecgm_service):
    m = ecgm_service.from_params(MeasurementParams(r1=0.8, r2=0.4, zeta_mag=0.3, phi1=1.0))
    assert ecgm_service.energy(m) == pytest.approx(math.sinh(0.8) ** 2 + math.sinh(0.4) ** 2, rel=1e-12)
