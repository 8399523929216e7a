import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from pydantic import ValidationError

from app.core.exception import AppException
from app.schemas.probe import ChannelSpec, ProbeSpec


def test_probe_state_moments(probe_service):
    spec = ProbeSpec(n_modes=2, alphas=[1.0, 2.0], thermal_occupations=[0.0, 0.5])
    state = probe_service.probe_state(spec)
    assert_allclose(state.mean, [math.sqrt(2), 0.0, 2 * math.sqrt(2), 0.0])
    assert_allclose(state.cov, np.diag([0.5, 0.5, 1.0, 1.0]))


def test_imprinted_mean_rotates_each_mode(probe_service):
    spec = ProbeSpec(n_modes=2, alphas=[1.0, 3.0], thermal_occupations=[0.2, 0.2])
    state = probe_service.phased_probe(spec, [0.5, -1.0])
    assert_allclose(
        state.mean,
        [math.sqrt(2) * math.cos(0.5), math.sqrt(2) * math.sin(0.5), 3 * math.sqrt(2) * math.cos(1.0), -3 * math.sqrt(2) * math.sin(1.0)],
    )
    # isotropic thermal covariance is phase invariant
    assert_allclose(state.cov, probe_service.probe_state(spec).cov, atol=1e-15)


def test_mean_jacobian_matches_finite_difference(probe_service):
    spec = ProbeSpec(n_modes=3, alphas=[1.0, 0.5, 2.0], thermal_occupations=[0.0, 0.1, 1.0])
    thetas, h = np.array([0.3, 1.2, -2.0]), 1e-6
    jac = probe_service.mean_jacobian(spec, thetas)
    for j in range(3):
        step = np.zeros(3)
        step[j] = h
        numeric = (
            probe_service.phased_probe(spec, thetas + step).mean
            - probe_service.phased_probe(spec, thetas - step).mean
        ) / (2 * h)
        assert_allclose(jac[:, j], numeric, atol=1e-8)


def test_directional_derivative_norm(probe_service):
    spec = ProbeSpec(n_modes=2, alphas=[1.0, 2.0], thermal_occupations=[0.0, 0.0])
    v = np.array([0.6, 0.8])
    d = probe_service.phase_derivative_of_mean(spec, [0.1, 0.2], v)
    assert d @ d == pytest.approx(2 * (0.36 * 1.0 + 0.64 * 4.0))


def test_thermal_probe_has_no_covariance_derivative(probe_service, vacuum_probe):
    for d in probe_service.covariance_derivatives(probe_service.probe_state(vacuum_probe), [0.4, 1.0]):
        assert_allclose(d, 0.0, atol=1e-15)


def test_channel_rescales_probe(probe_service):
    spec = ProbeSpec.isothermal(2.0, 0.1, 2)
    out = probe_service.apply_channel(spec, ChannelSpec(eta=0.5, n_channel=0.2))
    assert out.alphas == [1.0, 1.0]
    assert out.thermal_occupations == pytest.approx([0.3, 0.3])


def test_channels_compose(probe_service):
    first, second = ChannelSpec(eta=0.5, n_channel=0.1), ChannelSpec(eta=0.8, n_channel=0.2)
    spec = ProbeSpec.isothermal(1.0, 0.0, 2)
    composed = probe_service.compose_channels(first, second)
    assert composed.eta == pytest.approx(0.4)
    sequential = probe_service.apply_channel(probe_service.apply_channel(spec, first), second)
    assert probe_service.apply_channel(spec, composed).alphas == pytest.approx(sequential.alphas)


def test_non_unit_direction_rejected(probe_service, vacuum_probe):
    with pytest.raises(AppException) as exc:
        probe_service.phase_derivative_of_mean(vacuum_probe, [0.0, 0.0], [1.0, 1.0])
    assert exc.value.error_code == "error.probe.non-unit-direction"


def test_length_mismatch_rejected(probe_service, vacuum_probe):
    with pytest.raises(AppException) as exc:
        probe_service.phased_probe(vacuum_probe, [0.0, 0.0, 0.0])
    assert exc.value.error_code == "error.probe.length-mismatch"


def test_probe_spec_validation():
    with pytest.raises(ValidationError):
        ProbeSpec(n_modes=2, alphas=[1.0, 1.0], thermal_occupations=[-0.1, 0.0])
    with pytest.raises(ValidationError):
        ProbeSpec(n_modes=2, alphas=[1.0], thermal_occupations=[0.0, 0.0])
    with pytest.raises(ValidationError):
        ChannelSpec(eta=1.5)


def test_inverse_temperature_occupations():
    spec = ProbeSpec.from_inverse_temperatures([1.0, 1.0], [math.log(2.0), math.log(3.0)])
    assert spec.thermal_occupations == pytest.approx([1.0, 0.5])
    assert not spec.is_isothermal
    assert spec.total_intensity == 2.0
