import math

import numpy as np
import pytest

from app.core.exception import AppException
from app.enumerations.receiver_enum import ReceiverKind
from app.ml import closed_forms, symplectic
from app.schemas.probe import ProbeSpec
from app.services.estimator_service import wrap_phase


def test_wrap_phase():
    assert wrap_phase(0.0) == 0.0
    assert wrap_phase(-math.pi) == math.pi
    assert wrap_phase(3 * math.pi) == pytest.approx(math.pi)
    assert wrap_phase(2 * math.pi + 0.1) == pytest.approx(0.1)


def test_likelihood_peaks_near_truth(estimator_service, ecgm_service, probe_service, vacuum_probe, balanced_v):
    m = ecgm_service.heterodyne(2)
    outcomes = ecgm_service.sample_outcomes(probe_service.phased_probe(vacuum_probe, [0.0, 0.0]), m, 10_000, seed=5)
    at_truth = estimator_service.log_likelihood([0.0, 0.0], outcomes, vacuum_probe, m)
    for sign in (1.0, -1.0):
        shifted = estimator_service.log_likelihood(sign * 0.1 * balanced_v, outcomes, vacuum_probe, m)
        assert shifted < at_truth


def test_strong_probe_estimate_is_tight(estimator_service, ecgm_service, probe_service, balanced_v):
    spec = ProbeSpec.isothermal(10.0, 0.0, 2)
    m = ecgm_service.heterodyne(2)
    outcomes = ecgm_service.sample_outcomes(probe_service.phased_probe(spec, [0.0, 0.0]), m, 1000, seed=9)
    assert abs(estimator_service.mle_estimate(outcomes, spec, m, balanced_v, [0.0, 0.0])) < 0.01


def test_estimate_is_equivariant_under_phase_shifts(estimator_service, ecgm_service, probe_service, vacuum_probe, balanced_v):
    m = ecgm_service.optimal_ecgm(4.0)
    outcomes = ecgm_service.sample_outcomes(probe_service.phased_probe(vacuum_probe, [0.0, 0.0]), m, 2000, seed=3)
    base = estimator_service.mle_estimate(outcomes, vacuum_probe, m, balanced_v, [0.0, 0.0])

    shift = np.array([0.3, -0.2])
    shifted_outcomes = outcomes @ symplectic.phase_rotation(shift)
    shifted = estimator_service.mle_estimate(shifted_outcomes, vacuum_probe, m.rotated(shift), balanced_v, shift)
    assert shifted == pytest.approx(wrap_phase(balanced_v @ shift + base), abs=1e-8)


def test_full_vector_estimate_agrees_with_line_search(estimator_service, ecgm_service, probe_service, vacuum_probe, balanced_v):
    m = ecgm_service.heterodyne(2)
    outcomes = ecgm_service.sample_outcomes(probe_service.phased_probe(vacuum_probe, [0.0, 0.0]), m, 5000, seed=21)
    line = estimator_service.mle_estimate(outcomes, vacuum_probe, m, balanced_v, [0.0, 0.0])
    full = estimator_service.mle_estimate(outcomes, vacuum_probe, m, balanced_v, [0.0, 0.0], full_vector=True)
    # heterodyne Fisher matrix is diagonal, so both searches target the same point to first order
    assert full == pytest.approx(line, abs=5e-3)


def test_crb_scales_inversely_with_samples(estimator_service, ecgm_service, vacuum_probe, balanced_v):
    m = ecgm_service.heterodyne(2)
    small = estimator_service.crb_experiment(vacuum_probe, [0.0, 0.0], m, balanced_v, 1000, 100, seed=1)
    large = estimator_service.crb_experiment(vacuum_probe, [0.0, 0.0], m, balanced_v, 2000, 100, seed=1)
    assert small.crb == pytest.approx(2.0 * large.crb, rel=1e-12)
    assert small.fisher_information == pytest.approx(2.0)


def test_crb_experiment_is_reproducible(estimator_service, ecgm_service, vacuum_probe, balanced_v):
    m = ecgm_service.optimal_ecgm(4.0)
    first = estimator_service.crb_experiment(vacuum_probe, [0.0, 0.0], m, balanced_v, 1000, 100, seed=42)
    second = estimator_service.crb_experiment(vacuum_probe, [0.0, 0.0], m, balanced_v, 1000, 100, seed=42)
    assert first == second
    assert first.seed == 42
    assert first.repetitions == 100


def test_optimal_receiver_lowers_the_bound(estimator_service, ecgm_service, vacuum_probe, balanced_v):
    het = estimator_service.crb_experiment(
        vacuum_probe, [0.0, 0.0], ecgm_service.heterodyne(2), balanced_v, 1000, 100, seed=7
    )
    opt = estimator_service.crb_experiment(
        vacuum_probe, [0.0, 0.0], ecgm_service.optimal_ecgm(4.0), balanced_v, 1000, 100, seed=7,
        receiver=ReceiverKind.OPTIMAL,
    )
    assert het.crb / opt.crb == pytest.approx(closed_forms.gfi_closed_form(1.0, 0.0, 4.0) / 2.0, rel=1e-10)
    assert opt.receiver == ReceiverKind.OPTIMAL


@pytest.mark.parametrize("m_samples, reps", [(999, 100), (1000, 99)])
def test_undersized_experiment_rejected(estimator_service, ecgm_service, vacuum_probe, balanced_v, m_samples, reps):
    with pytest.raises(AppException) as exc:
        estimator_service.crb_experiment(
            vacuum_probe, [0.0, 0.0], ecgm_service.heterodyne(2), balanced_v, m_samples, reps, seed=0
        )
    assert exc.value.error_code == "error.estimator.invalid-experiment"


@pytest.mark.slow
@pytest.mark.parametrize("receiver", ["heterodyne", "optimal"])
def test_mle_attains_the_bound(estimator_service, ecgm_service, vacuum_probe, balanced_v, receiver):
    m = ecgm_service.heterodyne(2) if receiver == "heterodyne" else ecgm_service.optimal_ecgm(4.0)
    report = estimator_service.crb_experiment(vacuum_probe, [0.0, 0.0], m, balanced_v, 10_000, 1000, seed=2024)
    assert 0.8 <= report.ratio <= 1.2
    assert abs(report.bias) < 4 * report.bias_standard_error


@pytest.mark.slow
def test_full_vector_mle_attains_the_bound(estimator_service, ecgm_service, vacuum_probe, balanced_v):
    report = estimator_service.crb_experiment(
        vacuum_probe, [0.0, 0.0], ecgm_service.heterodyne(2), balanced_v, 10_000, 300, seed=77, full_vector=True
    )
    assert 0.7 <= report.ratio <= 1.3
    assert report.full_vector
