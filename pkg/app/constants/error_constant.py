# Symplectic core
ERROR_SYM_INVALID_MODE_COUNT = "error.symplectic.invalid-mode-count"
ERROR_SYM_NON_FINITE = "error.symplectic.non-finite-input"
ERROR_SYM_ZETA_OUT_OF_DISK = "error.symplectic.zeta-out-of-disk"
ERROR_SYM_SHAPE_MISMATCH = "error.symplectic.shape-mismatch"
ERROR_SYM_INVALID_COVARIANCE = "error.symplectic.invalid-covariance"

# Probe / channel
ERROR_PROBE_NEGATIVE_OCCUPATION = "error.probe.negative-occupation"
ERROR_PROBE_LENGTH_MISMATCH = "error.probe.length-mismatch"
ERROR_PROBE_NON_UNIT_DIRECTION = "error.probe.non-unit-direction"

# Measurement
ERROR_ECGM_NEGATIVE_ENERGY = "error.ecgm.negative-energy"
ERROR_ECGM_DIMENSION_MISMATCH = "error.ecgm.dimension-mismatch"
ERROR_ECGM_SINGULAR_COVARIANCE = "error.ecgm.singular-covariance"
ERROR_ECGM_INVALID_COUNT = "error.ecgm.invalid-sample-count"

# Fisher
ERROR_FISHER_SINGULAR_COVARIANCE = "error.fisher.singular-covariance"
ERROR_FISHER_NON_ORTHONORMAL_BASIS = "error.fisher.non-orthonormal-basis"
ERROR_FISHER_INVALID_V11 = "error.fisher.invalid-v11-squared"
ERROR_FISHER_INVALID_MODE_COUNT = "error.fisher.invalid-mode-count"
ERROR_FISHER_ZERO_AMPLITUDE = "error.fisher.zero-amplitude"

# Optimizer
ERROR_OPT_NOT_CONVERGED = "error.optimizer.not-converged"
ERROR_OPT_SWEEP_CELL_FAILED = "error.optimizer.sweep-cell-failed"

# Estimator
ERROR_EST_NOT_CONVERGED = "error.estimator.not-converged"
ERROR_EST_REP_FAILED = "error.estimator.repetition-failed"
ERROR_EST_INVALID_EXPERIMENT = "error.estimator.invalid-experiment"

# Validation
ERROR_VAL_INVALID_INPUT = "error.validation.invalid-input"
ERROR_VAL_OUT_OF_RANGE = "error.validation.out-of-range"

ERROR_INTERNAL_UNEXPECTED = "error.internal.unexpected"
