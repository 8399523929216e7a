"""
Closed-form Fisher information values for isothermal displaced thermal probes.

All expressions are written through the squeezed-quadrature factor
e^{-2r} = (sqrt(E+1) + sqrt(E))^{-2} of a single-mode squeezed vacuum with
sinh^2 r = E. This is the stable form of 1 + 2(E - sqrt(E^2 + E)).
"""

import math

from scipy.special import xlogy

from app.constants.error_constant import (
    ERROR_FISHER_INVALID_MODE_COUNT,
    ERROR_FISHER_INVALID_V11,
    ERROR_ECGM_NEGATIVE_ENERGY,
    ERROR_PROBE_NEGATIVE_OCCUPATION,
)
from app.core.exception import AppException
from app.enumerations.receiver_enum import EgMode

_LN2 = math.log(2.0)


def _check(n0: float, energy: float) -> None:
    if energy < 0 or not math.isfinite(energy):
        raise AppException(
            error_code=ERROR_ECGM_NEGATIVE_ENERGY,
            message="Energy must be finite and non-negative",
            details={"energy": energy},
        )
    if n0 < 0:
        raise AppException(
            error_code=ERROR_PROBE_NEGATIVE_OCCUPATION,
            message="Thermal occupation must be non-negative",
            details={"n0": n0},
        )


def squeezed_variance_factor(energy: float) -> float:
    """e^{-2r} for sinh^2 r = energy."""
    return 1.0 / (math.sqrt(energy + 1.0) + math.sqrt(energy)) ** 2


def effective_noise(n0: float, energy: float) -> float:
    """N0 + 1 + E - sqrt(E^2 + E), i.e. the squeezed-quadrature outcome variance."""
    return n0 + 0.5 + 0.5 * squeezed_variance_factor(energy)


def heterodyne_fi(alpha: float, n0: float) -> float:
    return 2.0 * alpha**2 / (n0 + 1.0)


def qfi_isothermal(alpha: float, n0: float) -> float:
    return 4.0 * alpha**2 / (2.0 * n0 + 1.0)


def gfi_closed_form(alpha: float, n0: float, energy: float) -> float:
    """Maximal Gaussian Fisher information 2 alpha^2 / (N0 + 1 + E - sqrt(E^2 + E))."""
    _check(n0, energy)
    return 2.0 * alpha**2 / effective_noise(n0, energy)


def separable_fi_balanced(alpha: float, n0: float, energy: float, n_modes: int) -> float:
    """Best separable value for a balanced estimand: energy split equally over the modes."""
    if n_modes < 1:
        raise AppException(
            error_code=ERROR_FISHER_INVALID_MODE_COUNT,
            message="n_modes must be at least 1",
            details={"n_modes": n_modes},
        )
    return gfi_closed_form(alpha, n0, energy / n_modes)


def _unbalanced_weight(n0: float, energy: float, v11_sq: float, n_modes: int | None) -> float:
    """v11^2 / (N0 + 1 + E - sqrt(E^2 + E)) + (1 - v11^2) / (N0 + 1)."""
    _check(n0, energy)
    if not 0.0 < v11_sq <= 1.0:
        raise AppException(
            error_code=ERROR_FISHER_INVALID_V11,
            message="(v1)_1^2 must lie in (0, 1]",
            details={"v11_sq": v11_sq},
        )
    if n_modes is not None and n_modes <= (1.0 - v11_sq) / v11_sq:
        raise AppException(
            error_code=ERROR_FISHER_INVALID_MODE_COUNT,
            message="Too few modes for the requested dominant entry",
            details={"n_modes": n_modes, "v11_sq": v11_sq},
        )
    return v11_sq / effective_noise(n0, energy) + (1.0 - v11_sq) / (n0 + 1.0)


def separable_fi_unbalanced(
    alpha: float,
    n0: float,
    energy: float,
    v11_sq: float,
    n_modes: int | None = None,
) -> float:
    """
    Separable value with all energy on the dominant mode of v1

    Args:
        n_modes: When given, must exceed (1 - v11_sq) / v11_sq so that a unit v1 exists
    """
    return 2.0 * alpha**2 * _unbalanced_weight(n0, energy, v11_sq, n_modes)


def entanglement_gain(
    alpha: float,
    n0: float,
    energy: float,
    mode: EgMode,
    n_modes: int | None = None,
    v11_sq: float = 0.5,
) -> float:
    """
    Ratio of the optimal Gaussian value to the best separable value

    Both values scale with alpha^2, so the ratio is taken between noise terms
    and stays defined at alpha = 0. Balanced mode uses n_modes (default 2);
    unbalanced mode only checks n_modes against v11_sq when it is given.
    """
    _check(n0, energy)
    if mode == EgMode.BALANCED:
        n = 2 if n_modes is None else n_modes
        if n < 1:
            raise AppException(
                error_code=ERROR_FISHER_INVALID_MODE_COUNT,
                message="n_modes must be at least 1",
                details={"n_modes": n},
            )
        return effective_noise(n0, energy / n) / effective_noise(n0, energy)
    return 1.0 / (effective_noise(n0, energy) * _unbalanced_weight(n0, energy, v11_sq, n_modes))


def bosonic_entropy(x: float) -> float:
    """g(x) = (x+1) log2(x+1) - x log2 x, with 0 log 0 = 0."""
    return float((xlogy(x + 1.0, x + 1.0) - xlogy(x, x)) / _LN2)


def entanglement_entropy_of_optimal_seed(energy: float) -> float:
    _check(0.0, energy)
    return bosonic_entropy(0.5 * (math.sqrt(energy + 1.0) - 1.0))
