import math
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.special import softmax
from tqdm import tqdm

from app.constants.error_constant import (
    ERROR_ECGM_NEGATIVE_ENERGY,
    ERROR_OPT_SWEEP_CELL_FAILED,
    ERROR_PROBE_LENGTH_MISMATCH,
)
from app.core.config import settings
from app.core.exception import EXIT_NUMERICAL, AppException
from app.core.logging_config import get_logger
from app.dtos.gaussian_dto import ECGM
from app.ml import closed_forms
from app.ml.shell_objective import shell_fisher
from app.schemas.measurement import MeasurementParams
from app.schemas.probe import ProbeSpec
from app.schemas.report import NonisoSweepResult, OptimizationResult
from app.services.fisher_service import PHASE_DIFFERENCE, FisherService

logger = get_logger(__name__)

_HALF_PI = math.pi / 2
_TIE_RTOL = 1e-12


def _wrap(angle: float) -> float:
    """Map an angle to (-pi, pi]."""
    wrapped = math.remainder(angle, 2.0 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


class OptimizerService:
    """Service for maximizing the estimand Fisher information over energy-constrained seeds"""

    def __init__(
        self,
        fisher_service: FisherService | None = None,
        grid_size: int = settings.GRID_SIZE,
        simplex_tol: float = settings.SIMPLEX_TOL,
        simplex_ftol: float = settings.SIMPLEX_FTOL,
        iterations_per_dim: int = settings.ITERATIONS_PER_DIM,
        refine_starts: int = settings.REFINE_STARTS,
        max_workers: int = settings.MAX_WORKERS,
        show_progress: bool = settings.SHOW_PROGRESS,
    ):
        self.fisher_service = fisher_service or FisherService()
        self.grid_size = grid_size
        self.simplex_tol = simplex_tol
        self.simplex_ftol = simplex_ftol
        self.iterations_per_dim = iterations_per_dim
        self.refine_starts = refine_starts
        self.max_workers = max_workers
        self.show_progress = show_progress

    def objective_two_mode(
        self,
        params: MeasurementParams,
        alpha: float,
        n0_pair: Sequence[float],
        thetas: Sequence[float],
        v1: Sequence[float] = PHASE_DIFFERENCE,
    ) -> float:
        spec = self._two_mode_probe(alpha, n0_pair)
        return self.fisher_service.linear_function_fi(spec, thetas, ECGM.from_params(params), v1)

    def optimize_two_mode(
        self,
        alpha: float,
        n0_pair: Sequence[float],
        thetas: Sequence[float],
        energy: float,
        initial_phases: Sequence[float] | None = None,
        v1: Sequence[float] = PHASE_DIFFERENCE,
    ) -> OptimizationResult:
        """
        Maximize F_tilde_11 over pure two-mode seeds on the shell sinh^2 r1 + sinh^2 r2 = E

        Args:
            alpha: Probe amplitude, shared by both modes
            n0_pair: Thermal occupations (N1, N2)
            thetas: Parameter point
            energy: Measurement energy E
            initial_phases: Starting (phi1, phi2); defaults to the counter-rotation -thetas

        Returns:
            OptimizationResult with MeasurementParams at the best point found
        """
        self._check_energy(energy)
        spec = self._two_mode_probe(alpha, n0_pair)
        qfi = self.fisher_service.qfi_linear_function(spec, v1)

        if energy == 0.0:
            # every seed on the zero shell is the heterodyne vacuum
            params = MeasurementParams()
            return OptimizationResult(
                best_params=params,
                best_value=self.objective_two_mode(params, alpha, n0_pair, thetas, v1),
                objective_evals=1,
                converged=True,
                energy=0.0,
                qfi=qfi,
                message="degenerate energy shell",
            )

        probe_cov = self.fisher_service.probe_service.phased_probe(spec, thetas).cov
        d = self.fisher_service.probe_service.phase_derivative_of_mean(spec, thetas, v1)
        phases = [-t for t in thetas] if initial_phases is None else list(initial_phases)

        def negative(x: np.ndarray) -> float:
            return -float(shell_fisher(x, energy, probe_cov, d))

        starts, grid_evals = self._coarse_starts(energy, probe_cov, d, phases)
        bounds = [(0.0, 1.0), (0.0, _HALF_PI), (None, None), (None, None), (None, None)]
        dim = len(bounds)

        best = None
        evals = grid_evals
        for x0 in starts:
            res = minimize(
                negative,
                x0,
                method="Nelder-Mead",
                bounds=bounds,
                options={
                    "xatol": self.simplex_tol,
                    "fatol": self.simplex_ftol,
                    "maxiter": self.iterations_per_dim * dim,
                    "maxfev": 2 * self.iterations_per_dim * dim,
                },
            )
            evals += res.nfev
            candidate = (-float(res.fun), res.x, self._converged(res))
            logger.debug(
                "Simplex restart finished",
                extra={"start": x0.tolist(), "value": candidate[0], "nfev": int(res.nfev)},
            )
            if best is None or self._better(candidate, best):
                best = candidate

        value, x, converged = best
        params = MeasurementParams.from_split(
            float(x[0]),
            energy,
            zeta_mag=float(x[1]),
            zeta_arg=_wrap(float(x[2])),
            phi1=_wrap(float(x[3])),
            phi2=_wrap(float(x[4])),
        )
        if not converged:
            logger.warning(
                "Two-mode optimization did not converge",
                extra={"alpha": alpha, "n0_pair": list(n0_pair), "energy": energy},
            )
        else:
            logger.info(
                "Two-mode optimization finished",
                extra={"energy": energy, "best_value": value, "objective_evals": evals},
            )
        return OptimizationResult(
            best_params=params,
            best_value=value,
            objective_evals=evals,
            converged=converged,
            energy=energy,
            qfi=qfi,
            message="" if converged else "simplex stopped at the iteration limit",
        )

    def optimize_separable(
        self,
        alpha_list: Sequence[float],
        n0_list: Sequence[float],
        thetas: Sequence[float],
        energy: float,
        v1: Sequence[float],
    ) -> OptimizationResult:
        """
        Best product of squeezed vacua, each squeezed along its mode's mean derivative

        The allocation E * softmax(0, x_2, ..., x_N) keeps the energy constraint exact;
        single-mode vertices are scored as well so that fully concentrated
        allocations are reachable.
        """
        self._check_energy(energy)
        if not (len(alpha_list) == len(n0_list) == len(thetas)):
            raise AppException(
                error_code=ERROR_PROBE_LENGTH_MISMATCH,
                message="alpha_list, n0_list and thetas differ in length",
            )
        spec = ProbeSpec(
            n_modes=len(alpha_list), alphas=list(alpha_list), thermal_occupations=list(n0_list)
        )
        v = self.fisher_service.probe_service.check_unit(v1, spec.n_modes)
        qfi = self.fisher_service.qfi_linear_function(spec, v)
        weights = 2.0 * v**2 * np.asarray(spec.alphas) ** 2
        noise = np.asarray(spec.thermal_occupations) + 0.5

        def value_of(allocation: np.ndarray) -> float:
            factors = np.array([closed_forms.squeezed_variance_factor(e) for e in allocation])
            return float(np.sum(weights / (noise + 0.5 * factors)))

        def allocation_of(x: np.ndarray) -> np.ndarray:
            return energy * softmax(np.concatenate([[0.0], x]))

        n = spec.n_modes
        candidates = [(value_of(energy * np.eye(n)[j]), energy * np.eye(n)[j], True) for j in range(n)]
        evals = n
        converged = True
        if n > 1 and energy > 0.0:
            dim = n - 1
            res = minimize(
                lambda x: -value_of(allocation_of(x)),
                np.zeros(dim),
                method="Nelder-Mead",
                options={
                    "xatol": self.simplex_tol,
                    "fatol": self.simplex_ftol,
                    "maxiter": self.iterations_per_dim * dim,
                    "maxfev": 2 * self.iterations_per_dim * dim,
                },
            )
            evals += res.nfev
            converged = self._converged(res)
            candidates.insert(0, (-float(res.fun), allocation_of(res.x), converged))

        value, allocation, _ = max(candidates, key=lambda c: c[0])
        if value > candidates[0][0]:
            converged = True
        rs = [math.asinh(math.sqrt(max(e, 0.0))) for e in allocation]

        m = self.fisher_service.ecgm_service.separable_seed(list(allocation), thetas)
        checked = self.fisher_service.linear_function_fi(spec, thetas, m, v)
        return OptimizationResult(
            best_params=rs,
            best_value=checked,
            objective_evals=evals,
            converged=converged,
            energy=energy,
            qfi=qfi,
            message="" if converged else "simplex stopped at the iteration limit",
        )

    def noniso_sweep(
        self,
        n1_grid: Sequence[float],
        n2_grid: Sequence[float],
        alpha: float,
        energy: float,
        thetas: Sequence[float] = (0.0, 0.0),
    ) -> NonisoSweepResult:
        """Cell (i, j) is the optimize_two_mode value at (N1, N2) = (n1_grid[i], n2_grid[j])."""
        cells = [(i, j) for i in range(len(n1_grid)) for j in range(len(n2_grid))]

        def run(cell: tuple[int, int]) -> OptimizationResult:
            i, j = cell
            return self.optimize_two_mode(alpha, (n1_grid[i], n2_grid[j]), thetas, energy)

        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            results = list(
                tqdm(
                    pool.map(run, cells),
                    total=len(cells),
                    desc="noniso-map",
                    disable=not self.show_progress,
                )
            )

        values = np.zeros((len(n1_grid), len(n2_grid)))
        entropies = np.zeros_like(values)
        total_evals = 0
        for (i, j), result in zip(cells, results):
            if not result.converged:
                raise AppException(
                    error_code=ERROR_OPT_SWEEP_CELL_FAILED,
                    message=f"Optimization failed at cell ({i}, {j})",
                    exit_code=EXIT_NUMERICAL,
                    details={"i": i, "j": j, "n1": n1_grid[i], "n2": n2_grid[j]},
                )
            values[i, j] = result.best_value
            entropies[i, j] = self.fisher_service.seed_entanglement_entropy(
                ECGM.from_params(result.best_params)
            )
            total_evals += result.objective_evals

        logger.info(
            "Non-isothermal sweep finished",
            extra={"cells": len(cells), "objective_evals": total_evals},
        )
        return NonisoSweepResult(
            alpha=alpha,
            energy=energy,
            n1_grid=list(n1_grid),
            n2_grid=list(n2_grid),
            best_values=values.tolist(),
            entropies=entropies.tolist(),
            total_evals=total_evals,
        )

    def _coarse_starts(
        self,
        energy: float,
        probe_cov: np.ndarray,
        d: np.ndarray,
        phases: Sequence[float],
    ) -> tuple[list[np.ndarray], int]:
        """Score the (t, |zeta|) grid at arg zeta = 0 and return the best distinct points."""
        ts = np.linspace(1.0, 0.0, self.grid_size)
        zetas = np.linspace(0.0, _HALF_PI, self.grid_size)
        tt, zz = np.meshgrid(ts, zetas, indexing="ij")
        x = np.stack(
            [tt, zz, np.zeros_like(tt), np.full_like(tt, phases[0]), np.full_like(tt, phases[1])],
            axis=-1,
        )
        scores = shell_fisher(x, energy, probe_cov, d).ravel()
        # stable sort over rows ordered by descending t prefers larger r1 on ties
        order = np.argsort(-scores, kind="stable")[: self.refine_starts]
        flat = x.reshape(-1, 5)
        return [flat[k].copy() for k in order], scores.size

    def _converged(self, res) -> bool:
        if res.success:
            return True
        fsim = res.final_simplex[1]
        return bool(np.ptp(fsim) <= self.simplex_tol * max(1.0, abs(float(res.fun))))

    @staticmethod
    def _better(candidate: tuple, incumbent: tuple) -> bool:
        value, x, _ = candidate
        best_value, best_x, _ = incumbent
        if value > best_value * (1.0 + _TIE_RTOL):
            return True
        return math.isclose(value, best_value, rel_tol=_TIE_RTOL) and x[0] > best_x[0]

    @staticmethod
    def _two_mode_probe(alpha: float, n0_pair: Sequence[float]) -> ProbeSpec:
        if len(n0_pair) != 2:
            raise AppException(
                error_code=ERROR_PROBE_LENGTH_MISMATCH,
                message="n0_pair must hold two occupations",
                details={"received": len(n0_pair)},
            )
        return ProbeSpec(n_modes=2, alphas=[alpha, alpha], thermal_occupations=list(n0_pair))

    @staticmethod
    def _check_energy(energy: float) -> None:
        if energy < 0 or not math.isfinite(energy):
            raise AppException(
                error_code=ERROR_ECGM_NEGATIVE_ENERGY,
                message="Energy must be finite and non-negative",
                details={"energy": energy},
            )
