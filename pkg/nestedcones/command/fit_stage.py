import logging
import numpy as np
from math import pi
from scipy.optimize import least_squares, minimize, minimize_scalar
from typing import Callable, Optional, Tuple

from nestedcones.exceptions import DimensionMismatchError, ParameterRangeError
from nestedcones.geometry import (
    aligned_columns,
    angular_residuals,
    column_sizes,
    cone_angles,
    ensure_no_apex,
    rodrigues_rotation,
    signed_angles_2d,
    stage_residuals,
)
from nestedcones.hyperspherical import angles_to_unit_vector
from nestedcones.models import (
    HyperconeStage,
    OptimizerConfig,
    ResidualKind,
    StageDiagnostics,
)
from nestedcones.settings import PNCAPISettings, pnc_settings


JITTER_SCALE = 0.1


def stage_objective(
    data: np.ndarray,
    axis: np.ndarray,
    opening: float,
    kind: ResidualKind = ResidualKind.RIEMANNIAN,
    eps_apex: Optional[float] = None,
) -> float:
    data = np.asarray(data, dtype=float)
    axis = np.asarray(axis, dtype=float)
    if data.shape[0] != axis.size:
        raise DimensionMismatchError(
            what="data rows", expected=axis.size, actual=data.shape[0]
        )
    ensure_no_apex(data, pnc_settings.EPS_APEX if eps_apex is None else eps_apex)
    return float(np.sum(stage_residuals(data, axis, opening, kind) ** 2))


def reflect(value: float, upper: float) -> float:
    """
    Folds ``value`` into ``[0, upper]`` by reflection at both ends.
    """
    folded = value % (2 * upper)
    return 2 * upper - folded if folded > upper else folded


def wrap_angle(angles: np.ndarray) -> np.ndarray:
    wrapped = (angles + pi) % (2 * pi) - pi
    return np.where(wrapped <= -pi, pi, wrapped)


class FitStageCommand:
    def __init__(self, settings: PNCAPISettings) -> None:
        self._settings = settings

    def execute(
        self,
        data: np.ndarray,
        kind: Optional[ResidualKind] = None,
        config: Optional[OptimizerConfig] = None,
    ) -> Tuple[HyperconeStage, StageDiagnostics]:
        data = np.asarray(data, dtype=float)
        kind = ResidualKind(kind or self._settings.RESIDUAL_KIND)
        config = config or OptimizerConfig.from_settings(self._settings)
        if data.ndim != 2 or data.shape[0] < 2:
            raise DimensionMismatchError(
                what="stage data rows", expected=2, actual=data.shape[0]
            )
        if data.shape[1] < 2:
            raise ParameterRangeError(name="n", value=data.shape[1], bounds="[2, inf)")
        ensure_no_apex(data, self._settings.EPS_APEX)
        if data.shape[0] == 2:
            return self._fit_final_stage(data, kind, config)
        return self._fit_intermediate_stage(data, kind, config)

    @staticmethod
    def _mean_direction(data: np.ndarray) -> np.ndarray:
        mean = (data / column_sizes(data)).mean(axis=1)
        norm = np.linalg.norm(mean)
        if norm < 1e-12:
            first = data[:, 0]
            return first / np.linalg.norm(first)
        return mean / norm

    def _fit_intermediate_stage(
        self, data: np.ndarray, kind: ResidualKind, config: OptimizerConfig
    ) -> Tuple[HyperconeStage, StageDiagnostics]:
        max_opening = self._settings.MAX_OPENING
        axis0 = self._mean_direction(data)
        angles0 = cone_angles(data, axis0)
        if angles0.max() < self._settings.EPS_ALIGN:
            stage = HyperconeStage(axis=axis0, opening=0.0)
            objective = stage_objective(
                data, axis0, 0.0, kind, eps_apex=self._settings.EPS_APEX
            )
            return stage, StageDiagnostics(
                objective=objective,
                initial_objective=objective,
                iterations=0,
                converged=True,
                degenerate_columns=data.shape[1],
            )
        opening0 = float(np.clip(angles0.mean(), 0.0, max_opening))
        # the axis is searched in the chart centred on the initial axis, far
        # from the chart poles
        back_rotation = rodrigues_rotation(axis0).T
        m = data.shape[0]
        weight = np.sqrt(np.sum(column_sizes(data) ** 2))

        def unpack(x: np.ndarray) -> Tuple[np.ndarray, float]:
            axis = back_rotation @ angles_to_unit_vector(x[:-1])
            return axis, reflect(x[-1], max_opening)

        def residuals(x: np.ndarray) -> np.ndarray:
            axis, opening = unpack(x)
            return stage_residuals(data, axis, opening, kind) / weight

        def objective(x: np.ndarray) -> float:
            return float(np.sum(residuals(x) ** 2))

        x0 = np.append(np.full(m - 1, pi / 2), opening0)
        best, iterations, converged = self._simplex_search(objective, x0, config)
        best, polished = self._polish(residuals, objective, best, config)
        converged = converged or polished
        axis, opening = unpack(best)
        stage = HyperconeStage(axis=axis / np.linalg.norm(axis), opening=opening)
        degenerate = aligned_columns(data, stage.axis, self._settings.EPS_ALIGN)
        return stage, self._diagnostics(
            objective(best),
            objective(x0),
            weight,
            iterations,
            converged,
            degenerate_columns=int(degenerate.sum()),
        )

    def _simplex_search(
        self, objective: Callable, x0: np.ndarray, config: OptimizerConfig
    ) -> Tuple[np.ndarray, int, bool]:
        rng = np.random.default_rng(config.seed)
        best_x, best_value = x0, objective(x0)
        iterations = 0
        converged = False
        for restart in range(config.restarts):
            start = best_x if restart == 0 else best_x + rng.normal(
                scale=JITTER_SCALE, size=best_x.size
            )
            result = minimize(
                objective,
                start,
                method="Nelder-Mead",
                options={
                    "maxiter": config.max_iters,
                    "xatol": config.tol,
                    "fatol": config.tol,
                },
            )
            iterations += int(result.nit)
            converged = converged or bool(result.success)
            if result.fun <= best_value:
                best_x, best_value = result.x, float(result.fun)
        return best_x, iterations, converged

    @staticmethod
    def _polish(
        residuals: Callable, objective: Callable, x: np.ndarray, config: OptimizerConfig
    ) -> Tuple[np.ndarray, bool]:
        result = least_squares(
            residuals,
            x,
            method="trf",
            jac="3-point",
            xtol=config.tol,
            ftol=config.tol,
            gtol=config.tol,
            max_nfev=config.max_iters * (x.size + 1),
        )
        if objective(result.x) <= objective(x):
            return result.x, result.status > 0
        return x, False

    @staticmethod
    def _diagnostics(
        objective: float,
        initial: float,
        weight: float,
        iterations: int,
        converged: bool,
        degenerate_columns: int = 0,
    ) -> StageDiagnostics:
        if not converged:
            logging.warning(
                "Stage optimizer stopped after %d iterations without converging.",
                iterations,
            )
        return StageDiagnostics(
            objective=objective * weight**2,
            initial_objective=initial * weight**2,
            iterations=iterations,
            converged=converged,
            degenerate_columns=degenerate_columns,
        )

    def _fit_final_stage(
        self, data: np.ndarray, kind: ResidualKind, config: OptimizerConfig
    ) -> Tuple[HyperconeStage, StageDiagnostics]:
        sizes = column_sizes(data)
        weight = np.sqrt(np.sum(sizes**2))
        positions = signed_angles_2d(data, np.array([1.0, 0.0]))

        def residuals(phi: np.ndarray) -> np.ndarray:
            offsets = wrap_angle(positions - phi[0])
            return angular_residuals(offsets, sizes, kind) / weight

        def objective(phi: float) -> float:
            return float(np.sum(residuals(np.atleast_1d(phi)) ** 2))

        axis0 = self._mean_direction(data)
        phi0 = float(np.arctan2(axis0[1], axis0[0]))
        count = self._settings.FINAL_STAGE_GRID
        grid = 2 * pi * np.arange(count) / count
        values = np.array([objective(phi) for phi in grid])
        index = int(np.argmin(values))
        step = 2 * pi / count
        best = float(grid[index])
        converged = True
        iterations = count
        try:
            result = minimize_scalar(
                objective,
                bracket=(best - step, best, best + step),
                method="golden",
                tol=config.tol,
                options={"maxiter": config.max_iters},
            )
            iterations += int(getattr(result, "nit", 0))
            converged = bool(result.success)
            if result.fun <= values[index]:
                best = float(result.x)
        except (ValueError, RuntimeError):
            logging.info("Final stage grid minimum is flat, keeping the grid angle.")
        polished, _ = self._polish(residuals, objective, np.array([best]), config)
        best = float(polished[0])
        if objective(phi0) < objective(best):
            best = phi0
        best %= 2 * pi
        axis = np.array([np.cos(best), np.sin(best)])
        stage = HyperconeStage(axis=axis, opening=0.0)
        return stage, self._diagnostics(
            objective(best), objective(phi0), weight, iterations, converged
        )


fit_stage_command = FitStageCommand(settings=pnc_settings).execute
