from django.utils.translation import gettext_lazy as _

import logging
import numpy as np
from typing import Callable, Sequence, Union

from nestedcones.exceptions import (
    DimensionMismatchError,
    DomainError,
    EmptyInputError,
    InvalidSizeError,
    ParameterRangeError,
)
from nestedcones.geometry import rodrigues_rotation
from nestedcones.models import PncModel, ReconstructionRequest, ResidualKind


Real = Union[float, np.ndarray]


def chordal_residual_adjust(xi: Real, size: Real) -> Real:
    ratio = np.asarray(xi, dtype=float) / (2.0 * np.asarray(size, dtype=float))
    if np.any(np.abs(ratio) > 1.0):
        raise DomainError(
            detail=_("Chordal residual exceeds the chord of a half turn (|xi/2r| > 1).")
        )
    increment = 2.0 * np.arcsin(ratio)
    return float(increment) if increment.ndim == 0 else increment


class BackfitCommand:
    def __init__(self, rotation: Callable) -> None:
        self._rotation = rotation

    def execute(self, request: ReconstructionRequest) -> np.ndarray:
        model = request.model
        d = model.d
        sizes = np.asarray(request.sizes)
        scores = np.array(request.scores)
        scores[:, request.retained:] = 0.0
        residuals = self._residuals(scores[:, ::-1], model.scale_factors)
        if model.residual_kind == ResidualKind.CHORDAL:
            increments = chordal_residual_adjust(residuals, sizes[:, None])
        else:
            increments = residuals / sizes[:, None]

        angle = model.reference_angle + increments[:, d - 1]
        reconstruction = np.vstack((np.cos(angle), np.sin(angle))) * sizes
        for k in range(d - 2, -1, -1):
            stage = model.stages[k]
            tilt = stage.opening + increments[:, k]
            lifted = np.vstack((np.sin(tilt) * reconstruction, np.cos(tilt) * sizes))
            reconstruction = self._rotation(stage.axis).T @ lifted
        return reconstruction

    @staticmethod
    def _residuals(stage_scores: np.ndarray, scale_factors: np.ndarray) -> np.ndarray:
        """
        Stage residuals (stage 1 first) from scores; a vanishing scale factor
        carries no residual information, so those residuals are zero.
        """
        vanishing = scale_factors <= 0.0
        if np.any(vanishing & np.any(stage_scores != 0.0, axis=0)):
            logging.warning(
                "Scores of %d stage(s) with a zero scale factor were ignored.",
                int(np.sum(vanishing)),
            )
        return np.divide(
            stage_scores,
            scale_factors,
            out=np.zeros_like(stage_scores),
            where=~vanishing,
        )


def mean_size_and_shape(model: PncModel, sizes: Sequence[float]) -> np.ndarray:
    sizes = np.asarray(sizes, dtype=float)
    if sizes.size == 0:
        raise EmptyInputError(what="sizes")
    if np.any(~(sizes > 0)):
        raise InvalidSizeError()
    request = ReconstructionRequest(
        scores=np.zeros((1, model.d)), sizes=[sizes.mean()], model=model
    )
    return backfit_command(request=request)


def score_path(
    model: PncModel, size: float, column: int, values: Sequence[float]
) -> np.ndarray:
    if not 1 <= column <= model.d:
        raise ParameterRangeError(name="column", value=column, bounds=f"[1, {model.d}]")
    values = np.asarray(values, dtype=float)
    scores = np.zeros((values.size, model.d))
    scores[:, column - 1] = values
    request = ReconstructionRequest(
        scores=scores, sizes=np.full(values.size, float(size)), model=model
    )
    return backfit_command(request=request)


def reconstruction_error(original: np.ndarray, reconstructed: np.ndarray) -> np.ndarray:
    original = np.asarray(original, dtype=float)
    reconstructed = np.asarray(reconstructed, dtype=float)
    if original.shape != reconstructed.shape:
        raise DimensionMismatchError(
            what="reconstruction",
            expected=original.shape[0],
            actual=reconstructed.shape[0],
        )
    return np.linalg.norm(original - reconstructed, axis=0)


backfit_command = BackfitCommand(rotation=rodrigues_rotation).execute
