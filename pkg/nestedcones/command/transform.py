from django.utils.translation import gettext_lazy as _

import numpy as np
from math import pi
from typing import Optional, Tuple

from nestedcones.exceptions import DimensionMismatchError, DomainError
from nestedcones.geometry import (
    column_sizes,
    ensure_no_apex,
    map_down_columns,
    signed_angles_2d,
    stage_residuals,
)
from nestedcones.models import PncModel, PolarScores, ScoreMatrix
from nestedcones.settings import PNCAPISettings, pnc_settings


class TransformCommand:
    def __init__(self, settings: PNCAPISettings) -> None:
        self._settings = settings

    def execute(self, model: PncModel, data: np.ndarray) -> ScoreMatrix:
        residuals, _final = self._descend(model, data)
        scale_factors = model.scale_factors
        return ScoreMatrix(
            scores=(residuals * scale_factors)[:, ::-1],
            sizes=column_sizes(np.asarray(data, dtype=float)),
            scale_factors=scale_factors,
        )

    def reduce_to_final_stage(self, model: PncModel, data: np.ndarray) -> np.ndarray:
        _residuals, final = self._descend(model, data)
        return final

    def _descend(
        self, model: PncModel, data: np.ndarray
    ) -> Tuple[np.ndarray, np.ndarray]:
        """
        Walks the data down the nested cones, returning the n x d stage residual
        matrix (stage 1 first) and the 2 x n final-stage representation.
        """
        data = np.asarray(data, dtype=float)
        if data.ndim != 2 or data.shape[0] != model.ambient_dim:
            raise DimensionMismatchError(
                what="data rows",
                expected=model.ambient_dim,
                actual=data.shape[0] if data.ndim else 0,
            )
        ensure_no_apex(data, self._settings.EPS_APEX)
        residuals = np.empty((data.shape[1], model.d))
        current = data
        for k, stage in enumerate(model.stages):
            residuals[:, k] = stage_residuals(
                current, stage.axis, stage.opening, model.residual_kind
            )
            if k < model.d - 1:
                current = map_down_columns(
                    current, stage.axis, self._settings.EPS_ALIGN
                )
        return residuals, current


def polar_scores(
    model: PncModel,
    data_at_final_stage: np.ndarray,
    eps_apex: Optional[float] = None,
) -> PolarScores:
    data_at_final_stage = np.asarray(data_at_final_stage, dtype=float)
    if data_at_final_stage.shape[0] != 2:
        raise DimensionMismatchError(
            what="final-stage rows", expected=2, actual=data_at_final_stage.shape[0]
        )
    ensure_no_apex(
        data_at_final_stage, pnc_settings.EPS_APEX if eps_apex is None else eps_apex
    )
    sizes = column_sizes(data_at_final_stage)
    beta = signed_angles_2d(data_at_final_stage, model.stages[-1].axis) % (2 * pi)
    return PolarScores(sx=sizes * np.cos(beta), sy=sizes * np.sin(beta))


def variance_explained(scores: ScoreMatrix) -> np.ndarray:
    energy = np.sum(np.asarray(scores.scores) ** 2, axis=0)
    total = energy.sum()
    if total == 0.0:
        raise DomainError(
            detail=_("Variance explained is undefined for all-zero scores.")
        )
    return energy / total


_transform = TransformCommand(settings=pnc_settings)
transform_command = _transform.execute
reduce_to_final_stage_command = _transform.reduce_to_final_stage
