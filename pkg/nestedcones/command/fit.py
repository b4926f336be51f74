from django.utils.translation import gettext_lazy as _

import logging
import numpy as np
from attrs import evolve
from typing import Callable, Optional, Tuple

from nestedcones.command.fit_stage import fit_stage_command
from nestedcones.command.transform import transform_command
from nestedcones.exceptions import (
    DimensionMismatchError,
    NumericalFailureError,
    ParameterRangeError,
)
from nestedcones.geometry import column_sizes, ensure_no_apex, map_down_columns
from nestedcones.models import OptimizerConfig, PncModel, ResidualKind, ScoreMatrix
from nestedcones.settings import PNCAPISettings, pnc_settings


SIZE_TOLERANCE = 1e-10


class FitCommand:
    def __init__(
        self, settings: PNCAPISettings, stage_fitter: Callable, transformer: Callable
    ) -> None:
        self._settings = settings
        self._fit_stage = stage_fitter
        self._transform = transformer

    def execute(
        self,
        data: np.ndarray,
        kind: Optional[ResidualKind] = None,
        config: Optional[OptimizerConfig] = None,
    ) -> Tuple[PncModel, ScoreMatrix]:
        data = np.asarray(data, dtype=float)
        kind = ResidualKind(kind or self._settings.RESIDUAL_KIND)
        config = config or OptimizerConfig.from_settings(self._settings)
        if data.ndim != 2 or data.shape[0] < 3:
            raise DimensionMismatchError(
                what="ambient dimension",
                expected=3,
                actual=data.shape[0] if data.ndim else 0,
            )
        if data.shape[1] < 2:
            raise ParameterRangeError(name="n", value=data.shape[1], bounds="[2, inf)")
        ensure_no_apex(data, self._settings.EPS_APEX)

        d = data.shape[0] - 1
        # stages are fitted on the data rescaled to unit root-mean-square size
        scale = float(np.sqrt(np.mean(column_sizes(data) ** 2)))
        current = data / scale
        sizes = column_sizes(current)
        stages = []
        diagnostics = []
        for k in range(1, d + 1):
            stage, stage_diagnostics = self._fit_stage(
                data=current, kind=kind, config=config
            )
            stage_diagnostics = evolve(
                stage_diagnostics,
                objective=stage_diagnostics.objective * scale**2,
                initial_objective=stage_diagnostics.initial_objective * scale**2,
            )
            logging.info(
                "Fitted stage %d of %d: opening %.6g, objective %.6g "
                "after %d iterations.",
                k,
                d,
                stage.opening,
                stage_diagnostics.objective,
                stage_diagnostics.iterations,
            )
            stages.append(stage)
            diagnostics.append(stage_diagnostics)
            if k < d:
                current = map_down_columns(
                    current, stage.axis, self._settings.EPS_ALIGN
                )
                self._check_sizes(current, sizes, k)

        model = PncModel(
            ambient_dim=d + 1,
            stages=stages,
            residual_kind=kind,
            diagnostics=diagnostics,
        )
        return model, self._transform(model=model, data=data)

    @staticmethod
    def _check_sizes(current: np.ndarray, sizes: np.ndarray, stage: int) -> None:
        drift = np.max(np.abs(column_sizes(current) - sizes) / sizes)
        if drift > SIZE_TOLERANCE:
            raise NumericalFailureError(
                detail=_(
                    "Sizes drifted by %(drift).3g (relative) after stage %(stage)d."
                )
                % {"drift": drift, "stage": stage}
            )


fit_command = FitCommand(
    settings=pnc_settings,
    stage_fitter=fit_stage_command,
    transformer=transform_command,
).execute
