import numpy as np
from typing import Callable, Optional, Tuple

from nestedcones.command.backfit import backfit_command
from nestedcones.command.fit import fit_command
from nestedcones.command.pca_transform import (
    apply_pca_transform,
    pca_inverse,
    pca_transform_command,
)
from nestedcones.command.transform import transform_command
from nestedcones.exceptions import ParameterRangeError
from nestedcones.models import (
    FastPncModel,
    OptimizerConfig,
    ReconstructionRequest,
    ResidualKind,
    ScoreMatrix,
)


INNER_MIN_COMPONENTS = 2


class FastFitCommand:
    def __init__(self, pca_transformer: Callable, fitter: Callable) -> None:
        self._pca_transform = pca_transformer
        self._fit = fitter

    def execute(
        self,
        data: np.ndarray,
        p: int,
        kind: Optional[ResidualKind] = None,
        config: Optional[OptimizerConfig] = None,
    ) -> Tuple[FastPncModel, ScoreMatrix]:
        if p < INNER_MIN_COMPONENTS:
            raise ParameterRangeError(
                name="p", value=p, bounds=f"[{INNER_MIN_COMPONENTS}, p_max]"
            )
        pca, reduced = self._pca_transform(
            data=data, p=p, min_components=INNER_MIN_COMPONENTS
        )
        inner, scores = self._fit(data=reduced, kind=kind, config=config)
        return FastPncModel(pca=pca, inner=inner), scores


def fast_backfit(model: FastPncModel, request: ReconstructionRequest) -> np.ndarray:
    return pca_inverse(model.pca, backfit_command(request=request))


def fast_transform(model: FastPncModel, data: np.ndarray) -> ScoreMatrix:
    return transform_command(
        model=model.inner, data=apply_pca_transform(model.pca, data)
    )


fast_fit_command = FastFitCommand(
    pca_transformer=pca_transform_command, fitter=fit_command
).execute
