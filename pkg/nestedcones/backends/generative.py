import numpy as np
from scipy.special import erf
from typing import Optional

from nestedcones.backends.base import AbstractSampler
from nestedcones.command.backfit import backfit_command
from nestedcones.exceptions import RejectionSamplingError
from nestedcones.models import (
    GeneratorSpec,
    ReconstructionRequest,
    ResidualLaw,
    SampledDataset,
)
from nestedcones.settings import (
    AXES,
    OPENINGS,
    RESIDUAL_LAWS,
    SIZE_RANGE,
    pnc_settings,
)


def truncated_normal(
    rng: np.random.Generator,
    sd: np.ndarray,
    bound: np.ndarray,
    min_acceptance: float,
) -> np.ndarray:
    """
    Centred normal draws truncated to ``[-bound, bound]`` by rejection; a zero
    standard deviation gives zero.
    """
    draws = np.zeros(sd.shape)
    pending = sd > 0
    if not pending.any():
        return draws
    acceptance = erf(bound[pending] / (sd[pending] * np.sqrt(2.0)))
    if acceptance.min() < min_acceptance:
        raise RejectionSamplingError(acceptance=float(acceptance.min()))
    while pending.any():
        index = np.flatnonzero(pending)
        proposal = rng.normal(0.0, sd[index])
        accepted = np.abs(proposal) <= bound[index]
        draws[index[accepted]] = proposal[accepted]
        pending[index[accepted]] = False
    return draws


def sample_from_model(spec: GeneratorSpec) -> np.ndarray:
    model = spec.to_model()
    rng = np.random.default_rng(spec.seed)
    sizes = rng.uniform(*spec.size_range, size=spec.count)
    residuals = np.column_stack(
        [
            truncated_normal(
                rng,
                law.sd_at(sizes),
                law.bound_at(sizes),
                pnc_settings.REJECTION_MIN_ACCEPTANCE,
            )
            for law in spec.residual_laws
        ]
    )
    scores = (residuals * model.scale_factors)[:, ::-1]
    return backfit_command(
        request=ReconstructionRequest(scores=scores, sizes=sizes, model=model)
    )


class ModelSampler(AbstractSampler):
    def sample(self, count: int, opening: Optional[float], seed: int) -> SampledDataset:
        openings = tuple(self._get_config(OPENINGS))
        if opening is not None:
            openings = (opening,) + openings[1:]
        spec = GeneratorSpec(
            axes=self._get_config(AXES),
            openings=openings,
            size_range=self._get_config(SIZE_RANGE),
            residual_laws=[
                ResidualLaw(**law) for law in self._get_config(RESIDUAL_LAWS)
            ],
            count=count,
            seed=seed,
        )
        return SampledDataset(data=sample_from_model(spec))
