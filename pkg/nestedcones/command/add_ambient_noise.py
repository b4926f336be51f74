import logging
import numpy as np
from typing import Sequence, Union

from nestedcones.exceptions import NoiseRetryExhaustedError, ParameterRangeError
from nestedcones.geometry import apex_columns
from nestedcones.settings import PNCAPISettings, pnc_settings


class AddAmbientNoiseCommand:
    def __init__(self, settings: PNCAPISettings) -> None:
        self._settings = settings

    def execute(
        self, data: np.ndarray, sigma: float, seed: Union[int, Sequence[int]] = 0
    ) -> np.ndarray:
        if not sigma > 0:
            raise ParameterRangeError(name="sigma", value=sigma, bounds="(0, inf)")
        data = np.asarray(data, dtype=float)
        rng = np.random.default_rng(seed)
        noisy = data + rng.normal(0.0, sigma, size=data.shape)
        retries = 0
        redraw = apex_columns(noisy, self._settings.EPS_APEX)
        while redraw.size:
            if retries >= self._settings.NOISE_MAX_RETRIES:
                raise NoiseRetryExhaustedError(retries=retries)
            logging.warning(
                "Redrawing noise for %d column(s) at the apex.", redraw.size
            )
            noisy[:, redraw] = data[:, redraw] + rng.normal(
                0.0, sigma, size=(data.shape[0], redraw.size)
            )
            retries += 1
            redraw = apex_columns(noisy, self._settings.EPS_APEX)
        return noisy


add_ambient_noise_command = AddAmbientNoiseCommand(settings=pnc_settings).execute
