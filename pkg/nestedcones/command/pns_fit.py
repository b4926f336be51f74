import numpy as np
from typing import Callable, Optional, Tuple

from nestedcones.command.fit import fit_command
from nestedcones.geometry import column_sizes, ensure_no_apex
from nestedcones.models import OptimizerConfig, PncModel, ResidualKind, ScoreMatrix
from nestedcones.settings import PNCAPISettings, pnc_settings


class PnsFitCommand:
    """
    Nested-spheres analysis as the size-free special case: every observation
    is scaled to unit size before the cone fit.
    """

    def __init__(self, settings: PNCAPISettings, fitter: Callable) -> None:
        self._settings = settings
        self._fit = fitter

    def execute(
        self,
        data: np.ndarray,
        kind: Optional[ResidualKind] = None,
        config: Optional[OptimizerConfig] = None,
    ) -> Tuple[PncModel, ScoreMatrix]:
        data = np.asarray(data, dtype=float)
        ensure_no_apex(data, self._settings.EPS_APEX)
        sizes = column_sizes(data)
        # columns already of unit size pass through untouched
        unit = np.abs(sizes - 1.0) <= 4 * np.finfo(float).eps
        scaled = data / np.where(unit, 1.0, sizes)
        return self._fit(data=scaled, kind=kind, config=config)


pns_fit_command = PnsFitCommand(settings=pnc_settings, fitter=fit_command).execute
