import numpy as np
from math import pi
from typing import Optional, Sequence

from nestedcones.backends.base import AbstractSampler
from nestedcones.backends.regions import CONE_AXIS
from nestedcones.exceptions import ParameterRangeError
from nestedcones.geometry import sample_on_cone
from nestedcones.models import SampledDataset
from nestedcones.settings import ANGULAR_RANGE, RADIAL_RANGE


def sample_spiral(
    opening: float, r_range: Sequence[float], theta_range: Sequence[float], n: int
) -> np.ndarray:
    if n < 2:
        raise ParameterRangeError(name="n", value=n, bounds="[2, inf)")
    if not 0 < opening <= pi / 2:
        raise ParameterRangeError(name="opening", value=opening, bounds="(0, pi/2]")
    if not 0 < r_range[0] < r_range[1] or not theta_range[0] < theta_range[1]:
        raise ParameterRangeError(
            name="spiral ranges", value=(r_range, theta_range), bounds="increasing"
        )
    sizes = np.linspace(r_range[0], r_range[1], n)
    angles = np.linspace(theta_range[0], theta_range[1], n)
    base = np.vstack((np.cos(angles), np.sin(angles)))
    return sample_on_cone(CONE_AXIS, opening, sizes, base)


class SpiralSampler(AbstractSampler):
    def sample(self, count: int, opening: Optional[float], seed: int) -> SampledDataset:
        data = sample_spiral(
            opening=opening,
            r_range=self._get_config(RADIAL_RANGE),
            theta_range=self._get_config(ANGULAR_RANGE),
            n=count,
        )
        return SampledDataset(data=data)
