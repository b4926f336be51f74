from django.utils.translation import gettext_lazy as _

import numpy as np
from math import pi

from nestedcones.exceptions import DomainError
from nestedcones.models import HypersphericalAngles


def angles_to_unit_vector(theta: np.ndarray) -> np.ndarray:
    """
    Product-of-sines chart without range checks; any real angles give a unit
    vector, which is what the optimizers search over.
    """
    theta = np.asarray(theta, dtype=float)
    sines = np.concatenate(([1.0], np.cumprod(np.sin(theta))))
    cosines = np.concatenate((np.cos(theta), [1.0]))
    return sines * cosines


def from_hyperspherical(angles: HypersphericalAngles) -> np.ndarray:
    return angles_to_unit_vector(angles.angles)


def to_hyperspherical(v: np.ndarray) -> HypersphericalAngles:
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if v.size < 2 or norm == 0.0:
        raise DomainError(
            detail=_("Cannot express a zero vector in hyperspherical angles.")
        )
    v = v / norm
    # norms of the trailing components, tails[k] = ||v[k:]||
    tails = np.sqrt(np.cumsum(v[::-1] ** 2)[::-1])
    theta = np.arctan2(tails[1:-1], v[:-2])
    last = np.arctan2(v[-1], v[-2]) % (2 * pi)
    if last >= 2 * pi:
        last = 0.0
    return HypersphericalAngles(angles=np.append(theta, last))
