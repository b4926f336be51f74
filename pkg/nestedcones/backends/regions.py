import numpy as np
from typing import Optional, Sequence

from nestedcones.backends.base import AbstractSampler
from nestedcones.geometry import sample_on_cone
from nestedcones.models import RegionSpec, SampledDataset
from nestedcones.settings import ANGULAR_RANGE, RADIAL_RANGE, REGIONS


CONE_AXIS = np.array([0.0, 0.0, 1.0])


def sample_cone_regions(regions: Sequence[RegionSpec], seed: int = 0) -> SampledDataset:
    """
    Uniform draws of size and base angle over each region of a 3D cone about
    the third basis vector; labels number the regions from 1.
    """
    rng = np.random.default_rng(seed)
    blocks = []
    labels = []
    for label, region in enumerate(regions, start=1):
        sizes = rng.uniform(*region.radial_range, size=region.count)
        angles = rng.uniform(*region.angular_range, size=region.count)
        base = np.vstack((np.cos(angles), np.sin(angles)))
        blocks.append(sample_on_cone(CONE_AXIS, region.opening, sizes, base))
        labels.append(np.full(region.count, label))
    return SampledDataset(data=np.hstack(blocks), labels=np.concatenate(labels))


class ConeRegionSampler(AbstractSampler):
    def sample(self, count: int, opening: Optional[float], seed: int) -> SampledDataset:
        regions = [
            RegionSpec(
                opening=opening,
                radial_range=region[RADIAL_RANGE],
                angular_range=region[ANGULAR_RANGE],
                count=count,
            )
            for region in self._get_config(REGIONS)
        ]
        return sample_cone_regions(regions, seed=seed)
