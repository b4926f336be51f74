from abc import ABC, abstractmethod
from typing import Any, Dict, Optional

from nestedcones.command.add_ambient_noise import add_ambient_noise_command
from nestedcones.exceptions import MissingConfigurationError
from nestedcones.models import SampledDataset
from nestedcones.settings import COUNT, OPENING, SIGMA


NOISE_STREAM = 1


class AbstractSampler(ABC):
    def __init__(self, config: Dict[str, Any]) -> None:
        self._config = config

    def _get_config(self, key: str) -> Any:
        if key not in self._config:
            raise MissingConfigurationError(attribute_name=key)
        return self._config[key]

    def generate(
        self,
        count: Optional[int] = None,
        opening: Optional[float] = None,
        sigma: Optional[float] = None,
        seed: int = 0,
    ) -> SampledDataset:
        """
        Draws a dataset from the preset, with the overrides given, and adds
        ambient noise when the noise level is positive.
        """
        dataset = self.sample(
            count=self._get_config(COUNT) if count is None else count,
            opening=self._config.get(OPENING) if opening is None else opening,
            seed=seed,
        )
        sigma = self._config.get(SIGMA, 0.0) if sigma is None else sigma
        if sigma > 0:
            noisy = add_ambient_noise_command(
                data=dataset.data, sigma=sigma, seed=[seed, NOISE_STREAM]
            )
            return SampledDataset(data=noisy, labels=dataset.labels)
        return dataset

    @abstractmethod
    def sample(self, count: int, opening: Optional[float], seed: int) -> SampledDataset:
        raise NotImplementedError  # pragma: no cover
