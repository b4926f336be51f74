import pytest

import numpy as np
from math import pi
from pathlib import Path
from typing import Callable, Optional

from nestedcones.backends.provider import get_sampler
from nestedcones.geometry import sample_on_cone
from nestedcones.io import ambient_header, write_matrix_csv
from nestedcones.models import OptimizerConfig


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture()
def optimizer_config() -> OptimizerConfig:
    return OptimizerConfig(max_iters=300, tol=1e-10, restarts=1, seed=0)


@pytest.fixture()
def random_data(rng) -> Callable[..., np.ndarray]:
    """
    Columns scattered around a common direction, well away from the origin.
    """

    def make(rows: int, n: int, spread: float = 0.4) -> np.ndarray:
        centre = np.abs(rng.normal(size=rows)) + 0.5
        centre /= np.linalg.norm(centre)
        sizes = rng.uniform(1.0, 3.0, size=n)
        noise = rng.normal(scale=spread, size=(rows, n))
        return (centre[:, None] + noise) * sizes

    return make


@pytest.fixture()
def on_cone_data(rng) -> Callable[..., np.ndarray]:
    def make(
        axis: np.ndarray, opening: float, n: int, sizes: Optional[np.ndarray] = None
    ) -> np.ndarray:
        axis = np.asarray(axis, dtype=float)
        base = rng.normal(size=(axis.size - 1, n))
        base /= np.linalg.norm(base, axis=0)
        if sizes is None:
            sizes = rng.uniform(1.0, 5.0, size=n)
        return sample_on_cone(axis, opening, sizes, base)

    return make


@pytest.fixture()
def table1_data() -> np.ndarray:
    return np.asarray(get_sampler(name="table1").generate(count=300, seed=7).data)


@pytest.fixture()
def fig3_dataset():
    return get_sampler(name="fig3").generate(opening=pi / 6, seed=3)


@pytest.fixture()
def csv_writer(tmp_path) -> Callable[..., Path]:
    def write(name: str, data: np.ndarray, labels=None) -> Path:
        path = tmp_path / name
        write_matrix_csv(path, data, ambient_header(data.shape[0]), labels=labels)
        return path

    return write
