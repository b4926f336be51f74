import numpy as np
from scipy.linalg import svd
from typing import Tuple

from nestedcones.command.pca_transform import apply_sign_convention
from nestedcones.exceptions import DimensionMismatchError, ParameterRangeError
from nestedcones.models import PcaModel


def pca_fit_transform(data: np.ndarray, k: int) -> Tuple[PcaModel, np.ndarray]:
    data = np.asarray(data, dtype=float)
    if data.ndim != 2:
        raise DimensionMismatchError(what="data", expected=2, actual=data.ndim)
    rows, n = data.shape
    k_max = min(rows, n - 1)
    if not 1 <= k <= k_max:
        raise ParameterRangeError(name="k", value=k, bounds=f"[1, {k_max}]")
    mean = data.mean(axis=1)
    centered = data - mean[:, None]
    left, singular, _right = svd(centered, full_matrices=False)
    eigenvalues = np.clip(singular**2 / (n - 1), 0.0, None)
    directions = apply_sign_convention(left[:, :k])
    model = PcaModel(mean=mean, directions=directions, eigenvalues=eigenvalues)
    return model, (directions.T @ centered).T


def pca_reconstruct(model: PcaModel, scores: np.ndarray) -> np.ndarray:
    scores = np.asarray(scores, dtype=float)
    if scores.ndim != 2 or scores.shape[1] != model.k:
        raise DimensionMismatchError(
            what="score columns", expected=model.k, actual=scores.shape[-1]
        )
    return model.mean[:, None] + model.directions @ scores.T


def pca_variance_explained(model: PcaModel) -> float:
    total = model.eigenvalues.sum()
    return float(model.eigenvalues[: model.k].sum() / total) if total > 0 else 1.0
