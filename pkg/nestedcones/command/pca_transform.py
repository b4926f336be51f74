import logging
import numpy as np
from scipy.linalg import eigh
from typing import Tuple

from nestedcones.exceptions import DimensionMismatchError, ParameterRangeError
from nestedcones.geometry import column_sizes, ensure_no_apex
from nestedcones.models import PcaTransform
from nestedcones.settings import PNCAPISettings, pnc_settings


ORTHOGONALITY_FLOOR = 1e-8


def apply_sign_convention(directions: np.ndarray) -> np.ndarray:
    """
    Flips each column so that its entry of largest magnitude (lowest index on
    ties) is positive.
    """
    pivots = np.argmax(np.abs(directions), axis=0)
    signs = np.sign(directions[pivots, np.arange(directions.shape[1])])
    signs[signs == 0] = 1.0
    return directions * signs


class PcaTransformCommand:
    def __init__(self, settings: PNCAPISettings) -> None:
        self._settings = settings

    def execute(
        self, data: np.ndarray, p: int, min_components: int = 1
    ) -> Tuple[PcaTransform, np.ndarray]:
        data = np.asarray(data, dtype=float)
        if data.ndim != 2:
            raise DimensionMismatchError(what="data", expected=2, actual=data.ndim)
        ensure_no_apex(data, self._settings.EPS_APEX)
        ambient, n = data.shape
        p_max = min(ambient, n - 1)
        if not 1 <= p <= p_max:
            raise ParameterRangeError(name="p", value=p, bounds=f"[1, {p_max}]")

        units = data / column_sizes(data)
        mean = units.mean(axis=1)
        norm = np.linalg.norm(mean)
        mean_direction = units[:, 0] if norm < 1e-12 else mean / norm
        tangents = data - np.outer(mean_direction, mean_direction @ data)
        directions = self._principal_directions(tangents, p)
        directions = self._orthonormalize(mean_direction, directions)
        if directions.shape[1] < min_components:
            directions = self._complete(mean_direction, directions, min_components)
        if directions.shape[1] < p:
            logging.info(
                "Retained %d of %d requested principal directions.",
                directions.shape[1],
                p,
            )
        pca = PcaTransform(mean_direction=mean_direction, directions=directions)
        return pca, self.reduce(pca, data)

    def _principal_directions(self, tangents: np.ndarray, p: int) -> np.ndarray:
        ambient, n = tangents.shape
        if ambient > n:
            eigenvalues, vectors = eigh(tangents.T @ tangents)
        else:
            eigenvalues, vectors = eigh(tangents @ tangents.T)
        order = np.argsort(eigenvalues)[::-1]
        eigenvalues, vectors = eigenvalues[order], vectors[:, order]
        largest = eigenvalues[0] if eigenvalues.size else 0.0
        if largest <= 0.0:
            return np.zeros((ambient, 0))
        cutoff = self._settings.EIGEN_RELATIVE_CUTOFF * largest
        keep = min(p, int(np.sum(eigenvalues > cutoff)))
        eigenvalues, vectors = eigenvalues[:keep], vectors[:, :keep]
        if ambient > n:
            vectors = tangents @ vectors / np.sqrt(eigenvalues)
        return apply_sign_convention(vectors)

    @staticmethod
    def _orthonormalize(
        mean_direction: np.ndarray, directions: np.ndarray
    ) -> np.ndarray:
        basis = [mean_direction]
        for column in directions.T:
            vector = column.copy()
            for existing in basis:
                vector -= (existing @ vector) * existing
            length = np.linalg.norm(vector)
            if length > ORTHOGONALITY_FLOOR:
                basis.append(vector / length)
        return apply_sign_convention(np.column_stack(basis)[:, 1:])

    @staticmethod
    def _complete(
        mean_direction: np.ndarray, directions: np.ndarray, count: int
    ) -> np.ndarray:
        basis = [mean_direction] + list(directions.T)
        for candidate in np.eye(mean_direction.size):
            if len(basis) > count:
                break
            vector = candidate.copy()
            for existing in basis:
                vector -= (existing @ vector) * existing
            length = np.linalg.norm(vector)
            if length > ORTHOGONALITY_FLOOR:
                basis.append(vector / length)
        logging.warning(
            "Tangent data spans %d direction(s), completed to %d.",
            directions.shape[1],
            count,
        )
        return apply_sign_convention(np.column_stack(basis)[:, 1:])

    @staticmethod
    def reduce(pca: PcaTransform, data: np.ndarray) -> np.ndarray:
        """
        Coordinates of ``data`` in the (p + 1)-dimensional representation of a
        frozen transform; each column keeps its size.
        """
        data = np.asarray(data, dtype=float)
        if data.shape[0] != pca.ambient_dim:
            raise DimensionMismatchError(
                what="data rows", expected=pca.ambient_dim, actual=data.shape[0]
            )
        sizes = column_sizes(data)
        along = pca.mean_direction @ data
        tangents = data - np.outer(pca.mean_direction, along)
        tangent_norms = np.linalg.norm(tangents, axis=0)
        rho = np.arctan2(tangent_norms, along)
        flat = tangent_norms <= ORTHOGONALITY_FLOOR * sizes
        # rho * r / |t| tends to 1 as the tangent vanishes
        rescale = np.divide(
            rho * sizes, tangent_norms, out=np.ones_like(sizes), where=~flat
        )
        scores = pca.directions.T @ tangents * rescale
        scores[:, flat] = 0.0
        lengths = np.linalg.norm(scores, axis=0)
        ratio = lengths / sizes
        radial = np.divide(
            np.sin(ratio) * sizes, lengths, out=np.zeros_like(sizes), where=lengths > 0
        )
        return np.vstack((sizes * np.cos(ratio), scores * radial))


def pca_inverse(pca: PcaTransform, reduced: np.ndarray) -> np.ndarray:
    reduced = np.asarray(reduced, dtype=float)
    if reduced.shape[0] != pca.p + 1:
        raise DimensionMismatchError(
            what="reduced rows", expected=pca.p + 1, actual=reduced.shape[0]
        )
    return pca.frame @ reduced


_pca_transform = PcaTransformCommand(settings=pnc_settings)
pca_transform_command = _pca_transform.execute
apply_pca_transform = _pca_transform.reduce
