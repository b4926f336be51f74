from django.utils.translation import gettext_lazy as _

import numpy as np
from attrs import field, frozen
from enum import Enum
from math import atan2, isfinite, pi
from typing import Any, Dict, Optional, Sequence, Tuple

from nestedcones.exceptions import (
    ApexError,
    DimensionMismatchError,
    DomainError,
    InvalidSizeError,
    ParameterRangeError,
)


APEX_SIZE = 1e-12
AXIS_NORM_TOLERANCE = 1e-10


def as_readonly_array(value: Any) -> np.ndarray:
    array = np.array(value, dtype=float)
    array.setflags(write=False)
    return array


def _sequence_of_arrays(values: Sequence[Any]) -> Tuple[np.ndarray, ...]:
    return tuple(as_readonly_array(value) for value in values)


class ResidualKind(str, Enum):
    RIEMANNIAN = "riemannian"
    CHORDAL = "chordal"


@frozen(eq=False)
class ConePoint:
    ambient: np.ndarray = field(converter=as_readonly_array)

    def __attrs_post_init__(self) -> None:
        if self.ambient.ndim != 1 or self.ambient.shape[0] < 2:
            raise DimensionMismatchError(
                what="cone point", expected=2, actual=self.ambient.size
            )

    @property
    def dim(self) -> int:
        return self.ambient.shape[0]

    @property
    def size(self) -> float:
        return float(np.linalg.norm(self.ambient))

    @property
    def is_apex(self) -> bool:
        return self.size < APEX_SIZE

    @property
    def direction(self) -> np.ndarray:
        if self.is_apex:
            raise ApexError()
        return self.ambient / self.size


@frozen(eq=False)
class HyperconeStage:
    axis: np.ndarray = field(converter=as_readonly_array)
    opening: float = field(converter=float)

    def __attrs_post_init__(self) -> None:
        norm = float(np.linalg.norm(self.axis))
        if self.axis.ndim != 1 or abs(norm - 1.0) > AXIS_NORM_TOLERANCE:
            raise DomainError(
                detail=_("Cone axis must be a unit vector, got norm %(norm)r.")
                % {"norm": norm}
            )
        if not 0.0 <= self.opening <= pi / 2:
            raise ParameterRangeError(
                name="opening", value=self.opening, bounds="[0, pi/2]"
            )

    @property
    def dim(self) -> int:
        return self.axis.shape[0]


@frozen
class OptimizerConfig:
    max_iters: int = 500
    tol: float = 1e-10
    restarts: int = 1
    seed: int = 0

    def __attrs_post_init__(self) -> None:
        if self.max_iters < 1:
            raise ParameterRangeError(
                name="max_iters", value=self.max_iters, bounds="[1, inf)"
            )
        if not self.tol > 0:
            raise ParameterRangeError(name="tol", value=self.tol, bounds="(0, inf)")
        if self.restarts < 1:
            raise ParameterRangeError(
                name="restarts", value=self.restarts, bounds="[1, inf)"
            )

    @classmethod
    def from_settings(cls, settings: Any, **overrides: Any) -> "OptimizerConfig":
        optimizer = settings.OPTIMIZER
        values = {
            "max_iters": optimizer["MAX_ITERS"],
            "tol": optimizer["TOL"],
            "restarts": optimizer["RESTARTS"],
            "seed": optimizer["SEED"],
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@frozen
class StageDiagnostics:
    objective: float
    initial_objective: float
    iterations: int
    converged: bool
    degenerate_columns: int = 0


@frozen(eq=False)
class PncModel:
    """
    The fitted nested cone sequence.

    Stage ``k`` (1-based) has an axis of length ``d + 2 - k``; the last stage
    is a 2-vector whose opening is fixed at zero.
    """

    ambient_dim: int
    stages: Tuple[HyperconeStage, ...] = field(converter=tuple)
    residual_kind: ResidualKind = field(
        default=ResidualKind.RIEMANNIAN, converter=ResidualKind
    )
    diagnostics: Tuple[StageDiagnostics, ...] = field(default=(), converter=tuple)
    reference_angle: float = field(init=False)

    @reference_angle.default
    def _reference_angle(self) -> float:
        axis = self.stages[-1].axis
        return atan2(axis[1], axis[0]) % (2 * pi)

    def __attrs_post_init__(self) -> None:
        if self.ambient_dim < 3:
            raise DimensionMismatchError(
                what="ambient dimension", expected=3, actual=self.ambient_dim
            )
        d = self.ambient_dim - 1
        if len(self.stages) != d:
            raise DimensionMismatchError(
                what="number of stages", expected=d, actual=len(self.stages)
            )
        for k, stage in enumerate(self.stages, start=1):
            if stage.dim != d + 2 - k:
                raise DimensionMismatchError(
                    what=f"axis of stage {k}", expected=d + 2 - k, actual=stage.dim
                )
        if self.stages[-1].opening != 0.0:
            raise ParameterRangeError(
                name="final opening", value=self.stages[-1].opening, bounds="{0}"
            )

    @property
    def d(self) -> int:
        return self.ambient_dim - 1

    @property
    def parameter_count(self) -> int:
        return sum(stage.dim for stage in self.stages) + self.d - 1

    @property
    def scale_factors(self) -> np.ndarray:
        sines = np.sin([stage.opening for stage in self.stages[:-1]])
        return np.concatenate(([1.0], np.cumprod(sines)))


@frozen(eq=False)
class ScoreMatrix:
    """
    Column ``j`` (0-based) holds the scores of stage ``d - j``, so the first
    column comes from the final stage.
    """

    scores: np.ndarray = field(converter=as_readonly_array)
    sizes: np.ndarray = field(converter=as_readonly_array)
    scale_factors: np.ndarray = field(converter=as_readonly_array)

    @property
    def n(self) -> int:
        return self.scores.shape[0]

    @property
    def d(self) -> int:
        return self.scores.shape[1]

    def stage_scores(self, stage: int) -> np.ndarray:
        return self.scores[:, self.d - stage]


@frozen(eq=False)
class PolarScores:
    sx: np.ndarray = field(converter=as_readonly_array)
    sy: np.ndarray = field(converter=as_readonly_array)


@frozen(eq=False)
class ReconstructionRequest:
    scores: np.ndarray = field(converter=as_readonly_array)
    sizes: np.ndarray = field(converter=as_readonly_array)
    model: PncModel
    keep: Optional[int] = None

    def __attrs_post_init__(self) -> None:
        d = self.model.d
        if self.scores.ndim != 2 or self.scores.shape[1] != d:
            raise DimensionMismatchError(
                what="score columns",
                expected=d,
                actual=self.scores.shape[-1] if self.scores.ndim else 0,
            )
        if self.sizes.shape != (self.scores.shape[0],):
            raise DimensionMismatchError(
                what="sizes", expected=self.scores.shape[0], actual=self.sizes.size
            )
        if np.any(~(self.sizes > 0)):
            raise InvalidSizeError()
        if not 0 <= self.retained <= d:
            raise ParameterRangeError(name="keep", value=self.keep, bounds=f"[0, {d}]")

    @property
    def retained(self) -> int:
        return self.model.d if self.keep is None else int(self.keep)


@frozen(eq=False)
class PcaTransform:
    mean_direction: np.ndarray = field(converter=as_readonly_array)
    directions: np.ndarray = field(converter=as_readonly_array)

    @property
    def p(self) -> int:
        return self.directions.shape[1]

    @property
    def ambient_dim(self) -> int:
        return self.mean_direction.shape[0]

    @property
    def frame(self) -> np.ndarray:
        return np.column_stack((self.mean_direction, self.directions))


@frozen(eq=False)
class FastPncModel:
    pca: PcaTransform
    inner: PncModel

    def __attrs_post_init__(self) -> None:
        if self.inner.ambient_dim != self.pca.p + 1:
            raise DimensionMismatchError(
                what="inner model dimension",
                expected=self.pca.p + 1,
                actual=self.inner.ambient_dim,
            )


@frozen(eq=False)
class HypersphericalAngles:
    angles: np.ndarray = field(converter=as_readonly_array)

    def __attrs_post_init__(self) -> None:
        if self.angles.ndim != 1 or self.angles.size < 1:
            raise DimensionMismatchError(
                what="hyperspherical angles", expected=1, actual=self.angles.size
            )
        for j, angle in enumerate(self.angles[:-1], start=1):
            if not 0.0 <= angle <= pi:
                raise ParameterRangeError(
                    name=f"theta_{j}", value=angle, bounds="[0, pi]"
                )
        if not 0.0 <= self.angles[-1] < 2 * pi:
            raise ParameterRangeError(
                name=f"theta_{self.angles.size}",
                value=self.angles[-1],
                bounds="[0, 2*pi)",
            )

    @property
    def dim(self) -> int:
        return self.angles.size + 1

    @property
    def ranges(self) -> np.ndarray:
        return np.array([pi] * (self.angles.size - 1) + [2 * pi])


@frozen(eq=False)
class BootstrapSummary:
    names: Tuple[str, ...] = field(converter=tuple)
    estimates: np.ndarray = field(converter=as_readonly_array)
    lower: np.ndarray = field(converter=as_readonly_array)
    upper: np.ndarray = field(converter=as_readonly_array)
    normalized_widths: np.ndarray = field(converter=as_readonly_array)
    replicates: int
    level: float
    seed: int
    skipped: int = 0
    flagged: Tuple[str, ...] = field(default=(), converter=tuple)

    @property
    def mean_normalized_width(self) -> float:
        return float(np.mean(self.normalized_widths))

    def metadata(self) -> Dict[str, Any]:
        return {
            "B": self.replicates,
            "level": self.level,
            "seed": self.seed,
            "skipped": self.skipped,
            "flagged": list(self.flagged),
        }


@frozen
class CiWidthStudy:
    per_run: Dict[int, Tuple[float, ...]]
    pooled: Dict[int, float]


@frozen
class RegionSpec:
    opening: float = field(converter=float)
    radial_range: Tuple[float, float] = field(converter=tuple)
    angular_range: Tuple[float, float] = field(converter=tuple)
    count: int = field(converter=int)

    def __attrs_post_init__(self) -> None:
        r_lo, r_hi = self.radial_range
        t_lo, t_hi = self.angular_range
        if not 0 < r_lo <= r_hi:
            raise ParameterRangeError(
                name="radial_range", value=self.radial_range, bounds="0 < r_lo <= r_hi"
            )
        if not 0 <= t_lo < t_hi <= 2 * pi:
            raise ParameterRangeError(
                name="angular_range",
                value=self.angular_range,
                bounds="0 <= theta_lo < theta_hi <= 2*pi",
            )
        if not 0 < self.opening <= pi / 2:
            raise ParameterRangeError(
                name="opening", value=self.opening, bounds="(0, pi/2]"
            )
        if self.count < 1:
            raise ParameterRangeError(name="count", value=self.count, bounds="[1, inf)")


@frozen
class ResidualLaw:
    """
    Truncated normal law whose standard deviation and symmetric truncation
    bound may both grow linearly with the observation size.
    """

    sd: float = field(default=0.0, converter=float)
    sd_per_size: float = field(default=0.0, converter=float)
    bound: float = field(default=0.0, converter=float)
    bound_per_size: float = field(default=0.0, converter=float)

    def __attrs_post_init__(self) -> None:
        for name in ("sd", "sd_per_size", "bound", "bound_per_size"):
            value = getattr(self, name)
            if not (isfinite(value) and value >= 0):
                raise ParameterRangeError(name=name, value=value, bounds="[0, inf)")

    def sd_at(self, sizes: np.ndarray) -> np.ndarray:
        return self.sd + self.sd_per_size * sizes

    def bound_at(self, sizes: np.ndarray) -> np.ndarray:
        return self.bound + self.bound_per_size * sizes


@frozen(eq=False)
class GeneratorSpec:
    axes: Tuple[np.ndarray, ...] = field(converter=_sequence_of_arrays)
    openings: Tuple[float, ...] = field(converter=lambda v: tuple(float(a) for a in v))
    size_range: Tuple[float, float] = field(converter=tuple)
    residual_laws: Tuple[ResidualLaw, ...] = field(converter=tuple)
    count: int = field(converter=int)
    seed: int = field(default=0, converter=int)

    def __attrs_post_init__(self) -> None:
        d = len(self.axes)
        if len(self.openings) != d - 1:
            raise DimensionMismatchError(
                what="openings", expected=d - 1, actual=len(self.openings)
            )
        if len(self.residual_laws) != d:
            raise DimensionMismatchError(
                what="residual laws", expected=d, actual=len(self.residual_laws)
            )
        low, high = self.size_range
        if not 0 < low <= high:
            raise ParameterRangeError(
                name="size_range", value=self.size_range, bounds="0 < low <= high"
            )
        if self.count < 1:
            raise ParameterRangeError(name="count", value=self.count, bounds="[1, inf)")

    def to_model(self) -> PncModel:
        openings = self.openings + (0.0,)
        stages = [
            HyperconeStage(axis=axis / np.linalg.norm(axis), opening=opening)
            for axis, opening in zip(self.axes, openings)
        ]
        return PncModel(ambient_dim=self.axes[0].size, stages=stages)


@frozen(eq=False)
class SampledDataset:
    data: np.ndarray = field(converter=as_readonly_array)
    labels: Optional[np.ndarray] = None


@frozen(eq=False)
class PcaModel:
    mean: np.ndarray = field(converter=as_readonly_array)
    directions: np.ndarray = field(converter=as_readonly_array)
    eigenvalues: np.ndarray = field(converter=as_readonly_array)

    @property
    def k(self) -> int:
        return self.directions.shape[1]


@frozen
class ComparisonRow:
    method: str
    components: int
    alpha: float
    sigma: float
    mean_backfit_distance: float
    variance_explained: float
    ci_lo: Optional[float] = None
    ci_hi: Optional[float] = None


@frozen
class RunManifest:
    command: str
    parameters: Dict[str, Any]
    inputs: Tuple[str, ...] = field(converter=tuple)
    outputs: Tuple[str, ...] = field(converter=tuple)
    seed: Optional[int]
    version: str
    duration: float
