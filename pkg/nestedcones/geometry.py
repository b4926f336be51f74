from django.utils.translation import gettext_lazy as _

import logging
import numpy as np
from math import atan2, cos, pi, sin, sqrt
from typing import Optional, Tuple

from nestedcones.exceptions import (
    ApexError,
    DimensionMismatchError,
    DomainError,
    NotOnConeError,
)
from nestedcones.models import APEX_SIZE, ConePoint, HyperconeStage, ResidualKind


EPS_ALIGN = 1e-9
ON_CONE_TOLERANCE = 1e-8


def cone_distance(size1: float, size2: float, base_distance: float) -> float:
    if not 0.0 <= base_distance <= pi:
        raise DomainError(
            detail=_("Base distance must lie in [0, pi], got %(distance)r.")
            % {"distance": base_distance}
        )
    if size1 < 0 or size2 < 0:
        raise DomainError(detail=_("Sizes must be nonnegative."))
    # (r1 - r2)^2 + 4 r1 r2 sin^2(b/2) is the law of cosines without cancellation
    half = sin(base_distance / 2)
    return sqrt((size1 - size2) ** 2 + 4.0 * size1 * size2 * half * half)


def _unit(vector: np.ndarray) -> np.ndarray:
    return vector / np.linalg.norm(vector)


def angle_between(a: np.ndarray, b: np.ndarray) -> float:
    a = _unit(a)
    b = _unit(b)
    return atan2(float(np.linalg.norm(a - (a @ b) * b)), float(a @ b))


def _base_direction(point: ConePoint, axis: np.ndarray) -> Optional[np.ndarray]:
    rejection = point.direction - (point.direction @ axis) * axis
    norm = np.linalg.norm(rejection)
    if norm < EPS_ALIGN:
        return None
    return rejection / norm


def hypercone_geodesic_distance(
    p: ConePoint, q: ConePoint, opening: float, axis: Optional[np.ndarray] = None
) -> float:
    """
    Length of the minimal geodesic between two points of the hypercone with the
    given opening. An apex input contributes no direction, so the base-sphere
    angle is taken as zero and the result is the size difference.
    """
    if p.dim != q.dim:
        raise DimensionMismatchError(what="cone points", expected=p.dim, actual=q.dim)
    if p.is_apex or q.is_apex:
        return cone_distance(p.size, q.size, 0.0)
    if axis is not None:
        w_p = _base_direction(p, axis)
        w_q = _base_direction(q, axis)
        theta = 0.0 if w_p is None or w_q is None else angle_between(w_p, w_q)
    else:
        sin_sq = sin(opening) ** 2
        if sin_sq < EPS_ALIGN:
            theta = 0.0
        else:
            cos_theta = (float(p.direction @ q.direction) - cos(opening) ** 2) / sin_sq
            theta = float(np.arccos(np.clip(cos_theta, -1.0, 1.0)))
    return cone_distance(p.size, q.size, min(sin(opening) * theta, pi))


def _check_on_cone(point: ConePoint, axis: np.ndarray, opening: float) -> None:
    if point.is_apex:
        raise ApexError()
    measured = angle_between(point.ambient, axis)
    if abs(measured - opening) > ON_CONE_TOLERANCE:
        raise NotOnConeError(angle=measured, opening=opening)


def _frame_to_first(vector: np.ndarray) -> np.ndarray:
    # rotation taking ``vector`` to e_1, built from the last-axis rotation on
    # reversed coordinates
    rotation = rodrigues_rotation(vector[::-1])
    return rotation[::-1, ::-1]


def flatten_to_sector(
    p: ConePoint,
    axis: np.ndarray,
    opening: float,
    reference: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Polar chart of the flattened hypersector about ``reference``, a unit base
    direction orthogonal to ``axis``. The default reference is the ray with
    first chart angle zero, ``R.T @ e_1``. Distances to the reference ray and
    along it are exact; for m = 3 the chart is the familiar unrolled sector.
    """
    axis = np.asarray(axis, dtype=float)
    if axis.shape != p.ambient.shape:
        raise DimensionMismatchError(
            what="cone axis", expected=p.dim, actual=axis.size
        )
    _check_on_cone(p, axis, opening)
    if p.dim == 2:
        return np.array([p.size])
    rotation = rodrigues_rotation(axis)
    if reference is None:
        reference_base = np.eye(p.dim - 1)[0]
    else:
        reference_base = (rotation @ _unit(np.asarray(reference, dtype=float)))[:-1]
        reference_base = _unit(reference_base)
    base = _base_direction(p, axis)
    if base is None:
        return np.concatenate(([p.size], np.zeros(p.dim - 2)))
    base = _unit((rotation @ base)[:-1])
    local = _frame_to_first(reference_base) @ base
    rho = atan2(float(np.linalg.norm(local[1:])), float(local[0]))
    tail = local[1:]
    tail_norm = np.linalg.norm(tail)
    if tail_norm < EPS_ALIGN:
        tail = np.eye(p.dim - 2)[0] if rho > pi / 2 else np.zeros(p.dim - 2)
    else:
        tail = tail / tail_norm
    flat_angle = sin(opening) * rho
    return p.size * np.concatenate(([cos(flat_angle)], sin(flat_angle) * tail))


def flatten_pair(
    p: ConePoint, q: ConePoint, axis: np.ndarray, opening: float
) -> Tuple[np.ndarray, np.ndarray]:
    axis = np.asarray(axis, dtype=float)
    _check_on_cone(p, axis, opening)
    reference = _base_direction(p, axis)
    return (
        flatten_to_sector(p, axis, opening, reference=reference),
        flatten_to_sector(q, axis, opening, reference=reference),
    )


def rodrigues_rotation(axis: np.ndarray) -> np.ndarray:
    axis = np.asarray(axis, dtype=float)
    m = axis.shape[0]
    if m < 2:
        raise DimensionMismatchError(what="rotation axis", expected=2, actual=m)
    e_m = np.zeros(m)
    e_m[-1] = 1.0
    orthogonal = axis.copy()
    orthogonal[-1] = 0.0
    c_norm = np.linalg.norm(orthogonal)
    if c_norm < EPS_ALIGN:
        if axis[-1] > 0:
            return np.eye(m)
        flip = np.eye(m)
        flip[0, 0] = -1.0
        flip[-1, -1] = -1.0
        return flip
    c = orthogonal / c_norm
    gamma = atan2(c_norm, axis[-1])
    return (
        np.eye(m)
        + sin(gamma) * (np.outer(e_m, c) - np.outer(c, e_m))
        + (cos(gamma) - 1.0) * (np.outer(e_m, e_m) + np.outer(c, c))
    )


def signed_angle_2d(x: ConePoint, axis: np.ndarray) -> float:
    if x.dim != 2:
        raise DimensionMismatchError(what="planar point", expected=2, actual=x.dim)
    if x.is_apex:
        raise ApexError()
    return float(signed_angles_2d(x.ambient[:, None], axis)[0])


def project_to_cone(x: ConePoint, stage: HyperconeStage) -> ConePoint:
    if x.is_apex:
        raise ApexError()
    return ConePoint(
        ambient=project_columns(x.ambient[:, None], stage.axis, stage.opening)[:, 0]
    )


def residual(
    x: ConePoint, stage: HyperconeStage, kind: ResidualKind = ResidualKind.RIEMANNIAN
) -> float:
    if x.is_apex:
        raise ApexError()
    return float(
        stage_residuals(x.ambient[:, None], stage.axis, stage.opening, kind)[0]
    )


def map_down(x: ConePoint, axis: np.ndarray) -> ConePoint:
    if x.is_apex:
        raise ApexError()
    return ConePoint(ambient=map_down_columns(x.ambient[:, None], axis)[:, 0])


def sample_on_cone(
    axis: np.ndarray, opening: float, sizes: np.ndarray, base_directions: np.ndarray
) -> np.ndarray:
    """
    Embed points of the hypercone: column ``i`` has size ``sizes[i]`` and base
    direction ``base_directions[:, i]`` (a unit vector of length m - 1 in the
    frame where the axis is the last basis vector).
    """
    axis = np.asarray(axis, dtype=float)
    base_directions = np.asarray(base_directions, dtype=float)
    if base_directions.shape[0] != axis.size - 1:
        raise DimensionMismatchError(
            what="base directions",
            expected=axis.size - 1,
            actual=base_directions.shape[0],
        )
    n = base_directions.shape[1]
    local = np.vstack((sin(opening) * base_directions, np.full((1, n), cos(opening))))
    return rodrigues_rotation(axis).T @ local * np.asarray(sizes, dtype=float)


# column-wise helpers on (m x n) matrices


def column_sizes(data: np.ndarray) -> np.ndarray:
    return np.linalg.norm(data, axis=0)


def apex_columns(data: np.ndarray, eps_apex: float = APEX_SIZE) -> np.ndarray:
    return np.flatnonzero(column_sizes(data) < eps_apex)


def ensure_no_apex(data: np.ndarray, eps_apex: float = APEX_SIZE) -> None:
    columns = apex_columns(data, eps_apex)
    if columns.size:
        raise ApexError(columns=columns.tolist())


def cone_angles(data: np.ndarray, axis: np.ndarray) -> np.ndarray:
    dots = axis @ data
    rejections = data - np.outer(axis, dots)
    return np.arctan2(np.linalg.norm(rejections, axis=0), dots)


def signed_angles_2d(data: np.ndarray, axis: np.ndarray) -> np.ndarray:
    det = axis[0] * data[1] - axis[1] * data[0]
    dot = axis @ data
    angles = np.arctan2(det, dot)
    return np.where(angles <= -pi, pi, angles)


def angular_residuals(
    angles: np.ndarray, sizes: np.ndarray, kind: ResidualKind
) -> np.ndarray:
    if kind == ResidualKind.CHORDAL:
        return 2.0 * np.sin(angles / 2.0) * sizes
    return angles * sizes


def stage_residuals(
    data: np.ndarray, axis: np.ndarray, opening: float, kind: ResidualKind
) -> np.ndarray:
    sizes = column_sizes(data)
    if axis.size == 2:
        return angular_residuals(signed_angles_2d(data, axis), sizes, kind)
    return angular_residuals(cone_angles(data, axis) - opening, sizes, kind)


def _fallback_direction(axis: np.ndarray) -> np.ndarray:
    for index in range(axis.size):
        candidate = np.zeros(axis.size)
        candidate[index] = 1.0
        candidate -= (candidate @ axis) * axis
        norm = np.linalg.norm(candidate)
        if norm > sqrt(EPS_ALIGN):
            return candidate / norm
    raise DomainError(detail=_("Could not complete the axis to an orthonormal pair."))


def aligned_columns(
    data: np.ndarray, axis: np.ndarray, eps_align: float = EPS_ALIGN
) -> np.ndarray:
    """
    Mask of the columns whose angle to the axis is within ``eps_align`` of 0
    or pi; their rejection from the axis has no direction.
    """
    rejections = data - np.outer(axis, axis @ data)
    norms = np.linalg.norm(rejections, axis=0)
    return norms <= np.sin(eps_align) * column_sizes(data)


def unit_rejections(
    data: np.ndarray, axis: np.ndarray, eps_align: float = EPS_ALIGN
) -> np.ndarray:
    """
    Unit rejections of the columns from ``axis``. Columns within ``eps_align``
    of the axis ray (or its opposite) use the first basis vector orthogonalized
    against the axis.
    """
    rejections = data - np.outer(axis, axis @ data)
    norms = np.linalg.norm(rejections, axis=0)
    degenerate = aligned_columns(data, axis, eps_align)
    directions = np.divide(
        rejections, norms, out=np.zeros_like(rejections), where=~degenerate
    )
    if np.any(degenerate):
        logging.warning(
            "%d column(s) aligned with the cone axis, using a fixed perturbation.",
            int(degenerate.sum()),
        )
        directions[:, degenerate] = _fallback_direction(axis)[:, None]
    return directions


def project_columns(
    data: np.ndarray, axis: np.ndarray, opening: float, eps_align: float = EPS_ALIGN
) -> np.ndarray:
    directions = unit_rejections(data, axis, eps_align)
    sizes = column_sizes(data)
    return (cos(opening) * axis[:, None] + sin(opening) * directions) * sizes


def map_down_columns(
    data: np.ndarray, axis: np.ndarray, eps_align: float = EPS_ALIGN
) -> np.ndarray:
    directions = unit_rejections(data, axis, eps_align)
    rotated = (rodrigues_rotation(axis) @ directions)[:-1]
    rotated /= np.linalg.norm(rotated, axis=0)
    return rotated * column_sizes(data)
