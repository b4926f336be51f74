import pytest

import logging
import numpy as np
from math import pi, sqrt

from nestedcones.command.backfit import (
    backfit_command,
    chordal_residual_adjust,
    mean_size_and_shape,
    reconstruction_error,
    score_path,
)
from nestedcones.command.fit import fit_command
from nestedcones.command.transform import transform_command
from nestedcones.exceptions import (
    DimensionMismatchError,
    DomainError,
    EmptyInputError,
    InvalidSizeError,
    ParameterRangeError,
)
from nestedcones.geometry import (
    angle_between,
    cone_angles,
    map_down_columns,
    sample_on_cone,
)
from nestedcones.models import (
    HyperconeStage,
    PncModel,
    ReconstructionRequest,
    ResidualKind,
)


E3 = np.array([0.0, 0.0, 1.0])


@pytest.fixture()
def cone_model() -> PncModel:
    return PncModel(
        ambient_dim=3,
        stages=[
            HyperconeStage(axis=E3, opening=pi / 4),
            HyperconeStage(axis=[1.0, 0.0], opening=0.0),
        ],
    )


@pytest.fixture()
def four_dim_model() -> PncModel:
    return PncModel(
        ambient_dim=4,
        stages=[
            HyperconeStage(axis=[0.5, 0.5, 0.5, 0.5], opening=pi / 6),
            HyperconeStage(axis=np.ones(3) / sqrt(3), opening=pi / 4),
            HyperconeStage(axis=[0.6, 0.8], opening=0.0),
        ],
    )


def test_zero_scores_give_the_principal_point(cone_model):
    reconstruction = backfit_command(
        request=ReconstructionRequest(
            scores=np.zeros((1, 2)), sizes=[2.0], model=cone_model
        )
    )
    np.testing.assert_allclose(reconstruction[:, 0], [sqrt(2), 0.0, sqrt(2)])


def test_backfit_inverts_transform_of_a_known_model(four_dim_model, random_data):
    data = random_data(4, 25)
    scores = transform_command(model=four_dim_model, data=data)
    reconstruction = backfit_command(
        request=ReconstructionRequest(
            scores=scores.scores, sizes=scores.sizes, model=four_dim_model
        )
    )
    np.testing.assert_allclose(reconstruction, data, rtol=1e-9, atol=1e-12)


def test_chordal_backfit_inverts_transform(four_dim_model, random_data):
    model = PncModel(
        ambient_dim=4,
        stages=four_dim_model.stages,
        residual_kind=ResidualKind.CHORDAL,
    )
    data = random_data(4, 25)
    scores = transform_command(model=model, data=data)
    reconstruction = backfit_command(
        request=ReconstructionRequest(
            scores=scores.scores, sizes=scores.sizes, model=model
        )
    )
    np.testing.assert_allclose(reconstruction, data, rtol=1e-9, atol=1e-12)


def test_reconstruction_keeps_sizes(four_dim_model, rng):
    scores = rng.normal(size=(10, 3))
    sizes = rng.uniform(1.0, 4.0, size=10)
    reconstruction = backfit_command(
        request=ReconstructionRequest(
            scores=scores, sizes=sizes, model=four_dim_model, keep=2
        )
    )
    np.testing.assert_allclose(np.linalg.norm(reconstruction, axis=0), sizes)


def test_keep_drops_trailing_scores(four_dim_model, rng):
    scores = rng.normal(size=(5, 3))
    sizes = np.full(5, 3.0)
    truncated = scores.copy()
    truncated[:, 1:] = 0.0
    kept = backfit_command(
        request=ReconstructionRequest(
            scores=scores, sizes=sizes, model=four_dim_model, keep=1
        )
    )
    zeroed = backfit_command(
        request=ReconstructionRequest(
            scores=truncated, sizes=sizes, model=four_dim_model
        )
    )
    np.testing.assert_array_equal(kept, zeroed)


def test_chordal_residual_adjust():
    xi = 2.0 * np.sin(0.3 / 2) * 2.0
    assert chordal_residual_adjust(xi, 2.0) == pytest.approx(0.3)
    np.testing.assert_allclose(
        chordal_residual_adjust(np.array([0.0, 4.0]), np.array([1.0, 2.0])),
        [0.0, pi],
    )
    with pytest.raises(DomainError):
        chordal_residual_adjust(5.0, 2.0)


def test_mean_size_and_shape(four_dim_model):
    mean = mean_size_and_shape(four_dim_model, [1.0, 2.0, 3.0])
    assert mean.shape == (4, 1)
    assert np.linalg.norm(mean) == pytest.approx(2.0)
    with pytest.raises(EmptyInputError):
        mean_size_and_shape(four_dim_model, [])
    with pytest.raises(InvalidSizeError):
        mean_size_and_shape(four_dim_model, [1.0, 0.0])


def test_score_path(four_dim_model):
    path = score_path(four_dim_model, 1.0, 1, np.linspace(-2.0, 2.0, 9))
    assert path.shape == (4, 9)
    np.testing.assert_allclose(np.linalg.norm(path, axis=0), 1.0)
    np.testing.assert_allclose(
        path[:, 4], mean_size_and_shape(four_dim_model, [1.0])[:, 0]
    )
    with pytest.raises(ParameterRangeError):
        score_path(four_dim_model, 1.0, 4, [0.0])


def test_reconstruction_error():
    original = np.array([[1.0, 0.0], [0.0, 2.0]])
    reconstructed = np.array([[1.0, 0.0], [0.0, -1.0]])
    np.testing.assert_allclose(reconstruction_error(original, reconstructed), [0, 3])
    with pytest.raises(DimensionMismatchError):
        reconstruction_error(original, np.ones((3, 2)))


def test_zero_scale_factor_ignores_scores(caplog):
    model = PncModel(
        ambient_dim=3,
        stages=[
            HyperconeStage(axis=E3, opening=0.0),
            HyperconeStage(axis=[1.0, 0.0], opening=0.0),
        ],
    )
    np.testing.assert_array_equal(model.scale_factors, [1.0, 0.0])
    with caplog.at_level(logging.WARNING):
        reconstruction = backfit_command(
            request=ReconstructionRequest(
                scores=[[0.7, 0.0]], sizes=[2.0], model=model
            )
        )
    assert "zero scale factor" in caplog.text
    np.testing.assert_allclose(reconstruction[:, 0], [0.0, 0.0, 2.0], atol=1e-15)


def test_request_validation(four_dim_model):
    with pytest.raises(DimensionMismatchError):
        ReconstructionRequest(
            scores=np.zeros((2, 2)), sizes=[1, 1], model=four_dim_model
        )
    with pytest.raises(DimensionMismatchError):
        ReconstructionRequest(
            scores=np.zeros((2, 3)), sizes=[1], model=four_dim_model
        )
    with pytest.raises(InvalidSizeError):
        ReconstructionRequest(
            scores=np.zeros((2, 3)), sizes=[1.0, -1.0], model=four_dim_model
        )
    with pytest.raises(ParameterRangeError):
        ReconstructionRequest(
            scores=np.zeros((2, 3)), sizes=[1, 1], model=four_dim_model, keep=4
        )


def test_reconstruction_error_shrinks_as_more_scores_are_kept(
    table1_data, optimizer_config
):
    model, scores = fit_command(data=table1_data, config=optimizer_config)
    errors = [
        reconstruction_error(
            table1_data,
            backfit_command(
                request=ReconstructionRequest(
                    scores=scores.scores, sizes=scores.sizes, model=model, keep=keep
                )
            ),
        ).mean()
        for keep in range(model.d + 1)
    ]
    assert all(later <= earlier + 1e-12 for earlier, later in zip(errors, errors[1:]))
    assert errors[-1] < 1e-8 < errors[0]


def test_residual_kinds_agree_for_small_residuals(four_dim_model, rng):
    chordal_model = PncModel(
        ambient_dim=4,
        stages=four_dim_model.stages,
        residual_kind=ResidualKind.CHORDAL,
    )
    sizes = rng.uniform(1.0, 3.0, size=20)
    ratios = rng.uniform(-1e-3, 1e-3, size=(20, 3))
    scores = ratios * sizes[:, None] * four_dim_model.scale_factors[::-1]
    riemannian = backfit_command(
        request=ReconstructionRequest(scores=scores, sizes=sizes, model=four_dim_model)
    )
    chordal = backfit_command(
        request=ReconstructionRequest(scores=scores, sizes=sizes, model=chordal_model)
    )
    np.testing.assert_allclose(chordal, riemannian, rtol=0, atol=1e-9)


def test_mean_size_and_shape_is_not_the_arithmetic_mean(cone_model):
    sizes = np.array([1.0, 2.0, 3.0, 2.0])
    angles = np.array([-1.0, -0.5, 0.5, 1.0])
    base = np.vstack((np.cos(angles), np.sin(angles)))
    data = sample_on_cone(E3, pi / 4, sizes, base)
    mean = mean_size_and_shape(cone_model, sizes)[:, 0]
    arithmetic = data.mean(axis=1)
    assert np.linalg.norm(mean) == pytest.approx(sizes.mean())
    assert cone_angles(mean[:, None], E3)[0] == pytest.approx(pi / 4)
    assert np.linalg.norm(arithmetic) < 0.95 * sizes.mean()
    assert cone_angles(arithmetic[:, None], E3)[0] < pi / 4 - 0.05
    assert np.linalg.norm(mean - arithmetic) > 0.1


@pytest.mark.parametrize("column", [1, 2, 3])
def test_symmetric_score_path_is_equidistant_from_the_mean(four_dim_model, column):
    below, centre, above = score_path(four_dim_model, 2.0, column, [-0.4, 0.0, 0.4]).T
    np.testing.assert_allclose(
        centre, mean_size_and_shape(four_dim_model, [2.0])[:, 0], atol=1e-12
    )
    assert angle_between(below, centre) == pytest.approx(
        angle_between(above, centre), rel=1e-10
    )
    assert angle_between(below, centre) > 0.01


def test_keep_zero_reconstructions_lie_on_every_cone(four_dim_model, rng):
    scores = rng.normal(size=(15, 3))
    sizes = rng.uniform(1.0, 4.0, size=15)
    current = backfit_command(
        request=ReconstructionRequest(
            scores=scores, sizes=sizes, model=four_dim_model, keep=0
        )
    )
    for stage in four_dim_model.stages[:-1]:
        np.testing.assert_allclose(
            cone_angles(current, stage.axis), stage.opening, atol=1e-10
        )
        current = map_down_columns(current, stage.axis)
    np.testing.assert_allclose(
        current / np.linalg.norm(current, axis=0),
        np.broadcast_to(four_dim_model.stages[-1].axis[:, None], current.shape),
        atol=1e-10,
    )
