import pytest

import json
import numpy as np
from math import pi

from nestedcones.command.fast_fit import fast_fit_command
from nestedcones.command.fit import fit_command
from nestedcones.exceptions import PayloadValidationError
from nestedcones.models import FastPncModel, PncModel, ResidualKind
from nestedcones.serializers import (
    any_model_from_json,
    fast_model_from_json,
    fast_model_to_json,
    generator_spec_from_json,
    model_from_json,
    model_to_dict,
    model_to_json,
)


@pytest.fixture()
def fitted_model(table1_data, optimizer_config) -> PncModel:
    model, _scores = fit_command(
        data=table1_data, kind=ResidualKind.CHORDAL, config=optimizer_config
    )
    return model


def test_model_json_is_exact(fitted_model):
    restored = model_from_json(model_to_json(fitted_model))
    assert restored.residual_kind == ResidualKind.CHORDAL
    assert restored.reference_angle == fitted_model.reference_angle
    for stage, restored_stage in zip(fitted_model.stages, restored.stages):
        np.testing.assert_array_equal(restored_stage.axis, stage.axis)
        assert restored_stage.opening == stage.opening
    assert restored.diagnostics == fitted_model.diagnostics


def test_model_json_layout(fitted_model):
    payload = json.loads(model_to_json(fitted_model))
    assert payload["ambient_dim"] == 4
    assert payload["residual_kind"] == "chordal"
    assert [len(stage["axis"]) for stage in payload["stages"]] == [4, 3, 2]
    assert payload["stages"][-1]["opening"] == 0.0


@pytest.mark.parametrize(
    "change",
    [
        lambda payload: payload["stages"].pop(),
        lambda payload: payload["stages"][1]["axis"].append(0.0),
        lambda payload: payload["stages"][-1].update(opening=0.1),
        lambda payload: payload["stages"][0].update(opening=2.0),
        lambda payload: payload.update(residual_kind="euclidean"),
        lambda payload: payload.pop("ambient_dim"),
    ],
)
def test_invalid_model_payloads(change, fitted_model):
    payload = model_to_dict(fitted_model)
    change(payload)
    with pytest.raises(PayloadValidationError):
        model_from_json(json.dumps(payload))


def test_malformed_json():
    with pytest.raises(PayloadValidationError) as error:
        model_from_json("{not json")
    assert error.value.exit_code == 2


def test_fast_model_json(rng, optimizer_config):
    data = rng.normal(size=(12, 8)) + 3.0
    model, _scores = fast_fit_command(data=data, p=3, config=optimizer_config)
    restored = fast_model_from_json(fast_model_to_json(model))
    assert isinstance(restored, FastPncModel)
    np.testing.assert_array_equal(restored.pca.directions, model.pca.directions)
    np.testing.assert_array_equal(restored.pca.mean_direction, model.pca.mean_direction)
    assert restored.inner.ambient_dim == 4
    assert isinstance(any_model_from_json(fast_model_to_json(model)), FastPncModel)


def test_fast_model_with_wrong_component_count(rng, optimizer_config):
    data = rng.normal(size=(12, 8)) + 3.0
    model, _scores = fast_fit_command(data=data, p=3, config=optimizer_config)
    payload = json.loads(fast_model_to_json(model))
    payload["p"] = 2
    with pytest.raises(PayloadValidationError):
        fast_model_from_json(json.dumps(payload))


def test_any_model_from_json(fitted_model):
    assert isinstance(any_model_from_json(model_to_json(fitted_model)), PncModel)


def test_generator_spec_from_json():
    spec = generator_spec_from_json(
        json.dumps(
            {
                "axes": [[0.0, 0.0, 1.0], [1.0, 0.0]],
                "openings": [pi / 4],
                "size_range": [1.0, 3.0],
                "residual_laws": [{"sd": 0.1, "bound": 0.5}, {"sd_per_size": 0.2}],
                "count": 25,
            }
        )
    )
    assert spec.count == 25
    assert spec.seed == 0
    assert spec.residual_laws[1].sd_per_size == 0.2
    assert spec.to_model().stages[0].opening == pi / 4


def test_generator_spec_payload_errors():
    with pytest.raises(PayloadValidationError):
        generator_spec_from_json(json.dumps({"axes": [[1.0, 0.0]], "count": 0}))
