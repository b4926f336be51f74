from django.utils.translation import gettext_lazy as _

import json
from math import pi
from rest_framework.fields import (
    BooleanField,
    ChoiceField,
    FloatField,
    IntegerField,
    ListField,
)
from rest_framework.serializers import Serializer, ValidationError
from typing import Any, Dict, OrderedDict, Union

from nestedcones.exceptions import PayloadValidationError
from nestedcones.models import (
    FastPncModel,
    GeneratorSpec,
    HyperconeStage,
    PcaTransform,
    PncModel,
    ResidualKind,
    ResidualLaw,
    StageDiagnostics,
)


class PayloadValidator(Serializer):
    def update(self, instance: Any, validated_data: OrderedDict[str, Any]):
        raise NotImplementedError

    def create(self, validated_data: OrderedDict[str, Any]):
        raise NotImplementedError


class StageSerializer(PayloadValidator):
    axis = ListField(child=FloatField(), min_length=2)
    opening = FloatField(min_value=0.0, max_value=pi / 2)


class StageDiagnosticsSerializer(PayloadValidator):
    objective = FloatField()
    initial_objective = FloatField()
    iterations = IntegerField(min_value=0)
    converged = BooleanField()
    degenerate_columns = IntegerField(min_value=0, default=0)


class PncModelSerializer(PayloadValidator):
    ambient_dim = IntegerField(min_value=3)
    residual_kind = ChoiceField(choices=[kind.value for kind in ResidualKind])
    stages = StageSerializer(many=True)
    diagnostics = StageDiagnosticsSerializer(many=True, required=False)

    def validate(self, attrs: OrderedDict[str, Any]) -> OrderedDict[str, Any]:
        stages = attrs["stages"]
        d = attrs["ambient_dim"] - 1
        if len(stages) != d:
            raise ValidationError(
                _("Expected %(d)d stages, got %(count)d.")
                % {"d": d, "count": len(stages)}
            )
        for k, stage in enumerate(stages, start=1):
            if len(stage["axis"]) != d + 2 - k:
                raise ValidationError(
                    _("Axis of stage %(k)d must have length %(length)d.")
                    % {"k": k, "length": d + 2 - k}
                )
        if stages[-1]["opening"] != 0.0:
            raise ValidationError(_("The final stage opening must be exactly 0."))
        return attrs

    def to_model(self) -> PncModel:
        return self.build(self.validated_data)

    @staticmethod
    def build(data: OrderedDict[str, Any]) -> PncModel:
        return PncModel(
            ambient_dim=data["ambient_dim"],
            stages=[HyperconeStage(**stage) for stage in data["stages"]],
            residual_kind=data["residual_kind"],
            diagnostics=[
                StageDiagnostics(**entry) for entry in data.get("diagnostics", [])
            ],
        )


class FastPncModelSerializer(PayloadValidator):
    inner = PncModelSerializer()
    mean_direction = ListField(child=FloatField(), min_length=2)
    directions = ListField(child=ListField(child=FloatField()), min_length=1)
    p = IntegerField(min_value=1)

    def validate(self, attrs: OrderedDict[str, Any]) -> OrderedDict[str, Any]:
        if len(attrs["directions"]) != attrs["p"]:
            raise ValidationError(_("Expected one direction column per component."))
        width = len(attrs["mean_direction"])
        if any(len(column) != width for column in attrs["directions"]):
            raise ValidationError(_("Direction columns must match the mean direction."))
        if attrs["inner"]["ambient_dim"] != attrs["p"] + 1:
            raise ValidationError(_("Inner model dimension must be p + 1."))
        return attrs

    def to_model(self) -> FastPncModel:
        data = self.validated_data
        pca = PcaTransform(
            mean_direction=data["mean_direction"],
            directions=[list(row) for row in zip(*data["directions"])],
        )
        return FastPncModel(pca=pca, inner=PncModelSerializer.build(data["inner"]))


class ResidualLawSerializer(PayloadValidator):
    sd = FloatField(min_value=0.0, default=0.0)
    sd_per_size = FloatField(min_value=0.0, default=0.0)
    bound = FloatField(min_value=0.0, default=0.0)
    bound_per_size = FloatField(min_value=0.0, default=0.0)


class GeneratorSpecSerializer(PayloadValidator):
    axes = ListField(child=ListField(child=FloatField(), min_length=2), min_length=2)
    openings = ListField(child=FloatField(min_value=0.0, max_value=pi / 2))
    size_range = ListField(child=FloatField(min_value=0.0), min_length=2, max_length=2)
    residual_laws = ResidualLawSerializer(many=True)
    count = IntegerField(min_value=1)
    seed = IntegerField(default=0)

    def to_spec(self) -> GeneratorSpec:
        data = self.validated_data
        return GeneratorSpec(
            axes=data["axes"],
            openings=data["openings"],
            size_range=data["size_range"],
            residual_laws=[ResidualLaw(**law) for law in data["residual_laws"]],
            count=data["count"],
            seed=data["seed"],
        )


def model_to_dict(model: PncModel) -> Dict[str, Any]:
    payload = {
        "ambient_dim": model.ambient_dim,
        "residual_kind": model.residual_kind.value,
        "stages": [
            {"axis": stage.axis.tolist(), "opening": float(stage.opening)}
            for stage in model.stages
        ],
    }
    if model.diagnostics:
        payload["diagnostics"] = [
            {
                "objective": entry.objective,
                "initial_objective": entry.initial_objective,
                "iterations": entry.iterations,
                "converged": entry.converged,
                "degenerate_columns": entry.degenerate_columns,
            }
            for entry in model.diagnostics
        ]
    return payload


def _validated(serializer: Serializer, what: str) -> Serializer:
    if not serializer.is_valid():
        raise PayloadValidationError(what=what, errors=serializer.errors)
    return serializer


def _loads(text: str, what: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as cause:
        raise PayloadValidationError(what=what, errors=str(cause)) from cause


def model_to_json(model: PncModel) -> str:
    # json emits floats via repr, the shortest round-trip decimal
    return json.dumps(model_to_dict(model), indent=2)


def model_from_json(text: str) -> PncModel:
    serializer = PncModelSerializer(data=_loads(text, "model"))
    return _validated(serializer, "model").to_model()


def fast_model_to_json(model: FastPncModel) -> str:
    payload = {
        "inner": model_to_dict(model.inner),
        "mean_direction": model.pca.mean_direction.tolist(),
        "directions": model.pca.directions.T.tolist(),
        "p": model.pca.p,
    }
    return json.dumps(payload, indent=2)


def fast_model_from_json(text: str) -> FastPncModel:
    serializer = FastPncModelSerializer(data=_loads(text, "fast model"))
    return _validated(serializer, "fast model").to_model()


def generator_spec_from_json(text: str) -> GeneratorSpec:
    serializer = GeneratorSpecSerializer(data=_loads(text, "generator spec"))
    return _validated(serializer, "generator spec").to_spec()


def any_model_from_json(text: str) -> Union[PncModel, FastPncModel]:
    payload = _loads(text, "model")
    if isinstance(payload, dict) and "inner" in payload:
        return _validated(
            FastPncModelSerializer(data=payload), "fast model"
        ).to_model()
    return _validated(PncModelSerializer(data=payload), "model").to_model()
