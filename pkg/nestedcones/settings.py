from django.conf import settings

from math import pi
from rest_framework.settings import APISettings, perform_import
from typing import Any, Dict

from nestedcones.exceptions import PresetHandlerMissingError


class PNCAPISettings(APISettings):
    _FIELD_USER_SETTINGS = "_user_settings"
    _FIELD_PNC_SETTINGS = "PNC_SETTINGS"
    _FIELD_SIMULATION_PRESETS = "SIMULATION_PRESETS"
    _FIELD_OPTIMIZER = "OPTIMIZER"
    _FIELD_BOOTSTRAP = "BOOTSTRAP"
    _FIELD_HANDLER = "HANDLER"

    @property
    def user_settings(self) -> Dict[str, Any]:
        if not hasattr(self, self._FIELD_USER_SETTINGS):
            self._user_settings = getattr(settings, self._FIELD_PNC_SETTINGS, {})
        return self._user_settings

    def __getattr__(self, attr: str) -> Any:
        val = super().__getattr__(attr)
        self._validate(attribute=attr, value=val)
        return val

    def _validate(self, attribute: str, value: Any) -> None:
        if attribute in (self._FIELD_OPTIMIZER, self._FIELD_BOOTSTRAP):
            for k, v in self.defaults[attribute].items():
                value[k] = value.get(k, v)
        if attribute == self._FIELD_SIMULATION_PRESETS:
            for preset_name, preset_config in value.items():
                if self._FIELD_HANDLER not in preset_config:
                    raise PresetHandlerMissingError(preset_name=preset_name)
                for k, v in self.defaults[attribute].get(preset_name, {}).items():
                    preset_config[k] = preset_config.get(k, v)
                preset_config[self._FIELD_HANDLER] = perform_import(
                    preset_config[self._FIELD_HANDLER], self._FIELD_HANDLER
                )

    def __getitem__(self, attr: str) -> Any:
        return self.__getattr__(attr)


HANDLER = "HANDLER"
OPENING = "OPENING"
COUNT = "COUNT"
REGIONS = "REGIONS"
RADIAL_RANGE = "RADIAL_RANGE"
ANGULAR_RANGE = "ANGULAR_RANGE"
SIZE_RANGE = "SIZE_RANGE"
AXES = "AXES"
OPENINGS = "OPENINGS"
RESIDUAL_LAWS = "RESIDUAL_LAWS"
SIGMA = "SIGMA"

DEFAULTS = {
    "RESIDUAL_KIND": "riemannian",
    "OPTIMIZER": {
        "MAX_ITERS": 500,
        "TOL": 1e-10,
        "RESTARTS": 1,
        "SEED": 0,
    },
    "EPS_ALIGN": 1e-9,
    "EPS_APEX": 1e-12,
    "MAX_OPENING": pi / 2 - 1e-6,
    "FINAL_STAGE_GRID": 360,
    "EIGEN_RELATIVE_CUTOFF": 1e-12,
    "WORKERS": 1,
    "BOOTSTRAP": {
        "REPLICATES": 1000,
        "LEVEL": 0.90,
        "MAX_SKIPPED_FRACTION": 0.10,
    },
    "NOISE_MAX_RETRIES": 100,
    "REJECTION_MIN_ACCEPTANCE": 1e-4,
    "SIMULATION_PRESETS": {
        "fig3": {
            HANDLER: "nestedcones.backends.regions.ConeRegionSampler",
            OPENING: pi / 6,
            COUNT: 100,  # per region
            SIGMA: 0.0,
            REGIONS: (
                {RADIAL_RANGE: (1.0, 2.0), ANGULAR_RANGE: (0.0, pi)},
                {RADIAL_RANGE: (4.0, 5.0), ANGULAR_RANGE: (0.0, pi)},
                {RADIAL_RANGE: (4.0, 5.0), ANGULAR_RANGE: (pi, 2 * pi)},
            ),
        },
        "spiral": {
            HANDLER: "nestedcones.backends.spiral.SpiralSampler",
            OPENING: pi / 9,
            COUNT: 200,
            SIGMA: 0.0,
            RADIAL_RANGE: (2.0, 5.0),
            ANGULAR_RANGE: (pi, 8 * pi),
        },
        "table1": {
            HANDLER: "nestedcones.backends.generative.ModelSampler",
            COUNT: 1000,
            SIGMA: 0.0,
            AXES: (
                (0.5, 0.5, 0.5, 0.5),
                (3**-0.5, 3**-0.5, 3**-0.5),
                (2**-0.5, 2**-0.5),
            ),
            OPENINGS: (pi / 6, pi / 4),
            SIZE_RANGE: (10.0, 20.0),
            # one law per stage, stage 1 first
            RESIDUAL_LAWS: (
                {"sd": 0.3, "sd_per_size": 0.0, "bound": 0.0, "bound_per_size": pi / 6},
                {"sd": 1.0, "sd_per_size": 0.0, "bound": 0.0, "bound_per_size": pi / 4},
                {"sd": 0.0, "sd_per_size": pi / 3, "bound": 0.0, "bound_per_size": pi},
            ),
        },
    },
}

pnc_settings = PNCAPISettings(
    user_settings=None, defaults=DEFAULTS, import_strings=None
)
