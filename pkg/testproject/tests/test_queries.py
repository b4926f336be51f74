import pytest

from nestedcones.exceptions import UnknownPresetError
from nestedcones.query.get_preset_by_name import (
    GetPresetByNameQuery,
    get_preset_by_name_query,
)
from nestedcones.settings import DEFAULTS, HANDLER, PNCAPISettings


def test_get_non_existing_preset_by_name():
    with pytest.raises(UnknownPresetError):
        get_preset_by_name_query(name="not_existing")


def test_get_preset_by_name():
    preset = get_preset_by_name_query(name="fig3")
    assert len(preset["REGIONS"]) == 3
    assert preset[HANDLER].__name__ == "ConeRegionSampler"


def test_get_preset_from_custom_settings():
    settings = PNCAPISettings(
        user_settings={
            "SIMULATION_PRESETS": {
                "narrow": {
                    HANDLER: "nestedcones.backends.spiral.SpiralSampler",
                    "OPENING": 0.1,
                    "COUNT": 5,
                    "RADIAL_RANGE": (1.0, 2.0),
                    "ANGULAR_RANGE": (0.0, 1.0),
                }
            }
        },
        defaults=DEFAULTS,
    )
    query = GetPresetByNameQuery(settings=settings).execute
    assert query(name="narrow")["COUNT"] == 5
    with pytest.raises(UnknownPresetError):
        query(name="fig3")
