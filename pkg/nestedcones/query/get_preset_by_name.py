from typing import Any, Dict

from nestedcones.exceptions import UnknownPresetError
from nestedcones.settings import PNCAPISettings, pnc_settings


class GetPresetByNameQuery:
    def __init__(self, settings: PNCAPISettings) -> None:
        self._settings = settings

    def execute(self, name: str) -> Dict[str, Any]:
        presets = self._settings.SIMULATION_PRESETS
        try:
            return presets[name]
        except KeyError as cause:
            raise UnknownPresetError(name=name, available=presets.keys()) from cause


get_preset_by_name_query = GetPresetByNameQuery(settings=pnc_settings).execute
