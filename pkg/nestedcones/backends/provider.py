from nestedcones.backends.base import AbstractSampler
from nestedcones.query.get_preset_by_name import get_preset_by_name_query
from nestedcones.settings import HANDLER


def get_sampler(name: str) -> AbstractSampler:
    conf = get_preset_by_name_query(name=name)
    sampler = conf[HANDLER]
    return sampler(config=conf)
