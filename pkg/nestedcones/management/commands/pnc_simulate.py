from django.core.management.base import CommandParser

import numpy as np
from attrs import evolve
from pathlib import Path
from typing import Any

from nestedcones.backends.base import NOISE_STREAM
from nestedcones.backends.generative import sample_from_model
from nestedcones.backends.provider import get_sampler
from nestedcones.command.add_ambient_noise import add_ambient_noise_command
from nestedcones.io import ambient_header, parse_angle, write_matrix_csv
from nestedcones.management.base import PNCCommand
from nestedcones.models import SampledDataset
from nestedcones.serializers import generator_spec_from_json


class Command(PNCCommand):
    help = "Draws a synthetic dataset from a preset or a generator spec JSON file."
    default_seed = None

    def add_arguments(self, parser: CommandParser) -> None:
        super().add_arguments(parser)
        parser.add_argument("source", help="Preset name or path to a spec JSON file.")
        parser.add_argument("--alpha", type=parse_angle, default=None)
        parser.add_argument("--sigma", type=float, default=None)
        parser.add_argument("--n", type=int, default=None)
        parser.add_argument("--out", default="simulated.csv")

    def run(self, **options: Any):
        source = options["source"]
        if source.endswith(".json") or Path(source).is_file():
            dataset = self._from_spec(**options)
        else:
            dataset = get_sampler(name=source).generate(
                count=options["n"],
                opening=options["alpha"],
                sigma=options["sigma"],
                seed=options["seed"] or 0,
            )
        out = Path(options["out"])
        write_matrix_csv(
            out,
            dataset.data,
            ambient_header(dataset.data.shape[0]),
            labels=dataset.labels,
        )
        self.stdout.write(f"Wrote {dataset.data.shape[1]} observations to {out}.")
        inputs = [source] if Path(source).is_file() else []
        return inputs, [out]

    @staticmethod
    def _from_spec(**options: Any) -> SampledDataset:
        spec = generator_spec_from_json(
            Path(options["source"]).read_text(encoding="utf-8")
        )
        overrides = {}
        if options["n"] is not None:
            overrides["count"] = options["n"]
        if options["seed"] is not None:
            overrides["seed"] = options["seed"]
        if options["alpha"] is not None:
            overrides["openings"] = (options["alpha"],) + spec.openings[1:]
        spec = evolve(spec, **overrides)
        data = sample_from_model(spec)
        if options["sigma"]:
            data = add_ambient_noise_command(
                data=data, sigma=options["sigma"], seed=[spec.seed, NOISE_STREAM]
            )
        return SampledDataset(data=np.asarray(data))
