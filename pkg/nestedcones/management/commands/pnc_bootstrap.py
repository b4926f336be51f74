from django.core.management.base import CommandParser

import json
import pandas as pd
from pathlib import Path
from typing import Any

from nestedcones.command.bootstrap import bootstrap_command, ci_width_study
from nestedcones.exceptions import EmptyInputError
from nestedcones.io import (
    parse_float_list,
    read_matrix_csv,
    write_frame_csv,
    write_json,
)
from nestedcones.management.base import PNCCommand
from nestedcones.models import OptimizerConfig, ResidualKind
from nestedcones.settings import pnc_settings


class Command(PNCCommand):
    help = (
        "Percentile bootstrap intervals for the fitted parameters of a CSV file, "
        "or mean interval widths over a grid of sample sizes drawn from a preset."
    )

    def add_arguments(self, parser: CommandParser) -> None:
        super().add_arguments(parser)
        parser.add_argument("input_csv", nargs="?", default=None)
        parser.add_argument("--B", dest="replicates", type=int, default=None)
        parser.add_argument("--level", type=float, default=None)
        parser.add_argument(
            "--residual",
            choices=[kind.value for kind in ResidualKind],
            default=None,
        )
        parser.add_argument("--max-iters", type=int, default=None)
        parser.add_argument("--preset", default=None)
        parser.add_argument("--n-grid", default=None, help="e.g. 100,400,1600")
        parser.add_argument("--repetitions", type=int, default=1)
        parser.add_argument("--out", default="bootstrap.csv")

    def run(self, **options: Any):
        config = OptimizerConfig.from_settings(
            pnc_settings, seed=options["seed"], max_iters=options["max_iters"]
        )
        if options["preset"]:
            return self._study(config, **options)
        if not options["input_csv"]:
            raise EmptyInputError(what="input CSV (or --preset with --n-grid)")

        data, _header, _labels = read_matrix_csv(options["input_csv"])
        summary = bootstrap_command(
            data=data,
            replicates=options["replicates"],
            level=options["level"],
            kind=options["residual"],
            config=config,
            seed=options["seed"],
        )
        out = Path(options["out"])
        metadata_path = out.with_name(f"{out.stem}_metadata.json")
        write_frame_csv(
            out,
            pd.DataFrame(
                {
                    "parameter": list(summary.names),
                    "estimate": summary.estimates,
                    "lower": summary.lower,
                    "upper": summary.upper,
                    "normalized_width": summary.normalized_widths,
                }
            ),
        )
        write_json(
            metadata_path, json.dumps(summary.metadata(), indent=2, sort_keys=True)
        )
        self.stdout.write(
            f"Mean normalized interval width {summary.mean_normalized_width:.6g} "
            f"over {summary.replicates - summary.skipped} replicates."
        )
        return [options["input_csv"]], [out, metadata_path]

    def _study(self, config: OptimizerConfig, **options: Any):
        if not options["n_grid"]:
            raise EmptyInputError(what="--n-grid for --preset")
        sample_sizes = [int(n) for n in parse_float_list(options["n_grid"])]
        study = ci_width_study(
            preset=options["preset"],
            sample_sizes=sample_sizes,
            repetitions=options["repetitions"],
            replicates=options["replicates"],
            level=options["level"],
            seed=options["seed"],
            config=config,
        )
        out = Path(options["out"])
        runs_path = out.with_name(f"{out.stem}_runs.csv")
        write_frame_csv(
            out,
            pd.DataFrame(
                {
                    "n": list(study.pooled),
                    "mean_normalized_width": list(study.pooled.values()),
                }
            ),
        )
        write_frame_csv(
            runs_path,
            pd.DataFrame(
                [
                    {"n": n, "run": run, "mean_normalized_width": width}
                    for n, widths in study.per_run.items()
                    for run, width in enumerate(widths, start=1)
                ]
            ),
        )
        self.stdout.write(
            "Mean normalized widths: "
            + ", ".join(f"n={n}: {w:.6g}" for n, w in study.pooled.items())
        )
        return [], [out, runs_path]
