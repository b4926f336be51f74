from django.core.management.base import CommandParser

import pandas as pd
from attrs import asdict
from pathlib import Path
from typing import Any

from nestedcones.command.backfit_comparison import compare_methods_command
from nestedcones.io import parse_angle_list, parse_float_list, write_frame_csv
from nestedcones.management.base import PNCCommand


CI_COLUMNS = ["ci_lo", "ci_hi"]


class Command(PNCCommand):
    help = "Back-fitting distance and variance explained of PNC, PNS and PCA."

    def add_arguments(self, parser: CommandParser) -> None:
        super().add_arguments(parser)
        parser.add_argument("--alphas", type=parse_angle_list, default="pi/6")
        parser.add_argument("--sigmas", type=parse_float_list, default="0.1")
        parser.add_argument("--components", type=int, default=2)
        parser.add_argument("--reps", type=int, default=1)
        parser.add_argument("--n", type=int, default=None)
        parser.add_argument("--out", default="comparison.csv")

    def run(self, **options: Any):
        rows = compare_methods_command(
            alphas=options["alphas"],
            sigmas=options["sigmas"],
            components=options["components"],
            reps=options["reps"],
            seed=options["seed"],
            count=options["n"],
        )
        frame = pd.DataFrame([asdict(row) for row in rows])
        if options["reps"] == 1:
            frame = frame.drop(columns=CI_COLUMNS)
        out = Path(options["out"])
        write_frame_csv(out, frame)
        self.stdout.write(f"Wrote {len(frame)} comparison rows to {out}.")
        return [], [out]
