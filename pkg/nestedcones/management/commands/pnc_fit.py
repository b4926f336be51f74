from django.core.management.base import CommandParser

import numpy as np
import pandas as pd
from pathlib import Path
from typing import Any

from nestedcones.command.fast_fit import fast_fit_command
from nestedcones.command.fit import fit_command
from nestedcones.command.pca_transform import apply_pca_transform
from nestedcones.command.transform import (
    polar_scores,
    reduce_to_final_stage_command,
    variance_explained,
)
from nestedcones.exceptions import ApexError
from nestedcones.geometry import apex_columns
from nestedcones.io import read_matrix_csv, write_frame_csv, write_json
from nestedcones.management.base import PNCCommand
from nestedcones.models import OptimizerConfig, ResidualKind
from nestedcones.serializers import fast_model_to_json, model_to_json
from nestedcones.settings import pnc_settings


class Command(PNCCommand):
    help = "Fits principal nested cones to the observations of a CSV file."

    def add_arguments(self, parser: CommandParser) -> None:
        super().add_arguments(parser)
        parser.add_argument("input_csv")
        parser.add_argument("--fast", type=int, default=None, metavar="P")
        parser.add_argument(
            "--residual",
            choices=[kind.value for kind in ResidualKind],
            default=None,
        )
        parser.add_argument("--max-iters", type=int, default=None)
        parser.add_argument("--out", default="model.json")
        parser.add_argument("--scores", default="scores.csv")

    def run(self, **options: Any):
        data, _header, _labels = read_matrix_csv(options["input_csv"])
        apex = apex_columns(data, pnc_settings.EPS_APEX)
        if apex.size:
            raise ApexError(columns=(apex + 1).tolist())
        config = OptimizerConfig.from_settings(
            pnc_settings, seed=options["seed"], max_iters=options["max_iters"]
        )
        kind = options["residual"]

        if options["fast"] is not None:
            model, scores = fast_fit_command(
                data=data, p=options["fast"], kind=kind, config=config
            )
            inner, reduced = model.inner, apply_pca_transform(model.pca, data)
            payload = fast_model_to_json(model)
        else:
            model, scores = fit_command(data=data, kind=kind, config=config)
            inner, reduced = model, data
            payload = model_to_json(model)

        out = Path(options["out"])
        scores_path = Path(options["scores"])
        polar_path = scores_path.with_name(f"{scores_path.stem}_polar.csv")
        variance_path = scores_path.with_name(f"{scores_path.stem}_variance.csv")

        write_json(out, payload)
        frame = pd.DataFrame(
            np.asarray(scores.scores),
            columns=[f"score_{j}" for j in range(1, scores.d + 1)],
        )
        frame["size"] = np.asarray(scores.sizes)
        write_frame_csv(scores_path, frame)

        polar = polar_scores(inner, reduce_to_final_stage_command(inner, reduced))
        write_frame_csv(
            polar_path,
            pd.DataFrame({"sx": np.asarray(polar.sx), "sy": np.asarray(polar.sy)}),
        )
        shares = variance_explained(scores)
        write_frame_csv(
            variance_path,
            pd.DataFrame(
                {
                    "component": np.arange(1, scores.d + 1),
                    "variance_explained": shares,
                    "cumulative": np.cumsum(shares),
                }
            ),
        )
        self.stdout.write(
            f"Fitted {inner.d} stages to {scores.n} observations; "
            f"model written to {out}."
        )
        return [options["input_csv"]], [out, scores_path, polar_path, variance_path]
