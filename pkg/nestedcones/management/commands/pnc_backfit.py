from django.core.management.base import CommandParser

import numpy as np
from pathlib import Path
from typing import Any, Optional, Tuple

from nestedcones.command.backfit import backfit_command, score_path
from nestedcones.command.pca_transform import pca_inverse
from nestedcones.exceptions import DimensionMismatchError, EmptyInputError
from nestedcones.io import (
    ambient_header,
    parse_sweep,
    read_matrix_csv,
    write_matrix_csv,
)
from nestedcones.management.base import PNCCommand
from nestedcones.models import FastPncModel, ReconstructionRequest
from nestedcones.serializers import any_model_from_json


SIZE_COLUMN = "size"
SCORE_PREFIX = "score_"


def read_scores_csv(path: str) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """
    Returns the n x d score matrix and the size column when the file has one.
    """
    matrix, header, _labels = read_matrix_csv(path)
    columns = [i for i, name in enumerate(header) if name.startswith(SCORE_PREFIX)]
    if not columns:
        raise EmptyInputError(what=f"score columns in {path}")
    sizes = None
    if SIZE_COLUMN in header:
        sizes = matrix[header.index(SIZE_COLUMN)]
    return matrix[columns].T, sizes


def read_sizes_csv(path: str) -> np.ndarray:
    matrix, header, _labels = read_matrix_csv(path)
    if SIZE_COLUMN in header:
        return matrix[header.index(SIZE_COLUMN)]
    if matrix.shape[0] != 1:
        raise DimensionMismatchError(
            what=f"columns in {path}", expected=1, actual=matrix.shape[0]
        )
    return matrix[0]


class Command(PNCCommand):
    help = "Reconstructs observations from scores, or traces a single-score path."

    def add_arguments(self, parser: CommandParser) -> None:
        super().add_arguments(parser)
        parser.add_argument("model_json")
        parser.add_argument("scores_csv", nargs="?", default=None)
        parser.add_argument("--keep", type=int, default=None)
        parser.add_argument("--sizes", default=None)
        parser.add_argument("--sweep", default=None, metavar="COLUMN:LO:HI:STEPS")
        parser.add_argument("--out", default="recon.csv")

    def run(self, **options: Any):
        inputs = [options["model_json"]]
        model = any_model_from_json(
            Path(options["model_json"]).read_text(encoding="utf-8")
        )
        inner = model.inner if isinstance(model, FastPncModel) else model

        scores = sizes = None
        if options["scores_csv"]:
            inputs.append(options["scores_csv"])
            scores, sizes = read_scores_csv(options["scores_csv"])
        if options["sizes"]:
            inputs.append(options["sizes"])
            sizes = read_sizes_csv(options["sizes"])

        if options["sweep"]:
            column, low, high, steps = parse_sweep(options["sweep"])
            size = float(np.mean(sizes)) if sizes is not None else 1.0
            reconstruction = score_path(
                inner, size, column, np.linspace(low, high, steps)
            )
        else:
            if scores is None:
                raise EmptyInputError(what="scores CSV")
            if sizes is None:
                raise EmptyInputError(what="sizes (no size column and no --sizes)")
            request = ReconstructionRequest(
                scores=scores, sizes=sizes, model=inner, keep=options["keep"]
            )
            reconstruction = backfit_command(request=request)

        if isinstance(model, FastPncModel):
            reconstruction = pca_inverse(model.pca, reconstruction)
        out = Path(options["out"])
        write_matrix_csv(
            out, reconstruction, ambient_header(reconstruction.shape[0])
        )
        self.stdout.write(
            f"Wrote {reconstruction.shape[1]} reconstructed observations to {out}."
        )
        return inputs, [out]
