import json
import numpy as np
import pandas as pd
import re
from attrs import asdict
from fractions import Fraction
from math import pi
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from nestedcones.exceptions import DataParseError, EmptyInputError, ParameterRangeError
from nestedcones.models import RunManifest


LABEL_COLUMN = "label"
PathLike = Union[str, Path]

_ANGLE_PATTERN = re.compile(
    r"^\s*(?P<sign>[-+]?)\s*(?P<numerator>\d+(?:\.\d+)?)?\s*\*?\s*pi"
    r"\s*(?:/\s*(?P<denominator>\d+(?:\.\d+)?))?\s*$"
)
_LINE_PATTERN = re.compile(r"\bline (?P<line>\d+)")


def parse_angle(token: Union[str, float]) -> float:
    """
    Radians, either plain (``0.5236``) or as a multiple of pi (``pi/6``,
    ``2pi/3``, ``-3*pi/4``).
    """
    if not isinstance(token, str):
        return float(token)
    match = _ANGLE_PATTERN.match(token.lower())
    if match is None:
        try:
            return float(token)
        except ValueError as cause:
            raise ParameterRangeError(
                name="angle", value=token, bounds="radians or a multiple of pi"
            ) from cause
    factor = Fraction(match.group("numerator") or 1) / Fraction(
        match.group("denominator") or 1
    )
    if match.group("sign") == "-":
        factor = -factor
    return float(factor) * pi


def parse_angle_list(text: str) -> List[float]:
    return [parse_angle(token) for token in text.split(",") if token.strip()]


def parse_float_list(text: str) -> List[float]:
    try:
        return [float(token) for token in text.split(",") if token.strip()]
    except ValueError as cause:
        raise ParameterRangeError(
            name="list", value=text, bounds="comma separated numbers"
        ) from cause


def parse_sweep(text: str) -> Tuple[int, float, float, int]:
    try:
        column, low, high, steps = text.split(":")
        return int(column), float(low), float(high), int(steps)
    except ValueError as cause:
        raise ParameterRangeError(
            name="sweep", value=text, bounds="column:lo:hi:steps"
        ) from cause


def read_matrix_csv(
    path: PathLike,
) -> Tuple[np.ndarray, List[str], Optional[np.ndarray]]:
    """
    Reads observations stored one per row and returns them as columns of a
    (variables x observations) matrix, together with the variable names and
    the trailing label column when present.
    """
    try:
        frame = pd.read_csv(path, encoding="utf-8", dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError as cause:
        raise EmptyInputError(what=f"CSV file {path}") from cause
    except pd.errors.ParserError as cause:
        reason = str(cause).strip().splitlines()[-1]
        line = _LINE_PATTERN.search(reason)
        # the header is line 1
        row = int(line.group("line")) - 1 if line else None
        raise DataParseError(row=row, reason=reason) from cause
    except UnicodeDecodeError as cause:
        raise DataParseError(
            reason=f"{path} is not UTF-8 text ({cause.reason})"
        ) from cause
    labels = None
    if LABEL_COLUMN in frame.columns:
        labels = frame.pop(LABEL_COLUMN).to_numpy()
    if frame.empty or not len(frame.columns):
        raise EmptyInputError(what=f"CSV file {path}")
    numeric = frame.apply(pd.to_numeric, errors="coerce")
    invalid = numeric.isna().to_numpy()
    if invalid.any():
        row, column = (int(index) for index in np.argwhere(invalid)[0])
        raise DataParseError(
            row=row + 1,
            column=str(frame.columns[column]),
            value=frame.iat[row, column],
        )
    return numeric.to_numpy(dtype=float).T, list(frame.columns), labels


def write_matrix_csv(
    path: PathLike,
    data: np.ndarray,
    header: Sequence[str],
    labels: Optional[np.ndarray] = None,
) -> None:
    """
    Writes the columns of ``data`` as rows; floats use the shortest
    representation that round-trips.
    """
    frame = pd.DataFrame(np.asarray(data, dtype=float).T, columns=list(header))
    if labels is not None:
        frame[LABEL_COLUMN] = labels
    frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")


def write_frame_csv(path: PathLike, frame: pd.DataFrame) -> None:
    frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")


def ambient_header(rows: int) -> List[str]:
    return [f"x{index}" for index in range(1, rows + 1)]


def manifest_path(primary_output: PathLike) -> Path:
    primary_output = Path(primary_output)
    return primary_output.with_name(primary_output.name + ".manifest.json")


def write_manifest(primary_output: PathLike, manifest: RunManifest) -> Path:
    path = manifest_path(primary_output)
    path.write_text(
        json.dumps(asdict(manifest), indent=2, sort_keys=True, default=str) + "\n",
        encoding="utf-8",
    )
    return path


def write_json(path: PathLike, text: str) -> None:
    Path(path).write_text(text + "\n", encoding="utf-8")
