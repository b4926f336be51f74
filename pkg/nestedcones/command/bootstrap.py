import logging
import numpy as np
from concurrent.futures import ThreadPoolExecutor
from math import pi
from typing import Callable, List, Optional, Sequence, Tuple

from nestedcones.backends.provider import get_sampler
from nestedcones.command.fit import fit_command
from nestedcones.exceptions import (
    BootstrapDegenerateError,
    ParameterRangeError,
    PNCValidationError,
)
from nestedcones.hyperspherical import to_hyperspherical
from nestedcones.models import (
    BootstrapSummary,
    CiWidthStudy,
    OptimizerConfig,
    PncModel,
    ResidualKind,
)
from nestedcones.settings import PNCAPISettings, pnc_settings


def parameter_names(model: PncModel) -> Tuple[str, ...]:
    names = []
    for k, stage in enumerate(model.stages, start=1):
        names.extend(f"theta_{k}_{j}" for j in range(1, stage.dim))
        if k < model.d:
            names.append(f"alpha_{k}")
    return tuple(names)


def parameter_ranges(model: PncModel) -> np.ndarray:
    ranges = []
    for k, stage in enumerate(model.stages, start=1):
        ranges.extend(to_hyperspherical(stage.axis).ranges)
        if k < model.d:
            ranges.append(pi / 2)
    return np.array(ranges)


def parameter_vector(model: PncModel) -> np.ndarray:
    values = []
    for k, stage in enumerate(model.stages, start=1):
        values.extend(to_hyperspherical(stage.axis).angles)
        if k < model.d:
            values.append(stage.opening)
    return np.array(values)


def _last_angle_positions(model: PncModel) -> List[int]:
    positions = []
    offset = 0
    for k, stage in enumerate(model.stages, start=1):
        offset += stage.dim - 1
        positions.append(offset - 1)
        if k < model.d:
            offset += 1
    return positions


def align_to_estimate(
    replicate: PncModel, values: np.ndarray, estimate: PncModel, estimates: np.ndarray
) -> np.ndarray:
    """
    Puts a replicate's parameters on the branch of the point estimate: a final
    axis pointing away from the estimate is turned by pi, and every periodic
    angle is unwrapped to within pi of its estimate.
    """
    values = values.copy()
    positions = _last_angle_positions(estimate)
    if replicate.stages[-1].axis @ estimate.stages[-1].axis < 0:
        values[positions[-1]] += pi
    for position in positions:
        offset = (values[position] - estimates[position] + pi) % (2 * pi) - pi
        values[position] = estimates[position] + offset
    return values


class BootstrapCommand:
    def __init__(self, settings: PNCAPISettings, fitter: Callable) -> None:
        self._settings = settings
        self._fit = fitter

    def execute(
        self,
        data: np.ndarray,
        replicates: Optional[int] = None,
        level: Optional[float] = None,
        kind: Optional[ResidualKind] = None,
        config: Optional[OptimizerConfig] = None,
        seed: int = 0,
    ) -> BootstrapSummary:
        data = np.asarray(data, dtype=float)
        bootstrap_settings = self._settings.BOOTSTRAP
        replicates = replicates or bootstrap_settings["REPLICATES"]
        level = level or bootstrap_settings["LEVEL"]
        config = config or OptimizerConfig.from_settings(self._settings)
        if replicates < 2:
            raise ParameterRangeError(name="B", value=replicates, bounds="[2, inf)")
        if not 0 < level < 1:
            raise ParameterRangeError(name="level", value=level, bounds="(0, 1)")
        n = data.shape[1]
        if n < data.shape[0] + 1:
            raise ParameterRangeError(
                name="n", value=n, bounds=f"[{data.shape[0] + 1}, inf)"
            )

        estimate, _scores = self._fit(data=data, kind=kind, config=config)
        estimates = parameter_vector(estimate)
        distinct = self._distinct_columns(data)

        def replicate(index: int) -> Optional[np.ndarray]:
            rng = np.random.default_rng([seed, index])
            resample = data[:, rng.integers(0, n, size=n)]
            if distinct >= 2 and self._distinct_columns(resample) < 2:
                logging.warning("Skipping degenerate bootstrap replicate %d.", index)
                return None
            try:
                model, _replicate_scores = self._fit(
                    data=resample, kind=kind, config=config
                )
            except PNCValidationError as cause:
                logging.warning("Skipping bootstrap replicate %d: %s", index, cause)
                return None
            return align_to_estimate(
                model, parameter_vector(model), estimate, estimates
            )

        with ThreadPoolExecutor(max_workers=self._settings.WORKERS) as executor:
            results = list(executor.map(replicate, range(replicates)))

        draws = [result for result in results if result is not None]
        skipped = replicates - len(draws)
        if skipped > bootstrap_settings["MAX_SKIPPED_FRACTION"] * replicates:
            raise BootstrapDegenerateError(skipped=skipped, replicates=replicates)
        draws = np.vstack(draws)
        lower = np.quantile(draws, (1 - level) / 2, axis=0)
        upper = np.quantile(draws, (1 + level) / 2, axis=0)
        names = parameter_names(estimate)
        outside = (estimates < lower) | (estimates > upper)
        flagged = tuple(name for name, out in zip(names, outside) if out)
        if flagged:
            logging.warning(
                "Percentile intervals exclude the estimate for: %s", ", ".join(flagged)
            )
        widths = np.clip((upper - lower) / parameter_ranges(estimate), 0.0, 1.0)
        return BootstrapSummary(
            names=names,
            estimates=estimates,
            lower=lower,
            upper=upper,
            normalized_widths=widths,
            replicates=replicates,
            level=level,
            seed=seed,
            skipped=skipped,
            flagged=flagged,
        )

    @staticmethod
    def _distinct_columns(data: np.ndarray) -> int:
        return np.unique(data, axis=1).shape[1]


bootstrap_command = BootstrapCommand(settings=pnc_settings, fitter=fit_command).execute


def ci_width_study(
    preset: str,
    sample_sizes: Sequence[int],
    repetitions: int = 1,
    replicates: Optional[int] = None,
    level: Optional[float] = None,
    seed: int = 0,
    config: Optional[OptimizerConfig] = None,
) -> CiWidthStudy:
    """
    Mean normalized interval widths per sample size, both per outer run and
    pooled over the runs.
    """
    sampler = get_sampler(name=preset)
    per_run = {}
    for n in sample_sizes:
        widths = []
        for run in range(repetitions):
            run_seed = int(np.random.SeedSequence([seed, n, run]).generate_state(1)[0])
            dataset = sampler.generate(count=n, seed=run_seed)
            summary = bootstrap_command(
                data=dataset.data,
                replicates=replicates,
                level=level,
                config=config,
                seed=run_seed,
            )
            widths.append(summary.mean_normalized_width)
        per_run[n] = tuple(widths)
    pooled = {n: float(np.mean(widths)) for n, widths in per_run.items()}
    return CiWidthStudy(per_run=per_run, pooled=pooled)
