import numpy as np
from concurrent.futures import ThreadPoolExecutor
from scipy.spatial import cKDTree
from typing import Callable, List, Optional, Sequence, Tuple

from nestedcones.backends.provider import get_sampler
from nestedcones.command.backfit import backfit_command, reconstruction_error
from nestedcones.command.fit import fit_command
from nestedcones.command.pca_fit_transform import (
    pca_fit_transform,
    pca_reconstruct,
    pca_variance_explained,
)
from nestedcones.command.pns_fit import pns_fit_command
from nestedcones.command.transform import variance_explained
from nestedcones.exceptions import ParameterRangeError
from nestedcones.geometry import column_sizes
from nestedcones.models import (
    ComparisonRow,
    OptimizerConfig,
    ReconstructionRequest,
    ScoreMatrix,
)
from nestedcones.settings import PNCAPISettings, pnc_settings


PNC = "pnc"
PNS = "pns"
PCA = "pca"
METHODS = (PNC, PNS, PCA)
COMPARISON_PRESET = "fig3"


def nearest_neighbor_confusion(
    scores: np.ndarray, labels: np.ndarray, first: int, second: int
) -> float:
    """
    Nearest-neighbour mislabel rate between two label groups, normalized by
    the chance rate of one half: 1.0 for indistinguishable groups, 0.0 for
    separated ones. The returned value is twice the raw rate, so 0.5 means a
    raw mislabel rate of 25%.
    """
    labels = np.asarray(labels)
    chosen = (labels == first) | (labels == second)
    points = np.asarray(scores, dtype=float)[chosen]
    group = labels[chosen]
    _distances, neighbours = cKDTree(points).query(points, k=2)
    mislabelled = group[neighbours[:, 1]] != group
    return float(mislabelled.mean() / 0.5)


def _retained_share(scores: ScoreMatrix, keep: int) -> float:
    if keep == 0:
        return 0.0
    return float(variance_explained(scores)[:keep].sum())


class BackfitComparisonCommand:
    def __init__(
        self, settings: PNCAPISettings, fitter: Callable, pns_fitter: Callable
    ) -> None:
        self._settings = settings
        self._fit = fitter
        self._pns_fit = pns_fitter

    def execute(
        self,
        data: np.ndarray,
        components: int,
        sigma: float,
        opening: float,
        seed: int = 0,
    ) -> List[ComparisonRow]:
        """
        Mean back-fitting distance and variance explained of each method at a
        component count; for the cone methods the components are the size
        followed by the leading scores.
        """
        data = np.asarray(data, dtype=float)
        rows = data.shape[0]
        if not 1 <= components <= rows:
            raise ParameterRangeError(
                name="components", value=components, bounds=f"[1, {rows}]"
            )
        keep = components - 1
        config = OptimizerConfig.from_settings(self._settings, seed=seed)
        sizes = column_sizes(data)

        model, scores = self._fit(data=data, config=config)
        pnc = backfit_command(
            request=ReconstructionRequest(
                scores=scores.scores, sizes=sizes, model=model, keep=keep
            )
        )

        pns_model, pns_scores = self._pns_fit(data=data, config=config)
        pns = backfit_command(
            request=ReconstructionRequest(
                scores=pns_scores.scores,
                sizes=np.ones_like(sizes),
                model=pns_model,
                keep=keep,
            )
        )
        pns = pns * sizes

        pca_model, pca_scores = pca_fit_transform(data, components)
        pca = pca_reconstruct(pca_model, pca_scores)

        def row(method: str, reconstruction: np.ndarray, share: float) -> ComparisonRow:
            return ComparisonRow(
                method=method,
                components=components,
                alpha=opening,
                sigma=sigma,
                mean_backfit_distance=float(
                    reconstruction_error(data, reconstruction).mean()
                ),
                variance_explained=share,
            )

        return [
            row(PNC, pnc, _retained_share(scores, keep)),
            row(PNS, pns, _retained_share(pns_scores, keep)),
            row(PCA, pca, pca_variance_explained(pca_model)),
        ]


backfit_comparison_command = BackfitComparisonCommand(
    settings=pnc_settings, fitter=fit_command, pns_fitter=pns_fit_command
).execute


class CompareMethodsCommand:
    def __init__(self, settings: PNCAPISettings, comparer: Callable) -> None:
        self._settings = settings
        self._compare = comparer

    def execute(
        self,
        alphas: Sequence[float],
        sigmas: Sequence[float],
        components: int,
        reps: int = 1,
        seed: int = 0,
        count: Optional[int] = None,
    ) -> List[ComparisonRow]:
        if reps < 1:
            raise ParameterRangeError(name="reps", value=reps, bounds="[1, inf)")
        sampler = get_sampler(name=COMPARISON_PRESET)
        cells = [(alpha, sigma) for alpha in alphas for sigma in sigmas]

        def run_cell(cell: Tuple[int, Tuple[float, float]]) -> List[ComparisonRow]:
            index, (alpha, sigma) = cell
            outcomes = []
            for rep in range(reps):
                rep_seed = int(
                    np.random.SeedSequence([seed, index, rep]).generate_state(1)[0]
                )
                dataset = sampler.generate(
                    count=count, opening=alpha, sigma=sigma, seed=rep_seed
                )
                outcomes.append(
                    self._compare(
                        data=dataset.data,
                        components=components,
                        sigma=sigma,
                        opening=alpha,
                        seed=rep_seed,
                    )
                )
            return [
                self._summarize([rows[position] for rows in outcomes])
                for position in range(len(METHODS))
            ]

        with ThreadPoolExecutor(max_workers=self._settings.WORKERS) as executor:
            results = list(executor.map(run_cell, enumerate(cells)))
        return [row for cell_rows in results for row in cell_rows]

    @staticmethod
    def _summarize(rows: List[ComparisonRow]) -> ComparisonRow:
        distances = np.array([row.mean_backfit_distance for row in rows])
        ci_lo = ci_hi = None
        if len(rows) > 1:
            ci_lo, ci_hi = (float(v) for v in np.quantile(distances, [0.05, 0.95]))
        first = rows[0]
        return ComparisonRow(
            method=first.method,
            components=first.components,
            alpha=first.alpha,
            sigma=first.sigma,
            mean_backfit_distance=float(distances.mean()),
            variance_explained=float(np.mean([row.variance_explained for row in rows])),
            ci_lo=ci_lo,
            ci_hi=ci_hi,
        )


compare_methods_command = CompareMethodsCommand(
    settings=pnc_settings, comparer=backfit_comparison_command
).execute
