import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from typing import Callable, Sequence

import numpy as np
from scipy.signal import find_peaks
from scipy.stats import gaussian_kde

from ..configuration import (ESTIMATOR_CDF, ITERATIVE, MOMENT_RELERR, MP_DENSITY, TABLE1, ExperimentSpec)
from ..csv_specific.base import (BaseCSVTable, CommentLine)
from ..csv_specific.declarations import ProvenanceDeclaration
from ..csv_specific.documents import CSVDocument
from ..errors import (InvalidConfigError, NotIdentifiableError, WorkerFailure)
from ..estimators.algebraic import (classical_from_moments, shifted_gram_moments)
from ..estimators.base import (CLASSICAL, ML, MMSE, PowerEstimate)
from ..estimators.dispatch import estimate
from ..estimators.iterative import (iterative_mmse, recovered_moments)
from ..freeprob.marchenko_pastur import MarchenkoPasturLaw
from ..rendering import (render, save_to_file)
from ..simulation.received import (synthesize, true_hph_moments)
from ..spectral.moments import accumulate
from ..theory.covariance import (NoiseCovariance, noise_covariance)
from ..utils import (derive_trial_seed, sigma2_to_snr_db)

logger = logging.getLogger(__name__)

RISE_BANDWIDTH: float = 0.15
RISE_PROMINENCE: float = 0.1


def empirical_cdf(values: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """Sorted sample and the empirical CDF value i/n at each sorted point."""
    ordered: np.ndarray = np.sort(np.asarray(values, dtype=float))
    return ordered, np.arange(1, len(ordered) + 1) / len(ordered)


def rise_regions(values: Sequence[float], prominence: float = RISE_PROMINENCE, points: int = 1024) -> np.ndarray:
    """
    Locations where the empirical CDF rises steeply.

    A rise region of the CDF is a mode of the sample density. Modes are the peaks of a
    Gaussian kernel density estimate (bandwidth 0.15 sample standard deviations) whose
    prominence reaches ``prominence`` times the highest density value.

    :return: Mode locations, ascending.
    """
    sample: np.ndarray = np.asarray(values, dtype=float)
    sample = sample[np.isfinite(sample)]
    if len(sample) < 2 or np.ptp(sample) == 0:
        return np.unique(sample)
    kde = gaussian_kde(sample, bw_method=RISE_BANDWIDTH)
    padding: float = 3.0 * float(np.sqrt(kde.covariance[0, 0]))
    grid: np.ndarray = np.linspace(sample.min() - padding, sample.max() + padding, points)
    density: np.ndarray = kde(grid)
    peaks, _ = find_peaks(density, prominence=prominence * density.max())
    return grid[peaks]


def count_rise_regions(values: Sequence[float], prominence: float = RISE_PROMINENCE) -> int:
    return len(rise_regions(values, prominence=prominence))


def equal_power_groups(values: Sequence[float], M: int) -> list[tuple[float, int]]:
    """
    Read how many stations share each detected power.

    Samples are assigned to the nearest rise region; a region holding a fraction r/M of the
    sample marks r stations of that power.

    :return: (power, station count) pairs, descending in power.
    """
    sample: np.ndarray = np.asarray(values, dtype=float)
    sample = sample[np.isfinite(sample)]
    modes: np.ndarray = rise_regions(sample)
    if len(modes) == 0:
        return []
    nearest: np.ndarray = np.argmin(np.abs(sample[:, None] - modes[None, :]), axis=1)
    counts: np.ndarray = np.bincount(nearest, minlength=len(modes))
    groups = [(float(mode), int(round(count / len(sample) * M))) for mode, count in zip(modes, counts)]
    return sorted((group for group in groups if group[1] > 0), reverse=True)


def run_trials(job: Callable, arguments: list, workers: int) -> list:
    """
    Run independent trial jobs and return their results in argument order.

    Results are folded in trial order whatever the scheduling, so the output does not depend
    on the number of workers.

    :raises WorkerFailure: On the first failing trial, carrying the results before it.
    """
    results: list = []
    if workers <= 1:
        for index, argument in enumerate(arguments):
            try:
                results.append(job(argument))
            except Exception as error:
                raise WorkerFailure(f"trial {index} failed: {error}", results) from error
        return results
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(job, argument) for argument in arguments]
        for index, future in enumerate(futures):
            try:
                results.append(future.result())
            except Exception as error:
                for pending in futures[index + 1:]:
                    pending.cancel()
                raise WorkerFailure(f"trial {index} failed: {error}", results) from error
    return results


def _table1_trial(job: tuple[ExperimentSpec, int, int]) -> tuple:
    spec, L, trial_seed = job
    scenario = replace(spec.scenario, L=L)
    cfg = spec.estimator_config
    K: int = cfg.resolve_K(scenario.M)
    block = synthesize(scenario, trial_seed)
    classical: PowerEstimate = classical_from_moments(
        shifted_gram_moments(block.Y, scenario.sigma2, K), scenario.M, scenario.N, cfg
    )
    oracle: PowerEstimate = classical_from_moments(
        true_hph_moments(block.channels, scenario.powers, K), scenario.M, scenario.N, cfg
    )
    return classical.powers, classical.squared_error(scenario.powers), classical.fallback, \
        oracle.powers, oracle.squared_error(scenario.powers)


def _moment_relerr_trial(job: tuple[ExperimentSpec, int]) -> np.ndarray:
    spec, trial_seed = job
    scenario = spec.scenario
    K: int = spec.estimator_config.resolve_K(scenario.M)
    block = synthesize(scenario, trial_seed)
    d: np.ndarray = recovered_moments(block, K).as_array()
    nu: np.ndarray = true_hph_moments(block.channels, scenario.powers, K).as_array()
    return np.abs(d - nu) / np.abs(nu)


def _estimator_cdf_trial(job: tuple[ExperimentSpec, tuple[int, ...], NoiseCovariance | None]) -> tuple:
    spec, trial_seeds, covariance = job
    scenario = spec.scenario
    K: int = spec.estimator_config.resolve_K(scenario.M)
    blocks = [synthesize(scenario, seed) for seed in trial_seeds]
    if spec.estimator == CLASSICAL:
        d = accumulate([shifted_gram_moments(block.Y, scenario.sigma2, K) for block in blocks])
    else:
        d = accumulate([recovered_moments(block, K) for block in blocks])
    try:
        result: PowerEstimate = estimate(
            spec.estimator, d, scenario.M, spec.estimator_config, C=covariance, N=scenario.N
        )
    except NotIdentifiableError:
        return (float("nan"),) * scenario.M, True
    return result.powers, result.fallback or result.degenerate


def _iterative_trial(job: tuple[ExperimentSpec, tuple[int, ...]]) -> list[tuple[float, ...]]:
    spec, trial_seeds = job
    blocks = [synthesize(spec.scenario, seed) for seed in trial_seeds]
    trajectory = iterative_mmse(blocks, spec.scenario.M, spec.estimator_config, steps=spec.steps)
    return [step.powers for step in trajectory]


def _power_columns(prefix: str, M: int) -> list[str]:
    return [f"{prefix}{index}" for index in range(1, M + 1)]


def _table1(spec: ExperimentSpec, workers: int) -> BaseCSVTable:
    M: int = spec.scenario.M
    table = BaseCSVTable(
        ["L"] + _power_columns("P_hat_", M) + ["l2_error", "fallbacks"]
        + _power_columns("P_oracle_", M) + ["oracle_l2_error"]
    )
    jobs = [
        (spec, L, derive_trial_seed(spec.master_seed, sweep_index * spec.trials + trial))
        for sweep_index, L in enumerate(spec.L_sweep)
        for trial in range(spec.trials)
    ]
    results = run_trials(_table1_trial, jobs, workers)
    for sweep_index, L in enumerate(spec.L_sweep):
        chunk = results[sweep_index * spec.trials:(sweep_index + 1) * spec.trials]
        estimates = np.mean([result[0] for result in chunk], axis=0)
        oracles = np.mean([result[3] for result in chunk], axis=0)
        table.add_row(
            [L] + list(estimates) + [float(np.mean([result[1] for result in chunk])),
                                     sum(result[2] for result in chunk)]
            + list(oracles) + [float(np.mean([result[4] for result in chunk]))]
        )
    return table


def _moment_relerr(spec: ExperimentSpec, workers: int) -> BaseCSVTable:
    jobs = [(spec, derive_trial_seed(spec.master_seed, trial)) for trial in range(spec.trials)]
    errors = np.asarray(run_trials(_moment_relerr_trial, jobs, workers))
    spread: np.ndarray = np.std(errors, axis=0, ddof=1) if len(errors) > 1 else np.zeros(errors.shape[1])
    table = BaseCSVTable(["order", "mean_relative_error", "std_relative_error"])
    for order in range(errors.shape[1]):
        table.add_row([order + 1, float(np.mean(errors[:, order])), float(spread[order])])
    return table


def _estimator_cdf(spec: ExperimentSpec, workers: int, document_comments: list) -> BaseCSVTable:
    scenario = spec.scenario
    cfg = spec.estimator_config
    covariance: NoiseCovariance | None = None
    if spec.estimator in (MMSE, ML):
        # the covariance at the true powers, the "perfect knowledge" setting
        covariance = noise_covariance(
            scenario.powers, scenario.N, cfg.resolve_K(scenario.M), trials=cfg.covariance_trials,
            method=cfg.covariance_method, template=scenario, accumulations=spec.accumulations, workers=workers,
        )
    jobs = [
        (spec, tuple(derive_trial_seed(spec.master_seed, trial * spec.accumulations + block)
                     for block in range(spec.accumulations)), covariance)
        for trial in range(spec.trials)
    ]
    results = run_trials(_estimator_cdf_trial, jobs, workers)
    estimates: np.ndarray = np.asarray([result[0] for result in results], dtype=float)
    flagged: int = sum(result[1] for result in results)
    truth: np.ndarray = np.asarray(scenario.powers)
    median_errors = np.nanmedian(np.abs(estimates - truth[None, :]), axis=0) if np.isfinite(estimates).any() \
        else np.full(scenario.M, np.nan)
    document_comments.append(CommentLine("flagged_trials", flagged))
    document_comments.append(CommentLine("median_abs_error", tuple(float(error) for error in median_errors)))
    document_comments.append(CommentLine("rise_regions", tuple(float(x) for x in rise_regions(estimates.ravel()))))
    groups = equal_power_groups(estimates.ravel(), scenario.M)
    document_comments.append(CommentLine("equal_power_groups", tuple(f"{power!r}:{count}" for power, count in groups)))

    rows = [
        (float(estimates[trial, rank]), trial, rank + 1)
        for trial in range(estimates.shape[0]) for rank in range(estimates.shape[1])
        if np.isfinite(estimates[trial, rank])
    ]
    rows.sort()
    table = BaseCSVTable(["estimate", "cdf", "trial", "rank"])
    for index, (value, trial, rank) in enumerate(rows, start=1):
        table.add_row([value, index / len(rows), trial, rank])
    return table


def _iterative(spec: ExperimentSpec, workers: int) -> BaseCSVTable:
    M: int = spec.scenario.M
    jobs = [
        (spec, tuple(derive_trial_seed(spec.master_seed, run * spec.steps + step) for step in range(spec.steps)))
        for run in range(spec.trials)
    ]
    trajectories = run_trials(_iterative_trial, jobs, workers)
    table = BaseCSVTable(["run", "step"] + _power_columns("P_hat_", M))
    for run, trajectory in enumerate(trajectories):
        for step, powers in enumerate(trajectory, start=1):
            table.add_row([run, step] + list(powers))
    return table


def mp_density_table(c: float, points: int) -> tuple[BaseCSVTable, MarchenkoPasturLaw]:
    """Density of the Marchenko-Pastur law sampled on ``points`` abscissae spanning its support."""
    law = MarchenkoPasturLaw(c)
    a, b = law.support
    table = BaseCSVTable(["x", "density"])
    for x in np.linspace(a, b, points):
        table.add_row([float(x), float(law.density(x))])
    return table, law


def build_document(spec: ExperimentSpec, workers: int = 1) -> CSVDocument:
    """
    Run the experiment and assemble its CSV document.

    :raises WorkerFailure: If a trial fails; nothing is written in that case.
    """
    comments: list = []
    if spec.scenario is not None:
        comments.append(CommentLine("snr_db", sigma2_to_snr_db(spec.scenario.sigma2)))
    if spec.kind == MP_DENSITY:
        table, law = mp_density_table(spec.c, spec.points)
        comments += [CommentLine("atom_at_zero", law.atom), CommentLine("support", law.support)]
    elif spec.kind == TABLE1:
        table = _table1(spec, workers)
    elif spec.kind == MOMENT_RELERR:
        table = _moment_relerr(spec, workers)
    elif spec.kind == ESTIMATOR_CDF:
        table = _estimator_cdf(spec, workers, comments)
    elif spec.kind == ITERATIVE:
        table = _iterative(spec, workers)
    else:
        raise ValueError(f"unknown experiment kind {spec.kind!r}")
    document = CSVDocument(ProvenanceDeclaration(spec.kind, spec.master_seed, spec.resolved_text()), table)
    for comment in comments:
        document.add_to_head(comment)
    return document


def run_experiment(spec: ExperimentSpec, out_dir: str = ".", workers: int = 1) -> str:
    """
    Run an experiment and write its CSV artifact.

    When the run fails after it started, whether in a trial or in the covariance simulation,
    an artifact holding only the provenance block, the partial-output marker and the number of
    completed trials is written, and the failure is raised as :class:`WorkerFailure`.

    :param spec: The experiment.
    :param out_dir: Directory the artifact is written to.
    :param workers: Worker processes for the trials.
    :return: Path of the written artifact.
    :raises InvalidConfigError: If the experiment is rejected before any trial runs.
    :raises WorkerFailure: On any other failure of the run.
    """
    path: str = os.path.join(out_dir, spec.output_path)
    try:
        document: CSVDocument = build_document(spec, workers)
    except InvalidConfigError:
        raise
    except Exception as error:
        completed: list = error.completed if isinstance(error, WorkerFailure) else []
        logger.error("experiment %s failed after %d trials, writing partial marker to %s",
                     spec.kind, len(completed), path)
        partial = CSVDocument(ProvenanceDeclaration(spec.kind, spec.master_seed, spec.resolved_text()))
        partial.mark_partial()
        partial.add_to_head(CommentLine("completed_trials", len(completed)))
        save_to_file(render(partial), path)
        if isinstance(error, WorkerFailure):
            raise
        raise WorkerFailure(f"{spec.kind} run failed: {error!r}", completed) from error
    save_to_file(render(document), path)
    return path
