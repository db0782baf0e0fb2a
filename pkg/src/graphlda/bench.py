"""Few-shot benchmark harness over synthetic graph-noise episodes.

A run draws one graph (stream 0 of the master seed), then evaluates
``n_problems`` independent episodes; problem i uses its own child stream
(master_seed, 1 + i), so results are bitwise reproducible and independent
of how many worker threads execute the problems.  Within an episode every
(classifier x preprocessing) cell sees the same support and query sets,
giving paired comparisons across cells, shot counts, and noise levels.

Set the environment variable GRAPHLDA_THREADS to cap worker threads
(0 or unset picks the CPU count).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .classify import NearestClassMean, ShrinkageLda, SoftmaxRegression
from .exceptions import EmptyInput, InsufficientData, InvalidConfig, SingularCovariance
from .graphs import Graph, GraphSpec, gen_graph, load_matrix_csv, normalized_adjacency
from .preprocess import (
    FeatureStdScaler,
    GraphWhitening,
    SampleNormScaler,
    SpectralStdScaler,
    estimate_gso_from_covariance,
)
from .spectral import SpectralBasis, eigh_symmetric, gft
from .synth import ModelParams, make_episode, sample_class_means

CLASSIFIERS = ("ncm", "lr", "lda")
PREPROCESSINGS = ("none", "ours", "spectral_std", "std", "norm")
GSO_MODES = ("adjacency", "normalized", "cov_estimate")

_TABLE_HEADER = "classifier,preprocessing,shots,accuracy,ci95,n_problems"
_HEATMAP_HEADER = "sigma,sigma_hat,accuracy,ci95"


def _canonical_subset(given, order, what: str) -> tuple[str, ...]:
    chosen = set()
    for name in given:
        if name not in order:
            raise InvalidConfig(f"unknown {what}: {name!r} (choose from {order})")
        chosen.add(name)
    if not chosen:
        raise InvalidConfig(f"at least one {what} is required")
    return tuple(name for name in order if name in chosen)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a benchmark run depends on, seed included."""

    graph: GraphSpec | str | Path
    alpha: float = 1.0
    beta: float = 1.0
    sigma_hat: float = 1.0
    gso_mode: str = "adjacency"
    cov_samples: int = 10000
    classifiers: tuple[str, ...] = CLASSIFIERS
    preprocessings: tuple[str, ...] = PREPROCESSINGS
    n_classes: int = 2
    shots: tuple[int, ...] = (5,)
    q_query: int = 100
    n_problems: int = 100
    master_seed: int = 0
    redraw_graph_per_problem: bool = False

    def __post_init__(self):
        if not isinstance(self.graph, (GraphSpec, str, Path)):
            raise InvalidConfig(
                f"graph must be a GraphSpec or a matrix CSV path, got {type(self.graph).__name__}"
            )
        for name in ("alpha", "beta", "sigma_hat"):
            val = float(getattr(self, name))
            if not np.isfinite(val) or val < 0.0:
                raise InvalidConfig(f"{name} must be finite and >= 0, got {val}")
            object.__setattr__(self, name, val)
        if self.gso_mode not in GSO_MODES:
            raise InvalidConfig(
                f"gso_mode must be one of {GSO_MODES}, got {self.gso_mode!r}"
            )
        if self.cov_samples < 2:
            raise InvalidConfig(f"cov_samples must be >= 2, got {self.cov_samples}")
        object.__setattr__(
            self,
            "classifiers",
            _canonical_subset(self.classifiers, CLASSIFIERS, "classifier"),
        )
        object.__setattr__(
            self,
            "preprocessings",
            _canonical_subset(self.preprocessings, PREPROCESSINGS, "preprocessing"),
        )
        if self.n_classes < 2:
            raise InvalidConfig(f"n_classes must be >= 2, got {self.n_classes}")
        shots = tuple(dict.fromkeys(int(k) for k in self.shots))
        if not shots or any(k < 1 for k in shots):
            raise InvalidConfig(f"shots must be a nonempty list of ints >= 1, got {self.shots}")
        object.__setattr__(self, "shots", shots)
        if self.q_query < 1:
            raise InvalidConfig(f"q_query must be >= 1, got {self.q_query}")
        if self.n_problems < 1:
            raise InvalidConfig(f"n_problems must be >= 1, got {self.n_problems}")
        if int(self.master_seed) < 0:
            raise InvalidConfig(f"master_seed must be >= 0, got {self.master_seed}")
        object.__setattr__(self, "master_seed", int(self.master_seed))
        if self.redraw_graph_per_problem and not isinstance(self.graph, GraphSpec):
            raise InvalidConfig("redraw_graph_per_problem needs a GraphSpec, not a fixed matrix")


@dataclass(frozen=True)
class TableRow:
    classifier: str
    preprocessing: str
    shots: int
    accuracy: float | None
    ci95: float | None
    n_problems: int


@dataclass(frozen=True)
class HeatmapRow:
    sigma: float
    sigma_hat: float
    accuracy: float
    ci95: float


def _fmt(value: float) -> str:
    return f"{value:.4f}"


@dataclass(frozen=True, eq=False)
class ResultTable:
    """Aggregated accuracies, one row per (classifier, preprocessing, shots)."""

    rows: tuple[TableRow, ...]

    def cell(self, classifier: str, preprocessing: str, shots: int) -> TableRow:
        for row in self.rows:
            if (row.classifier, row.preprocessing, row.shots) == (
                classifier,
                preprocessing,
                shots,
            ):
                return row
        raise KeyError((classifier, preprocessing, shots))

    def csv_text(self) -> str:
        lines = [_TABLE_HEADER]
        for r in self.rows:
            if r.accuracy is None:
                lines.append(f"{r.classifier},{r.preprocessing},{r.shots},,,{r.n_problems}")
            else:
                lines.append(
                    f"{r.classifier},{r.preprocessing},{r.shots},"
                    f"{_fmt(r.accuracy)},{_fmt(r.ci95)},{r.n_problems}"
                )
        return "\n".join(lines) + "\n"

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(self.csv_text())


@dataclass(frozen=True, eq=False)
class HeatmapTable:
    """Aggregated accuracies over a (sigma, sigma_hat) grid."""

    rows: tuple[HeatmapRow, ...]

    def cell(self, sigma: float, sigma_hat: float) -> HeatmapRow:
        for row in self.rows:
            if row.sigma == sigma and row.sigma_hat == sigma_hat:
                return row
        raise KeyError((sigma, sigma_hat))

    def csv_text(self) -> str:
        lines = [_HEATMAP_HEADER]
        for r in self.rows:
            lines.append(
                f"{_fmt(r.sigma)},{_fmt(r.sigma_hat)},{_fmt(r.accuracy)},{_fmt(r.ci95)}"
            )
        return "\n".join(lines) + "\n"

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(self.csv_text())


def aggregate_accuracy(accuracies) -> tuple[float, float]:
    """Mean accuracy (percent) and its 95% normal confidence half-width.

    Input accuracies are fractions in [0, 1]; a single value gets a zero
    half-width.
    """
    vals = np.asarray(list(accuracies), dtype=float)
    if vals.size == 0:
        raise EmptyInput("cannot aggregate an empty accuracy list")
    mean = float(vals.mean() * 100.0)
    if vals.size == 1:
        return mean, 0.0
    half = float(1.96 * vals.std(ddof=1) / np.sqrt(vals.size) * 100.0)
    return mean, half


def _worker_count() -> int:
    raw = os.environ.get("GRAPHLDA_THREADS", "0")
    try:
        count = int(raw)
    except ValueError as err:
        raise InvalidConfig(f"GRAPHLDA_THREADS must be an integer, got {raw!r}") from err
    if count <= 0:
        return os.cpu_count() or 1
    return count


def _map_indexed(fn, count: int) -> list:
    """Run fn(0..count-1), returning results in index order.

    Results must not depend on scheduling: every problem derives its RNG
    from the problem index alone.
    """
    workers = min(_worker_count(), count)
    if workers <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(count)))


def _rng(*entropy: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy))


@dataclass(eq=False)
class _Setup:
    """Per-run immutable state shared read-only across worker threads."""

    params: ModelParams
    basis: SpectralBasis
    whitener: GraphWhitening


def _resolve_graph(config: ExperimentConfig, rng: np.random.Generator) -> Graph:
    if isinstance(config.graph, GraphSpec):
        return gen_graph(config.graph, rng)
    return Graph(load_matrix_csv(config.graph))


def _estimated_basis(
    s_model: np.ndarray,
    alpha: float,
    beta: float,
    n_draws: int,
    rng: np.random.Generator,
) -> SpectralBasis:
    """Basis from the empirical covariance of held-out zero-mean noise."""
    dim = s_model.shape[0]
    colored = rng.standard_normal((n_draws, dim))
    white = rng.standard_normal((n_draws, dim))
    draws = alpha * (colored @ s_model) + beta * white
    centered = draws - draws.mean(axis=0)
    return estimate_gso_from_covariance(centered.T @ centered / n_draws)


def _build_setup(
    graph: Graph,
    config: ExperimentConfig,
    rng: np.random.Generator,
    *,
    beta: float | None = None,
) -> _Setup:
    beta = config.beta if beta is None else beta
    if config.gso_mode == "normalized":
        s_model = normalized_adjacency(graph)
        basis = eigh_symmetric(s_model)
    elif config.gso_mode == "cov_estimate":
        # The generative model keeps the raw adjacency; only the whitening
        # basis is replaced by an estimate from held-out noise draws.
        s_model = graph.adjacency
        basis = _estimated_basis(s_model, config.alpha, beta, config.cov_samples, rng)
    else:
        s_model = graph.adjacency
        basis = eigh_symmetric(s_model)
    params = ModelParams(alpha=config.alpha, beta=beta, gso=s_model)
    whitener = GraphWhitening(basis, config.sigma_hat).fit()
    return _Setup(params=params, basis=basis, whitener=whitener)


def _prepare(config: ExperimentConfig):
    """Build the shared setup, or None when each problem redraws its graph."""
    if config.redraw_graph_per_problem:
        return None
    rng = _rng(config.master_seed, 0)
    graph = _resolve_graph(config, rng)
    return _build_setup(graph, config, rng)


def _problem_setup(
    config: ExperimentConfig,
    rng: np.random.Generator,
    shared: _Setup | None,
    *,
    beta: float | None = None,
) -> _Setup:
    if shared is not None:
        return shared
    graph = gen_graph(config.graph, rng)
    return _build_setup(graph, config, rng, beta=beta)


def _make_classifier(name: str):
    if name == "ncm":
        return NearestClassMean()
    if name == "lr":
        return SoftmaxRegression()
    return ShrinkageLda()


def _transformed_views(episode, preprocessings, whitener, basis):
    """Transformed (train, query) pairs, one per preprocessing name."""
    views = {}
    for prep in preprocessings:
        if prep == "none":
            views[prep] = (episode.train_x, episode.query_x)
        elif prep == "ours":
            views[prep] = (
                whitener.transform(episode.train_x),
                whitener.transform(episode.query_x),
            )
        elif prep == "spectral_std":
            scaler = SpectralStdScaler(basis).fit(episode.train_x)
            views[prep] = (
                scaler.transform(episode.train_x),
                scaler.transform(episode.query_x),
            )
        elif prep == "std":
            scaler = FeatureStdScaler().fit(episode.train_x)
            views[prep] = (
                scaler.transform(episode.train_x),
                scaler.transform(episode.query_x),
            )
        else:  # norm
            scaler = SampleNormScaler()
            views[prep] = (
                scaler.transform(episode.train_x),
                scaler.transform(episode.query_x),
            )
    return views


def _evaluate_problem(
    config: ExperimentConfig,
    shared: _Setup | None,
    k_shot: int,
    index: int,
) -> dict:
    rng = _rng(config.master_seed, 1 + index)
    setup = _problem_setup(config, rng, shared)
    means = sample_class_means(
        setup.params.dim,
        config.n_classes,
        antipodal=(config.n_classes == 2),
        rng=rng,
    )
    episode = make_episode(means, setup.params, k_shot, config.q_query, rng)
    views = _transformed_views(episode, config.preprocessings, setup.whitener, setup.basis)
    out = {}
    for prep in config.preprocessings:
        train_view, query_view = views[prep]
        for clf_name in config.classifiers:
            try:
                model = _make_classifier(clf_name).fit(train_view, episode.train_y)
                predicted = model.predict(query_view)
                out[(clf_name, prep)] = float(np.mean(predicted == episode.query_y))
            except (InsufficientData, SingularCovariance):
                out[(clf_name, prep)] = None
    return out


def _rows_for_shot(config: ExperimentConfig, shared, k_shot: int) -> list[TableRow]:
    per_problem = _map_indexed(
        lambda i: _evaluate_problem(config, shared, k_shot, i), config.n_problems
    )
    rows = []
    for clf_name in config.classifiers:
        for prep in config.preprocessings:
            vals = [r[(clf_name, prep)] for r in per_problem]
            vals = [v for v in vals if v is not None]
            if vals:
                mean, half = aggregate_accuracy(vals)
                rows.append(TableRow(clf_name, prep, k_shot, mean, half, len(vals)))
            else:
                rows.append(TableRow(clf_name, prep, k_shot, None, None, 0))
    return rows


def run_table(config: ExperimentConfig) -> ResultTable:
    """Evaluate every configured cell at a single shot count."""
    if len(config.shots) != 1:
        raise InvalidConfig("run_table takes exactly one shot count; use run_shot_curve")
    shared = _prepare(config)
    return ResultTable(rows=tuple(_rows_for_shot(config, shared, config.shots[0])))


def run_shot_curve(config: ExperimentConfig) -> ResultTable:
    """One table per shot count, concatenated; a single shot reduces to run_table."""
    shared = _prepare(config)
    rows = []
    for k_shot in config.shots:
        rows.extend(_rows_for_shot(config, shared, k_shot))
    return ResultTable(rows=tuple(rows))


def run_sigma_heatmap(config: ExperimentConfig, sigmas, sigma_hats) -> HeatmapTable:
    """Whitened-NCM accuracy over a grid of true vs assumed noise ratios.

    Row sigma rescales the white-noise level (beta = sigma * alpha);
    column sigma_hat is the ratio the whitening assumes.  Episodes are
    shared across all sigma_hat values of a problem (and across sigma
    values via common random numbers), so grid comparisons are paired.
    """
    if len(config.shots) != 1:
        raise InvalidConfig("the heatmap runs one shot count")
    sigma_list = [float(s) for s in sigmas]
    hat_list = [float(s) for s in sigma_hats]
    if not sigma_list or not hat_list:
        raise InvalidConfig("sigma and sigma_hat grids must be nonempty")
    for val in sigma_list + hat_list:
        if not np.isfinite(val) or val < 0.0:
            raise InvalidConfig(f"grid values must be finite and >= 0, got {val}")
    k_shot = config.shots[0]
    # One graph for the whole grid; only the cov_estimate basis can vary
    # with the row's noise level, on its own setup substream.
    graph = (
        None
        if config.redraw_graph_per_problem
        else _resolve_graph(config, _rng(config.master_seed, 0))
    )
    rows = []
    for j, sigma in enumerate(sigma_list):
        beta = sigma * config.alpha
        shared = (
            None
            if graph is None
            else _build_setup(graph, config, _rng(config.master_seed, 0, 1 + j), beta=beta)
        )

        def eval_problem(i, shared=shared, beta=beta):
            rng = _rng(config.master_seed, 1 + i)
            setup = _problem_setup(config, rng, shared, beta=beta)
            scales = [
                GraphWhitening(setup.basis, hat).fit().scale_ for hat in hat_list
            ]
            means = sample_class_means(
                setup.params.dim,
                config.n_classes,
                antipodal=(config.n_classes == 2),
                rng=rng,
            )
            episode = make_episode(means, setup.params, k_shot, config.q_query, rng)
            train_hat = gft(setup.basis, episode.train_x)
            query_hat = gft(setup.basis, episode.query_x)
            accs = []
            for scale in scales:
                ncm = NearestClassMean().fit(train_hat * scale, episode.train_y)
                predicted = ncm.predict(query_hat * scale)
                accs.append(float(np.mean(predicted == episode.query_y)))
            return accs

        per_problem = _map_indexed(eval_problem, config.n_problems)
        for k, sigma_hat in enumerate(hat_list):
            mean, half = aggregate_accuracy([accs[k] for accs in per_problem])
            rows.append(HeatmapRow(sigma, sigma_hat, mean, half))
    return HeatmapTable(rows=tuple(rows))
