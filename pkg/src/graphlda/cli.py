"""Command-line benchmark driver.

Four subcommands: ``table`` (one shot count, all classifier/preprocessing
cells), ``curve`` (the same table swept over shot counts), ``heatmap``
(whitened-NCM accuracy over a true-vs-assumed noise-ratio grid), and
``selftest`` (quick invariant checks, no files written).  The first three
write CSV to --out and print a readable summary to stdout.

Exit codes: 0 success, 1 runtime failure, 2 bad configuration or usage.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .bench import (
    CLASSIFIERS,
    GSO_MODES,
    PREPROCESSINGS,
    ExperimentConfig,
    HeatmapTable,
    ResultTable,
    run_shot_curve,
    run_sigma_heatmap,
    run_table,
)
from .exceptions import GraphLdaError, InvalidConfig
from .graphs import (
    ErdosRenyi,
    GraphSpec,
    RandomGeometric,
    StochasticBlockModel,
)


def _parse_int_list(text: str, *, flag: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as err:
        raise InvalidConfig(f"{flag} expects comma-separated integers, got {text!r}") from err
    if not values:
        raise InvalidConfig(f"{flag} must list at least one integer")
    return values


def _parse_float_grid(text: str, *, flag: str) -> tuple[float, ...]:
    """Comma-separated floats, or ``log:LO:HI:N`` for a log-spaced grid."""
    if text.startswith("log:"):
        parts = text.split(":")
        if len(parts) != 4:
            raise InvalidConfig(f"{flag} log grid must look like log:LO:HI:N, got {text!r}")
        try:
            lo, hi, count = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError as err:
            raise InvalidConfig(f"{flag} log grid must look like log:LO:HI:N, got {text!r}") from err
        if lo <= 0 or hi <= 0 or count < 1:
            raise InvalidConfig(f"{flag} log grid needs LO, HI > 0 and N >= 1")
        return tuple(float(v) for v in np.geomspace(lo, hi, count))
    try:
        values = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as err:
        raise InvalidConfig(f"{flag} expects comma-separated numbers, got {text!r}") from err
    if not values:
        raise InvalidConfig(f"{flag} must list at least one number")
    return values


def _parse_name_list(text: str, *, flag: str) -> tuple[str, ...]:
    names = tuple(part.strip() for part in text.split(",") if part.strip())
    if not names:
        raise InvalidConfig(f"{flag} must list at least one name")
    return names


def _add_model_args(parser: argparse.ArgumentParser) -> None:
    graph = parser.add_argument_group("graph")
    graph.add_argument("--graph", choices=("er", "sbm", "rgg"), default="er",
                       help="random graph family (default: er)")
    graph.add_argument("--graph-file", default=None, metavar="CSV",
                       help="adjacency matrix CSV; overrides --graph")
    graph.add_argument("--nodes", type=int, default=100,
                       help="vertex count for er/rgg (default: 100)")
    graph.add_argument("--p", type=float, default=0.184,
                       help="er edge probability (default: 0.184)")
    graph.add_argument("--blocks", default="50,50",
                       help="sbm block sizes, comma-separated (default: 50,50)")
    graph.add_argument("--p-in", type=float, default=0.35,
                       help="sbm within-block probability (default: 0.35)")
    graph.add_argument("--p-out", type=float, default=0.022,
                       help="sbm between-block probability (default: 0.022)")
    graph.add_argument("--radius", type=float, default=0.274,
                       help="rgg connection radius (default: 0.274)")
    graph.add_argument("--redraw-graph", action="store_true",
                       help="draw a fresh graph for every problem")
    model = parser.add_argument_group("model")
    model.add_argument("--gso", choices=GSO_MODES, default="adjacency",
                       help="shift operator handed to the whitening (default: adjacency)")
    model.add_argument("--cov-samples", type=int, default=10000,
                       help="held-out draws for --gso cov_estimate (default: 10000)")
    model.add_argument("--alpha", type=float, default=1.0,
                       help="colored-noise level (default: 1.0)")
    model.add_argument("--beta", type=float, default=1.0,
                       help="white-noise level (default: 1.0)")
    model.add_argument("--sigma-hat", type=float, default=1.0,
                       help="noise ratio assumed by the whitening (default: 1.0)")
    model.add_argument("--classes", type=int, default=2,
                       help="number of classes (default: 2)")
    eval_group = parser.add_argument_group("evaluation")
    eval_group.add_argument("--q-query", type=int, default=100,
                            help="query samples per class (default: 100)")
    eval_group.add_argument("--problems", type=int, default=100,
                            help="independent problems to average (default: 100)")
    eval_group.add_argument("--seed", type=int, default=0,
                            help="master seed (default: 0)")


def _add_cell_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--classifiers", default=",".join(CLASSIFIERS),
                        help=f"subset of {','.join(CLASSIFIERS)}")
    parser.add_argument("--preprocessings", default=",".join(PREPROCESSINGS),
                        help=f"subset of {','.join(PREPROCESSINGS)}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphlda",
        description="Few-shot benchmark for signals with graph-colored noise.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    table = sub.add_parser("table", help="accuracy table at one shot count")
    _add_model_args(table)
    _add_cell_args(table)
    table.add_argument("--shots", default="5", help="shot count (default: 5)")
    table.add_argument("--out", required=True, help="output CSV path")
    table.set_defaults(func=_cmd_table)

    curve = sub.add_parser("curve", help="accuracy against the number of shots")
    _add_model_args(curve)
    _add_cell_args(curve)
    curve.add_argument("--shots", default="1,5,10,20",
                       help="comma-separated shot counts (default: 1,5,10,20)")
    curve.add_argument("--out", required=True, help="output CSV path")
    curve.set_defaults(func=_cmd_curve)

    heatmap = sub.add_parser(
        "heatmap", help="whitened-NCM accuracy over true vs assumed noise ratios"
    )
    _add_model_args(heatmap)
    heatmap.add_argument("--shots", default="5", help="shot count (default: 5)")
    heatmap.add_argument("--sigmas", default="0.5,1,2",
                         help="true noise ratios; comma list or log:LO:HI:N")
    heatmap.add_argument("--sigma-hats", default="log:0.01:100:13",
                         help="assumed noise ratios; comma list or log:LO:HI:N")
    heatmap.add_argument("--out", required=True, help="output CSV path")
    heatmap.set_defaults(func=_cmd_heatmap)

    selftest = sub.add_parser("selftest", help="run quick invariant checks")
    selftest.set_defaults(func=_cmd_selftest)

    return parser


def _graph_from_args(args) -> GraphSpec | str:
    if args.graph_file is not None:
        return args.graph_file
    if args.graph == "er":
        family = ErdosRenyi(args.nodes, args.p)
    elif args.graph == "sbm":
        family = StochasticBlockModel(
            _parse_int_list(args.blocks, flag="--blocks"), args.p_in, args.p_out
        )
    else:
        family = RandomGeometric(args.nodes, args.radius)
    return GraphSpec(family, require_connected=True)


def _config_from_args(args, *, with_cells: bool) -> ExperimentConfig:
    kwargs = dict(
        graph=_graph_from_args(args),
        alpha=args.alpha,
        beta=args.beta,
        sigma_hat=args.sigma_hat,
        gso_mode=args.gso,
        cov_samples=args.cov_samples,
        n_classes=args.classes,
        shots=_parse_int_list(args.shots, flag="--shots"),
        q_query=args.q_query,
        n_problems=args.problems,
        master_seed=args.seed,
        redraw_graph_per_problem=args.redraw_graph,
    )
    if with_cells:
        kwargs["classifiers"] = _parse_name_list(args.classifiers, flag="--classifiers")
        kwargs["preprocessings"] = _parse_name_list(
            args.preprocessings, flag="--preprocessings"
        )
    return ExperimentConfig(**kwargs)


def _print_result_table(table: ResultTable) -> None:
    print(f"{'classifier':<12}{'preprocessing':<15}{'shots':>5}{'accuracy':>10}{'ci95':>8}{'n':>6}")
    for row in table.rows:
        if row.accuracy is None:
            print(f"{row.classifier:<12}{row.preprocessing:<15}{row.shots:>5}"
                  f"{'n/a':>10}{'':>8}{row.n_problems:>6}")
        else:
            print(f"{row.classifier:<12}{row.preprocessing:<15}{row.shots:>5}"
                  f"{row.accuracy:>10.2f}{row.ci95:>8.2f}{row.n_problems:>6}")


def _print_heatmap(table: HeatmapTable) -> None:
    print(f"{'sigma':>8}{'sigma_hat':>11}{'accuracy':>10}{'ci95':>8}")
    for row in table.rows:
        print(f"{row.sigma:>8.3f}{row.sigma_hat:>11.3f}{row.accuracy:>10.2f}{row.ci95:>8.2f}")


def _cmd_table(args) -> int:
    config = _config_from_args(args, with_cells=True)
    table = run_table(config)
    table.to_csv(args.out)
    _print_result_table(table)
    print(f"wrote {args.out}")
    return 0


def _cmd_curve(args) -> int:
    config = _config_from_args(args, with_cells=True)
    table = run_shot_curve(config)
    table.to_csv(args.out)
    _print_result_table(table)
    print(f"wrote {args.out}")
    return 0


def _cmd_heatmap(args) -> int:
    config = _config_from_args(args, with_cells=False)
    sigmas = _parse_float_grid(args.sigmas, flag="--sigmas")
    sigma_hats = _parse_float_grid(args.sigma_hats, flag="--sigma-hats")
    table = run_sigma_heatmap(config, sigmas, sigma_hats)
    table.to_csv(args.out)
    _print_heatmap(table)
    print(f"wrote {args.out}")
    return 0


def _selftest_checks():
    """Yield (description, callable) pairs; callables raise on failure."""
    from .classify import GraphLda, lda_oracle
    from .graphs import Graph, gen_graph, normalized_adjacency
    from .preprocess import GraphWhitening
    from .spectral import eigh_symmetric, gft, igft
    from .synth import ModelParams, make_episode, sample_class_means, true_covariance

    def eig_invariants():
        rng = np.random.default_rng(11)
        for _ in range(25):
            dim = int(rng.integers(2, 17))
            mat = rng.standard_normal((dim, dim))
            mat = (mat + mat.T) / 2.0
            basis = eigh_symmetric(mat)
            recon = basis.eigenvectors @ np.diag(basis.eigenvalues) @ basis.eigenvectors.T
            assert np.max(np.abs(recon - mat)) <= 1e-8
            gram = basis.eigenvectors.T @ basis.eigenvectors
            assert np.max(np.abs(gram - np.eye(dim))) <= 1e-8

    def closed_form_spectra():
        chain2 = np.array([[0.0, 1.0], [1.0, 0.0]])
        np.testing.assert_allclose(
            eigh_symmetric(chain2).eigenvalues, [-1.0, 1.0], atol=1e-10
        )
        path3 = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]])
        root2 = np.sqrt(2.0)
        np.testing.assert_allclose(
            eigh_symmetric(path3).eigenvalues, [-root2, 0.0, root2], atol=1e-10
        )

    def fourier_round_trip():
        rng = np.random.default_rng(12)
        mat = rng.standard_normal((20, 20))
        basis = eigh_symmetric((mat + mat.T) / 2.0)
        x = rng.standard_normal((50, 20))
        assert np.max(np.abs(igft(basis, gft(basis, x)) - x)) <= 1e-10

    def whitening_identity():
        rng = np.random.default_rng(13)
        graph = gen_graph(GraphSpec(ErdosRenyi(40, 0.25)), rng)
        params = ModelParams(alpha=1.0, beta=1.0, gso=graph.adjacency)
        basis = eigh_symmetric(graph.adjacency)
        whitener = GraphWhitening(basis, sigma_hat=1.0).fit()
        proj = whitener.scale_[:, None] * basis.eigenvectors.T
        white = proj @ true_covariance(params) @ proj.T
        assert np.max(np.abs(white - np.eye(40))) <= 1e-8

    def normalized_radius():
        rng = np.random.default_rng(14)
        graph = gen_graph(GraphSpec(ErdosRenyi(40, 0.3)), rng)
        weights = rng.uniform(0.5, 2.0, size=(40, 40))
        weighted = Graph(graph.adjacency * (weights + weights.T) / 2.0)
        lam = eigh_symmetric(normalized_adjacency(weighted)).eigenvalues
        assert np.max(np.abs(lam)) <= 1.0 + 1e-9

    def matches_linear_oracle():
        rng = np.random.default_rng(15)
        graph = gen_graph(GraphSpec(ErdosRenyi(30, 0.25)), rng)
        params = ModelParams(alpha=1.0, beta=1.0, gso=graph.adjacency)
        basis = eigh_symmetric(graph.adjacency)
        sigma = true_covariance(params)
        for _ in range(25):
            means = sample_class_means(30, 2, antipodal=True, rng=rng)
            episode = make_episode(means, params, 5, 30, rng)
            model = GraphLda(GraphWhitening(basis, 1.0)).fit(
                episode.train_x, episode.train_y
            )
            emp = np.stack([
                episode.train_x[episode.train_y == c].mean(axis=0) for c in (0, 1)
            ])
            oracle = lda_oracle(emp, sigma)
            ours = model.predict(episode.query_x)
            ref = oracle.predict(episode.query_x)
            scores = oracle.scores(episode.query_x)
            clear = np.abs(scores[:, 1] - scores[:, 0]) >= 1e-9
            assert np.array_equal(ours[clear], ref[clear])

    def noiseless_is_perfect():
        config = ExperimentConfig(
            graph=GraphSpec(ErdosRenyi(20, 0.3)),
            alpha=0.0,
            beta=0.0,
            shots=(5,),
            q_query=20,
            n_problems=3,
        )
        table = run_table(config)
        for row in table.rows:
            assert row.accuracy == 100.0 and row.ci95 == 0.0

    def deterministic_rerun():
        config = ExperimentConfig(
            graph=GraphSpec(ErdosRenyi(20, 0.3)),
            classifiers=("ncm",),
            preprocessings=("none", "ours"),
            shots=(3,),
            q_query=25,
            n_problems=4,
        )
        assert run_table(config).csv_text() == run_table(config).csv_text()

    return [
        ("eigendecomposition reconstructs and stays orthonormal", eig_invariants),
        ("two-node and path-of-three spectra match closed forms", closed_form_spectra),
        ("Fourier transform round-trips", fourier_round_trip),
        ("whitening maps the model covariance to identity", whitening_identity),
        ("normalized adjacency has spectral radius <= 1", normalized_radius),
        ("whitened NCM matches the known-moments linear rule", matches_linear_oracle),
        ("noiseless benchmark scores 100%", noiseless_is_perfect),
        ("benchmark reruns are bitwise identical", deterministic_rerun),
    ]


def _cmd_selftest(args) -> int:
    failures = 0
    for description, check in _selftest_checks():
        try:
            check()
        except Exception as err:  # report every failure, keep going
            failures += 1
            print(f"FAIL - {description}: {err}")
        else:
            print(f"ok   - {description}")
    if failures:
        print(f"{failures} check(s) failed")
        return 1
    print("all checks passed")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 2
    try:
        return args.func(args)
    except InvalidConfig as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except GraphLdaError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
