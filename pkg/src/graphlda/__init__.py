"""Few-shot classification of graph signals under colored plus white noise.

The model: signals from class c are mu_c + alpha * S n1 + beta * n0 with
a symmetric shift operator S and standard normal n0, n1.  Whitening in
the eigenbasis of S turns the shared noise covariance into the identity,
after which nearest class mean is the optimal rule.  The package carries
that pipeline, the baselines it is compared against, random graph
generators, a synthetic episode sampler, and a benchmark harness with a
CSV-writing CLI (``graphlda``).
"""

from .bench import (
    CLASSIFIERS,
    GSO_MODES,
    PREPROCESSINGS,
    ExperimentConfig,
    HeatmapRow,
    HeatmapTable,
    ResultTable,
    TableRow,
    aggregate_accuracy,
    run_shot_curve,
    run_sigma_heatmap,
    run_table,
)
from .classify import (
    GraphLda,
    LinearDiscriminants,
    NearestClassMean,
    ShrinkageLda,
    SoftmaxRegression,
    lda_discriminants,
    lda_oracle,
    oas_covariance,
)
from .exceptions import (
    AsymmetricMatrix,
    ConnectivityExhausted,
    ConvergenceFailure,
    DimensionMismatch,
    EmptyClass,
    EmptyInput,
    GraphLdaError,
    InsufficientData,
    InvalidConfig,
    NonFinite,
    SingularCovariance,
    SingularWhitening,
    ZeroDegreeVertex,
)
from .graphs import (
    ErdosRenyi,
    Graph,
    GraphSpec,
    RandomGeometric,
    StochasticBlockModel,
    gen_graph,
    is_connected,
    load_matrix_csv,
    normalized_adjacency,
    save_matrix_csv,
)
from .preprocess import (
    FeatureStdScaler,
    GraphWhitening,
    SampleNormScaler,
    SpectralStdScaler,
    estimate_gso_from_covariance,
)
from .spectral import SpectralBasis, eigh_symmetric, gft, igft
from .synth import (
    ClassMeans,
    Episode,
    ModelParams,
    make_episode,
    sample_class_means,
    sample_signals,
    true_covariance,
)

__version__ = "0.1.0"

__all__ = [
    "AsymmetricMatrix",
    "CLASSIFIERS",
    "ClassMeans",
    "ConnectivityExhausted",
    "ConvergenceFailure",
    "DimensionMismatch",
    "EmptyClass",
    "EmptyInput",
    "Episode",
    "ErdosRenyi",
    "ExperimentConfig",
    "FeatureStdScaler",
    "GSO_MODES",
    "GraphLda",
    "GraphLdaError",
    "Graph",
    "GraphSpec",
    "GraphWhitening",
    "HeatmapRow",
    "HeatmapTable",
    "InsufficientData",
    "InvalidConfig",
    "LinearDiscriminants",
    "ModelParams",
    "NearestClassMean",
    "NonFinite",
    "PREPROCESSINGS",
    "RandomGeometric",
    "ResultTable",
    "SampleNormScaler",
    "ShrinkageLda",
    "SingularCovariance",
    "SingularWhitening",
    "SoftmaxRegression",
    "SpectralBasis",
    "SpectralStdScaler",
    "StochasticBlockModel",
    "TableRow",
    "ZeroDegreeVertex",
    "aggregate_accuracy",
    "eigh_symmetric",
    "estimate_gso_from_covariance",
    "gen_graph",
    "gft",
    "igft",
    "is_connected",
    "lda_discriminants",
    "lda_oracle",
    "load_matrix_csv",
    "make_episode",
    "normalized_adjacency",
    "oas_covariance",
    "run_shot_curve",
    "run_sigma_heatmap",
    "run_table",
    "sample_class_means",
    "sample_signals",
    "save_matrix_csv",
    "true_covariance",
    "__version__",
]
