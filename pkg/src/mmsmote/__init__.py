"""Kernel-space adaptive oversampling (MM-SMOTE) for soft-margin SVMs."""

from .baselines import BaselineSpec, class_weight_vector, random_undersample, smote
from .bench import ExperimentConfig, child_seed, load_config, run_experiment
from .data import (
    Dataset,
    RatioSpec,
    StandardScaler,
    gen_gaussian_blobs,
    load_csv,
    make_ratio_dataset,
    proportional_quotas,
    standardize,
    stratified_split,
)
from .kernels import (
    AugmentedKernel,
    GramMatrix,
    KernelSpec,
    PlanEntry,
    SampleCase,
    SynthesisPlan,
    augment_gram,
    augmented_row,
    augmented_rows,
    cross_gram,
    default_rbf,
    eval_kernel,
    gram,
    kernel_distance2,
    load_matrix,
    pairwise_kernel_distance2,
    save_matrix,
)
from .metrics import ConfusionMatrix, MetricsReport, confusion, scores, scores_from_pr
from .oversample import (
    Diagnostics,
    MMModel,
    NeighborCase,
    SvWeights,
    build_plan,
    classify_neighborhood,
    fit_mm_smote,
    mm_decision_values,
    predict_mm,
    sv_weights,
)
from .svm import (
    MarginStatus,
    SvTaxonomy,
    TrainedModel,
    classify_minority_svs,
    decision_values,
    load_model,
    predict,
    raw_decision,
    save_model,
    slack,
    train_smo,
)

__version__ = "0.1.0"
