"""Label ranking through nonparametric regression.

Learn maps from feature vectors to rankings over k labels: greedy
regression trees (global level-splits and local CART criteria) and
fully grown honest forests via labelwise decomposition for complete
rankings, and pairwise decomposition with exact stump ERM plus Copeland
aggregation for noisy incomplete or partial rankings. Includes the
synthetic generators (sparse Boolean score targets, truncated-Gaussian
and Mallows noise, erasure and tie-block mechanisms), noise-level
diagnostics, and a seeded cross-validation and noise-study harness.
"""

from .datasets import RankingDataset, load_dataset, save_dataset
from .evaluation import CvReport, cross_validate, mallows_vs_gaussian, noise_sweep
from .forests import ForestModel, fit_forest, predict_forest
from .labelwise import LabelwiseRanker, fit_label_ranker, predict_ranking
from .learners import LearnerSpec, fit_ranking_model
from .oracles import (
    NoiseSpec,
    PartitionSpec,
    SparseScoreFunction,
    SurvivalSpec,
    alpha_inconsistency,
    apply_mallows,
    beta_kt_gap,
    make_experiment_target,
    make_sparse_target,
    sample_complete,
    sample_incomplete,
    sample_partial,
)
from .pairwise import (
    PairwiseEnsemble,
    PairwiseProbabilityMatrix,
    copeland_scores,
    decompose_pairwise,
    erm_stump,
    fit_ovo,
    kemeny_median_bruteforce,
    predict_ovo,
)
from .rankings import (
    IncompleteRanking,
    PartialRanking,
    Ranking,
    ScoreVector,
    argsort,
    canonical_repr,
    from_canonical,
    kendall_tau,
    kt_coefficient,
    pairwise_sign,
    partial_rank,
    spearman,
)
from .trees import (
    ScalarDataset,
    TreeModel,
    breiman_local_score,
    fit_breiman,
    fit_level_splits,
    level_split_score,
    predict_tree,
)

__version__ = "0.1.0"
