"""Refinement scores for binary forecasts and classifiers.

Calibration/refinement decompositions of proper scores, Bayes error and a
family of refinement-based upper bounds, information-theoretic feature
ranking, and link-function composites for scoring calibrated classifier
outputs.
"""

from .densities import (ClassConditionalModel, DiscreteJoint, GaussianDensity,
                        GridDensity, histogram_from_samples, joint_from_samples,
                        joint_from_table, marginal, posterior)
from .engine import (BayesErrorReport, BinStat, Decomposition,
                     ForecastRecordSet, bayes_error, bound_chain_violations,
                     closed_form_bound, decompose_forecasts, refinement_data,
                     refinement_classifier_output, refinement_elicitation,
                     refinement_terms_table)
from .errors import (CapacityError, DomainError, EstimationError, InputError,
                     NumericalError, ParameterError, RefineryError,
                     RegistryError, ShapeError, UnsupportedConfigError,
                     UnsupportedRewardError)
from .features import (FeatureScoreReport, conditional_refinement, greedy_rank,
                       kl_divergence, marginal_diversity,
                       refinement_feature_score)
from .links import (LinkFunction, MarginLoss, composite_by_name,
                    composite_reward, get_link, get_margin_loss,
                    inverse_link_eval, link_eval, loss_from_reward,
                    score_loss_identity_check)
from .polynomial import (PolynomialReward, build_poly_reward, eval_poly,
                         k2_given_k1)
from .quadrature import QuadratureConfig, adaptive_simpson
from .rewards import (MaximalReward, ScorePair, derive_scores, eval_reward,
                      expected_conditional_score, get_reward)

__version__ = "0.1.0"

__all__ = [
    "BayesErrorReport", "BinStat", "CapacityError", "ClassConditionalModel",
    "Decomposition", "DiscreteJoint", "DomainError", "EstimationError",
    "FeatureScoreReport", "ForecastRecordSet", "GaussianDensity",
    "GridDensity", "InputError", "LinkFunction", "MarginLoss",
    "MaximalReward", "NumericalError", "ParameterError", "PolynomialReward",
    "QuadratureConfig", "RefineryError", "RegistryError", "ScorePair",
    "ShapeError", "UnsupportedConfigError", "UnsupportedRewardError",
    "adaptive_simpson", "bayes_error", "bound_chain_violations",
    "build_poly_reward", "closed_form_bound", "composite_by_name",
    "composite_reward", "conditional_refinement", "decompose_forecasts",
    "derive_scores", "eval_poly", "eval_reward", "expected_conditional_score",
    "get_link", "get_margin_loss", "get_reward", "greedy_rank",
    "histogram_from_samples", "inverse_link_eval", "joint_from_samples",
    "joint_from_table", "k2_given_k1", "kl_divergence", "link_eval",
    "loss_from_reward", "marginal", "marginal_diversity", "posterior",
    "refinement_classifier_output", "refinement_data",
    "refinement_elicitation", "refinement_feature_score",
    "refinement_terms_table", "score_loss_identity_check",
]
