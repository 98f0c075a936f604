"""Refinement-based feature scoring and greedy ranking.

With the natural-log reward the refinement of a feature equals minus the
conditional entropy H(y|x), and the two-feature conditional refinement
equals minus H(y|x,z), so ranking features by refinement generalizes the
usual information-theoretic selection criteria.  Everything here works in
nats and never applies the half-log-2 scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .densities import (ClassConditionalModel, DiscreteJoint, GridDensity,
                        joint_from_samples)
from .engine import _both_grids, _cuts, _grid_pieces, refinement_data
from .errors import InputError, ParameterError, ShapeError
from .quadrature import QuadratureConfig, integrate_piecewise
from .rewards import NATURAL, resolve_reward


@dataclass(frozen=True)
class FeatureScoreReport:
    """Refinement and marginal diversity of a single feature.

    ``entropy_identity_residual`` is the defect of
    refinement = md + gamma ln gamma + (1 - gamma) ln(1 - gamma); it is only
    computed for the natural-log reward, where the identity is exact.
    """

    feature: str
    refinement: float
    md: float
    entropy_identity_residual: float | None = None


def _kl_terms(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    # xlogy(0, inf) is 0, so p-free cells vanish and escaping mass is +inf
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(q > 0.0, p / np.where(q > 0.0, q, 1.0), np.inf)
        return xlogy(p, ratio)


def kl_divergence(p, q) -> float:
    """KL(p || q) in nats for two grid densities or two discrete vectors.

    Infinite when p puts mass where q has none; the operands must share
    their support exactly.
    """
    if isinstance(p, GridDensity) and isinstance(q, GridDensity):
        if (p.lo, p.hi, p.k) != (q.lo, q.hi, q.k):
            raise ShapeError("grid densities must share lo, hi and bin count")
        return float(np.sum(_kl_terms(p.mass, q.mass)) * p.delta)
    if isinstance(p, GridDensity) or isinstance(q, GridDensity):
        raise ShapeError("cannot mix a grid density with a discrete vector")
    pa, qa = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    if pa.shape != qa.shape or pa.ndim != 1:
        raise ShapeError("discrete distributions must be equal-length vectors")
    return float(np.sum(_kl_terms(pa, qa)))


def marginal_diversity(model) -> float:
    """Prior-weighted KL divergence of each class conditional from the
    marginal: sum_y P(y) KL(P(x|y) || P(x))."""
    if isinstance(model, DiscreteJoint):
        if model.has_z:
            raise ShapeError("marginal diversity expects a single-feature joint")
        py = model.p_y()
        px = model.p_cells()
        total = 0.0
        for yi in (0, 1):
            if py[yi] <= 0.0:
                continue
            cond = model.table[:, yi] / py[yi]
            total += py[yi] * float(np.sum(_kl_terms(cond, px)))
        return total
    if isinstance(model, ClassConditionalModel):
        prior = model.prior
        if _both_grids(model):
            widths, p, q = _grid_pieces(model)
            m = prior * p + (1.0 - prior) * q
            return float(prior * np.sum(widths * _kl_terms(p, m))
                         + (1.0 - prior) * np.sum(widths * _kl_terms(q, m)))
        cfg = QuadratureConfig()
        cuts = _cuts(model, cfg, split_at_half=False)

        def term(density):
            def integrand(x):
                d = np.asarray(density.pdf(x))
                m = prior * np.asarray(model.d_pos.pdf(x)) \
                    + (1.0 - prior) * np.asarray(model.d_neg.pdf(x))
                return _kl_terms(d, m)

            return integrate_piecewise(integrand, cuts, cfg)

        return prior * term(model.d_pos) + (1.0 - prior) * term(model.d_neg)
    raise ShapeError(f"cannot score {type(model).__name__} for diversity")


def _joint_refinement(joint: DiscreteJoint, reward) -> float:
    J = resolve_reward(reward)
    cells = joint.p_cells()
    return float(np.sum(cells * J.value(joint.posterior_pos())))


def refinement_feature_score(model, reward="log-natural",
                             feature: str = "") -> FeatureScoreReport:
    """Score one feature: refinement, marginal diversity and the identity
    residual linking them (natural-log reward only)."""
    J = resolve_reward(reward)
    if isinstance(model, DiscreteJoint):
        if model.has_z:
            raise ShapeError("feature scores expect a single-feature joint")
        refinement = _joint_refinement(model, J)
        gamma = float(model.p_y()[1])
    elif isinstance(model, ClassConditionalModel):
        refinement = refinement_data(model, J)
        gamma = model.prior
    else:
        raise ShapeError(f"cannot score {type(model).__name__}")
    md = marginal_diversity(model)
    residual = None
    if J.family == NATURAL:
        prior_term = float(xlogy(gamma, gamma) + xlogy(1.0 - gamma, 1.0 - gamma))
        residual = refinement - (md + prior_term)
    return FeatureScoreReport(feature=feature, refinement=refinement,
                              md=md, entropy_identity_residual=residual)


def conditional_refinement(joint: DiscreteJoint, reward="log-natural") -> float:
    """sum_{x,z} P(x,z) J(P(+1|x,z)); equals -H(y|x,z) in the natural-log
    case."""
    if not joint.has_z:
        raise ShapeError("conditional refinement expects an (x, z, y) joint")
    return _joint_refinement(joint, reward)


def _discretize(column: np.ndarray, bins: int) -> np.ndarray:
    lo, hi = column.min(), column.max()
    if not hi > lo:
        return np.zeros(column.size, dtype=int)
    codes = ((column - lo) * (bins / (hi - lo))).astype(int)
    return np.clip(codes, 0, bins - 1)


def greedy_rank(features, labels, reward="log-natural", k: int | None = None,
                bins: int = 16, names=None):
    """Rank features greedily by refinement.

    The first pick maximizes the single-feature refinement; every later pick
    maximizes the conditional refinement given the most recently selected
    feature.  Continuous columns are discretized into equal-width bins
    first.  Ties break toward the lower column index, so the output is
    deterministic.  Returns (name, score) pairs in selection order.
    """
    X = np.asarray(features, dtype=float)
    if X.ndim != 2 or X.size == 0:
        raise InputError("features must be a nonempty (samples, columns) array")
    n_samples, n_features = X.shape
    y = np.asarray(labels)
    if y.shape != (n_samples,):
        raise InputError("labels must match the number of sample rows")
    if k is None:
        k = n_features
    if not 1 <= k <= n_features:
        raise ParameterError(f"cannot select {k} of {n_features} features")
    if names is None:
        names = [f"x{i}" for i in range(n_features)]
    codes = [_discretize(X[:, i], bins) for i in range(n_features)]

    def single_score(i):
        joint = joint_from_samples(np.column_stack([codes[i], y]))
        return _joint_refinement(joint, reward)

    def chained_score(prev, i):
        joint = joint_from_samples(np.column_stack([codes[prev], codes[i], y]))
        return conditional_refinement(joint, reward)

    remaining = list(range(n_features))
    ranking = []
    last = None
    for _ in range(k):
        best_idx, best_score = None, None
        for i in remaining:
            score = single_score(i) if last is None else chained_score(last, i)
            if best_score is None or score > best_score:
                best_idx, best_score = i, score
        ranking.append((names[best_idx], best_score))
        remaining.remove(best_idx)
        last = best_idx
    return ranking
