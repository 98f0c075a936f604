"""Refinement evaluation in all three settings, plus the score decomposition.

The same quantity shows up three ways:

* elicitation setting: integrate a forecast density s(eta_hat) against
  J(eta) on [0, 1];
* data-distribution setting: integrate the data marginal P(x) against
  J(eta(x)), which for the zero-one reward equals minus the Bayes error and
  for every other bound-family reward yields an upper bound on it;
* classifier-output setting: integrate an output density s(v) against the
  composite J((f*)^-1(v)).

Grid-density models are summed exactly over merged bin edges; analytic
models go through adaptive composite Simpson quadrature.  The zero-one
reward has a kink at eta = 1/2, so its integrals are split at the
posterior-crossing points first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .densities import (ClassConditionalModel, GaussianDensity, GridDensity,
                        marginal, posterior)
from .errors import (DomainError, InputError, ParameterError, RegistryError,
                     UnsupportedConfigError, UnsupportedRewardError)
from .links import get_link
from .polynomial import build_poly_reward
from .quadrature import QuadratureConfig, adaptive_simpson, integrate_piecewise
from .rewards import LOG_SCALE, LOGCOS_SCALE, COSH_SCALE, SEC_SCALE
from .rewards import derive_scores, resolve_reward

# Tightness order asserted for the Bayes-error bound chain, tightest first.
CHAIN_ORDER = ("poly-4", "poly-2", "ls", "cosh", "sec", "log", "log-cos", "exp")

# Everything reported in a BayesErrorReport bounds map.  The savage and
# tangent members share the ls bound scaling, so their bounds coincide
# with the ls entry.
BOUND_REWARD_NAMES = CHAIN_ORDER + ("savage", "tangent")

_CROSSING_SCAN_POINTS = 2049
_CROSSING_XTOL = 1e-12


@dataclass(frozen=True)
class ForecastRecordSet:
    """Raw forecasts: predicted class-1 probabilities and +-1 outcomes."""

    eta_hat: np.ndarray
    outcomes: np.ndarray

    def __post_init__(self):
        eta = np.array(self.eta_hat, dtype=float)
        out = np.array(self.outcomes, dtype=int)
        eta.flags.writeable = False
        out.flags.writeable = False
        object.__setattr__(self, "eta_hat", eta)
        object.__setattr__(self, "outcomes", out)
        if eta.size == 0:
            raise InputError("forecast record set is empty")
        if eta.shape != out.shape or eta.ndim != 1:
            raise InputError("predictions and outcomes must be equal-length vectors")
        if np.any(np.isnan(eta)) or np.any((eta < 0.0) | (eta > 1.0)):
            raise DomainError("predictions must lie in [0, 1]")
        if not set(np.unique(out).tolist()) <= {-1, 1}:
            raise InputError("outcomes must be -1 or +1")

    @classmethod
    def from_pairs(cls, pairs) -> "ForecastRecordSet":
        arr = np.asarray(pairs, dtype=float)
        if arr.size == 0:
            raise InputError("forecast record set is empty")
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise InputError("pairs must be rows of (eta_hat, outcome)")
        raw = arr[:, 1]
        labels = np.where(raw == 0, -1, raw).astype(int)
        return cls(eta_hat=arr[:, 0], outcomes=labels)

    def __len__(self) -> int:
        return self.eta_hat.size


@dataclass(frozen=True)
class BinStat:
    """One occupied prediction bin: mean prediction, share of records,
    empirical positive frequency, and whether endpoint clamping engaged."""

    eta_hat: float
    frequency: float
    eta_emp: float
    clamped: bool = False


@dataclass(frozen=True)
class Decomposition:
    """Expected-score split: total = calibration + refinement.

    calibration is never positive and vanishes exactly when every occupied
    bin is calibrated (mean prediction equals empirical frequency).
    """

    total: float
    calibration: float
    refinement: float
    per_bin: tuple[BinStat, ...]


@dataclass(frozen=True)
class BayesErrorReport:
    """Bayes error with its error-rate split and the upper-bound map."""

    bayes_error: float
    miss_rate: float
    false_positive_rate: float
    bounds: dict


# --- integration scaffolding ----------------------------------------------

def _density_range(d, tail_sigmas: float):
    if isinstance(d, GaussianDensity):
        return (d.mu - tail_sigmas * d.sigma, d.mu + tail_sigmas * d.sigma)
    return (d.lo, d.hi)


def _support(model: ClassConditionalModel, tail_sigmas: float):
    lo_p, hi_p = _density_range(model.d_pos, tail_sigmas)
    lo_n, hi_n = _density_range(model.d_neg, tail_sigmas)
    return min(lo_p, lo_n), max(hi_p, hi_n)


def _both_grids(model: ClassConditionalModel) -> bool:
    return isinstance(model.d_pos, GridDensity) and isinstance(model.d_neg, GridDensity)


def _grid_pieces(model: ClassConditionalModel):
    """Merged-edge pieces over which both grid conditionals are constant."""
    edges = np.union1d(model.d_pos.edges(), model.d_neg.edges())
    mids = 0.5 * (edges[:-1] + edges[1:])
    widths = np.diff(edges)
    return widths, model.d_pos.pdf(mids), model.d_neg.pdf(mids)


def _posterior_from_pdfs(prior: float, p: np.ndarray, q: np.ndarray):
    num = prior * p
    den = num + (1.0 - prior) * q
    return np.where(den > 0.0, num / np.where(den > 0.0, den, 1.0), prior)


def _interior_edges(model: ClassConditionalModel, a: float, b: float):
    cuts = []
    for d in (model.d_pos, model.d_neg):
        if isinstance(d, GridDensity):
            e = d.edges()
            cuts.extend(e[(e > a) & (e < b)].tolist())
    return cuts


def _half_crossings(model: ClassConditionalModel, a: float, b: float):
    """Points where the posterior crosses 1/2, located by bisection."""
    xs = np.linspace(a, b, _CROSSING_SCAN_POINTS)
    g = np.asarray(posterior(model, xs)) - 0.5
    found = [float(x) for x, gv in zip(xs, g) if gv == 0.0]
    for i in np.nonzero(g[:-1] * g[1:] < 0.0)[0]:
        lo, hi = float(xs[i]), float(xs[i + 1])
        glo = float(g[i])
        while hi - lo > _CROSSING_XTOL:
            mid = 0.5 * (lo + hi)
            gm = float(posterior(model, mid)) - 0.5
            if gm == 0.0:
                lo = hi = mid
            elif (gm < 0.0) == (glo < 0.0):
                lo, glo = mid, gm
            else:
                hi = mid
        found.append(0.5 * (lo + hi))
    return sorted(x for x in found if a < x < b)


def _cuts(model: ClassConditionalModel, cfg: QuadratureConfig,
          split_at_half: bool):
    a, b = _support(model, cfg.tail_sigmas)
    interior = _interior_edges(model, a, b)
    if split_at_half:
        interior.extend(_half_crossings(model, a, b))
    return [a] + sorted(set(interior)) + [b]


# --- refinement in the data-distribution setting ---------------------------

def refinement_data(model: ClassConditionalModel, reward,
                    quad: QuadratureConfig | None = None) -> float:
    """Integral of P(x) J(eta(x)) over the model support; always <= 0."""
    J = resolve_reward(reward)
    cfg = quad or QuadratureConfig()
    if _both_grids(model):
        widths, p, q = _grid_pieces(model)
        weight = model.prior * p + (1.0 - model.prior) * q
        eta = _posterior_from_pdfs(model.prior, p, q)
        return float(np.sum(widths * weight * J.value(eta)))

    def integrand(x):
        return marginal(model, x) * J.value(np.asarray(posterior(model, x)))

    cuts = _cuts(model, cfg, split_at_half=J.derivative is None)
    return integrate_piecewise(integrand, cuts, cfg)


def bayes_error(model: ClassConditionalModel,
                quad: QuadratureConfig | None = None) -> BayesErrorReport:
    """Bayes error via the zero-one refinement, error-rate split and bounds.

    The miss rate integrates P(x|+1) over the region decided negative, the
    false-positive rate integrates P(x|-1) over the region decided positive,
    and the bounds map holds minus the refinement for every bound-family
    reward, the polynomial members included.
    """
    cfg = quad or QuadratureConfig()
    eps = -refinement_data(model, "zero-one", cfg)
    if _both_grids(model):
        widths, p, q = _grid_pieces(model)
        eta = _posterior_from_pdfs(model.prior, p, q)
        decide_pos = eta >= 0.5
        fp = float(np.sum(widths * q * decide_pos))
        miss = float(np.sum(widths * p * ~decide_pos))
    else:
        a, b = _support(model, cfg.tail_sigmas)
        cuts = [a] + _half_crossings(model, a, b) + [b]
        fp = miss = 0.0
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            if posterior(model, 0.5 * (lo + hi)) >= 0.5:
                fp += adaptive_simpson(model.d_neg.pdf, lo, hi, cfg)
            else:
                miss += adaptive_simpson(model.d_pos.pdf, lo, hi, cfg)
    bounds = {name: -refinement_data(model, name, cfg)
              for name in BOUND_REWARD_NAMES}
    return BayesErrorReport(bayes_error=eps, miss_rate=miss,
                            false_positive_rate=fp, bounds=bounds)


def bound_chain_violations(report: BayesErrorReport, tol: float = 1e-6):
    """Adjacent-pair violations of the asserted bound tightness chain.

    Returns (tighter_name, looser_name, gap) triples where the supposedly
    looser bound came out smaller by more than ``tol``.  The chain claim is
    inherited from a pointwise closeness ordering of the reward functions
    that does not actually hold everywhere, so a nonempty result is an
    honest property of the model, not a numerical failure.
    """
    sequence = [("bayes-error", report.bayes_error)]
    sequence += [(name, report.bounds[name]) for name in CHAIN_ORDER]
    violations = []
    for (name_a, val_a), (name_b, val_b) in zip(sequence[:-1], sequence[1:]):
        gap = val_b - val_a
        if gap < -tol:
            violations.append((name_a, name_b, float(gap)))
    return violations


# --- closed-form bound integrands ------------------------------------------

def _cf_ls(p, q):
    s = p + q
    return -p * q / np.where(s > 0.0, s, 1.0)


def _cf_exp(p, q):
    return -0.5 * np.sqrt(p * q)


def _cf_log(p, q):
    from scipy.special import xlogy
    s = p + q
    t = xlogy(p, p) - xlogy(p, s) + xlogy(q, q) - xlogy(q, s)
    return (LOG_SCALE / 2.0) * t


def _cf_ratio(p, q):
    s = p + q
    return (p - q) / (2.0 * np.where(s > 0.0, s, 1.0))


def _cf_logcos(p, q):
    c = LOGCOS_SCALE
    u = _cf_ratio(p, q)
    return ((p + q) / 2.0) * (-1.0 / c) * np.log(np.cos(c * u) / np.cos(c / 2.0))


def _cf_cosh(p, q):
    c = COSH_SCALE
    u = _cf_ratio(p, q)
    return ((p + q) / 2.0) * (np.cosh(c * u) - np.cosh(c / 2.0))


def _cf_sec(p, q):
    c = SEC_SCALE
    u = _cf_ratio(p, q)
    return ((p + q) / 2.0) * (1.0 / np.cos(c * u) - 1.0 / np.cos(c / 2.0))


def _cf_poly(n):
    poly = build_poly_reward(n)
    k1, k2 = float(poly.k1), float(poly.k2)
    shifted = np.array([float(c) for c in poly.r_coefficients[1:]])

    def integrand(p, q):
        from numpy.polynomial import polynomial as npoly
        s = p + q
        eta = p / np.where(s > 0.0, s, 1.0)
        return 0.5 * k2 * p * (npoly.polyval(eta, shifted) + k1)

    return integrand


_CLOSED_FORMS = {
    "ls": _cf_ls,
    "exp": _cf_exp,
    "log": _cf_log,
    "log-cos": _cf_logcos,
    "cosh": _cf_cosh,
    "sec": _cf_sec,
}


def closed_form_bound(model: ClassConditionalModel, reward_name: str,
                      quad: QuadratureConfig | None = None) -> float:
    """Refinement evaluated directly in terms of the class conditionals.

    Available for the rewards whose integrands reduce to closed forms in
    P(x|+1) and P(x|-1); those forms assume equal priors.  Serves as an
    independent route against ``refinement_data``.
    """
    if model.prior != 0.5:
        raise UnsupportedConfigError(
            "closed-form bounds are only defined for equal priors")
    if reward_name in _CLOSED_FORMS:
        integrand_pq = _CLOSED_FORMS[reward_name]
    elif reward_name.startswith("poly-"):
        try:
            integrand_pq = _cf_poly(int(reward_name[5:]))
        except ValueError:
            raise RegistryError(f"unknown reward name {reward_name!r}") from None
    else:
        raise RegistryError(
            f"no closed-form refinement for reward {reward_name!r}")
    cfg = quad or QuadratureConfig()
    if _both_grids(model):
        widths, p, q = _grid_pieces(model)
        return float(np.sum(widths * integrand_pq(p, q)))

    def integrand(x):
        return integrand_pq(np.asarray(model.d_pos.pdf(x)),
                            np.asarray(model.d_neg.pdf(x)))

    return integrate_piecewise(integrand, _cuts(model, cfg, False), cfg)


# --- the elicitation setting ------------------------------------------------

def decompose_forecasts(records: ForecastRecordSet, reward,
                        bins: int = 20) -> Decomposition:
    """Bin forecasts on [0, 1] and split the expected score.

    Per occupied bin b: frequency s_b, mean prediction eta_hat_b and
    empirical positive frequency eta_b.  Calibration collects the proper
    penalties s_b * (I(eta_b, eta_hat_b) - J(eta_b)) <= 0; refinement
    collects s_b * J(eta_b).  Bins whose empirical or mean prediction sits
    at 0 or 1 while the reward's scores diverge there are evaluated at the
    clamped value and flagged.
    """
    J = resolve_reward(reward)
    if J.derivative is None:
        raise UnsupportedRewardError(
            f"decomposition needs a differentiable reward, not {J.name!r}")
    if bins < 1:
        raise ParameterError("bin count must be at least 1")
    pair = derive_scores(J)
    idx = np.minimum((records.eta_hat * bins).astype(int), bins - 1)
    n_total = len(records)
    calibration = 0.0
    refinement = 0.0
    per_bin = []
    for b in np.unique(idx):
        sel = idx == b
        freq = float(sel.sum()) / n_total
        eta_hat_b = float(records.eta_hat[sel].mean())
        eta_b = float((records.outcomes[sel] > 0).mean())
        cal = freq * (eta_b * (pair.i_pos(eta_hat_b) - pair.i_pos(eta_b))
                      + (1.0 - eta_b) * (pair.i_neg(eta_hat_b) - pair.i_neg(eta_b)))
        calibration += cal
        refinement += freq * float(J.value(eta_b))
        clamped = J.endpoint_divergent and (eta_b in (0.0, 1.0)
                                            or eta_hat_b in (0.0, 1.0))
        per_bin.append(BinStat(eta_hat=eta_hat_b, frequency=freq,
                               eta_emp=eta_b, clamped=clamped))
    return Decomposition(total=calibration + refinement,
                         calibration=calibration, refinement=refinement,
                         per_bin=tuple(per_bin))


def _map_centers(calibration_map, centers: np.ndarray) -> np.ndarray:
    try:
        mapped = np.asarray(calibration_map(centers), dtype=float)
        if mapped.shape != centers.shape:
            raise TypeError
    except (TypeError, ValueError):
        mapped = np.array([float(calibration_map(c)) for c in centers])
    if np.any(np.isnan(mapped)) or np.any((mapped < 0.0) | (mapped > 1.0)):
        raise DomainError("calibration map must send [0, 1] into [0, 1]")
    return mapped


def refinement_elicitation(s: GridDensity, calibration_map, reward) -> float:
    """Midpoint-rule refinement of a forecast density on [0, 1].

    ``calibration_map`` sends a prediction to the empirical frequency it
    realizes; the identity map models a calibrated forecaster.
    """
    J = resolve_reward(reward)
    if abs(s.lo) > 1e-12 or abs(s.hi - 1.0) > 1e-12:
        raise DomainError("forecast density must live on [0, 1]")
    eta = _map_centers(calibration_map, s.centers())
    return float(np.sum(s.mass * J.value(eta)) * s.delta)


def refinement_classifier_output(s_v: GridDensity, link, reward) -> float:
    """Midpoint-rule refinement of a classifier-output density.

    The density support must sit inside the link domain; bin centers are
    pushed through the inverse link and scored with J.
    """
    J = resolve_reward(reward)
    lf = get_link(link)
    if s_v.lo < lf.v_lo - 1e-12 or s_v.hi > lf.v_hi + 1e-12:
        raise DomainError(
            f"output density support exceeds the domain of link {lf.name!r}")
    eta = np.asarray(lf.inverse(s_v.centers()))
    return float(np.sum(s_v.mass * J.value(eta)) * s_v.delta)


def refinement_terms_table(model: ClassConditionalModel, reward,
                           xs) -> np.ndarray:
    """Pointwise table (x, P(x), J(eta(x)), P(x) J(eta(x))) for plotting."""
    J = resolve_reward(reward)
    arr = np.asarray(xs, dtype=float)
    weight = np.asarray(marginal(model, arr))
    scored = J.value(np.asarray(posterior(model, arr)))
    return np.column_stack([arr, weight, scored, weight * scored])
