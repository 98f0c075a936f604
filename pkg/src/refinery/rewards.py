"""Maximal reward functions and proper score pairs for binary forecasts.

A maximal reward J maps a class-1 probability eta in [0, 1] to the expected
score a truthful forecaster attains.  Every registered J is nonpositive,
symmetric about 1/2 and convex.  The same shapes appear in the literature
under several scalings, and the scalings do not mix, so three families are
kept apart:

* ``bound``   -- normalized so J(1/2) is -1/2; used for Bayes-error bounds.
* ``loss``    -- the scaling that pairs with the classical margin losses.
* ``natural`` -- the unnormalized log reward in nats; used wherever exact
  entropy identities matter.

The log, log-cos, cosh and sec members carry literal scale constants with
four to five significant digits.  They are used as printed, never recomputed,
so their midpoint normalization is only approximate: J(1/2) can sit up to
about 3.3e-5 away from -1/2.  The remaining members (ls, exp, zero-one and
the polynomial family) are normalized to machine precision.  The
``midpoint_exact`` flag records which case a member falls in.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import xlogy

from .errors import DomainError, RegistryError, UnsupportedRewardError

BOUND = "bound"
LOSS = "loss"
NATURAL = "natural"
FAMILIES = (BOUND, LOSS, NATURAL)

# Fixed literal scale constants (4-5 significant digits).
LOG_SCALE = 0.7213       # ~ 1 / (2 ln 2)
LOGCOS_SCALE = 2.5854    # ~ 2t where cos(t) = exp(-t)
COSH_SCALE = 1.9248      # ~ 2 acosh(3/2)
SEC_SCALE = 1.6821       # ~ 2 acos(2/3)

# Clamp applied to eta before score evaluation; keeps members whose
# derivatives diverge at the endpoints finite.
SCORE_CLAMP = 1e-12

REWARD_NAMES = (
    "zero-one", "ls", "exp", "log", "log-cos", "cosh", "sec",
    "savage", "tangent", "log-natural", "poly-<n>",
)


@dataclass(frozen=True)
class MaximalReward:
    """A named maximal reward J with an optional derivative.

    ``value`` accepts a float or ndarray in [0, 1] and returns J(eta) <= 0.
    ``derivative`` is defined on (0, 1) and is ``None`` for the kinked
    zero-one member.  ``endpoint_divergent`` marks members whose score
    functions blow up at eta in {0, 1}; ``midpoint_exact`` marks whether
    J(1/2) equals -1/2 to machine precision or only to the precision of the
    literal scale constants.
    """

    name: str
    family: str
    value: Callable
    derivative: Callable | None = None
    endpoint_divergent: bool = False
    midpoint_exact: bool = True

    def __call__(self, eta):
        return self.value(eta)


@dataclass(frozen=True)
class ScorePair:
    """Score functions (I1, I-1) of a strictly proper scoring rule.

    I1 is nondecreasing, I-1 nonincreasing, and
    eta * I1(eta) + (1 - eta) * I-1(eta) reconstructs J(eta).
    """

    i_pos: Callable
    i_neg: Callable
    source: str


def _as_prob(eta, what="eta"):
    arr = np.asarray(eta, dtype=float)
    if np.any(np.isnan(arr)) or np.any((arr < 0.0) | (arr > 1.0)):
        raise DomainError(f"{what} must lie in [0, 1]")
    return arr


def _scalar_like(result, template):
    if np.ndim(template) == 0:
        return float(result)
    return result


# --- value / derivative implementations (assume validated input) ----------

def _ls(e):
    return 2.0 * e * (e - 1.0)


def _ls_d(e):
    return 4.0 * e - 2.0


def _parabola4(e):
    return -4.0 * e * (1.0 - e)


def _parabola4_d(e):
    return 8.0 * e - 4.0


def _exp_bound(e):
    return -np.sqrt(e * (1.0 - e))


def _exp_bound_d(e):
    return (2.0 * e - 1.0) / (2.0 * np.sqrt(e * (1.0 - e)))


def _exp_loss(e):
    return -2.0 * np.sqrt(e * (1.0 - e))


def _exp_loss_d(e):
    return (2.0 * e - 1.0) / np.sqrt(e * (1.0 - e))


def _nat_log(e):
    return xlogy(e, e) + xlogy(1.0 - e, 1.0 - e)


def _nat_log_d(e):
    return np.log(e) - np.log1p(-e)


def _log_bound(e):
    return LOG_SCALE * _nat_log(e)


def _log_bound_d(e):
    return LOG_SCALE * _nat_log_d(e)


def _logcos(e):
    c = LOGCOS_SCALE
    return (-1.0 / c) * np.log(np.cos(c * (e - 0.5)) / np.cos(c / 2.0))


def _logcos_d(e):
    return np.tan(LOGCOS_SCALE * (e - 0.5))


def _cosh(e):
    c = COSH_SCALE
    return np.cosh(c * (0.5 - e)) - np.cosh(c / 2.0)


def _cosh_d(e):
    c = COSH_SCALE
    return -c * np.sinh(c * (0.5 - e))


def _sec(e):
    c = SEC_SCALE
    return 1.0 / np.cos(c * (0.5 - e)) - 1.0 / np.cos(c / 2.0)


def _sec_d(e):
    c = SEC_SCALE
    t = c * (0.5 - e)
    return -c * np.tan(t) / np.cos(t)


def _zero_one(e):
    return -np.minimum(e, 1.0 - e)


def _member(name, family, value, derivative=None, divergent=False, exact=True):
    return MaximalReward(name=name, family=family, value=value,
                         derivative=derivative, endpoint_divergent=divergent,
                         midpoint_exact=exact)


_REGISTRY: dict[str, dict[str, MaximalReward]] = {
    "zero-one": {
        BOUND: _member("zero-one", BOUND, _zero_one),
    },
    "ls": {
        BOUND: _member("ls", BOUND, _ls, _ls_d),
        LOSS: _member("ls", LOSS, _ls, _ls_d),
    },
    "exp": {
        BOUND: _member("exp", BOUND, _exp_bound, _exp_bound_d, divergent=True),
        LOSS: _member("exp", LOSS, _exp_loss, _exp_loss_d, divergent=True),
    },
    "log": {
        BOUND: _member("log", BOUND, _log_bound, _log_bound_d,
                       divergent=True, exact=False),
        LOSS: _member("log", LOSS, _nat_log, _nat_log_d, divergent=True),
    },
    "log-cos": {
        BOUND: _member("log-cos", BOUND, _logcos, _logcos_d, exact=False),
    },
    "cosh": {
        BOUND: _member("cosh", BOUND, _cosh, _cosh_d, exact=False),
    },
    "sec": {
        BOUND: _member("sec", BOUND, _sec, _sec_d, exact=False),
    },
    "savage": {
        BOUND: _member("savage", BOUND, _ls, _ls_d),
        LOSS: _member("savage", LOSS, _parabola4, _parabola4_d),
    },
    "tangent": {
        BOUND: _member("tangent", BOUND, _ls, _ls_d),
        LOSS: _member("tangent", LOSS, _parabola4, _parabola4_d),
    },
    "log-natural": {
        NATURAL: _member("log-natural", NATURAL, _nat_log, _nat_log_d,
                         divergent=True),
    },
}

_DEFAULT_FAMILY = {name: BOUND for name in _REGISTRY}
_DEFAULT_FAMILY["log-natural"] = NATURAL


def get_reward(name: str, family: str | None = None) -> MaximalReward:
    """Look up a registered reward by name, optionally forcing a scaling.

    ``poly-<n>`` names are built on demand from the polynomial family.
    """
    if name.startswith("poly-"):
        if family not in (None, BOUND):
            raise RegistryError(
                f"polynomial rewards only exist in the {BOUND!r} scaling")
        try:
            order = int(name[5:])
        except ValueError:
            raise RegistryError(f"unknown reward name {name!r}") from None
        from .polynomial import build_poly_reward
        return build_poly_reward(order).as_reward
    entry = _REGISTRY.get(name)
    if entry is None:
        known = ", ".join(REWARD_NAMES)
        raise RegistryError(f"unknown reward name {name!r}; known: {known}")
    fam = family if family is not None else _DEFAULT_FAMILY[name]
    if fam not in FAMILIES:
        raise RegistryError(f"unknown scaling family {fam!r}")
    if fam not in entry:
        raise RegistryError(f"reward {name!r} has no {fam!r} scaling")
    return entry[fam]


def resolve_reward(reward, family: str | None = None) -> MaximalReward:
    """Accept either a reward name or a MaximalReward and return the latter."""
    if isinstance(reward, MaximalReward):
        return reward
    if isinstance(reward, str):
        return get_reward(reward, family)
    raise RegistryError(f"cannot interpret {reward!r} as a reward")


def eval_reward(name, eta, family: str | None = None):
    """Evaluate the named reward at eta (scalar or array) in [0, 1]."""
    reward = resolve_reward(name, family)
    arr = _as_prob(eta)
    return _scalar_like(reward.value(arr), eta)


def derive_scores(reward) -> ScorePair:
    """Derive the score pair I1 = J + (1-eta) J', I-1 = J - eta J'.

    eta is clamped to [SCORE_CLAMP, 1 - SCORE_CLAMP] before evaluation so
    members with diverging endpoint derivatives stay finite.
    """
    reward = resolve_reward(reward)
    if reward.derivative is None:
        raise UnsupportedRewardError(
            f"reward {reward.name!r} is not differentiable; no score pair")
    j, jp = reward.value, reward.derivative

    def i_pos(eta):
        e = np.clip(_as_prob(eta), SCORE_CLAMP, 1.0 - SCORE_CLAMP)
        return _scalar_like(j(e) + (1.0 - e) * jp(e), eta)

    def i_neg(eta):
        e = np.clip(_as_prob(eta), SCORE_CLAMP, 1.0 - SCORE_CLAMP)
        return _scalar_like(j(e) - e * jp(e), eta)

    return ScorePair(i_pos=i_pos, i_neg=i_neg, source=reward.name)


def expected_conditional_score(reward, eta, eta_hat):
    """Expected score eta * I1(eta_hat) + (1 - eta) * I-1(eta_hat).

    By properness the result never exceeds J(eta), with equality at
    eta_hat == eta.
    """
    reward = resolve_reward(reward)
    e = _as_prob(eta)
    pair = derive_scores(reward)
    return _scalar_like(e * pair.i_pos(eta_hat) + (1.0 - e) * pair.i_neg(eta_hat), eta)


def registered_bound_rewards() -> tuple[str, ...]:
    """Names of the non-polynomial rewards that carry a bound scaling."""
    return tuple(n for n, e in _REGISTRY.items() if BOUND in e)
