"""Link functions, proper margin losses and reward/link composites.

A link f* maps a posterior eta to a classifier output v while implementing
the Bayes sign rule (positive above eta = 1/2, zero at 1/2).  Its inverse
recovers calibrated probabilities from raw outputs.  Composing a maximal
reward with an inverse link gives the quasi-convex curve J((f*)^-1(v)) that
scores an output distribution directly, and every classical margin loss is
recoverable from a reward/link pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import tan
from typing import Callable

import numpy as np
from scipy.special import expit

from .errors import DomainError, RegistryError
from .rewards import BOUND, LOSS, derive_scores, get_reward, resolve_reward

# Sentinel magnitude returned by logit-type links at eta in {0, 1};
# sized to the largest finite double exponent so expit round-trips.
LOGIT_SENTINEL = 709.0

LINK_NAMES = ("ls", "exp", "log", "savage", "tangent",
              "zero-one-a", "zero-one-b")


@dataclass(frozen=True)
class LinkFunction:
    """An invertible link: forward f* on (0, 1), inverse on [v_lo, v_hi].

    ``open_ends`` marks domains whose endpoints are excluded (the inverse
    would leave [0, 1] there).
    """

    name: str
    forward: Callable
    inverse: Callable
    v_lo: float
    v_hi: float
    open_ends: bool = False


@dataclass(frozen=True)
class MarginLoss:
    """A margin loss phi evaluated at v = y * f(x)."""

    name: str
    phi: Callable


def _logit(eta):
    arr = np.asarray(eta, dtype=float)
    with np.errstate(divide="ignore"):
        raw = np.log(arr) - np.log1p(-arr)
    out = np.where(arr <= 0.0, -LOGIT_SENTINEL,
                   np.where(arr >= 1.0, LOGIT_SENTINEL, raw))
    return float(out) if np.ndim(eta) == 0 else out


def _half_logit(eta):
    out = 0.5 * np.asarray(_logit(eta))
    return float(out) if np.ndim(eta) == 0 else out


_REGISTRY: dict[str, LinkFunction] = {
    "ls": LinkFunction("ls", lambda e: 2.0 * np.asarray(e, float) - 1.0,
                       lambda v: (1.0 + np.asarray(v, float)) / 2.0,
                       -1.0, 1.0),
    "exp": LinkFunction("exp", _half_logit,
                        lambda v: expit(2.0 * np.asarray(v, float)),
                        -np.inf, np.inf),
    "log": LinkFunction("log", _logit,
                        lambda v: expit(np.asarray(v, float)),
                        -np.inf, np.inf),
    "savage": LinkFunction("savage", _logit,
                           lambda v: expit(np.asarray(v, float)),
                           -np.inf, np.inf),
    "tangent": LinkFunction("tangent",
                            lambda e: np.tan(np.asarray(e, float) - 0.5),
                            lambda v: np.arctan(np.asarray(v, float)) + 0.5,
                            -tan(0.5), tan(0.5), open_ends=True),
    "zero-one-a": LinkFunction("zero-one-a",
                               lambda e: 2.0 * np.asarray(e, float) - 1.0,
                               lambda v: (1.0 + np.asarray(v, float)) / 2.0,
                               -1.0, 1.0),
    "zero-one-b": LinkFunction("zero-one-b", _logit,
                               lambda v: expit(np.asarray(v, float)),
                               -np.inf, np.inf),
}

# Margin losses paired with their optimal links; same names as the rewards
# they descend from (loss-family scaling).
_LOSSES: dict[str, MarginLoss] = {
    "ls": MarginLoss("ls", lambda v: 0.5 * (1.0 - np.asarray(v, float)) ** 2),
    "exp": MarginLoss("exp", lambda v: np.exp(-np.asarray(v, float))),
    "log": MarginLoss("log", lambda v: np.logaddexp(0.0, -np.asarray(v, float))),
    "savage": MarginLoss("savage",
                         lambda v: 4.0 * expit(-np.asarray(v, float)) ** 2),
    "tangent": MarginLoss("tangent",
                          lambda v: (2.0 * np.arctan(np.asarray(v, float)) - 1.0) ** 2),
}

# Named reward/link pairs whose composites have closed forms worth plotting:
# the two zero-one rows reuse the ls and log link shapes.
COMPOSITE_PAIRS: dict[str, tuple[str, str]] = {
    "zero-one-a": ("zero-one", "zero-one-a"),
    "zero-one-b": ("zero-one", "zero-one-b"),
    "ls": ("ls", "ls"),
    "exp": ("exp", "exp"),
    "log": ("log", "log"),
    "savage": ("savage", "savage"),
    "tangent": ("tangent", "tangent"),
}


def get_link(name) -> LinkFunction:
    if isinstance(name, LinkFunction):
        return name
    link = _REGISTRY.get(name)
    if link is None:
        raise RegistryError(
            f"unknown link name {name!r}; known: {', '.join(LINK_NAMES)}")
    return link


def get_margin_loss(name) -> MarginLoss:
    if isinstance(name, MarginLoss):
        return name
    loss = _LOSSES.get(name)
    if loss is None:
        raise RegistryError(
            f"unknown margin loss {name!r}; known: {', '.join(_LOSSES)}")
    return loss


def _check_domain(link: LinkFunction, v):
    arr = np.asarray(v, dtype=float)
    inside = (arr >= link.v_lo) & (arr <= link.v_hi)
    if link.open_ends:
        inside &= (arr > link.v_lo) & (arr < link.v_hi)
    if not np.all(inside):
        raise DomainError(
            f"output value outside the domain of link {link.name!r}")
    return arr


def link_eval(name, eta):
    """f*(eta): classifier output for a posterior in [0, 1]."""
    link = get_link(name)
    arr = np.asarray(eta, dtype=float)
    if np.any(np.isnan(arr)) or np.any((arr < 0.0) | (arr > 1.0)):
        raise DomainError("eta must lie in [0, 1]")
    out = link.forward(arr)
    return float(out) if np.ndim(eta) == 0 else out


def inverse_link_eval(name, v):
    """(f*)^-1(v): calibrated probability for an output in the link domain."""
    link = get_link(name)
    arr = _check_domain(link, v)
    out = link.inverse(arr)
    return float(out) if np.ndim(v) == 0 else out


def loss_from_reward(reward, link, v, family: str = LOSS):
    """Margin loss phi(v) = -J(u) - (1 - u) J'(u) at u = (f*)^-1(v).

    This is -I1(u); with the loss-family scaling it reproduces the classical
    margin losses for the registered reward/link pairs.
    """
    u = inverse_link_eval(link, v)
    pair = derive_scores(resolve_reward(reward, family))
    out = -np.asarray(pair.i_pos(u))
    return float(out) if np.ndim(v) == 0 else out


def composite_reward(reward, link, v, family: str = BOUND):
    """J((f*)^-1(v)) for any reward/link combination."""
    u = inverse_link_eval(link, v)
    out = np.asarray(resolve_reward(reward, family).value(np.asarray(u)))
    return float(out) if np.ndim(v) == 0 else out


def composite_by_name(name: str, v):
    """Evaluate one of the named reward/link composites."""
    try:
        reward_name, link_name = COMPOSITE_PAIRS[name]
    except KeyError:
        raise RegistryError(
            f"unknown composite {name!r}; known: {', '.join(COMPOSITE_PAIRS)}"
        ) from None
    return composite_reward(reward_name, link_name, v)


def score_loss_identity_check(reward_name: str, link_name: str, eta):
    """Evaluate both sides of I1 = -phi(f*) and I-1 = -phi(-f*).

    The left sides come from the reward's score pair, the right sides from
    the independently registered closed-form margin loss, so agreement is a
    real consistency check rather than an algebraic tautology.  Only the
    registered reward/link pairs have a closed-form loss.
    """
    if (reward_name, link_name) not in {(n, n) for n in _LOSSES}:
        raise RegistryError(
            f"no registered margin loss for the pair ({reward_name!r}, {link_name!r})")
    pair = derive_scores(get_reward(reward_name, LOSS))
    phi = get_margin_loss(reward_name).phi
    f = link_eval(link_name, eta)
    i_pos, i_neg = pair.i_pos(eta), pair.i_neg(eta)
    lhs_pos, rhs_pos = i_pos, -np.asarray(phi(f))
    lhs_neg, rhs_neg = i_neg, -np.asarray(phi(-np.asarray(f)))
    if np.ndim(eta) == 0:
        return (float(lhs_pos), float(rhs_pos), float(lhs_neg), float(rhs_neg))
    return (lhs_pos, rhs_pos, lhs_neg, rhs_neg)
