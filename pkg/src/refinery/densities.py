"""One-dimensional class-conditional density models.

Two density shapes cover everything downstream: piecewise-constant
histograms on a fixed interval (GridDensity) and analytic normals
(GaussianDensity).  ClassConditionalModel bundles a conditional pair with a
class-1 prior and yields the posterior eta(x) and the data marginal.
DiscreteJoint holds small categorical joints over (x[, z], y) for the
feature-scoring paths.  All types are immutable value objects.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import sqrt, tau

import numpy as np

from .errors import EstimationError, InputError, ParameterError

# Below this both class conditionals are treated as dead mass and the
# posterior falls back to the prior.
DENSITY_FLOOR = 1e-300

# Additive smoothing applied to every discrete joint cell before
# renormalizing; keeps the logarithms downstream finite.
SMOOTH_EPS = 1e-9


@dataclass(frozen=True)
class GridDensity:
    """Histogram density: k equal-width bins on [lo, hi], unit total mass."""

    lo: float
    hi: float
    mass: np.ndarray

    def __post_init__(self):
        mass = np.array(self.mass, dtype=float)
        mass.flags.writeable = False
        object.__setattr__(self, "mass", mass)
        if not self.hi > self.lo:
            raise ParameterError("histogram needs lo < hi")
        if mass.ndim != 1 or mass.size < 1:
            raise ParameterError("histogram mass must be a nonempty vector")
        if not np.all(np.isfinite(mass)) or np.any(mass < 0.0):
            raise ParameterError("histogram mass must be finite and nonnegative")
        if abs(mass.sum() * self.delta - 1.0) > 1e-9:
            raise ParameterError("histogram mass must integrate to 1")

    @property
    def k(self) -> int:
        return self.mass.size

    @property
    def delta(self) -> float:
        return (self.hi - self.lo) / self.mass.size

    def edges(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.k + 1)

    def centers(self) -> np.ndarray:
        return self.lo + (np.arange(self.k) + 0.5) * self.delta

    def pdf(self, x):
        arr = np.asarray(x, dtype=float)
        idx = np.clip(((arr - self.lo) / self.delta).astype(int), 0, self.k - 1)
        out = np.where((arr >= self.lo) & (arr <= self.hi), self.mass[idx], 0.0)
        return float(out) if np.ndim(x) == 0 else out

    @classmethod
    def from_function(cls, fn, lo: float, hi: float, k: int) -> "GridDensity":
        """Sample fn at bin centers and normalize to unit mass."""
        centers = lo + (np.arange(k) + 0.5) * (hi - lo) / k
        vals = np.asarray(fn(centers), dtype=float)
        if np.any(vals < 0.0) or not np.all(np.isfinite(vals)):
            raise ParameterError("density function must be finite and nonnegative")
        total = vals.sum() * (hi - lo) / k
        if total <= 0.0:
            raise ParameterError("density function vanishes on [lo, hi]")
        return cls(lo=lo, hi=hi, mass=vals / total)

    @classmethod
    def from_point_masses(cls, lo: float, hi: float, k: int, points) -> "GridDensity":
        """Place weighted point masses into their containing bins."""
        delta = (hi - lo) / k
        mass = np.zeros(k)
        for x, w in points:
            idx = min(max(int((x - lo) / delta), 0), k - 1)
            mass[idx] += w / delta
        return cls(lo=lo, hi=hi, mass=mass)


@dataclass(frozen=True)
class GaussianDensity:
    """Normal density with mean mu and standard deviation sigma > 0."""

    mu: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise ParameterError("sigma must be positive")

    def pdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mu) / self.sigma
        out = np.exp(-0.5 * z * z) / (self.sigma * sqrt(tau))
        return float(out) if np.ndim(x) == 0 else out


@dataclass(frozen=True)
class ClassConditionalModel:
    """Class conditionals P(x|+1), P(x|-1) and the class-1 prior."""

    d_pos: GridDensity | GaussianDensity
    d_neg: GridDensity | GaussianDensity
    prior: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.prior < 1.0:
            raise ParameterError("prior must lie strictly inside (0, 1)")

    def swapped(self) -> "ClassConditionalModel":
        """The same model with the class labels exchanged."""
        return replace(self, d_pos=self.d_neg, d_neg=self.d_pos,
                       prior=1.0 - self.prior)

    def posterior(self, x):
        return posterior(self, x)

    def marginal(self, x):
        return marginal(self, x)


def posterior(model: ClassConditionalModel, x):
    """P(+1 | x).  Where both conditionals are dead mass, the prior."""
    p = np.asarray(model.d_pos.pdf(x), dtype=float)
    q = np.asarray(model.d_neg.pdf(x), dtype=float)
    num = model.prior * p
    den = num + (1.0 - model.prior) * q
    dead = (p < DENSITY_FLOOR) & (q < DENSITY_FLOOR)
    out = np.where(dead, model.prior, num / np.where(den > 0.0, den, 1.0))
    return float(out) if np.ndim(x) == 0 else out


def marginal(model: ClassConditionalModel, x):
    """The data marginal P(x) = prior * P(x|+1) + (1 - prior) * P(x|-1)."""
    p = np.asarray(model.d_pos.pdf(x), dtype=float)
    q = np.asarray(model.d_neg.pdf(x), dtype=float)
    out = model.prior * p + (1.0 - model.prior) * q
    return float(out) if np.ndim(x) == 0 else out


def histogram_from_samples(samples, k: int, lo: float, hi: float) -> GridDensity:
    """Estimate a GridDensity from samples by equal-width binning.

    Samples outside [lo, hi] are counted into the nearest edge bin; a value
    exactly at hi lands in the last bin.  Errors out when no sample lies
    inside the interval at all.
    """
    arr = np.asarray(samples, dtype=float).ravel()
    if k < 1:
        raise ParameterError("bin count must be at least 1")
    if not hi > lo:
        raise ParameterError("histogram needs lo < hi")
    if arr.size == 0 or not np.any((arr >= lo) & (arr <= hi)):
        raise EstimationError("no samples inside [lo, hi]")
    delta = (hi - lo) / k
    idx = np.clip(((arr - lo) / delta).astype(int), 0, k - 1)
    counts = np.bincount(idx, minlength=k).astype(float)
    return GridDensity(lo=lo, hi=hi, mass=counts / (arr.size * delta))


@dataclass(frozen=True)
class DiscreteJoint:
    """Joint probability table over (x, y) or (x, z, y).

    The last axis has length 2 and indexes the label: 0 is y = -1,
    1 is y = +1.  Cells are nonnegative and sum to 1.
    """

    table: np.ndarray

    def __post_init__(self):
        table = np.array(self.table, dtype=float)
        table.flags.writeable = False
        object.__setattr__(self, "table", table)
        if table.ndim not in (2, 3) or table.shape[-1] != 2:
            raise ParameterError(
                "joint table must be (|X|, 2) or (|X|, |Z|, 2)")
        if np.any(table < 0.0) or not np.all(np.isfinite(table)):
            raise ParameterError("joint cells must be finite and nonnegative")
        if abs(table.sum() - 1.0) > 1e-12:
            raise ParameterError("joint cells must sum to 1")

    @property
    def has_z(self) -> bool:
        return self.table.ndim == 3

    def p_y(self) -> np.ndarray:
        axes = tuple(range(self.table.ndim - 1))
        return self.table.sum(axis=axes)

    def p_cells(self) -> np.ndarray:
        """P(x) or P(x, z): the label-marginalized cell masses."""
        return self.table.sum(axis=-1)

    def posterior_pos(self) -> np.ndarray:
        """P(+1 | x) or P(+1 | x, z) per cell."""
        cells = self.p_cells()
        return self.table[..., 1] / np.where(cells > 0.0, cells, 1.0)

    def marginal_x(self) -> "DiscreteJoint":
        """Collapse the z axis, keeping (x, y).  No extra smoothing."""
        if not self.has_z:
            return self
        return DiscreteJoint(table=self.table.sum(axis=1))


def _map_labels(labels) -> np.ndarray:
    arr = np.asarray(labels)
    values = set(np.unique(arr).tolist())
    if values <= {0, 1}:
        return np.where(arr == 0, -1, 1).astype(int)
    if values <= {-1, 1}:
        return arr.astype(int)
    raise InputError(f"labels must be -1/+1 or 0/1, got {sorted(values)}")


def joint_from_table(table) -> DiscreteJoint:
    """Normalize a nonnegative count or probability table into a joint.

    Every cell receives SMOOTH_EPS of additive smoothing before the
    renormalization, so no cell is ever exactly zero.
    """
    arr = np.asarray(table, dtype=float)
    if arr.ndim not in (2, 3) or arr.shape[-1] != 2:
        raise ParameterError("joint table must be (|X|, 2) or (|X|, |Z|, 2)")
    if np.any(arr < 0.0) or not np.all(np.isfinite(arr)):
        raise ParameterError("joint cells must be finite and nonnegative")
    total = arr.sum()
    if total <= 0.0:
        raise ParameterError("joint table must carry positive mass")
    smoothed = arr / total + SMOOTH_EPS
    return DiscreteJoint(table=smoothed / smoothed.sum())


def joint_from_samples(rows) -> DiscreteJoint:
    """Empirical joint from rows (x, y) or (x, z, y); the last column is y.

    Category axes are indexed by the sorted unique values seen in the data.
    """
    arr = np.asarray(rows)
    if arr.size == 0:
        raise EstimationError("cannot estimate a joint from no rows")
    if arr.ndim != 2 or arr.shape[1] not in (2, 3):
        raise InputError("rows must be (x, y) pairs or (x, z, y) triples")
    y = _map_labels(arr[:, -1])
    y_idx = (y > 0).astype(int)
    _, x_idx = np.unique(arr[:, 0], return_inverse=True)
    if arr.shape[1] == 3:
        _, z_idx = np.unique(arr[:, 1], return_inverse=True)
        counts = np.zeros((x_idx.max() + 1, z_idx.max() + 1, 2))
        np.add.at(counts, (x_idx, z_idx, y_idx), 1.0)
    else:
        counts = np.zeros((x_idx.max() + 1, 2))
        np.add.at(counts, (x_idx, y_idx), 1.0)
    return joint_from_table(counts)
