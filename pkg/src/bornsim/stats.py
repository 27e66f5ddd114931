"""Empirical distributions, goodness-of-fit tests, and a quadrature oracle.

P-values come from scipy.special: the regularized upper incomplete gamma
function for the chi-square survival function, and the asymptotic Kolmogorov
series (standard sqrt(m) scaling, no small-sample correction) for the
one-sample KS test. The statistics themselves are computed directly here.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaincc, kolmogorov

from .errors import ConfigError, RangeError
from .model import ModelConfig
from .sampler import SampleBatch

__all__ = [
    "EmpiricalDistribution",
    "TestReport",
    "marginalize",
    "chi_square_gof",
    "chi_square_homogeneity",
    "ks_uniformity",
    "quadrature_P",
    "quadrature_probabilities",
]

# Out-of-range slack for KS inputs; recovered values can exceed their
# mathematical range by a few ulp.
_KS_SLACK = 1e-9


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Per-outcome counts with their total."""

    counts: np.ndarray
    total: int

    def __post_init__(self) -> None:
        counts = np.array(self.counts, dtype=np.int64)
        if counts.ndim != 1 or counts.size < 1:
            raise ConfigError("counts must form a non-empty 1-d sequence")
        if np.any(counts < 0):
            raise ConfigError("counts must be non-negative")
        if int(counts.sum()) != self.total or self.total <= 0:
            raise ConfigError(
                f"total {self.total!r} does not match counts summing to {int(counts.sum())}"
            )
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)

    @property
    def frequencies(self) -> np.ndarray:
        return self.counts / self.total


@dataclass(frozen=True)
class TestReport:
    """Outcome of one hypothesis test at significance alpha."""

    name: str
    statistic: float
    p_value: float
    alpha: float
    passed: bool
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "alpha": self.alpha,
            "passed": self.passed,
            "params": dict(self.params),
        }


def marginalize(batch: SampleBatch, dim: int) -> EmpiricalDistribution:
    """Count batch labels per outcome; the empirical marginal over n."""
    if len(batch) == 0:
        raise ConfigError("cannot marginalize an empty batch")
    n = np.asarray(batch.n)
    if int(n.min()) < 0 or int(n.max()) >= dim:
        raise IndexError(f"batch contains an outcome outside 0..{dim - 1}")
    counts = np.bincount(n, minlength=dim)
    return EmpiricalDistribution(counts=counts, total=len(batch))


def chi_square_gof(
    emp: EmpiricalDistribution, expected, alpha: float, name: str = "chi_square_gof"
) -> TestReport:
    """Pearson goodness-of-fit test of counts against expected probabilities.

    Categories with expected probability zero are dropped from the statistic
    and the degrees of freedom; a nonzero count in such a category is a hard
    error, not a statistical failure.
    """
    expected = np.asarray(expected, dtype=float)
    counts = emp.counts
    if expected.shape != counts.shape:
        raise ConfigError(
            f"expected probabilities have shape {expected.shape}, counts {counts.shape}"
        )
    if abs(float(expected.sum()) - 1.0) > 1e-9:
        raise ConfigError(f"expected probabilities sum to {float(expected.sum())!r}, not 1")
    if np.any((counts > 0) & (expected <= 0.0)):
        raise ConfigError("observed count in a zero-probability category")
    mask = expected > 0.0
    if emp.total * float(expected[mask].min()) < 5.0:
        warnings.warn(
            "smallest expected count is below 5; the chi-square approximation is weak",
            stacklevel=2,
        )
    exp_counts = emp.total * expected[mask]
    stat = float(np.sum((counts[mask] - exp_counts) ** 2 / exp_counts))
    dof = int(mask.sum()) - 1
    p = float(gammaincc(dof / 2.0, stat / 2.0)) if dof > 0 else 1.0
    return TestReport(
        name=name,
        statistic=stat,
        p_value=p,
        alpha=alpha,
        passed=p >= alpha,
        params={"dof": dof, "total": emp.total},
    )


def chi_square_homogeneity(
    emp_a: EmpiricalDistribution,
    emp_b: EmpiricalDistribution,
    alpha: float,
    name: str = "chi_square_homogeneity",
) -> TestReport:
    """Two-sample chi-square test that two count vectors share one distribution.

    Expected cell counts come from the pooled marginal; categories with
    pooled count zero are dropped.
    """
    if emp_a.counts.shape != emp_b.counts.shape:
        raise ConfigError("count vectors must have the same length")
    table = np.stack([emp_a.counts, emp_b.counts]).astype(float)
    pooled = table.sum(axis=0)
    keep = pooled > 0
    table = table[:, keep]
    pooled = pooled[keep]
    grand = pooled.sum()
    row = table.sum(axis=1)
    expected = np.outer(row, pooled) / grand
    stat = float(np.sum((table - expected) ** 2 / expected))
    dof = int(keep.sum()) - 1
    p = float(gammaincc(dof / 2.0, stat / 2.0)) if dof > 0 else 1.0
    return TestReport(
        name=name,
        statistic=stat,
        p_value=p,
        alpha=alpha,
        passed=p >= alpha,
        params={"dof": dof, "total_a": emp_a.total, "total_b": emp_b.total},
    )


def ks_uniformity(
    values, lo: float, hi: float, alpha: float, name: str = "ks_uniformity"
) -> TestReport:
    """One-sample Kolmogorov-Smirnov test against the uniform law on [lo, hi]."""
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ConfigError("need a non-empty 1-d sample")
    if not hi > lo:
        raise ConfigError(f"need hi > lo, got [{lo!r}, {hi!r}]")
    if float(v.min()) < lo - _KS_SLACK or float(v.max()) > hi + _KS_SLACK:
        raise RangeError(f"sample value outside [{lo!r}, {hi!r}] beyond slack")
    m = v.size
    cdf = np.clip((np.sort(v) - lo) / (hi - lo), 0.0, 1.0)
    steps = np.arange(1, m + 1) / m
    d_plus = float(np.max(steps - cdf))
    d_minus = float(np.max(cdf - (steps - 1.0 / m)))
    stat = max(d_plus, d_minus)
    p = float(kolmogorov(math.sqrt(m) * stat))
    return TestReport(
        name=name,
        statistic=stat,
        p_value=p,
        alpha=alpha,
        passed=p >= alpha,
        params={"n": m},
    )


def quadrature_probabilities(cfg: ModelConfig, grid: int) -> np.ndarray:
    """Outcome probabilities by midpoint-rule area integration.

    Counts grid-cell centers of the square [-R, R]^2 falling in each outcome
    disk and normalizes by the count over all outcomes. The integrand is an
    indicator, so the midpoint rule converges at O(1/grid) from the boundary;
    counts are integers, making the result independent of summation order.
    """
    if not isinstance(grid, int) or isinstance(grid, bool) or grid < 64:
        raise ConfigError(f"grid must be an integer of at least 64, got {grid!r}")
    R = cfg.R
    bounds = cfg.disk_bound_sq
    dim = bounds.size
    step = 2.0 * R / grid
    centers = -R + (np.arange(grid) + 0.5) * step
    counts = np.zeros(dim, dtype=np.int64)
    # Row chunks keep the r^2 workspace small at large grids.
    chunk = max(1, (1 << 22) // grid)
    for start in range(0, grid, chunk):
        ys = centers[start : start + chunk]
        r_sq = centers[np.newaxis, :] ** 2 + ys[:, np.newaxis] ** 2
        for j in range(dim):
            counts[j] += int(np.count_nonzero(r_sq <= bounds[j]))
    total = int(counts.sum())
    if total == 0:
        raise ConfigError("no grid cell falls inside any outcome disk")
    return counts / total


def quadrature_P(cfg: ModelConfig, n: int, grid: int) -> float:
    """Midpoint-rule probability of outcome n; see quadrature_probabilities."""
    if not 0 <= n < cfg.state.dim:
        raise IndexError(f"outcome index {n} out of range for dimension {cfg.state.dim}")
    return float(quadrature_probabilities(cfg, grid)[n])
