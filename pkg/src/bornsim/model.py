"""Label spaces attached to a state vector and the maps between them.

A hidden initial label (x0, y0), with modulus r0 at most the cutoff R, is
carried to the final label (x, y, n) by multiplication with the outcome
amplitude a + ib:

    x = a*x0 - b*y0
    y = a*y0 + b*x0

so the final modulus is r0 * |amp| and the final phase is the initial phase
shifted by the amplitude's phase. The admissible region for outcome n is the
closed disk x^2 + y^2 <= |amp_n|^2 * R^2. Under the uniform density
K = 1/(pi R^2) over the union of these disks, the probability of outcome n
is K times its disk area, which reduces to the squared modulus and does not
depend on R.

The Jacobian of the label map is a^2 + b^2, which is what makes the pulled
back density on (x0, y0) constant on the disk of radius R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigError, DegenerateOutcomeError
from .hilbert import StateVector, amplitude

__all__ = [
    "InitialLabel",
    "FinalLabel",
    "ModelConfig",
    "final_from_initial",
    "initial_from_final",
    "jacobian",
    "region_contains",
    "disk_area",
    "normalization_K",
    "closed_form_P",
    "wrap_angle",
]


def wrap_angle(t: float) -> float:
    """Map an atan2 result onto (-pi, pi]; the angle at the origin is 0."""
    return math.pi if t == -math.pi else t


@dataclass(frozen=True)
class InitialLabel:
    """Hidden pre-measurement coordinates (x0, y0), r0 <= R for its config."""

    x0: float
    y0: float

    @property
    def r0(self) -> float:
        return math.hypot(self.x0, self.y0)

    @property
    def theta0(self) -> float:
        return wrap_angle(math.atan2(self.y0, self.x0))


@dataclass(frozen=True)
class FinalLabel:
    """Post-measurement coordinates (x, y) and outcome index n."""

    x: float
    y: float
    n: int

    @property
    def r(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def theta(self) -> float:
        return wrap_angle(math.atan2(self.y, self.x))


@dataclass(frozen=True)
class ModelConfig:
    """A state vector plus the positive cutoff R bounding hidden moduli.

    Outputs are provably independent of R; the default 1.0 keeps
    floating-point noise minimal.
    """

    state: StateVector
    R: float = 1.0

    def __post_init__(self) -> None:
        R = float(self.R)
        if not math.isfinite(R) or R <= 0.0:
            raise ConfigError(f"cutoff R must be positive and finite, got {self.R!r}")
        object.__setattr__(self, "R", R)

    @cached_property
    def moduli(self) -> np.ndarray:
        """Per-outcome amplitude moduli |amp_n|."""
        arr = np.abs(self.state.amps)
        arr.flags.writeable = False
        return arr

    @cached_property
    def disk_bound_sq(self) -> np.ndarray:
        """Per-outcome squared disk radii |amp_n|^2 * R^2.

        Shared by the region test and the sampler so both apply the exact
        same floating-point threshold.
        """
        arr = (self.moduli**2) * (self.R * self.R)
        arr.flags.writeable = False
        return arr

    @cached_property
    def pi_r_sq(self) -> float:
        """Area pi * R^2 of the full proposal disk."""
        return math.pi * (self.R * self.R)


def final_from_initial(cfg: ModelConfig, init: InitialLabel, n: int) -> FinalLabel:
    """Carry an initial label to the final label for outcome n.

    Multiplies (x0 + i y0) by the outcome amplitude, so the modulus scales
    by |amp_n| and the phase shifts by the amplitude's phase.
    """
    amp = amplitude(cfg.state, n)
    a, b = amp.real, amp.imag
    return FinalLabel(x=a * init.x0 - b * init.y0, y=a * init.y0 + b * init.x0, n=n)


def initial_from_final(cfg: ModelConfig, fin: FinalLabel) -> InitialLabel:
    """Invert the label map: divide (x + iy) by the outcome amplitude.

    Raises DegenerateOutcomeError when the amplitude is zero; the map sends
    every initial label to the origin there and has no inverse.
    """
    amp = amplitude(cfg.state, fin.n)
    a, b = amp.real, amp.imag
    den = a * a + b * b
    if den == 0.0:
        raise DegenerateOutcomeError(
            f"outcome {fin.n} has zero amplitude; the label map is not invertible"
        )
    x0 = (fin.x * a + fin.y * b) / den
    y0 = (fin.y * a - fin.x * b) / den
    return InitialLabel(x0=x0, y0=y0)


def jacobian(amp: complex) -> float:
    """Determinant of the linear label map for one outcome: a^2 + b^2."""
    return amp.real * amp.real + amp.imag * amp.imag


def region_contains(cfg: ModelConfig, x: float, y: float, n: int) -> bool:
    """True iff (x, y) lies in outcome n's closed disk x^2 + y^2 <= |amp_n|^2 R^2."""
    _check_outcome(cfg, n)
    return x * x + y * y <= cfg.disk_bound_sq[n]


def disk_area(cfg: ModelConfig, n: int) -> float:
    """Area pi * |amp_n|^2 * R^2 of outcome n's disk."""
    _check_outcome(cfg, n)
    return float(cfg.moduli[n] ** 2 * cfg.pi_r_sq)


def normalization_K(cfg: ModelConfig) -> float:
    """Uniform density 1 / (pi R^2) that makes the disk areas sum to probability 1."""
    return 1.0 / cfg.pi_r_sq


def closed_form_P(cfg: ModelConfig, n: int) -> float:
    """Outcome probability as normalized disk area.

    Algebraically the squared modulus of the outcome amplitude: the pi R^2
    factors cancel, so the value is independent of R (to a few ulp).
    """
    return disk_area(cfg, n) / cfg.pi_r_sq


def _check_outcome(cfg: ModelConfig, n: int) -> None:
    if not 0 <= n < cfg.state.dim:
        raise IndexError(f"outcome index {n} out of range for dimension {cfg.state.dim}")
