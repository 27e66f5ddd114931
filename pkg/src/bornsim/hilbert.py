"""Finite-dimensional complex state vectors in a fixed measurement basis.

States are stored directly as amplitude arrays in the eigenbasis of the
measured observable, so basis states are just indices 0..N-1 and an
amplitude is a plain complex number. Vectors are immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidAmplitudeError, ZeroStateError

# Construction-time tolerance on |sum |amps|^2 - 1| for double precision.
NORM_TOL = 1e-12


@dataclass(frozen=True)
class StateVector:
    """Normalized amplitude list; entry j is the coefficient on basis state j.

    Build instances through :func:`normalize` (or :func:`tensor`); the
    constructor only checks the invariants.
    """

    amps: np.ndarray

    def __post_init__(self) -> None:
        amps = np.array(self.amps, dtype=np.complex128)
        if amps.ndim != 1 or amps.size < 1:
            raise ValueError("amplitudes must form a non-empty 1-d sequence")
        if not np.all(np.isfinite(amps)):
            raise InvalidAmplitudeError("state vector contains a non-finite amplitude")
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValueError(
                f"state vector is not normalized: sum of squared moduli is {norm_sq!r}"
            )
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    @property
    def dim(self) -> int:
        return self.amps.size

    def __len__(self) -> int:
        return self.amps.size


def normalize(raw) -> StateVector:
    """Scale a raw amplitude sequence to unit norm.

    Raises ZeroStateError when every entry is zero and InvalidAmplitudeError
    when any entry is NaN or infinite.
    """
    arr = np.asarray(raw, dtype=np.complex128)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("amplitudes must form a non-empty 1-d sequence")
    if not np.all(np.isfinite(arr)):
        raise InvalidAmplitudeError("input contains a non-finite amplitude")
    norm_sq = np.sum(np.abs(arr) ** 2)
    if norm_sq == 0.0:
        raise ZeroStateError("cannot normalize an all-zero amplitude list")
    return StateVector(arr / np.sqrt(norm_sq))


def amplitude(state: StateVector, n: int) -> complex:
    """Coefficient of the state on basis index n."""
    _check_index(state, n)
    return complex(state.amps[n])


def born_probability(state: StateVector, n: int) -> float:
    """Squared modulus of the coefficient on basis index n."""
    _check_index(state, n)
    return float(np.abs(state.amps[n]) ** 2)


def born_probabilities(state: StateVector) -> np.ndarray:
    """Squared moduli of all coefficients; sums to 1 within NORM_TOL."""
    return np.abs(state.amps) ** 2


def tensor(particle: StateVector, apparatus: StateVector) -> StateVector:
    """Product state of two normalized factors.

    Joint index (j, k) is flattened row-major with the particle index major,
    so entry j * apparatus.dim + k equals particle[j] * apparatus[k].
    """
    return StateVector(np.kron(particle.amps, apparatus.amps))


def _check_index(state: StateVector, n: int) -> None:
    if not 0 <= n < state.dim:
        raise IndexError(f"outcome index {n} out of range for dimension {state.dim}")
