"""Scenario documents: the JSON experiment description the CLI consumes.

A scenario is a single JSON object. Complex amplitudes are [re, im] pairs.
Exactly one of "state" (a list of pairs) or "composite" (an object with
"particle" and "apparatus" pair lists) must be present. All other fields
have explicit defaults so a run is fully reproducible from the file alone.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .hilbert import StateVector, normalize

__all__ = ["CHECKS", "DEFAULT_CHECKS", "Scenario", "parse_scenario", "load_scenario"]

CHECKS = ("born", "cutoff", "initial_uniformity", "disk_uniformity", "quadrature")
DEFAULT_CHECKS = ("born", "quadrature")

_KNOWN_FIELDS = {
    "name",
    "state",
    "composite",
    "R",
    "samples",
    "seed",
    "workers",
    "alpha",
    "grid",
    "checks",
}


@dataclass(frozen=True)
class Scenario:
    """Validated experiment description."""

    name: str
    state: np.ndarray | None
    composite: tuple[np.ndarray, np.ndarray] | None
    R: float
    samples: int
    seed: int
    workers: int
    alpha: float
    grid: int
    checks: tuple[str, ...]

    def resolve_state(self) -> StateVector:
        """Normalized state the run uses.

        Composite inputs are combined (row-major, particle index major)
        before the single normalization pass, so a composite scenario and
        its pre-combined single-state equivalent resolve to identical bits.
        """
        if self.composite is not None:
            particle, apparatus = self.composite
            raw = np.kron(particle, apparatus)
        else:
            raw = self.state
        return normalize(raw)

    def echo(self) -> dict:
        """JSON-ready copy of the result-determining fields, defaults filled in.

        Execution details (worker count, wall time) are excluded: results are
        provably independent of them, and reports from runs that differ only
        in execution setup must stay byte-identical.
        """
        doc: dict = {"name": self.name}
        if self.composite is not None:
            doc["composite"] = {
                "particle": _pairs(self.composite[0]),
                "apparatus": _pairs(self.composite[1]),
            }
        else:
            doc["state"] = _pairs(self.state)
        doc.update(
            R=self.R,
            samples=self.samples,
            seed=self.seed,
            alpha=self.alpha,
            grid=self.grid,
            checks=list(self.checks),
        )
        return doc


def _pairs(amps: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in amps]


def _amplitudes(value, field: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"field '{field}': expected a non-empty list of [re, im] pairs")
    out = np.empty(len(value), dtype=np.complex128)
    for i, entry in enumerate(value):
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in entry)
        ):
            raise ConfigError(f"field '{field}[{i}]': expected an [re, im] number pair")
        re, im = float(entry[0]), float(entry[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise ConfigError(f"field '{field}[{i}]': amplitude must be finite")
        out[i] = complex(re, im)
    if not np.any(out != 0):
        raise ConfigError(f"field '{field}': all amplitudes are zero")
    return out


def _integer(doc: dict, field: str, default, minimum: int, maximum: int | None = None) -> int:
    value = doc.get(field, default)
    if value is None:
        raise ConfigError(f"field '{field}': required")
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError(f"field '{field}': expected an integer, got {value!r}")
    if value < minimum or (maximum is not None and value > maximum):
        hi = f" and at most {maximum}" if maximum is not None else ""
        raise ConfigError(f"field '{field}': must be at least {minimum}{hi}, got {value}")
    return value


def _number(doc: dict, field: str, default: float) -> float:
    value = doc.get(field, default)
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"field '{field}': expected a number, got {value!r}")
    return float(value)


def parse_scenario(doc: dict) -> Scenario:
    """Validate a decoded JSON object and fill defaults."""
    if not isinstance(doc, dict):
        raise ConfigError("scenario must be a JSON object")
    unknown = sorted(set(doc) - _KNOWN_FIELDS)
    if unknown:
        raise ConfigError(f"unknown field(s): {', '.join(unknown)}")

    name = doc.get("name", "scenario")
    if not isinstance(name, str) or not name:
        raise ConfigError(f"field 'name': expected a non-empty string, got {name!r}")

    has_state = "state" in doc
    has_composite = "composite" in doc
    if has_state == has_composite:
        raise ConfigError("exactly one of 'state' or 'composite' must be present")

    state = None
    composite = None
    if has_state:
        state = _amplitudes(doc["state"], "state")
        state.flags.writeable = False
    else:
        comp = doc["composite"]
        if not isinstance(comp, dict) or set(comp) != {"particle", "apparatus"}:
            raise ConfigError(
                "field 'composite': expected an object with 'particle' and 'apparatus'"
            )
        particle = _amplitudes(comp["particle"], "composite.particle")
        apparatus = _amplitudes(comp["apparatus"], "composite.apparatus")
        particle.flags.writeable = False
        apparatus.flags.writeable = False
        composite = (particle, apparatus)

    R = _number(doc, "R", 1.0)
    if not math.isfinite(R) or R <= 0.0:
        raise ConfigError(f"field 'R': must be positive and finite, got {R!r}")

    samples = _integer(doc, "samples", None, minimum=1)
    seed = _integer(doc, "seed", 0, minimum=0, maximum=2**64 - 1)
    workers = _integer(doc, "workers", 1, minimum=1)
    grid = _integer(doc, "grid", 4096, minimum=64)

    alpha = _number(doc, "alpha", 0.001)
    if not 0.0 < alpha < 1.0:
        raise ConfigError(f"field 'alpha': must lie strictly between 0 and 1, got {alpha!r}")

    checks_raw = doc.get("checks", list(DEFAULT_CHECKS))
    if not isinstance(checks_raw, list) or not all(isinstance(c, str) for c in checks_raw):
        raise ConfigError(f"field 'checks': expected a list of check names, got {checks_raw!r}")
    bad = sorted(set(checks_raw) - set(CHECKS))
    if bad:
        raise ConfigError(
            f"field 'checks': unknown check(s) {', '.join(bad)}; valid: {', '.join(CHECKS)}"
        )
    checks = tuple(c for c in CHECKS if c in checks_raw)
    if not checks:
        raise ConfigError("field 'checks': at least one check is required")

    return Scenario(
        name=name,
        state=state,
        composite=composite,
        R=R,
        samples=samples,
        seed=seed,
        workers=workers,
        alpha=alpha,
        grid=grid,
        checks=checks,
    )


def load_scenario(path: str | Path) -> Scenario:
    """Read and validate a scenario file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return parse_scenario(doc)
