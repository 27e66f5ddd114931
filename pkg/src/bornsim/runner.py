"""Scenario execution pipeline and report serialization.

run_scenario resolves the state, runs the requested checks, and returns a
RunReport whose JSON form is canonical: keys sorted, floats in shortest
round-trip form, LF line endings. Identical scenario plus tool version
yields byte-identical report files, so wall time is reported on the console
only, never serialized.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ReportIOError
from .hilbert import born_probabilities
from .model import ModelConfig, closed_form_P
from .sampler import (
    LANES,
    RNG_ALGORITHM,
    RNG_PROVIDER,
    SampleBatch,
    SamplerConfig,
    recover_initials,
    sample_batch,
)
from .scenario import Scenario
from .stats import (
    EmpiricalDistribution,
    chi_square_gof,
    chi_square_homogeneity,
    ks_uniformity,
    marginalize,
    quadrature_probabilities,
)

__all__ = ["RunReport", "run_scenario", "emit_report", "CUTOFF_SCALE", "QUAD_TOL_AT_4096"]

# Second cutoff used in the cutoff-invariance check. Any positive value works;
# this one is fixed so reports are comparable, and is deliberately not round.
CUTOFF_SCALE = 7.3

# Midpoint quadrature error budget at the reference grid; scaled as O(1/grid)
# for other grid sizes.
QUAD_TOL_AT_4096 = 2e-3

# Stream key for the second batch of the cutoff check. Reusing the scenario
# seed verbatim would replay the same acceptance pattern (acceptance events
# are scale invariant), making the homogeneity test vacuous.
_CUTOFF_SEED_MASK = 0x9E3779B97F4A7C15

_SAMPLING_CHECKS = {"born", "cutoff", "initial_uniformity", "disk_uniformity"}


@dataclass(frozen=True)
class RunReport:
    """Everything a run produced; `payload` is the serializable view."""

    scenario: dict
    resolved_state: list[list[float]]
    outcomes: list[dict]
    checks: list[dict]
    all_passed: bool
    rng: dict
    version: str
    wall_time_s: float

    def payload(self) -> dict:
        return {
            "scenario": self.scenario,
            "resolved_state": self.resolved_state,
            "outcomes": self.outcomes,
            "checks": self.checks,
            "all_passed": self.all_passed,
            "rng": self.rng,
            "version": self.version,
        }

    def to_json(self) -> str:
        return json.dumps(self.payload(), sort_keys=True, indent=2) + "\n"


def run_scenario(s: Scenario) -> RunReport:
    """Execute every requested check and assemble the report."""
    t0 = time.perf_counter()
    state = s.resolve_state()
    cfg = ModelConfig(state=state, R=s.R)
    born = born_probabilities(state)
    dim = state.dim

    batch: SampleBatch | None = None
    emp: EmpiricalDistribution | None = None
    if _SAMPLING_CHECKS & set(s.checks):
        batch = sample_batch(SamplerConfig(model=cfg, seed=s.seed, workers=s.workers), s.samples)
        emp = marginalize(batch, dim)

    quad: np.ndarray | None = None
    checks: list[dict] = []
    for check in s.checks:
        if check == "born":
            checks.append(chi_square_gof(emp, born, s.alpha, name="born_gof").to_dict())
        elif check == "quadrature":
            quad = quadrature_probabilities(cfg, s.grid)
            checks.append(_quadrature_check(born, quad, s.grid))
        elif check == "cutoff":
            checks.append(_cutoff_check(s, cfg, emp))
        elif check == "initial_uniformity":
            checks.extend(_initial_uniformity_checks(s, cfg, batch))
        elif check == "disk_uniformity":
            checks.extend(_disk_uniformity_checks(s, cfg, batch))

    outcomes = _outcome_table(cfg, born, emp, quad)
    wall = time.perf_counter() - t0
    return RunReport(
        scenario=s.echo(),
        resolved_state=[[float(z.real), float(z.imag)] for z in state.amps],
        outcomes=outcomes,
        checks=checks,
        all_passed=all(c["passed"] for c in checks),
        rng={"algorithm": RNG_ALGORITHM, "provider": RNG_PROVIDER, "lanes": LANES},
        version=__version__,
        wall_time_s=wall,
    )


def _outcome_table(cfg, born, emp, quad) -> list[dict]:
    rows = []
    for n in range(cfg.state.dim):
        rows.append(
            {
                "n": n,
                "A": float(cfg.moduli[n]),
                "born": float(born[n]),
                "count": int(emp.counts[n]) if emp is not None else None,
                "empirical": float(emp.counts[n] / emp.total) if emp is not None else None,
                "quadrature": float(quad[n]) if quad is not None else None,
            }
        )
    return rows


def _quadrature_check(born, quad, grid: int) -> dict:
    tolerance = QUAD_TOL_AT_4096 * 4096.0 / grid
    err = float(np.max(np.abs(quad - born)))
    return {
        "name": "quadrature_agreement",
        "grid": grid,
        "max_abs_error": err,
        "tolerance": tolerance,
        "passed": err <= tolerance,
    }


def _cutoff_check(s: Scenario, cfg: ModelConfig, emp: EmpiricalDistribution) -> dict:
    """Re-derive everything at a second cutoff and compare.

    The closed form must agree to 1e-12; the two empirical marginals
    (independent streams) must pass a homogeneity test at alpha.
    """
    alt = ModelConfig(state=cfg.state, R=CUTOFF_SCALE * cfg.R)
    closed_diff = max(
        abs(closed_form_P(cfg, n) - closed_form_P(alt, n)) for n in range(cfg.state.dim)
    )
    closed_ok = closed_diff <= 1e-12
    seed_alt = s.seed ^ _CUTOFF_SEED_MASK
    batch_alt = sample_batch(
        SamplerConfig(model=alt, seed=seed_alt, workers=s.workers), s.samples
    )
    emp_alt = marginalize(batch_alt, cfg.state.dim)
    homogeneity = chi_square_homogeneity(emp, emp_alt, s.alpha, name="cutoff_homogeneity")
    return {
        "name": "cutoff_invariance",
        "R": cfg.R,
        "R_alt": alt.R,
        "closed_form_max_diff": float(closed_diff),
        "closed_form_tolerance": 1e-12,
        "homogeneity": homogeneity.to_dict(),
        "passed": closed_ok and homogeneity.passed,
    }


def _initial_uniformity_checks(s: Scenario, cfg: ModelConfig, batch: SampleBatch) -> list[dict]:
    """Recovered initial labels must be uniform on the disk of radius R.

    Uniformity on a disk means the squared radius is uniform on [0, R^2]
    and the angle is uniform on (-pi, pi]; each gets a KS test.
    """
    initials = recover_initials(SamplerConfig(model=cfg, seed=s.seed), batch)
    r0_sq = initials.x0**2 + initials.y0**2
    theta0 = np.arctan2(initials.y0, initials.x0)
    reports = [
        ks_uniformity(r0_sq, 0.0, cfg.R * cfg.R, s.alpha, name="initial_r0_squared_uniform"),
        ks_uniformity(theta0, -np.pi, np.pi, s.alpha, name="initial_theta0_uniform"),
    ]
    return [r.to_dict() for r in reports]


def _disk_uniformity_checks(s: Scenario, cfg: ModelConfig, batch: SampleBatch) -> list[dict]:
    """Conditional on each outcome, labels must be uniform on that outcome's disk."""
    out = []
    bounds = cfg.disk_bound_sq
    for n in range(cfg.state.dim):
        sel = batch.n == n
        if not np.any(sel):
            continue
        x = batch.x[sel]
        y = batch.y[sel]
        r_sq_scaled = (x * x + y * y) / bounds[n]
        phi = np.arctan2(y, x)
        out.append(
            ks_uniformity(
                r_sq_scaled, 0.0, 1.0, s.alpha, name=f"disk_r_squared_uniform_n{n}"
            ).to_dict()
        )
        out.append(
            ks_uniformity(phi, -np.pi, np.pi, s.alpha, name=f"disk_phi_uniform_n{n}").to_dict()
        )
    return out


def emit_report(report: RunReport, format: str, path: str | Path) -> None:
    """Write the report as canonical JSON or as the per-outcome CSV table.

    The CSV form also writes a companion histogram file ('<stem>.hist.csv',
    columns n,count) whenever the run sampled. Empty cells mark columns whose
    check did not run.
    """
    path = Path(path)
    if format == "json":
        _write_text(path, report.to_json())
    elif format == "csv":
        lines = ["n,A,born,empirical,quadrature"]
        for row in report.outcomes:
            lines.append(
                ",".join(
                    [
                        str(row["n"]),
                        repr(row["A"]),
                        repr(row["born"]),
                        "" if row["empirical"] is None else repr(row["empirical"]),
                        "" if row["quadrature"] is None else repr(row["quadrature"]),
                    ]
                )
            )
        _write_text(path, "\n".join(lines) + "\n")
        if any(row["count"] is not None for row in report.outcomes):
            hist = ["n,count"]
            hist += [f"{row['n']},{row['count']}" for row in report.outcomes]
            _write_text(path.with_name(path.stem + ".hist.csv"), "\n".join(hist) + "\n")
    else:
        raise ValueError(f"unknown report format {format!r}")


def _write_text(path: Path, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ReportIOError(f"cannot write report to {path}: {exc}") from exc
