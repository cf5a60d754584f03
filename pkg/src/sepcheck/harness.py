"""Werner threshold bisection and randomized criterion comparison sweeps."""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import IO, Any

import numpy as np

from sepcheck.criteria import Verdict, applicable_criteria, evaluate
from sepcheck.errors import NonMonotone, ParameterOutOfRange
from sepcheck.linalg import BipartiteLayout, DensityMatrix
from sepcheck.states import WernerFamily, random_bell_diagonal, random_mixed

GRID_POINTS = 11
MAX_ITER = 200


@dataclass(frozen=True)
class ThresholdResult:
    """Smallest Werner weight ``x`` at which ``criterion`` fires.

    ``x_star`` is ``None`` when the criterion never fires on ``[0, 1]``
    (status ``"undetected"``).
    """

    criterion: str
    family: str
    x_star: float | None
    bracket: tuple[float, float] | None
    iterations: int
    reference: float | None = None
    status: str = "detected"

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out["bracket"] = list(self.bracket) if self.bracket else None
        return out


def _fires(family: WernerFamily, criterion: str, x: float, decision_tol: float | None) -> bool:
    return evaluate(family.density(x), criterion, decision_tol).violated


def threshold_bisect(
    family: WernerFamily,
    criterion: str,
    tol: float = 1e-9,
    *,
    reference: float | None = None,
    decision_tol: float | None = None,
) -> ThresholdResult:
    """Bisect the detection threshold of ``criterion`` along a Werner family.

    An 11-point grid scan on ``[0, 1]`` brackets the crossing first. More than
    one change of verdict along the grid raises :class:`NonMonotone`; no
    firing at all returns an ``"undetected"`` result.
    """
    if not tol > 0:
        raise ParameterOutOfRange(f"bisection tolerance must be positive, got {tol}")
    grid = np.linspace(0.0, 1.0, GRID_POINTS)
    fired = [_fires(family, criterion, float(x), decision_tol) for x in grid]
    changes = [k for k in range(1, GRID_POINTS) if fired[k] != fired[k - 1]]
    if len(changes) > 1 or (changes and fired[0]):
        raise NonMonotone(
            f"{criterion} verdict on {family.label} changes at x = "
            + ", ".join(f"{grid[k]:.1f}" for k in changes)
        )
    if not any(fired):
        return ThresholdResult(criterion, family.label, None, None, 0, reference, "undetected")
    if fired[0]:
        return ThresholdResult(criterion, family.label, 0.0, (0.0, 0.0), 0, reference)

    lo, hi = float(grid[changes[0] - 1]), float(grid[changes[0]])
    iterations = 0
    while hi - lo > tol and iterations < MAX_ITER:
        mid = 0.5 * (lo + hi)
        if _fires(family, criterion, mid, decision_tol):
            hi = mid
        else:
            lo = mid
        iterations += 1
    return ThresholdResult(criterion, family.label, 0.5 * (lo + hi), (lo, hi), iterations, reference)


def werner_reference(criterion: str, psi: np.ndarray) -> float | None:
    """Closed-form Werner threshold where one is known, else ``None``.

    Covers ``alpha|00> - beta|11>`` and ``alpha|01> - beta|10>`` kets.
    """
    psi = np.asarray(psi, dtype=np.complex128)
    support = tuple(np.flatnonzero(np.abs(psi) > 1e-12))
    if support not in ((0, 3), (1, 2), (0,), (3,), (1,), (2,)):
        return None
    i, k = (0, 3) if support[0] in (0, 3) else (1, 2)
    alpha, beta = psi[i], -psi[k]
    overlap = float((np.conj(alpha) * beta).real)
    if criterion == "ppt":
        c = abs(alpha * beta)
        return 1 / (1 + 4 * c) if c > 0 else None
    if criterion in ("srur_paper", "srur"):
        return 1 / (1 + 4 * overlap) if overlap > 0 else None
    if criterion in ("qubit_g", "invariant_bound") and (i, k) == (0, 3):
        return 1 / (1 - 4 * overlap) if overlap < 0 else None
    if criterion == "chsh" and (i, k) == (0, 3) and abs(overlap + 0.5) < 1e-12:
        return 1 / math.sqrt(2)
    return None


# --- comparison sweep -------------------------------------------------------

SAMPLERS = ("ginibre", "bell_diagonal")


@dataclass
class SweepReport:
    layout: BipartiteLayout
    criteria: list[str]
    rows: list[dict[str, Any]] = field(default_factory=list)
    summary: dict[str, dict[str, float]] = field(default_factory=dict)
    n_entangled: int = 0

    @property
    def columns(self) -> list[str]:
        cols = ["sample_id", "ppt_margin", "ppt_entangled"]
        for name in self.criteria:
            cols += [f"{name}_margin", f"{name}_violated"]
        return cols

    def write_csv(self, out: str | Path | IO[str]) -> None:
        if isinstance(out, (str, Path)):
            with open(out, "w", newline="") as fh:
                self.write_csv(fh)
            return
        writer = csv.DictWriter(out, fieldnames=self.columns)
        writer.writeheader()
        for row in self.rows:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})


def _sample(layout: BipartiteLayout, sampler: str, rng: np.random.Generator) -> DensityMatrix:
    if sampler == "bell_diagonal":
        return random_bell_diagonal(rng)
    return random_mixed(layout.dim, seed=rng, layout=layout)


def compare_sweep(
    n_samples: int,
    layout: BipartiteLayout,
    seed: int = 0,
    *,
    sampler: str = "ginibre",
    tol: float | None = None,
) -> SweepReport:
    """Evaluate every applicable criterion on random states against the PPT label.

    Sample ``k`` draws from its own stream ``default_rng([seed, k])`` so rows
    are reproducible regardless of evaluation order.
    """
    if n_samples < 0:
        raise ParameterOutOfRange(f"n_samples must be >= 0, got {n_samples}")
    layout = BipartiteLayout.checked(*layout)
    if sorted(layout) not in ([2, 2], [2, 3]):
        raise ParameterOutOfRange(f"compare needs an exact-PPT layout (2x2 or 2x3), got {layout}")
    if sampler not in SAMPLERS:
        raise ParameterOutOfRange(f"unknown sampler {sampler!r}; choose from {', '.join(SAMPLERS)}")
    if sampler == "bell_diagonal" and tuple(layout) != (2, 2):
        raise ParameterOutOfRange("the bell_diagonal sampler is two-qubit only")

    names = [n for n in applicable_criteria(layout) if n != "ppt"]
    report = SweepReport(layout, names)
    detected = dict.fromkeys(names, 0)
    false_pos = dict.fromkeys(names, 0)
    for k in range(n_samples):
        rho = _sample(layout, sampler, np.random.default_rng([seed, k]))
        ppt = evaluate(rho, "ppt", tol)
        row: dict[str, Any] = {
            "sample_id": k,
            "ppt_margin": ppt.margin,
            "ppt_entangled": ppt.violated,
        }
        report.n_entangled += ppt.violated
        for name in names:
            v: Verdict = evaluate(rho, name, tol)
            row[f"{name}_margin"] = v.margin
            row[f"{name}_violated"] = v.violated
            if v.violated:
                if ppt.violated:
                    detected[name] += 1
                else:
                    false_pos[name] += 1
        report.rows.append(row)

    for name in names:
        report.summary[name] = {
            "detected": detected[name],
            "detection_rate": detected[name] / report.n_entangled if report.n_entangled else 0.0,
            "false_positives": false_pos[name],
        }
    return report
