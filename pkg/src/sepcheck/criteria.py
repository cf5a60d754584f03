"""Separability criteria.

Every check returns a :class:`Verdict`. ``margin`` measures how far the
separability condition is violated (positive means violated) and
``violated`` is always ``margin > tol``: margins within the decision tolerance
count as satisfied, so a separable state is never flagged because of
round-off.

The decision tolerance defaults to ``1e-9`` and can be overridden with the
``SEPCHECK_TOL`` environment variable or per call.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np
import numpy.typing as npt

from sepcheck.errors import DimensionMismatch, InputError, NotHermitian
from sepcheck.linalg import (
    QUBITS,
    BipartiteLayout,
    ComplexArray,
    DensityMatrix,
    anticommutator,
    as_operator,
    commutator,
    expectation,
    hermitian_eigenvalues,
    is_hermitian,
    kron,
    partial_transpose,
)
from sepcheck.spin import I4, X, Y, Z, SpinLabel, coupling_bounds, heisenberg_coupling, paper_operators

DEFAULT_TOL = 1e-9


def decision_tol() -> float:
    raw = os.environ.get("SEPCHECK_TOL")
    if raw is None or raw.strip() == "":
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise InputError(f"SEPCHECK_TOL must be a float, got {raw!r}") from None
    if not tol >= 0:
        raise InputError(f"SEPCHECK_TOL must be non-negative, got {raw!r}")
    return tol


@dataclass(frozen=True)
class CriterionConstants:
    """Reference Werner thresholds for the Bell-state family (report metadata)."""

    ppt: float = 1 / 3
    srur_paper: float = 1 / 3
    guhne: float = 1 / math.sqrt(3)
    gillet: float = 1 / 2
    bell: float = 1 / math.sqrt(2)

    def table(self) -> list[tuple[str, float]]:
        return [
            ("ppt", self.ppt),
            ("srur_paper", self.srur_paper),
            ("guhne", self.guhne),
            ("gillet", self.gillet),
            ("bell (CHSH)", self.bell),
        ]


CONSTANTS = CriterionConstants()


@dataclass(frozen=True)
class Verdict:
    criterion: str
    lhs: float
    rhs_or_bounds: float | tuple[float, float]
    margin: float
    violated: bool
    details: dict[str, float] = field(default_factory=dict)
    flags: tuple[str, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        rhs = list(self.rhs_or_bounds) if isinstance(self.rhs_or_bounds, tuple) else self.rhs_or_bounds
        return {
            "criterion": self.criterion,
            "lhs": self.lhs,
            "rhs_or_bounds": rhs,
            "margin": self.margin,
            "violated": self.violated,
            "details": dict(self.details),
            "flags": list(self.flags),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Verdict:
        rhs = data["rhs_or_bounds"]
        return cls(
            criterion=data["criterion"],
            lhs=float(data["lhs"]),
            rhs_or_bounds=tuple(float(v) for v in rhs) if isinstance(rhs, list) else float(rhs),
            margin=float(data["margin"]),
            violated=bool(data["violated"]),
            details={k: float(v) for k, v in data.get("details", {}).items()},
            flags=tuple(data.get("flags", ())),
        )

    def summary(self) -> str:
        state = "VIOLATED" if self.violated else "satisfied"
        if isinstance(self.rhs_or_bounds, tuple):
            lo, hi = self.rhs_or_bounds
            cond = f"lhs={self.lhs:.10g} in [{lo:.10g}, {hi:.10g}]"
        else:
            cond = f"lhs={self.lhs:.10g} rhs={self.rhs_or_bounds:.10g}"
        flags = f" flags={','.join(self.flags)}" if self.flags else ""
        return f"{self.criterion:<16} {state:<9} margin={self.margin:+.6e} {cond}{flags}"


def _verdict(
    criterion: str,
    lhs: float,
    rhs: float | tuple[float, float],
    margin: float,
    tol: float | None,
    details: dict[str, float] | None = None,
    flags: tuple[str, ...] = (),
) -> Verdict:
    tol = decision_tol() if tol is None else tol
    margin = float(margin)
    return Verdict(criterion, float(lhs), rhs, margin, margin > tol, details or {}, flags)


def _state(rho: DensityMatrix | npt.ArrayLike, layout: BipartiteLayout | None = None) -> DensityMatrix:
    if isinstance(rho, DensityMatrix):
        if layout is not None and rho.layout is None:
            return DensityMatrix(rho.matrix, layout)
        return rho
    return DensityMatrix.from_array(rho, layout)


def _qubit_state(rho: DensityMatrix | npt.ArrayLike) -> DensityMatrix:
    state = _state(rho, QUBITS if not isinstance(rho, DensityMatrix) else None)
    if state.dim != 4 or (state.layout is not None and tuple(state.layout) != (2, 2)):
        raise DimensionMismatch(f"criterion requires a 2x2 two-qubit state, got dimension {state.dim}")
    return state


# --- exact PPT oracle -------------------------------------------------------


def ppt_check(
    rho: DensityMatrix | npt.ArrayLike,
    layout: BipartiteLayout | None = None,
    tol: float | None = None,
) -> Verdict:
    """Peres-Horodecki test: margin is minus the smallest eigenvalue of ``rho^pt``.

    Necessary and sufficient for entanglement at layouts 2x2, 2x3 and 3x2,
    recorded by the ``exact`` flag.
    """
    state = _state(rho, layout)
    lay = state.require_layout(layout)
    lam = hermitian_eigenvalues(partial_transpose(state.matrix, lay))
    exact = sorted(lay) in ([2, 2], [2, 3]) or min(lay) == 1
    return _verdict(
        "ppt",
        lam[0],
        0.0,
        -lam[0],
        tol,
        {"min_eigenvalue": float(lam[0]), "negativity": float(-np.sum(lam[lam < 0]))},
        ("exact",) if exact else (),
    )


# --- conserved-quantity bound -----------------------------------------------


def invariant_bound_check(
    rho: DensityMatrix | npt.ArrayLike,
    j: SpinLabel | None = None,
    jp: SpinLabel | None = None,
    tol: float | None = None,
) -> Verdict:
    """Bound on ``<(S_a . S_b)^pt>`` that every separable state satisfies.

    For ``j >= j'`` the allowed interval is ``[-j'(j+1), j j']``. Spins default
    to those implied by the state's layout (``d = 2j + 1``).
    """
    state = _state(rho)
    if j is None or jp is None:
        lay = state.require_layout()
        j = SpinLabel.from_dim(lay.d_a) if j is None else j
        jp = SpinLabel.from_dim(lay.d_b) if jp is None else jp
    lay = BipartiteLayout(j.dim, jp.dim)
    if state.dim != lay.dim:
        raise DimensionMismatch(
            f"spins j={j.j}, j'={jp.j} need dimension {lay.dim}, state has {state.dim}"
        )
    coupling_pt = partial_transpose(heisenberg_coupling(j, jp), lay)
    v = expectation(state, coupling_pt)
    lo, hi = (float(b) for b in coupling_bounds(j, jp))
    return _verdict("invariant_bound", v, (lo, hi), max(v - hi, lo - v), tol, {"coupling_pt": v})


# --- two-qubit G criterion --------------------------------------------------

_G_OP = kron(X, X) - kron(Y, Y) + kron(Z, Z)
_G_WITNESS = I4 - _G_OP


def qubit_g_check(rho: DensityMatrix | npt.ArrayLike, tol: float | None = None) -> Verdict:
    """``G = <xx - yy + zz>`` must lie in ``[-3, 1]`` for separable two-qubit states.

    ``details["witness"]`` is ``<I - xx + yy - zz> = 1 - G``; it is negative
    exactly when the upper bound fails.
    """
    state = _qubit_state(rho)
    g = expectation(state, _G_OP)
    details = {"G": g, "witness": expectation(state, _G_WITNESS)}
    return _verdict("qubit_g", g, (-3.0, 1.0), max(g - 1.0, -3.0 - g), tol, details)


# --- Schrodinger-Robertson relation under partial transpose -----------------


def srur_check(
    rho: DensityMatrix | npt.ArrayLike,
    a: npt.ArrayLike,
    b: npt.ArrayLike,
    layout: BipartiteLayout | None = None,
    tol: float | None = None,
) -> Verdict:
    """Schrodinger-Robertson inequality evaluated on ``rho^pt``.

    Every expectation is moved onto the operators, ``<M>_{rho^pt} = <M^pt>_rho``,
    and squares are transposed as a whole (``(a^2)^pt``, not ``(a^pt)^2``):

        lhs = [<(a^2)^pt> - <a^pt>^2] [<(b^2)^pt> - <b^pt>^2]
        rhs = |<C^pt>|^2 / 4 + |<{a,b}^pt> - 2 <a^pt><b^pt>|^2 / 4

    with ``C = -i[a, b]``. A PPT state can never produce a negative
    PT-variance; when one shows up the ``degenerate_variance`` flag is set. If
    the product form cannot certify the violation on its own (both variances
    negative, or ``rhs - lhs`` within tolerance) the margin becomes the size of
    the most negative variance.
    """
    state = _state(rho, layout)
    lay = state.require_layout(layout)
    a, b = as_operator(a), as_operator(b)
    if a.shape != state.matrix.shape or b.shape != state.matrix.shape:
        raise DimensionMismatch("observables and state must have equal dimensions")
    for name, op in (("a", a), ("b", b)):
        if not is_hermitian(op):
            raise NotHermitian(f"observable {name} is not Hermitian")
    tol = decision_tol() if tol is None else tol

    def pt_mean(op: ComplexArray) -> float:
        return expectation(state, partial_transpose(op, lay))

    c = -1j * commutator(a, b)
    mean_a, mean_b = pt_mean(a), pt_mean(b)
    var_a = pt_mean(a @ a) - mean_a**2
    var_b = pt_mean(b @ b) - mean_b**2
    mean_c = pt_mean(c)
    mean_anti = pt_mean(anticommutator(a, b))
    lhs = var_a * var_b
    rhs = 0.25 * mean_c**2 + 0.25 * (mean_anti - 2 * mean_a * mean_b) ** 2
    margin = rhs - lhs

    flags: tuple[str, ...] = ()
    worst = min(var_a, var_b)
    if worst < -tol:
        flags = ("degenerate_variance",)
        if (var_a < -tol and var_b < -tol) or margin <= tol:
            margin = max(margin, -worst)
    details = {
        "mean_a_pt": mean_a,
        "mean_b_pt": mean_b,
        "var_a_pt": var_a,
        "var_b_pt": var_b,
        "mean_c_pt": mean_c,
        "mean_anticommutator_pt": mean_anti,
    }
    return _verdict("srur", lhs, rhs, margin, tol, details, flags)


def srur_paper_check(rho: DensityMatrix | npt.ArrayLike, tol: float | None = None) -> Verdict:
    """Two-qubit specialization with the fixed observables A, B, C, D.

    Separable states satisfy ``<D>^2 >= |<C^pt>|^2 / 4 + (<A^pt>^2 + <B^pt>^2) <D>``.
    """
    state = _qubit_state(rho)
    ops = paper_operators()
    d = expectation(state, ops.D_pt)
    c = expectation(state, ops.C_pt)
    a = expectation(state, ops.A_pt)
    b = expectation(state, ops.B_pt)
    lhs = d**2
    rhs = 0.25 * c**2 + (a**2 + b**2) * d
    details = {"mean_d": d, "mean_c_pt": c, "mean_a_pt": a, "mean_b_pt": b}
    return _verdict("srur_paper", lhs, rhs, rhs - lhs, tol, details)


# --- CHSH comparator --------------------------------------------------------

_S = 1 / math.sqrt(2)
_B0 = _S * (Z + X)
_B1 = _S * (Z - X)
_CHSH_OP = kron(Z, _B0) + kron(X, _B0) + kron(Z, _B1) - kron(X, _B1)


def chsh_check(rho: DensityMatrix | npt.ArrayLike, tol: float | None = None) -> Verdict:
    """CHSH value for fixed settings ``A0=z, A1=x, B0=(z+x)/sqrt2, B1=(z-x)/sqrt2``."""
    state = _qubit_state(rho)
    value = expectation(state, _CHSH_OP)
    return _verdict("chsh", abs(value), 2.0, abs(value) - 2.0, tol, {"chsh_value": value})


# --- registry ---------------------------------------------------------------

CRITERIA: dict[str, Callable[..., Verdict]] = {
    "ppt": ppt_check,
    "invariant_bound": invariant_bound_check,
    "qubit_g": qubit_g_check,
    "srur": lambda rho, tol=None: srur_check(
        rho, paper_operators().A, paper_operators().B, QUBITS, tol=tol
    ),
    "srur_paper": srur_paper_check,
    "chsh": chsh_check,
}
CRITERIA["srur"].__doc__ = "srur_check with the fixed two-qubit A and B."

QUBIT_ONLY = frozenset({"qubit_g", "srur", "srur_paper", "chsh"})


def applicable_criteria(layout: BipartiteLayout | None) -> list[str]:
    if layout is None:
        return []
    names = ["ppt"]
    if min(layout) >= 2:
        names.append("invariant_bound")
    if tuple(layout) == (2, 2):
        names += ["qubit_g", "srur", "srur_paper", "chsh"]
    return names


def evaluate(rho: DensityMatrix, criterion: str, tol: float | None = None) -> Verdict:
    try:
        fn = CRITERIA[criterion]
    except KeyError:
        raise InputError(f"unknown criterion {criterion!r}; choose from {', '.join(CRITERIA)}") from None
    return fn(rho, tol=tol)


def evaluate_all(rho: DensityMatrix, tol: float | None = None) -> list[Verdict]:
    return [evaluate(rho, name, tol) for name in applicable_criteria(rho.layout)]
