"""Dense complex matrix algebra for bipartite operators and states.

Operators are plain ``numpy`` complex arrays. Bipartite bookkeeping is carried
by :class:`BipartiteLayout`, passed explicitly wherever the tensor split matters
(partial transposition). Index convention: the composite basis index of
``|i> (x) |alpha>`` is ``i * d_b + alpha``, i.e. the first subsystem is the slow
index, matching ``numpy.kron``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import numpy.typing as npt

from sepcheck.errors import (
    DimensionMismatch,
    NonRealExpectation,
    NotDensityMatrix,
    NotHermitian,
)

HERM_TOL = 1e-9
TRACE_TOL = 1e-9
IMAG_TOL = 1e-9

ComplexArray = npt.NDArray[np.complex128]


class BipartiteLayout(NamedTuple):
    """Subsystem dimensions ``(d_a, d_b)`` of a bipartite Hilbert space."""

    d_a: int
    d_b: int

    @property
    def dim(self) -> int:
        return self.d_a * self.d_b

    @classmethod
    def parse(cls, text: str) -> BipartiteLayout:
        """Parse ``"2x3"`` into ``BipartiteLayout(2, 3)``."""
        try:
            a, b = (int(p) for p in text.lower().split("x"))
        except ValueError:
            raise DimensionMismatch(f"layout must look like '2x2', got {text!r}") from None
        return cls.checked(a, b)

    @classmethod
    def checked(cls, d_a: int, d_b: int) -> BipartiteLayout:
        if int(d_a) < 1 or int(d_b) < 1:
            raise DimensionMismatch(f"subsystem dimensions must be >= 1, got ({d_a}, {d_b})")
        return cls(int(d_a), int(d_b))

    def __str__(self) -> str:
        return f"{self.d_a}x{self.d_b}"


QUBITS = BipartiteLayout(2, 2)


def psd_tol_for(dim: int) -> float:
    return 1e-9 * dim


def as_operator(m: npt.ArrayLike) -> ComplexArray:
    """Coerce to a square complex128 array, raising DimensionMismatch otherwise."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {arr.shape}")
    return arr


def _check_layout(m: ComplexArray, layout: BipartiteLayout) -> None:
    if layout.d_a * layout.d_b != m.shape[0]:
        raise DimensionMismatch(
            f"layout {layout.d_a}x{layout.d_b} does not match operator dimension {m.shape[0]}"
        )


def hermiticity_error(m: npt.ArrayLike) -> float:
    """Max entrywise ``|m - m^dagger|``."""
    arr = as_operator(m)
    return float(np.max(np.abs(arr - arr.conj().T)))


def is_hermitian(m: npt.ArrayLike, tol: float = HERM_TOL) -> bool:
    return hermiticity_error(m) <= tol


def _require_hermitian(m: ComplexArray, tol: float, what: str = "operator") -> None:
    err = hermiticity_error(m)
    if err > tol:
        raise NotHermitian(f"{what} is not Hermitian: max |M - M^dagger| = {err:.3e} > {tol:.1e}")


def kron(a: npt.ArrayLike, b: npt.ArrayLike) -> ComplexArray:
    """Tensor product ``a (x) b``; entry ``(i*db + alpha, j*db + beta) = a[i,j] b[alpha,beta]``."""
    return np.kron(as_operator(a), as_operator(b))


def transpose(m: npt.ArrayLike) -> ComplexArray:
    return as_operator(m).T.copy()


def partial_transpose(m: npt.ArrayLike, layout: BipartiteLayout) -> ComplexArray:
    """Transpose the second subsystem only: ``out[i a, j b] = m[i b, j a]``.

    Raises
    ------
    DimensionMismatch
        If ``layout.d_a * layout.d_b`` differs from the operator dimension.
    """
    arr = as_operator(m)
    _check_layout(arr, layout)
    d_a, d_b = layout
    t = arr.reshape(d_a, d_b, d_a, d_b)
    return t.transpose(0, 3, 2, 1).reshape(d_a * d_b, d_a * d_b).copy()


def hermitian_eigenvalues(m: npt.ArrayLike, herm_tol: float = HERM_TOL) -> npt.NDArray[np.float64]:
    """Ascending real eigenvalues of a Hermitian matrix.

    The matrix is symmetrized before the LAPACK call so that round-off in the
    upper triangle (within ``herm_tol``) cannot bias the result.
    """
    arr = as_operator(m)
    _require_hermitian(arr, herm_tol)
    return np.linalg.eigvalsh(0.5 * (arr + arr.conj().T))


def is_psd(
    m: npt.ArrayLike, psd_tol: float | None = None, herm_tol: float = HERM_TOL
) -> tuple[bool, float]:
    """Return ``(min_eigenvalue >= -psd_tol, min_eigenvalue)``."""
    arr = as_operator(m)
    tol = psd_tol_for(arr.shape[0]) if psd_tol is None else psd_tol
    lam_min = float(hermitian_eigenvalues(arr, herm_tol)[0])
    return lam_min >= -tol, lam_min


def commutator(a: npt.ArrayLike, b: npt.ArrayLike) -> ComplexArray:
    a, b = as_operator(a), as_operator(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    return a @ b - b @ a


def anticommutator(a: npt.ArrayLike, b: npt.ArrayLike) -> ComplexArray:
    a, b = as_operator(a), as_operator(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    return a @ b + b @ a


@dataclass(frozen=True)
class DensityMatrix:
    """A validated state: Hermitian, unit trace and positive semidefinite.

    Validation happens on construction; no silent renormalization. Use
    :meth:`from_array` with ``renormalize=True`` to divide by the trace
    explicitly.

    Attributes
    ----------
    matrix : ndarray
        Read-only ``dim x dim`` complex array.
    layout : BipartiteLayout or None
        Bipartite split, required by criteria that partially transpose.
    """

    matrix: ComplexArray
    layout: BipartiteLayout | None = None
    herm_tol: float = HERM_TOL
    trace_tol: float = TRACE_TOL
    psd_tol: float | None = field(default=None)

    def __post_init__(self) -> None:
        arr = as_operator(self.matrix).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)
        if self.layout is not None:
            layout = BipartiteLayout.checked(*self.layout)
            _check_layout(arr, layout)
            object.__setattr__(self, "layout", layout)
        if self.psd_tol is None:
            object.__setattr__(self, "psd_tol", psd_tol_for(arr.shape[0]))

        err = hermiticity_error(arr)
        if err > self.herm_tol:
            raise NotHermitian(f"density matrix is not Hermitian: max |rho - rho^dagger| = {err:.3e}")
        tr = np.trace(arr).real
        if abs(tr - 1.0) > self.trace_tol:
            raise NotDensityMatrix(f"density matrix trace is {tr:.12g}, expected 1")
        lam_min = float(np.linalg.eigvalsh(0.5 * (arr + arr.conj().T))[0])
        if lam_min < -self.psd_tol:
            raise NotDensityMatrix(f"density matrix has negative eigenvalue {lam_min:.3e}")

    @classmethod
    def from_array(
        cls,
        m: npt.ArrayLike,
        layout: BipartiteLayout | tuple[int, int] | None = None,
        *,
        renormalize: bool = False,
        **tols: float,
    ) -> DensityMatrix:
        arr = as_operator(m)
        if renormalize:
            tr = np.trace(arr).real
            if tr <= 0:
                raise NotDensityMatrix(f"cannot renormalize a matrix with trace {tr:.3e}")
            arr = arr / tr
        lay = None if layout is None else BipartiteLayout(*layout)
        return cls(arr, lay, **tols)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def require_layout(self, layout: BipartiteLayout | None = None) -> BipartiteLayout:
        lay = layout if layout is not None else self.layout
        if lay is None:
            raise DimensionMismatch("a bipartite layout is required for this operation")
        lay = BipartiteLayout.checked(*lay)
        _check_layout(self.matrix, lay)
        return lay


def _as_state_array(rho: DensityMatrix | npt.ArrayLike) -> ComplexArray:
    return rho.matrix if isinstance(rho, DensityMatrix) else as_operator(rho)


def expectation(
    rho: DensityMatrix | npt.ArrayLike,
    m: npt.ArrayLike,
    herm_tol: float = HERM_TOL,
    imag_tol: float = IMAG_TOL,
) -> float:
    """Real expectation value ``tr(rho m)`` of a Hermitian observable."""
    r = _as_state_array(rho)
    op = as_operator(m)
    if r.shape != op.shape:
        raise DimensionMismatch(f"state is {r.shape[0]}-dimensional, observable is {op.shape[0]}")
    _require_hermitian(op, herm_tol, "observable")
    value = complex(np.sum(r * op.T))
    if abs(value.imag) > imag_tol:
        raise NonRealExpectation(f"tr(rho M) has imaginary part {value.imag:.3e}")
    return value.real
