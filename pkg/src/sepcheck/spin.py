"""Pauli matrices, spin-j operators, Heisenberg coupling and the fixed two-qubit observables."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from sepcheck.errors import ParameterOutOfRange
from sepcheck.linalg import ComplexArray, kron

_PAULI = {
    "x": ((0, 1), (1, 0)),
    "y": ((0, -1j), (1j, 0)),
    "z": ((1, 0), (0, -1)),
}

I2 = np.eye(2, dtype=np.complex128)
I4 = np.eye(4, dtype=np.complex128)


def pauli(axis: str) -> ComplexArray:
    """The 2x2 Pauli matrix for ``axis`` in ``{"x", "y", "z"}``."""
    try:
        return np.array(_PAULI[axis.lower()], dtype=np.complex128)
    except KeyError:
        raise ParameterOutOfRange(f"unknown Pauli axis {axis!r}") from None


X, Y, Z = pauli("x"), pauli("y"), pauli("z")


class SpinLabel(NamedTuple):
    """Spin quantum number stored as ``2j`` so half-integers stay exact."""

    two_j: int

    @classmethod
    def from_j(cls, j: float | Fraction | str) -> SpinLabel:
        two_j = Fraction(j) * 2
        if two_j.denominator != 1 or two_j < 1:
            raise ParameterOutOfRange(f"j must be a positive integer or half-integer, got {j}")
        return cls(int(two_j))

    @classmethod
    def from_dim(cls, dim: int) -> SpinLabel:
        if dim < 2:
            raise ParameterOutOfRange(f"a spin system needs dimension >= 2, got {dim}")
        return cls(dim - 1)

    @property
    def j(self) -> Fraction:
        return Fraction(self.two_j, 2)

    @property
    def dim(self) -> int:
        return self.two_j + 1


def _label(j: SpinLabel | int) -> SpinLabel:
    label = j if isinstance(j, SpinLabel) else SpinLabel(int(j))
    if label.two_j < 1:
        raise ParameterOutOfRange(f"two_j must be >= 1, got {label.two_j}")
    return label


@lru_cache(maxsize=None)
def _spin_operators(two_j: int) -> tuple[ComplexArray, ComplexArray, ComplexArray]:
    j = two_j / 2
    m = j - np.arange(two_j + 1)  # +j, j-1, ..., -j
    raise_elems = np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1))
    s_plus = np.diag(raise_elems, 1).astype(np.complex128)
    s_minus = s_plus.conj().T
    sx = 0.5 * (s_plus + s_minus)
    sy = -0.5j * (s_plus - s_minus)
    sz = np.diag(m).astype(np.complex128)
    for op in (sx, sy, sz):
        op.setflags(write=False)
    return sx, sy, sz


def spin_operators(j: SpinLabel | int) -> tuple[ComplexArray, ComplexArray, ComplexArray]:
    """Return ``(Sx, Sy, Sz)`` for spin ``j`` in the Sz basis ordered ``m = +j ... -j``.

    Built from the ladder operator with ``<m+1|S+|m> = sqrt(j(j+1) - m(m+1))``.
    An ``int`` argument is read as ``two_j``.
    """
    return tuple(op.copy() for op in _spin_operators(_label(j).two_j))  # type: ignore[return-value]


def heisenberg_coupling(j: SpinLabel | int, jp: SpinLabel | int) -> ComplexArray:
    """``S_a . S_b`` on a ``(2j+1) x (2j'+1)`` bipartite space."""
    sa = _spin_operators(_label(j).two_j)
    sb = _spin_operators(_label(jp).two_j)
    return sum(kron(a, b) for a, b in zip(sa, sb))


def coupling_spectrum(j: SpinLabel | int, jp: SpinLabel | int) -> list[tuple[Fraction, int]]:
    """Exact eigenvalues of ``S_a . S_b`` with multiplicities, ascending.

    Each total spin ``s`` in ``|j - j'| ... j + j'`` contributes
    ``(s(s+1) - j(j+1) - j'(j'+1)) / 2`` with multiplicity ``2s + 1``.
    """
    ja, jb = _label(j).j, _label(jp).j
    s_values = []
    s = abs(ja - jb)
    while s <= ja + jb:
        s_values.append(s)
        s += 1
    out = [((s * (s + 1) - ja * (ja + 1) - jb * (jb + 1)) / 2, int(2 * s + 1)) for s in s_values]
    return sorted(out)


def coupling_bounds(j: SpinLabel | int, jp: SpinLabel | int) -> tuple[Fraction, Fraction]:
    """``(lower, upper)`` spectral bounds of ``S_a . S_b``.

    For ``j >= j'`` this is ``(-j'(j+1), j j')``; the order of the arguments
    does not matter.
    """
    ja, jb = _label(j).j, _label(jp).j
    big, small = max(ja, jb), min(ja, jb)
    return -small * (big + 1), big * small


@dataclass(frozen=True)
class PaperOperators:
    """The two-qubit observables used by the uncertainty-relation criterion.

    ``[A, B] = iC``, ``{A, B} = 0`` and ``A^2 = B^2 = D``.
    """

    A: ComplexArray
    B: ComplexArray
    C: ComplexArray
    D: ComplexArray
    A_pt: ComplexArray
    B_pt: ComplexArray
    C_pt: ComplexArray
    D_pt: ComplexArray


@lru_cache(maxsize=1)
def paper_operators() -> PaperOperators:
    ops = PaperOperators(
        A=0.5 * (kron(X, I2) + kron(I2, X)),
        B=0.5 * (kron(Z, Y) + kron(Y, Z)),
        C=kron(Z, Z) - kron(Y, Y),
        D=0.5 * (I4 + kron(X, X)),
        A_pt=0.5 * (kron(X, I2) + kron(I2, X)),
        B_pt=0.5 * (kron(Y, Z) - kron(Z, Y)),
        C_pt=kron(Z, Z) + kron(Y, Y),
        D_pt=0.5 * (I4 + kron(X, X)),
    )
    for name in ("A", "B", "C", "D", "A_pt", "B_pt", "C_pt", "D_pt"):
        getattr(ops, name).setflags(write=False)
    return ops
