"""Test states: Bell-type superpositions, Werner mixtures and seeded random states.

Two-qubit kets use the basis order ``|00>, |01>, |10>, |11>`` with the first
label belonging to subsystem a.

Random generators take ``seed`` as anything :func:`numpy.random.default_rng`
accepts (an int, a sequence of ints, or an existing ``Generator``). The bit
generator is PCG64, so a given seed reproduces the same state bits within one
numpy version.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from sepcheck.errors import DimensionMismatch, NotNormalized, ParameterOutOfRange
from sepcheck.linalg import QUBITS, BipartiteLayout, ComplexArray, DensityMatrix, kron

NORM_TOL = 1e-9

Seed = int | np.random.Generator | npt.ArrayLike | None


def _ket(amplitudes: npt.ArrayLike) -> ComplexArray:
    psi = np.asarray(amplitudes, dtype=np.complex128)
    if psi.ndim != 1 or psi.size == 0:
        raise DimensionMismatch(f"a ket must be a non-empty 1-D array, got shape {psi.shape}")
    norm2 = float(np.vdot(psi, psi).real)
    if abs(norm2 - 1.0) > NORM_TOL:
        raise NotNormalized(f"state has squared norm {norm2:.12g}, expected 1")
    return psi


def pure_state(amplitudes: npt.ArrayLike, *, renormalize: bool = False) -> ComplexArray:
    """Validated, normalized state vector (renormalization only on request)."""
    psi = np.asarray(amplitudes, dtype=np.complex128)
    if renormalize:
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise NotNormalized("cannot renormalize the zero vector")
        psi = psi / norm
    return _ket(psi)


def pure_density(psi: npt.ArrayLike, layout: BipartiteLayout | None = None) -> DensityMatrix:
    """Projector ``|psi><psi|``."""
    ket = _ket(psi)
    if layout is None and ket.size == 4:
        layout = QUBITS
    return DensityMatrix(np.outer(ket, ket.conj()), layout)


def _two_qubit(alpha: complex, beta: complex, first: int, second: int) -> ComplexArray:
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > NORM_TOL:
        raise NotNormalized(f"|alpha|^2 + |beta|^2 = {abs(alpha) ** 2 + abs(beta) ** 2:.12g}, expected 1")
    psi = np.zeros(4, dtype=np.complex128)
    psi[first] = alpha
    psi[second] = -beta
    return psi


def superposition_00_11(alpha: complex, beta: complex) -> ComplexArray:
    """``alpha|00> - beta|11>``."""
    return _two_qubit(alpha, beta, 0, 3)


def superposition_01_10(alpha: complex, beta: complex) -> ComplexArray:
    """``alpha|01> - beta|10>``."""
    return _two_qubit(alpha, beta, 1, 2)


_R = 1 / np.sqrt(2)

BELL_STATES: dict[str, ComplexArray] = {
    "phi_plus": np.array([_R, 0, 0, _R], dtype=np.complex128),
    "phi_minus": np.array([_R, 0, 0, -_R], dtype=np.complex128),
    "psi_plus": np.array([0, _R, _R, 0], dtype=np.complex128),
    "psi_minus": np.array([0, _R, -_R, 0], dtype=np.complex128),
}


def bell_state(name: str) -> ComplexArray:
    try:
        return BELL_STATES[name].copy()
    except KeyError:
        raise ParameterOutOfRange(
            f"unknown Bell state {name!r}; choose from {', '.join(BELL_STATES)}"
        ) from None


def maximally_mixed(layout: BipartiteLayout = QUBITS) -> DensityMatrix:
    return DensityMatrix(np.eye(layout.dim, dtype=np.complex128) / layout.dim, layout)


@dataclass(frozen=True)
class WernerFamily:
    """``rho(x) = x |psi><psi| + (1 - x) I/4`` for a two-qubit pure state ``psi``."""

    psi: ComplexArray
    label: str = "psi"

    def __post_init__(self) -> None:
        psi = _ket(self.psi)
        if psi.size != 4:
            raise DimensionMismatch(f"Werner family needs a two-qubit state, got dimension {psi.size}")
        psi = psi.copy()
        psi.setflags(write=False)
        object.__setattr__(self, "psi", psi)

    def density(self, x: float) -> DensityMatrix:
        return werner(self, x)


def werner(family: WernerFamily | npt.ArrayLike, x: float) -> DensityMatrix:
    if not 0.0 <= x <= 1.0:
        raise ParameterOutOfRange(f"Werner mixing parameter must lie in [0, 1], got {x}")
    psi = family.psi if isinstance(family, WernerFamily) else WernerFamily(family).psi
    rho = x * np.outer(psi, psi.conj()) + (1.0 - x) / 4.0 * np.eye(4)
    return DensityMatrix(rho, QUBITS)


def _gaussian(rng: np.random.Generator, shape: tuple[int, ...]) -> ComplexArray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_pure(dim: int, seed: Seed = None) -> ComplexArray:
    """Normalized complex-Gaussian vector."""
    if dim < 1:
        raise ParameterOutOfRange(f"dim must be >= 1, got {dim}")
    rng = np.random.default_rng(seed)
    v = _gaussian(rng, (dim,))
    return v / np.linalg.norm(v)


def _ginibre(dim: int, rank: int, rng: np.random.Generator) -> ComplexArray:
    g = _gaussian(rng, (dim, rank))
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T)
    return m / np.trace(m).real


def random_mixed(
    dim: int,
    rank: int | None = None,
    seed: Seed = None,
    layout: BipartiteLayout | None = None,
) -> DensityMatrix:
    """Ginibre-ensemble state ``G G^dagger / tr(G G^dagger)`` with ``G`` of shape ``dim x rank``."""
    rank = dim if rank is None else rank
    if dim < 1 or not 1 <= rank <= dim:
        raise ParameterOutOfRange(f"need 1 <= rank <= dim, got dim={dim}, rank={rank}")
    if layout is None and dim == 4:
        layout = QUBITS
    return DensityMatrix(_ginibre(dim, rank, np.random.default_rng(seed)), layout)


def random_separable(layout: BipartiteLayout, k_terms: int = 3, seed: Seed = None) -> DensityMatrix:
    """Convex mixture of ``k_terms`` random product states ``rho_a (x) rho_b``."""
    if k_terms < 1:
        raise ParameterOutOfRange(f"k_terms must be >= 1, got {k_terms}")
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(k_terms))
    rho = np.zeros((layout.dim, layout.dim), dtype=np.complex128)
    for p in weights:
        rho += p * kron(_ginibre(layout.d_a, layout.d_a, rng), _ginibre(layout.d_b, layout.d_b, rng))
    return DensityMatrix(rho, layout)


def random_bell_diagonal(seed: Seed = None) -> DensityMatrix:
    """Mixture of the four Bell projectors with uniform (Dirichlet) weights."""
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(4))
    rho = sum(p * np.outer(v, v.conj()) for p, v in zip(weights, BELL_STATES.values()))
    return DensityMatrix(rho, QUBITS)


def random_hermitian(dim: int, seed: Seed = None) -> ComplexArray:
    rng = np.random.default_rng(seed)
    g = _gaussian(rng, (dim, dim))
    return 0.5 * (g + g.conj().T)
