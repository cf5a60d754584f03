import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bisect, jacobi_eigenvalues, kron_loops, outer, partial_transpose_loops, trace_product
from sepcheck.criteria import (
    CONSTANTS,
    Verdict,
    applicable_criteria,
    chsh_check,
    decision_tol,
    evaluate,
    evaluate_all,
    invariant_bound_check,
    ppt_check,
    qubit_g_check,
    srur_check,
    srur_paper_check,
)
from sepcheck.errors import DimensionMismatch, InputError, NotHermitian
from sepcheck.linalg import BipartiteLayout, DensityMatrix, transpose
from sepcheck.spin import X, Y, Z, SpinLabel, paper_operators
from sepcheck.states import (
    WernerFamily,
    bell_state,
    maximally_mixed,
    pure_density,
    random_hermitian,
    random_mixed,
    random_separable,
    werner,
)

QUBITS = BipartiteLayout(2, 2)
PHI_PLUS = pure_density(bell_state("phi_plus"))
PHI_MINUS = pure_density(bell_state("phi_minus"))
SINGLET = pure_density(bell_state("psi_minus"))
MIXED = maximally_mixed()
PRODUCT_00 = pure_density([1, 0, 0, 0])


def pauli_corr(psi, p, q):
    """<psi| p (x) q |psi> by explicit sums."""
    return trace_product(outer(psi), kron_loops(p, q).tolist()).real


# --- ppt --------------------------------------------------------------------


def test_ppt_bell_margin():
    oracle = -jacobi_eigenvalues(partial_transpose_loops(PHI_PLUS.matrix, 2, 2))[0]
    v = ppt_check(PHI_PLUS)
    assert v.margin == pytest.approx(oracle, abs=1e-12) and oracle == pytest.approx(0.5, abs=1e-12)
    assert v.violated and "exact" in v.flags


def test_ppt_product_state():
    v = ppt_check(PRODUCT_00)
    assert not v.violated
    assert v.margin == pytest.approx(0.0, abs=1e-15)


def test_ppt_werner_family():
    fam = WernerFamily(bell_state("phi_minus"))
    for x in (0.0, 0.2, 0.33, 1 / 3, 0.34, 0.5, 1.0):
        assert ppt_check(werner(fam, x)).violated == (x > 1 / 3 + 1e-9)


def test_ppt_exact_flag_by_layout():
    assert "exact" in ppt_check(random_mixed(6, seed=0, layout=BipartiteLayout(3, 2))).flags
    assert "exact" not in ppt_check(random_mixed(9, seed=0, layout=BipartiteLayout(3, 3))).flags


def test_ppt_requires_layout():
    with pytest.raises(DimensionMismatch):
        ppt_check(DensityMatrix(np.eye(4) / 4))
    v = ppt_check(DensityMatrix(np.eye(4) / 4), QUBITS)
    assert not v.violated


# --- invariant bound ---------------------------------------------------------


def test_invariant_bound_examples():
    v = invariant_bound_check(MIXED)
    assert v.lhs == pytest.approx(0, abs=1e-15) and not v.violated
    assert v.rhs_or_bounds == (-0.75, 0.25)
    psi = bell_state("phi_plus")
    oracle = 0.25 * (pauli_corr(psi, X, X) - pauli_corr(psi, Y, Y) + pauli_corr(psi, Z, Z))
    assert oracle == pytest.approx(0.75)
    v = invariant_bound_check(PHI_PLUS)
    assert v.lhs == pytest.approx(oracle, abs=1e-14)
    assert v.violated and v.margin == pytest.approx(0.5)


def test_invariant_bound_spin_one_half():
    layout = BipartiteLayout(3, 2)
    v = invariant_bound_check(random_separable(layout, 3, 1))
    assert v.rhs_or_bounds == (-1.0, 0.5) and not v.violated
    v2 = invariant_bound_check(random_separable(layout, 3, 1), SpinLabel(2), SpinLabel(1))
    assert v2 == v
    with pytest.raises(DimensionMismatch):
        invariant_bound_check(MIXED, SpinLabel(2), SpinLabel(2))


# --- G criterion ------------------------------------------------------------


@pytest.mark.parametrize(
    "name,expected", [("phi_plus", 3.0), ("psi_minus", -1.0), ("phi_minus", -1.0), ("psi_plus", -1.0)]
)
def test_g_values(name, expected):
    psi = bell_state(name)
    oracle = pauli_corr(psi, X, X) - pauli_corr(psi, Y, Y) + pauli_corr(psi, Z, Z)
    assert oracle == pytest.approx(expected, abs=1e-14)
    v = qubit_g_check(pure_density(psi))
    assert v.lhs == pytest.approx(oracle, abs=1e-14)
    assert v.violated == (expected > 1)
    assert v.details["witness"] == pytest.approx(1 - oracle, abs=1e-14)


def test_g_mixed():
    v = qubit_g_check(MIXED)
    assert v.lhs == pytest.approx(0.0, abs=1e-15) and not v.violated


def test_g_rejects_non_qubit():
    with pytest.raises(DimensionMismatch):
        qubit_g_check(random_mixed(6, seed=0, layout=BipartiteLayout(2, 3)))


# --- SRUR -------------------------------------------------------------------


def test_srur_bell_minus():
    ops = paper_operators()
    v = srur_check(PHI_MINUS, ops.A, ops.B, QUBITS)
    assert v.lhs == pytest.approx(0.0, abs=1e-14)
    assert v.rhs_or_bounds == pytest.approx(1.0, abs=1e-14)
    assert v.violated


def test_srur_product_equality():
    ops = paper_operators()
    v = srur_check(PRODUCT_00, ops.A, ops.B, QUBITS)
    assert v.lhs == pytest.approx(0.25, abs=1e-14)
    assert v.rhs_or_bounds == pytest.approx(0.25, abs=1e-14)
    assert not v.violated


def test_srur_rejects_bad_operators():
    with pytest.raises(NotHermitian):
        srur_check(MIXED, np.triu(np.ones((4, 4))), paper_operators().B, QUBITS)
    with pytest.raises(DimensionMismatch):
        srur_check(MIXED, X, Y, QUBITS)


def test_srur_degenerate_variance_single():
    # eigenvector of B^pt with eigenvalue +1: <(B^2)^pt> = 0 < <B^pt>^2 = 1
    ops = paper_operators()
    lam, vecs = np.linalg.eigh(ops.B_pt)
    rho = pure_density(vecs[:, -1])
    assert lam[-1] == pytest.approx(1.0)
    v = srur_check(rho, ops.A, ops.B, QUBITS)
    assert v.details["var_b_pt"] == pytest.approx(-1.0, abs=1e-12)
    assert "degenerate_variance" in v.flags and v.violated
    assert v.margin == pytest.approx(1.0)
    # <D> = <C^pt> = 0 here, so the product form alone gives margin 0
    assert srur_paper_check(rho).margin == pytest.approx(0.0, abs=1e-12)
    assert ppt_check(rho).violated


def test_srur_degenerate_variance_both():
    # a = b = B on the same state: the product of two negative variances is positive
    ops = paper_operators()
    _, vecs = np.linalg.eigh(ops.B_pt)
    rho = pure_density(vecs[:, -1])
    v = srur_check(rho, ops.B, ops.B, QUBITS)
    assert v.details["var_a_pt"] == pytest.approx(-1.0) and v.details["var_b_pt"] == pytest.approx(-1.0)
    assert v.lhs == pytest.approx(1.0) and v.rhs_or_bounds == pytest.approx(1.0)
    assert v.violated and v.margin == pytest.approx(1.0)


def test_srur_paper_examples():
    v = srur_paper_check(MIXED)
    assert v.details["mean_d"] == pytest.approx(0.5) and v.details["mean_c_pt"] == pytest.approx(0.0)
    assert not v.violated
    assert srur_paper_check(PHI_MINUS).violated
    assert srur_paper_check(SINGLET).violated
    assert not srur_paper_check(PHI_PLUS).violated


def test_srur_paper_werner_threshold():
    fam = WernerFamily(bell_state("phi_minus"))
    for x in (0.0, 0.3, 1 / 3, 0.3334, 0.5, 1.0):
        assert srur_paper_check(werner(fam, x)).violated == (x > 1 / 3 + 1e-9)


def test_srur_soundness_random_observables():
    for layout in (QUBITS, BipartiteLayout(2, 3)):
        for seed in range(100):
            rho = random_separable(layout, 3, seed)
            a = random_hermitian(layout.dim, seed=(seed, 1))
            b = random_hermitian(layout.dim, seed=(seed, 2))
            v = srur_check(rho, a, b, layout)
            assert not v.violated and not v.flags


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), rank=st.integers(1, 4))
def test_srur_specialization_identity(seed, rank):
    rho = random_mixed(4, rank, seed)
    ops = paper_operators()
    general = srur_check(rho, ops.A, ops.B, QUBITS)
    special = srur_paper_check(rho)
    assert general.margin == pytest.approx(special.margin, abs=1e-10)
    assert general.violated == special.violated


# --- CHSH -------------------------------------------------------------------


def test_chsh_examples():
    psi = bell_state("phi_plus")
    s = 1 / math.sqrt(2)
    oracle = s * (
        pauli_corr(psi, Z, Z) + pauli_corr(psi, Z, X)
        + pauli_corr(psi, X, Z) + pauli_corr(psi, X, X)
        + pauli_corr(psi, Z, Z) - pauli_corr(psi, Z, X)
        - pauli_corr(psi, X, Z) + pauli_corr(psi, X, X)
    )
    assert oracle == pytest.approx(2 * math.sqrt(2))
    v = chsh_check(PHI_PLUS)
    assert v.lhs == pytest.approx(oracle, abs=1e-14) and v.violated
    assert chsh_check(MIXED).lhs == pytest.approx(0.0, abs=1e-15)
    assert not chsh_check(MIXED).violated


def test_chsh_werner_threshold_linear():
    fam = WernerFamily(bell_state("phi_plus"))
    for x in (0.1, 0.4, 0.9):
        assert chsh_check(werner(fam, x)).lhs == pytest.approx(2 * math.sqrt(2) * x, abs=1e-14)
    x_star = bisect(lambda x: 2 * math.sqrt(2) * x > 2, 0.0, 1.0)
    assert x_star == pytest.approx(1 / math.sqrt(2), abs=1e-10)
    assert not chsh_check(werner(fam, x_star - 1e-6)).violated
    assert chsh_check(werner(fam, x_star + 1e-6)).violated


# --- cross-criterion properties ----------------------------------------------


def test_soundness_all_criteria():
    for layout in (QUBITS, BipartiteLayout(2, 3), BipartiteLayout(3, 3)):
        for seed in range(150):
            for v in evaluate_all(random_separable(layout, 1 + seed % 4, seed)):
                assert not v.violated, (layout, seed, v)
                assert v.margin <= decision_tol()


@settings(max_examples=300, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), rank=st.integers(1, 4))
def test_qubit_g_consistent_with_invariant_bound(seed, rank):
    rho = random_mixed(4, rank, seed)
    g = qubit_g_check(rho)
    inv = invariant_bound_check(rho)
    assert g.lhs == pytest.approx(4 * inv.lhs, abs=1e-12)
    assert g.violated == inv.violated


@settings(max_examples=300, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), rank=st.integers(1, 4))
def test_every_firing_is_ppt_entangled(seed, rank):
    rho = random_mixed(4, rank, seed)
    verdicts = {v.criterion: v for v in evaluate_all(rho)}
    if any(v.violated for v in verdicts.values()):
        assert verdicts["ppt"].violated


def test_ladder_operators_swap_under_transpose():
    lower = (X + 1j * Y) / 2
    raise_ = (X - 1j * Y) / 2
    for seed in range(20):
        rho = random_mixed(2, seed=seed).matrix
        rho_t = transpose(rho)
        assert abs(np.trace(rho_t @ lower) - np.trace(rho @ raise_)) <= 1e-12
        assert abs(np.trace(rho_t @ raise_) - np.trace(rho @ lower)) <= 1e-12


# --- plumbing ----------------------------------------------------------------


def test_violated_iff_margin_exceeds_tol():
    fam = WernerFamily(bell_state("phi_minus"))
    rho = werner(fam, 1 / 3 + 1e-10)
    v = srur_paper_check(rho)
    assert 0 < v.margin <= 1e-9 and not v.violated
    assert srur_paper_check(rho, tol=0.0).violated


def test_env_tolerance_override(monkeypatch):
    rho = werner(WernerFamily(bell_state("phi_minus")), 0.34)
    assert srur_paper_check(rho).violated
    monkeypatch.setenv("SEPCHECK_TOL", "0.1")
    assert decision_tol() == 0.1
    assert not srur_paper_check(rho).violated
    monkeypatch.setenv("SEPCHECK_TOL", "nope")
    with pytest.raises(InputError):
        decision_tol()


def test_verdict_json_roundtrip():
    for v in evaluate_all(random_mixed(4, seed=7)):
        back = Verdict.from_dict(json.loads(json.dumps(v.to_dict())))
        assert back == v


def test_registry():
    assert applicable_criteria(QUBITS) == ["ppt", "invariant_bound", "qubit_g", "srur", "srur_paper", "chsh"]
    assert applicable_criteria(BipartiteLayout(2, 3)) == ["ppt", "invariant_bound"]
    assert applicable_criteria(BipartiteLayout(1, 4)) == ["ppt"]
    with pytest.raises(InputError):
        evaluate(MIXED, "guhne")


def test_reference_constants():
    assert CONSTANTS.ppt == CONSTANTS.srur_paper == pytest.approx(1 / 3)
    assert CONSTANTS.guhne == pytest.approx(1 / math.sqrt(3))
    assert CONSTANTS.gillet == 0.5
    assert CONSTANTS.bell == pytest.approx(1 / math.sqrt(2))
