import csv
import io
import math

import numpy as np
import pytest

from sepcheck import criteria
from sepcheck.criteria import Verdict
from sepcheck.errors import NonMonotone, ParameterOutOfRange
from sepcheck.harness import compare_sweep, threshold_bisect, werner_reference
from sepcheck.linalg import BipartiteLayout
from sepcheck.states import WernerFamily, bell_state, superposition_00_11, superposition_01_10

QUBITS = BipartiteLayout(2, 2)


def family(name):
    return WernerFamily(bell_state(name), name)


@pytest.mark.parametrize("criterion", ["srur_paper", "srur", "ppt"])
def test_bell_minus_threshold(criterion):
    res = threshold_bisect(family("phi_minus"), criterion, 1e-9)
    assert res.x_star == pytest.approx(1 / 3, abs=1e-6)
    assert res.bracket[1] - res.bracket[0] <= 1e-9
    assert res.status == "detected"


def test_unbalanced_superposition_threshold():
    alpha, beta = math.sqrt(0.9), math.sqrt(0.1)
    # closed form: 1 / (1 + 4 Re(alpha* beta)) with Re(alpha* beta) = 0.3
    expected = 1 / (1 + 4 * 0.3)
    psi = superposition_00_11(alpha, beta)
    res = threshold_bisect(WernerFamily(psi), "srur_paper", 1e-9)
    assert res.x_star == pytest.approx(expected, abs=1e-6)
    assert werner_reference("srur_paper", psi) == pytest.approx(expected)


def test_threshold_bracket_invariant():
    fam = family("phi_minus")
    res = threshold_bisect(fam, "srur_paper", 1e-7)
    width = res.bracket[1] - res.bracket[0]
    assert not criteria.srur_paper_check(fam.density(res.x_star - width)).violated
    assert criteria.srur_paper_check(fam.density(res.x_star + width)).violated


def test_threshold_undetected():
    res = threshold_bisect(family("phi_plus"), "srur_paper")
    assert res.x_star is None and res.status == "undetected" and res.bracket is None


def test_threshold_deterministic():
    a = threshold_bisect(family("phi_plus"), "chsh", 1e-9)
    b = threshold_bisect(family("phi_plus"), "chsh", 1e-9)
    assert a == b
    assert a.x_star == pytest.approx(1 / math.sqrt(2), abs=1e-6)


def test_threshold_non_monotone(monkeypatch):
    # fires only for 0.4 < x < 0.65; for the phi_minus family rho[0, 3] = -x/2
    def window(rho, tol=None):
        x = -2 * rho.matrix[0, 3].real
        inside = 0.4 < x < 0.65
        return Verdict("window", x, 0.0, 1.0 if inside else -1.0, inside)

    monkeypatch.setitem(criteria.CRITERIA, "window", window)
    with pytest.raises(NonMonotone):
        threshold_bisect(family("phi_minus"), "window")


def test_threshold_bad_tol():
    with pytest.raises(ParameterOutOfRange):
        threshold_bisect(family("phi_minus"), "ppt", 0.0)


@pytest.mark.parametrize("criterion", ["ppt", "srur_paper", "qubit_g", "invariant_bound", "chsh"])
@pytest.mark.parametrize(
    "psi",
    [
        bell_state("phi_plus"),
        bell_state("phi_minus"),
        superposition_00_11(0.8, 0.6),
        superposition_00_11(0.8, -0.6),
        superposition_01_10(0.6, 0.8j),
        superposition_01_10(0.6, 0.8),
    ],
)
def test_reference_matches_bisection(criterion, psi):
    ref = werner_reference(criterion, psi)
    res = threshold_bisect(WernerFamily(psi), criterion, 1e-9)
    if ref is None:
        if res.x_star is not None:
            # no closed form, e.g. CHSH on a non-maximal state
            assert criterion == "chsh"
    else:
        assert res.x_star == pytest.approx(ref, abs=1e-6)


def test_reference_unknown_support():
    assert werner_reference("ppt", np.ones(4) / 2) is None


def test_compare_empty():
    report = compare_sweep(0, QUBITS, 1)
    assert report.rows == []
    assert all(s["detected"] == 0 and s["false_positives"] == 0 for s in report.summary.values())
    assert all(s["detection_rate"] == 0.0 for s in report.summary.values())


def test_compare_no_false_positives():
    report = compare_sweep(300, QUBITS, 2)
    assert report.n_entangled > 0
    assert all(s["false_positives"] == 0 for s in report.summary.values())


def test_compare_rows_reproducible_and_columns():
    a = compare_sweep(20, QUBITS, 5)
    b = compare_sweep(20, QUBITS, 5)
    assert a.rows == b.rows
    buf = io.StringIO()
    a.write_csv(buf)
    rows = list(csv.reader(io.StringIO(buf.getvalue())))
    assert rows[0] == [
        "sample_id", "ppt_margin", "ppt_entangled",
        "invariant_bound_margin", "invariant_bound_violated",
        "qubit_g_margin", "qubit_g_violated",
        "srur_margin", "srur_violated",
        "srur_paper_margin", "srur_paper_violated",
        "chsh_margin", "chsh_violated",
    ]
    assert len(rows) == 21
    assert float(rows[1][1]) == a.rows[0]["ppt_margin"]


def test_compare_prefix_stable():
    # per-sample streams: the first rows do not depend on n_samples
    assert compare_sweep(5, QUBITS, 9).rows == compare_sweep(10, QUBITS, 9).rows[:5]


def test_compare_qutrit_layout():
    report = compare_sweep(200, BipartiteLayout(2, 3), 3)
    assert report.criteria == ["invariant_bound"]
    assert report.summary["invariant_bound"]["false_positives"] == 0


def test_compare_bell_diagonal_ordering():
    report = compare_sweep(1000, QUBITS, 4, sampler="bell_diagonal")
    s = report.summary
    assert s["srur_paper"]["detection_rate"] >= s["qubit_g"]["detection_rate"]
    assert all(v["false_positives"] == 0 for v in s.values())


def test_compare_errors():
    with pytest.raises(ParameterOutOfRange):
        compare_sweep(-1, QUBITS)
    with pytest.raises(ParameterOutOfRange):
        compare_sweep(1, BipartiteLayout(3, 3))
    with pytest.raises(ParameterOutOfRange):
        compare_sweep(1, QUBITS, sampler="haar")
    with pytest.raises(ParameterOutOfRange):
        compare_sweep(1, BipartiteLayout(2, 3), sampler="bell_diagonal")
