import numpy as np
import pytest

from triqwit.catalog import ghz, psi_plus, random_state, w_state, zero
from triqwit.exceptions import ClassificationError
from triqwit.pure import (Bipartition, PureLabel, classify_pure, concurrence_sq_oracle,
                          g_values, g_witness)
from triqwit.qstate import PureState, partial_trace, outer


def reduced_det(psi, party):
    """Independent route: determinant of the single-qubit reduced state."""
    rho = outer(psi).matrix
    others = [p for p in (1, 2, 3) if p != party]
    # trace the two other qubits, highest index first so numbering stays valid
    red = partial_trace(partial_trace(rho, others[1]), others[0])
    return float(np.linalg.det(red).real)


def test_g_matches_oracle_random():
    for i in range(100):
        psi = random_state("haar_pure", seed=7, index=i)
        for cut in Bipartition:
            g = g_witness(psi, cut)
            assert g == pytest.approx(concurrence_sq_oracle(psi, cut), abs=1e-12)
            assert g == pytest.approx(reduced_det(psi, int(cut)), abs=1e-12)


def test_ghz_and_w_values():
    assert np.allclose(g_values(ghz()), 0.25, atol=1e-12)
    assert np.allclose(g_values(w_state()), 2 / 9, atol=1e-12)


def test_classify_examples():
    assert classify_pure(zero()).label is PureLabel.FULLY_SEPARABLE
    res = classify_pure(psi_plus())
    assert res.label is PureLabel.BISEPARABLE and res.party == 1
    assert str(res) == "Biseparable(1)"
    assert classify_pure(ghz()).label is PureLabel.GENUINE_ENTANGLED
    assert classify_pure(w_state()).label is PureLabel.GENUINE_ENTANGLED


def test_classify_random_families():
    for i in range(50):
        assert classify_pure(random_state("product_pure", 3, i)).label is PureLabel.FULLY_SEPARABLE
        for cut in (1, 2, 3):
            res = classify_pure(random_state("bisep_pure", 3, i, partition=cut))
            assert (res.label, res.party) == (PureLabel.BISEPARABLE, cut)


def test_classification_invariant_under_local_unitaries():
    from triqwit.catalog import haar_unitary, rng_for
    from triqwit.qstate import tensor
    rng = rng_for(9)
    for gen in ("product_pure", "bisep_pure", "haar_pure"):
        psi = random_state(gen, seed=1)
        u = tensor([haar_unitary(rng) for _ in range(3)])
        moved = PureState(u @ psi.vector)
        assert classify_pure(moved).label is classify_pure(psi).label
        assert np.allclose(g_values(moved), g_values(psi), atol=1e-12)


def test_inconsistent_g_values_raise(monkeypatch):
    import triqwit.pure as pure
    monkeypatch.setattr(pure, "g_values", lambda psi: (0.0, 0.0, 0.25))
    with pytest.raises(ClassificationError):
        classify_pure(ghz())
    monkeypatch.setattr(pure, "g_values", lambda psi: (0.0, 0.0, 1e-6))
    assert classify_pure(ghz()).label is PureLabel.FULLY_SEPARABLE


def test_tolerance_must_be_positive():
    with pytest.raises(ValueError):
        classify_pure(ghz(), 0.0)
