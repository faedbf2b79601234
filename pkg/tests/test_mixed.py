import numpy as np
import pytest

from triqwit.catalog import (as_density, ghz, named_setting, psi_plus, random_state, rho1, rho_w,
                             sigma_b, w_state, zero)
from triqwit.exceptions import TriqwitError
from triqwit.mixed import (WITNESS_IDS, WITNESS_TABLES, WitnessEvaluator, batch_witness, combine,
                           correlation_tensor, f_sum, f_witness, t_witness, verdict,
                           witness_observables, witness_value)
from triqwit.observables import WitnessSetting, pauli_triple, triple_from_rotation
from triqwit.optimize import angle_stacks, setting_from_angles
from triqwit.qstate import DensityMatrix, tensor, PAULIS

PAULI = WitnessSetting.pauli()


def t1_by_hand(rho):
    """T1 under Pauli observables, each product written out explicitly."""
    m = rho.matrix

    def e(a, b, c):
        return float(np.trace(m @ tensor([PAULIS[a], PAULIS[b], PAULIS[c]])).real)

    b0 = e(0, 0, 0) + e(0, 3, 0) + e(3, 0, 3) + e(3, 3, 3)
    b1 = e(0, 0, 3) + e(0, 3, 3) + e(3, 0, 0) + e(3, 3, 0)
    b2 = e(1, 0, 1) + e(1, 3, 1) + e(2, 0, 2) + e(2, 3, 2)
    return b0**2 - b1**2 - b2**2


def test_t1_matches_hand_expansion():
    for i in range(10):
        rho = random_state("random_mixed", seed=4, index=i)
        assert t_witness(rho, PAULI, 1) == pytest.approx(t1_by_hand(rho), abs=1e-12)


def test_example1_value():
    assert t_witness(rho1(), named_setting("example1"), 1) == pytest.approx(-16 / 9, abs=1e-12)


def test_example2_closed_form():
    s = named_setting("example2")
    for b in np.linspace(0.1, 0.9, 9):
        expect = -32 * b * (-1 + b + np.sqrt(1 - b * b)) / (1 + 7 * b) ** 2
        assert t_witness(sigma_b(b), s, 1) == pytest.approx(expect, abs=1e-12)


def test_maximally_mixed_values():
    # every bracket but the identity term vanishes, so each witness equals 1
    mm = DensityMatrix.maximally_mixed()
    for wid in ("T1", "T2", "T3", "F1", "F2", "F3"):
        assert witness_value(mm, PAULI, wid) == pytest.approx(1.0)
    assert f_sum(mm, PAULI) == pytest.approx(3.0)


def test_zero_state_f_values():
    rho = as_density(zero())
    assert f_witness(rho, PAULI, 1) == pytest.approx(0.0, abs=1e-14)


def test_psi_plus_f1_equals_eight_min_pt_eigenvalue():
    from triqwit.qstate import partial_trace, partial_transpose
    rho = as_density(psi_plus())
    s = WitnessSetting(pauli_triple(), pauli_triple(),
                       triple_from_rotation(np.diag([1.0, -1.0, -1.0])))
    assert f_witness(rho, s, 1) == pytest.approx(-4.0, abs=1e-12)
    lam = np.linalg.eigvalsh(partial_transpose(partial_trace(rho.matrix, 1), 1))[0]
    assert f_witness(rho, s, 1) == pytest.approx(8 * lam, abs=1e-12)


def test_fast_path_matches_direct():
    rng = np.random.default_rng(8)
    angles = rng.uniform(0, 2 * np.pi, (6, 9))
    for orient in (1, -1):
        stacks = angle_stacks(angles, orient)
        for i in range(3):
            rho = random_state("random_mixed", seed=12, index=i)
            corr = correlation_tensor(rho)
            for wid in WITNESS_IDS:
                fast = batch_witness(corr, stacks, wid)
                direct = [witness_value(rho, setting_from_angles(a, orient), wid) for a in angles]
                assert np.allclose(fast, direct, atol=1e-11)


def test_correlation_tensor_identity_entry():
    corr = correlation_tensor(as_density(ghz()))
    assert corr[0, 0, 0] == pytest.approx(1.0)
    assert corr[3, 3, 0] == pytest.approx(1.0)
    assert corr[1, 1, 1] == pytest.approx(1.0)


def test_combine_structure():
    for wid, n in (("T1", 1.0), ("Fsum", 3.0)):
        vals = {s: 0.0 for s in witness_observables(wid)}
        assert combine(wid, vals) == pytest.approx(n)
    vals = WitnessEvaluator(PAULI, "T1").expectations(as_density(zero()))
    assert combine("T1", vals) == pytest.approx(t1_by_hand(as_density(zero())))


def test_tables_use_four_term_brackets():
    for wid, (b0, b1, b2) in WITNESS_TABLES.items():
        assert len(b0) == len(b1) == len(b2) == (4 if wid.startswith("T") else 2)


def test_unknown_witness():
    with pytest.raises(TriqwitError):
        witness_value(as_density(zero()), PAULI, "T4")


def test_t_nonnegative_on_fully_separable():
    rng = np.random.default_rng(2)
    for i in range(40):
        rho = random_state("fully_sep_mixed", seed=6, index=i)
        corr = correlation_tensor(rho)
        stacks = angle_stacks(rng.uniform(0, 2 * np.pi, (10, 9)), 1 - 2 * (i % 2))
        for wid in ("T1", "T2", "T3", "F1", "F2", "F3"):
            assert batch_witness(corr, stacks, wid).min() >= -1e-9


def test_verdict_flags():
    v = verdict(rho1(), [named_setting("example1")])
    assert v["not_sep_1|23_and_12|3"]
    assert not v.genuine_entangled
    assert v.flags["not_sep_1|23_and_12|3"].value == pytest.approx(-16 / 9)
    assert verdict(DensityMatrix.maximally_mixed(), [PAULI]).triggered() == []
    with pytest.raises(TriqwitError):
        verdict(rho1(), [])


def test_verdict_picks_first_best_setting():
    s = named_setting("example1")
    v = verdict(rho1(), [PAULI, s, s])
    assert v.flags["not_sep_1|23_and_12|3"].setting_index == 1


def test_w_noise_f1_polynomial():
    # F1(rho_w) under Paulis vanishes at the positive root of 19 p^2 + 6 p - 9
    root = (-6 + np.sqrt(36 + 4 * 19 * 9)) / 38
    assert f_witness(rho_w(root), PAULI, 1) == pytest.approx(0.0, abs=1e-12)


def test_w_state_detected():
    assert verdict(as_density(w_state()), [PAULI]).not_fully_separable
