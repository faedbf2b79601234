import numpy as np
import pytest

from triqwit.catalog import as_density, psi_plus, random_state, rho1
from triqwit.exceptions import TriqwitError
from triqwit.mixed import witness_value
from triqwit.observables import WitnessSetting
from triqwit.optimize import OptimizerConfig, check_result, minimize_witness, setting_from_angles
from triqwit.qstate import partial_trace, partial_transpose


def test_rho1_reaches_example_value():
    res = minimize_witness(rho1(), "T1")
    assert res.best_value <= -16 / 9 + 1e-6
    check_result(rho1(), res)


def test_never_worse_than_pauli():
    rho = random_state("random_mixed", seed=3)
    res = minimize_witness(rho, "F2", OptimizerConfig(starts=4, max_iterations=20))
    assert res.best_value <= witness_value(rho, WitnessSetting.pauli(), "F2") + 1e-15
    assert res.start_values[0] <= witness_value(rho, WitnessSetting.pauli(), "F2") + 1e-15


def test_deterministic_under_seed():
    cfg = OptimizerConfig(starts=8, max_iterations=50, seed=5)
    a = minimize_witness(rho1(), "T2", cfg)
    b = minimize_witness(rho1(), "T2", cfg)
    assert a.best_value == b.best_value and np.array_equal(a.best_angles, b.best_angles)


def test_psi_plus_f1_minimum_is_eight_lambda_min():
    rho = as_density(psi_plus())
    lam = np.linalg.eigvalsh(partial_transpose(partial_trace(rho.matrix, 1), 1))[0]
    res = minimize_witness(rho, "F1", OptimizerConfig(starts=16))
    assert res.best_value == pytest.approx(8 * lam, abs=1e-6)
    assert res.best_value == pytest.approx(-4.0, abs=1e-6)


def test_fully_separable_minimum_nonnegative():
    for i in range(5):
        rho = random_state("fully_sep_mixed", seed=21, index=i)
        res = minimize_witness(rho, "T1", OptimizerConfig(starts=16))
        assert res.best_value >= -1e-6


def test_history_is_monotone():
    res = minimize_witness(rho1(), "T1", OptimizerConfig(starts=3, record_history=True))
    for h in res.history:
        assert all(b <= a for a, b in zip(h, h[1:]))


def test_negative_orientation_setting():
    s = setting_from_angles(np.zeros(9), orientation=-1)
    assert s.orientation == -1
    res = minimize_witness(rho1(), "T1", OptimizerConfig(starts=4, orientation=-1))
    check_result(rho1(), res)
    assert res.best_setting.orientation == -1


def test_config_validation():
    with pytest.raises(TriqwitError):
        OptimizerConfig(starts=0)
    with pytest.raises(TriqwitError):
        OptimizerConfig(shrink=1.5)
    with pytest.raises(TriqwitError):
        minimize_witness(rho1(), "G1")
