import numpy as np
import pytest

from triqwit.catalog import ghz, rho1, rng_for, random_state, sigma_b, w_state
from triqwit.exceptions import DimensionError, StateError
from triqwit.qstate import (PAULIS, DensityMatrix, Ensemble, PureState, expectation, is_ppt,
                            mix, outer, partial_trace, partial_transpose, purity, tensor)


def kron_oracle(ops):
    """Kronecker product built entry by entry from the bit index; no np.kron."""
    n = len(ops)
    out = np.zeros((2**n, 2**n), dtype=complex)
    for r in range(2**n):
        for c in range(2**n):
            val = 1.0 + 0j
            for q, op in enumerate(ops):
                shift = n - 1 - q
                val *= op[(r >> shift) & 1, (c >> shift) & 1]
            out[r, c] = val
    return out


def test_tensor_matches_bit_index_oracle():
    rng = np.random.default_rng(1)
    for _ in range(20):
        ops = [rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(3)]
        assert np.allclose(tensor(ops), kron_oracle(ops), atol=1e-14)


def test_basis_ordering_qubit1_most_significant():
    psi = PureState(np.eye(8)[4])  # |100>
    assert psi.amplitude(1, 0, 0) == 1
    z1 = tensor([PAULIS[3], PAULIS[0], PAULIS[0]])
    assert expectation(outer(psi), z1) == -1


def test_ghz_amplitudes():
    v = ghz().vector
    assert np.allclose(np.abs(v[[0, 7]]), 1 / np.sqrt(2))
    assert np.allclose(np.delete(v, [0, 7]), 0)


def test_pure_state_validation():
    with pytest.raises(DimensionError):
        PureState(np.ones(4) / 2)
    with pytest.raises(StateError):
        PureState(np.ones(8))
    # tiny drift is repaired, not rejected
    v = np.eye(8)[0] * (1 + 1e-11)
    assert abs(np.linalg.norm(PureState(v).vector) - 1) < 1e-15


def test_density_matrix_validation():
    with pytest.raises(StateError):
        DensityMatrix(np.eye(8) / 4)
    with pytest.raises(StateError):
        DensityMatrix(np.diag([2, -1, 0, 0, 0, 0, 0, 0]))
    m = np.eye(8, dtype=complex) / 8
    m[0, 1] = 0.01
    with pytest.raises(StateError):
        DensityMatrix(m)
    with pytest.raises(DimensionError):
        DensityMatrix(np.eye(4) / 4)


def test_stored_matrix_is_read_only():
    rho = DensityMatrix.maximally_mixed()
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1


def test_ensemble_weights_checked():
    with pytest.raises(StateError):
        Ensemble(((0.5, ghz()), (0.4, w_state())))
    rho = mix([(0.5, ghz()), (0.5, w_state())])
    assert abs(np.trace(rho.matrix) - 1) < 1e-14


def test_purity():
    assert purity(outer(ghz())) == pytest.approx(1.0)
    assert purity(DensityMatrix.maximally_mixed()) == pytest.approx(1 / 8)


def test_partial_trace_of_product():
    rng = rng_for(3)
    states = [np.linalg.qr(rng.standard_normal((2, 2)))[0][:, 0] for _ in range(3)]
    rhos = [np.outer(s, s.conj()) for s in states]
    full = tensor(rhos)
    assert np.allclose(partial_trace(full, 1), tensor(rhos[1:]))
    assert np.allclose(partial_trace(full, 2), tensor([rhos[0], rhos[2]]))
    assert np.allclose(partial_trace(full, 3), tensor(rhos[:2]))
    with pytest.raises(DimensionError):
        partial_trace(full, 4)


def test_partial_transpose_involution_and_oracle():
    rho = random_state("random_mixed", seed=5).matrix
    for p in (1, 2, 3):
        assert np.allclose(partial_transpose(partial_transpose(rho, p), p), rho)
    # transposing every factor is the full transpose
    t = partial_transpose(partial_transpose(partial_transpose(rho, 1), 2), 3)
    assert np.allclose(t, rho.T)
    # PT on a product operator transposes that factor only
    ops = [np.array([[1, 2j], [3, 4]]), np.eye(2), np.array([[0, 1], [0, 0]])]
    assert np.allclose(partial_transpose(tensor(ops), 1), tensor([ops[0].T, ops[1], ops[2]]))


def test_ghz_not_ppt():
    rep = is_ppt(outer(ghz()))
    assert not rep.all_parties
    for lam in rep.min_eigenvalues.values():
        assert lam == pytest.approx(-0.5, abs=1e-12)


def test_fully_separable_mixtures_are_ppt():
    for i in range(30):
        assert is_ppt(random_state("fully_sep_mixed", seed=2, index=i)).all_parties


def test_sigma_b_partial_transpose_spectrum():
    # as constructed, sigma_b is NPT across parties 1 and 3 for 0 < b < 1
    rep = is_ppt(sigma_b(0.5))
    assert rep.per_party[2]
    assert rep.min_eigenvalues[1] < -0.02 and rep.min_eigenvalues[3] < -0.02
    assert is_ppt(sigma_b(0.0)).all_parties and is_ppt(sigma_b(1.0)).all_parties


def test_rho1_expectation_real():
    z = tensor([PAULIS[3]] * 3)
    assert isinstance(expectation(rho1(), z), float)
