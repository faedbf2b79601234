"""Dense linear algebra for one-, two- and three-qubit states and operators.

Basis convention: ``|ijk>`` sits at index ``4*i + 2*j + k`` (qubit 1 is the
most significant bit) and ``|0>`` is the +1 eigenvector of sigma_z.  Parties
are numbered 1, 2, 3 throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .exceptions import DimensionError, StateError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
NORM_TOL = 1e-12
# norm drift up to this size is renormalised silently; anything larger is rejected
NORM_REPAIR_TOL = 1e-9

N_QUBITS = 3
DIM = 2**N_QUBITS

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.flags.writeable = False
    return a


def _n_qubits(dim: int) -> int:
    n = int(round(np.log2(dim))) if dim > 0 else -1
    if n < 1 or 2**n != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return n


def _as_matrix(op) -> np.ndarray:
    m = op.matrix if isinstance(op, DensityMatrix) else np.asarray(op)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def check_hermitian(op, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``op`` as a complex array, raising StateError if it is not Hermitian."""
    m = np.asarray(_as_matrix(op), dtype=complex)
    if not np.all(np.isfinite(m)):
        raise StateError("matrix contains NaN or Inf")
    dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if dev > tol:
        raise StateError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    return m


class PureState:
    """Normalised three-qubit state vector ``sum a_ijk |ijk>``."""

    __slots__ = ("_vec",)

    def __init__(self, amplitudes: Iterable[complex], *, norm_tol: float = NORM_TOL,
                 repair_tol: float = NORM_REPAIR_TOL):
        if not isinstance(amplitudes, np.ndarray):
            amplitudes = list(amplitudes)
        vec = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if vec.shape != (DIM,):
            raise DimensionError(f"a three-qubit state needs {DIM} amplitudes, got {vec.size}")
        if not np.all(np.isfinite(vec)):
            raise StateError("amplitudes contain NaN or Inf")
        norm2 = float(np.vdot(vec, vec).real)
        drift = abs(norm2 - 1.0)
        if drift > repair_tol:
            raise StateError(f"state is not normalised (|psi|^2 = {norm2:.15g})")
        if drift > norm_tol:
            vec = vec / np.sqrt(norm2)
        self._vec = _frozen(vec)

    @property
    def vector(self) -> np.ndarray:
        return self._vec

    @property
    def tensor(self) -> np.ndarray:
        """Amplitudes as a (2, 2, 2) array indexed ``[i, j, k]``."""
        return self._vec.reshape(2, 2, 2)

    def amplitude(self, i: int, j: int, k: int) -> complex:
        return complex(self._vec[4 * i + 2 * j + k])

    def __repr__(self) -> str:
        return f"PureState({np.array2string(self._vec, precision=4)})"


class DensityMatrix:
    """Validated 8x8 density matrix (Hermitian, unit trace, positive semidefinite).

    The stored matrix is the Hermitian part of the input, so downstream traces
    against Hermitian operators come out real to rounding.
    """

    __slots__ = ("_mat",)

    def __init__(self, matrix, *, hermitian_tol: float = HERMITIAN_TOL,
                 trace_tol: float = TRACE_TOL, psd_tol: float = PSD_TOL):
        m = check_hermitian(matrix, hermitian_tol)
        if m.shape != (DIM, DIM):
            raise DimensionError(f"density matrix must be {DIM}x{DIM}, got {m.shape}")
        tr = np.trace(m).real
        if abs(tr - 1.0) > trace_tol:
            raise StateError(f"trace is {tr:.15g}, expected 1")
        m = 0.5 * (m + m.conj().T)
        lam = np.linalg.eigvalsh(m)[0]
        if lam < -psd_tol:
            raise StateError(f"matrix is not positive semidefinite (min eigenvalue {lam:.3e})")
        self._mat = _frozen(m)

    @property
    def matrix(self) -> np.ndarray:
        return self._mat

    @classmethod
    def maximally_mixed(cls) -> "DensityMatrix":
        return cls(np.eye(DIM) / DIM)

    def __repr__(self) -> str:
        return f"DensityMatrix(purity={purity(self):.6g})"


@dataclass(frozen=True)
class Ensemble:
    """Pure-state decomposition ``sum_k p_k |psi_k><psi_k|``."""

    terms: tuple[tuple[float, PureState], ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((float(w), s) for w, s in self.terms))
        if not self.terms:
            raise StateError("ensemble is empty")
        weights = np.array([w for w, _ in self.terms])
        if np.any(weights < 0) or np.any(weights > 1):
            raise StateError("ensemble weights must lie in [0, 1]")
        if abs(weights.sum() - 1.0) > TRACE_TOL:
            raise StateError(f"ensemble weights sum to {weights.sum():.15g}, expected 1")


def tensor(ops: Sequence) -> np.ndarray:
    """Kronecker product in party order; the first factor is the most significant qubit."""
    ops = [np.asarray(o, dtype=complex) for o in ops]
    if not ops:
        raise DimensionError("tensor of an empty sequence")
    total = int(np.prod([o.shape[0] for o in ops]))
    if total > DIM:
        raise DimensionError(f"tensor product dimension {total} exceeds {DIM}")
    out = np.array([[1.0 + 0j]])
    for o in ops:
        out = np.kron(out, o)
    return out


def outer(psi: PureState) -> DensityMatrix:
    v = psi.vector
    return DensityMatrix(np.outer(v, v.conj()))


def mix(ensemble: Ensemble | Sequence[tuple[float, PureState]]) -> DensityMatrix:
    if not isinstance(ensemble, Ensemble):
        ensemble = Ensemble(tuple(ensemble))
    m = np.zeros((DIM, DIM), dtype=complex)
    for w, psi in ensemble.terms:
        v = psi.vector
        m += w * np.outer(v, v.conj())
    return DensityMatrix(m)


def expectation(rho: DensityMatrix, op) -> float:
    """``tr(rho op)`` for a Hermitian 8x8 operator."""
    m = _as_matrix(rho)
    o = np.asarray(op, dtype=complex)
    if o.shape != m.shape:
        raise DimensionError(f"operator shape {o.shape} does not match state shape {m.shape}")
    val = np.einsum("ij,ji->", m, o)
    if abs(val.imag) > HERMITIAN_TOL:
        raise StateError(f"expectation has imaginary part {val.imag:.3e}; operator not Hermitian?")
    return float(val.real)


def purity(rho) -> float:
    m = _as_matrix(rho)
    return float(np.einsum("ij,ji->", m, m).real)


def partial_trace(rho, traced_party: int) -> np.ndarray:
    """Trace out one qubit (1-based) and return the reduced operator on the rest, in order."""
    m = _as_matrix(rho)
    n = _n_qubits(m.shape[0])
    if not 1 <= traced_party <= n:
        raise DimensionError(f"party {traced_party} out of range for {n} qubits")
    t = m.reshape([2] * (2 * n))
    ax = traced_party - 1
    red = np.trace(t, axis1=ax, axis2=ax + n)
    d = 2 ** (n - 1)
    return red.reshape(d, d)


def partial_transpose(rho, party: int) -> np.ndarray:
    """Transpose the tensor factor of one qubit (1-based)."""
    m = _as_matrix(rho)
    n = _n_qubits(m.shape[0])
    if n < 2:
        raise DimensionError("partial transpose needs at least two qubits")
    if not 1 <= party <= n:
        raise DimensionError(f"party {party} out of range for {n} qubits")
    t = m.reshape([2] * (2 * n))
    axes = list(range(2 * n))
    ax = party - 1
    axes[ax], axes[ax + n] = axes[ax + n], axes[ax]
    return t.transpose(axes).reshape(m.shape)


def min_eigenvalue(op) -> float:
    return float(np.linalg.eigvalsh(check_hermitian(op))[0])


@dataclass(frozen=True)
class PPTReport:
    per_party: dict[int, bool]
    min_eigenvalues: dict[int, float]
    tol: float

    @property
    def all_parties(self) -> bool:
        return all(self.per_party.values())


def is_ppt(rho, tol: float = PSD_TOL) -> PPTReport:
    """Peres test on every single-qubit partial transpose of ``rho``."""
    m = _as_matrix(rho)
    n = _n_qubits(m.shape[0])
    lams = {p: min_eigenvalue(partial_transpose(m, p)) for p in range(1, n + 1)}
    return PPTReport({p: lam >= -tol for p, lam in lams.items()}, lams, tol)
