"""Single-qubit observables, complementary triples and witness settings.

A triple is stored as three Bloch vectors (rows of a 3x3 array).  Its
orientation is the sign ``mu`` with ``-i A1 A2 A3 = mu * I``, which for
orthonormal vectors equals the determinant of the vector matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import SettingError
from .qstate import IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z

ORTHO_TOL = 1e-10

_SIGMA_VEC = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])


def _bloch(v) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.shape != (3,) or not np.all(np.isfinite(v)):
        raise SettingError(f"Bloch vector must be three finite reals, got {v!r}")
    if abs(np.linalg.norm(v) - 1.0) > ORTHO_TOL:
        raise SettingError(f"Bloch vector {v} does not have unit norm")
    return v


def observable_from_bloch(v) -> np.ndarray:
    """Return ``v . sigma`` for a unit Bloch vector ``v``."""
    v = _bloch(v)
    return np.tensordot(v, _SIGMA_VEC, axes=1)


def bloch_from_observable(op) -> np.ndarray:
    """Inverse of :func:`observable_from_bloch`: components ``tr(sigma_k op) / 2``."""
    op = np.asarray(op, dtype=complex)
    comps = np.einsum("kij,ji->k", _SIGMA_VEC, op) / 2
    if np.max(np.abs(comps.imag)) > ORTHO_TOL:
        raise SettingError("operator is not Hermitian")
    return comps.real


def check_unitary(u, tol: float = ORTHO_TOL) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise SettingError(f"single-qubit unitary must be 2x2, got {u.shape}")
    if np.max(np.abs(u @ u.conj().T - IDENTITY)) > tol:
        raise SettingError("matrix is not unitary")
    return u


def _product_orientation(ops) -> float:
    """Scalar mu with ``-i A1 A2 A3 = mu I``; raises if the product is not scalar."""
    prod = -1j * ops[0] @ ops[1] @ ops[2]
    mu = prod[0, 0]
    if np.max(np.abs(prod - mu * IDENTITY)) > ORTHO_TOL or abs(abs(mu) - 1) > ORTHO_TOL \
            or abs(mu.imag) > ORTHO_TOL:
        raise SettingError("-i A1 A2 A3 is not +-identity; observables are not complementary")
    return mu.real


class ObservableTriple:
    """Three mutually complementary single-qubit observables."""

    __slots__ = ("_vectors", "_orientation")

    def __init__(self, vectors):
        vec = np.asarray(vectors, dtype=float)
        if vec.shape != (3, 3) or not np.all(np.isfinite(vec)):
            raise SettingError(f"a triple needs a 3x3 array of Bloch vectors, got shape {vec.shape}")
        if np.max(np.abs(vec @ vec.T - np.eye(3))) > ORTHO_TOL:
            raise SettingError("Bloch vectors are not orthonormal")
        det = np.linalg.det(vec)
        mu = _product_orientation([np.tensordot(v, _SIGMA_VEC, axes=1) for v in vec])
        if np.sign(det) != np.sign(mu):
            raise SettingError("determinant and operator-product orientations disagree")
        vec = vec.copy()
        vec.flags.writeable = False
        self._vectors = vec
        self._orientation = 1 if mu > 0 else -1

    @property
    def vectors(self) -> np.ndarray:
        return self._vectors

    @property
    def orientation(self) -> int:
        return self._orientation

    @property
    def operators(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return tuple(np.tensordot(v, _SIGMA_VEC, axes=1) for v in self._vectors)

    def operator(self, k: int) -> np.ndarray:
        """Observable ``k`` (1..3); ``k == 0`` gives the identity."""
        if k == 0:
            return IDENTITY
        return np.tensordot(self._vectors[k - 1], _SIGMA_VEC, axes=1)

    def rotated(self, r) -> "ObservableTriple":
        """Apply the rotation ``r`` to every Bloch vector (``v -> r v``)."""
        r = _check_orthogonal(r)
        return ObservableTriple(self._vectors @ r.T)

    def __eq__(self, other) -> bool:
        return isinstance(other, ObservableTriple) and np.array_equal(self._vectors, other._vectors)

    def __hash__(self) -> int:
        return hash(self._vectors.tobytes())

    def __repr__(self) -> str:
        return f"ObservableTriple(vectors={self._vectors.tolist()}, orientation={self._orientation:+d})"


def _check_orthogonal(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3) or np.max(np.abs(r.T @ r - np.eye(3))) > ORTHO_TOL:
        raise SettingError("matrix is not a 3x3 orthogonal matrix")
    return r


def pauli_triple() -> ObservableTriple:
    return ObservableTriple(np.eye(3))


def triple_from_unitary(u) -> ObservableTriple:
    """Triple ``(U s1 U^+, U s2 U^+, U s3 U^+)``; conjugation keeps orientation +1."""
    u = check_unitary(u)
    return ObservableTriple([bloch_from_observable(u @ s @ u.conj().T) for s in _SIGMA_VEC])


def triple_from_rotation(r) -> ObservableTriple:
    """Triple whose Bloch vectors are the rows of ``r``; orientation is ``det r``."""
    return ObservableTriple(_check_orthogonal(r))


def orientation(t: ObservableTriple) -> int:
    return t.orientation


def euler_zyz(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """Active rotation ``Rz(alpha) Ry(beta) Rz(gamma)``."""
    ca, sa = np.cos(alpha), np.sin(alpha)
    cb, sb = np.cos(beta), np.sin(beta)
    cg, sg = np.cos(gamma), np.sin(gamma)
    rz_a = np.array([[ca, -sa, 0], [sa, ca, 0], [0, 0, 1]])
    ry_b = np.array([[cb, 0, sb], [0, 1, 0], [-sb, 0, cb]])
    rz_g = np.array([[cg, -sg, 0], [sg, cg, 0], [0, 0, 1]])
    return rz_a @ ry_b @ rz_g


def triple_from_euler(alpha: float, beta: float, gamma: float) -> ObservableTriple:
    """Pauli triple with each axis rotated by the Z-Y-Z Euler rotation.

    The i-th vector is ``R e_i``, i.e. the i-th column of ``euler_zyz(...)``.
    """
    return triple_from_rotation(euler_zyz(alpha, beta, gamma).T)


@dataclass(frozen=True)
class WitnessSetting:
    """One complementary triple per party, all sharing the same orientation."""

    a: ObservableTriple
    b: ObservableTriple
    c: ObservableTriple

    def __post_init__(self):
        for t in (self.a, self.b, self.c):
            if not isinstance(t, ObservableTriple):
                raise SettingError(f"expected ObservableTriple, got {type(t).__name__}")
        if len({self.a.orientation, self.b.orientation, self.c.orientation}) != 1:
            raise SettingError(
                "mixed orientations "
                f"({self.a.orientation:+d}, {self.b.orientation:+d}, {self.c.orientation:+d}); "
                "all three triples must share one orientation")

    @property
    def triples(self) -> tuple[ObservableTriple, ObservableTriple, ObservableTriple]:
        return (self.a, self.b, self.c)

    @property
    def orientation(self) -> int:
        return self.a.orientation

    @classmethod
    def pauli(cls) -> "WitnessSetting":
        t = pauli_triple()
        return cls(t, t, t)

    @classmethod
    def from_euler(cls, angles) -> "WitnessSetting":
        """Nine Z-Y-Z angles, three per party."""
        angles = np.asarray(angles, dtype=float).reshape(3, 3)
        return cls(*(triple_from_euler(*row) for row in angles))

    def local_operator(self, party: int, k: int) -> np.ndarray:
        """Observable ``k`` (0 = identity) of the triple on ``party`` (1..3)."""
        return self.triples[party - 1].operator(k)

    def bloch_stack(self) -> np.ndarray:
        """(3, 4, 4) array: per party, row k is the 4-vector of observable k over (I, X, Y, Z)."""
        out = np.zeros((3, 4, 4))
        for p, t in enumerate(self.triples):
            out[p, 0, 0] = 1.0
            out[p, 1:, 1:] = t.vectors
        return out
