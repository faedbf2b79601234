"""Named states, fixed local unitaries and seeded random-state generators."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .exceptions import TriqwitError
from .observables import WitnessSetting, pauli_triple, triple_from_unitary
from .pure import Bipartition
from .qstate import DIM, DensityMatrix, PureState, mix, outer

SQRT2 = np.sqrt(2.0)


def ket(bits: str) -> np.ndarray:
    """Computational basis vector, e.g. ``ket("011")``."""
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def _proj(v: np.ndarray) -> np.ndarray:
    return np.outer(v, v.conj())


def bell_pair() -> np.ndarray:
    """Two-qubit ``(|00> + |11>)/sqrt2`` as a 4-vector."""
    return (ket("00") + ket("11")) / SQRT2


def ghz() -> PureState:
    return PureState((ket("000") + ket("111")) / SQRT2)


def w_state() -> PureState:
    return PureState((ket("001") + ket("010") + ket("100")) / np.sqrt(3.0))


def zero() -> PureState:
    return PureState(ket("000"))


def psi_plus() -> PureState:
    """``|0> (x) |psi+>``: qubit 1 in |0>, qubits 2-3 in the Bell pair."""
    return PureState(np.kron(ket("0"), bell_pair()))


def rho1() -> DensityMatrix:
    """Equal mixture of a Bell pair on each qubit pair with the third qubit in |0>."""
    ab = (ket("000") + ket("110")) / SQRT2
    ac = (ket("000") + ket("101")) / SQRT2
    bc = (ket("000") + ket("011")) / SQRT2
    return DensityMatrix((_proj(ab) + _proj(ac) + _proj(bc)) / 3)


@lru_cache(maxsize=1)
def sigma_insep() -> DensityMatrix:
    psi1 = (ket("000") + ket("101")) / SQRT2
    psi2 = (ket("001") + ket("110")) / SQRT2
    psi3 = (ket("010") + ket("111")) / SQRT2
    m = 2 / 7 * (_proj(psi1) + _proj(psi2) + _proj(psi3)) + 1 / 7 * _proj(ket("011"))
    return DensityMatrix(m)


def phi_b(b: float) -> PureState:
    """``|1> (x) (sqrt((1+b)/2)|00> + sqrt((1-b)/2)|10>)``."""
    _check_unit_interval("b", b)
    return PureState(np.sqrt((1 + b) / 2) * ket("100") + np.sqrt((1 - b) / 2) * ket("110"))


def _sigma_b_matrix(b: float) -> np.ndarray:
    _check_unit_interval("b", b)
    w_insep = 7 * b / (7 * b + 1)
    w_phi = 1 / (7 * b + 1)
    return w_insep * sigma_insep().matrix + w_phi * _proj(phi_b(b).vector)


def sigma_b(b: float) -> DensityMatrix:
    """PPT entangled family: weight 7b/(7b+1) on sigma_insep, 1/(7b+1) on |phi_b>."""
    return DensityMatrix(_sigma_b_matrix(b))


def rho3(b: float, p: float) -> DensityMatrix:
    """``p sigma_b + (1-p) I/8``."""
    _check_unit_interval("p", p)
    return DensityMatrix(p * _sigma_b_matrix(b) + (1 - p) / DIM * np.eye(DIM))


def rho_w(p: float) -> DensityMatrix:
    """W state with white noise, ``p |W><W| + (1-p) I/8``."""
    _check_unit_interval("p", p)
    return DensityMatrix(p * _proj(w_state().vector) + (1 - p) / DIM * np.eye(DIM))


def _check_unit_interval(name: str, x: float) -> None:
    if not (np.isfinite(x) and 0.0 <= x <= 1.0):
        raise TriqwitError(f"parameter {name}={x!r} outside [0, 1]")


@dataclass(frozen=True)
class Family:
    name: str
    params: tuple[str, ...]
    build: Callable
    kind: str  # "pure" or "mixed"
    doc: str = ""


FAMILIES: dict[str, Family] = {f.name: f for f in (
    Family("zero", (), zero, "pure", "|000>"),
    Family("ghz", (), ghz, "pure", "(|000> + |111>)/sqrt2"),
    Family("w", (), w_state, "pure", "(|001> + |010> + |100>)/sqrt3"),
    Family("psi_plus", (), psi_plus, "pure", "|0> (x) (|00> + |11>)/sqrt2"),
    Family("rho1", (), rho1, "mixed", "three Bell pairs, third qubit |0>"),
    Family("sigma_insep", (), sigma_insep, "mixed", "PPT entangled core state"),
    Family("phi_b", ("b",), phi_b, "pure", "|1>(x)(sqrt((1+b)/2)|00> + sqrt((1-b)/2)|10>)"),
    Family("sigma_b", ("b",), sigma_b, "mixed", "PPT entangled family"),
    Family("rho3", ("b", "p"), rho3, "mixed", "p sigma_b + (1-p) I/8"),
    Family("rho_w", ("p",), rho_w, "mixed", "p |W><W| + (1-p) I/8"),
)}


def make(family: str, *args: float, **kwargs: float) -> PureState | DensityMatrix:
    """Build a named state; parameters may be positional (in family order) or keywords."""
    try:
        fam = FAMILIES[family]
    except KeyError:
        raise TriqwitError(f"unknown family {family!r}; known: {', '.join(FAMILIES)}") from None
    if len(args) > len(fam.params):
        raise TriqwitError(f"{family} takes parameters {fam.params}, got {len(args)} positional")
    values = dict(zip(fam.params, args))
    for k, v in kwargs.items():
        if k not in fam.params or k in values:
            raise TriqwitError(f"bad or duplicate parameter {k!r} for {family}")
        values[k] = v
    missing = [p for p in fam.params if p not in values]
    if missing:
        raise TriqwitError(f"{family} needs parameters {missing}")
    return fam.build(*(float(values[p]) for p in fam.params))


def as_density(state: PureState | DensityMatrix) -> DensityMatrix:
    return outer(state) if isinstance(state, PureState) else state


FIXED_UNITARIES = {
    "u1": np.array([[0, 1], [-1, 0]], dtype=complex),
    "u2": np.array([[0, 1], [-1, 0]], dtype=complex),
    "v2": np.array([[1, 1], [-1, 1]], dtype=complex) / SQRT2,
}


def fixed_unitaries(name: str) -> np.ndarray:
    """``u1 = u2 = |0><1| - |1><0|``, ``v2 = (|0><0| + |0><1| - |1><0| + |1><1|)/sqrt2``."""
    try:
        u = FIXED_UNITARIES[name]
    except KeyError:
        raise TriqwitError(f"unknown unitary {name!r}") from None
    return u.copy()


# ---------------------------------------------------------------------------
# random states

BISEP_MIN_CONCURRENCE = 0.1
MIXTURE_SIZE = 8

GENERATORS = ("haar_pure", "product_pure", "bisep_pure", "fully_sep_mixed",
              "bisep_mixed", "random_mixed")


def rng_for(seed: int, index: int = 0) -> np.random.Generator:
    """Independent stream for draw ``index`` under ``seed``."""
    return np.random.default_rng([int(seed), int(index)])


def haar_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def haar_unitary(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / SQRT2
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def two_qubit_concurrence(v: np.ndarray) -> float:
    """Wootters concurrence of a pure two-qubit vector, ``2 |a00 a11 - a01 a10|``."""
    return 2 * abs(v[0] * v[3] - v[1] * v[2])


def _product_vec(rng) -> np.ndarray:
    return np.kron(np.kron(haar_vector(rng, 2), haar_vector(rng, 2)), haar_vector(rng, 2))


def _bisep_vec(rng, party: int) -> np.ndarray:
    single = haar_vector(rng, 2)
    while True:
        pair = haar_vector(rng, 4)
        if two_qubit_concurrence(pair) >= BISEP_MIN_CONCURRENCE:
            break
    # build as party-1 state then move the single qubit into place
    t = np.kron(single, pair).reshape(2, 2, 2)
    return np.moveaxis(t, 0, party - 1).reshape(DIM)


def _mixture(rng, draw, k: int) -> DensityMatrix:
    weights = rng.dirichlet(np.ones(k))
    weights /= weights.sum()
    return mix([(w, PureState(draw())) for w in weights])


def random_state(generator: str, seed: int = 0, index: int = 0, *,
                 partition: int | None = None, partitions=(1, 2, 3),
                 k: int = MIXTURE_SIZE) -> PureState | DensityMatrix:
    """Seeded random state; each ``(seed, index)`` pair is its own stream.

    ``partition`` picks the separable cut for ``bisep_pure`` (random if None);
    ``partitions`` restricts the cuts drawn by ``bisep_mixed``; ``k`` is the
    number of pure terms in the mixtures.
    """
    rng = rng_for(seed, index)
    if generator == "haar_pure":
        return PureState(haar_vector(rng, DIM))
    if generator == "product_pure":
        return PureState(_product_vec(rng))
    if generator == "bisep_pure":
        party = int(Bipartition(partition)) if partition is not None else int(rng.integers(1, 4))
        return PureState(_bisep_vec(rng, party))
    if generator == "fully_sep_mixed":
        return _mixture(rng, lambda: _product_vec(rng), k)
    if generator == "bisep_mixed":
        cuts = [int(Bipartition(c)) for c in partitions]
        return _mixture(rng, lambda: _bisep_vec(rng, cuts[rng.integers(len(cuts))]), k)
    if generator == "random_mixed":
        g = rng.standard_normal((DIM, DIM)) + 1j * rng.standard_normal((DIM, DIM))
        m = g @ g.conj().T
        return DensityMatrix(m / np.trace(m).real)
    raise TriqwitError(f"unknown generator {generator!r}; known: {', '.join(GENERATORS)}")


# ---------------------------------------------------------------------------
# named witness settings

def _setting(a: str | None, b: str | None, c: str | None) -> WitnessSetting:
    def triple(name):
        return pauli_triple() if name is None else triple_from_unitary(fixed_unitaries(name))
    return WitnessSetting(triple(a), triple(b), triple(c))


SETTINGS: dict[str, Callable] = {
    "pauli": lambda: _setting(None, None, None),
    # A_i = u1 s_i u1^+, B_i = C_i = s_i
    "example1": lambda: _setting("u1", None, None),
    # A_i = u2 s_i u2^+, B_i = v2 s_i v2^+, C_i = s_i
    "example2": lambda: _setting("u2", "v2", None),
}


def named_setting(name: str) -> WitnessSetting:
    try:
        return SETTINGS[name]()
    except KeyError:
        raise TriqwitError(f"unknown setting {name!r}; known: {', '.join(SETTINGS)}") from None
