"""Bipartite concurrences of three-qubit pure states and the pure-state classifier.

``g_witness`` evaluates the quadratic Pauli polynomials G1..G3 from squared
expectation values.  ``concurrence_sq_oracle`` evaluates the same quantity
from the amplitudes directly; the two are kept independent so that their
agreement is a real check.

Note on normalisation: these functions return ``det(rho_i)`` for the reduced
single-qubit state, which is ``(1 - tr rho_i^2) / 2``.  Under the definition
``C = sqrt(1 - tr rho_i^2)`` the squared concurrence would be twice this
(GHZ: 1/2 rather than 1/4).  The polynomials and the amplitude formula agree
with each other, so they are used as-is without rescaling.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import ClassificationError
from .qstate import PAULIS, PureState, expectation, outer, tensor

DEFAULT_TOL = 1e-8


class Bipartition(enum.IntEnum):
    """Cut separating the named party from the other two."""

    CUT_1_23 = 1
    CUT_2_13 = 2
    CUT_3_12 = 3

    @property
    def label(self) -> str:
        return {1: "1|23", 2: "2|13", 3: "12|3"}[self.value]


# (coefficient, Pauli string) pairs; None is the constant term.  Each string
# names the factor on parties 1, 2, 3 ("I" = identity, "1".."3" = sigma_x..z).
# Every polynomial carries an overall factor 1/16.
G_TABLES: dict[int, tuple[tuple[int, str | None], ...]] = {
    1: (
        (3, None),
        (-1, "II3"), (-1, "I3I"), (-3, "3II"),
        (1, "33I"), (1, "3I3"), (-1, "I33"), (1, "333"),
        (-3, "1II"), (1, "1I3"), (1, "13I"), (1, "133"),
        (-3, "2II"), (1, "2I3"), (1, "23I"), (1, "233"),
    ),
    2: (
        (3, None),
        (-1, "II3"), (-1, "3II"), (-3, "I3I"),
        (1, "33I"), (1, "I33"), (-1, "3I3"), (1, "333"),
        (-3, "I1I"), (1, "I13"), (1, "31I"), (1, "313"),
        (-3, "I2I"), (1, "I23"), (1, "32I"), (1, "323"),
    ),
    3: (
        (3, None),
        (-1, "3II"), (-1, "I3I"), (-3, "II3"),
        (1, "I33"), (1, "3I3"), (-1, "33I"), (1, "333"),
        (-3, "II1"), (1, "3I1"), (1, "I31"), (1, "331"),
        (-3, "II2"), (1, "3I2"), (1, "I32"), (1, "332"),
    ),
}

# product observables one has to measure to evaluate all of G1..G3
G_OBSERVABLES = tuple(sorted({s for tab in G_TABLES.values() for _, s in tab if s is not None}))


@lru_cache(maxsize=None)
def pauli_string(s: str) -> np.ndarray:
    """8x8 operator for a three-character Pauli string such as ``"I3I"``."""
    if len(s) != 3 or any(ch not in "I0123" for ch in s):
        raise ValueError(f"bad Pauli string {s!r}")
    op = tensor([PAULIS[0 if ch in "I0" else int(ch)] for ch in s])
    op.flags.writeable = False
    return op


def concurrence_sq_oracle(psi: PureState, cut: Bipartition | int) -> float:
    """Squared concurrence of ``psi`` across ``cut`` from its amplitudes.

    For cut 1|23 this is ``(sum |a0jk|^2)(sum |a1jk|^2) - |sum a0jk a1jk*|^2``;
    the other cuts move the chosen party to the front first.
    """
    cut = Bipartition(cut)
    t = np.moveaxis(psi.tensor, cut.value - 1, 0).reshape(2, 4)
    a0, a1 = t[0], t[1]
    n0 = float(np.sum(np.abs(a0) ** 2))
    n1 = float(np.sum(np.abs(a1) ** 2))
    overlap = np.sum(a0 * a1.conj())
    return n0 * n1 - abs(overlap) ** 2


def g_witness(psi: PureState, which: Bipartition | int) -> float:
    """Evaluate G_which from squared Pauli expectation values of ``psi``."""
    rho = outer(psi)
    total = 0.0
    for coeff, s in G_TABLES[int(Bipartition(which))]:
        total += coeff if s is None else coeff * expectation(rho, pauli_string(s)) ** 2
    return total / 16


def g_values(psi: PureState) -> tuple[float, float, float]:
    return tuple(g_witness(psi, i) for i in (1, 2, 3))


class PureLabel(enum.Enum):
    FULLY_SEPARABLE = "FullySeparable"
    BISEPARABLE = "Biseparable"
    GENUINE_ENTANGLED = "GenuineEntangled"


@dataclass(frozen=True)
class PureClassification:
    label: PureLabel
    g_values: tuple[float, float, float]
    tol: float
    party: int | None = None  # set for BISEPARABLE: the party split from the rest

    def __str__(self) -> str:
        if self.label is PureLabel.BISEPARABLE:
            return f"Biseparable({self.party})"
        return self.label.value


def classify_pure(psi: PureState, tol: float = DEFAULT_TOL) -> PureClassification:
    """Fully separable / biseparable / genuinely entangled, from the three G values.

    At least two vanishing G values mean full separability (two zero cuts force
    the third to vanish).  If exactly two vanish while the third exceeds
    ``sqrt(tol)`` the values cannot come from an exact pure state and
    ClassificationError is raised.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    g = g_values(psi)
    small = [i + 1 for i, v in enumerate(g) if v <= tol]
    if len(small) == 3:
        return PureClassification(PureLabel.FULLY_SEPARABLE, g, tol)
    if len(small) == 2:
        (other,) = {1, 2, 3} - set(small)
        if g[other - 1] > np.sqrt(tol):
            raise ClassificationError(
                f"G values {g} vanish on two cuts but not on cut {other}; "
                "numerically inconsistent for a pure state")
        return PureClassification(PureLabel.FULLY_SEPARABLE, g, tol)
    if len(small) == 1:
        return PureClassification(PureLabel.BISEPARABLE, g, tol, party=small[0])
    return PureClassification(PureLabel.GENUINE_ENTANGLED, g, tol)
