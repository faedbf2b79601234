"""Finite-shot simulation of local product measurements.

Every product observable ``O = O1 (x) O2 (x) O3`` with ``Oi = v.sigma`` or the
identity has outcomes +-1, so a run of ``shots`` projective measurements is
a binomial draw with ``P(+1) = (1 + <O>) / 2``.  Witness estimates plug the
sample means into the witness polynomial; their error bar is the standard
deviation over bootstrap resamples of the outcome counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .catalog import as_density
from .exceptions import TriqwitError
from .mixed import combine, witness_observables
from .observables import WitnessSetting, observable_from_bloch
from .qstate import IDENTITY, DensityMatrix, PureState, expectation, tensor

BOOTSTRAP_RESAMPLES = 200
# sub-stream tag separating bootstrap draws from measurement draws
_BOOTSTRAP_TAG = 0xB0
_MEASURE_TAG = 0xA0

Product = tuple  # three entries, each a unit Bloch vector or None for the identity


@dataclass(frozen=True)
class ExpectationEstimate:
    mean: float
    stderr: float
    shots: int
    n_plus: int


@dataclass(frozen=True)
class MeasurementPlan:
    products: tuple[Product, ...]
    shots: int
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if int(self.shots) < 1:
            raise TriqwitError("shots must be at least 1")
        for prod in self.products:
            _product_operator(prod)


@dataclass(frozen=True)
class WitnessEstimate:
    witness: str
    value: float
    error: float
    shots: int
    expectations: dict[str, ExpectationEstimate]


def _product_operator(product: Product) -> np.ndarray | None:
    """8x8 operator of a product, or None when every factor is the identity."""
    if len(product) != 3:
        raise TriqwitError("a product observable needs one factor per party")
    if all(f is None for f in product):
        return None
    try:
        factors = [IDENTITY if f is None else observable_from_bloch(f) for f in product]
    except TriqwitError as exc:
        raise TriqwitError(f"factor does not have eigenvalues +-1: {exc}") from None
    return tensor(factors)


def _stream(seed: int, tag: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), tag, int(index)])


def _estimate(n_plus: int, shots: int) -> ExpectationEstimate:
    mean = (2 * n_plus - shots) / shots
    return ExpectationEstimate(mean, float(np.sqrt(max(0.0, 1 - mean**2) / shots)), shots, n_plus)


def _draw(rho: DensityMatrix, product: Product, shots: int, rng) -> ExpectationEstimate:
    op = _product_operator(product)
    if op is None:
        return ExpectationEstimate(1.0, 0.0, shots, shots)
    p_plus = min(1.0, max(0.0, (1 + expectation(rho, op)) / 2))
    return _estimate(int(rng.binomial(shots, p_plus)), shots)


def sample_expectation(rho: DensityMatrix | PureState, product: Product, shots: int,
                       seed: int = 0) -> ExpectationEstimate:
    """Mean of ``shots`` simulated +-1 outcomes of a product observable."""
    if shots < 1:
        raise TriqwitError("shots must be at least 1")
    return _draw(as_density(rho), tuple(product), int(shots), _stream(seed, _MEASURE_TAG, 0))


def product_for(setting: WitnessSetting, s: str) -> Product:
    """Product observable for a witness string such as ``"1I3"`` under ``setting``."""
    return tuple(None if ch == "I" else setting.triples[p].vectors[int(ch) - 1]
                 for p, ch in enumerate(s))


def plan_for(witness: str, setting: WitnessSetting, shots: int) -> MeasurementPlan:
    """One entry per distinct product observable in the witness."""
    labels = witness_observables(witness)
    return MeasurementPlan(tuple(product_for(setting, s) for s in labels), int(shots), labels)


def run_plan(rho: DensityMatrix | PureState, plan: MeasurementPlan,
             seed: int = 0) -> list[ExpectationEstimate]:
    """Sample every product of the plan; product ``i`` uses stream ``(seed, i)``."""
    rho = as_density(rho)
    return [_draw(rho, prod, plan.shots, _stream(seed, _MEASURE_TAG, i))
            for i, prod in enumerate(plan.products)]


def estimate_witness(rho: DensityMatrix | PureState, witness: str, setting: WitnessSetting,
                     shots: int, seed: int = 0,
                     resamples: int = BOOTSTRAP_RESAMPLES) -> WitnessEstimate:
    """Plug-in witness estimate with a bootstrap error bar."""
    plan = plan_for(witness, setting, shots)
    ests = run_plan(rho, plan, seed)
    value = combine(witness, {s: e.mean for s, e in zip(plan.labels, ests)})

    rng = _stream(seed, _BOOTSTRAP_TAG, 0)
    boot = {}
    for s, e in zip(plan.labels, ests):
        n_star = rng.binomial(e.shots, e.n_plus / e.shots, size=resamples)
        boot[s] = (2 * n_star - e.shots) / e.shots
    error = float(np.std(combine(witness, boot), ddof=1)) if resamples > 1 else 0.0
    return WitnessEstimate(witness, value, error, int(shots), dict(zip(plan.labels, ests)))


def pauli_product(s: str) -> Product:
    """Product of fixed Pauli factors from a string like ``"333"`` or ``"I13"``."""
    if len(s) != 3 or any(ch not in "I0123" for ch in s):
        raise TriqwitError(f"bad Pauli string {s!r}")
    basis = np.eye(3)
    return tuple(None if ch in "I0" else basis[int(ch) - 1] for ch in s)

