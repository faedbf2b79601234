"""Multi-start compass search for the most negative witness value.

A setting is parametrised by nine Z-Y-Z Euler angles, three per party.  Each
party's triple is the Pauli triple rotated by its Euler rotation, so every
candidate has orientation +1 (or -1 when ``orientation=-1`` in the config,
which reflects the third axis of every triple).

All starts advance in lockstep and are evaluated as one batch through the
correlation tensor of the state; the per-start arithmetic is identical to
running them one after another.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .catalog import as_density, rng_for
from .exceptions import TriqwitError
from .mixed import batch_witness, check_witness_id, correlation_tensor, witness_value
from .observables import ObservableTriple, WitnessSetting, triple_from_euler
from .qstate import DensityMatrix, PureState

N_ANGLES = 9
_REFLECT_THIRD = np.array([[1.0], [1.0], [-1.0]])
# gains below this (relative) are round-off and do not count as improvement
_MIN_GAIN = 1e-14


@dataclass(frozen=True)
class OptimizerConfig:
    starts: int = 64
    max_iterations: int = 400
    initial_step: float = 0.5
    shrink: float = 0.5
    min_step: float = 1e-7
    seed: int = 0
    orientation: int = 1
    record_history: bool = False

    def __post_init__(self):
        if self.starts < 1 or self.max_iterations < 1:
            raise TriqwitError("starts and max_iterations must be positive")
        if not (self.initial_step > 0 and self.min_step > 0):
            raise TriqwitError("step sizes must be positive")
        if not 0 < self.shrink < 1:
            raise TriqwitError("shrink factor must lie in (0, 1)")
        if self.orientation not in (1, -1):
            raise TriqwitError("orientation must be +1 or -1")
        if not 0 <= self.seed < 2**64:
            raise TriqwitError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class OptimizationResult:
    witness: str
    best_value: float
    best_angles: np.ndarray          # shape (9,): (alpha, beta, gamma) for A, B, C
    start_values: np.ndarray         # best value reached by each start
    evaluations: int
    iterations: np.ndarray           # sweeps used by each start
    orientation: int = 1
    history: list[list[float]] | None = field(default=None, repr=False)

    @property
    def best_start(self) -> int:
        return int(np.argmin(self.start_values))

    @property
    def best_setting(self) -> WitnessSetting:
        return setting_from_angles(self.best_angles, self.orientation)


def setting_from_angles(angles, orientation: int = 1) -> WitnessSetting:
    angles = np.asarray(angles, dtype=float).reshape(3, 3)
    triples = [triple_from_euler(*row) for row in angles]
    if orientation == -1:
        triples = [ObservableTriple(t.vectors * _REFLECT_THIRD) for t in triples]
    return WitnessSetting(*triples)


def _euler_batch(angles: np.ndarray) -> np.ndarray:
    """(n, 3) Euler angles -> (n, 3, 3) rotations ``Rz(a) Ry(b) Rz(g)``."""
    a, b, g = angles[:, 0], angles[:, 1], angles[:, 2]
    ca, sa, cb, sb, cg, sg = np.cos(a), np.sin(a), np.cos(b), np.sin(b), np.cos(g), np.sin(g)
    r = np.empty((angles.shape[0], 3, 3))
    r[:, 0, 0] = ca * cb * cg - sa * sg
    r[:, 0, 1] = -ca * cb * sg - sa * cg
    r[:, 0, 2] = ca * sb
    r[:, 1, 0] = sa * cb * cg + ca * sg
    r[:, 1, 1] = -sa * cb * sg + ca * cg
    r[:, 1, 2] = sa * sb
    r[:, 2, 0] = -sb * cg
    r[:, 2, 1] = sb * sg
    r[:, 2, 2] = cb
    return r


def _party_block(angles: np.ndarray, orientation: int) -> np.ndarray:
    """(n, 3) Euler angles of one party -> (n, 4, 4) Bloch stack block."""
    out = np.zeros((angles.shape[0], 4, 4))
    out[:, 0, 0] = 1.0
    # vector i of a triple is column i of the rotation
    out[:, 1:, 1:] = np.swapaxes(_euler_batch(angles), -1, -2)
    if orientation == -1:
        out[:, 3, 1:] *= -1.0
    return out


def angle_stacks(angles: np.ndarray, orientation: int = 1) -> np.ndarray:
    """(n, 9) angles -> (n, 3, 4, 4) Bloch stacks (see ``WitnessSetting.bloch_stack``)."""
    n = angles.shape[0]
    return _party_block(angles.reshape(n * 3, 3), orientation).reshape(n, 3, 4, 4)


def minimize_witness(rho: DensityMatrix | PureState, witness: str,
                     cfg: OptimizerConfig | None = None) -> OptimizationResult:
    """Search the witness minimum over equal-orientation settings.

    Start 0 begins at the canonical Pauli setting (all angles zero), so the
    result is never worse than that setting; every other start draws uniform
    angles in [0, 2 pi) from its own stream ``(seed, start)``.  Each sweep
    probes +-step along every angle in turn, accepting any improvement; a
    sweep without improvement multiplies the step by ``shrink``.
    """
    cfg = cfg or OptimizerConfig()
    check_witness_id(witness)
    corr = correlation_tensor(as_density(rho))
    x = np.zeros((cfg.starts, N_ANGLES))
    for s in range(1, cfg.starts):
        x[s] = rng_for(cfg.seed, s).uniform(0.0, 2 * np.pi, N_ANGLES)
    stacks = angle_stacks(x, cfg.orientation)
    fx = batch_witness(corr, stacks, witness)
    evals = cfg.starts
    step = np.full(cfg.starts, cfg.initial_step)
    iters = np.zeros(cfg.starts, dtype=int)
    history = [[v] for v in fx.tolist()] if cfg.record_history else None

    for _ in range(cfg.max_iterations):
        active = np.flatnonzero(step >= cfg.min_step)
        if active.size == 0:
            break
        m = active.size
        iters[active] += 1
        improved = np.zeros(m, dtype=bool)
        for i in range(N_ANGLES):
            party = i // 3
            xa = x[active]
            probes = np.concatenate([xa, xa])
            probes[:m, i] += step[active]
            probes[m:, i] -= step[active]
            # only the probed party's block differs from the current stacks
            pst = np.concatenate([stacks[active], stacks[active]])
            pst[:, party] = _party_block(probes[:, 3 * party:3 * party + 3], cfg.orientation)
            fp = batch_witness(corr, pst, witness)
            evals += 2 * m
            f_up, f_dn = fp[:m], fp[m:]
            cur = fx[active]
            bar = cur - _MIN_GAIN * np.maximum(1.0, np.abs(cur))
            take_up = f_up < bar
            take_dn = ~take_up & (f_dn < bar)
            # both directions improve: the + probe wins (it is evaluated first)
            for take, off in ((take_up, 0), (take_dn, m)):
                rows = active[take]
                x[rows] = probes[off:off + m][take]
                fx[rows] = fp[off:off + m][take]
                stacks[rows] = pst[off:off + m][take]
            moved = take_up | take_dn
            improved |= moved
            if history is not None:
                for j in active[moved]:
                    history[j].append(float(fx[j]))
        step[active[~improved]] *= cfg.shrink

    best = int(np.argmin(fx))
    angles = np.mod(x[best], 2 * np.pi)
    return OptimizationResult(witness, float(fx[best]), angles, fx.copy(), evals, iters,
                              cfg.orientation, history)


def check_result(rho, result: OptimizationResult, tol: float = 1e-10) -> float:
    """Re-evaluate the best setting through the direct 8x8 route; returns the deviation."""
    direct = witness_value(as_density(rho), result.best_setting, result.witness)
    dev = abs(direct - result.best_value)
    if dev > tol:
        raise TriqwitError(f"reconstructed setting gives {direct}, optimizer reported "
                           f"{result.best_value}")
    return dev
