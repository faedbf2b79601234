"""Threshold search, reference-value ledger and report rendering."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Callable, Mapping

import numpy as np

from .catalog import FAMILIES, as_density, make
from .exceptions import NoThresholdError, TriqwitError
from .mixed import WitnessEvaluator
from .observables import WitnessSetting

BISECTION_TOL = 1e-10
MONOTONE_SAMPLES = 101
MONOTONE_SLACK = 1e-12


# ---------------------------------------------------------------------------
# published reference values the toolkit compares its own numbers against

CLAIMS_VERSION = 1


@dataclass(frozen=True)
class Claim:
    key: str
    kind: str                     # "threshold" or "value"
    family: str
    witnesses: tuple[str, ...]
    setting: str                  # preset name the claim was stated for
    reported: float | Callable[..., float]
    target: float | None = None   # threshold claims: level crossed by the witness
    note: str = ""

    def reported_value(self, params: Mapping[str, float]) -> float:
        return float(self.reported(**params)) if callable(self.reported) else float(self.reported)


def _sigma_b_closed_form(b: float) -> float:
    return -32 * b * (-1 + b + np.sqrt(1 - b * b)) / (1 + 7 * b) ** 2


CLAIMS: tuple[Claim, ...] = (
    Claim("rho_w/F_l<0", "threshold", "rho_w", ("F1", "F2", "F3"), "pauli", 0.56, 0.0,
          "white-noise W state detected as entangled above this p"),
    Claim("rho_w/Fsum<-2", "threshold", "rho_w", ("Fsum",), "pauli", 0.92, -2.0,
          "white-noise W state detected as genuinely entangled above this p"),
    Claim("rho1/T1", "value", "rho1", ("T1",), "example1", -16 / 9),
    Claim("sigma_b/T1", "value", "sigma_b", ("T1",), "example2", _sigma_b_closed_form,
          note="closed form -32b(-1+b+sqrt(1-b^2))/(1+7b)^2"),
)


def find_claim(kind: str, family: str, witness: str, setting: str,
               target: float | None = None) -> Claim | None:
    for c in CLAIMS:
        if (c.kind, c.family, c.setting) == (kind, family, setting) and witness in c.witnesses:
            if kind == "threshold" and (target is None or abs(c.target - target) > 1e-12):
                continue
            return c
    return None


@dataclass(frozen=True)
class LedgerEntry:
    claim: str
    computed: float
    reported: float
    abs_diff: float
    params: dict
    version: int = CLAIMS_VERSION


class DiscrepancyLedger:
    """Append-only record of computed values next to the published ones."""

    def __init__(self):
        self._entries: list[LedgerEntry] = []

    def record(self, claim: Claim, computed: float, params: Mapping[str, float] | None = None,
               reported_params: Mapping[str, float] | None = None) -> LedgerEntry:
        reported = claim.reported_value(reported_params or params or {})
        entry = LedgerEntry(claim.key, float(computed), reported, abs(float(computed) - reported),
                            dict(params or {}))
        self._entries.append(entry)
        return entry

    @property
    def entries(self) -> tuple[LedgerEntry, ...]:
        return tuple(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def to_jsonl(self) -> str:
        return "".join(json.dumps(asdict(e), sort_keys=True) + "\n" for e in self._entries)


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThresholdResult:
    family: str
    witness: str
    parameter: str
    target: float
    root: float
    bracket: tuple[float, float]
    increasing: bool
    iterations: int


def find_threshold(family: str, witness: str, setting: WitnessSetting, target: float,
                   free: str | None = None,
                   fixed: Mapping[str, float] | None = None) -> ThresholdResult:
    """Parameter value in [0, 1] where the witness crosses ``target``.

    The witness must be monotone in the free parameter (checked on 101 evenly
    spaced points) and ``witness - target`` must change sign on [0, 1];
    otherwise TriqwitError / NoThresholdError is raised.
    """
    if family not in FAMILIES:
        raise TriqwitError(f"unknown family {family!r}")
    fixed = dict(fixed or {})
    params = FAMILIES[family].params
    open_params = [p for p in params if p not in fixed]
    if free is None:
        if len(open_params) != 1:
            raise TriqwitError(f"{family} has parameters {params}; name the free one")
        free = open_params[0]
    if free not in params or sorted(open_params) != [free]:
        raise TriqwitError(f"free parameter {free!r} with fixed {sorted(fixed)} does not "
                           f"cover {params}")
    evaluate = WitnessEvaluator(setting, witness)

    def g(x: float) -> float:
        return evaluate(as_density(make(family, **fixed, **{free: x}))) - target

    grid = np.linspace(0.0, 1.0, MONOTONE_SAMPLES)
    vals = np.array([g(x) for x in grid])
    steps = np.diff(vals)
    if np.all(steps >= -MONOTONE_SLACK):
        increasing = True
    elif np.all(steps <= MONOTONE_SLACK):
        increasing = False
    else:
        raise TriqwitError(f"{witness} is not monotone in {free} on [0, 1]")
    lo, hi = 0.0, 1.0
    g_lo, g_hi = vals[0], vals[-1]
    if g_lo == 0.0:
        return ThresholdResult(family, witness, free, target, 0.0, (0.0, 0.0), increasing, 0)
    if np.sign(g_lo) == np.sign(g_hi):
        raise NoThresholdError(f"{witness} does not cross {target} for {free} in [0, 1]")
    it = 0
    while hi - lo > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        g_mid = g(mid)
        it += 1
        if g_mid == 0.0:
            lo = hi = mid
            break
        if np.sign(g_mid) == np.sign(g_lo):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return ThresholdResult(family, witness, free, target, 0.5 * (lo + hi), (lo, hi), increasing, it)


# ---------------------------------------------------------------------------

def _flatten(prefix: str, obj, out: list[tuple[str, str]]) -> None:
    if isinstance(obj, Mapping):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(obj, (list, tuple)) and obj and isinstance(obj[0], Mapping):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, out)
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append((prefix, " ".join(_fmt(v) for v in obj)))
    else:
        out.append((prefix, _fmt(obj)))


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _jsonable(obj):
    if isinstance(obj, Mapping):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def render(report: Mapping, machine: bool = False) -> str:
    """``key: value`` lines, or a single JSON object when ``machine`` is set."""
    if machine:
        return json.dumps(_jsonable(report), sort_keys=False) + "\n"
    lines: list[tuple[str, str]] = []
    _flatten("", report, lines)
    return "".join(f"{k}: {v}\n" for k, v in lines)
