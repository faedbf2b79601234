"""Fixed-setting witness scans over a family's parameter grid."""

from __future__ import annotations

import io
from itertools import product
from typing import Sequence

import numpy as np

from .catalog import FAMILIES, as_density, make
from .exceptions import TriqwitError
from .mixed import WitnessEvaluator
from .observables import WitnessSetting

Grid = Sequence[tuple[str, np.ndarray]]


def parse_grid(spec: str) -> tuple[str, np.ndarray]:
    """Parse ``name:lo:hi:step`` into ``(name, values)``; both ends are included."""
    try:
        name, lo, hi, step = spec.split(":")
        lo, hi, step = float(lo), float(hi), float(step)
    except ValueError:
        raise TriqwitError(f"grid {spec!r} is not of the form name:lo:hi:step") from None
    if not name or step <= 0 or hi < lo:
        raise TriqwitError(f"grid {spec!r} needs a name, step > 0 and lo <= hi")
    count = (hi - lo) / step
    n = int(round(count))
    if abs(count - n) > 1e-9 * max(1.0, count):
        raise TriqwitError(f"grid {spec!r}: (hi - lo) is not a multiple of step")
    return name, np.linspace(lo, hi, n + 1)


def _check_grid(family: str, grid: Grid) -> None:
    if family not in FAMILIES:
        raise TriqwitError(f"unknown family {family!r}")
    params = FAMILIES[family].params
    names = [name for name, _ in grid]
    if sorted(names) != sorted(params):
        raise TriqwitError(f"{family} is parametrised by {params}, grid gives {tuple(names)}")
    for name, values in grid:
        if np.min(values) < 0.0 or np.max(values) > 1.0:
            raise TriqwitError(f"grid for {name} leaves the family domain [0, 1]")


def scan_witness(family: str, grid: Grid, witness: str,
                 setting: WitnessSetting) -> list[tuple[tuple[float, ...], float]]:
    """Witness value at every grid point, row-major (first grid axis slowest)."""
    _check_grid(family, grid)
    evaluate = WitnessEvaluator(setting, witness)
    names = [name for name, _ in grid]
    rows = []
    for point in product(*(values for _, values in grid)):
        state = make(family, **dict(zip(names, point)))
        rows.append((tuple(float(v) for v in point), evaluate(as_density(state))))
    return rows


def to_csv(names: Sequence[str], rows) -> str:
    """CSV text with a header row, ``\\n`` line endings and 12 significant digits."""
    buf = io.StringIO()
    buf.write(",".join([*names, "value"]) + "\n")
    for point, value in rows:
        buf.write(",".join(f"{v:.12g}" for v in (*point, value)) + "\n")
    return buf.getvalue()
