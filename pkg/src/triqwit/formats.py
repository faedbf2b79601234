"""JSON state and setting files, plus resolution of command-line state/setting tokens.

State file::

    {"kind": "pure", "amplitudes": [[re, im], ...8]}
    {"kind": "mixed", "entries": [[[re, im], ...8], ...8]}        # row-major
    {"kind": "mixed", "family": "sigma_b", "params": {"b": 0.5}}  # reference form

Setting file: keys ``A``, ``B``, ``C``, each one of ``"pauli"``,
``{"unitary": [[[re, im], [re, im]], [[re, im], [re, im]]]}``,
``{"rotation": [[...], [...], [...]]}`` (rows are the Bloch vectors) or
``{"euler_zyz": [alpha, beta, gamma]}``.

Floats are written with ``repr`` precision (at most 17 significant digits), so
a file written here reloads to bit-identical arrays.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from .catalog import FAMILIES, SETTINGS, make, named_setting
from .exceptions import TriqwitError
from .observables import (ObservableTriple, WitnessSetting, pauli_triple, triple_from_euler,
                          triple_from_rotation, triple_from_unitary)
from .qstate import DensityMatrix, PureState

PARTY_KEYS = ("A", "B", "C")


def _pairs(a: np.ndarray) -> list:
    a = np.asarray(a, dtype=complex)
    if a.ndim == 1:
        return [[float(z.real), float(z.imag)] for z in a]
    return [_pairs(row) for row in a]


def _complex(data, shape: tuple[int, ...]) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape != (*shape, 2):
        raise TriqwitError(f"expected {shape} array of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def state_to_dict(state: PureState | DensityMatrix) -> dict:
    if isinstance(state, PureState):
        return {"kind": "pure", "amplitudes": _pairs(state.vector)}
    return {"kind": "mixed", "entries": _pairs(state.matrix)}


def state_from_dict(data: dict) -> PureState | DensityMatrix:
    if not isinstance(data, dict):
        raise TriqwitError("state file must contain a JSON object")
    kind = data.get("kind")
    if "family" in data:
        state = make(data["family"], **{k: float(v) for k, v in data.get("params", {}).items()})
        if kind is not None and kind != FAMILIES[data["family"]].kind:
            raise TriqwitError(f"family {data['family']} is {FAMILIES[data['family']].kind}, "
                               f"file says {kind}")
        return state
    if kind == "pure":
        return PureState(_complex(data.get("amplitudes"), (8,)))
    if kind == "mixed":
        return DensityMatrix(_complex(data.get("entries"), (8, 8)))
    raise TriqwitError(f"state kind must be 'pure' or 'mixed', got {kind!r}")


def setting_to_dict(setting: WitnessSetting) -> dict:
    return {k: {"rotation": t.vectors.tolist()} for k, t in zip(PARTY_KEYS, setting.triples)}


def _triple_from_entry(entry) -> ObservableTriple:
    if entry == "pauli":
        return pauli_triple()
    if not isinstance(entry, dict) or len(entry) != 1:
        raise TriqwitError("each party needs exactly one of pauli, unitary, rotation, euler_zyz")
    (form, value), = entry.items()
    if form == "unitary":
        return triple_from_unitary(_complex(value, (2, 2)))
    if form == "rotation":
        return triple_from_rotation(np.asarray(value, dtype=float))
    if form == "euler_zyz":
        angles = np.asarray(value, dtype=float)
        if angles.shape != (3,):
            raise TriqwitError("euler_zyz needs three angles")
        return triple_from_euler(*angles)
    raise TriqwitError(f"unknown observable form {form!r}")


def setting_from_dict(data: dict) -> WitnessSetting:
    if not isinstance(data, dict) or set(data) != set(PARTY_KEYS):
        raise TriqwitError("setting file needs exactly the keys A, B, C")
    return WitnessSetting(*(_triple_from_entry(data[k]) for k in PARTY_KEYS))


def _read_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise TriqwitError(f"cannot read {path}: {exc}") from None


def _write_json(path, data: dict) -> None:
    Path(path).write_text(json.dumps(data, indent=1) + "\n", encoding="utf-8")


def load_state(path) -> PureState | DensityMatrix:
    return state_from_dict(_read_json(path))


def dump_state(state: PureState | DensityMatrix, path) -> None:
    _write_json(path, state_to_dict(state))


def load_setting(path) -> WitnessSetting:
    return setting_from_dict(_read_json(path))


def dump_setting(setting: WitnessSetting, path) -> None:
    _write_json(path, setting_to_dict(setting))


def parse_params(items) -> dict[str, float]:
    """``["b=0.5", "p=1"]`` -> ``{"b": 0.5, "p": 1.0}``."""
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        try:
            out[name.strip()] = float(value)
        except ValueError:
            sep = ""
        if not sep or not name.strip():
            raise TriqwitError(f"parameter {item!r} is not of the form name=value")
    return out


def resolve_state(token: str, params: dict[str, float] | None = None):
    """Family name (optionally ``name:k=v,k=v``), ``@file`` or a path, in that order."""
    params = dict(params or {})
    name, _, inline = token.partition(":")
    if name in FAMILIES and not token.startswith("@"):
        if inline:
            params.update(parse_params(inline.split(",")))
        return make(name, **params)
    path = token[1:] if token.startswith("@") else token
    if token.startswith("@") or os.path.exists(path):
        return load_state(path)
    raise TriqwitError(f"{token!r} is neither a known state ({', '.join(FAMILIES)}) nor a file")


def resolve_setting(token: str) -> WitnessSetting:
    if token in SETTINGS and not token.startswith("@"):
        return named_setting(token)
    path = token[1:] if token.startswith("@") else token
    if token.startswith("@") or os.path.exists(path):
        return load_setting(path)
    raise TriqwitError(f"{token!r} is neither a known setting ({', '.join(SETTINGS)}) nor a file")
