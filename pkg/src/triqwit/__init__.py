"""Entanglement witnesses for three-qubit states."""

__version__ = "0.1.0"

from .exceptions import (ClassificationError, DimensionError, NoThresholdError, SettingError,
                         StateError, TriqwitError)
from .mixed import f_sum, f_witness, t_witness, verdict, witness_value
from .observables import ObservableTriple, WitnessSetting, pauli_triple
from .pure import Bipartition, classify_pure, g_values
from .qstate import DensityMatrix, PureState

__all__ = [
    "Bipartition", "ClassificationError", "DensityMatrix", "DimensionError", "NoThresholdError",
    "ObservableTriple", "PureState", "SettingError", "StateError", "TriqwitError", "WitnessSetting",
    "classify_pure", "f_sum", "f_witness", "g_values", "pauli_triple", "t_witness", "verdict",
    "witness_value",
]
