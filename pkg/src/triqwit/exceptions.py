"""Exception hierarchy shared by every triqwit module."""


class TriqwitError(ValueError):
    """Base class for all input and consistency errors raised by triqwit."""


class StateError(TriqwitError):
    """A state or operator violates its validity invariants."""


class DimensionError(TriqwitError):
    """Operands have incompatible or unsupported dimensions."""


class SettingError(TriqwitError):
    """An observable triple or witness setting is not valid."""


class ClassificationError(TriqwitError):
    """Witness values form a pattern that no exact pure state can produce."""


class NoThresholdError(TriqwitError):
    """A threshold search found no crossing in the parameter domain."""
