"""Exception types shared by every layer of the simulator."""


class QdnetError(Exception):
    """Base class for all errors raised by this package."""


class DimMismatchError(QdnetError):
    """Operand dimensions are incompatible."""


class InvalidSubsystemError(QdnetError):
    """A qubit index lies outside the network, or two roles coincide."""


class InvalidStateError(QdnetError):
    """A state vector or derived state violates its invariants."""


class InvalidArgumentError(QdnetError):
    """An argument violates a precondition that is not covered by a more specific error."""


class NotUnitaryError(QdnetError):
    """An operator that must be unitary is not, within tolerance."""


class NotObservableError(QdnetError):
    """An operator that must be Hermitian is not, within tolerance."""


class IncompatibleError(QdnetError):
    """Two subsystem states cannot be combined into one composite state."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class NonCommutingSupportsError(QdnetError):
    """Two operations overlap: they do not commute within tolerance."""


class NonCommutingFoliationError(QdnetError):
    """A branching projector no longer commutes with the descriptors being foliated."""


class ZeroWeightBranchError(QdnetError):
    """A branch has (numerically) zero probability weight."""


class MismatchedBranchesError(QdnetError):
    """Two branches do not originate from the same branching projectors."""


class NonCommutingGateError(QdnetError):
    """A gate does not commute with the branching observable, so it cannot be split per branch."""


class ParseError(QdnetError):
    """A circuit file could not be parsed.  Carries the source position."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = ""
        if line is not None:
            loc = f"line {line}"
            if column is not None:
                loc += f", column {column}"
            loc = f" ({loc})"
        super().__init__(message + loc)
        self.line = line
        self.column = column
