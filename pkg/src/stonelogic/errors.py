"""Exception hierarchy shared by every module of the package."""


class StoneLogicError(Exception):
    """Base class for all errors raised by stonelogic."""


class TooLarge(StoneLogicError):
    pass


# order core
class NotALattice(StoneLogicError):
    pass


class Unbounded(NotALattice):
    pass


class CyclicCovers(NotALattice):
    pass


class NotAnOrderIso(StoneLogicError):
    pass


class ExtensionNotIso(StoneLogicError):
    pass


# algebra
class NoPseudoComplement(StoneLogicError):
    pass


class NoDualPseudoComplement(StoneLogicError):
    pass


class UnsupportedArity(StoneLogicError):
    pass


class SignatureMismatch(StoneLogicError):
    pass


class NotClassified(StoneLogicError):
    pass


class EmbeddingFailed(StoneLogicError):
    pass


class TableMismatch(StoneLogicError):
    """A negation table supplied from outside disagrees with the one derived from the order."""


# rough sets
class NotASubset(StoneLogicError):
    pass


class NotAPartition(StoneLogicError):
    pass


class NotClosed(StoneLogicError):
    pass


class PointNotInUniverse(StoneLogicError):
    pass


# logic
class FormulaSyntaxError(StoneLogicError, ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class MissingConnective(StoneLogicError):
    pass


class UnboundVariable(StoneLogicError):
    pass


class UnsupportedAlgebra(StoneLogicError):
    pass


class WrongTarget(StoneLogicError):
    pass


# proofs
class UnknownCalculus(StoneLogicError):
    pass


class DerivationFormatError(StoneLogicError, ValueError):
    pass
