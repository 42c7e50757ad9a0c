"""Exception hierarchy shared by all quadrank modules."""


class QuadrankError(ValueError):
    pass


# numfield

class NonPrimeGenerator(QuadrankError):
    pass


class DuplicateGenerator(QuadrankError):
    pass


class BasisTooLarge(QuadrankError):
    pass


class OutsideField(QuadrankError):
    def __init__(self, missing, message=None):
        self.missing = tuple(sorted(missing))
        super().__init__(message or f"square root needs primes outside the basis: {self.missing}")


class BasisMismatch(QuadrankError):
    pass


class NotASubfield(QuadrankError):
    pass


class DivisionByZero(QuadrankError, ZeroDivisionError):
    pass


class DivisionByZeroPolynomial(DivisionByZero):
    pass


class PrimeInsideField(QuadrankError):
    pass


class ParseError(QuadrankError):
    pass


# exactla

class DimensionMismatch(QuadrankError):
    pass


class LengthMismatch(DimensionMismatch):
    pass


class NotSquare(DimensionMismatch):
    pass


class RaggedBlocks(DimensionMismatch):
    pass


class DimensionCapExceeded(QuadrankError):
    pass


class NegativeEntry(QuadrankError):
    pass


# gen

class DimensionCap(QuadrankError):
    pass


class DomainTooSmall(QuadrankError):
    pass


class WeightExceedsN(QuadrankError):
    pass


class NotIncreasing(QuadrankError):
    pass


class TwoNMinusOneComposite(QuadrankError):
    def __init__(self, index, value):
        self.index = index
        self.value = value
        super().__init__(f"2*n_{index} - 1 = {2 * value - 1} is not prime (index {index})")


# certify

class CertificateRefused(QuadrankError):
    """A structural hypothesis of the certificate does not hold for the input."""

    check = "structure"


class NotIntegerMatrix(CertificateRefused):
    check = "integer_entries"


class DiagonalNotPrimeForm(CertificateRefused):
    check = "diag_value"


class DiagonalNotConstant(DiagonalNotPrimeForm):
    check = "diag_constant"


class OffdiagEscapesSubfield(CertificateRefused):
    check = "offdiag_subfield_membership"

    def __init__(self, entry, value, primes):
        self.entry = entry
        self.value = value
        self.primes = tuple(primes)
        super().__init__(
            f"entry {entry} = {value} needs sqrt of primes {self.primes}, "
            "not all below the certifying prime"
        )


class BadDiagonal(QuadrankError):
    pass


class CapExceeded(QuadrankError):
    pass


class DecompositionInvalid(QuadrankError):
    def __init__(self, entry, message):
        self.entry = entry
        super().__init__(message)


class DiagonalBlockNotUnit(QuadrankError):
    pass


# oracle

class BudgetExceeded(QuadrankError):
    def __init__(self, required, budget):
        self.required = required
        self.budget = budget
        super().__init__(f"{required} sign classes needed, budget is {budget}")


class NonRationalEntries(QuadrankError):
    pass


class InconsistentEvidence(QuadrankError):
    pass
