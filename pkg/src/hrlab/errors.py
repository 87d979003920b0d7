"""Exception hierarchy shared by all hrlab modules."""


class HRLabError(Exception):
    """Base class for every error raised by hrlab."""


class InvalidParams(HRLabError, ValueError):
    pass


class InvalidDimension(InvalidParams):
    pass


class MuOutOfRange(InvalidParams):
    pass


class WrongRegime(HRLabError):
    """Operation requested for the other root configuration (simple vs. double)."""


class EllTooSmall(HRLabError, ValueError):
    pass


class EstimateFailed(HRLabError):
    pass


class ContractViolation(HRLabError):
    pass


class NoAdmissibleQ(HRLabError):
    pass


class QOutOfRange(HRLabError, ValueError):
    pass


class SupFailure(HRLabError):
    pass


class CertificateFailed(HRLabError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidGrid(HRLabError, ValueError):
    pass


class AssemblyError(HRLabError):
    pass


class StepError(HRLabError):
    pass
