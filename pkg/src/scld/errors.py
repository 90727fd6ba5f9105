"""Exception hierarchy shared by every module of the package."""


class SCLDError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class FieldError(SCLDError):
    pass


class ShapeError(SCLDError, ValueError):
    pass


class CodeFormatError(SCLDError, ValueError):
    """Raised for malformed or invalid code / evidence files."""


class ValidationError(CodeFormatError):
    pass


class ParameterError(SCLDError, ValueError):
    pass


class ListOverflowError(SCLDError):
    """Step 1 of the two-step tracer produced more candidates than the list size."""


class AmbiguousEvidenceError(SCLDError):
    """More than one coalition explains an evidence vector (diagnostic mode)."""


class ExpurgationError(SCLDError):
    pass


class InfeasibleError(SCLDError):
    pass


class RootBracketError(SCLDError):
    pass
