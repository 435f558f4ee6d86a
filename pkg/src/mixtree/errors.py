"""Exception hierarchy shared by every mixtree module.

Input problems (bad trees, bad parameters, bad vertices) derive from
``MixtreeInputError`` so the CLI can map them to exit status 2 in one place.
Broken mathematical invariants raise ``InvariantViolation`` instead.
"""


class MixtreeError(Exception):
    """Base class for all mixtree errors."""


class MixtreeInputError(MixtreeError, ValueError):
    """The caller handed us something we cannot work with."""


# -- tree construction / queries ------------------------------------------

class InvalidTreeError(MixtreeInputError):
    pass


class DisconnectedError(InvalidTreeError):
    pass


class HasCycleError(InvalidTreeError):
    pass


class SelfLoopError(InvalidTreeError):
    pass


class DuplicateEdgeError(InvalidTreeError):
    pass


class ParseError(InvalidTreeError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InvalidVertexError(MixtreeInputError, IndexError):
    pass


class NotAnEdgeError(MixtreeInputError):
    pass


# -- mixing engine ----------------------------------------------------------

class TrivialTreeError(MixtreeInputError):
    pass


class BadDistributionError(MixtreeInputError):
    pass


# -- brooms -----------------------------------------------------------------

class BadParamsError(MixtreeInputError):
    pass


class BadIndexError(MixtreeInputError, IndexError):
    pass


# -- surgery ----------------------------------------------------------------

class SurgeryError(MixtreeInputError):
    pass


class NotACaterpillarError(SurgeryError):
    pass


class NotALeafError(SurgeryError):
    pass


class AlreadyAdjacentError(SurgeryError):
    pass


class NotOnPathError(SurgeryError):
    pass


class NoLeafAtError(SurgeryError):
    def __init__(self, index):
        super().__init__(f"no non-spine leaf at spine index {index}")
        self.index = index


class IndexOutOfRangeError(SurgeryError, IndexError):
    pass


class InsufficientLeavesError(SurgeryError):
    pass


class NotBroomLikeError(SurgeryError):
    pass


# -- enumeration ------------------------------------------------------------

class OrderTooLargeError(MixtreeInputError):
    pass


class BadDiameterError(MixtreeInputError):
    pass


# -- simulation -------------------------------------------------------------

class StepLimitExceededError(MixtreeError, RuntimeError):
    pass


# -- invariants -------------------------------------------------------------

class InvariantViolation(MixtreeError, AssertionError):
    """A mathematical identity that must hold exactly did not."""
