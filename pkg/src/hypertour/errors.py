"""Exception types raised across the package."""


class HypertourError(Exception):
    """Base class for all package errors."""


# -- construction / core model -------------------------------------------

class DuplicateLabelError(HypertourError):
    pass


class UnknownLabelError(HypertourError):
    pass


class EmptyEdgeError(HypertourError):
    pass


class NoEdgesError(HypertourError):
    pass


class BadSideError(HypertourError):
    pass


class NotACutError(HypertourError):
    pass


# -- euler solvers --------------------------------------------------------

class InvalidFamilyError(HypertourError):
    pass


class BadDegreesError(HypertourError):
    pass


class OddDegreeError(HypertourError):
    pass


class DisconnectedError(HypertourError):
    pass


class TooLargeError(HypertourError):
    pass


class NotUniformError(HypertourError):
    pass


# -- edge-cut machinery ----------------------------------------------------

class NoCutExistsError(HypertourError):
    pass


class OverlappingPartsError(HypertourError):
    pass


class InvalidInputsError(HypertourError):
    pass


class InvalidPiecesError(HypertourError):
    pass


class CollapsedVertexNotTraversedError(HypertourError):
    pass


class BadCutError(HypertourError):
    pass


# -- interchanging cycles ---------------------------------------------------

class NotACycleError(HypertourError):
    pass


class NotInterchangingError(HypertourError):
    pass


class NotCoveringError(HypertourError):
    pass


class NotCovering3Error(NotCoveringError):
    pass


class NotQuasiEulerianError(HypertourError):
    pass


class DiminishingSearchError(HypertourError):
    """Bounded diminishing-cycle search stalled where theory promises success."""


class TooFewEdgesError(HypertourError):
    pass


# -- design generators -------------------------------------------------------

class BadOrderError(HypertourError):
    pass


class InadmissibleError(HypertourError):
    pass


class BadParamsError(HypertourError):
    pass


class NotSTSError(HypertourError):
    pass


class BadIndicesError(HypertourError):
    pass


class LabelClashError(HypertourError):
    def __init__(self, position: int, message: str = ""):
        self.position = position
        super().__init__(message or f"label clash at position {position}")


class NotCubicSimpleError(HypertourError):
    pass
