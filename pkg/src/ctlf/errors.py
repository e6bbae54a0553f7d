"""Exception hierarchy shared by every ctlf module."""


class CTLFError(Exception):
    """Base class for all errors raised by ctlf."""


class FormulaSyntaxError(CTLFError, ValueError):
    """Malformed formula text.

    Attributes
    ----------
    position : int
        0-based character offset where parsing failed.
    expected : str
        Human readable description of what the parser wanted there.
    """

    def __init__(self, position: int, expected: str, text: str = ""):
        self.position = position
        self.expected = expected
        self.text = text
        super().__init__(f"at position {position}: expected {expected}")


class ThresholdOutOfRange(FormulaSyntaxError):
    def __init__(self, position: int, value, text: str = ""):
        self.value = value
        CTLFError.__init__(self, f"at position {position}: threshold {value} outside [0, 1]")
        self.position = position
        self.expected = "a threshold in [0, 1]"
        self.text = text


class ZeroDenominator(FormulaSyntaxError):
    def __init__(self, position: int, text: str = ""):
        CTLFError.__init__(self, f"at position {position}: zero denominator in threshold")
        self.position = position
        self.expected = "a non-zero denominator"
        self.text = text


class InvalidWorld(CTLFError, ValueError):
    pass


class InvalidPath(CTLFError, ValueError):
    pass


class CapExceeded(CTLFError):
    def __init__(self, required: int, cap: int):
        self.required = required
        self.cap = cap
        super().__init__(f"enumeration needs {required} paths, cap is {cap}")


class AlphabetMismatch(CTLFError, ValueError):
    pass


class TotalMismatch(CTLFError, ValueError):
    pass


class TotalExceedsHorizon(CTLFError, ValueError):
    pass


class UnknownAtom(CTLFError, KeyError):
    pass


class MissingDistribution(CTLFError):
    pass


class IncompletePath(CTLFError, ValueError):
    pass


class PathNotFromRoot(CTLFError, ValueError):
    pass


class Unsupported(CTLFError):
    pass


class UnknownOutcome(CTLFError, ValueError):
    pass


class SeriesComplete(CTLFError):
    pass


class EmptySeries(CTLFError):
    pass


class NotExtendable(CTLFError):
    pass


class MissingDataset(CTLFError):
    pass


class DatasetExhausted(CTLFError):
    pass


class UrnExhausted(CTLFError):
    pass
