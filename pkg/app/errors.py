"""
Exception hierarchy for the skew Clifford toolkit.

Every error raised by the toolkit derives from ToolkitError, which is a
ValueError carrying the name of the module that raised it. The CLI and the
analysis pipeline use that tag to produce diagnostics of the form
"<module>: <message>".
"""

from typing import Any, List, Optional


class ToolkitError(ValueError):
    """Base class for all toolkit failures."""

    module: str = "toolkit"

    def __init__(self, message: str, *, module: Optional[str] = None):
        super().__init__(message)
        if module is not None:
            self.module = module

    @property
    def diagnostic(self) -> str:
        return f"{self.module}: {self}"


# scalars
class DivisionByZero(ToolkitError, ZeroDivisionError):
    module = "scalars"


class FieldMismatch(ToolkitError):
    module = "scalars"


class DimensionMismatch(ToolkitError):
    module = "scalars"


# freealg
class GeneratorMismatch(ToolkitError):
    module = "freealg"


class ParseError(ToolkitError):
    module = "freealg"


class NotDegreeTwo(ToolkitError):
    module = "freealg"


class ZeroRepresentative(ToolkitError):
    module = "freealg"


class InvalidPresentation(ToolkitError):
    module = "freealg"


# ncgb
class DegreeExceedsTruncation(ToolkitError):
    module = "ncgb"


class InhomogeneousInput(ToolkitError):
    module = "ncgb"


class WindowTooShort(ToolkitError):
    module = "ncgb"


# skewring
class InvalidMuMatrix(ToolkitError):
    module = "skewring"

    def __init__(self, message: str, entry: Optional[tuple] = None):
        super().__init__(message)
        self.entry = entry


class SizeMismatch(ToolkitError):
    module = "skewring"


class NotMuSymmetric(ToolkitError):
    module = "skewring"

    def __init__(self, message: str, entry: Optional[tuple] = None):
        super().__init__(message)
        self.entry = entry


class InhomogeneousElement(ToolkitError):
    module = "skewring"


class DegreeZeroElement(ToolkitError):
    module = "skewring"


# gsca
class MatricesLinearlyDependent(ToolkitError):
    module = "gsca"

    def __init__(self, message: str, kernel: Optional[List[List[Any]]] = None):
        super().__init__(message)
        # each kernel vector c satisfies sum_k c_k M_k = 0
        self.kernel = kernel or []


# geometry
class UnsupportedFieldForScan(ToolkitError):
    module = "geometry"


class UnsupportedSize(ToolkitError):
    module = "geometry"


# cli
class ValidationFailed(ToolkitError):
    module = "cli"
