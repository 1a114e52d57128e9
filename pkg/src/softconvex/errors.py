"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class SoftConvexError(ValueError):
    """Base class for all errors raised by :mod:`softconvex`."""


class UnknownParameter(SoftConvexError):
    pass


class UnknownElement(SoftConvexError):
    pass


class MissingParameter(SoftConvexError):
    """An assignment does not cover every parameter of the space."""


class SpaceMismatch(SoftConvexError):
    pass


class BudgetExceeded(SoftConvexError):
    """The requested enumeration or table does not fit the configured bounds."""


class TableIncomplete(SoftConvexError):
    pass


class _ReportError(SoftConvexError):
    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class InvalidStructure(_ReportError):
    pass


class InvalidOperator(_ReportError):
    pass


class InvalidBase(_ReportError):
    pass
