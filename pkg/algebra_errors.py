#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Algebra Errors
==============
Exception hierarchy shared by the algebra, module and verification layers.
Verifiers report failed identities as report content; these exceptions are
raised only when a precondition of a library call is violated.
"""


class AlgebraError(Exception):
    """Base class for every error raised by the library."""


class ArityError(AlgebraError, ValueError):
    """Degree vector or rational vector has the wrong number of coordinates."""


class PreconditionError(AlgebraError, ValueError):
    """Arguments violate the hypotheses of an operation."""


class CapabilityError(AlgebraError):
    """The requested object is outside what the library can construct."""


class InadmissibleElementError(AlgebraError):
    """A basis symbol or element does not belong to the ambient algebra."""


class WindowOutOfRangeError(AlgebraError, IndexError):
    """A computation referenced a degree outside the active window."""


class CalibrationError(AlgebraError):
    """No coefficient profile in the search set satisfies the jet identities."""

    def __init__(self, message, best_profile=None, best_residual=None):
        super().__init__(message)
        self.best_profile = best_profile
        self.best_residual = best_residual


class NotAssociativizableError(AlgebraError):
    """Cartan loop operators do not define an associative Laurent action."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotOfJetTypeError(AlgebraError):
    """Grade-shift operators are not proportional on a spanning set."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ConfigError(AlgebraError, ValueError):
    """Run configuration could not be parsed or validated."""

    def __init__(self, message, field=None, line=None):
        detail = message
        if field is not None:
            detail = f"{detail} [field: {field}]"
        if line is not None:
            detail = f"{detail} [line: {line}]"
        super().__init__(detail)
        self.field = field
        self.line = line


class ReportFormatError(AlgebraError, ValueError):
    """A report file is not a valid verification bundle."""
