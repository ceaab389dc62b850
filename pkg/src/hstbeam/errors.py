"""Exception hierarchy shared by every module."""


class HstbeamError(Exception):
    """Base class for all package errors."""


class ConfigError(HstbeamError, ValueError):
    """Invalid scenario or run-mode parameters."""


class OutOfRangeError(HstbeamError, ValueError):
    """A time or index argument lies outside its valid window."""


class DomainError(HstbeamError, ValueError):
    """A physical quantity lies outside the domain of a formula."""


class InfeasibleError(HstbeamError):
    """The scenario admits no valid allocation or assignment."""


class CapacityError(InfeasibleError):
    """Not enough beams for a conflict-free assignment."""
