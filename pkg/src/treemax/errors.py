"""Exception types shared across the library."""


class TreemaxError(Exception):
    """Base class for all library errors."""


class DomainError(TreemaxError):
    """An argument is outside its mathematical domain."""


class OutOfTreeError(TreemaxError):
    """An ancestor walk went above the root."""


class RegionError(TreemaxError):
    """A vertex or set member lies outside the evaluation region."""


class GuardLimitError(TreemaxError):
    """A size guard refused an instance that is too large."""


class ConfigError(TreemaxError):
    """A configuration document or flag value is invalid."""
