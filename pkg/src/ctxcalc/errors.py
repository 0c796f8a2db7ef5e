"""Exception hierarchy shared across the toolkit.

The CLI maps these onto its documented exit codes: configuration and usage
problems exit 2, math-domain violations exit 3, filesystem problems exit 4
and Monte Carlo validation failures exit 5.
"""


class CtxcalcError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(CtxcalcError):
    """Invalid configuration: bad construction arguments, scenario files,
    sweep specifications or estimator preconditions."""


class MathDomainError(CtxcalcError):
    """A formula was evaluated outside its domain, e.g. a zero denominator
    or a negative memory window."""
