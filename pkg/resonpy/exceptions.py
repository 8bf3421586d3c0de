"""Exceptions raised by resonpy, each carrying the CLI exit code it maps to"""
import textwrap

__all__ = [
    "ResonpyException",
    "InvalidArgument",
    "DomainError",
    "InvalidConfig",
    "ResourceRefusal",
    "InvariantViolation",
]

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_INVALID = 2
EXIT_RESOURCE = 3


class ResonpyException(Exception):
    exit_code = EXIT_INVALID


class InvalidArgument(ResonpyException, ValueError):
    exit_code = EXIT_INVALID


class DomainError(InvalidArgument):
    """An argument lies outside the region where a formula is valid.

    The message names the violated inequality.
    """

    pass


class InvalidConfig(InvalidArgument):
    pass


class ResourceRefusal(ResonpyException, RuntimeError):
    exit_code = EXIT_RESOURCE

    def __init__(self, cap_name, limit, requested):
        """
        Raised instead of starting a computation larger than a configured cap.

        Parameters
        ----------
        cap_name : str
            Field name in ``ResourceCaps``
        limit : number
            Configured cap
        requested : number
            Size the computation would have needed
        """
        super(ResourceRefusal, self).__init__(
            "{} exceeded: requested {}, cap is {}".format(cap_name, requested, limit)
        )
        self.cap_name = cap_name
        self.limit = limit
        self.requested = requested


class InvariantViolation(ResonpyException, AssertionError):
    exit_code = EXIT_INVARIANT
    spacer = "    "

    def __init__(self, message, report=None):
        """
        Raised when an unconditional property of a constructed object fails,
        which indicates a bug rather than bad input.

        Parameters
        ----------
        message : str
        report : object, optional
            The check report which recorded the violation
        """
        super(InvariantViolation, self).__init__(message)
        self.report = report

    def format_detail(self, indent=""):
        if self.report is None:
            return ""
        return textwrap.indent("Report:\n" + repr(self.report), indent)

    def __str__(self):
        detail = self.format_detail(self.spacer)
        base = super(InvariantViolation, self).__str__()
        return base + "\n" + detail if detail else base


def require_alpha(alpha):
    """Raise InvalidArgument unless 1/2 < alpha < 1."""
    if not 0.5 < alpha < 1:
        raise InvalidArgument(
            "alpha must satisfy 1/2 < alpha < 1, got {}".format(alpha)
        )
