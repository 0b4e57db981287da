class MtpkitError(ValueError):
    """
    Base class of every error raised by mtpkit. It subclasses ValueError because every
    failure the package reports is caused by a bad input value (a malformed point file,
    a parameter vector of the wrong length, a dataset of the wrong dimension, ...).
    """


class DimensionMismatchError(MtpkitError):
    pass


class ClassMismatchError(MtpkitError):
    pass


class InvalidTransformationError(MtpkitError):
    pass


class ConfigurationError(MtpkitError):
    pass


class CheckpointError(MtpkitError):
    pass


class ParseError(MtpkitError):
    """
    Raised when a dataset, manifest or encoding file cannot be read.

    Parameters:
    message (str): What went wrong.
    line_number (int | None): 1-based line of the offending input, when known.
    """

    def __init__(self, message, line_number=None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class DuplicatePointError(ParseError):
    pass
