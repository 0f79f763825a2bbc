"""
Exception types raised by the library. Each category maps to one exit
code of the command line front door.
"""


class DiversifiedInfluenceError(Exception):
    """Base class for all errors raised deliberately by this package."""
    exit_code = 1


class ConfigError(DiversifiedInfluenceError, ValueError):
    """
    A run configuration is invalid.

    :param field: The name of the offending configuration field (or
     ``None`` if the error is not tied to a single field).
    :param message: What is wrong with it.
    """
    exit_code = 2

    def __init__(self, field, message: str):
        self.field = field
        self.message = message
        if field is None:
            super().__init__(message)
        else:
            super().__init__(f"{field}: {message}")


class DataError(DiversifiedInfluenceError, ValueError):
    """
    An input file (network, communities, embeddings, attributes, seeds)
    cannot be parsed or violates an invariant.

    :param message: What is wrong.
    :param path: (Optional) The file in which the problem was found.
    :param line: (Optional) The 1-indexed line number.
    """
    exit_code = 3

    def __init__(self, message: str, path=None, line: int = None):
        self.message = message
        self.path = path
        self.line = line
        location = ''
        if path is not None:
            location = f"{path}"
            if line is not None:
                location = f"{location}, line {line}"
            location = f"{location}: "
        elif line is not None:
            location = f"line {line}: "
        super().__init__(f"{location}{message}")


class ResourceBoundError(DiversifiedInfluenceError, RuntimeError):
    """An exact computation would exceed its enumeration bound."""
    exit_code = 4


__all__ = [
    'DiversifiedInfluenceError',
    'ConfigError',
    'DataError',
    'ResourceBoundError',
]
