"""
Weak Tomography - Exceptions
Error hierarchy shared by the library and the CLI
"""
from typing import List


class TomographyError(Exception):
    """Base class for all errors raised by this package"""

    exit_code: int = 1


class ConfigError(TomographyError):
    """Malformed or inconsistent experiment configuration"""

    exit_code = 1

    def __init__(self, message: str, diagnostics: List[str] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


class ValidationFailed(TomographyError):
    """One or more properties of the validation suite did not hold"""

    exit_code = 2

    def __init__(self, failed: List[dict]):
        names = ", ".join(check["name"] for check in failed)
        super().__init__(f"{len(failed)} validation check(s) failed: {names}")
        self.failed = failed


class OutputError(TomographyError):
    """Result files could not be written"""

    exit_code = 3
