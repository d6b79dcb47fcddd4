from typing import Any, Dict, Optional


class EspartError(ValueError):
    """Base error. Carries the CLI exit code and the HTTP status it maps to."""

    exit_code: int = 2
    status_code: int = 422

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {"error": type(self).__name__, "message": self.message, "details": self.details}


class InputError(EspartError):
    """Unreadable or malformed input document."""

    status_code = 400


class DomainError(EspartError):
    """A value violates an operation's precondition."""


class ConfigError(EspartError):
    """Invalid parameters, descriptors or grids."""


class HypothesisFailure(EspartError):
    """A hypothesis of the partition theorem does not hold."""

    exit_code = 3

    def __init__(self, condition: str, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(f"hypothesis '{condition}' fails: {message}", details)
        self.condition = condition


class ExtractionFailure(EspartError):
    """A stage of the constant extraction could not choose its constant."""

    exit_code = 3

    def __init__(self, stage: str, condition: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(f"stage '{stage}' failed on condition '{condition}'", details)
        self.stage = stage
        self.condition = condition


class ExtrapolationError(ExtractionFailure):
    """No scale of the window satisfies the monotone-tail condition."""

    def __init__(self, details: Optional[Dict[str, Any]] = None):
        super().__init__("lemma_l2", "monotone_tail", details)


class ValidationFailure(EspartError):
    exit_code = 4
    status_code = 409


class NotFoundError(EspartError):
    exit_code = 5
    status_code = 404
