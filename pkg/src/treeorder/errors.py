"""Shared error types; every domain error carries a JSON-ready payload."""

from __future__ import annotations


class InputError(ValueError):
    """Malformed input: bad file, bad JSON shape, bad flag.  A usage-level failure."""


class DomainError(Exception):
    """A violated contract of the kernel: invariants, preconditions, refused checks."""

    kind = "domain"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details

    def payload(self) -> dict:
        out = {"error": self.kind, "message": str(self)}
        out.update(self.details)
        return out


class CanonicalFormError(DomainError):
    kind = "canonical-form"


class DomainRangeError(DomainError):
    kind = "range"


class ModelMismatchError(DomainError):
    kind = "model-mismatch"


class TopologyError(DomainError):
    kind = "topology"


class FourPointError(DomainError):
    kind = "four-point"


class EscapeError(DomainError):
    """A presented sequence heads for the missing boundary; its limit is refused."""

    kind = "escape"
