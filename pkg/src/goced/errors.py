"""Exception hierarchy shared by every goced module."""

from __future__ import annotations


class GocedError(Exception):
    """Base class for all errors raised by this package."""


class UnknownId(GocedError, KeyError):
    def __init__(self, id_: str):
        super().__init__(id_)
        self.id = id_

    def __str__(self) -> str:
        return f"unknown id: {self.id!r}"


class DanglingReference(GocedError):
    def __init__(self, id_: str, referrer: str | None = None):
        self.id = id_
        self.referrer = referrer
        where = f" (referenced by {referrer!r})" if referrer else ""
        super().__init__(f"dangling reference to {id_!r}{where}")


class DuplicateId(GocedError):
    def __init__(self, id_: str):
        self.id = id_
        super().__init__(f"duplicate id: {id_!r}")


class InvariantViolation(GocedError):
    pass


class NotARelator(GocedError):
    pass


class NotAnObject(GocedError):
    pass


class NotAQuality(GocedError):
    pass


class OpenInterval(GocedError):
    pass


class DegenerateInterval(GocedError):
    pass


class CyclicDependence(GocedError):
    def __init__(self, cycle: list[str]):
        self.cycle = cycle
        super().__init__("historical dependence cycle: " + " -> ".join(cycle))


class AmbiguousValue(GocedError):
    def __init__(self, quality: str, qvas_ids: list[str]):
        self.quality = quality
        self.qvas_ids = qvas_ids
        super().__init__(
            f"quality {quality!r} has overlapping value attributions: {', '.join(qvas_ids)}"
        )


class InputSyntaxError(GocedError):
    """Malformed input bytes (bad JSON, CSV, timestamp or Turtle token)."""

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class SchemaError(GocedError):
    """Well-formed input whose structure does not match the expected schema."""

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


class MissingColumn(SchemaError):
    def __init__(self, column: str):
        super().__init__("header", f"missing column {column!r}")
        self.column = column


class MappingError(GocedError):
    pass


class InvalidBaseIri(GocedError):
    pass


class UnsupportedConstruct(GocedError):
    pass
