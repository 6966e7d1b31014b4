"""Shared error hierarchy with a stable machine-readable code table.

Every error the workbench can raise maps to exactly one code (the class
name) and one HTTP status; the table is snapshot-tested so codes cannot
drift between releases.
"""

from __future__ import annotations


class WorkbenchError(Exception):
    """Base class for all workbench errors."""


# --- provider gateway ---------------------------------------------------

class DuplicateProvider(WorkbenchError):
    pass


class InvalidConfig(WorkbenchError):
    pass


class UnknownProvider(WorkbenchError):
    pass


class ProviderUnavailable(WorkbenchError):
    pass


class EmptyPrompt(WorkbenchError):
    pass


class GenerationFailed(WorkbenchError):
    """Every provider in a fan-out failed; no turn can be recorded."""


# --- sessions and modes -------------------------------------------------

class SessionNotFound(WorkbenchError):
    pass


class WrongMode(WorkbenchError):
    pass


class NoResponses(WorkbenchError):
    pass


class NoVerifications(WorkbenchError):
    pass


class UnknownResponse(WorkbenchError):
    pass


# --- source verifier ----------------------------------------------------

class DuplicateDocument(WorkbenchError):
    pass


class EmptyDocument(WorkbenchError):
    pass


class EmptyIndex(WorkbenchError):
    pass


# --- double check -------------------------------------------------------

class EmptyQuery(WorkbenchError):
    pass


class SearchUnavailable(WorkbenchError):
    pass


# --- compare ------------------------------------------------------------

class TooFewProviders(WorkbenchError):
    pass


class CompareFailed(WorkbenchError):
    pass


# --- decision -----------------------------------------------------------

class InvalidWeights(WorkbenchError):
    pass


class NotInTable(WorkbenchError):
    pass


# --- scorecard ----------------------------------------------------------

class IncompleteRatings(WorkbenchError):
    pass


class DuplicateEntry(WorkbenchError):
    pass


class NoEntries(WorkbenchError):
    pass


# --- persistence --------------------------------------------------------

class NotFound(WorkbenchError):
    pass


class VersionUnsupported(WorkbenchError):
    pass


class CorruptArchive(WorkbenchError):
    pass


# Stable code -> HTTP status table. 400: bad input, 404: missing thing,
# 409: operation conflicts with current state, 5xx: upstream failure.
ERROR_STATUS: dict[type[WorkbenchError], int] = {
    EmptyPrompt: 400,
    EmptyQuery: 400,
    EmptyDocument: 400,
    InvalidConfig: 400,
    InvalidWeights: 400,
    IncompleteRatings: 400,
    TooFewProviders: 400,
    VersionUnsupported: 400,
    CorruptArchive: 400,
    SessionNotFound: 404,
    UnknownProvider: 404,
    UnknownResponse: 404,
    NotFound: 404,
    NoEntries: 404,
    DuplicateProvider: 409,
    DuplicateDocument: 409,
    DuplicateEntry: 409,
    WrongMode: 409,
    NoResponses: 409,
    NoVerifications: 409,
    NotInTable: 409,
    EmptyIndex: 409,
    GenerationFailed: 502,
    CompareFailed: 502,
    ProviderUnavailable: 503,
    SearchUnavailable: 503,
}


def error_code(exc: WorkbenchError) -> str:
    return type(exc).__name__


def error_status(exc: WorkbenchError) -> int:
    return ERROR_STATUS.get(type(exc), 500)
