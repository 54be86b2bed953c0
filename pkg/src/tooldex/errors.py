"""Exception types shared across the package."""


class TooldexError(Exception):
    """Base class for all package errors."""


# corpus / dataset loading

class ParseError(TooldexError):
    """A record could not be parsed; carries the file and record index."""

    def __init__(self, message: str, *, path: str | None = None, record: int | None = None):
        loc = ""
        if path is not None:
            loc = f" [{path}" + (f", record {record}]" if record is not None else "]")
        super().__init__(message + loc)
        self.path = path
        self.record = record


class DuplicateId(TooldexError):
    def __init__(self, doc_id: str):
        super().__init__(f"duplicate document id: {doc_id!r}")
        self.doc_id = doc_id


class UnknownDocId(TooldexError):
    def __init__(self, doc_ids):
        ids = sorted(doc_ids)
        super().__init__(f"unknown document id(s): {', '.join(ids)}")
        self.doc_ids = ids


class EmptyDocument(TooldexError):
    """Record has no descriptive content to render."""


# generation providers

class ProviderError(TooldexError):
    """Generation or embedding provider failed after retries."""


class ProviderTimeout(ProviderError):
    pass


class AuthError(ProviderError):
    """Authentication failure; never retried."""


class GenerationError(TooldexError):
    """Too many synthetic-query generation calls failed for one document."""


# expansion / intents

class MismatchedDoc(TooldexError):
    """A synthetic query was paired with a document it does not belong to."""


class NoIntents(TooldexError):
    """An intent response contained no usable intent lines."""


class InvalidQuery(TooldexError):
    """Query text violates a precondition (empty or whitespace-only)."""


# encoders / index

class EmptyCorpus(TooldexError):
    pass


class DimensionMismatch(TooldexError):
    pass


class MissingCopies(TooldexError):
    def __init__(self, doc_id: str):
        super().__init__(f"document {doc_id!r} has no expanded copies")
        self.doc_id = doc_id


class ChecksumError(TooldexError):
    """Persisted vector payload does not match its recorded checksum."""


# evaluation

class EmptyRelevanceSet(TooldexError):
    pass


class UnknownQuery(TooldexError):
    def __init__(self, query_id: str):
        super().__init__(f"run contains query {query_id!r} absent from the dataset")
        self.query_id = query_id
