"""Exception hierarchy. Everything a user can trigger with bad input is a DataError."""


class DataError(Exception):
    pass


class ConlluParseError(DataError):
    def __init__(self, message: str, line: int, source: str | None = None):
        self.line = line
        self.source = source
        where = f"{source}:{line}" if source else f"line {line}"
        super().__init__(f"{where}: {message}")


class ArtifactError(DataError):
    """Malformed counts/pairs/vocabulary/embedding/dataset file."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        prefix = source or "<input>"
        if line is not None:
            prefix = f"{prefix}:{line}"
        super().__init__(f"{prefix}: {message}")


class OOVError(DataError):
    def __init__(self, word: str, what: str = "embedding"):
        self.word = word
        super().__init__(f"no {what} for word {word!r}")


class UnknownVerbError(OOVError):
    def __init__(self, word: str):
        super().__init__(word, what="vocabulary verb")


class EmptyModelError(DataError):
    pass


class UndefinedCorrelationError(DataError):
    pass
