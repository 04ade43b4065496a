"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: ConfigError and ParseError
exit 2, DataError exits 3, anything else exits 1.
"""


class FinhyperError(Exception):
    """Base class for package errors."""


class ConfigError(FinhyperError):
    """Invalid configuration value or unusable input path."""


class ParseError(FinhyperError):
    """Malformed input file; carries the offending location."""

    def __init__(self, path, line_no, message):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{self.path}:{line_no}: {message}")


class DataError(FinhyperError):
    """Structurally valid input that cannot be processed (empty corpus, empty vocabulary, ...)."""


class EmptyVocabularyError(DataError):
    """min_count filtered out every token."""
