"""Error types shared across the package.

FormatError covers malformed input text (tree literals, automaton files);
CapExceeded covers resource-cap violations. The CLI maps these to exit
codes 2 and 3 respectively.
"""


class FormatError(ValueError):
    """Malformed input text. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.message = message
        self.line = line

    def __str__(self):
        if self.line is not None:
            return f"line {self.line}: {self.message}"
        return self.message


class CapExceeded(RuntimeError):
    """A configurable resource cap (enumeration size, subset states, ...) was hit."""
