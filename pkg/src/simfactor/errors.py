"""Exception hierarchy shared by every module.

``SearchExhausted`` and ``Undecided`` mark incomplete computations; they are
never raised in place of a negative answer.
"""


class SimFactorError(Exception):
    """Base class for all library errors."""


class ZeroInput(SimFactorError, ValueError):
    pass


class DegenerateForm(SimFactorError, ValueError):
    pass


class ParseError(SimFactorError, ValueError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column

    def shifted(self, columns: int) -> "ParseError":
        """The same error with the column moved right, for embedded values."""
        return ParseError(self.message, self.line, self.column + columns)


class SearchExhausted(SimFactorError, RuntimeError):
    """A constructive search hit its configured bound."""

    def __init__(self, step, detail=""):
        msg = f"search exhausted in {step}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.step = step


class Undecided(SimFactorError, RuntimeError):
    pass


class NotRepresented(SimFactorError, ValueError):
    pass


class NotASimilarityFactor(SimFactorError, ValueError):
    pass


class InvalidPresentation(SimFactorError, ValueError):
    pass


class NotAMultiplier(SimFactorError, ValueError):
    pass


class MalformedCertificate(SimFactorError, ValueError):
    pass


class GenerationExhausted(SimFactorError, RuntimeError):
    pass
