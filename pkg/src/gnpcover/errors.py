class GraphParseError(ValueError):
    """Malformed graph or cover file; ``line`` is 1-based."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SizingError(RuntimeError):
    """An instance is too large for the requested exact or enumerative work."""

    def __init__(self, message: str, *, iteration: int | None = None,
                 clique_size: int | None = None, predicted: float | None = None):
        self.iteration = iteration
        self.clique_size = clique_size
        self.predicted = predicted
        super().__init__(message)


class NotACliqueError(ValueError):
    pass
