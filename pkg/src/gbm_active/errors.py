class ParameterError(ValueError):
    """Invalid model or algorithm parameters."""


class ParseError(ValueError):
    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = path
        self.lineno = lineno


class PipelineError(RuntimeError):
    pass


class BudgetExhausted(RuntimeError):
    """Raised by an Oracle when a query would exceed its budget."""
