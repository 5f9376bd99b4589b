class InputError(ValueError):
    """Malformed or inconsistent input (scenario, plan, directive, model)."""


class FormatError(InputError):
    """A file could not be parsed; ``field`` names the offending location."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if field is not None:
            where.append(f"field {field}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class DecodeError(InputError):
    def __init__(self, message, agent=None):
        self.agent = agent
        super().__init__(f"agent {agent}: {message}" if agent is not None else message)


class NumericalError(RuntimeError):
    """The LP engine lost numerical accuracy; the result would be untrustworthy."""
