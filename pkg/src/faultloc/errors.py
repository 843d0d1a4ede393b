"""Exception types shared across the toolkit."""


class InputError(ValueError):
    """A spectrum, graph, manifest or argument failed validation."""


class FormulaUnavailable(LookupError):
    """The formula is registered but has no usable definition."""

    def __init__(self, name: str):
        super().__init__(f"formula unavailable: {name}")
        self.name = name
