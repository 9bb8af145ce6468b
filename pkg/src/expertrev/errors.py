"""Exception hierarchy shared by all modules."""


class ExpertRevError(Exception):
    """Base class for every error raised by this package."""


class FormulaSyntaxError(ExpertRevError, ValueError):
    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")


class UnknownNameError(ExpertRevError, KeyError):
    """A variable, case or source name that is not part of the signature."""

    def __init__(self, kind: str, name: str):
        self.kind = kind
        self.name = name
        super().__init__(f"unknown {kind} {name!r}")

    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return self.args[0]


class BudgetExceeded(ExpertRevError):
    """Exact enumeration would exceed the configured size cap."""

    def __init__(self, what: str, size: int, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: {size} exceeds budget {cap}")


class BottomReportError(ExpertRevError, ValueError):
    """Reports must not be equivalent to falsum."""


class NotApplicable(ExpertRevError):
    """A postulate or check does not apply to the given operator or input."""


class BoundednessViolated(ExpertRevError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"Boundedness fails: {report.witness}")


class ScenarioError(ExpertRevError, ValueError):
    """A scenario document is malformed; ``field`` locates the problem."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
