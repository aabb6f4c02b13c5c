"""Exception hierarchy shared by all doxa modules."""

from __future__ import annotations


class DoxaError(Exception):
    """Base class for every error raised by doxa."""


class UnknownState(DoxaError, KeyError):
    def __init__(self, label):
        super().__init__(label)
        self.label = label

    def __str__(self) -> str:
        return f"unknown state {self.label!r}"


class UnknownPlayer(DoxaError, KeyError):
    def __init__(self, player):
        super().__init__(player)
        self.player = player

    def __str__(self) -> str:
        return f"unknown player {self.player!r}"


class EvaluationError(DoxaError):
    """A decision function could not be evaluated at some event.

    The checkers that call :func:`doxa.decisions.evaluate` attach extra
    context (the subset ``S`` being inspected, the player, the state) to the
    exception before letting it propagate.
    """

    def __init__(self, event, message: str = ""):
        super().__init__(message or str(event))
        self.event = event
        self.context: dict = {}

    def with_context(self, **context) -> "EvaluationError":
        for key, value in context.items():
            self.context.setdefault(key, value)
        return self

    def __str__(self) -> str:
        base = f"{self.args[0]}"
        if self.context:
            extra = ", ".join(f"{k}={v}" for k, v in self.context.items())
            return f"{base} ({extra})"
        return base


class UndefinedAt(EvaluationError):
    def __init__(self, event):
        super().__init__(event, f"decision function undefined at {event}")


class ZeroProbabilityConditioning(EvaluationError):
    def __init__(self, event):
        super().__init__(event, f"conditioning on {event}, which has prior mass 0")


class UnknownProfile(DoxaError, KeyError):
    def __init__(self, profile):
        super().__init__(profile)
        self.profile = profile

    def __str__(self) -> str:
        return f"unknown action profile {self.profile!r}"


class SizeLimit(DoxaError):
    pass


class CapExceeded(DoxaError):
    pass


class InvalidBlindspotSet(DoxaError, ValueError):
    pass


class GenerationExhausted(DoxaError):
    pass


class ParseError(DoxaError):
    def __init__(self, where, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where
        self.message = message


class ValidationError(DoxaError, ValueError):
    def __init__(self, path: str, constraint: str):
        super().__init__(f"{path}: {constraint}")
        self.path = path
        self.constraint = constraint
