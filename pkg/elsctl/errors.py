
from typing import Any, Optional


class GameError(ValueError):
    """Base class for every domain error raised by elsctl."""


class InvalidGame(GameError):
    pass


class EmptyCoalition(GameError):
    pass


class CoalitionOutOfRange(GameError):
    pass


class MixedPlayerCount(GameError):
    pass


class InvalidPermutation(GameError):
    pass


class NotProperSubset(GameError):
    pass


class CoalitionTooSmall(GameError):
    pass


class SizeOutOfRange(GameError):
    pass


class WeightsNotAffine(GameError):
    pass


class InvalidWeights(GameError):
    pass


class NotLinear(GameError):
    pass


class NotSigmaRepresentable(GameError):
    pass


class DegenerateObjective(GameError):
    pass


class PlayerCountTooSmall(GameError):
    pass


class PlayerCountTooLarge(GameError):
    pass


class UnknownGenerator(GameError):
    pass


class UnknownRule(GameError):
    pass


class UnknownAxiom(GameError):
    pass


class MissingCoalition(GameError):
    pass


class DuplicateKey(GameError):
    pass


class NonZeroEmptySet(GameError):
    pass


class DomainGuardFailed(GameError):
    """A rule was asked to evaluate a game outside its domain."""

    def __init__(self, message: str, game: Any = None) -> None:
        super().__init__(message)
        self.game = game

    def __reduce__(self):
        return type(self), (str(self), self.game)


class ParseError(GameError):
    def __init__(self, message: str, position: Optional[int] = None) -> None:
        if position is not None:
            message = f"{message} (at char {position})"
        super().__init__(message)
        self.position = position
