"""Error hierarchy.

Every error carries the name of the module that raised it and its case name
(the class name), so the CLI can surface both unchanged.
"""

from __future__ import annotations


class ObsFreqError(Exception):
    module = "obsfreq"

    def __init__(self, message: str = "", *, module: str | None = None):
        super().__init__(message)
        if module is not None:
            self.module = module

    @property
    def case(self) -> str:
        return type(self).__name__

    def to_dict(self) -> dict:
        return {"module": self.module, "case": self.case, "message": str(self)}


# classical / ternary intake
class WrongLength(ObsFreqError, ValueError):
    module = "classical"


class NegativeWeight(ObsFreqError, ValueError):
    module = "classical"


class NotNormalized(ObsFreqError, ValueError):
    module = "classical"


class TooManyPropositions(ObsFreqError, ValueError):
    module = "classical"


class UnknownProposition(ObsFreqError, KeyError):
    module = "classical"

    def __str__(self) -> str:  # KeyError would repr() the message
        return Exception.__str__(self)


class DuplicateProposition(ObsFreqError, ValueError):
    module = "classical"


class ZeroConditioningMass(ObsFreqError, ZeroDivisionError):
    module = "classical"


# observability
class NeverObservable(ObsFreqError, ZeroDivisionError):
    module = "observability"


class UnknownObjective(ObsFreqError, ValueError):
    module = "observability"


# operators
class DimensionMismatch(ObsFreqError, ValueError):
    module = "operators"


class IndexOutOfRange(ObsFreqError, IndexError):
    module = "operators"


class MalformedExpression(ObsFreqError, ValueError):
    module = "operators"


class NotAProjector(ObsFreqError, ValueError):
    module = "operators"


class NonCommuting(ObsFreqError, ValueError):
    module = "operators"


class NotNested(ObsFreqError, ValueError):
    module = "operators"


class ZeroContext(ObsFreqError, ZeroDivisionError):
    module = "operators"

    def __init__(self, message: str = "", *, module: str | None = None, pair=None):
        super().__init__(message, module=module)
        self.pair = pair

    def to_dict(self) -> dict:
        out = super().to_dict()
        if self.pair is not None:
            out["pair"] = list(self.pair)
        return out


class WitnessNotFound(ObsFreqError, RuntimeError):
    module = "operators"


# complex embedding
class InvalidDirection(ObsFreqError, ValueError):
    module = "qubit"


class InvalidQubit(ObsFreqError, ValueError):
    module = "qubit"


# inequality lab
class ArityMismatch(ObsFreqError, ValueError):
    module = "inequalities"


# box simulation
class InvalidConfig(ObsFreqError, ValueError):
    module = "boxsim"


class NoObservableTrials(ObsFreqError, ZeroDivisionError):
    module = "boxsim"


# cli
class SchemaViolation(ObsFreqError, ValueError):
    module = "cli"


class ExperimentError(ObsFreqError, RuntimeError):
    module = "cli"

    def __init__(self, origin: ObsFreqError):
        super().__init__(f"{origin.module}.{origin.case}: {origin}")
        self.origin = origin

    def to_dict(self) -> dict:
        return {
            "module": self.module,
            "case": self.case,
            "message": str(self),
            "origin": self.origin.to_dict(),
        }
