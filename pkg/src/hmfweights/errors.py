"""Exception hierarchy.

Every library error carries a stable machine-readable ``code`` so the CLI can
report it as JSON.  ``ConfigError`` subclasses map to exit status 2, all other
``HmfError`` subclasses to exit status 1.
"""

from __future__ import annotations


class HmfError(Exception):
    code = "HmfError"

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.details = details

    def to_dict(self) -> dict:
        out = {"error": self.code, "message": self.message}
        if self.details:
            out["details"] = {k: _jsonable(v) for k, v in self.details.items()}
        return out


def _jsonable(v):
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    if isinstance(v, (list, tuple, set, frozenset)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return str(v)


class ConfigError(HmfError):
    code = "ConfigInvalid"


# embeddings
class EmptyConfig(ConfigError):
    code = "EmptyConfig"


class MixedRationalPrimes(ConfigError):
    code = "MixedRationalPrimes"


class NonPositiveDegree(ConfigError):
    code = "NonPositiveDegree"


class DuplicatePrimeId(ConfigError):
    code = "DuplicatePrimeId"


class NotPrime(ConfigError):
    code = "NotPrime"


class UnknownEmbedding(HmfError):
    code = "UnknownEmbedding"


class UnknownPrime(HmfError):
    code = "UnknownPrime"


# weight lattice
class InternalMismatch(HmfError):
    code = "InternalMismatch"


class DimensionMismatch(HmfError):
    code = "DimensionMismatch"


# local galois
class NotQuadoBT(HmfError):
    code = "NotQuadoBT"


class InconsistentFlags(HmfError):
    code = "InconsistentFlags"


class OutOfRangeW(HmfError):
    code = "OutOfRangeW"


class OutOfRangeB(HmfError):
    code = "OutOfRangeB"


class NotRamifiedQuadratic(HmfError):
    code = "NotRamifiedQuadratic"


class NotConjugateDistinct(HmfError):
    code = "NotConjugateDistinct"


class WeightTooSmall(HmfError):
    code = "WeightTooSmall"


class InvalidWeight(HmfError):
    code = "InvalidWeight"


# kisin
class TruncationTooSmall(HmfError):
    code = "TruncationTooSmall"


class FieldMismatch(HmfError):
    code = "FieldMismatch"


# qexp
class NotSquarefree(ConfigError):
    code = "NotSquarefree"


class PrimeUnramified(ConfigError):
    code = "PrimeUnramified"


class InvalidGenerator(ConfigError):
    code = "InvalidGenerator"


class InvalidComponentModel(ConfigError):
    code = "InvalidComponentModel"


class NegativeValuation(HmfError):
    code = "NegativeValuation"


class UntrackedPrime(HmfError):
    code = "UntrackedPrime"


class MissingSAction(HmfError):
    code = "MissingSAction"


class WeightInequalityViolated(HmfError):
    code = "WeightInequalityViolated"


class ZeroConstant(HmfError):
    code = "ZeroConstant"


class UndeclaredCharacter(HmfError):
    code = "UndeclaredCharacter"


class UnreachableIndex(HmfError):
    code = "UnreachableIndex"


class InconsistentEigenvalues(HmfError):
    code = "InconsistentEigenvalues"


class NotInWindow(HmfError):
    code = "NotInWindow"


# cli
class UnknownSubcommand(ConfigError):
    code = "UnknownSubcommand"
