"""
Exception hierarchy for homkit.

Engine failures derive from EngineError, script failures from ScriptError.
Every exception keeps its inputs as attributes so reports can serialize them.
"""

from typing import Iterable, Optional


class HomkitError(Exception):
    """Base class for every error raised by homkit."""


# ── Engine errors ──────────────────────────────────────────────


class EngineError(HomkitError):
    """Raised by the algebra engine for invalid input or failed computations."""


class FieldError(EngineError):
    """Invalid coefficient field (e.g. a non-prime characteristic)."""


class RingMismatchError(EngineError):
    """Operands live in different polynomial rings."""

    def __init__(self, left, right):
        self.left = left
        self.right = right
        super().__init__(f"Ring mismatch: {left} vs {right}")


class ArityError(EngineError):
    """Monomials or exponent vectors of different lengths were compared."""

    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"Arity mismatch: expected {expected} exponents, got {got}")


class UnknownVariableError(EngineError):
    """A variable name that the ring does not have."""

    def __init__(self, name: str, variables: Iterable[str]):
        self.name = name
        self.variables = tuple(variables)
        super().__init__(
            f"Unknown variable '{name}'. Ring variables: {', '.join(self.variables)}"
        )


class RankMismatchError(EngineError):
    """Free-module elements of different ranks were combined."""

    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"Rank mismatch: expected rank {expected}, got {got}")


class NotAnIdealError(EngineError):
    """An ideal was required but a submodule of higher rank was given."""


class NonHomogeneousError(EngineError):
    """A presentation or element is not homogeneous for the ring grading."""


class GradingError(EngineError):
    """The ring grading does not support the requested operation."""


class StabilizationError(EngineError):
    """The Ext-limit did not stabilize below the power cap (inconclusive)."""

    def __init__(self, p: int, power_cap: int, window: tuple[int, int]):
        self.p = p
        self.power_cap = power_cap
        self.window = window
        super().__init__(
            f"Inconclusive: Ext^{p}(A/I^l, M) did not stabilize on window "
            f"[{window[0]}, {window[1]}] for l <= {power_cap}.\n"
            f"Raise the power cap (--power-cap) or shrink the window."
        )


class ComputationCancelled(EngineError):
    """A long computation observed its cancellation token."""


class SaturationLimitError(EngineError):
    """An ascending chain of colons or annihilator powers did not stop below its cap."""

    def __init__(self, what: str, cap: int):
        self.what = what
        self.cap = cap
        super().__init__(f"{what} did not stabilize within {cap} steps")


class CertificationError(EngineError):
    """A computed value failed the independent check that certifies it."""


class DepthUndefinedError(EngineError):
    """depth_I(M) is undefined because I*M = M."""


class ZeroModuleError(EngineError):
    """The operation needs a nonzero module."""


class ZeroSheafError(EngineError):
    """The module defines the zero sheaf (finite length)."""


class PreconditionError(EngineError):
    """An operation's documented precondition does not hold."""


class RankDeficientError(EngineError):
    """A chart matrix does not have full row rank."""


class SingularBlockError(EngineError):
    """The chosen column block of a chart matrix is not invertible."""

    def __init__(self, columns: tuple[int, ...]):
        self.columns = columns
        cols = ", ".join(str(c + 1) for c in columns)
        super().__init__(f"Singular block: columns ({cols}) are linearly dependent")


class GenericFiberError(EngineError):
    """Random parameter values disagreed on the generic fiber invariant."""


# ── Script errors ──────────────────────────────────────────────


class ScriptError(HomkitError):
    """Raised for syntax and name-resolution errors in a script."""

    def __init__(
        self,
        message: str,
        line: int = 0,
        column: int = 0,
        expected: Optional[Iterable[str]] = None,
    ):
        self.message = message
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected))) if expected else ()
        text = f"{message} at line {line}, column {column}"
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(text)


class CommandError(HomkitError):
    """An engine error raised while executing a script command."""

    def __init__(self, command: str, line: int, column: int, cause: Exception):
        self.command = command
        self.line = line
        self.column = column
        self.cause = cause
        super().__init__(
            f"{type(cause).__name__} in '{command}' (line {line}, column {column}): {cause}"
        )
