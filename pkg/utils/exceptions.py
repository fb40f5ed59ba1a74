"""
utils/exceptions.py
Error hierarchy shared by the algebra, obstruction and numerical modules.

InputError subclasses describe bad input (CLI exit status 2);
VerificationError subclasses describe a failed mathematical check (exit 1).
"""

from __future__ import annotations


class MorseError(Exception):
    """Base class for every error raised by this package."""


# ── Input problems ─────────────────────────────────────────────────────────────
class InputError(MorseError):
    """Input does not satisfy an operation's preconditions."""


class MalformedDescriptorError(InputError):
    """A descriptor file could not be parsed against the file format."""


class InvalidDescriptorError(InputError):
    """A descriptor violates one or more admissibility invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        reasons = "; ".join(v.reason for v in self.violations)
        super().__init__(f"invalid descriptor: {reasons}")


class DimensionMismatchError(InputError):
    """Two descriptors (or a descriptor and its parts) disagree on dimension."""


class OrientationMismatchError(InputError):
    """Two descriptors disagree on the orientation flag."""


class MissingBettiError(InputError):
    """Betti numbers are required to compute sigma(M) but were not supplied."""


class PreconditionError(InputError, ValueError):
    """An integer or real parameter is outside its admissible range."""


class CatalogError(InputError):
    """Unknown catalog function or invalid catalog parameters."""


class ChartMarginError(InputError):
    """A finite-difference stencil would leave the chart domain."""


# ── Verdict failures ───────────────────────────────────────────────────────────
class VerificationError(MorseError):
    """A computation finished but a mathematical check failed."""


class ObstructionConsistencyError(VerificationError):
    """The closed formula and the convolution disagree on a top phi value."""


class NumericalSearchError(VerificationError):
    """Base class for critical point search failures."""


class NoConvergenceError(NumericalSearchError):
    """No Newton seed converged in any chart."""


class DegenerateCriticalPointError(NumericalSearchError):
    """A located critical point has a (numerically) singular Hessian."""


class IndexHistogramMismatchError(NumericalSearchError):
    """The found index histogram differs from the declared counts."""

    def __init__(self, name: str, expected, found):
        self.expected = tuple(expected)
        self.found = tuple(found)
        super().__init__(
            f"{name}: index histogram {list(self.found)} does not match "
            f"declared counts {list(self.expected)}"
        )
