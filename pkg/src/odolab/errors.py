"""Exception types shared across the package."""


class OdolabError(Exception):
    """Base class for all package-specific errors."""


class CapExceeded(OdolabError):
    """A truncation or enumeration would exceed the configured cell cap.

    Callers should fall back to product-form algebra or seeded sampling.
    """


class CarryOverflow(OdolabError):
    """A carry propagated past the available prefix depth; deepen the prefix."""


class UnresolvedTail(OdolabError):
    """The requested quantity depends on coordinates beyond the given prefix."""


class UnknownTheorem(OdolabError):
    """No rule is registered under the requested criterion id."""


class StrategyInfeasible(OdolabError):
    """No index subsequence / offset met the required smallness conditions."""


class HypothesisUnavailable(OdolabError):
    """The construction's hypothesis could not be met within the horizon."""


class NotFoundWithinHorizon(OdolabError):
    """An exhaustive search over the candidate family came up empty."""


class WindowTooSmall(OdolabError):
    """The finite shift window does not contain every translate the check uses."""


class BracketFailure(OdolabError):
    """A root bracket did not enclose a sign change; the solver spec is wrong."""
