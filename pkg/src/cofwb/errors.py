"""Exception types shared across the workbench."""


class CofwbError(Exception):
    """Base class for all workbench errors."""


class SearchExhausted(CofwbError):
    """A bounded search ran out of candidates.

    This signals that the search bound (or the window) was too small, never
    that no valid value exists at all.
    """

    def __init__(self, bound, context=""):
        self.bound = bound
        self.context = context
        msg = f"no candidate below bound {bound}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


class WindowExhausted(CofwbError):
    """A construction needed a point past the window bound."""


class OrbitsExhausted(CofwbError):
    """No wholly fresh orbit is left for the crossing construction."""


class NotATree(CofwbError):
    """The crossing graph has a cycle or multi-edge."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"orbit crossings do not form a forest: {witness}")


class NotAFixedPoint(CofwbError):
    """Witness extraction was asked about a non-fixed point."""


class WitnessNotFound(CofwbError):
    """The orbit-tree fixed-point mechanism failed to produce a witness."""


class MalformedCode(CofwbError):
    """A decoder hit an undefined value, a non-bit payload, or a bad pointer."""


class CapacityExceeded(CofwbError):
    """The localizer stage budget cannot ingest all requested reals."""


class ClosureBoundExceeded(CofwbError):
    """Relation closure hit the rewrite-depth bound before stabilising."""


class UnsupportedPresentation(CofwbError):
    """The presentation carries no usable normal form."""
