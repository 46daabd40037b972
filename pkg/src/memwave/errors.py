"""Exception hierarchy for the memwave toolkit."""


class MemwaveError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(MemwaveError):
    """Invalid configuration file; message carries the offending key path."""


class PoleProximity(MemwaveError):
    """Evaluation point too close to a kernel pole for a meaningful value."""


class BracketFailure(MemwaveError):
    """A bracketing root search failed to isolate a sign change."""


class DegenerateRoots(MemwaveError):
    """Two characteristic roots closer than the simple-root separation tolerance."""

    def __init__(self, msg: str, mode: int | None = None):
        super().__init__(msg)
        self.mode = mode


class SingularSystem(MemwaveError):
    """Moment system numerically singular (horizon too small or degenerate roots)."""

    def __init__(self, msg: str, condition: float | None = None):
        super().__init__(msg)
        self.condition = condition


class SmoothnessViolation(MemwaveError):
    """Requested data smoothness too low for pointwise control bounds."""


class OutOfHorizon(MemwaveError):
    """Control evaluated outside its horizon [0, T]."""


class UnsupportedBasis(MemwaveError):
    """Operation requires a basis with a pointwise eigenfunction evaluator."""


class StepSizeInvalid(MemwaveError):
    """Simulation step size or end time is not usable."""


class ParameterMismatch(MemwaveError):
    """Trace post-processing called with parameters that do not match the trace."""


class HorizonOverflow(MemwaveError):
    """Horizon search exceeded its cap without meeting the requested bound."""

    def __init__(self, msg: str, transcript=None):
        super().__init__(msg)
        self.transcript = transcript or []
