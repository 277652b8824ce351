"""Exception hierarchy."""


class TropCurveError(Exception):
    """Base class for every error raised by this package."""


class InvalidCurve(TropCurveError):
    pass


class InvalidPoint(TropCurveError):
    pass


class InvalidFunction(TropCurveError):
    pass


class InadmissibleSubgraph(TropCurveError):
    pass


class NotConnected(TropCurveError):
    pass


class NotProper(TropCurveError):
    pass


class NotATree(TropCurveError):
    pass


class NotInvertible(TropCurveError):
    pass


class IndeterminateAtInfinity(TropCurveError):
    pass


class UnboundSymbol(TropCurveError):
    pass


class ExprSyntaxError(TropCurveError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class StepTooLarge(TropCurveError):
    pass


class IterationBudgetExceeded(TropCurveError):
    pass


class SynthesisError(TropCurveError):
    """An internal precondition of the expression builders did not hold."""


class ConditionViolated(TropCurveError):
    def __init__(self, condition: int, location: str, detail: str = ""):
        msg = f"condition ({condition}) violated at {location}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.condition = condition
        self.location = location


class PreimageCountMismatch(TropCurveError):
    pass
