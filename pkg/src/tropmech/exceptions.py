"""Exception hierarchy.

Usage errors (bad shapes, non-surjective outcome functions, floats where
exact numbers are required) are plain ``ValueError``/``TypeError``.  The
classes below carry domain meaning and, for the CLI, a distinct exit code.
"""


class NegativeCycleError(ValueError):
    """A difference-constraint system is infeasible.

    ``cycle`` is a list of node indices ``[i0, i1, ..., ik]`` such that the
    closed walk ``i0 -> i1 -> ... -> ik -> i0`` has negative total weight.
    """

    def __init__(self, cycle, weight=None, message=None):
        self.cycle = list(cycle)
        self.weight = weight
        if message is None:
            message = f"negative cycle {self.cycle}"
            if weight is not None:
                message += f" of weight {weight}"
        super().__init__(message)


class NotIC(NegativeCycleError):
    """The outcome function admits no incentive compatible payment."""


class NotRealizable(ValueError):
    """No outcome function on the type space has the requested allocation matrix."""


class BudgetExceeded(RuntimeError):
    def __init__(self, required, budget):
        self.required = required
        self.budget = budget
        super().__init__(
            f"enumeration needs {required} assignments, budget is {budget}"
        )


class PerturbationFailed(RuntimeError):
    pass


class DimensionUnsupported(ValueError):
    pass


class CrossCheckError(RuntimeError):
    """Two independent routes to the same answer disagree.

    Raised only when an internal invariant is violated; it signals a bug,
    never a property of the input.
    """
