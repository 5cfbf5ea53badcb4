"""Exception hierarchy shared by every module."""


class BlockerError(Exception):
    """Base class for all errors raised by flagblock."""


class OrderTooLargeError(BlockerError):
    def __init__(self, n, limit):
        super().__init__(f"order n={n} exceeds the configured limit {limit}")
        self.n = n
        self.limit = limit


class IndexOutOfRangeError(BlockerError, IndexError):
    pass


class OrderMismatchError(BlockerError, ValueError):
    pass


class InvalidSpecError(BlockerError, ValueError):
    pass


class PredicateRangeError(BlockerError, ValueError):
    pass


class BudgetExhaustedError(BlockerError):
    """Raised when a budgeted search stops before covering its whole tree.

    ``partial`` holds whatever records were verified before the stop.
    """

    def __init__(self, nodes, budget, partial=()):
        super().__init__(f"search budget of {budget} nodes exhausted after {nodes} nodes")
        self.nodes = nodes
        self.budget = budget
        self.partial = tuple(partial)
