"""Exception hierarchy shared by the library, the CLI and the HTTP routers."""


class DifferentialFlowError(Exception):
    """Base class for every error raised by the toolkit."""


class NetworkValidationError(DifferentialFlowError):
    """A network violates one of its structural invariants."""


class DocumentError(DifferentialFlowError):
    """A network, flow or certificate document is malformed.

    ``location`` points at the offending field, e.g. ``edges[2].b``.
    """

    def __init__(self, location: str, message: str):
        self.location = location
        self.message = message
        super().__init__(f"{location}: {message}")


class RationalFormatError(DocumentError):
    """A rational or bound string does not follow the document grammar."""


class UnknownElementError(DifferentialFlowError):
    """A vertex or edge id does not exist in the network."""


class InfeasibleFlowError(DifferentialFlowError):
    """An operation that requires a feasible flow received an infeasible one."""


class PreconditionError(DifferentialFlowError):
    """Inputs violate the documented precondition of an operation."""


class LinkGraphError(PreconditionError):
    """The bipartite link graph breaks the surplus (Hall-type) condition."""


class ConsistencyError(DifferentialFlowError):
    """An internal cross-check between two independent computations failed."""


class BudgetExceededError(DifferentialFlowError):
    """A size cap or search budget was exceeded."""


class GeneratorConfigError(DifferentialFlowError):
    """A random-instance configuration cannot be satisfied."""
