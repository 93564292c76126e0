"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class DclError(Exception):
    exit_code = 1


class ParameterError(DclError, ValueError):
    exit_code = 2


class GraphValidationError(ParameterError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class DomainError(ParameterError):
    pass


class DegenerateModulusError(ParameterError):
    pass


class NotBipartiteError(ParameterError):
    def __init__(self, odd_cycle):
        super().__init__(f"graph is not bipartite; odd cycle {list(odd_cycle)}")
        self.odd_cycle = list(odd_cycle)


class ResourceError(DclError):
    exit_code = 4


class OverflowPolicyError(ResourceError):
    """An exact label would exceed the configured bit cap."""


class BudgetExceededError(ResourceError):
    pass


class NotAUnitError(DclError, ValueError):
    exit_code = 6

    def __init__(self, value, modulus, vertex=None):
        where = f" at vertex {vertex}" if vertex is not None else ""
        super().__init__(f"label {value}{where} is not a unit modulo {modulus}")
        self.value = value
        self.modulus = modulus
        self.vertex = vertex


class FactorizationIncomplete(DclError):
    exit_code = 7

    def __init__(self, n, cofactor):
        super().__init__(f"could not split cofactor {cofactor} of {n}")
        self.n = n
        self.cofactor = cofactor
