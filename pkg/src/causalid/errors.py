"""Exception types raised across the package."""


class CausalIDError(ValueError):
    """Base class for every error raised by causalid."""


class UnknownNode(CausalIDError):
    pass


class SelfLoop(CausalIDError):
    pass


class DirectedCycle(CausalIDError):
    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__("directed cycle: " + " -> ".join(self.cycle + self.cycle[:1]))


class DoubleDirectedPair(DirectedCycle):
    """a -> b and b -> a given as plain directed edges.

    A confounded pair has to be declared as a bidirected edge instead.
    """

    def __init__(self, a, b):
        super().__init__((a, b))
        self.args = (
            f"directed edges {a} -> {b} and {b} -> {a} form a cycle; "
            f"declare {a} <-> {b} for a latent confounder",
        )


class OverlappingSets(CausalIDError):
    pass


class OverlappingVarCond(CausalIDError):
    pass


class EmptyVar(CausalIDError):
    pass


class UnknownVariable(CausalIDError):
    pass


class InvalidQuery(CausalIDError):
    pass


class ParseError(CausalIDError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class EmptyGraph(ParseError):
    pass


class MalformedXML(ParseError):
    pass


class DanglingEdge(ParseError):
    pass


class UnpairedInternalEdge(ParseError):
    pass


class MixedNotation(ParseError):
    pass


class InvalidCardinality(CausalIDError):
    pass


class InvalidAssignment(CausalIDError):
    pass


class StateSpaceTooLarge(CausalIDError):
    pass


class ZeroDivisor(CausalIDError):
    pass
