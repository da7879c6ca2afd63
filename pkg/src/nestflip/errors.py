"""Exception hierarchy shared by all modules."""


class NestflipError(Exception):
    """Base class for every error raised by this package."""


class SizeMismatch(NestflipError, ValueError):
    pass


class DegreeMismatch(NestflipError, ValueError):
    pass


class FlipError(NestflipError, ValueError):
    pass


class MissingEdge(FlipError):
    pass


class LoopCreation(FlipError):
    pass


class InvalidGraph(NestflipError, ValueError):
    pass


class NotLaminar(NestflipError, ValueError):
    def __init__(self, first, second):
        self.pair = (tuple(sorted(first)), tuple(sorted(second)))
        super().__init__(
            f"sets {list(self.pair[0])} and {list(self.pair[1])} overlap "
            "without one containing the other")


class EmptySet(NestflipError, ValueError):
    pass


class UnknownVertex(NestflipError, ValueError):
    pass


class LeafNode(NestflipError, ValueError):
    pass


class NotExtensible(NestflipError, ValueError):
    pass


class NoProvenance(NestflipError, RuntimeError):
    pass


class PreconditionViolated(NestflipError, ValueError):
    pass


class ParityMismatch(PreconditionViolated):
    pass


class NotRealizable(NestflipError, ValueError):
    pass


class NotMember(NestflipError, ValueError):
    pass


class NotConnected(NotMember):
    pass


class AlreadyEqual(NestflipError, ValueError):
    pass


class TooLarge(NestflipError, ValueError):
    pass


class ParseError(NestflipError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
