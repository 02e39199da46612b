class HoproveError(Exception):
    pass


class TypingError(HoproveError):
    pass


class UnboundVariable(TypingError):
    pass


class ArityMismatch(TypingError):
    pass


class NonArrowApplied(TypingError):
    pass


class DomainMismatch(TypingError):
    pass


class TypeMismatch(TypingError):
    pass


class InvalidPosition(HoproveError):
    pass


class LengthMismatch(HoproveError):
    pass


class UndeclaredSymbol(HoproveError):
    pass


class NotFirstOrder(HoproveError):
    pass


class MalformedLhs(HoproveError):
    pass


class IndexOutOfRange(HoproveError):
    pass


class BudgetExhausted(HoproveError):
    """Search gave up because the depth budget ran out somewhere."""


class ParseError(HoproveError):
    """Collects located diagnostics; never carries a partial result."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))
