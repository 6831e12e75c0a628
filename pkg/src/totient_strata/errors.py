"""Exception types. CLI exit codes are keyed off these classes."""


class TotientStrataError(Exception):
    pass


class InvalidInput(TotientStrataError, ValueError):
    """Argument outside the operation's domain."""


class LimitExceeded(TotientStrataError):
    """Input beyond a configured sieve or enumeration limit."""


class RangeTooLarge(LimitExceeded):
    """Requested block exceeds the memory cap and splitting was not permitted."""


class PDividesPreimage(InvalidInput):
    pass


class PNotThreeModFour(InvalidInput):
    pass


class NonTotient(InvalidInput):
    pass


class EmptyCandidates(TotientStrataError):
    """No stratum satisfies 2^l S^l(x) > V(x); indicates a counting bug."""


class CorruptCacheEntry(TotientStrataError):
    pass
