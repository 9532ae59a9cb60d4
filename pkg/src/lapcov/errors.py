"""Exception types raised by the toolkit."""


class LapcovError(Exception):
    """Base class for all toolkit errors."""


class GridTooLarge(LapcovError):
    """A semigroup product exceeded the supported integer range."""


class PrimeOutOfRange(LapcovError):
    """An integer has a prime factor beyond the retained prime list."""


class ZeroWeightAtom(LapcovError):
    """An operation requiring nonzero weights met a zero-weight atom."""


class SymbolUndefinedAtAtom(LapcovError):
    """A table symbol has no value at one of the measure's atoms."""


class MissingGridValue(LapcovError):
    """A table was probed at an element outside its domain."""


class FMuIntegralZero(LapcovError):
    """The symbol-weighted total integral vanishes; the recovery ratio is undefined."""


class RankDeficientPencil(LapcovError):
    """The restricted matrix pencil is singular beyond tolerance."""


class ExpectationYZero(LapcovError):
    """The scalar weight variable has (numerically) zero expectation."""


class ScenarioError(LapcovError):
    """A scenario file violates the published schema."""
