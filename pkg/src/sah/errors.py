"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """An operation was called with arguments outside its contract."""


class RankDeficient(ArithmeticError):
    """A Jacobian expected to be surjective is numerically rank-deficient."""


class ParseError(ValueError):
    """An input document does not conform to the sah-system/1 schema."""
