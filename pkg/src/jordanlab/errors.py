"""Exception hierarchy.

Every error raised on purpose by the library derives from ``JordanLabError``
(itself a ``ValueError``) so callers and the CLI can catch domain failures
without swallowing programming errors.
"""


class JordanLabError(ValueError):
    pass


class DomainMismatch(JordanLabError):
    pass


class PointOutOfRange(JordanLabError):
    pass


# rainbow validation
class ValidationError(JordanLabError):
    pass


class NotAPartition(ValidationError):
    pass


class DiagonalNotUnionOfClasses(ValidationError):
    pass


class NotTransposeClosed(ValidationError):
    pass


# search bounds
class OrderTooLarge(JordanLabError):
    pass


class RankTooLarge(JordanLabError):
    pass


class GroupTooLarge(JordanLabError):
    pass


class KTooLarge(JordanLabError):
    pass


# closures
class NotAPermutation(JordanLabError):
    pass


class NotTransitive(JordanLabError):
    pass


# schemes
class NotAJordanScheme(JordanLabError):
    pass


class NotAJC(JordanLabError):
    pass


class NotNonRegularThinJS(JordanLabError):
    pass


# loops and groups
class NotALoop(JordanLabError):
    pass


class NotLatinSquare(NotALoop):
    pass


class NoTwoSidedIdentity(NotALoop):
    pass


class NotAGroup(JordanLabError):
    pass


class NotAbelian(JordanLabError):
    pass


class NotRegularThinJS(JordanLabError):
    pass


class QuotientNotKleinFour(JordanLabError):
    pass


class G0NotCentral(JordanLabError):
    pass


# algebraic maps
class NotASubgroupOfJAut(JordanLabError):
    pass


class NotAFusion(JordanLabError):
    pass


class NotSemiregular(JordanLabError):
    pass


class NotThinRegularJS(JordanLabError):
    pass


# file formats
class ParseSyntaxError(JordanLabError):
    """Malformed input text; carries a 1-based line/column when known."""

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


class NotRALoop(JordanLabError):
    """The left translations of the loop do not form a Jordan scheme."""
