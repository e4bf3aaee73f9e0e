"""Exception hierarchy shared by every module of the package."""


class SchurPairError(Exception):
    """Base class for all errors raised by schurpair."""


# group construction and validation

class GroupTableError(SchurPairError):
    """A Cayley table does not describe a group."""


class MalformedTable(GroupTableError):
    pass


class NoIdentity(GroupTableError):
    pass


class MissingInverse(GroupTableError):
    pass


class NotAssociative(GroupTableError):
    pass


class NotASubgroup(SchurPairError):
    pass


class NotAHomomorphism(SchurPairError):
    pass


class NotNormal(SchurPairError):
    pass


class NotPGroup(SchurPairError):
    pass


class NotAutomorphism(SchurPairError):
    pass


class ActionNotHomomorphism(SchurPairError):
    pass


class BudgetExceeded(SchurPairError):
    """A computation would exceed the configured size budget."""


# abelian groups and linear algebra

class NonPositiveOrder(SchurPairError):
    pass


class NotADirectFactor(SchurPairError):
    pass


class NotAComplex(SchurPairError):
    pass


class InternalFreeRank(SchurPairError):
    """Second homology of a finite group came out with a free part."""


# pairs

class NoComplement(SchurPairError):
    pass


class BoundViolation(SchurPairError):
    pass


# group-spec language

class ParseError(SchurPairError):
    def __init__(self, message: str, offset: int, expected: str | None = None):
        self.offset = offset
        self.expected = expected
        detail = f"{message} at offset {offset}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


class SemanticError(SchurPairError):
    pass


class UnsupportedOrder(SchurPairError):
    pass
