"""Shared exception types.

Exit-code mapping in the CLI: PreconditionError -> 2, BudgetError -> 3,
InvariantError -> 4.
"""


class TowerlabError(Exception):
    pass


class PreconditionError(TowerlabError):
    """An operation was called outside its stated domain."""


class BudgetError(TowerlabError):
    """An enumeration would exceed the configured resource budget."""


class InvariantError(TowerlabError):
    """An internal consistency check failed; indicates a computation bug."""
