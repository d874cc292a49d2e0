"""Budgeted exhaustive search shared by the finite decision procedures."""

import logging
from collections.abc import Callable, Hashable, Iterable, Iterator, Sequence
from typing import Any

from gaiakit.config import settings
from gaiakit.errors import CapacityError

logger = logging.getLogger(__name__)


class SearchBudget:
    """
    Counts search nodes and fails loudly when the budget runs out.

    The limit is read from ``settings.budget`` when not given, at creation
    time, so a temporary override of the settings applies to every search
    started inside it.

    Args:
        what: Short name of the search, used in messages
        limit: Maximum number of nodes, or None for ``settings.budget``
    """

    def __init__(self, what: str, limit: int | None = None):
        self.what = what
        self.limit = settings.budget if limit is None else limit
        self.used = 0

    def tick(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.limit:
            raise CapacityError(
                f"{self.what}: search budget of {self.limit} nodes exceeded"
            )

    def require(self, size: int) -> None:
        """Fail before starting a search whose candidate space is known."""
        if size > self.limit:
            raise CapacityError(
                f"{self.what}: {size} candidates exceed the budget of {self.limit}"
            )

    def done(self) -> None:
        logger.debug(f"{self.what}: {self.used} nodes visited")


def backtrack(
    variables: Sequence[Hashable],
    candidates: Callable[[Any, dict], Iterable[Any]],
    consistent: Callable[[Any, Any, dict], bool],
    budget: SearchBudget,
) -> Iterator[dict]:
    """
    Enumerate every complete assignment of ``variables``.

    Variables are assigned in the given order. ``candidates(var, partial)``
    lists the values to try; ``consistent(var, value, partial)`` is called
    with ``partial`` already holding ``var = value`` and must check every
    constraint that has just become decidable.

    Yields:
        A fresh dict for each complete consistent assignment
    """
    assignment: dict = {}

    def extend(i: int) -> Iterator[dict]:
        if i == len(variables):
            yield dict(assignment)
            return
        var = variables[i]
        for value in candidates(var, assignment):
            budget.tick()
            assignment[var] = value
            if consistent(var, value, assignment):
                yield from extend(i + 1)
            del assignment[var]

    yield from extend(0)
    budget.done()
