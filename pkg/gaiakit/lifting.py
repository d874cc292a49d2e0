"""
Lifting problems.

A lifting square is ``f: A -> B`` on the left, ``p: X -> Y`` on the right,
``μ: A -> X`` on top and ``ν: B -> Y`` at the bottom, with ``p ∘ μ = ν ∘ f``.
A solution is a diagonal ``h: B -> X`` with ``p ∘ h = ν`` and ``h ∘ f = μ``.
Squares exist over finite sets, finite categories and simplicial sets; all
are solved by exhaustive search under the search budget.
"""

import itertools
import logging
import math
from abc import ABC, abstractmethod
from collections import defaultdict
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Generic, TypeVar

from gaiakit.elements import SetInstance, category_of_elements
from gaiakit.errors import StructuralError, ValidationError
from gaiakit.fincat import FinFunctor, all_functions, compose_functors
from gaiakit.search import SearchBudget, backtrack
from gaiakit.simplicial import (
    SimplicialMap,
    build_shape,
    enumerate_horn_fillers,
    horn_problem_from_map,
    iter_simplicial_maps,
    nerve_map,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")


class LiftingSquare(ABC, Generic[T]):
    """
    Abstract base class for commutative squares in some ambient category.

    Subclasses check commutativity at construction and implement the search
    for diagonals.
    """

    @abstractmethod
    def solve(self, budget: SearchBudget | None = None) -> list[T]:
        """
        Find every diagonal of the square.

        Returns:
            All maps h with ``p ∘ h = ν`` and ``h ∘ f = μ``; empty when unsolvable.
        """
        ...

    @abstractmethod
    def is_solution(self, h: T) -> bool: ...


def solve_lifting(square: LiftingSquare[T], budget: SearchBudget | None = None) -> list[T]:
    solutions = square.solve(budget)
    logger.debug(f"{type(square).__name__}: {len(solutions)} diagonals")
    return solutions


# --- Finite sets ---


@dataclass(frozen=True)
class FinSetMap:
    domain: tuple[str, ...]
    codomain: tuple[str, ...]
    table: Mapping[str, str]

    def __post_init__(self):
        if set(self.table) != set(self.domain):
            raise StructuralError("map table is not total on its domain")
        outside = set(self.table.values()) - set(self.codomain)
        if outside:
            raise StructuralError(f"map values outside the codomain: {sorted(outside)}")

    def __call__(self, x: str) -> str:
        return self.table[x]

    def is_injective(self) -> bool:
        return len(set(self.table.values())) == len(self.domain)

    def is_surjective(self) -> bool:
        return set(self.table.values()) == set(self.codomain)

    def then(self, g: "FinSetMap") -> "FinSetMap":
        """``g ∘ self``."""
        return FinSetMap(self.domain, g.codomain, {x: g(self(x)) for x in self.domain})


@dataclass(frozen=True)
class SetSquare(LiftingSquare[FinSetMap]):
    f: FinSetMap
    p: FinSetMap
    top: FinSetMap
    bottom: FinSetMap

    def __post_init__(self):
        top = self.top
        if set(top.domain) != set(self.f.domain) or set(top.codomain) != set(self.p.domain):
            raise StructuralError("top map does not go from dom(f) to dom(p)")
        if set(self.bottom.domain) != set(self.f.codomain) or set(self.bottom.codomain) != set(
            self.p.codomain
        ):
            raise StructuralError("bottom map does not go from cod(f) to cod(p)")
        for a in self.f.domain:
            if self.p(self.top(a)) != self.bottom(self.f(a)):
                raise ValidationError(f"square does not commute at '{a}'")

    def is_solution(self, h: FinSetMap) -> bool:
        return all(self.p(h(b)) == self.bottom(b) for b in self.f.codomain) and all(
            h(self.f(a)) == self.top(a) for a in self.f.domain
        )

    def solve(self, budget: SearchBudget | None = None) -> list[FinSetMap]:
        budget = budget or SearchBudget("solve_lifting")
        forced: dict[str, set[str]] = defaultdict(set)
        for a in self.f.domain:
            forced[self.f(a)].add(self.top(a))
        options: list[list[str]] = []
        for b in self.f.codomain:
            if b in forced:
                options.append(sorted(forced[b]) if len(forced[b]) == 1 else [])
            else:
                options.append([x for x in self.p.domain if self.p(x) == self.bottom(b)])
        budget.require(math.prod(len(o) for o in options))
        solutions = []
        for values in itertools.product(*options):
            h = FinSetMap(self.f.codomain, self.p.domain, dict(zip(self.f.codomain, values)))
            if self.is_solution(h):
                solutions.append(h)
        return solutions


@dataclass
class RLPReport:
    holds: bool
    counterexample: SetSquare | None = None


def has_rlp(
    p: FinSetMap, against: Sequence[FinSetMap], budget: SearchBudget | None = None
) -> RLPReport:
    """
    Whether ``p`` has the right lifting property against every map in ``against``.

    Every commuting square over every ``f`` is enumerated; the first one
    without a diagonal is returned as the counterexample.
    """
    budget = budget or SearchBudget("has_rlp")
    for f in against:
        squares = len(p.domain) ** len(f.domain) * len(p.codomain) ** len(f.codomain)
        budget.require(squares)
        for top in all_functions(f.domain, p.domain):
            for bottom in all_functions(f.codomain, p.codomain):
                budget.tick()
                if any(p(top[a]) != bottom[f(a)] for a in f.domain):
                    continue
                square = SetSquare(
                    f,
                    p,
                    FinSetMap(f.domain, p.domain, top),
                    FinSetMap(f.codomain, p.codomain, bottom),
                )
                if not square.solve(budget):
                    return RLPReport(False, square)
    return RLPReport(True)


# --- Finite categories ---


def _same_functor(a: FinFunctor, b: FinFunctor) -> bool:
    return dict(a.object_map) == dict(b.object_map) and dict(a.morphism_map) == dict(
        b.morphism_map
    )


@dataclass(frozen=True)
class CategorySquare(LiftingSquare[FinFunctor]):
    """
    A lifting square of functors.

    Diagonals are found as simplicial maps between 2-truncated nerves, which
    correspond exactly to functors, and read back as functors.
    """

    f: FinFunctor
    p: FinFunctor
    top: FinFunctor
    bottom: FinFunctor

    def __post_init__(self):
        if self.top.source != self.f.source or self.top.target != self.p.source:
            raise StructuralError("top functor does not go from dom(f) to dom(p)")
        if self.bottom.source != self.f.target or self.bottom.target != self.p.target:
            raise StructuralError("bottom functor does not go from cod(f) to cod(p)")
        upper = compose_functors(self.p, self.top)
        if not _same_functor(upper, compose_functors(self.bottom, self.f)):
            raise ValidationError("square of functors does not commute")

    def is_solution(self, h: FinFunctor) -> bool:
        return _same_functor(compose_functors(self.p, h), self.bottom) and _same_functor(
            compose_functors(h, self.f), self.top
        )

    def solve(self, budget: SearchBudget | None = None) -> list[FinFunctor]:
        nerve_f, nerve_p = nerve_map(self.f, 2), nerve_map(self.p, 2)
        nerve_top, nerve_bottom = nerve_map(self.top, 2), nerve_map(self.bottom, 2)
        source, target = nerve_f.target, nerve_p.source
        fixed: dict[str, str] = {}
        for sigma, image in nerve_f.mapping.items():
            value = nerve_top(sigma)
            if fixed.setdefault(image, value) != value:
                return []
        fibers: dict[str, list[str]] = defaultdict(list)
        for tau, image in nerve_p.mapping.items():
            fibers[image].append(tau)
        allowed = {
            sigma: fibers[nerve_bottom(sigma)]
            for n in range(source.truncation + 1)
            for sigma in source.nondegenerate(n)
        }
        solutions = []
        for h in iter_simplicial_maps(source, target, fixed, allowed, budget):
            object_map = {b: h(b) for b in self.f.target.objects}
            morphism_map = {m.id: h(m.id) for m in self.f.target.morphisms}
            functor = FinFunctor(self.f.target, self.p.source, object_map, morphism_map)
            if self.is_solution(functor):
                solutions.append(functor)
        return solutions


# --- Simplicial sets ---


@dataclass(frozen=True)
class SimplicialSquare(LiftingSquare[SimplicialMap]):
    """
    A lifting square of simplicial maps, solved level-wise.

    When ``f`` is the inclusion Λⁿ_k -> Δⁿ built by ``build_shape``, the top
    simplex can only go to a horn filler, so the fillers are the candidates.
    """

    f: SimplicialMap
    p: SimplicialMap
    top: SimplicialMap
    bottom: SimplicialMap

    def __post_init__(self):
        if self.top.source != self.f.source or self.top.target != self.p.source:
            raise StructuralError("top map does not go from dom(f) to dom(p)")
        if self.bottom.source != self.f.target or self.bottom.target != self.p.target:
            raise StructuralError("bottom map does not go from cod(f) to cod(p)")
        for sigma in self.f.mapping:
            if self.p(self.top(sigma)) != self.bottom(self.f(sigma)):
                raise ValidationError(f"square does not commute at '{sigma}'")

    def is_solution(self, h: SimplicialMap) -> bool:
        return all(self.p(h(s)) == self.bottom(s) for s in h.mapping) and all(
            h(self.f(s)) == self.top(s) for s in self.f.mapping
        )

    def _horn_candidates(self) -> tuple[str, list[str]] | None:
        shape = self.f.source.shape
        if shape is None or shape[0] != "horn":
            return None
        if self.f.target.shape != ("standard", shape[1], None):
            return None
        _, n, k = shape
        top_simplex = self.f.target.nondegenerate(n)[0]
        problem = horn_problem_from_map(self.top, n, k)
        fillers = enumerate_horn_fillers(problem)
        return top_simplex, fillers

    def solve(self, budget: SearchBudget | None = None) -> list[SimplicialMap]:
        source, target = self.f.target, self.p.source
        fixed: dict[str, str] = {}
        for sigma, image in self.f.mapping.items():
            if fixed.setdefault(image, self.top(sigma)) != self.top(sigma):
                return []
        fibers: dict[str, list[str]] = defaultdict(list)
        for tau, image in self.p.mapping.items():
            fibers[image].append(tau)
        allowed = {
            sigma: fibers[self.bottom(sigma)]
            for n in range(source.truncation + 1)
            for sigma in source.nondegenerate(n)
        }
        horn = self._horn_candidates()
        if horn is not None:
            top_simplex, fillers = horn
            allowed[top_simplex] = [t for t in allowed[top_simplex] if t in fillers]
        return [
            h
            for h in iter_simplicial_maps(source, target, fixed, allowed, budget)
            if self.is_solution(h)
        ]


def horn_inclusion(n: int, k: int, truncation: int | None = None) -> SimplicialMap:
    """The inclusion Λⁿ_k -> Δⁿ."""
    horn = build_shape("horn", n, k, truncation)
    simplex = build_shape("standard", n, truncation=truncation)
    return SimplicialMap(horn, simplex, {s: s for level in horn.levels for s in level})


# --- Queries ---


@dataclass(frozen=True)
class LiftingQuery:
    """
    A pattern query against an instance, posed as a lifting problem.

    The diagonal ``h: R -> ∫δ`` must satisfy ``π ∘ h = ν`` for the binding
    ``ν: R -> C`` and agree with the anchor on the window ``f: Q -> R``.

    Attributes:
        instance: δ over the schema C
        binding: ν: R -> C
        window: f: Q -> R, the part of the pattern the answer is read on
        anchor: Prescribed elements for objects of Q
        injective: Distinct pattern objects over the same schema object get distinct elements
        dedup: Collapse bindings that use the same elements
    """

    instance: SetInstance
    binding: FinFunctor
    window: FinFunctor | None = None
    anchor: Mapping[str, str] | None = None
    injective: bool = False
    dedup: bool = False

    def __post_init__(self):
        if self.binding.target != self.instance.schema:
            raise StructuralError("binding does not land in the instance schema")
        if self.window is not None and self.window.target != self.binding.source:
            raise StructuralError("window does not land in the pattern category")
        if self.anchor and self.window is None:
            raise StructuralError("an anchor needs a window")
        for q, x in (self.anchor or {}).items():
            r = self.window.on_object(q)
            if x not in self.instance.tables[self.binding.on_object(r)]:
                raise StructuralError(f"anchor '{x}' is not an element over '{q}'")

    @classmethod
    def from_pattern(cls, pattern: SetInstance, instance: SetInstance, **kwargs) -> "LiftingQuery":
        """Query by a pattern instance: R is its category of elements, ν its projection."""
        if pattern.schema != instance.schema:
            raise StructuralError("pattern and instance use different schemas")
        return cls(instance, category_of_elements(pattern).projection, **kwargs)


def query_by_lifting(
    query: LiftingQuery, budget: SearchBudget | None = None
) -> list[dict[str, str]]:
    """
    Every binding of the pattern into the instance.

    A functor ``h: R -> ∫δ`` over C is fixed by its objects, since the
    morphism over ``ν(u)`` out of ``(νr, x)`` is unique; it exists exactly
    when ``δ(νu)(h(r)) = h(r')`` for every ``u: r -> r'``.

    Returns:
        One dict per binding, sending each object of R to its element
    """
    budget = budget or SearchBudget("query_by_lifting")
    pattern, delta, nu = query.binding.source, query.instance, query.binding
    forced: dict[str, str] = {}
    for q, x in (query.anchor or {}).items():
        r = query.window.on_object(q)
        if forced.setdefault(r, x) != x:
            return []
    touching: dict[str, list[str]] = defaultdict(list)
    for m in pattern.morphisms:
        touching[m.dom].append(m.id)
        touching[m.cod].append(m.id)

    def candidates(r: str, partial: dict) -> Sequence[str]:
        if r in forced:
            return [forced[r]]
        return delta.tables[nu.on_object(r)]

    def consistent(r: str, x: str, partial: dict) -> bool:
        for u in touching[r]:
            m = pattern.morphism(u)
            if m.dom in partial and m.cod in partial:
                if delta.apply(nu.on_morphism(u), partial[m.dom]) != partial[m.cod]:
                    return False
        if query.injective:
            s = nu.on_object(r)
            for other, y in partial.items():
                if other != r and y == x and nu.on_object(other) == s:
                    return False
        return True

    bindings = list(backtrack(list(pattern.objects), candidates, consistent, budget))
    if query.dedup:
        seen, unique = set(), []
        for b in bindings:
            key = frozenset((nu.on_object(r), x) for r, x in b.items())
            if key not in seen:
                seen.add(key)
                unique.append(b)
        bindings = unique
    logger.info(f"query found {len(bindings)} bindings")
    return bindings


def window_answers(
    query: LiftingQuery, bindings: Sequence[Mapping[str, str]]
) -> list[tuple[str, ...]]:
    """Distinct restrictions of the bindings to the window objects, in order of Q."""
    if query.window is None:
        raise StructuralError("query has no window")
    objects = query.window.source.objects
    answers = {tuple(b[query.window.on_object(q)] for q in objects) for b in bindings}
    return sorted(answers)

