"""
Tests for lifting squares and pattern queries.
"""

import itertools

import pytest

from gaiakit.errors import CapacityError, StructuralError, ValidationError
from gaiakit.fincat import (
    FinCategory,
    FinFunctor,
    chain_category,
    discrete_category,
    identity_functor,
    terminal_category,
)
from gaiakit.elements import category_of_elements, element_id
from gaiakit.formats import InstanceModel, PatternModel
from gaiakit.lifting import (
    CategorySquare,
    FinSetMap,
    LiftingQuery,
    SetSquare,
    SimplicialSquare,
    has_rlp,
    horn_inclusion,
    query_by_lifting,
    solve_lifting,
    window_answers,
)
from gaiakit.search import SearchBudget
from gaiakit.simplicial import SimplicialMap, nerve, nerve_map
from tests.fixtures import instances


def to_point(c: FinCategory) -> FinFunctor:
    one = terminal_category()
    return FinFunctor(c, one, {a: "*" for a in c.objects}, {m.id: "id_*" for m in c.morphisms})


def pattern_query(pattern: dict, instance, **kwargs) -> LiftingQuery:
    spec = PatternModel.model_validate(pattern)
    p = spec.to_domain(instance.schema)
    window = None
    if spec.window is not None:
        r = category_of_elements(p).category
        q = discrete_category(spec.window)
        window = FinFunctor(
            q, r, {o: o for o in q.objects}, {q.id(o): r.id(o) for o in q.objects}
        )
    return LiftingQuery.from_pattern(p, instance, window=window, **kwargs)


def set_map(domain, codomain, table) -> FinSetMap:
    return FinSetMap(tuple(domain), tuple(codomain), dict(table))


def inclusion(chain: FinCategory) -> FinFunctor:
    """The objects of a chain, as a discrete subcategory."""
    points = discrete_category(chain.objects)
    object_map = {a: a for a in chain.objects}
    return FinFunctor(points, chain, object_map, {points.id(a): chain.id(a) for a in chain.objects})


EMPTY_TO_POINT = set_map([], ["*"], {})
FOLD = set_map(["u", "v"], ["*"], {"u": "*", "v": "*"})


class TestSetSquares:
    """Tests for lifting in finite sets."""

    def test_point_against_surjection(self):
        """∅ -> {•} against 2 -> 1: the point can go to either element."""
        p = set_map(["a", "b"], ["*"], {"a": "*", "b": "*"})
        square = SetSquare(
            EMPTY_TO_POINT, p, set_map([], ["a", "b"], {}), set_map(["*"], ["*"], {"*": "*"})
        )
        solutions = solve_lifting(square)
        assert sorted(h("*") for h in solutions) == ["a", "b"]
        assert all(square.is_solution(h) for h in solutions)

    def test_non_commuting_square(self):
        p = set_map(["a"], ["x", "y"], {"a": "x"})
        f = set_map(["u"], ["v"], {"u": "v"})
        with pytest.raises(ValidationError):
            SetSquare(
                f, p, set_map(["u"], ["a"], {"u": "a"}), set_map(["v"], ["x", "y"], {"v": "y"})
            )

    def test_mistyped_square(self):
        p = set_map(["a"], ["x"], {"a": "x"})
        with pytest.raises(StructuralError):
            SetSquare(
                EMPTY_TO_POINT, p, set_map([], ["b"], {}), set_map(["*"], ["x"], {"*": "x"})
            )

    def test_partial_map_rejected(self):
        with pytest.raises(StructuralError):
            set_map(["a", "b"], ["x"], {"a": "x"})

    def test_forced_conflict_has_no_diagonal(self):
        """Both points of dom(f) land on one point of cod(f) but go to different places."""
        p = set_map(["a", "b"], ["*"], {"a": "*", "b": "*"})
        square = SetSquare(
            FOLD,
            p,
            set_map(["u", "v"], ["a", "b"], {"u": "a", "v": "b"}),
            set_map(["*"], ["*"], {"*": "*"}),
        )
        assert square.solve() == []

    def test_lifting_properties_characterize_maps(self):
        """RLP against ∅ -> 1 means surjective, against 2 -> 1 means injective."""
        for m, n in itertools.product(range(5), range(1, 5)):
            domain = [f"x{i}" for i in range(m)]
            codomain = [f"y{j}" for j in range(n)]
            for values in itertools.product(codomain, repeat=m):
                p = set_map(domain, codomain, zip(domain, values))
                assert has_rlp(p, [EMPTY_TO_POINT]).holds == p.is_surjective()
                assert has_rlp(p, [FOLD]).holds == p.is_injective()

    def test_counterexample(self):
        p = set_map(["a"], ["x", "y"], {"a": "x"})
        report = has_rlp(p, [EMPTY_TO_POINT])
        assert not report.holds
        assert report.counterexample.bottom("*") == "y"

    def test_budget(self):
        p = set_map(["a", "b", "c"], ["x"], {"a": "x", "b": "x", "c": "x"})
        with pytest.raises(CapacityError):
            has_rlp(p, [FOLD], SearchBudget("test", limit=3))


class TestSimplicialSquares:
    """Tests for lifting against horn inclusions."""

    def test_inner_horn_lifts_in_a_nerve(self, chain2):
        f = horn_inclusion(2, 1, 2)
        x = nerve(chain2, 2)
        p = nerve_map(to_point(chain2), 2)
        top = SimplicialMap(f.source, x, {s: s for level in f.source.levels for s in level})
        square = SimplicialSquare(f, p, top, p)
        solutions = square.solve()
        assert len(solutions) == 1
        assert solutions[0]("0->1;1->2") == "0->1;1->2"

    def test_outer_horn_does_not_lift(self, chain1):
        """Λ²₀ with edge 0->1 on the arrow and 0->2 on an identity needs an arrow 1 -> 0."""
        f = horn_inclusion(2, 0, 2)
        vertex = {"0": "0", "1": "1", "2": "0"}

        def relabel(s: str) -> str:
            if "->" not in s:
                return vertex[s]
            arrows = (a.split("->") for a in s.split(";"))
            return ";".join(f"{vertex[a]}->{vertex[b]}" for a, b in arrows)

        top = SimplicialMap(
            f.source, nerve(chain1, 2), {s: relabel(s) for level in f.source.levels for s in level}
        )
        p = nerve_map(to_point(chain1), 2)
        point = p.target
        bottom = SimplicialMap(
            f.target,
            point,
            {s: point.levels[n][0] for n, level in enumerate(f.target.levels) for s in level},
        )
        assert SimplicialSquare(f, p, top, bottom).solve() == []


class TestCategorySquares:
    """Tests for lifting in finite categories."""

    def test_inclusion_against_identity(self, chain1):
        include = inclusion(chain1)
        identity = identity_functor(chain1)
        square = CategorySquare(include, identity, include, identity)
        solutions = square.solve()
        assert len(solutions) == 1
        assert solutions[0].on_morphism("0->1") == "0->1"

    def test_non_commuting(self, chain1):
        include = inclusion(chain1)
        points = include.source
        swap = FinFunctor(points, chain1, {"0": "1", "1": "0"}, {"id_0": "1->1", "id_1": "0->0"})
        identity = identity_functor(chain1)
        with pytest.raises(ValidationError):
            CategorySquare(include, identity, swap, identity)

    def test_sections_of_a_collapse(self):
        """Diagonals of ∅ -> 1 against [1] -> 1 are the two objects of [1]."""
        chain = chain_category(1)
        one = terminal_category()
        empty = discrete_category([])
        bang = to_point(empty)
        start = FinFunctor(empty, chain, {}, {})
        square = CategorySquare(bang, to_point(chain), start, identity_functor(one))
        assert len(square.solve()) == 2


class TestQueries:
    """Tests for pattern queries over graph instances."""

    def test_collider_bindings(self, collider):
        assert len(query_by_lifting(pattern_query(instances.COLLIDER_PATTERN, collider))) == 4

    def test_injective(self, collider):
        query = pattern_query(instances.COLLIDER_PATTERN, collider, injective=True)
        bindings = query_by_lifting(query)
        assert len(bindings) == 2
        assert {b["(V,B)"] for b in bindings} == {"b"}

    def test_injective_dedup(self, collider):
        query = pattern_query(instances.COLLIDER_PATTERN, collider, injective=True, dedup=True)
        assert len(query_by_lifting(query)) == 1

    def test_no_edges_no_bindings(self):
        edgeless = InstanceModel.model_validate(instances.EDGELESS).to_domain()
        assert query_by_lifting(pattern_query(instances.COLLIDER_PATTERN, edgeless)) == []

    def test_window_answers(self, two_cycle):
        query = pattern_query(instances.SOURCE_PATTERN, two_cycle)
        bindings = query_by_lifting(query)
        assert window_answers(query, bindings) == [("v1",), ("v2",)]

    def test_anchor(self, two_cycle):
        query = pattern_query(instances.SOURCE_PATTERN, two_cycle, anchor={"(V,s)": "v2"})
        bindings = query_by_lifting(query)
        assert bindings == [{"(E,x)": "e2", "(V,s)": "v2", "(V,t)": "v1"}]

    def test_anchor_outside_instance(self, two_cycle):
        with pytest.raises(StructuralError):
            pattern_query(instances.SOURCE_PATTERN, two_cycle, anchor={"(V,s)": "e1"})

    def test_window_answers_need_a_window(self, collider):
        query = pattern_query(instances.COLLIDER_PATTERN, collider)
        with pytest.raises(StructuralError):
            window_answers(query, [])


class TestQueriesAsSquares:
    """Bindings are exactly the diagonals of the square of functors over the schema."""

    def diagonals(self, query, f, top):
        elements = category_of_elements(query.instance)
        square = CategorySquare(f, elements.projection, top, query.binding)
        return sorted(
            sorted((r, elements.elements[h.on_object(r)][1]) for r in f.target.objects)
            for h in square.solve()
        )

    def test_unanchored(self, collider):
        query = pattern_query(instances.COLLIDER_PATTERN, collider)
        pattern = query.binding.source
        empty = discrete_category([])
        ground = category_of_elements(collider).category
        f = FinFunctor(empty, pattern, {}, {})
        diagonals = self.diagonals(query, f, FinFunctor(empty, ground, {}, {}))
        bindings = sorted(sorted(b.items()) for b in query_by_lifting(query))
        assert diagonals == bindings
        assert len(diagonals) == 4

    def test_anchored(self, two_cycle):
        query = pattern_query(instances.SOURCE_PATTERN, two_cycle, anchor={"(V,s)": "v2"})
        ground = category_of_elements(two_cycle).category
        start = element_id("V", "v2")
        window = query.window.source
        top = FinFunctor(
            window, ground, {"(V,s)": start}, {window.id("(V,s)"): ground.id(start)}
        )
        bindings = sorted(sorted(b.items()) for b in query_by_lifting(query))
        assert self.diagonals(query, query.window, top) == bindings
