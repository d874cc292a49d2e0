"""
Tests for finite categories, functors and set-valued diagrams.
"""

import pytest

from gaiakit.errors import StructuralError
from gaiakit.fincat import (
    FinCategory,
    FinFunctor,
    Morphism,
    NaturalTransformation,
    SetDiagram,
    category_pullback,
    chain_category,
    check_adjunction,
    check_yoneda,
    comma_category,
    discrete_category,
    free_category,
    functors_between,
    identity_functor,
    inverse,
    is_fully_faithful,
    is_galois_connection,
    is_isomorphism,
    is_natural_isomorphism,
    is_retract,
    opposite,
    point_functor,
    poset_category,
    representable,
    set_colimit,
    set_limit,
    set_natural_transformations,
    terminal_category,
    validate_category,
    validate_functor,
    validate_natural_transformation,
)
from gaiakit.formats import CategoryModel
from gaiakit.schemas import ViolationKind
from tests.conftest import make_instance
from tests.fixtures import categories


def constant_functor(source: FinCategory, target: FinCategory, obj: str) -> FinFunctor:
    return FinFunctor(
        source,
        target,
        {a: obj for a in source.objects},
        {m.id: target.id(obj) for m in source.morphisms},
    )


class TestValidateCategory:
    """Tests for the category law checks."""

    def test_chain_is_valid(self, chain2):
        """The ordinal [2] satisfies every law."""
        assert validate_category(chain2).valid

    def test_monoid_is_valid(self, z2):
        """Z/2 as a one-object category is valid."""
        report = validate_category(z2)
        assert report.valid
        assert report.structural == []

    def test_graph_schema_is_valid(self, graph_schema):
        assert validate_category(graph_schema).valid

    def test_coherence_violation_reported(self):
        """A composite of the wrong type is a coherence violation, not an exception."""
        c = CategoryModel.model_validate(categories.BROKEN_COHERENCE).to_domain()
        report = validate_category(c)
        assert not report.valid
        assert report.structural == []
        assert report.kinds().count(ViolationKind.COHERENCE) == 1

    def test_missing_identity_is_structural(self):
        c = FinCategory(("a",), (Morphism("f", "a", "a"),), {}, {})
        report = validate_category(c)
        assert report.structural
        assert report.violations == []

    def test_unknown_morphism_in_table(self):
        """Compose entries must name declared morphisms."""
        c = FinCategory(
            ("a",), (Morphism("id_a", "a", "a"),), {"a": "id_a"}, {("id_a", "ghost"): "id_a"}
        )
        assert validate_category(c).structural

    def test_missing_composite_is_structural(self):
        c = FinCategory(("a",), (Morphism("id_a", "a", "a"),), {"a": "id_a"}, {})
        report = validate_category(c)
        assert report.structural

    def test_associativity_violation(self):
        """A table where (g∘g)∘g differs from g∘(g∘g)."""
        table = {
            ("e", "e"): "e",
            ("e", "g"): "g",
            ("g", "e"): "g",
            ("g", "g"): "h",
            ("e", "h"): "h",
            ("h", "e"): "h",
            ("g", "h"): "e",
            ("h", "g"): "g",
            ("h", "h"): "e",
        }
        morphisms = tuple(Morphism(m, "*", "*") for m in ("e", "g", "h"))
        c = FinCategory(("*",), morphisms, {"*": "e"}, table)
        report = validate_category(c)
        assert ViolationKind.ASSOCIATIVITY in report.kinds()


class TestBuilders:
    """Tests for the standard category constructions."""

    def test_chain_hom_sets(self, chain2):
        assert chain2.objects == ("0", "1", "2")
        assert chain2.hom("0", "2") == ("0->2",)
        assert chain2.hom("2", "0") == ()
        assert chain2.compose("1->2", "0->1") == "0->2"

    def test_poset_takes_transitive_closure(self):
        c = poset_category(["a", "b", "c"], [("a", "b"), ("b", "c")])
        assert c.hom("a", "c") == ("a->c",)
        assert c.is_thin()
        assert validate_category(c).valid

    def test_discrete_and_terminal(self):
        c = discrete_category(["x", "y"])
        assert [m.id for m in c.morphisms] == ["id_x", "id_y"]
        assert terminal_category().objects == ("*",)

    def test_free_category_paths(self):
        """Paths are named by their edges joined with dots."""
        c = free_category(["0", "1", "2"], [("f", "0", "1"), ("g", "1", "2")])
        assert c.hom("0", "2") == ("f.g",)
        assert c.compose("g", "f") == "f.g"
        assert validate_category(c).valid

    def test_free_category_rejects_cycles(self):
        with pytest.raises(StructuralError):
            free_category(["a", "b"], [("f", "a", "b"), ("g", "b", "a")])

    def test_opposite_reverses_arrows(self, chain1):
        op = opposite(chain1)
        assert op.hom("1", "0") == ("0->1",)
        assert validate_category(op).valid

    def test_monoid_is_not_thin(self, z2):
        assert not z2.is_thin()
        assert z2.compose("g", "g") == "e"


class TestFunctors:
    """Tests for functors and their properties."""

    def test_identity_functor_is_valid(self, chain2):
        functor = identity_functor(chain2)
        assert validate_functor(functor).valid
        assert is_fully_faithful(functor)

    def test_broken_functor(self, chain1, z2):
        """Sending an identity to a non-identity breaks functoriality."""
        functor = FinFunctor(
            chain1, z2, {"0": "*", "1": "*"}, {"0->0": "g", "0->1": "g", "1->1": "e"}
        )
        report = validate_functor(functor)
        assert ViolationKind.FUNCTORIALITY in report.kinds()

    def test_unmapped_object_is_structural(self, chain1):
        functor = FinFunctor(chain1, chain1, {"0": "0"}, {})
        assert validate_functor(functor).structural

    def test_functors_between_chains(self, chain1, chain2):
        """Functors [1] -> [2] are the monotone maps."""
        functors = functors_between(chain1, chain2)
        assert len(functors) == 6
        assert all(validate_functor(f).valid for f in functors)

    def test_endofunctors_of_z2(self, z2):
        assert len(functors_between(z2, z2)) == 2

    def test_undefined_lookup_raises(self, chain1):
        functor = identity_functor(chain1)
        with pytest.raises(StructuralError):
            functor.on_object("7")


class TestNaturalTransformations:
    """Tests for natural transformations and isomorphisms."""

    def test_constant_transformation(self, chain1):
        """Constant at 0 => constant at 1 through 0->1."""
        alpha = NaturalTransformation(
            constant_functor(chain1, chain1, "0"),
            constant_functor(chain1, chain1, "1"),
            {"0": "0->1", "1": "0->1"},
        )
        assert validate_natural_transformation(alpha).valid
        assert not is_natural_isomorphism(alpha)

    def test_non_parallel_functors(self, chain1, chain2):
        alpha = NaturalTransformation(
            identity_functor(chain1), constant_functor(chain1, chain2, "0"), {}
        )
        assert validate_natural_transformation(alpha).structural == ["functors are not parallel"]

    def test_identity_transformation_is_iso(self, z2):
        functor = identity_functor(z2)
        alpha = NaturalTransformation(functor, functor, {"*": "e"})
        assert is_natural_isomorphism(alpha)

    def test_inverse_in_group(self, z2, chain1):
        assert inverse(z2, "g") == "g"
        assert is_isomorphism(z2, "e")
        assert not is_isomorphism(chain1, "0->1")

    def test_retract(self, z2):
        assert is_retract(z2, "g", "g")
        assert not is_retract(z2, "g", "e")


class TestCommaAndPullback:
    """Tests for comma categories and strict pullbacks."""

    def test_slice_over_object(self, chain2):
        """id ↓ 1 has one object per arrow into 1."""
        comma = comma_category(identity_functor(chain2), point_functor(chain2, "1"))
        assert sorted(comma.category.objects) == ["(0,*,0->1)", "(1,*,1->1)"]
        assert validate_category(comma.category).valid

    def test_mismatched_targets(self, chain1, chain2):
        with pytest.raises(StructuralError):
            comma_category(identity_functor(chain1), identity_functor(chain2))

    def test_pullback_of_identities(self, chain1):
        functor = identity_functor(chain1)
        cat, left, right = category_pullback(functor, functor)
        assert cat.objects == ("(0,0)", "(1,1)")
        assert validate_category(cat).valid
        assert validate_functor(left).valid and validate_functor(right).valid


class TestAdjunctions:
    """Tests for adjunctions between finite categories."""

    def test_collapse_left_adjoint_to_top(self, chain1):
        """! : [1] -> 1 is left adjoint to the top element."""
        one = terminal_category()
        left = constant_functor(chain1, one, "*")
        right = point_functor(chain1, "1")
        report = check_adjunction(left, right)
        assert report.holds
        assert report.unit == {"0": "0->1", "1": "1->1"}
        assert is_galois_connection(left, right)

    def test_bottom_is_not_right_adjoint(self, chain1):
        one = terminal_category()
        left = constant_functor(chain1, one, "*")
        right = point_functor(chain1, "0")
        report = check_adjunction(left, right)
        assert not report.holds
        assert report.failure
        assert not is_galois_connection(left, right)

    def test_galois_needs_preorders(self, z2):
        functor = identity_functor(z2)
        with pytest.raises(StructuralError):
            is_galois_connection(functor, functor)


class TestSetDiagrams:
    """Tests for limits, colimits and natural transformations of set-valued functors."""

    def test_colimit_of_discrete_diagram(self):
        shape = discrete_category(["a", "b"])
        d = make_instance(shape, {"a": ["1", "2"], "b": ["3"]})
        colimit = set_colimit(d)
        assert len(colimit.elements) == 3
        assert colimit.injections["a"]["1"] == "1@a"

    def test_colimit_glues_along_arrows(self, chain1):
        d = make_instance(chain1, {"0": ["x", "y"], "1": ["z"]}, {"0->1": {"x": "z", "y": "z"}})
        assert set_colimit(d).elements == ("x@0",)

    def test_pullback_limit(self):
        """Over a one-point apex every pair is compatible: 3 × 1 families."""
        shape = poset_category(["a", "c", "b"], [("a", "c"), ("b", "c")])
        d = make_instance(
            shape,
            {"a": ["1", "2", "3"], "b": ["x"], "c": ["u"]},
            {"a->c": {"1": "u", "2": "u", "3": "u"}, "b->c": {"x": "u"}},
        )
        limit = set_limit(d)
        assert len(limit.elements) == 3
        assert limit.projections["a"]["(1,u,x)"] == "1"

    def test_limit_of_empty_diagram(self):
        limit = set_limit(SetDiagram(discrete_category([]), {}, {}))
        assert limit.elements == ("()",)

    def test_natural_transformations_between_instances(self):
        shape = discrete_category(["a"])
        source = make_instance(shape, {"a": ["1", "2"]})
        target = make_instance(shape, {"a": ["x", "y", "z"]})
        assert len(set_natural_transformations(source, target)) == 9

    def test_yoneda_on_chain(self, chain1):
        """Nat(c(0, -), F) is in bijection with F(0)."""
        functor = make_instance(
            chain1, {"0": ["x", "y"], "1": ["z", "w"]}, {"0->1": {"x": "z", "y": "w"}}
        )
        report = check_yoneda(chain1, "0", functor)
        assert report.transformations == report.elements == 2
        assert report.bijective

    def test_representable(self, chain2):
        hom = representable(chain2, "1")
        assert hom.sets["0"] == ()
        assert hom.sets["2"] == ("1->2",)
