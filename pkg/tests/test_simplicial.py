"""
Tests for truncated simplicial sets, nerves and horn filling.
"""

import pytest

from gaiakit.config import settings
from gaiakit.errors import CapacityError, StructuralError, ValidationError
from gaiakit.fincat import (
    FinFunctor,
    discrete_category,
    functors_between,
    point_functor,
    terminal_category,
    validate_category,
)
from gaiakit.simplicial import (
    HornProblem,
    SimplicialMap,
    build_shape,
    enumerate_horn_fillers,
    homotopic,
    horn_problem_from_map,
    is_inner_extension_complete,
    is_kan_complex,
    is_kan_fibration,
    nerve,
    nerve_map,
    product,
    simplicial_maps,
    standard_face,
    validate_simplicial_map,
    validate_simplicial_set,
    vertices,
)
from tests.conftest import random_category


class TestNerve:
    """Tests for the nerve of a finite category."""

    def test_level_sizes_of_chain(self, chain2):
        """Level n of N([2]) has one simplex per monotone map [n] -> [2]."""
        x = nerve(chain2, 2)
        assert [len(level) for level in x.levels] == [3, 6, 10]

    def test_faces_of_a_two_chain(self, chain2):
        x = nerve(chain2, 2)
        assert x.faces["0->1;1->2"] == ("1->2", "0->2", "0->1")
        assert x.faces["0->1"] == ("1", "0")

    def test_degeneracies_insert_identities(self, chain2):
        x = nerve(chain2, 2)
        assert x.degeneracies["0->1"] == ("0->0;0->1", "0->1;1->1")
        assert x.degeneracy("1", 0) == "1->1"

    def test_no_degeneracy_at_truncation(self, chain2):
        x = nerve(chain2, 1)
        with pytest.raises(StructuralError):
            x.degeneracy("0->1", 0)

    def test_monoid_nerve(self, z2):
        x = nerve(z2, 2)
        assert x.size(1) == 2
        assert x.size(2) == 4
        assert x.nondegenerate(1) == ("g",)

    def test_discrete_nerve_is_zero_dimensional(self):
        x = nerve(discrete_category(["a", "b", "c"]), 2)
        assert len(x.nondegenerate(0)) == 3
        assert x.nondegenerate(1) == ()
        assert x.nondegenerate(2) == ()

    def test_default_truncation_from_settings(self, chain1):
        settings.truncation = 2
        assert nerve(chain1).truncation == 2

    def test_nerves_are_valid(self, chain2, z2):
        assert validate_simplicial_set(nerve(chain2, 3)).valid
        assert validate_simplicial_set(nerve(z2, 3)).valid

    def test_negative_truncation(self, chain1):
        with pytest.raises(ValidationError):
            nerve(chain1, -1)

    def test_separator_in_identifier(self):
        with pytest.raises(StructuralError):
            nerve(discrete_category(["a;b"]), 1)

    def test_capacity(self, z2):
        settings.product_capacity = 10
        with pytest.raises(CapacityError):
            nerve(z2, 4)

    def test_vertices(self, chain2):
        x = nerve(chain2, 2)
        assert vertices(x, "0->1;1->2") == ("0", "1", "2")
        assert vertices(x, "1") == ("1",)


class TestValidation:
    """Tests for the simplicial identity checks."""

    def test_broken_face_table(self, chain1):
        """Swapping the faces of a 2-simplex breaks d_i d_j = d_{j-1} d_i."""
        x = nerve(chain1, 2)
        faces = dict(x.faces)
        d0, d1, d2 = faces["0->0;0->1"]
        faces["0->0;0->1"] = (d2, d1, d0)
        broken = type(x)(x.truncation, x.levels, faces, x.degeneracies)
        assert not validate_simplicial_set(broken).valid

    def test_unknown_face_is_structural(self, chain1):
        x = nerve(chain1, 1)
        faces = dict(x.faces)
        faces["0->1"] = ("ghost", "0")
        broken = type(x)(x.truncation, x.levels, faces, x.degeneracies)
        assert validate_simplicial_set(broken).structural


class TestShapes:
    """Tests for standard simplices, boundaries and horns."""

    def test_standard_simplex(self):
        x = build_shape("standard", 2)
        assert [len(x.nondegenerate(n)) for n in range(3)] == [3, 3, 1]
        assert x.nondegenerate(2) == ("0->1;1->2",)

    def test_boundary(self):
        x = build_shape("boundary", 2)
        assert [len(x.nondegenerate(n)) for n in range(3)] == [3, 3, 0]
        assert validate_simplicial_set(x).valid

    def test_horn(self):
        x = build_shape("horn", 2, 1)
        assert x.nondegenerate(1) == ("0->1", "1->2")
        assert x.shape == ("horn", 2, 1)

    def test_standard_face(self):
        assert standard_face(2, 1) == "0->2"
        assert standard_face(2, 0) == "1->2"
        assert standard_face(1, 0) == "1"

    @pytest.mark.parametrize(
        "kind,n,k", [("horn", 2, 3), ("horn", 2, None), ("standard", 2, 1), ("sphere", 2, None)]
    )
    def test_bad_shapes(self, kind, n, k):
        with pytest.raises(ValidationError):
            build_shape(kind, n, k)


class TestMaps:
    """Tests for simplicial maps and homotopies."""

    def test_nerve_map_is_valid(self, chain1, chain2):
        functor = FinFunctor(
            chain1,
            chain2,
            {"0": "0", "1": "2"},
            {"0->0": "0->0", "0->1": "0->2", "1->1": "2->2"},
        )
        f = nerve_map(functor, 2)
        assert validate_simplicial_map(f).valid
        assert f("0->0;0->1") == "0->0;0->2"

    def test_broken_map(self, chain1):
        x = nerve(chain1, 1)
        mapping = {"0": "0", "1": "1", "0->0": "0->0", "0->1": "0->0", "1->1": "1->1"}
        assert not validate_simplicial_map(SimplicialMap(x, x, mapping)).valid

    def test_nerve_is_fully_faithful(self, chain1, chain2, z2):
        """Functors correspond exactly to maps of 2-truncated nerves."""
        for source, target in ((chain1, chain2), (z2, z2), (chain2, chain1)):
            functors = functors_between(source, target)
            maps = simplicial_maps(nerve(source, 2), nerve(target, 2))
            assert len(functors) == len(maps)
            from_functors = {frozenset(nerve_map(f, 2).mapping.items()) for f in functors}
            assert from_functors == {frozenset(h.mapping.items()) for h in maps}

    def test_product_with_interval(self, chain1):
        interval = build_shape("standard", 1, truncation=2)
        x = product(interval, nerve(chain1, 2))
        assert [len(level) for level in x.levels] == [4, 9, 16]
        assert validate_simplicial_set(x).valid

    def test_endpoints_of_an_arrow_are_homotopic(self, chain1):
        f0 = nerve_map(point_functor(chain1, "0"), 2)
        f1 = nerve_map(point_functor(chain1, "1"), 2)
        assert homotopic(f0, f1)
        assert homotopic(f0, f0)

    def test_disconnected_points_are_not_homotopic(self):
        c = discrete_category(["p", "q"])
        f0 = nerve_map(point_functor(c, "p"), 2)
        f1 = nerve_map(point_functor(c, "q"), 2)
        assert not homotopic(f0, f1)


class TestHorns:
    """Tests for horn problems and Kan conditions."""

    def test_inner_horn_has_the_composite(self, chain2):
        problem = HornProblem(2, 1, nerve(chain2, 2), {0: "1->2", 2: "0->1"})
        assert enumerate_horn_fillers(problem) == ["0->1;1->2"]

    def test_outer_horn_without_filler(self, chain1):
        """Λ²₀ with edge(0,1) = f and edge(0,2) = id: no arrow back from 1 to 0."""
        problem = HornProblem(2, 0, nerve(chain1, 2), {1: "0->0", 2: "0->1"})
        assert enumerate_horn_fillers(problem) == []

    def test_incompatible_faces(self, chain2):
        with pytest.raises(ValidationError):
            HornProblem(2, 1, nerve(chain2, 2), {0: "0->1", 2: "0->1"})

    def test_wrong_face_set(self, chain2):
        with pytest.raises(ValidationError):
            HornProblem(2, 1, nerve(chain2, 2), {0: "1->2", 1: "0->2"})

    def test_wrong_dimension_face(self, chain2):
        with pytest.raises(ValidationError):
            HornProblem(2, 1, nerve(chain2, 2), {0: "1", 2: "0->1"})

    def test_horn_above_truncation(self, chain2):
        with pytest.raises(ValidationError):
            HornProblem(2, 1, nerve(chain2, 1), {0: "1->2", 2: "0->1"})

    def test_chain_is_not_kan(self, chain1):
        report = is_kan_complex(nerve(chain1, 2))
        assert not report.holds
        assert report.witness.n == 2
        assert report.witness.k == 0
        assert report.fillers == []

    def test_group_nerve_is_kan(self, z2):
        assert is_kan_complex(nerve(z2, 3)).holds

    def test_point_is_kan(self):
        assert is_kan_complex(build_shape("standard", 0)).holds

    def test_check_above_truncation(self, chain1):
        with pytest.raises(ValidationError):
            is_kan_complex(nerve(chain1, 2), 3)

    def test_nerves_are_inner_complete(self, chain2, z2):
        assert is_inner_extension_complete(nerve(chain2, 3), require_unique=True)
        assert is_inner_extension_complete(nerve(z2, 3), require_unique=True)
        assert is_inner_extension_complete(build_shape("standard", 2), require_unique=True)

    def test_boundary_is_not_inner_complete(self):
        assert not is_inner_extension_complete(build_shape("boundary", 3))

    def test_budget(self, z2):
        settings.budget = 5
        with pytest.raises(CapacityError):
            is_kan_complex(nerve(z2, 3))

    def test_horn_problem_from_map(self, chain2):
        horn = build_shape("horn", 2, 1)
        g = SimplicialMap(horn, nerve(chain2, 2), {s: s for level in horn.levels for s in level})
        problem = horn_problem_from_map(g, 2, 1)
        assert problem.faces == {0: "1->2", 2: "0->1"}


class TestFibrations:
    """Tests for horn lifting against maps."""

    def test_identity_is_fibration(self, chain1):
        x = nerve(chain1, 2)
        identity = SimplicialMap(x, x, {s: s for level in x.levels for s in level})
        assert is_kan_fibration(identity).holds

    def test_map_to_point(self, chain1):
        """N([1]) -> N(1) fails like N([1]) fails to be Kan."""
        one = terminal_category()
        functor = FinFunctor(
            chain1, one, {"0": "*", "1": "*"}, {m.id: "id_*" for m in chain1.morphisms}
        )
        report = is_kan_fibration(nerve_map(functor, 2))
        assert not report.holds
        assert report.base_simplex == "id_*;id_*"


class TestRandomCategories:
    """Nerves of seeded random categories with at most four objects."""

    @pytest.mark.parametrize("seed", range(50))
    def test_simplicial_identities(self, seed):
        c = random_category(seed)
        assert validate_category(c).valid
        report = validate_simplicial_set(nerve(c, 3))
        assert report.valid, report.violations

    @pytest.mark.parametrize("seed", range(50))
    def test_inner_horns_fill_uniquely(self, seed):
        assert is_inner_extension_complete(nerve(random_category(seed), 3), require_unique=True)

    @pytest.mark.parametrize("seed", range(20))
    def test_nerve_is_fully_faithful(self, seed):
        source = random_category(seed, max_objects=3)
        target = random_category(seed + 101, max_objects=3)
        functors = functors_between(source, target)
        maps = simplicial_maps(nerve(source, 2), nerve(target, 2))
        from_functors = {frozenset(nerve_map(f, 2).mapping.items()) for f in functors}
        assert len(from_functors) == len(functors)
        assert from_functors == {frozenset(h.mapping.items()) for h in maps}
