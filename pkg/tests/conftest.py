"""
Pytest configuration and shared fixtures.

Small categories, instances and coalgebras used across the test modules,
built from the file-form presentations in ``tests/fixtures``.
"""

import itertools
import json
from fractions import Fraction

import numpy as np
import pytest

from gaiakit.coalgebra import Coalgebra, EndofunctorSpec, FunctorKind
from gaiakit.config import settings
from gaiakit.elements import SetInstance
from gaiakit.fincat import (
    FinCategory,
    chain_category,
    free_category,
    monoid_category,
    poset_category,
)
from gaiakit.formats import CategoryModel, CoalgebraModel, FunctorModel, InstanceModel
from gaiakit.genmetric import INF
from gaiakit.learn import ParamFn, affine, bias, pointwise, scalar_product
from tests.fixtures import categories, coalgebras, instances


def make_instance(schema: FinCategory, tables: dict, actions: dict | None = None) -> SetInstance:
    """A set-valued functor with identity actions filled in."""
    actions = {f: dict(table) for f, table in (actions or {}).items()}
    for a in schema.objects:
        actions.setdefault(schema.id(a), {x: x for x in tables.get(a, ())})
    return SetInstance(schema, {s: tuple(xs) for s, xs in tables.items()}, actions)


def write_json(path, data) -> str:
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


@pytest.fixture(autouse=True)
def restore_settings():
    """Undo any settings change a test makes."""
    saved = settings.model_dump()
    yield
    for name, value in saved.items():
        setattr(settings, name, value)


@pytest.fixture
def chain1():
    return chain_category(1)


@pytest.fixture
def chain2():
    return chain_category(2)


@pytest.fixture
def z2():
    """Z/2 = {e, g} with g·g = e."""
    table = {("e", "e"): "e", ("e", "g"): "g", ("g", "e"): "g", ("g", "g"): "e"}
    return monoid_category(["e", "g"], table, "e")


@pytest.fixture
def graph_schema():
    return CategoryModel.model_validate(categories.GRAPH_SCHEMA).to_domain()


@pytest.fixture
def two_cycle():
    return InstanceModel.model_validate(instances.TWO_CYCLE).to_domain()


@pytest.fixture
def collider():
    return InstanceModel.model_validate(instances.COLLIDER).to_domain()


@pytest.fixture
def collapse():
    """The functor {a, b} -> {c} collapsing two discrete objects."""
    return FunctorModel.model_validate(categories.COLLAPSE_FUNCTOR).to_domain()


@pytest.fixture
def branching():
    return CoalgebraModel.model_validate(coalgebras.BRANCHING).to_domain()


@pytest.fixture
def merged():
    return CoalgebraModel.model_validate(coalgebras.MERGED).to_domain()


@pytest.fixture
def rng():
    return np.random.default_rng(0)


# --- Seeded random structures ---

# small monoids by name: (elements, unit, product g·f)
MONOIDS = {
    "trivial": (["e"], "e", lambda g, f: "e"),
    "z2": (["e", "g"], "e", lambda g, f: "e" if g == f else "g"),
    "z3": (["0", "1", "2"], "0", lambda g, f: str((int(g) + int(f)) % 3)),
    "zero": (["1", "0"], "1", lambda g, f: "1" if g == f == "1" else "0"),
    "flip_flop": (["e", "a", "b"], "e", lambda g, f: f if g == "e" else g),
}


def random_category(seed: int, max_objects: int = 4) -> FinCategory:
    """A preorder, a free category on an acyclic graph or a small monoid, chosen by seed."""
    rng = np.random.default_rng(seed)
    if seed % 3 == 2:
        elements, unit, times = MONOIDS[sorted(MONOIDS)[int(rng.integers(len(MONOIDS)))]]
        table = {(g, f): times(g, f) for g in elements for f in elements}
        return monoid_category(elements, table, unit)
    names = [f"o{i}" for i in range(int(rng.integers(1, max_objects + 1)))]
    if seed % 3 == 0:
        leq = [(a, b) for a in names for b in names if a != b and rng.random() < 0.3]
        return poset_category(names, leq)
    edges = []
    for i, j in itertools.combinations(range(len(names)), 2):
        for _ in range(int(rng.choice([0, 0, 1, 2]))):
            edges.append((f"e{len(edges)}", names[i], names[j]))
    return free_category(names, edges)


def random_lts(seed: int, max_states: int = 6, alphabet=("a", "b")) -> Coalgebra:
    rng = np.random.default_rng(seed)
    states = [f"s{i}" for i in range(int(rng.integers(1, max_states + 1)))]
    structure = {
        s: frozenset(
            (label, t) for label in alphabet for t in states if rng.random() < 0.25
        )
        for s in states
    }
    return Coalgebra(EndofunctorSpec(FunctorKind.LTS, tuple(alphabet)), tuple(states), structure)


def random_stream(seed: int, max_states: int = 6, alphabet=("0", "1")) -> Coalgebra:
    rng = np.random.default_rng(seed)
    states = [f"q{i}" for i in range(int(rng.integers(1, max_states + 1)))]
    structure = {
        s: (str(rng.choice(alphabet)), states[int(rng.integers(len(states)))]) for s in states
    }
    return Coalgebra(EndofunctorSpec(FunctorKind.STREAM, tuple(alphabet)), tuple(states), structure)


def random_distance_table(seed: int, max_points: int = 5) -> dict:
    """
    ``carrier`` and ``table`` of a random quasi-metric.

    Random lengths in {0, ..., 6, ∞} are closed under the triangle inequality
    by taking shortest paths, so the table is asymmetric and may hold ∞ and
    zero distances between distinct points.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, max_points + 1))
    d = [
        [
            Fraction(0)
            if i == j
            else (INF if rng.random() < 0.2 else Fraction(int(rng.integers(0, 7))))
            for j in range(n)
        ]
        for i in range(n)
    ]
    for k, i, j in itertools.product(range(n), repeat=3):
        d[i][j] = min(d[i][j], d[i][k] + d[k][j])
    return {
        "carrier": [f"x{i}" for i in range(n)],
        "table": [["inf" if v == INF else str(v) for v in row] for row in d],
    }


def random_primitive(rng: np.random.Generator, n_in: int) -> ParamFn:
    """A random library primitive accepting ``n_in`` inputs."""
    kinds = ["affine", "pointwise", "bias"] + (["scalar_product"] if n_in == 1 else [])
    match str(rng.choice(kinds)):
        case "affine":
            return affine(n_in, int(rng.integers(1, 4)))
        case "pointwise":
            return pointwise(str(rng.choice(["identity", "tanh", "sigmoid", "sin"])), n_in)
        case "bias":
            return bias(n_in)
        case _:
            return scalar_product()


def random_composable_pair(seed: int) -> tuple[ParamFn, ParamFn]:
    rng = np.random.default_rng(seed)
    f = random_primitive(rng, int(rng.integers(1, 4)))
    return f, random_primitive(rng, f.n_out)
