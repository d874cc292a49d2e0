"""
Categories of elements and functorial data migration.

An instance is a set-valued functor on a schema category. Along a functor
``F: S -> T`` instances move three ways: Δ_F precomposes, Σ_F and Π_F are
the left and right Kan extensions, computed pointwise as colimits over
``F ↓ t`` and limits over ``t ↓ F``.
"""

import logging
from collections.abc import Mapping
from dataclasses import dataclass

from gaiakit.errors import StructuralError
from gaiakit.fincat import (
    Colimit,
    FinCategory,
    FinFunctor,
    Limit,
    Morphism,
    SetDiagram,
    category_pullback,
    comma_category,
    point_functor,
    set_colimit,
    set_limit,
    set_natural_transformations,
    tuple_id,
    validate_functor,
)
from gaiakit.search import SearchBudget

logger = logging.getLogger(__name__)

# Components of a natural transformation between instances: object -> element -> element.
Components = Mapping[str, Mapping[str, str]]


@dataclass(frozen=True)
class SetInstance(SetDiagram):
    """A database instance: a set-valued functor on a schema."""

    @property
    def schema(self) -> FinCategory:
        return self.shape

    @property
    def tables(self) -> Mapping[str, tuple[str, ...]]:
        return self.sets

    @property
    def actions(self) -> Mapping[str, Mapping[str, str]]:
        return self.functions


@dataclass(frozen=True)
class ElementsCategory:
    category: FinCategory
    projection: FinFunctor
    # object id of ∫δ -> (schema object, element)
    elements: Mapping[str, tuple[str, str]]


def element_id(s: str, x: str) -> str:
    return tuple_id(s, x)


def element_arrow(f: str, x: str) -> str:
    return f"{f}@{x}"


def category_of_elements(instance: SetInstance) -> ElementsCategory:
    """
    The category ∫δ of pairs ``(s, x)`` with ``x ∈ δ(s)``.

    A morphism ``f@x: (s, x) -> (s', δf(x))`` exists for every ``f: s -> s'``.
    """
    schema = instance.schema
    elements = {
        element_id(s, x): (s, x) for s in schema.objects for x in instance.tables[s]
    }
    morphisms = []
    projection_map = {}
    for m in schema.morphisms:
        for x in instance.tables[m.dom]:
            arrow = element_arrow(m.id, x)
            morphisms.append(
                Morphism(arrow, element_id(m.dom, x), element_id(m.cod, instance.apply(m.id, x)))
            )
            projection_map[arrow] = m.id
    identity = {obj: element_arrow(schema.id(s), x) for obj, (s, x) in elements.items()}
    composition = {}
    for (g, f), gf in schema.composition.items():
        for x in instance.tables[schema.dom(f)]:
            y = instance.apply(f, x)
            composition[(element_arrow(g, y), element_arrow(f, x))] = element_arrow(gf, x)
    category = FinCategory(tuple(elements), tuple(morphisms), identity, composition)
    projection = FinFunctor(
        category, schema, {obj: s for obj, (s, _) in elements.items()}, projection_map
    )
    logger.debug(f"category of elements with {len(elements)} objects")
    return ElementsCategory(category, projection, elements)


def _check_schema(functor: FinFunctor, instance: SetInstance, side: str) -> None:
    schema = functor.target if side == "target" else functor.source
    if instance.schema != schema:
        raise StructuralError(f"instance schema is not the {side} of the functor")


def pullback_migration(functor: FinFunctor, instance: SetInstance) -> SetInstance:
    """Δ_F ε = ε ∘ F."""
    _check_schema(functor, instance, "target")
    source = functor.source
    return SetInstance(
        source,
        {s: tuple(instance.tables[functor.on_object(s)]) for s in source.objects},
        {m.id: dict(instance.actions[functor.on_morphism(m.id)]) for m in source.morphisms},
    )


@dataclass(frozen=True)
class KanExtension:
    """A migrated instance with the pointwise (co)limits it was assembled from."""

    instance: SetInstance
    colimits: Mapping[str, Colimit] | None = None
    limits: Mapping[str, Limit] | None = None


def left_kan_extension(functor: FinFunctor, instance: SetInstance) -> KanExtension:
    _check_schema(functor, instance, "source")
    target = functor.target
    colimits: dict[str, Colimit] = {}
    triples: dict[str, Mapping[str, tuple[str, str, str]]] = {}
    for t in target.objects:
        comma = comma_category(functor, point_functor(target, t))
        diagram = SetDiagram(
            comma.category,
            {o: instance.tables[s] for o, (s, _, _) in comma.triples.items()},
            {
                m.id: instance.actions[comma.left.on_morphism(m.id)]
                for m in comma.category.morphisms
            },
        )
        colimits[t] = set_colimit(diagram)
        triples[t] = comma.triples
    actions: dict[str, dict[str, str]] = {}
    for g in target.morphisms:
        table = {}
        for cls, (o, x) in colimits[g.dom].representatives.items():
            s, _, f = triples[g.dom][o]
            image = tuple_id(s, "*", target.compose(g.id, f))
            table[cls] = colimits[g.cod].injections[image][x]
        actions[g.id] = table
    migrated = SetInstance(target, {t: colimits[t].elements for t in target.objects}, actions)
    return KanExtension(migrated, colimits=colimits)


def left_kan_migration(functor: FinFunctor, instance: SetInstance) -> SetInstance:
    """
    Σ_F δ, the left Kan extension of δ along F.

    ``(Σ_F δ)(t)`` is the colimit of δ over ``F ↓ t``. Each class is acted on
    through its canonical representative ``((s, f), x)``, which ``g`` sends to
    the class of ``((s, g ∘ f), x)``.
    """
    return left_kan_extension(functor, instance).instance


def right_kan_extension(functor: FinFunctor, instance: SetInstance) -> KanExtension:
    _check_schema(functor, instance, "source")
    target = functor.target
    limits: dict[str, Limit] = {}
    triples: dict[str, Mapping[str, tuple[str, str, str]]] = {}
    for t in target.objects:
        comma = comma_category(point_functor(target, t), functor)
        diagram = SetDiagram(
            comma.category,
            {o: instance.tables[s] for o, (_, s, _) in comma.triples.items()},
            {
                m.id: instance.actions[comma.right.on_morphism(m.id)]
                for m in comma.category.morphisms
            },
        )
        limits[t] = set_limit(diagram)
        triples[t] = comma.triples
    actions: dict[str, dict[str, str]] = {}
    for g in target.morphisms:
        table = {}
        for name, family in limits[g.dom].families.items():
            values = [
                family[tuple_id("*", s, target.compose(f, g.id))]
                for _, s, f in triples[g.cod].values()
            ]
            table[name] = tuple_id(*values)
        actions[g.id] = table
    migrated = SetInstance(target, {t: limits[t].elements for t in target.objects}, actions)
    return KanExtension(migrated, limits=limits)


def right_kan_migration(functor: FinFunctor, instance: SetInstance) -> SetInstance:
    """
    Π_F δ, the right Kan extension of δ along F.

    ``(Π_F δ)(t)`` is the set of compatible families over ``t ↓ F``; ``g: t -> t'``
    sends ``y`` to the family ``y'_{(s, f')} = y_{(s, f' ∘ g)}``.
    """
    return right_kan_extension(functor, instance).instance


def verify_elements_pullback(functor: FinFunctor, instance: SetInstance) -> bool:
    """
    Check ∫(Δ_F ε) ≅ S ×_T ∫ε through an explicit isomorphism of categories.

    The isomorphism is ``(s, x) ↦ (s, (Fs, x))`` on objects and
    ``f@x ↦ (f, Ff@x)`` on morphisms.
    """
    pulled = pullback_migration(functor, instance)
    left = category_of_elements(pulled).category
    right, _, _ = category_pullback(functor, category_of_elements(instance).projection)
    source = functor.source
    object_map = {
        element_id(s, x): tuple_id(s, element_id(functor.on_object(s), x))
        for s in source.objects
        for x in pulled.tables[s]
    }
    morphism_map = {
        element_arrow(m.id, x): tuple_id(m.id, element_arrow(functor.on_morphism(m.id), x))
        for m in source.morphisms
        for x in pulled.tables[m.dom]
    }
    if sorted(object_map.values()) != sorted(right.objects):
        return False
    if sorted(morphism_map.values()) != sorted(m.id for m in right.morphisms):
        return False
    iso = FinFunctor(left, right, object_map, morphism_map)
    inverse = FinFunctor(
        right,
        left,
        {v: k for k, v in object_map.items()},
        {v: k for k, v in morphism_map.items()},
    )
    return validate_functor(iso).valid and validate_functor(inverse).valid


# --- Adjunctions Σ_F ⊣ Δ_F ⊣ Π_F ---


def sigma_transpose(
    functor: FinFunctor, instance: SetInstance, alpha: Components, sigma: KanExtension | None = None
) -> dict[str, dict[str, str]]:
    """
    Send ``α: Σ_F δ -> ε`` to ``α♭: δ -> Δ_F ε``.

    ``α♭_s(x) = α_{Fs}([(s, id_{Fs}), x])``.
    """
    sigma = sigma or left_kan_extension(functor, instance)
    target = functor.target
    transposed: dict[str, dict[str, str]] = {}
    for s in functor.source.objects:
        t = functor.on_object(s)
        unit = tuple_id(s, "*", target.id(t))
        injection = sigma.colimits[t].injections[unit]
        transposed[s] = {x: alpha[t][injection[x]] for x in instance.tables[s]}
    return transposed


def pi_transpose(
    functor: FinFunctor, instance: SetInstance, beta: Components, pi: KanExtension | None = None
) -> dict[str, dict[str, str]]:
    """
    Send ``β: ε -> Π_F δ`` to ``β♭: Δ_F ε -> δ``.

    ``β♭_s(y) = proj_{(s, id_{Fs})}(β_{Fs}(y))``.
    """
    pi = pi or right_kan_extension(functor, instance)
    target = functor.target
    transposed: dict[str, dict[str, str]] = {}
    for s in functor.source.objects:
        t = functor.on_object(s)
        counit = tuple_id("*", s, target.id(t))
        projection = pi.limits[t].projections[counit]
        transposed[s] = {y: projection[z] for y, z in beta[t].items()}
    return transposed


def _frozen(components: Components) -> tuple:
    return tuple(sorted((a, tuple(sorted(table.items()))) for a, table in components.items()))


@dataclass
class MigrationAdjunctionReport:
    sigma_left: int  # |Nat(Σ_F δ, ε)|
    sigma_right: int  # |Nat(δ, Δ_F ε)|
    pi_left: int  # |Nat(Δ_F ε, δ)|
    pi_right: int  # |Nat(ε, Π_F δ)|
    sigma_bijective: bool
    pi_bijective: bool

    @property
    def holds(self) -> bool:
        return self.sigma_bijective and self.pi_bijective


def check_migration_adjunctions(
    functor: FinFunctor,
    instance: SetInstance,
    other: SetInstance,
    budget: SearchBudget | None = None,
) -> MigrationAdjunctionReport:
    """
    Count both sides of Σ_F ⊣ Δ_F and Δ_F ⊣ Π_F and check transposition is a bijection.

    Args:
        functor: F: S -> T
        instance: δ over S
        other: ε over T
    """
    sigma = left_kan_extension(functor, instance)
    pi = right_kan_extension(functor, instance)
    pulled = pullback_migration(functor, other)

    sigma_left = set_natural_transformations(sigma.instance, other, budget)
    sigma_right = set_natural_transformations(instance, pulled, budget)
    images = {_frozen(sigma_transpose(functor, instance, a, sigma)) for a in sigma_left}
    sigma_bijective = len(images) == len(sigma_left) and images == {
        _frozen(b) for b in sigma_right
    }

    pi_left = set_natural_transformations(pulled, instance, budget)
    pi_right = set_natural_transformations(other, pi.instance, budget)
    images = {_frozen(pi_transpose(functor, instance, b, pi)) for b in pi_right}
    pi_bijective = len(images) == len(pi_right) and images == {_frozen(a) for a in pi_left}

    logger.info(
        f"Σ: {len(sigma_left)} vs {len(sigma_right)}, Π: {len(pi_left)} vs {len(pi_right)}"
    )
    return MigrationAdjunctionReport(
        len(sigma_left),
        len(sigma_right),
        len(pi_left),
        len(pi_right),
        sigma_bijective,
        pi_bijective,
    )
