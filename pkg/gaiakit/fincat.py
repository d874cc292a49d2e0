"""
Finite categories presented by explicit composition tables.

Everything else in gaiakit is built on the types of this module: categories,
functors, natural transformations, comma categories and finite set-valued
diagrams with their limits and colimits. Identifiers of objects, morphisms
and set elements are opaque strings; equality is identifier equality.
"""

import itertools
import logging
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from gaiakit.errors import StructuralError
from gaiakit.schemas import ValidationReport, ViolationKind
from gaiakit.search import SearchBudget, backtrack

logger = logging.getLogger(__name__)


def tuple_id(*parts: str) -> str:
    """Identifier of a generated pair/triple, e.g. ``(c,d,f)``."""
    return "(" + ",".join(parts) + ")"


# --- Categories ---


@dataclass(frozen=True)
class Morphism:
    id: str
    dom: str
    cod: str


@dataclass(frozen=True)
class FinCategory:
    """
    A finite category given by its full composition table.

    ``composition[(g, f)]`` is ``g ∘ f`` and is defined exactly when
    ``dom(g) == cod(f)``. Nothing is checked at construction; use
    :func:`validate_category`.
    """

    objects: tuple[str, ...]
    morphisms: tuple[Morphism, ...]
    identity: Mapping[str, str]
    composition: Mapping[tuple[str, str], str]

    @cached_property
    def _by_id(self) -> dict[str, Morphism]:
        return {m.id: m for m in self.morphisms}

    @cached_property
    def _object_set(self) -> frozenset[str]:
        return frozenset(self.objects)

    @cached_property
    def _hom(self) -> dict[tuple[str, str], tuple[str, ...]]:
        hom: dict[tuple[str, str], list[str]] = defaultdict(list)
        for m in self.morphisms:
            hom[(m.dom, m.cod)].append(m.id)
        return {key: tuple(value) for key, value in hom.items()}

    @cached_property
    def _out(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = defaultdict(list)
        for m in self.morphisms:
            out[m.dom].append(m.id)
        return {key: tuple(value) for key, value in out.items()}

    @cached_property
    def identities(self) -> frozenset[str]:
        return frozenset(self.identity.values())

    def has_object(self, a: str) -> bool:
        return a in self._object_set

    def morphism(self, f: str) -> Morphism:
        try:
            return self._by_id[f]
        except KeyError:
            raise StructuralError(f"unknown morphism '{f}'") from None

    def dom(self, f: str) -> str:
        return self.morphism(f).dom

    def cod(self, f: str) -> str:
        return self.morphism(f).cod

    def id(self, a: str) -> str:
        if a not in self._object_set:
            raise StructuralError(f"unknown object '{a}'")
        return self.identity[a]

    def is_identity(self, f: str) -> bool:
        return f in self.identities

    def compose(self, g: str, f: str) -> str:
        """Return ``g ∘ f``."""
        try:
            return self.composition[(g, f)]
        except KeyError:
            raise StructuralError(f"'{g}' and '{f}' are not composable") from None

    def hom(self, a: str, b: str) -> tuple[str, ...]:
        for x in (a, b):
            if x not in self._object_set:
                raise StructuralError(f"unknown object '{x}'")
        return self._hom.get((a, b), ())

    def out_of(self, a: str) -> tuple[str, ...]:
        return self._out.get(a, ())

    def is_thin(self) -> bool:
        return all(len(fs) <= 1 for fs in self._hom.values())


def hom_set(c: FinCategory, a: str, b: str) -> tuple[str, ...]:
    """Morphisms of ``c`` with domain ``a`` and codomain ``b``."""
    return c.hom(a, b)


def validate_category(c: FinCategory) -> ValidationReport:
    """
    Check the category axioms on a finite presentation.

    Dangling identifiers and non-total tables are reported as structural
    errors; the axioms are only checked once the structure is sound.

    Returns:
        A report listing every violated axiom instance
    """
    report = ValidationReport()
    objects = set(c.objects)
    if len(objects) != len(c.objects):
        report.structural.append("duplicate object identifiers")
    morphism_ids = [m.id for m in c.morphisms]
    if len(set(morphism_ids)) != len(morphism_ids):
        report.structural.append("duplicate morphism identifiers")
    shared = objects & set(morphism_ids)
    if shared:
        report.structural.append(
            f"identifiers used for both objects and morphisms: {sorted(shared)}"
        )
    for m in c.morphisms:
        for end in (m.dom, m.cod):
            if end not in objects:
                report.structural.append(f"morphism '{m.id}' uses unknown object '{end}'")
    for a in c.objects:
        if a not in c.identity:
            report.structural.append(f"object '{a}' has no identity")
    for a, i in c.identity.items():
        if a not in objects:
            report.structural.append(f"identity given for unknown object '{a}'")
        if i not in c._by_id:
            report.structural.append(f"identity of '{a}' is unknown morphism '{i}'")
    for (g, f), gf in c.composition.items():
        unknown = [x for x in (g, f, gf) if x not in c._by_id]
        if unknown:
            report.structural.append(
                f"compose entry ({g}, {f}) uses unknown morphisms {unknown}"
            )
        elif c.dom(g) != c.cod(f):
            report.structural.append(
                f"compose entry ({g}, {f}) is given for a non-composable pair"
            )
    if report.structural:
        return report

    for f in morphism_ids:
        for g in c.out_of(c.cod(f)):
            if (g, f) not in c.composition:
                report.structural.append(f"compose table is missing ({g}, {f})")
    if report.structural:
        return report

    for a, i in c.identity.items():
        m = c.morphism(i)
        if m.dom != a or m.cod != a:
            report.add(
                ViolationKind.IDENTITY, f"identity '{i}' of '{a}' is not an endomorphism of '{a}'"
            )
    for m in c.morphisms:
        left = c.composition.get((c.identity[m.cod], m.id))
        if left is not None and left != m.id:
            report.add(ViolationKind.IDENTITY, f"id ∘ {m.id} = {left}")
        right = c.composition.get((m.id, c.identity[m.dom]))
        if right is not None and right != m.id:
            report.add(ViolationKind.IDENTITY, f"{m.id} ∘ id = {right}")
    for (g, f), gf in c.composition.items():
        composite = c.morphism(gf)
        if composite.dom != c.dom(f) or composite.cod != c.cod(g):
            report.add(
                ViolationKind.COHERENCE,
                f"{g} ∘ {f} = {gf} has type {composite.dom} -> {composite.cod}, "
                f"expected {c.dom(f)} -> {c.cod(g)}",
            )
    # A composite of the wrong type was reported above; skip the triples it breaks.
    for (g, f), gf in c.composition.items():
        for h in c.out_of(c.cod(g)):
            left = c.composition.get((h, gf))
            right = c.composition.get((c.composition[(h, g)], f))
            if left is not None and right is not None and left != right:
                report.add(
                    ViolationKind.ASSOCIATIVITY,
                    f"{h} ∘ ({g} ∘ {f}) = {left} but ({h} ∘ {g}) ∘ {f} = {right}",
                )
    return report


# --- Builders ---


def discrete_category(objects: Iterable[str]) -> FinCategory:
    objects = tuple(objects)
    morphisms = tuple(Morphism(f"id_{a}", a, a) for a in objects)
    identity = {a: f"id_{a}" for a in objects}
    composition = {(f"id_{a}", f"id_{a}"): f"id_{a}" for a in objects}
    return FinCategory(objects, morphisms, identity, composition)


def terminal_category() -> FinCategory:
    return discrete_category(["*"])


def poset_category(elements: Iterable[str], leq: Iterable[tuple[str, str]]) -> FinCategory:
    """
    The thin category of a finite preorder.

    The reflexive-transitive closure of ``leq`` is taken, so any generating
    relation will do. The morphism ``a -> b`` exists iff ``a <= b``.
    """
    elements = tuple(elements)
    graph = nx.DiGraph()
    graph.add_nodes_from(elements)
    graph.add_edges_from(leq)
    unknown = set(graph.nodes) - set(elements)
    if unknown:
        raise StructuralError(f"order relation uses unknown elements {sorted(unknown)}")
    closure = nx.transitive_closure(graph, reflexive=True)

    def arrow(a: str, b: str) -> str:
        return f"{a}->{b}"

    pairs = [(a, b) for a in elements for b in elements if closure.has_edge(a, b)]
    morphisms = tuple(Morphism(arrow(a, b), a, b) for a, b in pairs)
    identity = {a: arrow(a, a) for a in elements}
    composition = {
        (arrow(b, c), arrow(a, b)): arrow(a, c)
        for a, b in pairs
        for c in elements
        if closure.has_edge(b, c)
    }
    return FinCategory(elements, morphisms, identity, composition)


def chain_category(n: int) -> FinCategory:
    """The ordinal [n] = {0 < 1 < ... < n} as a category."""
    elements = [str(i) for i in range(n + 1)]
    return poset_category(elements, zip(elements, elements[1:]))


def monoid_category(
    elements: Sequence[str],
    table: Mapping[tuple[str, str], str],
    unit: str,
    obj: str = "*",
) -> FinCategory:
    """One-object category of a finite monoid; ``table[(g, f)] = g·f``."""
    morphisms = tuple(Morphism(e, obj, obj) for e in elements)
    return FinCategory((obj,), morphisms, {obj: unit}, dict(table))


def free_category(
    vertices: Iterable[str], edges: Iterable[tuple[str, str, str]]
) -> FinCategory:
    """
    Free category on a finite acyclic graph.

    Args:
        vertices: Graph vertices (the objects)
        edges: ``(edge_id, source, target)`` triples (the generators)

    Returns:
        The category whose morphisms are the paths of the graph. A path is
        named by its edges in traversal order joined with ``.``; the empty
        path at ``v`` is ``id_v``.
    """
    vertices = tuple(vertices)
    graph = nx.MultiDiGraph()
    graph.add_nodes_from(vertices)
    for key, source, target in edges:
        graph.add_edge(source, target, key=key)
    if set(graph.nodes) != set(vertices):
        raise StructuralError("edges use unknown vertices")
    if not nx.is_directed_acyclic_graph(graph):
        raise StructuralError("free categories are only finite on acyclic graphs")

    paths: dict[tuple[str, ...], Morphism] = {}
    identity = {v: f"id_{v}" for v in vertices}
    morphisms = [Morphism(identity[v], v, v) for v in vertices]
    for source in vertices:
        for target in vertices:
            if source == target:
                continue
            for path in nx.all_simple_edge_paths(graph, source, target):
                keys = tuple(key for _, _, key in path)
                paths[keys] = Morphism(".".join(keys), source, target)
    morphisms.extend(paths[keys] for keys in sorted(paths))

    composition: dict[tuple[str, str], str] = {}
    by_vertex_out: dict[str, list[tuple[tuple[str, ...], Morphism]]] = defaultdict(list)
    for keys, m in paths.items():
        by_vertex_out[m.dom].append((keys, m))
    for m in morphisms:
        composition[(identity[m.cod], m.id)] = m.id
        composition[(m.id, identity[m.dom])] = m.id
    for keys_f, f in paths.items():
        for keys_g, g in by_vertex_out[f.cod]:
            composition[(g.id, f.id)] = paths[keys_f + keys_g].id
    return FinCategory(vertices, tuple(morphisms), identity, composition)


def opposite(c: FinCategory) -> FinCategory:
    morphisms = tuple(Morphism(m.id, m.cod, m.dom) for m in c.morphisms)
    composition = {(f, g): gf for (g, f), gf in c.composition.items()}
    return FinCategory(c.objects, morphisms, dict(c.identity), composition)


# --- Functors ---


@dataclass(frozen=True)
class FinFunctor:
    source: FinCategory
    target: FinCategory
    object_map: Mapping[str, str]
    morphism_map: Mapping[str, str]

    def on_object(self, a: str) -> str:
        try:
            return self.object_map[a]
        except KeyError:
            raise StructuralError(f"functor is undefined on object '{a}'") from None

    def on_morphism(self, f: str) -> str:
        try:
            return self.morphism_map[f]
        except KeyError:
            raise StructuralError(f"functor is undefined on morphism '{f}'") from None


def identity_functor(c: FinCategory) -> FinFunctor:
    return FinFunctor(
        c, c, {a: a for a in c.objects}, {m.id: m.id for m in c.morphisms}
    )


def point_functor(c: FinCategory, a: str) -> FinFunctor:
    """The functor from the terminal category picking the object ``a``."""
    one = terminal_category()
    return FinFunctor(one, c, {"*": a}, {"id_*": c.id(a)})


def compose_functors(g: FinFunctor, f: FinFunctor) -> FinFunctor:
    """Return ``g ∘ f``."""
    return FinFunctor(
        f.source,
        g.target,
        {a: g.on_object(b) for a, b in f.object_map.items()},
        {m: g.on_morphism(n) for m, n in f.morphism_map.items()},
    )


def validate_functor(functor: FinFunctor) -> ValidationReport:
    """List every way ``functor`` fails to preserve types, identities or composites."""
    report = ValidationReport()
    source, target = functor.source, functor.target
    for a in source.objects:
        if a not in functor.object_map:
            report.structural.append(f"object '{a}' is not mapped")
        elif not target.has_object(functor.object_map[a]):
            report.structural.append(
                f"object '{a}' is mapped to unknown object '{functor.object_map[a]}'"
            )
    for m in source.morphisms:
        if m.id not in functor.morphism_map:
            report.structural.append(f"morphism '{m.id}' is not mapped")
        elif functor.morphism_map[m.id] not in target._by_id:
            report.structural.append(
                f"morphism '{m.id}' is mapped to unknown morphism '{functor.morphism_map[m.id]}'"
            )
    extra = set(functor.object_map) - set(source.objects)
    extra |= set(functor.morphism_map) - set(source._by_id)
    if extra:
        report.structural.append(f"maps identifiers outside the source: {sorted(extra)}")
    if report.structural:
        return report

    for m in source.morphisms:
        image = target.morphism(functor.morphism_map[m.id])
        if image.dom != functor.object_map[m.dom] or image.cod != functor.object_map[m.cod]:
            report.add(
                ViolationKind.FUNCTORIALITY,
                f"F({m.id}) = {image.id} is not a morphism "
                f"{functor.object_map[m.dom]} -> {functor.object_map[m.cod]}",
            )
    for a in source.objects:
        image = functor.morphism_map[source.identity[a]]
        if image != target.identity[functor.object_map[a]]:
            report.add(ViolationKind.FUNCTORIALITY, f"F(id_{a}) = {image} is not an identity")
    for (g, f), gf in source.composition.items():
        fg, ff = functor.morphism_map[g], functor.morphism_map[f]
        composite = target.composition.get((fg, ff))
        if composite is not None and composite != functor.morphism_map[gf]:
            report.add(
                ViolationKind.FUNCTORIALITY,
                f"F({g} ∘ {f}) = {functor.morphism_map[gf]} but F({g}) ∘ F({f}) = {composite}",
            )
    return report


def _hom_images(functor: FinFunctor) -> Iterable[tuple[tuple[str, ...], tuple[str, ...]]]:
    """Pairs (image of hom(a, b), hom(Fa, Fb)) for every pair of objects."""
    for a in functor.source.objects:
        for b in functor.source.objects:
            images = tuple(functor.on_morphism(f) for f in functor.source.hom(a, b))
            yield images, functor.target.hom(functor.on_object(a), functor.on_object(b))


def is_faithful(functor: FinFunctor) -> bool:
    return all(len(set(images)) == len(images) for images, _ in _hom_images(functor))


def is_full(functor: FinFunctor) -> bool:
    return all(set(images) == set(hom) for images, hom in _hom_images(functor))


def is_fully_faithful(functor: FinFunctor) -> bool:
    return is_faithful(functor) and is_full(functor)


def functors_between(
    source: FinCategory, target: FinCategory, budget: SearchBudget | None = None
) -> list[FinFunctor]:
    """
    Every functor ``source -> target``, by exhaustive search.

    Objects are assigned first, then non-identity morphisms; composites are
    checked as soon as all three morphisms of a table entry are assigned.
    """
    budget = budget or SearchBudget("functors_between")
    non_identities = [m.id for m in source.morphisms if not source.is_identity(m.id)]
    variables: list[tuple[str, str]] = [("obj", a) for a in source.objects]
    variables += [("mor", f) for f in non_identities]
    constraints: dict[str, list[tuple[str, str, str]]] = defaultdict(list)
    for (g, f), gf in source.composition.items():
        for m in {g, f, gf}:
            constraints[m].append((g, f, gf))

    def image(f: str, partial: dict) -> str | None:
        if source.is_identity(f):
            a = source.dom(f)
            obj = partial.get(("obj", a))
            return None if obj is None else target.identity[obj]
        return partial.get(("mor", f))

    def candidates(var: tuple[str, str], partial: dict) -> Iterable[str]:
        kind, name = var
        if kind == "obj":
            return target.objects
        m = source.morphism(name)
        return target.hom(partial[("obj", m.dom)], partial[("obj", m.cod)])

    def consistent(var: tuple[str, str], value: str, partial: dict) -> bool:
        kind, name = var
        if kind == "obj":
            return True
        for g, f, gf in constraints[name]:
            parts = [image(x, partial) for x in (g, f, gf)]
            if None in parts:
                continue
            if target.composition.get((parts[0], parts[1])) != parts[2]:
                return False
        return True

    functors = []
    for assignment in backtrack(variables, candidates, consistent, budget):
        object_map = {a: assignment[("obj", a)] for a in source.objects}
        morphism_map = {
            m.id: image(m.id, assignment) for m in source.morphisms
        }
        functors.append(FinFunctor(source, target, object_map, morphism_map))
    return functors


# --- Natural transformations ---


@dataclass(frozen=True)
class NaturalTransformation:
    source: FinFunctor
    target: FinFunctor
    components: Mapping[str, str]


def validate_natural_transformation(alpha: NaturalTransformation) -> ValidationReport:
    report = ValidationReport()
    f, g = alpha.source, alpha.target
    if f.source != g.source or f.target != g.target:
        report.structural.append("functors are not parallel")
        return report
    domain, codomain = f.source, f.target
    for a in domain.objects:
        component = alpha.components.get(a)
        if component is None:
            report.structural.append(f"no component at '{a}'")
        elif component not in codomain._by_id:
            report.structural.append(f"component at '{a}' is unknown morphism '{component}'")
        elif (codomain.dom(component), codomain.cod(component)) != (
            f.on_object(a),
            g.on_object(a),
        ):
            report.structural.append(f"component at '{a}' has the wrong type")
    if report.structural:
        return report
    for m in domain.morphisms:
        left = codomain.compose(g.on_morphism(m.id), alpha.components[m.dom])
        right = codomain.compose(alpha.components[m.cod], f.on_morphism(m.id))
        if left != right:
            report.add(
                ViolationKind.NATURALITY,
                f"square at '{m.id}' does not commute: {left} != {right}",
            )
    return report


def inverse(c: FinCategory, f: str) -> str | None:
    """The inverse of ``f``, or None when ``f`` is not an isomorphism."""
    m = c.morphism(f)
    for g in c.hom(m.cod, m.dom):
        if c.compose(g, f) == c.id(m.dom) and c.compose(f, g) == c.id(m.cod):
            return g
    return None


def is_isomorphism(c: FinCategory, f: str) -> bool:
    return inverse(c, f) is not None


def is_retract(c: FinCategory, i: str, r: str) -> bool:
    """True iff ``r ∘ i`` is the identity, i.e. dom(i) is a retract of cod(i)."""
    if c.dom(r) != c.cod(i) or c.cod(r) != c.dom(i):
        return False
    return c.compose(r, i) == c.id(c.dom(i))


def is_natural_isomorphism(alpha: NaturalTransformation) -> bool:
    if not validate_natural_transformation(alpha).valid:
        return False
    codomain = alpha.source.target
    return all(is_isomorphism(codomain, f) for f in alpha.components.values())


# --- Comma categories and pullbacks ---


@dataclass(frozen=True)
class CommaCategory:
    """``F ↓ G`` with its projections and the triple behind each object id."""

    category: FinCategory
    left: FinFunctor
    right: FinFunctor
    triples: Mapping[str, tuple[str, str, str]]


def comma_category(f: FinFunctor, g: FinFunctor) -> CommaCategory:
    """
    The comma category ``F ↓ G`` for ``F: C -> E`` and ``G: D -> E``.

    Objects are triples ``(c, d, h: Fc -> Gd)``; a morphism
    ``(c, d, h) -> (c', d', h')`` is a pair ``(u, v)`` with
    ``G(v) ∘ h = h' ∘ F(u)``.
    """
    if f.target != g.target:
        raise StructuralError("comma category needs functors with a common target")
    c, d, e = f.source, g.source, f.target
    triples: dict[str, tuple[str, str, str]] = {}
    for a in c.objects:
        for b in d.objects:
            for h in e.hom(f.on_object(a), g.on_object(b)):
                triples[tuple_id(a, b, h)] = (a, b, h)

    def arrow(u: str, v: str, src: str, tgt: str) -> str:
        return f"{tuple_id(u, v)}:{src}->{tgt}"

    morphisms: list[Morphism] = []
    pairs: dict[str, tuple[str, str]] = {}
    for src, (a, b, h) in triples.items():
        for tgt, (a2, b2, h2) in triples.items():
            for u in c.hom(a, a2):
                for v in d.hom(b, b2):
                    if e.compose(g.on_morphism(v), h) == e.compose(h2, f.on_morphism(u)):
                        m = Morphism(arrow(u, v, src, tgt), src, tgt)
                        morphisms.append(m)
                        pairs[m.id] = (u, v)
    identity = {
        o: arrow(c.id(a), d.id(b), o, o) for o, (a, b, _) in triples.items()
    }
    out: dict[str, list[Morphism]] = defaultdict(list)
    for m in morphisms:
        out[m.dom].append(m)
    composition = {}
    for m1 in morphisms:
        u1, v1 = pairs[m1.id]
        for m2 in out[m1.cod]:
            u2, v2 = pairs[m2.id]
            composition[(m2.id, m1.id)] = arrow(
                c.compose(u2, u1), d.compose(v2, v1), m1.dom, m2.cod
            )
    category = FinCategory(tuple(triples), tuple(morphisms), identity, composition)
    left = FinFunctor(
        category,
        c,
        {o: t[0] for o, t in triples.items()},
        {m: p[0] for m, p in pairs.items()},
    )
    right = FinFunctor(
        category,
        d,
        {o: t[1] for o, t in triples.items()},
        {m: p[1] for m, p in pairs.items()},
    )
    logger.debug(f"comma category with {len(triples)} objects, {len(morphisms)} morphisms")
    return CommaCategory(category, left, right, triples)


def category_pullback(
    f: FinFunctor, g: FinFunctor
) -> tuple[FinCategory, FinFunctor, FinFunctor]:
    """Strict pullback ``A ×_C B`` of ``F: A -> C`` and ``G: B -> C``."""
    if f.target != g.target:
        raise StructuralError("pullback needs functors with a common target")
    a, b = f.source, g.source
    objects = [
        (x, y) for x in a.objects for y in b.objects if f.on_object(x) == g.on_object(y)
    ]
    pairs = [
        (u, v)
        for u in a.morphisms
        for v in b.morphisms
        if f.on_morphism(u.id) == g.on_morphism(v.id)
        and (u.dom, v.dom) in objects
        and (u.cod, v.cod) in objects
    ]
    morphisms = tuple(
        Morphism(tuple_id(u.id, v.id), tuple_id(u.dom, v.dom), tuple_id(u.cod, v.cod))
        for u, v in pairs
    )
    identity = {tuple_id(x, y): tuple_id(a.id(x), b.id(y)) for x, y in objects}
    composition = {}
    for u1, v1 in pairs:
        for u2, v2 in pairs:
            if u2.dom == u1.cod and v2.dom == v1.cod:
                composition[(tuple_id(u2.id, v2.id), tuple_id(u1.id, v1.id))] = tuple_id(
                    a.compose(u2.id, u1.id), b.compose(v2.id, v1.id)
                )
    category = FinCategory(
        tuple(tuple_id(x, y) for x, y in objects), morphisms, identity, composition
    )
    left = FinFunctor(
        category,
        a,
        {tuple_id(x, y): x for x, y in objects},
        {tuple_id(u.id, v.id): u.id for u, v in pairs},
    )
    right = FinFunctor(
        category,
        b,
        {tuple_id(x, y): y for x, y in objects},
        {tuple_id(u.id, v.id): v.id for u, v in pairs},
    )
    return category, left, right


# --- Universal arrows and adjunctions ---


def is_universal_arrow(s: FinFunctor, c: str, r: str, u: str) -> bool:
    """
    Whether ``(r, u: c -> S r)`` is a universal arrow from ``c`` to ``S``.

    Every ``f: c -> S d`` must factor as ``S(f') ∘ u`` for exactly one
    ``f': r -> d``.
    """
    cat_c, cat_d = s.target, s.source
    for d in cat_d.objects:
        for f in cat_c.hom(c, s.on_object(d)):
            factorizations = [
                f2
                for f2 in cat_d.hom(r, d)
                if cat_c.compose(s.on_morphism(f2), u) == f
            ]
            if len(factorizations) != 1:
                return False
    return True


@dataclass
class AdjunctionReport:
    holds: bool
    unit: dict[str, str] | None = None
    failure: str | None = None


def check_adjunction(
    left: FinFunctor, right: FinFunctor, budget: SearchBudget | None = None
) -> AdjunctionReport:
    """
    Decide whether ``left ⊣ right`` for ``left: C -> D`` and ``right: D -> C``.

    Hom-set sizes are compared first. A unit is then searched among the
    universal arrows ``η_c: c -> GFc`` and must be natural in ``c``.
    """
    c, d = left.source, left.target
    if right.source != d or right.target != c:
        raise StructuralError("functors do not form a pair C -> D -> C")
    for x in c.objects:
        for y in d.objects:
            n_left = len(d.hom(left.on_object(x), y))
            n_right = len(c.hom(x, right.on_object(y)))
            if n_left != n_right:
                return AdjunctionReport(
                    False, failure=f"|D(F{x}, {y})| = {n_left} but |C({x}, G{y})| = {n_right}"
                )
    gf = compose_functors(right, left)
    universal = {
        x: [
            u
            for u in c.hom(x, gf.on_object(x))
            if is_universal_arrow(right, x, left.on_object(x), u)
        ]
        for x in c.objects
    }
    empty = [x for x, us in universal.items() if not us]
    if empty:
        return AdjunctionReport(False, failure=f"no universal arrow from '{empty[0]}'")

    def consistent(x: str, u: str, partial: dict) -> bool:
        for m in c.morphisms:
            if m.dom in partial and m.cod in partial and x in (m.dom, m.cod):
                lhs = c.compose(gf.on_morphism(m.id), partial[m.dom])
                rhs = c.compose(partial[m.cod], m.id)
                if lhs != rhs:
                    return False
        return True

    search = backtrack(
        list(c.objects),
        lambda x, partial: universal[x],
        consistent,
        budget or SearchBudget("check_adjunction"),
    )
    unit = next(search, None)
    if unit is None:
        return AdjunctionReport(False, failure="no natural family of universal arrows")
    return AdjunctionReport(True, unit=unit)


def is_galois_connection(left: FinFunctor, right: FinFunctor) -> bool:
    """``f(p) <= q`` iff ``p <= g(q)``, for monotone maps between preorders."""
    p, q = left.source, left.target
    if not (p.is_thin() and q.is_thin()):
        raise StructuralError("Galois connections are defined between preorders")
    return all(
        bool(q.hom(left.on_object(x), y)) == bool(p.hom(x, right.on_object(y)))
        for x in p.objects
        for y in q.objects
    )


# --- Set-valued diagrams ---


@dataclass(frozen=True)
class SetDiagram:
    """A functor from a finite category to finite sets."""

    shape: FinCategory
    sets: Mapping[str, tuple[str, ...]]
    functions: Mapping[str, Mapping[str, str]]

    def apply(self, f: str, x: str) -> str:
        try:
            return self.functions[f][x]
        except KeyError:
            raise StructuralError(f"function of '{f}' is undefined at '{x}'") from None


def validate_set_diagram(d: SetDiagram) -> ValidationReport:
    report = ValidationReport()
    shape = d.shape
    for a in shape.objects:
        if a not in d.sets:
            report.structural.append(f"no set at object '{a}'")
    for m in shape.morphisms:
        if m.id not in d.functions:
            report.structural.append(f"no function at morphism '{m.id}'")
            continue
        if m.dom not in d.sets or m.cod not in d.sets:
            continue
        table = d.functions[m.id]
        if set(table) != set(d.sets[m.dom]):
            report.structural.append(f"function of '{m.id}' is not total on {m.dom}")
        outside = set(table.values()) - set(d.sets[m.cod])
        if outside:
            report.structural.append(
                f"function of '{m.id}' leaves {m.cod}: {sorted(outside)}"
            )
    if report.structural:
        return report
    for a in shape.objects:
        table = d.functions[shape.identity[a]]
        if any(table[x] != x for x in d.sets[a]):
            report.add(ViolationKind.FUNCTORIALITY, f"identity of '{a}' acts non-trivially")
    for (g, f), gf in shape.composition.items():
        for x in d.sets[shape.dom(f)]:
            if d.functions[gf][x] != d.functions[g][d.functions[f][x]]:
                report.add(
                    ViolationKind.FUNCTORIALITY,
                    f"({g} ∘ {f})({x}) differs from {g}({f}({x}))",
                )
                break
    return report


@dataclass(frozen=True)
class Colimit:
    elements: tuple[str, ...]
    injections: Mapping[str, Mapping[str, str]]
    # canonical class -> (object, element) it is named after
    representatives: Mapping[str, tuple[str, str]]


@dataclass(frozen=True)
class Limit:
    elements: tuple[str, ...]
    projections: Mapping[str, Mapping[str, str]]
    families: Mapping[str, Mapping[str, str]]


def _tagged(a: str, x: str) -> str:
    return f"{x}@{a}"


def set_colimit(d: SetDiagram) -> Colimit:
    """
    Colimit of a finite set-valued diagram.

    The disjoint union of all sets is quotiented by the equivalence generated
    by ``x ~ d(f)(x)``. Each class is named by its least member ``x@object``.
    """
    graph = nx.Graph()
    for a in d.shape.objects:
        graph.add_nodes_from((a, x) for x in d.sets[a])
    for m in d.shape.morphisms:
        for x in d.sets[m.dom]:
            graph.add_edge((m.dom, x), (m.cod, d.apply(m.id, x)))

    injections: dict[str, dict[str, str]] = {a: {} for a in d.shape.objects}
    representatives: dict[str, tuple[str, str]] = {}
    for component in nx.connected_components(graph):
        a, x = min(component, key=lambda node: _tagged(*node))
        name = _tagged(a, x)
        representatives[name] = (a, x)
        for b, y in component:
            injections[b][y] = name
    return Colimit(tuple(sorted(representatives)), injections, representatives)


def set_limit(d: SetDiagram, budget: SearchBudget | None = None) -> Limit:
    """
    Limit of a finite set-valued diagram: all compatible families.

    A family ``(x_a)`` is compatible when ``d(f)(x_a) = x_b`` for every
    ``f: a -> b``. Families are named ``(x_a, x_b, ...)`` in object order.
    """
    shape = d.shape
    by_object: dict[str, list[str]] = defaultdict(list)
    for m in shape.morphisms:
        by_object[m.dom].append(m.id)
        by_object[m.cod].append(m.id)

    def consistent(a: str, x: str, partial: dict) -> bool:
        for f in by_object[a]:
            m = shape.morphism(f)
            if m.dom in partial and m.cod in partial:
                if d.apply(f, partial[m.dom]) != partial[m.cod]:
                    return False
        return True

    families: dict[str, dict[str, str]] = {}
    for family in backtrack(
        list(shape.objects),
        lambda a, partial: d.sets[a],
        consistent,
        budget or SearchBudget("set_limit"),
    ):
        families[tuple_id(*(family[a] for a in shape.objects))] = family
    projections = {
        a: {name: family[a] for name, family in families.items()} for a in shape.objects
    }
    return Limit(tuple(families), projections, families)


def set_natural_transformations(
    source: SetDiagram, target: SetDiagram, budget: SearchBudget | None = None
) -> list[dict[str, dict[str, str]]]:
    """
    Every natural transformation between two set-valued functors.

    Components are assigned element by element; the naturality equation
    ``α_b(F f (x)) = G f (α_a(x))`` is checked as soon as both sides are known.
    """
    if source.shape != target.shape:
        raise StructuralError("natural transformations need functors on the same shape")
    shape = source.shape
    variables = [(a, x) for a in shape.objects for x in source.sets[a]]
    constraints: dict[tuple[str, str], list[tuple[tuple[str, str], tuple[str, str], str]]]
    constraints = defaultdict(list)
    for m in shape.morphisms:
        for x in source.sets[m.dom]:
            lhs = (m.cod, source.apply(m.id, x))
            rhs = (m.dom, x)
            constraints[lhs].append((lhs, rhs, m.id))
            constraints[rhs].append((lhs, rhs, m.id))

    def consistent(var: tuple[str, str], value: str, partial: dict) -> bool:
        for lhs, rhs, f in constraints[var]:
            if lhs in partial and rhs in partial:
                if partial[lhs] != target.apply(f, partial[rhs]):
                    return False
        return True

    found = []
    for assignment in backtrack(
        variables,
        lambda var, partial: target.sets[var[0]],
        consistent,
        budget or SearchBudget("set_natural_transformations"),
    ):
        components: dict[str, dict[str, str]] = {a: {} for a in shape.objects}
        for (a, x), y in assignment.items():
            components[a][x] = y
        found.append(components)
    return found


def representable(c: FinCategory, a: str) -> SetDiagram:
    """The covariant hom functor ``c(a, -)``."""
    sets = {b: c.hom(a, b) for b in c.objects}
    functions = {
        m.id: {g: c.compose(m.id, g) for g in sets[m.dom]} for m in c.morphisms
    }
    return SetDiagram(c, sets, functions)


@dataclass
class YonedaReport:
    transformations: int
    elements: int
    bijective: bool


def check_yoneda(c: FinCategory, a: str, functor: SetDiagram) -> YonedaReport:
    """Verify ``Nat(c(a, -), F) ≅ F(a)`` through ``α ↦ α_a(id_a)``."""
    transformations = set_natural_transformations(representable(c, a), functor)
    images = [alpha[a][c.id(a)] for alpha in transformations]
    bijective = sorted(images) == sorted(functor.sets[a])
    return YonedaReport(len(transformations), len(functor.sets[a]), bijective)


def all_functions(domain: Sequence[str], codomain: Sequence[str]) -> Iterable[dict[str, str]]:
    """Every function between two finite sets, as dicts."""
    for values in itertools.product(codomain, repeat=len(domain)):
        yield dict(zip(domain, values))
