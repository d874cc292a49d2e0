"""
Generalized metric spaces and their Yoneda embedding.

Distances may be non-symmetric and infinite. They are exact: finite values
are ``Fraction``s and infinity is ``math.inf``. Addition absorbs infinity;
truncated subtraction ``a ⊖ b = max(a - b, 0)`` takes ``∞ ⊖ ∞ = 0``.
"""

import itertools
import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import networkx as nx

from gaiakit.errors import StructuralError, ValidationError
from gaiakit.schemas import ValidationReport, ViolationKind

logger = logging.getLogger(__name__)

Distance = Fraction | float
INF = math.inf
ZERO = Fraction(0)


def dadd(a: Distance, b: Distance) -> Distance:
    if a == INF or b == INF:
        return INF
    return a + b


def dsub(a: Distance, b: Distance) -> Distance:
    """Truncated subtraction ``a ⊖ b``: the halfline distance from b to a."""
    if b == INF:
        return ZERO
    if a == INF:
        return INF
    return max(a - b, ZERO)


def as_distance(value) -> Distance:
    """Exact distance from an int, a string such as ``"1/4"`` or ``"inf"``, or a Fraction."""
    if value == INF or value == "inf":
        return INF
    if isinstance(value, float):
        raise ValidationError(f"distance {value!r} is not exact; use a rational string")
    return Fraction(value)


class SpaceKind(str, Enum):
    PREORDER = "preorder"
    STRINGS = "strings"
    HALFLINE = "halfline"
    HAUSDORFF_POWER = "hausdorff_power"
    TABLE = "table"


@dataclass(frozen=True)
class GenMetricSpace:
    carrier: tuple[str, ...]
    distance: Mapping[tuple[str, str], Distance]

    def d(self, x: str, y: str) -> Distance:
        try:
            return self.distance[(x, y)]
        except KeyError:
            raise StructuralError(f"no distance from '{x}' to '{y}'") from None

    def __contains__(self, x: str) -> bool:
        return x in self.carrier


def validate_space(space: GenMetricSpace) -> ValidationReport:
    """Zero self-distance and the triangle inequality, over every pair and triple."""
    report = ValidationReport()
    for x, y in itertools.product(space.carrier, repeat=2):
        value = space.distance.get((x, y))
        if value is None:
            report.structural.append(f"missing distance ({x}, {y})")
        elif value < 0:
            report.structural.append(f"negative distance ({x}, {y})")
    if report.structural:
        return report
    for x in space.carrier:
        if space.d(x, x) != 0:
            report.add(ViolationKind.METRIC, f"d({x}, {x}) = {space.d(x, x)}")
    for x, y, z in itertools.product(space.carrier, repeat=3):
        if space.d(x, z) > dadd(space.d(x, y), space.d(y, z)):
            report.add(ViolationKind.METRIC, f"triangle fails for ({x}, {y}, {z})")
    return report


def _require_valid(space: GenMetricSpace) -> None:
    report = validate_space(space)
    if not report.valid:
        problems = report.structural or [v.detail for v in report.violations]
        raise ValidationError(f"not a generalized metric space: {problems[0]}")


# --- Standard constructions ---


def preorder_space(elements: Sequence[str], leq: Iterable[tuple[str, str]]) -> GenMetricSpace:
    """``d(p, q) = 0`` if ``p <= q`` and ∞ otherwise. ``leq`` must be transitive."""
    order = set(leq) | {(a, a) for a in elements}
    unknown = {x for pair in order for x in pair} - set(elements)
    if unknown:
        raise StructuralError(f"order relation uses unknown elements {sorted(unknown)}")
    for (a, b), (b2, c) in itertools.product(order, repeat=2):
        if b == b2 and (a, c) not in order:
            raise ValidationError(f"relation is not transitive: {a} <= {b} <= {c}")
    distance = {
        (p, q): ZERO if (p, q) in order else INF for p, q in itertools.product(elements, repeat=2)
    }
    return GenMetricSpace(tuple(elements), distance)


def _common_prefix(u: str, v: str) -> int:
    n = 0
    for a, b in zip(u, v):
        if a != b:
            break
        n += 1
    return n


def string_space(strings: Sequence[str], alphabet: str | None = None) -> GenMetricSpace:
    """
    ``d(u, v) = 0`` if u is a prefix of v, else ``2^-n`` where n is the length
    of the longest common prefix.
    """
    if alphabet is not None:
        for s in strings:
            stray = set(s) - set(alphabet)
            if stray:
                raise ValidationError(f"'{s}' uses letters outside the alphabet: {sorted(stray)}")
    distance = {
        (u, v): ZERO if v.startswith(u) else Fraction(1, 2 ** _common_prefix(u, v))
        for u, v in itertools.product(strings, repeat=2)
    }
    return GenMetricSpace(tuple(strings), distance)


def halfline_space(points: Sequence[str]) -> GenMetricSpace:
    """Points of [0, ∞) with ``d(u, v) = max(v - u, 0)``."""
    values = {p: as_distance(p) for p in points}
    distance = {
        (u, v): dsub(values[v], values[u]) for u, v in itertools.product(points, repeat=2)
    }
    return GenMetricSpace(tuple(points), distance)


def line_space(points: Sequence[str]) -> GenMetricSpace:
    """Points of the real line with the symmetric distance ``|x - y|``."""
    values = {p: Fraction(p) for p in points}
    distance = {
        (u, v): abs(values[u] - values[v]) for u, v in itertools.product(points, repeat=2)
    }
    return GenMetricSpace(tuple(points), distance)


def subset_id(subset: Iterable[str]) -> str:
    return "{" + ",".join(subset) + "}"


def hausdorff_space(
    base: GenMetricSpace, subsets: Sequence[Sequence[str]] | None = None
) -> GenMetricSpace:
    """
    Nonempty subsets of ``base`` with the non-symmetric Hausdorff distance.

    ``d(A, B) = max_{a ∈ A} min_{b ∈ B} d(a, b)``. By default every nonempty
    subset is taken, each listed in carrier order.
    """
    if subsets is None:
        subsets = [
            combo
            for size in range(1, len(base.carrier) + 1)
            for combo in itertools.combinations(base.carrier, size)
        ]
    for subset in subsets:
        if not subset:
            raise ValidationError("Hausdorff distance is defined on nonempty subsets")
        if any(a not in base for a in subset):
            raise StructuralError(f"subset {list(subset)} leaves the base space")
    named = {subset_id(s): tuple(s) for s in subsets}
    distance = {
        (a, b): max(min(base.d(x, y) for y in named[b]) for x in named[a])
        for a, b in itertools.product(named, repeat=2)
    }
    return GenMetricSpace(tuple(named), distance)


def from_weighted_digraph(
    carrier: Sequence[str], edges: Iterable[tuple[str, str, Distance]]
) -> GenMetricSpace:
    """The shortest-path quasi-metric of a weighted directed graph; unreachable is ∞."""
    graph = nx.DiGraph()
    graph.add_nodes_from(carrier)
    for u, v, w in edges:
        graph.add_nodes_from((u, v))
        weight = as_distance(w)
        # an edge of length ∞ joins nothing
        if weight != INF:
            graph.add_edge(u, v, weight=weight)
    if set(graph.nodes) != set(carrier):
        raise StructuralError("edges use points outside the carrier")
    lengths = dict(nx.all_pairs_dijkstra_path_length(graph, weight="weight"))
    distance = {
        (x, y): Fraction(lengths[x][y]) if y in lengths[x] else INF
        for x, y in itertools.product(carrier, repeat=2)
    }
    return GenMetricSpace(tuple(carrier), distance)


def build_space(kind: SpaceKind | str, validate: bool = True, **data) -> GenMetricSpace:
    """
    Build one of the standard spaces.

    Args:
        kind: Which construction
        **data: ``elements``/``leq`` for preorders, ``strings``/``alphabet``,
            ``points`` for the halfline, ``points``/``subsets`` for the Hausdorff
            power of the line, ``carrier``/``table`` for an explicit table

    Returns:
        The space, validated unless ``validate`` is False
    """
    kind = SpaceKind(kind)
    match kind:
        case SpaceKind.PREORDER:
            space = preorder_space(data["elements"], data.get("leq", ()))
        case SpaceKind.STRINGS:
            space = string_space(data["strings"], data.get("alphabet"))
        case SpaceKind.HALFLINE:
            space = halfline_space(data["points"])
        case SpaceKind.HAUSDORFF_POWER:
            space = hausdorff_space(line_space(data["points"]), data.get("subsets"))
        case SpaceKind.TABLE:
            carrier = tuple(data["carrier"])
            if len(data["table"]) != len(carrier) or any(
                len(row) != len(carrier) for row in data["table"]
            ):
                raise StructuralError(f"distance table is not {len(carrier)} x {len(carrier)}")
            space = GenMetricSpace(
                carrier,
                {
                    (x, y): as_distance(data["table"][i][j])
                    for i, x in enumerate(carrier)
                    for j, y in enumerate(carrier)
                },
            )
    if validate:
        _require_valid(space)
    logger.debug(f"{kind.value} space on {len(space.carrier)} points")
    return space


# --- Yoneda ---


@dataclass(frozen=True)
class Copresheaf:
    """A function ``carrier -> [0, ∞]`` on a space, meant to be nonexpansive."""

    space: GenMetricSpace
    values: Mapping[str, Distance]

    def __call__(self, y: str) -> Distance:
        return self.values[y]

    def is_nonexpansive(self) -> bool:
        return all(
            dsub(self(y2), self(y)) <= self.space.d(y2, y)
            for y, y2 in itertools.product(self.space.carrier, repeat=2)
        )


def yoneda_embed(x: str, space: GenMetricSpace) -> Copresheaf:
    """The copresheaf ``y ↦ d(y, x)``."""
    if x not in space:
        raise StructuralError(f"unknown point '{x}'")
    phi = Copresheaf(space, {y: space.d(y, x) for y in space.carrier})
    if not phi.is_nonexpansive():
        raise ValidationError(f"embedding of '{x}' is not nonexpansive; is the space valid?")
    return phi


def presheaf_distance(phi: Copresheaf, psi: Copresheaf) -> Distance:
    """``sup_y ψ(y) ⊖ φ(y)``."""
    if phi.space != psi.space:
        raise StructuralError("copresheaves live on different spaces")
    return max((dsub(psi(y), phi(y)) for y in phi.space.carrier), default=ZERO)


def _deviation(a: Distance, b: Distance) -> Distance:
    if a == INF and b == INF:
        return ZERO
    if a == INF or b == INF:
        return INF
    return abs(a - b)


@dataclass
class IsometryReport:
    holds: bool
    max_deviation: Distance
    deviations: dict[tuple[str, str], Distance] = field(default_factory=dict)


def check_isometry(space: GenMetricSpace) -> IsometryReport:
    """
    Compare ``d(x, x')`` with the distance of the embedded copresheaves, for every pair.

    Raises:
        ValidationError: If the space is not a generalized metric space
    """
    _require_valid(space)
    embedded = {x: yoneda_embed(x, space) for x in space.carrier}
    deviations = {
        (x, y): _deviation(space.d(x, y), presheaf_distance(embedded[x], embedded[y]))
        for x, y in itertools.product(space.carrier, repeat=2)
    }
    worst = max(deviations.values(), default=ZERO)
    return IsometryReport(worst == 0, worst, deviations)


def check_metric_yoneda(phi: Copresheaf) -> bool:
    """``X̂(y(x), φ) = φ(x)`` for every point x."""
    return all(
        presheaf_distance(yoneda_embed(x, phi.space), phi) == phi(x) for x in phi.space.carrier
    )


def is_nonexpansive(f: Mapping[str, str], source: GenMetricSpace, target: GenMetricSpace) -> bool:
    return all(
        target.d(f[x], f[y]) <= source.d(x, y)
        for x, y in itertools.product(source.carrier, repeat=2)
    )


@dataclass
class AdjunctionReport:
    holds: bool
    counterexample: tuple[Distance, Distance, Distance] | None = None


def check_halfline_adjunction(values: Iterable[Distance]) -> AdjunctionReport:
    """``t + s >= r`` iff ``s >= r ⊖ t`` for every triple drawn from ``values``."""
    values = list(values)
    for t, s, r in itertools.product(values, repeat=3):
        if (dadd(t, s) >= r) != (s >= dsub(r, t)):
            return AdjunctionReport(False, (t, s, r))
    return AdjunctionReport(True)
