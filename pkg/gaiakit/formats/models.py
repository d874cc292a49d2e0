"""
Input file models.

Every file the CLI reads is a JSON document validated by one of these
pydantic models. Models convert to library objects with ``to_domain()``
and, where the CLI writes them back, from library objects with
``from_domain()``.
"""

from typing import Literal, Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from gaiakit.coalgebra import Coalgebra, EndofunctorSpec, FunctorKind
from gaiakit.elements import SetInstance
from gaiakit.errors import ValidationError
from gaiakit.fincat import (
    FinCategory,
    FinFunctor,
    Morphism,
    chain_category,
    free_category,
    poset_category,
)
from gaiakit.genmetric import GenMetricSpace, SpaceKind, build_space
from gaiakit.learn.backprop import backprop_functor
from gaiakit.learn.expr import ParamFn, affine, bias, pointwise, scalar_product
from gaiakit.learn.learner import Learner, error_fn
from gaiakit.learn.transformer import TransformerBlock
from gaiakit.learn.zeroth_order import harmonic_schedule, zeroth_order_functor
from gaiakit.lifting import FinSetMap
from gaiakit.simplicial import SimplicialSet, build_shape, nerve


class FileModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


# --- Categories ---


class MorphismModel(FileModel):
    id: str
    dom: str
    cod: str


class PosetModel(FileModel):
    elements: list[str]
    leq: list[tuple[str, str]] = Field(default_factory=list)


class GraphModel(FileModel):
    vertices: list[str]
    edges: list[tuple[str, str, str]] = Field(default_factory=list)


class CategoryModel(FileModel):
    """
    A finite category, either as a full table or by a generator.

    Exactly one of the table (``objects``/``morphisms``/``identity``/``compose``),
    ``chain``, ``poset`` or ``free`` must be given. ``compose`` rows are
    ``[g, f, g∘f]``.
    """

    objects: list[str] | None = None
    morphisms: list[MorphismModel] | None = None
    identity: dict[str, str] | None = None
    compose: list[tuple[str, str, str]] | None = None
    chain: int | None = Field(default=None, ge=0)
    poset: PosetModel | None = None
    free: GraphModel | None = None

    @model_validator(mode="after")
    def one_presentation(self) -> Self:
        given = [
            name
            for name, value in (
                ("table", self.objects),
                ("chain", self.chain),
                ("poset", self.poset),
                ("free", self.free),
            )
            if value is not None
        ]
        if len(given) != 1:
            raise ValueError(f"give exactly one of table, chain, poset, free; got {given}")
        if self.objects is not None and (self.morphisms is None or self.identity is None):
            raise ValueError("a category table needs objects, morphisms and identity")
        return self

    def to_domain(self) -> FinCategory:
        if self.chain is not None:
            return chain_category(self.chain)
        if self.poset is not None:
            return poset_category(self.poset.elements, self.poset.leq)
        if self.free is not None:
            return free_category(self.free.vertices, self.free.edges)
        return FinCategory(
            tuple(self.objects),
            tuple(Morphism(m.id, m.dom, m.cod) for m in self.morphisms),
            dict(self.identity),
            {(g, f): gf for g, f, gf in self.compose or ()},
        )

    @classmethod
    def from_domain(cls, c: FinCategory) -> "CategoryModel":
        return cls(
            objects=list(c.objects),
            morphisms=[MorphismModel(id=m.id, dom=m.dom, cod=m.cod) for m in c.morphisms],
            identity=dict(c.identity),
            compose=sorted((g, f, gf) for (g, f), gf in c.composition.items()),
        )


class FunctorModel(FileModel):
    source: CategoryModel
    target: CategoryModel
    objects: dict[str, str]
    morphisms: dict[str, str] = Field(default_factory=dict)

    def to_domain(self) -> FinFunctor:
        source, target = self.source.to_domain(), self.target.to_domain()
        morphisms = dict(self.morphisms)
        # identities may be left implicit
        for a in source.objects:
            if a in self.objects:
                morphisms.setdefault(source.id(a), target.id(self.objects[a]))
        return FinFunctor(source, target, dict(self.objects), morphisms)


class InstanceModel(FileModel):
    """A set-valued functor; identity actions may be omitted."""

    schema_: CategoryModel = Field(alias="schema")
    tables: dict[str, list[str]]
    actions: dict[str, dict[str, str]] = Field(default_factory=dict)

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    def to_domain(self, schema: FinCategory | None = None) -> SetInstance:
        schema = schema or self.schema_.to_domain()
        actions = {f: dict(table) for f, table in self.actions.items()}
        for a in schema.objects:
            actions.setdefault(schema.id(a), {x: x for x in self.tables.get(a, ())})
        return SetInstance(schema, {s: tuple(xs) for s, xs in self.tables.items()}, actions)

    @classmethod
    def from_domain(cls, instance: SetInstance) -> "InstanceModel":
        return cls(
            schema=CategoryModel.from_domain(instance.schema),
            tables={s: list(xs) for s, xs in instance.tables.items()},
            actions={
                f: dict(table)
                for f, table in instance.actions.items()
                if not instance.schema.is_identity(f)
            },
        )


# --- Simplicial sets ---


class ShapeModel(FileModel):
    kind: Literal["standard", "boundary", "horn"]
    n: int = Field(ge=0)
    k: int | None = None
    truncation: int | None = Field(default=None, ge=0)


class SimplicialModel(FileModel):
    """
    A truncated simplicial set: explicit tables, a standard shape, or a nerve.
    """

    truncation: int | None = Field(default=None, ge=0)
    levels: list[list[str]] | None = None
    faces: dict[str, list[str]] = Field(default_factory=dict)
    degeneracies: dict[str, list[str]] = Field(default_factory=dict)
    shape: ShapeModel | None = None
    nerve_of: CategoryModel | None = None

    @model_validator(mode="after")
    def one_presentation(self) -> Self:
        given = [v for v in (self.levels, self.shape, self.nerve_of) if v is not None]
        if len(given) != 1:
            raise ValueError("give exactly one of levels, shape, nerve_of")
        return self

    def to_domain(self, truncation: int | None = None) -> SimplicialSet:
        truncation = self.truncation if truncation is None else truncation
        if self.shape is not None:
            if self.shape.truncation is not None:
                truncation = self.shape.truncation
            return build_shape(self.shape.kind, self.shape.n, self.shape.k, truncation)
        if self.nerve_of is not None:
            return nerve(self.nerve_of.to_domain(), truncation)
        return SimplicialSet(
            len(self.levels) - 1 if self.truncation is None else self.truncation,
            tuple(tuple(level) for level in self.levels),
            {s: tuple(fs) for s, fs in self.faces.items()},
            {s: tuple(ds) for s, ds in self.degeneracies.items()},
        )


# --- Lifting ---


class SetMapModel(FileModel):
    domain: list[str]
    codomain: list[str]
    table: dict[str, str]

    def to_domain(self) -> FinSetMap:
        return FinSetMap(tuple(self.domain), tuple(self.codomain), dict(self.table))

    @classmethod
    def from_domain(cls, f: FinSetMap) -> "SetMapModel":
        return cls(domain=list(f.domain), codomain=list(f.codomain), table=dict(f.table))


class PatternModel(FileModel):
    """
    A query pattern over the instance schema.

    ``window`` lists objects of the pattern's category of elements whose
    elements form the answer; ``anchor`` fixes some of them.
    """

    tables: dict[str, list[str]]
    actions: dict[str, dict[str, str]] = Field(default_factory=dict)
    window: list[str] | None = None
    anchor: dict[str, str] = Field(default_factory=dict)
    injective: bool = False
    dedup: bool = False

    def to_domain(self, schema: FinCategory) -> SetInstance:
        actions = {f: dict(table) for f, table in self.actions.items()}
        for a in schema.objects:
            actions.setdefault(schema.id(a), {x: x for x in self.tables.get(a, ())})
        return SetInstance(schema, {s: tuple(xs) for s, xs in self.tables.items()}, actions)


# --- Coalgebras ---


class CoalgebraModel(FileModel):
    """
    A finite coalgebra as a transition list.

    ``transitions`` rows are ``[state, label, next]``. Powerset systems use
    the label ``*``; a stream state has exactly one row, labelled by its
    output.
    """

    kind: FunctorKind = FunctorKind.LTS
    states: list[str]
    labels: list[str] = Field(default_factory=list)
    transitions: list[tuple[str, str, str]] = Field(default_factory=list)

    def alphabet(self) -> tuple[str, ...]:
        return tuple(self.labels) or tuple(sorted({label for _, label, _ in self.transitions}))

    def to_domain(self) -> Coalgebra:
        match self.kind:
            case FunctorKind.POWERSET:
                structure = {s: frozenset() for s in self.states}
                for s, _, t in self.transitions:
                    structure[s] = structure.get(s, frozenset()) | {t}
                spec = EndofunctorSpec(FunctorKind.POWERSET)
            case FunctorKind.STREAM:
                structure = {}
                for s, label, t in self.transitions:
                    if s in structure:
                        raise ValidationError(f"stream state '{s}' has more than one transition")
                    structure[s] = (label, t)
                spec = EndofunctorSpec(FunctorKind.STREAM, self.alphabet())
            case FunctorKind.LTS:
                structure = {s: frozenset() for s in self.states}
                for s, label, t in self.transitions:
                    structure[s] = structure.get(s, frozenset()) | {(label, t)}
                spec = EndofunctorSpec(FunctorKind.LTS, self.alphabet())
            case _:
                raise ValidationError(f"no transition-list format for '{self.kind.value}'")
        return Coalgebra(spec, tuple(self.states), structure)


class ContractionModel(FileModel):
    """The affine map ``H(v) = A v + c`` on ``R^n``, with its starting point."""

    matrix: list[list[float]]
    offset: list[float]
    start: list[float] | None = None
    modulus: float | None = Field(default=None, ge=0, lt=1)

    def to_domain(self):
        a = np.asarray(self.matrix, dtype=float)
        c = np.asarray(self.offset, dtype=float)
        if a.shape != (c.size, c.size):
            raise ValidationError(f"matrix shape {a.shape} does not match offset size {c.size}")
        start = np.zeros(c.size) if self.start is None else np.asarray(self.start, dtype=float)
        return (lambda v: a @ v + c), start


# --- Metric spaces ---


class SpaceModel(FileModel):
    """A generalized metric space; distances are integers, ``"p/q"`` strings or ``"inf"``."""

    kind: SpaceKind = SpaceKind.TABLE
    carrier: list[str] | None = None
    table: list[list[int | str]] | None = None
    elements: list[str] | None = None
    leq: list[tuple[str, str]] | None = None
    strings: list[str] | None = None
    alphabet: str | None = None
    points: list[str] | None = None
    subsets: list[list[str]] | None = None

    def to_domain(self, validate: bool = True) -> GenMetricSpace:
        data = {
            name: value
            for name, value in self.model_dump(exclude={"kind"}).items()
            if value is not None
        }
        try:
            return build_space(self.kind, validate, **data)
        except KeyError as e:
            raise ValidationError(f"{self.kind.value} space needs '{e.args[0]}'") from None


# --- Learners ---


class LayerModel(FileModel):
    kind: Literal["affine", "pointwise", "scalar_product", "bias"]
    n_in: int | None = Field(default=None, ge=0)
    n_out: int | None = Field(default=None, ge=0)
    n: int | None = Field(default=None, ge=0)
    nonlinearity: str = "identity"

    def to_domain(self) -> ParamFn:
        match self.kind:
            case "affine":
                if self.n_in is None or self.n_out is None:
                    raise ValidationError("affine layers need n_in and n_out")
                return affine(self.n_in, self.n_out)
            case "pointwise":
                return pointwise(self.nonlinearity, self._width())
            case "bias":
                return bias(self._width())
            case _:
                return scalar_product()

    def _width(self) -> int:
        if self.n is None:
            raise ValidationError(f"{self.kind} layers need n")
        return self.n


class PipelineModel(FileModel):
    """
    A chain of layers trained by backprop or the zeroth-order method.

    ``init`` is ``"zeros"`` or ``"normal"``; normal draws need a seed.
    """

    layers: list[LayerModel] = Field(min_length=1)
    epsilon: float | None = Field(default=None, gt=0)
    error: str = "quadratic"
    optimizer: Literal["backprop", "zeroth_order"] = "backprop"
    delta: float | None = None
    literal: bool = False
    scaled: bool = False
    init: Literal["zeros", "normal"] = "zeros"
    scale: float = 0.5

    def functions(self) -> list[ParamFn]:
        return [layer.to_domain() for layer in self.layers]

    def learners(self, seed: int | None, epsilon: float | None = None) -> list[Learner]:
        epsilon = epsilon or self.epsilon
        error = error_fn(self.error)
        rng = np.random.default_rng(seed)
        learners = []
        for i, f in enumerate(self.functions()):
            params = (
                self.scale * rng.standard_normal(f.n_params)
                if self.init == "normal"
                else np.zeros(f.n_params)
            )
            if self.optimizer == "zeroth_order":
                learner = zeroth_order_functor(
                    f,
                    harmonic_schedule(epsilon or 0.5),
                    self.delta,
                    error,
                    None if seed is None else seed + i,
                    params,
                    self.literal,
                    self.scaled,
                )
            else:
                learner = backprop_functor(f, epsilon, error, params)
            learners.append(learner)
        return learners


class TransformerModel(FileModel):
    """Block dimensions; weights are drawn from the seed."""

    d: int = Field(gt=0)
    heads: int = Field(default=1, ge=0)
    m: int = Field(gt=0)
    r: int = Field(gt=0)
    n: int = Field(gt=0)
    blocks: int = Field(default=1, ge=1)
    samples: int = Field(default=50, ge=1)
    scale: float = 0.5

    def to_domain(self, rng: np.random.Generator) -> list[TransformerBlock]:
        return [
            TransformerBlock.random(self.d, self.heads, self.m, self.r, rng, self.scale)
            for _ in range(self.blocks)
        ]
