"""
Truncated simplicial sets.

A simplicial set is stored level-wise up to its truncation bound N, with
every face and degeneracy materialized as a table. Simplex identifiers are
unique across all dimensions. Nerves of finite categories, the standard
simplices with their boundaries and horns, products with Δ¹ and horn
filling all live here.
"""

import logging
from collections.abc import Collection, Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from functools import cached_property

from gaiakit.config import settings
from gaiakit.errors import CapacityError, StructuralError, ValidationError
from gaiakit.fincat import FinCategory, FinFunctor, chain_category, tuple_id
from gaiakit.schemas import ValidationReport, ViolationKind
from gaiakit.search import SearchBudget, backtrack

logger = logging.getLogger(__name__)

CHAIN_SEPARATOR = ";"


@dataclass(frozen=True)
class SimplicialSet:
    """
    A simplicial set truncated at dimension ``truncation``.

    Attributes:
        truncation: Highest stored dimension N
        levels: ``levels[n]`` lists the n-simplices, 0 <= n <= N
        faces: ``faces[σ] = (d_0 σ, ..., d_n σ)`` for every σ of dimension n >= 1
        degeneracies: ``degeneracies[σ] = (s_0 σ, ..., s_n σ)`` for every σ of
            dimension n < N
        shape: ``(kind, n, k)`` when built by :func:`build_shape`
    """

    truncation: int
    levels: tuple[tuple[str, ...], ...]
    faces: Mapping[str, tuple[str, ...]]
    degeneracies: Mapping[str, tuple[str, ...]]
    shape: tuple[str, int, int | None] | None = field(default=None, compare=False)

    @cached_property
    def _dim(self) -> dict[str, int]:
        return {s: n for n, level in enumerate(self.levels) for s in level}

    @cached_property
    def _degeneracy_source(self) -> dict[str, tuple[int, str]]:
        # One way of writing each degenerate simplex as s_j of a lower one.
        source: dict[str, tuple[int, str]] = {}
        for n in range(self.truncation):
            for rho in self.levels[n]:
                for j, sigma in enumerate(self.degeneracies.get(rho, ())):
                    source.setdefault(sigma, (j, rho))
        return source

    @property
    def degenerate(self) -> frozenset[str]:
        return frozenset(self._degeneracy_source)

    def dim(self, sigma: str) -> int:
        try:
            return self._dim[sigma]
        except KeyError:
            raise StructuralError(f"unknown simplex '{sigma}'") from None

    def face(self, sigma: str, i: int) -> str:
        return self.faces[sigma][i]

    def degeneracy(self, sigma: str, j: int) -> str:
        if self.dim(sigma) >= self.truncation:
            raise StructuralError(f"no degeneracies above the truncation {self.truncation}")
        return self.degeneracies[sigma][j]

    def is_degenerate(self, sigma: str) -> bool:
        return sigma in self._degeneracy_source

    def degeneracy_source(self, sigma: str) -> tuple[int, str] | None:
        """``(j, ρ)`` with ``σ = s_j ρ``, or None for a nondegenerate simplex."""
        return self._degeneracy_source.get(sigma)

    def nondegenerate(self, n: int) -> tuple[str, ...]:
        if n > self.truncation:
            return ()
        return tuple(s for s in self.levels[n] if s not in self._degeneracy_source)

    def size(self, n: int) -> int:
        return len(self.levels[n]) if n <= self.truncation else 0


def vertices(x: SimplicialSet, sigma: str) -> tuple[str, ...]:
    """The ordered vertices ``(v_0, ..., v_n)`` of a simplex."""
    n = x.dim(sigma)
    result = []
    for i in range(n + 1):
        tau = sigma
        for j in range(n, i, -1):
            tau = x.face(tau, j)
        for _ in range(i):
            tau = x.face(tau, 0)
        result.append(tau)
    return tuple(result)


def validate_simplicial_set(x: SimplicialSet) -> ValidationReport:
    """Check table shapes, then every instance of the three simplicial identity families."""
    report = ValidationReport()
    if len(x.levels) != x.truncation + 1:
        report.structural.append(
            f"{len(x.levels)} levels given for truncation {x.truncation}"
        )
        return report
    seen: set[str] = set()
    for level in x.levels:
        for sigma in level:
            if sigma in seen:
                report.structural.append(f"simplex '{sigma}' is listed twice")
            seen.add(sigma)
    for n, level in enumerate(x.levels):
        for sigma in level:
            if n >= 1:
                faces = x.faces.get(sigma)
                if faces is None or len(faces) != n + 1:
                    report.structural.append(f"'{sigma}' needs {n + 1} faces")
                elif any(x._dim.get(f) != n - 1 for f in faces):
                    report.structural.append(f"faces of '{sigma}' are not {n - 1}-simplices")
            if n < x.truncation:
                degeneracies = x.degeneracies.get(sigma)
                if degeneracies is None or len(degeneracies) != n + 1:
                    report.structural.append(f"'{sigma}' needs {n + 1} degeneracies")
                elif any(x._dim.get(s) != n + 1 for s in degeneracies):
                    report.structural.append(
                        f"degeneracies of '{sigma}' are not {n + 1}-simplices"
                    )
    if report.structural:
        return report

    d, s = x.face, x.degeneracy
    for n in range(2, x.truncation + 1):
        for sigma in x.levels[n]:
            for j in range(n + 1):
                for i in range(j):
                    if d(d(sigma, j), i) != d(d(sigma, i), j - 1):
                        report.add(
                            ViolationKind.SIMPLICIAL_IDENTITY,
                            f"d_{i} d_{j} != d_{j - 1} d_{i} on '{sigma}'",
                        )
    for n in range(x.truncation - 1):
        for sigma in x.levels[n]:
            for j in range(n + 1):
                for i in range(j + 1):
                    if s(s(sigma, j), i) != s(s(sigma, i), j + 1):
                        report.add(
                            ViolationKind.SIMPLICIAL_IDENTITY,
                            f"s_{i} s_{j} != s_{j + 1} s_{i} on '{sigma}'",
                        )
    for n in range(x.truncation):
        for sigma in x.levels[n]:
            for j in range(n + 1):
                for i in range(n + 2):
                    lhs = d(s(sigma, j), i)
                    if i < j:
                        rhs = s(d(sigma, i), j - 1)
                    elif i in (j, j + 1):
                        rhs = sigma
                    else:
                        rhs = s(d(sigma, i - 1), j)
                    if lhs != rhs:
                        report.add(
                            ViolationKind.SIMPLICIAL_IDENTITY,
                            f"d_{i} s_{j} '{sigma}' = '{lhs}', expected '{rhs}'",
                        )
    return report


# --- Nerves and standard shapes ---


def chain_id(chain: tuple[str, ...]) -> str:
    """Identifier of a chain of composable morphisms; a single morphism keeps its id."""
    return CHAIN_SEPARATOR.join(chain)


def _check_capacity(what: str, n: int, size: int) -> None:
    if size > settings.product_capacity:
        raise CapacityError(
            f"{what}: level {n} has {size} simplices, capacity is {settings.product_capacity}"
        )


def nerve(c: FinCategory, truncation: int | None = None) -> SimplicialSet:
    """
    The nerve of a finite category, truncated at ``truncation``.

    Vertices are objects, edges are morphisms and n-simplices (n >= 2) are
    chains ``f_1; ...; f_n`` with ``cod f_i = dom f_{i+1}``. ``d_0`` and
    ``d_n`` drop the end arrows, inner faces compose neighbours and ``s_j``
    inserts an identity at the j-th object of the chain.
    """
    truncation = settings.truncation if truncation is None else truncation
    if truncation < 0:
        raise ValidationError("truncation must be nonnegative")
    for name in list(c.objects) + [m.id for m in c.morphisms]:
        if CHAIN_SEPARATOR in name:
            raise StructuralError(f"identifier '{name}' contains '{CHAIN_SEPARATOR}'")

    chains: list[list[tuple[str, ...]]] = [[], [(m.id,) for m in c.morphisms]]
    _check_capacity("nerve", 1, len(chains[1]))
    for n in range(2, truncation + 1):
        level = [
            chain + (g,) for chain in chains[n - 1] for g in c.out_of(c.cod(chain[-1]))
        ]
        _check_capacity("nerve", n, len(level))
        chains.append(level)

    def source_object(chain: tuple[str, ...], j: int) -> str:
        return c.dom(chain[j]) if j < len(chain) else c.cod(chain[-1])

    levels: list[tuple[str, ...]] = [tuple(c.objects)]
    faces: dict[str, tuple[str, ...]] = {}
    degeneracies: dict[str, tuple[str, ...]] = {}
    for a in c.objects:
        if truncation >= 1:
            degeneracies[a] = (c.id(a),)
    for n in range(1, truncation + 1):
        levels.append(tuple(chain_id(chain) for chain in chains[n]))
        for chain in chains[n]:
            sigma = chain_id(chain)
            if n == 1:
                faces[sigma] = (c.cod(chain[0]), c.dom(chain[0]))
            else:
                inner = [
                    chain_id(chain[: i - 1] + (c.compose(chain[i], chain[i - 1]),) + chain[i + 1 :])
                    for i in range(1, n)
                ]
                faces[sigma] = (chain_id(chain[1:]), *inner, chain_id(chain[:-1]))
            if n < truncation:
                degeneracies[sigma] = tuple(
                    chain_id(chain[:j] + (c.id(source_object(chain, j)),) + chain[j:])
                    for j in range(n + 1)
                )
    x = SimplicialSet(truncation, tuple(levels), faces, degeneracies)
    if len(x._dim) != sum(len(level) for level in levels):
        raise StructuralError("nerve identifiers collide; rename objects or morphisms")
    logger.info(f"nerve with level sizes {[len(level) for level in levels]}")
    return x


def restrict(x: SimplicialSet, keep: Iterable[str], shape=None) -> SimplicialSet:
    """The sub-simplicial set on ``keep``, which must be closed under faces and degeneracies."""
    keep = set(keep)
    if not is_simplicial_subset(x, keep):
        raise StructuralError("kept simplices are not closed under faces and degeneracies")
    levels = tuple(tuple(s for s in level if s in keep) for level in x.levels)
    faces = {s: f for s, f in x.faces.items() if s in keep}
    degeneracies = {s: t for s, t in x.degeneracies.items() if s in keep}
    return SimplicialSet(x.truncation, levels, faces, degeneracies, shape)


def is_simplicial_subset(x: SimplicialSet, keep: Collection[str]) -> bool:
    for sigma in keep:
        if any(f not in keep for f in x.faces.get(sigma, ())):
            return False
        if any(s not in keep for s in x.degeneracies.get(sigma, ())):
            return False
    return True


def build_shape(
    kind: str, n: int, k: int | None = None, truncation: int | None = None
) -> SimplicialSet:
    """
    The standard simplex Δⁿ, its boundary ∂Δⁿ or the horn Λⁿ_k.

    All three are sub-simplicial sets of the nerve of the ordinal [n],
    truncated at ``truncation`` (default n). A simplex belongs to ∂Δⁿ when
    its vertices miss some element of [n], and to Λⁿ_k when they miss some
    element other than k.
    """
    truncation = n if truncation is None else truncation
    if n < 0:
        raise ValidationError("shape dimension must be nonnegative")
    if kind == "horn":
        if k is None or not 0 <= k <= n:
            raise ValidationError(f"horn index k={k} out of range for n={n}")
    elif kind in ("standard", "boundary"):
        if k is not None:
            raise ValidationError(f"k is only meaningful for horns, not '{kind}'")
    else:
        raise ValidationError(f"unknown shape kind '{kind}'")

    full = nerve(chain_category(n), truncation)
    if kind == "standard":
        return SimplicialSet(
            full.truncation, full.levels, full.faces, full.degeneracies, (kind, n, k)
        )
    everything = {str(i) for i in range(n + 1)}
    extra = {str(k)} if kind == "horn" else set()
    keep = [
        sigma
        for level in full.levels
        for sigma in level
        if set(vertices(full, sigma)) | extra != everything
    ]
    return restrict(full, keep, shape=(kind, n, k))


def standard_face(n: int, i: int) -> str:
    """Identifier of the face ``d_i`` of the top simplex of Δⁿ from :func:`build_shape`."""
    points = [str(v) for v in range(n + 1) if v != i]
    if len(points) == 1:
        return points[0]
    return chain_id(tuple(f"{a}->{b}" for a, b in zip(points, points[1:])))


# --- Simplicial maps ---


@dataclass(frozen=True)
class SimplicialMap:
    source: SimplicialSet
    target: SimplicialSet
    mapping: Mapping[str, str]

    def __call__(self, sigma: str) -> str:
        try:
            return self.mapping[sigma]
        except KeyError:
            raise StructuralError(f"map is undefined on '{sigma}'") from None


def validate_simplicial_map(f: SimplicialMap) -> ValidationReport:
    report = ValidationReport()
    x, y = f.source, f.target
    if x.truncation > y.truncation:
        report.structural.append("source is truncated higher than the target")
    for n, level in enumerate(x.levels):
        for sigma in level:
            image = f.mapping.get(sigma)
            if image is None:
                report.structural.append(f"'{sigma}' is not mapped")
            elif y._dim.get(image) != n:
                report.structural.append(f"'{sigma}' is mapped to '{image}' of the wrong dimension")
    if report.structural:
        return report
    for n, level in enumerate(x.levels):
        for sigma in level:
            for i in range(n + 1):
                if n >= 1 and f(x.face(sigma, i)) != y.face(f(sigma), i):
                    report.add(ViolationKind.SIMPLICIAL_MAP, f"d_{i} does not commute at '{sigma}'")
                if n < x.truncation and f(x.degeneracy(sigma, i)) != y.degeneracy(f(sigma), i):
                    report.add(ViolationKind.SIMPLICIAL_MAP, f"s_{i} does not commute at '{sigma}'")
    return report


def iter_simplicial_maps(
    source: SimplicialSet,
    target: SimplicialSet,
    fixed: Mapping[str, str] | None = None,
    allowed: Mapping[str, Collection[str]] | None = None,
    budget: SearchBudget | None = None,
) -> Iterator[SimplicialMap]:
    """
    Enumerate simplicial maps extending a partial assignment.

    Values are chosen on nondegenerate simplices in increasing dimension;
    degenerate simplices follow from ``h(s_j ρ) = s_j h(ρ)``.

    Args:
        source: Domain simplicial set
        target: Codomain, truncated at least as high as the source
        fixed: Prescribed values on source simplices
        allowed: Candidate values per nondegenerate source simplex

    Yields:
        Every simplicial map agreeing with ``fixed`` and ``allowed``
    """
    if source.truncation > target.truncation:
        raise StructuralError("source is truncated higher than the target")
    fixed = fixed or {}
    allowed = allowed or {}
    budget = budget or SearchBudget("simplicial_maps")
    variables = [s for n in range(source.truncation + 1) for s in source.nondegenerate(n)]

    def value(sigma: str, partial: dict) -> str:
        decomposition = source.degeneracy_source(sigma)
        if decomposition is None:
            return partial[sigma]
        j, rho = decomposition
        return target.degeneracy(value(rho, partial), j)

    def candidates(sigma: str, partial: dict) -> Iterable[str]:
        n = source.dim(sigma)
        if sigma in fixed:
            options = [fixed[sigma]] if target._dim.get(fixed[sigma]) == n else []
        else:
            options = target.levels[n]
        if sigma in allowed:
            options = [t for t in options if t in allowed[sigma]]
        return options

    def consistent(sigma: str, image: str, partial: dict) -> bool:
        n = source.dim(sigma)
        return n == 0 or all(
            value(source.face(sigma, i), partial) == target.face(image, i)
            for i in range(n + 1)
        )

    degenerate_fixed = [s for s in fixed if source.is_degenerate(s)]
    for assignment in backtrack(variables, candidates, consistent, budget):
        if any(value(s, assignment) != fixed[s] for s in degenerate_fixed):
            continue
        mapping = {s: value(s, assignment) for level in source.levels for s in level}
        yield SimplicialMap(source, target, mapping)


def simplicial_maps(
    source: SimplicialSet,
    target: SimplicialSet,
    fixed: Mapping[str, str] | None = None,
    allowed: Mapping[str, Collection[str]] | None = None,
    budget: SearchBudget | None = None,
) -> list[SimplicialMap]:
    return list(iter_simplicial_maps(source, target, fixed, allowed, budget))


def nerve_map(functor: FinFunctor, truncation: int | None = None) -> SimplicialMap:
    """The simplicial map ``N(F)`` between truncated nerves."""
    source = nerve(functor.source, truncation)
    target = nerve(functor.target, truncation)
    mapping = {a: functor.on_object(a) for a in source.levels[0]}
    for level in source.levels[1:]:
        for sigma in level:
            chain = tuple(sigma.split(CHAIN_SEPARATOR))
            mapping[sigma] = chain_id(tuple(functor.on_morphism(f) for f in chain))
    return SimplicialMap(source, target, mapping)


def product(x: SimplicialSet, y: SimplicialSet) -> SimplicialSet:
    """Level-wise product, truncated at the smaller bound; n-simplices are pairs ``(σ,τ)``."""
    truncation = min(x.truncation, y.truncation)
    levels = []
    for n in range(truncation + 1):
        _check_capacity("product", n, x.size(n) * y.size(n))
        levels.append(tuple(tuple_id(a, b) for a in x.levels[n] for b in y.levels[n]))
    faces: dict[str, tuple[str, ...]] = {}
    degeneracies: dict[str, tuple[str, ...]] = {}
    for n in range(truncation + 1):
        for a in x.levels[n]:
            for b in y.levels[n]:
                sigma = tuple_id(a, b)
                if n >= 1:
                    faces[sigma] = tuple(
                        tuple_id(x.face(a, i), y.face(b, i)) for i in range(n + 1)
                    )
                if n < truncation:
                    degeneracies[sigma] = tuple(
                        tuple_id(x.degeneracy(a, j), y.degeneracy(b, j)) for j in range(n + 1)
                    )
    result = SimplicialSet(truncation, tuple(levels), faces, degeneracies)
    if len(result._dim) != sum(len(level) for level in levels):
        raise StructuralError("product identifiers collide")
    return result


def constant_simplex(x: SimplicialSet, vertex: str, n: int) -> str:
    """The totally degenerate n-simplex ``s_0^n v``."""
    sigma = vertex
    for _ in range(n):
        sigma = x.degeneracy(sigma, 0)
    return sigma


def homotopic(
    f0: SimplicialMap, f1: SimplicialMap, budget: SearchBudget | None = None
) -> bool:
    """
    Whether some ``h: Δ¹ × X -> Y`` restricts to ``f0`` on {0}×X and ``f1`` on {1}×X.

    The search runs over simplicial maps out of the truncated product and
    raises :class:`CapacityError` when the product is too large.
    """
    if f0.source != f1.source or f0.target != f1.target:
        raise StructuralError("homotopic maps need a common source and target")
    x, y = f0.source, f0.target
    interval = build_shape("standard", 1, truncation=x.truncation)
    cylinder = product(interval, x)
    fixed = {}
    for n, level in enumerate(x.levels):
        zero = constant_simplex(interval, "0", n)
        one = constant_simplex(interval, "1", n)
        for tau in level:
            fixed[tuple_id(zero, tau)] = f0(tau)
            fixed[tuple_id(one, tau)] = f1(tau)
    found = next(iter_simplicial_maps(cylinder, y, fixed, budget=budget), None)
    return found is not None


# --- Horns ---


@dataclass(frozen=True)
class HornProblem:
    """
    A horn Λⁿ_k in ``target`` given by its faces.

    ``faces[i]`` is the (n-1)-simplex assigned to the i-th face, for every
    ``i != k``. Compatibility ``d_i y_j = d_{j-1} y_i`` (i < j) is checked at
    construction.
    """

    n: int
    k: int
    target: SimplicialSet
    faces: Mapping[int, str]

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.k <= self.n:
            raise ValidationError(f"no horn Λ^{self.n}_{self.k}")
        if self.target.truncation < self.n:
            raise ValidationError(
                f"target truncated at {self.target.truncation} cannot hold {self.n}-simplices"
            )
        expected = {i for i in range(self.n + 1) if i != self.k}
        if set(self.faces) != expected:
            raise ValidationError(f"horn needs faces {sorted(expected)}, got {sorted(self.faces)}")
        for i, y in self.faces.items():
            if self.target._dim.get(y) != self.n - 1:
                raise ValidationError(f"face {i} '{y}' is not an {self.n - 1}-simplex")
        if self.n >= 2:
            for j in expected:
                for i in expected:
                    if i < j and _incompatible(self.target, i, j, self.faces):
                        raise ValidationError(
                            f"faces {i} and {j} do not agree on their common face"
                        )


def _incompatible(x: SimplicialSet, i: int, j: int, faces: Mapping[int, str]) -> bool:
    return x.face(faces[j], i) != x.face(faces[i], j - 1)


def enumerate_horn_fillers(
    problem: HornProblem, budget: SearchBudget | None = None
) -> list[str]:
    """Every n-simplex of the target whose faces match the horn."""
    budget = budget or SearchBudget("enumerate_horn_fillers")
    x = problem.target
    fillers = []
    for sigma in x.levels[problem.n]:
        budget.tick()
        if all(x.face(sigma, i) == y for i, y in problem.faces.items()):
            fillers.append(sigma)
    return fillers


def horn_problems(
    x: SimplicialSet, n: int, k: int, budget: SearchBudget | None = None
) -> Iterator[HornProblem]:
    """Every horn Λⁿ_k in ``x``, assigning faces in index order."""
    budget = budget or SearchBudget("horn_problems")
    indices = [i for i in range(n + 1) if i != k]

    def consistent(j: int, y: str, partial: dict) -> bool:
        if n < 2:
            return True
        for i in partial:
            if i < j and _incompatible(x, i, j, partial):
                return False
            if i > j and _incompatible(x, j, i, partial):
                return False
        return True

    for faces in backtrack(indices, lambda i, partial: x.levels[n - 1], consistent, budget):
        yield HornProblem(n, k, x, faces)


@dataclass
class HornReport:
    holds: bool
    witness: HornProblem | None = None
    fillers: list[str] = field(default_factory=list)


def _check_horns(
    x: SimplicialSet,
    m: int,
    inner_only: bool,
    require_unique: bool,
    budget: SearchBudget | None,
) -> HornReport:
    if m > x.truncation:
        raise ValidationError(f"cannot check horns up to {m} above the truncation {x.truncation}")
    budget = budget or SearchBudget("horn check")
    for n in range(1, m + 1):
        for k in range(n + 1):
            if inner_only and not 0 < k < n:
                continue
            for problem in horn_problems(x, n, k, budget):
                fillers = enumerate_horn_fillers(problem, budget)
                if not fillers or (require_unique and len(fillers) > 1):
                    faces = dict(problem.faces)
                    logger.debug(f"horn Λ^{n}_{k} {faces} has {len(fillers)} fillers")
                    return HornReport(False, problem, fillers)
    return HornReport(True)


def is_kan_complex(
    x: SimplicialSet, m: int | None = None, budget: SearchBudget | None = None
) -> HornReport:
    """
    Whether every horn Λⁿ_k in ``x`` with 0 < n <= m has a filler.

    Returns:
        A report whose witness is the first unfillable horn found
    """
    return _check_horns(x, x.truncation if m is None else m, False, False, budget)


def is_inner_extension_complete(
    x: SimplicialSet,
    m: int | None = None,
    require_unique: bool = False,
    budget: SearchBudget | None = None,
) -> bool:
    """Whether every inner horn up to dimension ``m`` has a filler.

    With ``require_unique`` every such horn must have exactly one.
    """
    m = x.truncation if m is None else m
    return _check_horns(x, m, True, require_unique, budget).holds


def horn_problem_from_map(g: SimplicialMap, n: int, k: int) -> HornProblem:
    """Read a map out of Λⁿ_k (as built by :func:`build_shape`) as a horn problem."""
    if g.source.shape is None or g.source.shape[:2] != ("horn", n) or g.source.shape[2] != k:
        raise StructuralError(f"map source is not the horn Λ^{n}_{k}")
    faces = {i: g(standard_face(n, i)) for i in range(n + 1) if i != k}
    return HornProblem(n, k, g.target, faces)


@dataclass
class FibrationReport:
    holds: bool
    witness: HornProblem | None = None
    base_simplex: str | None = None


def is_kan_fibration(
    f: SimplicialMap, m: int | None = None, budget: SearchBudget | None = None
) -> FibrationReport:
    """
    Horn lifting against ``f: X -> S`` up to dimension ``m``.

    For every horn in X and every n-simplex z of S whose faces are the images
    of the horn faces, some filler σ must satisfy ``f(σ) = z``.
    """
    x, s = f.source, f.target
    m = x.truncation if m is None else m
    budget = budget or SearchBudget("is_kan_fibration")
    for n in range(1, m + 1):
        for k in range(n + 1):
            for problem in horn_problems(x, n, k, budget):
                images = {i: f(y) for i, y in problem.faces.items()}
                fillers = enumerate_horn_fillers(problem, budget)
                filled = {f(sigma) for sigma in fillers}
                for z in s.levels[n]:
                    budget.tick()
                    if all(s.face(z, i) == y for i, y in images.items()) and z not in filled:
                        return FibrationReport(False, problem, z)
    return FibrationReport(True)
