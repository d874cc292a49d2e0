"""
Coalgebras of finite-state endofunctors.

Powerset, stream and labelled-transition coalgebras share one encoding:
every state has a set of ``(label, successor)`` pairs. A powerset state
uses the single label ``*`` and a stream state has exactly one pair whose
label is its output. Homomorphisms, bisimulations and minimization are
computed on that encoding.
"""

import logging
from collections.abc import Callable, Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from gaiakit.config import settings
from gaiakit.errors import NonContractionError, StructuralError, ValidationError
from gaiakit.fincat import tuple_id
from gaiakit.learn.learner import Learner

logger = logging.getLogger(__name__)

POWERSET_LABEL = "*"


class FunctorKind(str, Enum):
    POWERSET = "powerset"
    STREAM = "stream"
    LTS = "lts"
    BACKPROP_DYN = "backprop_dyn"


@dataclass(frozen=True)
class EndofunctorSpec:
    """
    Which endofunctor a coalgebra is for.

    ``alphabet`` holds the output alphabet of a stream functor or the label
    alphabet of an LTS functor, and is empty for the powerset functor.
    """

    kind: FunctorKind
    alphabet: tuple[str, ...] = ()

    def labels(self) -> tuple[str, ...]:
        return (POWERSET_LABEL,) if self.kind == FunctorKind.POWERSET else self.alphabet


Transitions = frozenset[tuple[str, str]]


@dataclass(frozen=True)
class Coalgebra:
    """
    A finite coalgebra ``α: S -> F(S)``.

    Attributes:
        spec: The endofunctor
        carrier: States
        structure: Per state, a collection of successors (powerset), an
            ``(output, next)`` pair (stream) or ``(label, next)`` pairs (LTS)
    """

    spec: EndofunctorSpec
    carrier: tuple[str, ...]
    structure: Mapping[str, Any]

    def __post_init__(self):
        if self.spec.kind == FunctorKind.BACKPROP_DYN:
            raise StructuralError("learner dynamics are wrapped by DynamicalCoalgebra")
        states = set(self.carrier)
        if set(self.structure) != states:
            raise StructuralError("structure is not total on the carrier")
        labels = set(self.spec.labels())
        for s in self.carrier:
            for label, t in self._pairs(s):
                if t not in states:
                    raise StructuralError(f"'{s}' steps to unknown state '{t}'")
                if label not in labels:
                    raise StructuralError(f"'{s}' uses '{label}' outside the alphabet")

    def _pairs(self, s: str) -> Transitions:
        value = self.structure[s]
        match self.spec.kind:
            case FunctorKind.POWERSET:
                return frozenset((POWERSET_LABEL, t) for t in value)
            case FunctorKind.STREAM:
                output, t = value
                return frozenset([(output, t)])
            case _:
                return frozenset((label, t) for label, t in value)

    def transitions(self, s: str) -> Transitions:
        """The state's structure as ``(label, successor)`` pairs."""
        return self._pairs(s)

    def as_lts(self) -> "Coalgebra":
        return Coalgebra(
            EndofunctorSpec(FunctorKind.LTS, self.spec.labels()),
            self.carrier,
            {s: self.transitions(s) for s in self.carrier},
        )


def _check_same_functor(c1: Coalgebra, c2: Coalgebra) -> None:
    if c1.spec.kind != c2.spec.kind:
        raise StructuralError(
            f"coalgebras for different functors: {c1.spec.kind} and {c2.spec.kind}"
        )
    if set(c1.spec.alphabet) != set(c2.spec.alphabet):
        raise StructuralError("coalgebras use different alphabets")


# --- Homomorphisms ---


@dataclass
class HomomorphismReport:
    holds: bool
    state: str | None = None


def check_homomorphism(f: Mapping[str, str], c1: Coalgebra, c2: Coalgebra) -> HomomorphismReport:
    """
    Check ``F(f) ∘ α1 = α2 ∘ f`` state by state.

    F acts on a map by relabelling successors: direct image for the powerset
    functor, the pairwise map for streams, label-preserving image for an LTS.
    """
    _check_same_functor(c1, c2)
    for s in c1.carrier:
        if f.get(s) not in c2.structure:
            raise StructuralError(f"map is undefined or leaves the target at '{s}'")
    for s in c1.carrier:
        image = frozenset((label, f[t]) for label, t in c1.transitions(s))
        if image != c2.transitions(f[s]):
            return HomomorphismReport(False, s)
    return HomomorphismReport(True)


class HomomorphismKind(str, Enum):
    ISO = "iso"
    MONO = "mono"
    EPI = "epi"
    PLAIN = "plain"


def classify_homomorphism(f: Mapping[str, str], c1: Coalgebra, c2: Coalgebra) -> HomomorphismKind:
    if not check_homomorphism(f, c1, c2).holds:
        raise ValidationError("map is not a coalgebra homomorphism")
    injective = len({f[s] for s in c1.carrier}) == len(c1.carrier)
    surjective = {f[s] for s in c1.carrier} == set(c2.carrier)
    if injective and surjective:
        return HomomorphismKind.ISO
    if injective:
        return HomomorphismKind.MONO
    if surjective:
        return HomomorphismKind.EPI
    return HomomorphismKind.PLAIN


# --- Bisimulations ---


@dataclass(frozen=True)
class Bisimulation:
    pairs: frozenset[tuple[str, str]]
    left: Coalgebra
    right: Coalgebra

    def __contains__(self, pair: tuple[str, str]) -> bool:
        return pair in self.pairs

    def inverse(self) -> "Bisimulation":
        return Bisimulation(frozenset((t, s) for s, t in self.pairs), self.right, self.left)

    def compose(self, other: "Bisimulation") -> "Bisimulation":
        """``self ; other``, relating S to U through T."""
        pairs = frozenset(
            (s, u) for s, t in self.pairs for t2, u in other.pairs if t == t2
        )
        return Bisimulation(pairs, self.left, other.right)

    @staticmethod
    def union(relations: Sequence["Bisimulation"]) -> "Bisimulation":
        if not relations:
            raise ValidationError("union of no relations has no carriers")
        pairs = frozenset().union(*(r.pairs for r in relations))
        return Bisimulation(pairs, relations[0].left, relations[0].right)

    @staticmethod
    def kernel(f: Mapping[str, str], c: Coalgebra) -> "Bisimulation":
        """``{(s, s') | f(s) = f(s')}``."""
        pairs = frozenset((s, t) for s in c.carrier for t in c.carrier if f[s] == f[t])
        return Bisimulation(pairs, c, c)


def relation_coalgebra(pairs: Iterable[tuple[str, str]], c1: Coalgebra, c2: Coalgebra) -> Coalgebra:
    """
    The canonical LTS structure on a relation R.

    ``(s, t)`` steps by ``l`` to every ``(s', t') ∈ R`` with ``s -l-> s'`` and
    ``t -l-> t'``. R is a bisimulation iff both projections out of this
    coalgebra are homomorphisms.
    """
    pairs = set(pairs)
    labels = tuple(dict.fromkeys(c1.spec.labels() + c2.spec.labels()))
    structure = {}
    for s, t in pairs:
        structure[tuple_id(s, t)] = frozenset(
            (label, tuple_id(s2, t2))
            for label, s2 in c1.transitions(s)
            for label2, t2 in c2.transitions(t)
            if label == label2 and (s2, t2) in pairs
        )
    carrier = tuple(tuple_id(s, t) for s, t in sorted(pairs))
    return Coalgebra(EndofunctorSpec(FunctorKind.LTS, labels), carrier, structure)


def is_bisimulation(pairs: Iterable[tuple[str, str]], c1: Coalgebra, c2: Coalgebra) -> bool:
    _check_same_functor(c1, c2)
    pairs = sorted(set(pairs))
    relation = relation_coalgebra(pairs, c1, c2)
    first = {tuple_id(s, t): s for s, t in pairs}
    second = {tuple_id(s, t): t for s, t in pairs}
    lts1, lts2 = c1.as_lts(), c2.as_lts()
    lts1 = Coalgebra(relation.spec, lts1.carrier, lts1.structure)
    lts2 = Coalgebra(relation.spec, lts2.carrier, lts2.structure)
    return (
        check_homomorphism(first, relation, lts1).holds
        and check_homomorphism(second, relation, lts2).holds
    )


def _refine(transitions: Mapping[Hashable, Transitions]) -> dict[Hashable, int]:
    """Coarsest partition in which related nodes have the same labelled moves into blocks."""
    block = {node: 0 for node in transitions}
    count = 1
    while True:
        signatures: dict[tuple, int] = {}
        refined = {}
        for node, moves in transitions.items():
            signature = (block[node], frozenset((label, block[t]) for label, t in moves))
            refined[node] = signatures.setdefault(signature, len(signatures))
        if len(signatures) == count:
            return refined
        block, count = refined, len(signatures)


def greatest_bisimulation(c1: Coalgebra, c2: Coalgebra) -> Bisimulation:
    """
    The union of all bisimulations between two coalgebras.

    Computed by partition refinement on the disjoint union of the carriers.
    """
    _check_same_functor(c1, c2)
    transitions: dict[Hashable, Transitions] = {}
    for side, c in enumerate((c1, c2)):
        for s in c.carrier:
            transitions[(side, s)] = frozenset(
                (label, (side, t)) for label, t in c.transitions(s)
            )
    block = _refine(transitions)
    pairs = frozenset(
        (s, t) for s in c1.carrier for t in c2.carrier if block[(0, s)] == block[(1, t)]
    )
    logger.debug(f"greatest bisimulation relates {len(pairs)} pairs")
    return Bisimulation(pairs, c1, c2)


def greatest_fixed_point(monotone: Callable[[frozenset], frozenset], top: frozenset) -> frozenset:
    """Iterate a monotone map down from ``top`` until it stabilizes."""
    current = top
    while True:
        following = monotone(current)
        if following == current:
            return current
        current = following


def naive_greatest_bisimulation(c1: Coalgebra, c2: Coalgebra) -> Bisimulation:
    """The greatest fixed point of relation shrinking, without partitions."""
    _check_same_functor(c1, c2)

    def step(relation: frozenset) -> frozenset:
        def zig(s: str, t: str) -> bool:
            return all(
                any(l2 == label and (s2, t2) in relation for l2, t2 in c2.transitions(t))
                for label, s2 in c1.transitions(s)
            )

        def zag(s: str, t: str) -> bool:
            return all(
                any(l1 == label and (s2, t2) in relation for l1, s2 in c1.transitions(s))
                for label, t2 in c2.transitions(t)
            )

        return frozenset((s, t) for s, t in relation if zig(s, t) and zag(s, t))

    top = frozenset((s, t) for s in c1.carrier for t in c2.carrier)
    return Bisimulation(greatest_fixed_point(step, top), c1, c2)


def minimize(c: Coalgebra) -> tuple[Coalgebra, dict[str, str]]:
    """
    Quotient by the greatest self-bisimulation.

    Returns:
        The minimal coalgebra, whose states are the least members of their
        classes, and the quotient homomorphism onto it
    """
    block = _refine({s: c.transitions(s) for s in c.carrier})
    representative: dict[int, str] = {}
    for s in sorted(c.carrier):
        representative.setdefault(block[s], s)
    quotient = {s: representative[block[s]] for s in c.carrier}
    carrier = tuple(s for s in c.carrier if quotient[s] == s)
    structure: dict[str, Any] = {}
    for s in carrier:
        match c.spec.kind:
            case FunctorKind.STREAM:
                output, t = c.structure[s]
                structure[s] = (output, quotient[t])
            case FunctorKind.POWERSET:
                structure[s] = frozenset(quotient[t] for t in c.structure[s])
            case _:
                structure[s] = frozenset((label, quotient[t]) for label, t in c.transitions(s))
    return Coalgebra(c.spec, carrier, structure), quotient


def behavior(c: Coalgebra, state: str, k: int) -> list[str]:
    """The first ``k`` outputs of a stream state, by unfolding head and tail."""
    if c.spec.kind != FunctorKind.STREAM:
        raise StructuralError("behavior is defined for stream coalgebras")
    if k < 0:
        raise ValidationError("depth must be nonnegative")
    word = []
    for _ in range(k):
        output, state = c.structure[state]
        word.append(output)
    return word


# --- Metric coinduction ---


@dataclass
class CoinductionCertificate:
    modulus: float
    estimated: bool
    iterations: int
    ratios: list[float] = field(default_factory=list)
    final_step: float = 0.0
    phi_holds: bool | None = None

    @property
    def max_ratio(self) -> float:
        return max(self.ratios, default=0.0)


def _sup(v: np.ndarray) -> float:
    return float(np.max(np.abs(v))) if v.size else 0.0


def metric_coinduction_iterate(
    h: Callable[[np.ndarray], np.ndarray],
    x0: Sequence[float] | np.ndarray,
    modulus: float | None = None,
    tol: float | None = None,
    phi: Callable[[np.ndarray], bool] | None = None,
    max_iter: int = 10_000,
    burn_in: int = 5,
) -> tuple[np.ndarray, CoinductionCertificate]:
    """
    Iterate a contraction to its fixed point with an a-posteriori error bound.

    Stops once the last step is at most ``tol (1 - c) / c``, so the returned
    point is within ``tol`` of the fixed point in the sup norm.

    Args:
        h: The map, on float vectors
        x0: Starting point
        modulus: Contraction modulus c in [0, 1); estimated from a burn-in when None
        tol: Target accuracy, ``settings.tolerance`` by default
        phi: A property closed under h, re-checked at the result
        max_iter: Hard cap on iterations
        burn_in: Steps observed before estimating the modulus

    Returns:
        The approximate fixed point and the certificate

    Raises:
        NonContractionError: After 10 consecutive non-shrinking steps
    """
    tol = settings.tolerance if tol is None else tol
    if tol <= 0:
        raise ValidationError("tolerance must be positive")
    if modulus is not None and not 0 <= modulus < 1:
        raise ValidationError(f"modulus {modulus} is not in [0, 1)")
    x = np.asarray(x0, dtype=float)
    certificate = CoinductionCertificate(modulus if modulus is not None else 1.0, False, 0)
    c = modulus
    previous = None
    stalled = 0
    for _ in range(max_iter):
        y = np.asarray(h(x), dtype=float)
        if y.shape != x.shape:
            raise ValidationError(f"map changed the shape {x.shape} to {y.shape}")
        step = _sup(y - x)
        x = y
        certificate.iterations += 1
        certificate.final_step = step
        if previous is not None and previous > 0:
            ratio = step / previous
            certificate.ratios.append(ratio)
            stalled = stalled + 1 if ratio >= 1 else 0
            if stalled >= 10:
                raise NonContractionError(
                    f"distance did not shrink for {stalled} consecutive steps"
                )
        previous = step
        if c is None and len(certificate.ratios) >= burn_in:
            estimate = max(certificate.ratios[-burn_in:])
            if estimate < 1:
                c = estimate
                certificate.modulus, certificate.estimated = c, True
                logger.warning(f"contraction modulus estimated heuristically as {c:.6g}")
        if step == 0 or c == 0:
            break
        if c is not None and step <= tol * (1 - c) / c:
            break
    else:
        raise NonContractionError(f"no convergence within {max_iter} iterations")
    if phi is not None:
        certificate.phi_holds = bool(phi(x))
    return x, certificate


@dataclass
class EventualContractionReport:
    h_modulus: float
    h2_modulus: float

    @property
    def h_contracts(self) -> bool:
        return self.h_modulus < 1

    @property
    def h2_contracts(self) -> bool:
        return self.h2_modulus < 1


def eventual_contraction(
    h: Callable[[np.ndarray], np.ndarray], points: Sequence[np.ndarray]
) -> EventualContractionReport:
    """Largest observed Lipschitz ratio of H and of H∘H over all pairs of sample points."""

    def ratio(g: Callable[[np.ndarray], np.ndarray]) -> float:
        worst = 0.0
        for i, u in enumerate(points):
            for v in points[i + 1 :]:
                gap = _sup(np.asarray(u, dtype=float) - np.asarray(v, dtype=float))
                if gap > 0:
                    worst = max(worst, _sup(g(u) - g(v)) / gap)
        return worst

    return EventualContractionReport(ratio(h), ratio(lambda v: h(h(v))))


# --- Learner dynamics ---


@dataclass
class DynamicalCoalgebra:
    """
    A learner as a state machine on its parameters.

    One transition consumes a training pair ``(a, b)``, emits the prediction
    ``I(p, a)`` and moves to ``U(p, a, b)``. A stochastic learner makes the
    transition random.
    """

    learner: Learner
    spec: EndofunctorSpec = field(
        default_factory=lambda: EndofunctorSpec(FunctorKind.BACKPROP_DYN)
    )

    def transition(
        self, params: np.ndarray, a: np.ndarray, b: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray]:
        output = self.learner.implement(params, a)
        return output, self.learner.update(params, a, b)

    def run(
        self, params: np.ndarray, inputs: Iterable[tuple[np.ndarray, np.ndarray]]
    ) -> list[np.ndarray]:
        """
        The parameter trajectory, starting with ``params``.

        Each run restarts the learner's step counter and random streams.
        """
        learner = self.learner.fresh()
        trajectory = [np.asarray(params, dtype=float)]
        for a, b in inputs:
            trajectory.append(learner.update(trajectory[-1], np.asarray(a), np.asarray(b)))
        return trajectory
