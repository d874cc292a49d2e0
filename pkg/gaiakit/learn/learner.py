"""
Learners and their composition.

A learner ``A -> B`` is a parameter vector with an implementation
``I(p, a)``, an update ``U(p, a, b)`` and a request ``r(p, a, b)``. Learners
compose sequentially (the request of the second becomes the training signal
of the first) and in parallel (blockwise on concatenated vectors).
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field, replace

import numpy as np

from gaiakit.config import settings
from gaiakit.errors import ArityError, ValidationError
from gaiakit.learn.expr import Vector, as_vector

logger = logging.getLogger(__name__)


# --- Error functions ---


@dataclass(frozen=True)
class ErrorFn:
    """
    A componentwise error ``e(x, y)`` whose ``∂e/∂x(x0, -)`` is invertible.

    Attributes:
        name: Identifier used by pipeline files
        value: ``e(x, y)``, vectorized
        dx: ``∂e/∂x(x, y)``, vectorized
        invert: ``(x0, v) ↦ y`` with ``∂e/∂x(x0, y) = v``
    """

    name: str
    value: Callable[[Vector, Vector], Vector]
    dx: Callable[[Vector, Vector], Vector]
    invert: Callable[[Vector, Vector], Vector]

    def __post_init__(self):
        rng = np.random.default_rng(0)
        x0, y = rng.uniform(-2, 2, size=(2, 16))
        recovered = self.invert(x0, self.dx(x0, y))
        if not np.allclose(recovered, y, rtol=0, atol=1e-9):
            raise ValidationError(
                f"∂e/∂x of error '{self.name}' is not inverted by its inverse"
            )

    def total(self, x: Vector, y: Vector) -> float:
        return float(np.sum(self.value(x, y)))


def quadratic() -> ErrorFn:
    """``½(x - y)²``, whose request rule is ``f_a(v) = a - v``."""
    return ErrorFn(
        "quadratic",
        lambda x, y: 0.5 * (x - y) ** 2,
        lambda x, y: x - y,
        lambda x0, v: x0 - v,
    )


def _artanh(v: Vector) -> Vector:
    if np.any(np.abs(v) >= 1):
        raise ValidationError("request signal leaves (-1, 1), the range of tanh")
    return np.arctanh(v)


def log_cosh() -> ErrorFn:
    """``log cosh(x - y)``, whose request rule is ``f_a(v) = a - artanh(v)``."""
    return ErrorFn(
        "log_cosh",
        lambda x, y: np.logaddexp(x - y, y - x) - np.log(2.0),
        lambda x, y: np.tanh(x - y),
        lambda x0, v: x0 - _artanh(v),
    )


ERRORS: dict[str, Callable[[], ErrorFn]] = {"quadratic": quadratic, "log_cosh": log_cosh}


def error_fn(name: str) -> ErrorFn:
    try:
        return ERRORS[name]()
    except KeyError:
        raise ValidationError(f"unknown error function '{name}', known: {sorted(ERRORS)}") from None


# --- Learners ---


Implement = Callable[[Vector, Vector], Vector]
Train = Callable[[Vector, Vector, Vector], Vector]


@dataclass(frozen=True)
class Learner:
    """
    A morphism ``A -> B`` of learners.

    Attributes:
        n_in: Arity of A
        n_out: Arity of B
        params: Current parameter value; its size is the parameter arity
        implement: ``I(p, a)``
        update: ``U(p, a, b)``
        request: ``r(p, a, b)``
        name: Label used in reports
        stochastic: Whether the update or request draws random numbers
        start: Builds the same learner with its per-run state reset
    """

    n_in: int
    n_out: int
    params: Vector
    implement: Implement
    update: Train
    request: Train
    name: str = "learner"
    stochastic: bool = field(default=False, compare=False)
    start: Callable[[], "Learner"] | None = field(default=None, compare=False, repr=False)

    @property
    def n_params(self) -> int:
        return int(np.asarray(self.params).size)

    def __call__(self, a) -> Vector:
        return self.implement(self.params, as_vector(a, self.n_in, "input"))

    def with_params(self, params) -> "Learner":
        return replace(self, params=as_vector(params, self.n_params, "parameter vector"))

    def step(self, a, b) -> "Learner":
        """The learner after one update on the pair ``(a, b)``."""
        a = as_vector(a, self.n_in, "input")
        b = as_vector(b, self.n_out, "target")
        return replace(self, params=self.update(self.params, a, b))

    def fresh(self) -> "Learner":
        """This learner at the current parameters, with step counters and random streams reset."""
        if self.start is None:
            return self
        return replace(self.start(), params=self.params)


def restart(build: Callable[[], Learner], *parts: Learner) -> Callable[[], Learner] | None:
    """``build`` when some part carries per-run state, else None."""
    return build if any(part.start is not None for part in parts) else None


def compose_seq(first: Learner, second: Learner) -> Learner:
    """
    ``first ; second``, a learner ``A -> C`` with parameters ``(p, q)``.

    ``(I·J)(p, q, a) = J(q, I(p, a))``. The update sends ``p`` to
    ``U_I(p, a, s(q, I(p, a), c))`` and ``q`` to ``U_J(q, I(p, a), c)``, and the
    request is ``r_I(p, a, s(q, I(p, a), c))``, where s is the request of
    the second learner.
    """
    if first.n_out != second.n_in:
        raise ArityError(
            f"cannot compose '{first.name}' (out {first.n_out}) with "
            f"'{second.name}' (in {second.n_in})"
        )
    k = first.n_params

    def implement(pq, a):
        return second.implement(pq[k:], first.implement(pq[:k], a))

    def update(pq, a, c):
        p, q = pq[:k], pq[k:]
        b = first.implement(p, a)
        signal = second.request(q, b, c)
        return np.concatenate([first.update(p, a, signal), second.update(q, b, c)])

    def request(pq, a, c):
        p, q = pq[:k], pq[k:]
        b = first.implement(p, a)
        return first.request(p, a, second.request(q, b, c))

    return Learner(
        first.n_in,
        second.n_out,
        np.concatenate([first.params, second.params]),
        implement,
        update,
        request,
        f"({first.name} ; {second.name})",
        first.stochastic or second.stochastic,
        restart(lambda: compose_seq(first.fresh(), second.fresh()), first, second),
    )


def compose_par(left: Learner, right: Learner) -> Learner:
    """``left ∥ right`` on concatenated inputs, outputs and parameters."""
    k, m, o = left.n_params, left.n_in, left.n_out

    def implement(pq, ac):
        return np.concatenate([left.implement(pq[:k], ac[:m]), right.implement(pq[k:], ac[m:])])

    def update(pq, ac, bd):
        return np.concatenate(
            [left.update(pq[:k], ac[:m], bd[:o]), right.update(pq[k:], ac[m:], bd[o:])]
        )

    def request(pq, ac, bd):
        return np.concatenate(
            [left.request(pq[:k], ac[:m], bd[:o]), right.request(pq[k:], ac[m:], bd[o:])]
        )

    return Learner(
        left.n_in + right.n_in,
        left.n_out + right.n_out,
        np.concatenate([left.params, right.params]),
        implement,
        update,
        request,
        f"({left.name} ∥ {right.name})",
        left.stochastic or right.stochastic,
        restart(lambda: compose_par(left.fresh(), right.fresh()), left, right),
    )


def identity_learner(n: int) -> Learner:
    """No parameters; passes inputs forward and targets back unchanged."""
    return Learner(
        n,
        n,
        np.zeros(0),
        lambda p, a: a,
        lambda p, a, b: p,
        lambda p, a, b: b,
        f"id{n}",
    )


def empty_learner() -> Learner:
    """The monoidal unit: a learner between zero-dimensional spaces."""
    return identity_learner(0)


def braiding(m: int, n: int) -> Learner:
    """``σ(a, b) = (b, a)``; the request swaps the target back."""
    return Learner(
        m + n,
        n + m,
        np.zeros(0),
        lambda p, ab: np.concatenate([ab[m:], ab[:m]]),
        lambda p, ab, ba: p,
        lambda p, ab, ba: np.concatenate([ba[n:], ba[:n]]),
        f"σ{m},{n}",
    )


# --- Training ---


@dataclass
class TrainResult:
    params: Vector
    trajectory: list[Vector] = field(default_factory=list)
    losses: list[float] = field(default_factory=list)


def dataset_loss(learner: Learner, params: Vector, dataset, error: ErrorFn) -> float:
    """Mean of ``Σ_j e(I_j(p, a), b_j)`` over the dataset."""
    return float(
        np.mean([error.total(learner.implement(params, a), b) for a, b in dataset])
    )


def train(
    learner: Learner,
    dataset,
    epochs: int,
    error: ErrorFn | None = None,
) -> TrainResult:
    """
    Apply the update over the dataset in order, once per epoch.

    Returns:
        Final parameters, the parameters after each epoch (starting with the
        initial ones) and the mean error at the end of each epoch
    """
    pairs = [
        (as_vector(a, learner.n_in, "input"), as_vector(b, learner.n_out, "target"))
        for a, b in dataset
    ]
    if not pairs:
        raise ValidationError("cannot train on an empty dataset")
    if epochs < 0:
        raise ValidationError("epochs must be nonnegative")
    error = error or quadratic()
    learner = learner.fresh()
    params = np.asarray(learner.params, dtype=float)
    result = TrainResult(params, [params])
    for epoch in range(epochs):
        for a, b in pairs:
            params = learner.update(params, a, b)
        result.trajectory.append(params)
        result.losses.append(dataset_loss(learner, params, pairs, error))
        logger.debug(f"{learner.name} epoch {epoch + 1}: loss {result.losses[-1]:.6g}")
    result.params = params
    return result


def default_epsilon(epsilon: float | None) -> float:
    epsilon = settings.epsilon if epsilon is None else epsilon
    if epsilon <= 0:
        raise ValidationError(f"learning rate must be positive, got {epsilon}")
    return epsilon
