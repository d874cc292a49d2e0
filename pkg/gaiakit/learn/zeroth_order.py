"""
Stochastic learners from zeroth-order optimization.

Gradients are replaced by random-direction finite differences of the
error, so only evaluations of ``I`` are needed. Each learner owns a seeded
random stream and a step counter feeding the learning-rate schedule.
"""

import itertools
import logging
from collections.abc import Callable

import numpy as np

from gaiakit.config import settings
from gaiakit.errors import ValidationError
from gaiakit.learn.expr import ParamFn, Vector
from gaiakit.learn.learner import ErrorFn, Learner, quadratic

logger = logging.getLogger(__name__)

Schedule = Callable[[int], float]


def harmonic_schedule(c: float) -> Schedule:
    """``ε_t = c / t``: positive, not summable, square summable."""
    if c <= 0:
        raise ValidationError("schedule constant must be positive")
    return lambda t: c / t


def random_direction(n: int, rng: np.random.Generator) -> Vector:
    """A uniform unit vector in ``R^n``."""
    u = rng.standard_normal(n)
    norm = np.linalg.norm(u)
    while norm == 0:
        u = rng.standard_normal(n)
        norm = np.linalg.norm(u)
    return u / norm


def two_point_estimate(
    objective: Callable[[Vector], float],
    x: Vector,
    delta: float,
    rng: np.random.Generator,
    scaled: bool = False,
) -> Vector:
    """
    ``[(E(x + δu) - E(x - δu)) / 2δ] u`` for one uniform unit direction u.

    Its mean is the gradient divided by the dimension n. With ``scaled=True``
    the estimate is multiplied by n, which makes it unbiased for quadratic E.
    """
    if delta <= 0:
        raise ValidationError(f"perturbation must be positive, got {delta}")
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return np.zeros(0)
    u = random_direction(x.size, rng)
    slope = (objective(x + delta * u) - objective(x - delta * u)) / (2 * delta)
    return x.size * slope * u if scaled else slope * u


def zeroth_order_functor(
    f: ParamFn,
    schedule: Schedule,
    delta: float | None = None,
    error: ErrorFn | None = None,
    seed: int | None = None,
    params: Vector | None = None,
    literal: bool = False,
    scaled: bool = False,
) -> Learner:
    """
    A stochastic learner descending ``E`` with two-point gradient estimates.

    With ``literal=True`` the update is ``p - ε_t E(p, a, b)`` applied to every
    coordinate, which uses the error value itself in place of a gradient.
    ``scaled`` is passed on to ``two_point_estimate``. Each run, see
    ``Learner.fresh``, restarts the random streams and the schedule.

    Raises:
        ValidationError: If δ is not positive
    """
    delta = settings.delta if delta is None else delta
    if delta <= 0:
        raise ValidationError(f"perturbation must be positive, got {delta}")
    error = error or quadratic()
    seed = settings.seed if seed is None else seed

    def loss(p, a, b) -> float:
        return error.total(f.forward(p, a), b)

    def start() -> Learner:
        update_rng, request_rng = np.random.default_rng(seed).spawn(2)
        steps = itertools.count(1)

        def update(p, a, b):
            rate = schedule(next(steps))
            if rate <= 0:
                raise ValidationError(f"schedule produced a non-positive rate {rate}")
            if literal:
                return p - rate * loss(p, a, b) * np.ones_like(p)
            gradient = two_point_estimate(lambda v: loss(v, a, b), p, delta, update_rng, scaled)
            return p - rate * gradient

        def request(p, a, b):
            ga = two_point_estimate(lambda v: loss(p, v, b), a, delta, request_rng, scaled)
            return error.invert(a, ga)

        return Learner(
            f.n_in,
            f.n_out,
            initial,
            f.forward,
            update,
            request,
            "zeroth_order",
            stochastic=True,
            start=start,
        )

    initial = np.zeros(f.n_params) if params is None else np.asarray(params, dtype=float)
    logger.debug(f"zeroth-order learner with δ={delta}, seed={seed}, literal={literal}")
    return start()
