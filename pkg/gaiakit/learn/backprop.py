"""
Backpropagation as a functor from parameterized functions to learners.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from gaiakit.learn.expr import ParamFn, Vector
from gaiakit.learn.learner import (
    ErrorFn,
    Learner,
    compose_seq,
    default_epsilon,
    quadratic,
    restart,
)

logger = logging.getLogger(__name__)


def error_gradients(
    f: ParamFn, error: ErrorFn, p: Vector, a: Vector, b: Vector
) -> tuple[Vector, Vector]:
    """``(∇_p E, ∇_a E)`` for ``E(p, a, b) = Σ_j e(I_j(p, a), b_j)``."""
    return f.vjp(p, a, error.dx(f.forward(p, a), b))


def backprop_functor(
    f: ParamFn,
    epsilon: float | None = None,
    error: ErrorFn | None = None,
    params: Vector | None = None,
) -> Learner:
    """
    The learner ``L_{ε,e}(f)``.

    ``U(p, a, b) = p - ε ∇_p E(p, a, b)`` and ``r(p, a, b) = f_a(∇_a E(p, a, b))``
    with f_a the componentwise inverse of ``∂e/∂x(a_i, -)``.

    Args:
        f: The parameterized function
        epsilon: Learning rate, ``settings.epsilon`` by default
        error: Error function, quadratic by default
        params: Initial parameters, zeros by default
    """
    epsilon = default_epsilon(epsilon)
    error = error or quadratic()

    def update(p, a, b):
        gp, _ = error_gradients(f, error, p, a, b)
        return p - epsilon * gp

    def request(p, a, b):
        _, ga = error_gradients(f, error, p, a, b)
        return error.invert(a, ga)

    initial = np.zeros(f.n_params) if params is None else np.asarray(params, dtype=float)
    return Learner(
        f.n_in, f.n_out, initial, f.forward, update, request, type(f).__name__.lower()
    )


@dataclass
class AgreementReport:
    holds: bool
    max_deviation: float
    samples: int
    worst: str | None = None


def _random_arguments(learner: Learner, rng: np.random.Generator) -> tuple[Vector, ...]:
    return (
        rng.standard_normal(learner.n_params),
        rng.standard_normal(learner.n_in),
        rng.standard_normal(learner.n_out),
    )


def compare_learners(
    left: Learner,
    right: Learner,
    samples: int = 20,
    rng: np.random.Generator | None = None,
    tolerance: float = 1e-9,
    transport: Callable[[Vector], Vector] | None = None,
) -> AgreementReport:
    """
    Evaluate I, U and r of two learners at random points and report the largest gap.

    ``transport`` maps parameters of ``left`` to parameters of ``right``; the
    identity by default.
    """
    rng = rng or np.random.default_rng(0)
    transport = transport or (lambda p: p)
    worst, where = 0.0, None
    for _ in range(samples):
        p, a, b = _random_arguments(left, rng)
        q = transport(p)
        gaps = {
            "implement": left.implement(p, a) - right.implement(q, a),
            "update": transport(left.update(p, a, b)) - right.update(q, a, b),
            "request": left.request(p, a, b) - right.request(q, a, b),
        }
        for part, gap in gaps.items():
            deviation = float(np.max(np.abs(gap), initial=0.0))
            if deviation > worst:
                worst, where = deviation, part
    return AgreementReport(worst <= tolerance, worst, samples, where)


def functoriality_check(
    f: ParamFn,
    g: ParamFn,
    epsilon: float | None = None,
    error: ErrorFn | None = None,
    samples: int = 20,
    rng: np.random.Generator | None = None,
    composite: Learner | None = None,
) -> AgreementReport:
    """
    Compare ``L(g ∘ f)`` against ``L(f) ; L(g)`` on I, U and r.

    ``composite`` replaces the right-hand side, to test a specific composite.
    """
    error = error or quadratic()
    whole = backprop_functor(f.then(g), epsilon, error)
    parts = composite or compose_seq(
        backprop_functor(f, epsilon, error), backprop_functor(g, epsilon, error)
    )
    report = compare_learners(whole, parts, samples, rng)
    logger.info(f"functoriality: max deviation {report.max_deviation:.3g} over {samples} samples")
    return report


def reparameterize(
    learner: Learner,
    forward: Callable[[Vector], Vector],
    backward: Callable[[Vector], Vector],
) -> Learner:
    """
    Transport a learner along a bijection of parameter spaces.

    The result has parameters ``forward(p)``; ``backward`` must invert ``forward``.
    """

    def implement(q, a):
        return learner.implement(backward(q), a)

    def update(q, a, b):
        return forward(learner.update(backward(q), a, b))

    def request(q, a, b):
        return learner.request(backward(q), a, b)

    return Learner(
        learner.n_in,
        learner.n_out,
        np.asarray(forward(learner.params), dtype=float),
        implement,
        update,
        request,
        f"{learner.name}'",
        learner.stochastic,
        restart(lambda: reparameterize(learner.fresh(), forward, backward), learner),
    )


def check_equivalence(
    learner: Learner,
    other: Learner,
    forward: Callable[[Vector], Vector],
    samples: int = 20,
    rng: np.random.Generator | None = None,
    tolerance: float = 1e-9,
) -> AgreementReport:
    """
    Check that ``forward`` witnesses an equivalence of learners.

    ``I'(f(p), a) = I(p, a)``, ``U'(f(p), a, b) = f(U(p, a, b))`` and
    ``r'(f(p), a, b) = r(p, a, b)`` at random points.
    """
    return compare_learners(learner, other, samples, rng, tolerance, forward)
