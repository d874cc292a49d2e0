"""
Parameterized differentiable functions.

A ``ParamFn`` computes ``I(p, a)`` for real vectors p and a and provides the
vector-Jacobian product ``(∇_p, ∇_a)`` of a cotangent on its output. Functions
form a tree of primitives joined by sequential and parallel composition; the
reverse pass walks that tree, so gradients are exact by construction.
"""

from abc import ABC, abstractmethod
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from gaiakit.errors import ArityError, ValidationError

Vector = np.ndarray


def as_vector(value, size: int, what: str) -> Vector:
    v = np.asarray(value, dtype=float).reshape(-1)
    if v.size != size:
        raise ArityError(f"{what} has size {v.size}, expected {size}")
    return v


class ParamFn(ABC):
    """
    Abstract base class for parameterized functions ``I: P × A -> B``.

    Subclasses declare their arities and implement the forward map and its
    vector-Jacobian product.
    """

    n_params: int
    n_in: int
    n_out: int

    @abstractmethod
    def forward(self, p: Vector, a: Vector) -> Vector: ...

    @abstractmethod
    def vjp(self, p: Vector, a: Vector, cotangent: Vector) -> tuple[Vector, Vector]:
        """
        Pull a cotangent on the output back to parameters and inputs.

        Returns:
            ``(cotangent · ∂I/∂p, cotangent · ∂I/∂a)``
        """
        ...

    def __call__(self, p, a) -> Vector:
        return self.forward(
            as_vector(p, self.n_params, "parameter vector"), as_vector(a, self.n_in, "input")
        )

    def then(self, g: "ParamFn") -> "ParamFn":
        """``g ∘ self`` in Param: parameters are concatenated with this function's first."""
        return Sequential(self, g)

    def alongside(self, g: "ParamFn") -> "ParamFn":
        return Parallel(self, g)

    def jacobians(self, p, a) -> tuple[np.ndarray, np.ndarray]:
        """Full Jacobians ``∂I/∂p`` (n_out × n_params) and ``∂I/∂a`` (n_out × n_in)."""
        p = as_vector(p, self.n_params, "parameter vector")
        a = as_vector(a, self.n_in, "input")
        jp = np.zeros((self.n_out, self.n_params))
        ja = np.zeros((self.n_out, self.n_in))
        for j, row in enumerate(np.eye(self.n_out)):
            jp[j], ja[j] = self.vjp(p, a, row)
        return jp, ja


# --- Primitives ---


@dataclass(frozen=True)
class Affine(ParamFn):
    """``W a + c`` with W stored row-major, followed by c, in the parameter vector."""

    n_in: int
    n_out: int

    @property
    def n_params(self) -> int:
        return self.n_out * self.n_in + self.n_out

    def _split(self, p: Vector) -> tuple[np.ndarray, Vector]:
        k = self.n_out * self.n_in
        return p[:k].reshape(self.n_out, self.n_in), p[k:]

    def forward(self, p, a):
        w, c = self._split(p)
        return w @ a + c

    def vjp(self, p, a, cotangent):
        w, _ = self._split(p)
        return np.concatenate([np.outer(cotangent, a).reshape(-1), cotangent]), w.T @ cotangent


UNARY: dict[str, tuple[Callable[[Vector], Vector], Callable[[Vector], Vector]]] = {
    "identity": (lambda x: x, np.ones_like),
    "tanh": (np.tanh, lambda x: 1 - np.tanh(x) ** 2),
    "sigmoid": (
        lambda x: 1 / (1 + np.exp(-x)),
        lambda x: np.exp(-x) / (1 + np.exp(-x)) ** 2,
    ),
    "relu": (lambda x: np.maximum(x, 0.0), lambda x: (x > 0).astype(float)),
    "square": (np.square, lambda x: 2 * x),
    "sin": (np.sin, np.cos),
    "exp": (np.exp, np.exp),
}


@dataclass(frozen=True)
class Pointwise(ParamFn):
    name: str
    n: int

    def __post_init__(self):
        if self.name not in UNARY:
            raise ValidationError(f"unknown nonlinearity '{self.name}', known: {sorted(UNARY)}")

    n_params = 0

    @property
    def n_in(self) -> int:
        return self.n

    @property
    def n_out(self) -> int:
        return self.n

    def forward(self, p, a):
        return UNARY[self.name][0](a)

    def vjp(self, p, a, cotangent):
        return np.zeros(0), cotangent * UNARY[self.name][1](a)


@dataclass(frozen=True)
class ScalarProduct(ParamFn):
    """``p · a`` on scalars."""

    n_params = 1
    n_in = 1
    n_out = 1

    def forward(self, p, a):
        return p * a

    def vjp(self, p, a, cotangent):
        return cotangent * a, cotangent * p


@dataclass(frozen=True)
class Bias(ParamFn):
    """``a + p``."""

    n: int

    @property
    def n_params(self) -> int:
        return self.n

    @property
    def n_in(self) -> int:
        return self.n

    @property
    def n_out(self) -> int:
        return self.n

    def forward(self, p, a):
        return a + p

    def vjp(self, p, a, cotangent):
        return cotangent.copy(), cotangent.copy()


# --- Composites ---


@dataclass(frozen=True)
class Sequential(ParamFn):
    first: ParamFn
    second: ParamFn

    def __post_init__(self):
        if self.first.n_out != self.second.n_in:
            raise ArityError(
                f"cannot compose: output arity {self.first.n_out} "
                f"meets input arity {self.second.n_in}"
            )

    @property
    def n_params(self) -> int:
        return self.first.n_params + self.second.n_params

    @property
    def n_in(self) -> int:
        return self.first.n_in

    @property
    def n_out(self) -> int:
        return self.second.n_out

    def _split(self, p: Vector) -> tuple[Vector, Vector]:
        return p[: self.first.n_params], p[self.first.n_params :]

    def forward(self, p, a):
        p1, p2 = self._split(p)
        return self.second.forward(p2, self.first.forward(p1, a))

    def vjp(self, p, a, cotangent):
        p1, p2 = self._split(p)
        b = self.first.forward(p1, a)
        g2, gb = self.second.vjp(p2, b, cotangent)
        g1, ga = self.first.vjp(p1, a, gb)
        return np.concatenate([g1, g2]), ga


@dataclass(frozen=True)
class Parallel(ParamFn):
    left: ParamFn
    right: ParamFn

    @property
    def n_params(self) -> int:
        return self.left.n_params + self.right.n_params

    @property
    def n_in(self) -> int:
        return self.left.n_in + self.right.n_in

    @property
    def n_out(self) -> int:
        return self.left.n_out + self.right.n_out

    def forward(self, p, a):
        k, m = self.left.n_params, self.left.n_in
        return np.concatenate(
            [self.left.forward(p[:k], a[:m]), self.right.forward(p[k:], a[m:])]
        )

    def vjp(self, p, a, cotangent):
        k, m, o = self.left.n_params, self.left.n_in, self.left.n_out
        gp1, ga1 = self.left.vjp(p[:k], a[:m], cotangent[:o])
        gp2, ga2 = self.right.vjp(p[k:], a[m:], cotangent[o:])
        return np.concatenate([gp1, gp2]), np.concatenate([ga1, ga2])


# --- Builders ---


def affine(n_in: int, n_out: int) -> ParamFn:
    return Affine(n_in, n_out)


def pointwise(name: str, n: int) -> ParamFn:
    return Pointwise(name, n)


def scalar_product() -> ParamFn:
    return ScalarProduct()


def bias(n: int) -> ParamFn:
    return Bias(n)


def identity_fn(n: int) -> ParamFn:
    return Pointwise("identity", n)


def gradient_check(
    f: ParamFn, rng: np.random.Generator, samples: int = 1, step: float = 1e-6
) -> float:
    """
    Largest relative error between ``vjp`` and central finite differences.

    Each sample draws p, a and an output cotangent w from a standard normal
    and differentiates the scalar ``w · I(p, a)``.
    """
    worst = 0.0
    for _ in range(samples):
        p = rng.standard_normal(f.n_params)
        a = rng.standard_normal(f.n_in)
        w = rng.standard_normal(f.n_out)
        gp, ga = f.vjp(p, a, w)
        analytic = np.concatenate([gp, ga])
        point = np.concatenate([p, a])
        k = f.n_params

        def scalar(v: Vector) -> float:
            return float(w @ f.forward(v[:k], v[k:]))

        numeric = np.zeros_like(point)
        for i in range(point.size):
            e = np.zeros_like(point)
            e[i] = step
            numeric[i] = (scalar(point + e) - scalar(point - e)) / (2 * step)
        scale = np.maximum(1.0, np.abs(analytic) + np.abs(numeric))
        if point.size:
            worst = max(worst, float(np.max(np.abs(analytic - numeric) / scale)))
    return worst
