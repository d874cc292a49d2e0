"""
A transformer block as a permutation-equivariant map on d × n matrices.

Columns of X are tokens. Attention mixes columns with a column-wise softmax
of the key/query scores, and the feed-forward part acts on every column
alike, so ``f(XP) = f(X)P`` for every permutation matrix P.
"""

import itertools
import logging
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from gaiakit.errors import ArityError, ValidationError

logger = logging.getLogger(__name__)


def column_softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=0, keepdims=True)
    weights = np.exp(shifted)
    return weights / weights.sum(axis=0, keepdims=True)


@dataclass(frozen=True)
class TransformerBlock:
    """
    Weights of one block with ``heads`` attention heads.

    Attributes:
        d: Token dimension
        heads: Number of heads h
        m: Head size
        r: Hidden width of the feed-forward layer
        w_o, w_v, w_k, w_q: Per-head weights, shaped (h, d, m) for W_O and
            (h, m, d) for the others
        w_1, b_1, w_2: Feed-forward weights, shaped (r, d), (r,) and (d, r)
        n: Fixed token count, or None to accept any
    """

    d: int
    heads: int
    m: int
    r: int
    w_o: np.ndarray
    w_v: np.ndarray
    w_k: np.ndarray
    w_q: np.ndarray
    w_1: np.ndarray
    b_1: np.ndarray
    w_2: np.ndarray
    n: int | None = None

    def __post_init__(self):
        h, d, m, r = self.heads, self.d, self.m, self.r
        expected = {
            "w_o": (h, d, m),
            "w_v": (h, m, d),
            "w_k": (h, m, d),
            "w_q": (h, m, d),
            "w_1": (r, d),
            "b_1": (r,),
            "w_2": (d, r),
        }
        for name, shape in expected.items():
            actual = np.shape(getattr(self, name))
            if actual != shape:
                raise ArityError(f"{name} has shape {actual}, expected {shape}")

    @classmethod
    def zeros(cls, d: int, heads: int, m: int, r: int) -> "TransformerBlock":
        return cls(
            d,
            heads,
            m,
            r,
            np.zeros((heads, d, m)),
            np.zeros((heads, m, d)),
            np.zeros((heads, m, d)),
            np.zeros((heads, m, d)),
            np.zeros((r, d)),
            np.zeros(r),
            np.zeros((d, r)),
        )

    @classmethod
    def random(
        cls, d: int, heads: int, m: int, r: int, rng: np.random.Generator, scale: float = 0.5
    ) -> "TransformerBlock":
        def draw(*shape: int) -> np.ndarray:
            return scale * rng.standard_normal(shape)

        return cls(
            d,
            heads,
            m,
            r,
            draw(heads, d, m),
            draw(heads, m, d),
            draw(heads, m, d),
            draw(heads, m, d),
            draw(r, d),
            draw(r),
            draw(d, r),
        )

    def attention(self, x: np.ndarray) -> np.ndarray:
        """``X + Σ_i W_O^i W_V^i X σ[(W_K^i X)^T W_Q^i X]``."""
        out = x.copy()
        for i in range(self.heads):
            scores = (self.w_k[i] @ x).T @ (self.w_q[i] @ x)
            out += self.w_o[i] @ self.w_v[i] @ x @ column_softmax(scores)
        return out

    def apply(self, x) -> np.ndarray:
        """``Attn(X) + W_2 ReLU(W_1 Attn(X) + b_1 1^T)``."""
        x = np.asarray(x, dtype=float)
        if x.ndim != 2 or x.shape[0] != self.d:
            raise ArityError(f"input has shape {x.shape}, expected ({self.d}, n)")
        if self.n is not None and x.shape[1] != self.n:
            raise ArityError(f"input has {x.shape[1]} tokens, expected {self.n}")
        attended = self.attention(x)
        hidden = np.maximum(self.w_1 @ attended + self.b_1[:, None], 0.0)
        return attended + self.w_2 @ hidden


def transformer_block_apply(block: TransformerBlock, x) -> np.ndarray:
    return block.apply(x)


def compose_blocks(*blocks: TransformerBlock) -> Callable[[np.ndarray], np.ndarray]:
    """Apply the blocks left to right."""
    if not blocks:
        raise ValidationError("compose at least one block")
    if len({b.d for b in blocks}) > 1:
        raise ArityError("blocks disagree on the token dimension")

    def stacked(x: np.ndarray) -> np.ndarray:
        for block in blocks:
            x = block.apply(x)
        return x

    return stacked


def permutation_matrix(permutation: Sequence[int]) -> np.ndarray:
    """The matrix P with ``(XP)[:, j] = X[:, permutation[j]]``."""
    n = len(permutation)
    if sorted(permutation) != list(range(n)):
        raise ValidationError(f"{list(permutation)} is not a permutation of 0..{n - 1}")
    p = np.zeros((n, n))
    for j, i in enumerate(permutation):
        p[i, j] = 1.0
    return p


def sample_permutations(
    n: int, rng: np.random.Generator, count: int = 24
) -> Iterable[tuple[int, ...]]:
    """Every permutation when n <= 4, otherwise ``count`` random ones."""
    if n <= 4:
        return itertools.permutations(range(n))
    return (tuple(int(i) for i in rng.permutation(n)) for _ in range(count))


def check_equivariance(
    f: Callable[[np.ndarray], np.ndarray],
    x: np.ndarray,
    permutations: Iterable[Sequence[int]],
) -> float:
    """Largest entry of ``|f(XP) - f(X)P|`` over the given permutations."""
    x = np.asarray(x, dtype=float)
    fx = f(x)
    worst = 0.0
    for permutation in permutations:
        p = permutation_matrix(permutation)
        worst = max(worst, float(np.max(np.abs(f(x @ p) - fx @ p))))
    return worst
