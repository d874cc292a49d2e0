"""
Pipelines of learners as simplicial sets.

A chain of learners ``L_0, ..., L_{k-1}`` generates a free category on the
path graph ``0 -> 1 -> ... -> k``. Its nerve is the simplicial set of the
pipeline; every morphism is realized as a learner by sequential composition
along its path.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from functools import reduce

import numpy as np

from gaiakit.errors import ArityError, ValidationError
from gaiakit.fincat import FinCategory, free_category
from gaiakit.learn.backprop import AgreementReport, compare_learners
from gaiakit.learn.learner import Learner, compose_seq, identity_learner
from gaiakit.simplicial import SimplicialSet, nerve

logger = logging.getLogger(__name__)


def layer_name(i: int) -> str:
    return f"L{i}"


@dataclass(frozen=True)
class LearnerNerve:
    category: FinCategory
    simplicial: SimplicialSet
    learners: tuple[Learner, ...]

    def width(self, obj: str) -> int:
        i = int(obj)
        return self.learners[i].n_in if i < len(self.learners) else self.learners[-1].n_out

    def realize(self, morphism: str) -> Learner:
        """The learner of a morphism: a composite along its path, or an identity."""
        if self.category.is_identity(morphism):
            return identity_learner(self.width(self.category.dom(morphism)))
        layers = [self.learners[int(key[1:])] for key in morphism.split(".")]
        return reduce(compose_seq, layers)

    def check_inner_fillers(
        self, samples: int = 20, rng: np.random.Generator | None = None, tolerance: float = 1e-9
    ) -> AgreementReport:
        """
        Check every 2-simplex: the learner of its inner face is the composite of its outer faces.
        """
        rng = rng or np.random.default_rng(0)
        x = self.simplicial
        worst = AgreementReport(True, 0.0, 0)
        if x.truncation < 2:
            return worst
        for sigma in x.nondegenerate(2):
            last, inner, first = (x.face(sigma, i) for i in range(3))
            report = compare_learners(
                self.realize(inner),
                compose_seq(self.realize(first), self.realize(last)),
                samples,
                rng,
                tolerance,
            )
            worst.samples += report.samples
            if report.max_deviation >= worst.max_deviation:
                worst.max_deviation, worst.worst = report.max_deviation, sigma
            worst.holds = worst.holds and report.holds
        return worst


def learner_nerve(pipeline: Sequence[Learner], truncation: int = 3) -> LearnerNerve:
    """
    The truncated nerve of the free category on a learner chain.

    Raises:
        ArityError: If consecutive learners do not compose
    """
    if not pipeline:
        raise ValidationError("a pipeline needs at least one learner")
    for i, (first, second) in enumerate(zip(pipeline, pipeline[1:])):
        if first.n_out != second.n_in:
            raise ArityError(
                f"layer {i} outputs {first.n_out} values but layer {i + 1} takes {second.n_in}"
            )
    objects = [str(i) for i in range(len(pipeline) + 1)]
    edges = [(layer_name(i), str(i), str(i + 1)) for i in range(len(pipeline))]
    category = free_category(objects, edges)
    x = nerve(category, truncation)
    sizes = [len(level) for level in x.levels]
    logger.info(f"pipeline of {len(pipeline)} learners, nerve levels {sizes}")
    return LearnerNerve(category, x, tuple(pipeline))
