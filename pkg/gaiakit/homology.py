"""
Integer homology of truncated simplicial sets.

Chains are normalized: the basis in each dimension is the set of
nondegenerate simplices and degenerate faces are dropped from boundaries.
Ranks and torsion come from the invariant factors of the boundary matrices
over ZZ, so all arithmetic is exact.
"""

import logging
from dataclasses import dataclass, field

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from gaiakit.elements import SetInstance, category_of_elements
from gaiakit.errors import ValidationError
from gaiakit.fincat import FinCategory
from gaiakit.simplicial import SimplicialSet, nerve

logger = logging.getLogger(__name__)

Matrix = list[list[int]]


@dataclass
class ChainComplex:
    """
    Normalized chain complex of a simplicial set.

    ``boundaries[n]`` is the matrix of ∂_n: C_n -> C_{n-1}, with one row per
    basis element of dimension n-1 and one column per basis element of
    dimension n. ``boundaries[0]`` has no rows.
    """

    bases: list[tuple[str, ...]]
    boundaries: list[Matrix]
    truncation: int

    @property
    def top_dimension(self) -> int:
        """Highest dimension with a basis element (0 for an empty complex)."""
        nonempty = [n for n, basis in enumerate(self.bases) if basis]
        return max(nonempty, default=0)


@dataclass
class HomologyResult:
    betti: list[int]
    torsion: list[list[int]]
    truncation: int
    # The top reported dimension equals the truncation: its Betti number may be too
    # large and its torsion incomplete, since (N+1)-cells are unknown.
    top_dimension_truncated: bool = False

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** n * b for n, b in enumerate(self.betti))


def _domain_matrix(rows: Matrix, shape: tuple[int, int]) -> DomainMatrix:
    return DomainMatrix([[ZZ(v) for v in row] for row in rows], shape, ZZ)


def _shape(complex_: ChainComplex, n: int) -> tuple[int, int]:
    rows = len(complex_.bases[n - 1]) if n >= 1 else 0
    return rows, len(complex_.bases[n])


def _factors(rows: Matrix, shape: tuple[int, int]) -> list[int]:
    """Nonzero invariant factors, as positive integers."""
    if 0 in shape:
        return []
    factors = invariant_factors(_domain_matrix(rows, shape))
    return [abs(int(f)) for f in factors if f]


def chain_complex(x: SimplicialSet) -> ChainComplex:
    """
    The normalized chain complex ``∂σ = Σ (-1)^i d_i σ``.

    Raises:
        ValidationError: If ∂∂ != 0, which only happens on an invalid simplicial set
    """
    bases = [x.nondegenerate(n) for n in range(x.truncation + 1)]
    index = [{sigma: i for i, sigma in enumerate(basis)} for basis in bases]
    boundaries: list[Matrix] = [[]]
    for n in range(1, x.truncation + 1):
        matrix = [[0] * len(bases[n]) for _ in bases[n - 1]]
        for col, sigma in enumerate(bases[n]):
            for i in range(n + 1):
                row = index[n - 1].get(x.face(sigma, i))
                if row is not None:
                    matrix[row][col] += (-1) ** i
        boundaries.append(matrix)
    complex_ = ChainComplex(bases, boundaries, x.truncation)

    for n in range(2, x.truncation + 1):
        outer, inner = _shape(complex_, n - 1), _shape(complex_, n)
        if 0 in outer or 0 in inner:
            continue
        square = _domain_matrix(boundaries[n - 1], outer) * _domain_matrix(boundaries[n], inner)
        if not square.is_zero_matrix:
            raise ValidationError(f"∂_{n - 1} ∘ ∂_{n} is not zero")
    logger.debug(f"chain complex with basis sizes {[len(b) for b in bases]}")
    return complex_


def homology(x: SimplicialSet | ChainComplex) -> HomologyResult:
    """
    Betti numbers and torsion coefficients in dimensions 0 to the top nondegenerate one.

    ``betti[n] = |B_n| - rank ∂_n - rank ∂_{n+1}`` and ``torsion[n]`` lists the
    invariant factors of ∂_{n+1} greater than one.
    """
    complex_ = x if isinstance(x, ChainComplex) else chain_complex(x)
    top = complex_.top_dimension
    factors = [
        _factors(complex_.boundaries[n], _shape(complex_, n))
        for n in range(complex_.truncation + 1)
    ]
    factors.append([])
    betti, torsion = [], []
    for n in range(top + 1):
        rank_out = len(factors[n]) if n >= 1 else 0
        rank_in = len(factors[n + 1])
        betti.append(len(complex_.bases[n]) - rank_out - rank_in)
        torsion.append([f for f in factors[n + 1] if f > 1])
    truncated = top == complex_.truncation
    if truncated:
        logger.warning(
            f"homology in dimension {top} is computed at the truncation bound; "
            f"Betti number {betti[top]} is an upper bound"
        )
    return HomologyResult(betti, torsion, complex_.truncation, truncated)


def euler_characteristic(complex_: ChainComplex) -> int:
    return sum((-1) ** n * len(basis) for n, basis in enumerate(complex_.bases))


def classifying_space_homology(c: FinCategory, truncation: int | None = None) -> HomologyResult:
    """Homology of the classifying space, through the truncated nerve."""
    return homology(nerve(c, truncation))


def hocolim_homology(instance: SetInstance, truncation: int | None = None) -> HomologyResult:
    """Homology of the homotopy colimit of a set-valued functor: the nerve of its elements."""
    return homology(nerve(category_of_elements(instance).category, truncation))


@dataclass
class Cell:
    simplex: str
    dimension: int
    faces: tuple[str, ...] = field(default_factory=tuple)


def cw_cells(x: SimplicialSet) -> list[Cell]:
    """Nondegenerate cells of the realization, with the faces they are attached along."""
    return [
        Cell(sigma, n, tuple(x.faces.get(sigma, ())))
        for n in range(x.truncation + 1)
        for sigma in x.nondegenerate(n)
    ]


def boundary_triplets(complex_: ChainComplex) -> list[tuple[int, int, int, int]]:
    """Nonzero boundary entries as ``(dimension, row, column, value)``."""
    return [
        (n, row, col, value)
        for n, matrix in enumerate(complex_.boundaries)
        for row, entries in enumerate(matrix)
        for col, value in enumerate(entries)
        if value
    ]
