"""
Grassmannian charts and Plücker coordinates.

A d-dimensional subspace of k^n is the row space of a rank-d d×n matrix;
its Plücker vector is the list of maximal minors, indexed by ascending
d-subsets of {1..n}.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from sympy.combinatorics import Permutation

from errors import RankDeficientError, SingularBlockError
from fields import CoefficientField, Scalar
from linalg import det, inverse, matmul, rank

logger = logging.getLogger(__name__)

Subset = tuple[int, ...]


@dataclass(frozen=True)
class ChartMatrix:
    field: CoefficientField
    rows: tuple[tuple[Scalar, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(self.field(a) for a in row) for row in self.rows)
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("chart matrices need equal-length rows")
        object.__setattr__(self, "rows", rows)

    @property
    def d(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    def block(self, J: Subset) -> list[list[Scalar]]:
        """Columns J (0-based)."""
        return [[row[j] for j in J] for row in self.rows]

    def format(self) -> str:
        K = self.field
        return "[" + ", ".join("[" + ", ".join(K.format(a) for a in r) + "]" for r in self.rows) + "]"


@dataclass(frozen=True)
class PlueckerVector:
    """Coordinates in ascending subset order; subsets are 1-based as in p_12."""

    field: CoefficientField
    d: int
    n: int
    coords: tuple[Scalar, ...]

    def __post_init__(self):
        expected = len(subsets(self.n, self.d))
        if len(self.coords) != expected:
            raise ValueError(f"Gr({self.d},{self.n}) has {expected} coordinates, got {len(self.coords)}")
        object.__setattr__(self, "coords", tuple(self.field(c) for c in self.coords))
        if all(c == 0 for c in self.coords):
            raise ValueError("a Plücker vector cannot be zero")

    def __getitem__(self, subset: Subset) -> Scalar:
        return self.coords[_subset_index(self.n, self.d)[tuple(subset)]]

    def as_dict(self) -> dict[Subset, Scalar]:
        return dict(zip(subsets(self.n, self.d), self.coords))

    def normalized(self) -> "PlueckerVector":
        """Scaled so the first nonzero coordinate is 1."""
        K = self.field
        lead = next(c for c in self.coords if c != 0)
        inv = K.inv(lead)
        return PlueckerVector(K, self.d, self.n, tuple(K.mul(c, inv) for c in self.coords))

    def same_point(self, other: "PlueckerVector") -> bool:
        return self.normalized() == other.normalized()

    def to_json(self) -> dict:
        K = self.field
        return {
            "d": self.d,
            "n": self.n,
            "coords": {"".join(map(str, s)): K.to_json(c) for s, c in self.as_dict().items()},
        }


@lru_cache(maxsize=None)
def subsets(n: int, d: int) -> tuple[Subset, ...]:
    """Ascending d-subsets of {1..n}, lexicographically ordered."""
    return tuple(combinations(range(1, n + 1), d))


@lru_cache(maxsize=None)
def _subset_index(n: int, d: int) -> dict[Subset, int]:
    return {s: i for i, s in enumerate(subsets(n, d))}


def pluecker(M: ChartMatrix) -> PlueckerVector:
    K = M.field
    if rank(M.rows, K) < M.d:
        raise RankDeficientError(f"a {M.d}x{M.n} chart matrix needs rank {M.d}")
    coords = tuple(det(M.block([j - 1 for j in s]), K) for s in subsets(M.n, M.d))
    return PlueckerVector(K, M.d, M.n, coords).normalized()


def _sign_sorted(seq: Sequence[int]) -> tuple[int, Subset]:
    """(sign of the sorting permutation, sorted tuple); sign 0 on a repeat."""
    if len(set(seq)) != len(seq):
        return 0, ()
    order = sorted(range(len(seq)), key=seq.__getitem__)
    return Permutation(order).signature(), tuple(seq[i] for i in order)


@lru_cache(maxsize=None)
def shuffle_relations(n: int, d: int) -> tuple[tuple[tuple[int, Subset, Subset], ...], ...]:
    """
    Quadratic relations Σ_s (-1)^s p_{I ∪ j_s} p_{J \\ j_s}, for every
    (d-1)-subset I and (d+1)-subset J, each as a list of (sign, S, T) with
    sorted S, T. Trivial and repeated relations are dropped.
    """
    if d <= 1 or d >= n:
        return ()
    seen = set()
    out = []
    for I in combinations(range(1, n + 1), d - 1):
        for J in combinations(range(1, n + 1), d + 1):
            acc: dict[tuple[Subset, Subset], int] = {}
            for s, j in enumerate(J):
                sign_a, S = _sign_sorted(I + (j,))
                if not sign_a:
                    continue
                T = J[:s] + J[s + 1 :]
                pair = tuple(sorted((S, T)))
                acc[pair] = acc.get(pair, 0) + (-1) ** s * sign_a
            terms = tuple(sorted((c, S, T) for (S, T), c in acc.items() if c))
            if not terms:
                continue
            canon = _canonical(terms)
            if canon in seen:
                continue
            seen.add(canon)
            out.append(terms)
    logger.debug("Gr(%d,%d): %d shuffle relations", d, n, len(out))
    return tuple(out)


def _canonical(terms: tuple) -> tuple:
    """The relation up to an overall sign."""
    flipped = tuple(sorted((-c, S, T) for c, S, T in terms))
    return min(terms, flipped)


def pluecker_relations_residual(v: PlueckerVector) -> list[Scalar]:
    """Value of every shuffle relation at v; all zero exactly on the Grassmannian."""
    K = v.field
    out = []
    for terms in shuffle_relations(v.n, v.d):
        acc = K.zero()
        for c, S, T in terms:
            acc = K.add(acc, K.mul(K(c), K.mul(v[S], v[T])))
        out.append(acc)
    return out


def chart_transition(M: ChartMatrix, J: Sequence[int]) -> ChartMatrix:
    """M_J^{-1} M for a 1-based column subset J; its J-block is the identity."""
    K = M.field
    cols = [j - 1 for j in J]
    if len(cols) != M.d or any(not 0 <= j < M.n for j in cols):
        raise ValueError(f"J must list {M.d} columns out of 1..{M.n}")
    block = M.block(cols)
    if det(block, K) == 0:
        raise SingularBlockError(tuple(cols))
    return ChartMatrix(K, tuple(tuple(r) for r in matmul(inverse(block, K), M.rows, K)))
