"""
Graded free modules, presented modules and their homological invariants.

A PresentedModule is the cokernel of a GradedMap between graded free modules.
Minimal free resolutions are built from syzygies, minimalised degree by
degree; Ext and Tor are computed as subquotients of Hom(F, N) and F ⊗ N.
"""

import logging
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import groupby
from math import factorial
from typing import Callable, Iterable, Optional, Sequence

import sympy

from errors import CertificationError, GradingError, NonHomogeneousError, RingMismatchError
from groebner import FreeElement, GroebnerBasis, Submodule, groebner_basis, syzygies
from polynomials import NEG_INF, Exponents, MultiPoly, PolyRing

logger = logging.getLogger(__name__)


# ── Graded free modules and maps ──────────────────────────────


@dataclass(frozen=True)
class GradedFreeModule:
    """⊕ A(-twists[i]); the i-th generator sits in degree twists[i]."""

    twists: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "twists", tuple(int(t) for t in self.twists))

    @property
    def rank(self) -> int:
        return len(self.twists)

    def shifted(self, d: int) -> "GradedFreeModule":
        """F(d): every generator moves down by d."""
        return GradedFreeModule(tuple(t - d for t in self.twists))


@dataclass(frozen=True)
class GradedMap:
    """
    A degree-0 map source -> target, stored by columns.

    Column j is the image of the j-th source generator: a FreeElement of
    rank target.rank, homogeneous of degree source.twists[j] (or zero).
    """

    ring: PolyRing
    source: GradedFreeModule
    target: GradedFreeModule
    columns: tuple[FreeElement, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        if len(self.columns) != self.source.rank:
            raise ValueError(
                f"{len(self.columns)} columns for a source of rank {self.source.rank}"
            )
        for j, col in enumerate(self.columns):
            if col.ring != self.ring:
                raise RingMismatchError(self.ring, col.ring)
            if col.rank != self.target.rank:
                raise ValueError(f"column {j} has rank {col.rank}, target rank {self.target.rank}")
            degs = col.degrees(self.target.twists)
            if degs and degs != {self.source.twists[j]}:
                raise NonHomogeneousError(
                    f"column {j} has degrees {sorted(degs)}, expected {self.source.twists[j]}"
                )

    @classmethod
    def from_matrix(
        cls,
        ring: PolyRing,
        target_twists: Sequence[int],
        source_twists: Sequence[int],
        rows: Sequence[Sequence[MultiPoly]],
    ) -> "GradedMap":
        ncols = len(source_twists)
        if len(rows) != len(target_twists) or any(len(r) != ncols for r in rows):
            raise ValueError("matrix shape does not match the twists")
        columns = [
            FreeElement.from_components(ring, [rows[i][j] for i in range(len(rows))])
            if rows
            else FreeElement.zero(ring, 0)
            for j in range(ncols)
        ]
        return cls(ring, GradedFreeModule(tuple(source_twists)), GradedFreeModule(tuple(target_twists)), tuple(columns))

    @classmethod
    def from_columns(
        cls, ring: PolyRing, target: GradedFreeModule, columns: Iterable[FreeElement]
    ) -> "GradedMap":
        """Source twists are read off the (nonzero, homogeneous) columns."""
        cols = []
        twists = []
        for col in columns:
            if col.is_zero():
                continue
            degs = col.degrees(target.twists)
            if len(degs) != 1:
                raise NonHomogeneousError(
                    f"relation {col.format()} is not homogeneous (degrees {sorted(degs)})"
                )
            cols.append(col)
            twists.append(degs.pop())
        return cls(ring, GradedFreeModule(tuple(twists)), target, tuple(cols))

    @property
    def matrix(self) -> list[list[MultiPoly]]:
        comps = [c.components for c in self.columns]
        return [[comps[j][i] for j in range(self.source.rank)] for i in range(self.target.rank)]

    def apply(self, v: FreeElement) -> FreeElement:
        if not self.columns:
            return FreeElement.zero(self.ring, self.target.rank)
        return v.dot(list(self.columns))

    def is_minimal(self) -> bool:
        """No matrix entry is a nonzero constant."""
        return all(not c.constant_positions() for c in self.columns)


# ── Presented modules ──────────────────────────────────────────


@dataclass(frozen=True)
class PresentedModule:
    """coker(presentation); immutable, with per-value caches behind a lock."""

    ring: PolyRing
    presentation: GradedMap
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)
    _lock: threading.RLock = field(
        default_factory=threading.RLock, init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        if self.presentation.ring != self.ring:
            raise RingMismatchError(self.ring, self.presentation.ring)

    # ── Constructors ────────────────────────────────────────────

    @classmethod
    def cokernel(
        cls, ring: PolyRing, twists: Sequence[int], relations: Iterable[FreeElement]
    ) -> "PresentedModule":
        target = GradedFreeModule(tuple(twists))
        return cls(ring, GradedMap.from_columns(ring, target, relations))

    @classmethod
    def free(cls, ring: PolyRing, twists: Sequence[int] = (0,)) -> "PresentedModule":
        return cls.cokernel(ring, twists, ())

    @classmethod
    def zero(cls, ring: PolyRing) -> "PresentedModule":
        return cls.free(ring, ())

    @classmethod
    def quotient(cls, I: Submodule) -> "PresentedModule":
        """A/I."""
        I.require_ideal()
        return cls.cokernel(I.ring, (0,), I.generators)

    @classmethod
    def ideal_module(cls, I: Submodule) -> "PresentedModule":
        """I as a module: generators f_i in degree deg f_i, relations Syz(f)."""
        I = I.require_ideal().nonzero()
        twists = []
        for f in I.polynomials:
            if not f.is_homogeneous():
                raise NonHomogeneousError(f"generator {f.format()} is not homogeneous")
            twists.append(f.degree())
        return cls.cokernel(I.ring, twists, syzygies(I).generators)

    @classmethod
    def from_matrix(
        cls,
        ring: PolyRing,
        target_twists: Sequence[int],
        source_twists: Sequence[int],
        rows: Sequence[Sequence[MultiPoly]],
    ) -> "PresentedModule":
        return cls(ring, GradedMap.from_matrix(ring, target_twists, source_twists, rows))

    # ── Accessors ───────────────────────────────────────────────

    @property
    def twists(self) -> tuple[int, ...]:
        return self.presentation.target.twists

    @property
    def rank(self) -> int:
        """Number of generators (not a module rank)."""
        return self.presentation.target.rank

    @property
    def relations(self) -> tuple[FreeElement, ...]:
        return self.presentation.columns

    def relation_submodule(self) -> Submodule:
        return Submodule(self.ring, self.rank, self.relations)

    def cached(self, key, compute: Callable):
        with self._lock:
            if key not in self._cache:
                self._cache[key] = compute()
            return self._cache[key]

    def relations_gb(self) -> GroebnerBasis:
        return self.cached("relations_gb", lambda: groebner_basis(self.relation_submodule()))

    def generator(self, i: int) -> FreeElement:
        return FreeElement.unit(self.ring, self.rank, i)

    def reduce(self, v: FreeElement) -> FreeElement:
        """Normal form of an element of the cover, i.e. a canonical class representative."""
        return self.relations_gb().normal_form(v)

    def twist(self, d: int) -> "PresentedModule":
        """M(d)."""
        target = self.presentation.target.shifted(d)
        source = self.presentation.source.shifted(d)
        return PresentedModule(self.ring, GradedMap(self.ring, source, target, self.relations))

    def format(self) -> str:
        rels = ", ".join(c.format() for c in self.relations) or "0"
        return f"coker(targets={list(self.twists)}, relations=[{rels}]) over {self.ring}"

    def __repr__(self) -> str:
        return self.format()


def is_zero(M: PresentedModule) -> bool:
    return M.rank == 0 or M.relations_gb().is_unit()


def require_positive_grading(ring: PolyRing, what: str):
    if not ring.positively_graded:
        raise GradingError(f"{what} needs every variable weight to be positive (weights {ring.weights})")


def require_standard_grading(ring: PolyRing, what: str):
    if not ring.standard_graded:
        raise GradingError(f"{what} needs the standard grading (weights {ring.weights})")


# ── Minimalisation ─────────────────────────────────────────────


@lru_cache(maxsize=4096)
def monomials_of_degree(weights: tuple[int, ...], d: int) -> tuple[Exponents, ...]:
    """All exponent vectors of weighted degree d (weights must be positive)."""
    if d < 0:
        return ()
    if len(weights) == 1:
        w = weights[0]
        return ((d // w,),) if d % w == 0 else ()
    w = weights[0]
    out = []
    for a in range(d // w, -1, -1):
        for rest in monomials_of_degree(weights[1:], d - a * w):
            out.append((a,) + rest)
    return tuple(out)


class _Echelon:
    """Incremental row echelon form of sparse vectors keyed by terms."""

    def __init__(self, K):
        self.K = K
        self.pivots: dict = {}

    def insert(self, terms: dict) -> bool:
        """Add a vector; False when it is already in the span."""
        K = self.K
        v = dict(terms)
        while v:
            t = max(v)
            w = self.pivots.get(t)
            if w is None:
                self.pivots[t] = v
                return True
            f = K.div(v[t], w[t])
            for s, c in w.items():
                x = K.sub(v.get(s, K.zero()), K.mul(f, c))
                if x == 0:
                    v.pop(s, None)
                else:
                    v[s] = x
        return False


def minimal_generators(
    ring: PolyRing, twists: Sequence[int], elements: Iterable[FreeElement]
) -> list[FreeElement]:
    """
    A minimal subset generating the same graded submodule.

    Elements are taken by increasing degree; one is kept unless it lies in
    the span of the degree-d multiples of the elements kept so far.
    """
    require_positive_grading(ring, "minimal generators")
    items = []
    for i, g in enumerate(elements):
        if g.is_zero():
            continue
        degs = g.degrees(twists)
        if len(degs) != 1:
            raise NonHomogeneousError(f"element {g.format()} is not homogeneous")
        items.append((degs.pop(), i, g))
    items.sort(key=lambda t: (t[0], t[1]))
    kept: list[tuple[int, FreeElement]] = []
    for d, group in groupby(items, key=lambda t: t[0]):
        echelon = _Echelon(ring.field)
        for dh, h in kept:
            for e in monomials_of_degree(ring.weights, d - dh):
                echelon.insert(h.mul_term(e).term_dict())
        for _, _, g in group:
            if echelon.insert(g.term_dict()):
                kept.append((d, g))
    return [g for _, g in kept]


def _prune_units(rank: int, columns: Sequence[FreeElement]) -> tuple[list[int], list[FreeElement]]:
    """
    Cancel unit entries: while a relation has a constant entry u at k, it
    expresses generator k through the others; eliminate position k from the
    remaining relations and drop both.

    Returns the surviving generator positions and the relations restricted
    to them.
    """
    alive = list(range(rank))
    cols = [c for c in columns if not c.is_zero()]
    while True:
        found = next(
            ((ci, c.constant_positions()[0]) for ci, c in enumerate(cols) if c.constant_positions()),
            None,
        )
        if found is None:
            break
        ci, k = found
        r = cols.pop(ci)
        K = r.ring.field
        u = r.component(k).leading_coefficient
        remaining = []
        for s in cols:
            sk = s.component(k)
            if not sk.is_zero():
                s = s - r.mul_poly(sk.scale(K.inv(u)))
            if not s.is_zero():
                remaining.append(s)
        cols = remaining
        alive.remove(k)
    return alive, [c.project(alive) for c in cols]


def minimal_presentation(M: PresentedModule) -> PresentedModule:
    """Same module with minimal generators and minimal relations."""

    def compute():
        require_positive_grading(M.ring, "minimal presentation")
        alive, cols = _prune_units(M.rank, M.relations)
        twists = [M.twists[i] for i in alive]
        cols = minimal_generators(M.ring, twists, cols)
        return PresentedModule.cokernel(M.ring, twists, cols)

    return M.cached("minimal_presentation", compute)


# ── Resolutions and Betti tables ───────────────────────────────


@dataclass(frozen=True)
class BettiTable:
    """b_{i,j}: number of generators of F_i in degree j."""

    entries: tuple[tuple[tuple[int, int], int], ...] = ()

    @classmethod
    def from_modules(cls, modules: Sequence[GradedFreeModule]) -> "BettiTable":
        counts: dict[tuple[int, int], int] = {}
        for i, F in enumerate(modules):
            for t in F.twists:
                counts[(i, t)] = counts.get((i, t), 0) + 1
        return cls(tuple(sorted(counts.items())))

    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(self.entries)

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.as_dict().get(key, 0)

    def ranks(self) -> list[int]:
        if not self.entries:
            return []
        top = max(i for (i, _), _ in self.entries)
        return [sum(b for (i, _), b in self.entries if i == k) for k in range(top + 1)]

    @property
    def length(self) -> int:
        return len(self.ranks()) - 1 if self.entries else 0

    def regularity(self):
        """max(j - i), NEG_INF when empty."""
        if not self.entries:
            return NEG_INF
        return max(j - i for (i, j), _ in self.entries)

    def max_internal_degree(self):
        if not self.entries:
            return NEG_INF
        return max(j for (_, j), _ in self.entries)

    def format(self) -> str:
        """Rows j - i, columns i, in the usual layout ('.' for zero)."""
        if not self.entries:
            return "0"
        table = self.as_dict()
        cols = range(self.length + 1)
        rows = sorted({j - i for (i, j) in table})
        lines = ["      " + " ".join(f"{i:>3}" for i in cols)]
        lines.append("total:" + " ".join(f"{r:>3}" for r in self.ranks()))
        for r in range(rows[0], rows[-1] + 1):
            cells = " ".join(f"{table.get((i, i + r), 0) or '.':>3}" for i in cols)
            lines.append(f"{r:>5}:{cells}")
        return "\n".join(lines)

    def to_json(self) -> list[list[int]]:
        return [[i, j, b] for (i, j), b in self.entries]


@dataclass(frozen=True)
class FreeResolution:
    """maps[i]: F_{i+1} -> F_i; modules[0] = F_0 covers the module."""

    module: PresentedModule
    modules: tuple[GradedFreeModule, ...]
    maps: tuple[GradedMap, ...]

    @property
    def length(self) -> int:
        return len(self.maps)

    @property
    def betti(self) -> BettiTable:
        return BettiTable.from_modules(self.modules)

    def truncate(self, max_length: int) -> "FreeResolution":
        n = min(max_length, self.length)
        return FreeResolution(self.module, self.modules[: n + 1], self.maps[:n])

    def is_minimal(self) -> bool:
        return all(d.is_minimal() for d in self.maps)


def _full_resolution(M: PresentedModule) -> FreeResolution:
    require_positive_grading(M.ring, "free resolutions")
    P = minimal_presentation(M)
    ring = P.ring
    modules = [P.presentation.target]
    maps: list[GradedMap] = []
    columns = list(P.relations)
    target = P.presentation.target
    while columns:
        d = GradedMap.from_columns(ring, target, columns)
        maps.append(d)
        modules.append(d.source)
        if len(maps) > ring.ngens:
            raise CertificationError("resolution longer than the number of variables")
        syz = syzygies(Submodule(ring, target.rank, d.columns))
        target = d.source
        columns = minimal_generators(ring, target.twists, syz.generators)
    logger.debug("resolution ranks: %s", [F.rank for F in modules])
    return FreeResolution(M, tuple(modules), tuple(maps))


def minimal_free_resolution(M: PresentedModule, max_length: Optional[int] = None) -> FreeResolution:
    """Minimal graded free resolution, truncated at homological index max_length."""
    if max_length is not None and max_length < 0:
        raise ValueError("max_length must be >= 0")
    full = M.cached("resolution", lambda: _full_resolution(M))
    return full if max_length is None else full.truncate(max_length)


def betti_table(M: PresentedModule) -> BettiTable:
    return minimal_free_resolution(M).betti


def projective_dimension(M: PresentedModule):
    """Length of the minimal resolution; NEG_INF for the zero module."""
    if is_zero(M):
        return NEG_INF
    pd = minimal_free_resolution(M).length
    if pd > M.ring.ngens:
        raise CertificationError("Hilbert syzygy bound violated")
    return pd


# ── Ext and Tor ────────────────────────────────────────────────


def subquotient(
    ring: PolyRing,
    twists: Sequence[int],
    generators: Sequence[FreeElement],
    relations: Sequence[FreeElement],
) -> PresentedModule:
    """(⟨generators⟩ + ⟨relations⟩) / ⟨relations⟩ inside the free module with these twists."""
    n = len(twists)
    gens = minimal_generators(ring, twists, generators)
    if n == 0 or not gens:
        return PresentedModule.zero(ring)
    k = len(gens)
    new_twists = [next(iter(v.degrees(twists))) for v in gens]
    stacked = Submodule(ring, n, tuple(gens) + tuple(relations))
    rels = [s.project(range(k)) for s in syzygies(stacked).generators]
    rels = minimal_generators(ring, new_twists, rels)
    return minimal_presentation(PresentedModule.cokernel(ring, new_twists, rels))


def _homology(
    ring: PolyRing,
    twists: Sequence[int],
    relations: Sequence[FreeElement],
    outgoing: Optional[Sequence[FreeElement]],
    target_relations: Sequence[FreeElement],
    incoming: Sequence[FreeElement],
) -> PresentedModule:
    """
    ker(P/R -> Q/R_Q) / im(incoming), presented.

    P is free with the given twists and R = relations; `outgoing[a]` is the
    image of the a-th generator of P in Q (None when Q = 0); `incoming` are
    elements of P spanning the image of the previous map.
    """
    n = len(twists)
    if n == 0:
        return PresentedModule.zero(ring)
    if outgoing is None:
        kernel = [FreeElement.unit(ring, n, a) for a in range(n)]
    else:
        q_rank = outgoing[0].rank
        stacked = Submodule(ring, q_rank, tuple(outgoing) + tuple(target_relations))
        kernel = [s.project(range(n)) for s in syzygies(stacked).generators]
    return subquotient(ring, twists, kernel, tuple(incoming) + tuple(relations))


def _block_relations(ring: PolyRing, blocks: int, inner: PresentedModule) -> list[FreeElement]:
    """Relations of inner placed in each of `blocks` consecutive blocks."""
    size = inner.rank
    return [rel.shift(blocks * size, a * size) for a in range(blocks) for rel in inner.relations]


def ext_module(p: int, M: PresentedModule, N: PresentedModule) -> PresentedModule:
    """
    Ext^p(M, N) as H^p of Hom(F, N), F the minimal resolution of M.

    Hom(A(-s), A(-t)) = A(s - t): the generator e_a^* ⊗ g_b of Hom(F_i, G_0)
    sits in degree t_b - s_a.
    """
    if p < 0:
        raise ValueError("Ext index must be >= 0")
    if M.ring != N.ring:
        raise RingMismatchError(M.ring, N.ring)

    def compute():
        ring = M.ring
        F = minimal_free_resolution(M)
        if p > F.length:
            return PresentedModule.zero(ring)
        t = N.twists
        r = N.rank

        def hom_twists(i: int) -> list[int]:
            return [tb - sa for sa in F.modules[i].twists for tb in t]

        def delta(i: int) -> list[FreeElement]:
            """Images of the generators of Hom(F_i, G0) in Hom(F_{i+1}, G0)."""
            d = F.maps[i]
            rows = d.matrix  # rows index F_i, columns F_{i+1}
            size = d.source.rank * r
            out = []
            for a in range(d.target.rank):
                for b in range(r):
                    terms = {}
                    for c in range(d.source.rank):
                        for e, coeff in rows[a][c].term_dict().items():
                            terms[(c * r + b, e)] = coeff
                    out.append(FreeElement(ring, size, terms))
            return out

        P_rank = F.modules[p].rank
        relations = _block_relations(ring, P_rank, N)
        outgoing = delta(p) if p < F.length else None
        target_relations = (
            _block_relations(ring, F.modules[p + 1].rank, N) if p < F.length else []
        )
        incoming = []
        if p >= 1:
            # images of Hom(F_{p-1}, G0) generators, already in P coordinates
            incoming = delta(p - 1)
        return _homology(ring, hom_twists(p), relations, outgoing, target_relations, incoming)

    return M.cached(("ext", p, N), compute)


def tor_module(p: int, M: PresentedModule, N: PresentedModule) -> PresentedModule:
    """Tor_p(M, N) as H_p of F ⊗ N; F_i ⊗ G0 has generators in degree s_a + t_b."""
    if p < 0:
        raise ValueError("Tor index must be >= 0")
    if M.ring != N.ring:
        raise RingMismatchError(M.ring, N.ring)

    def compute():
        ring = M.ring
        F = minimal_free_resolution(M)
        if p > F.length:
            return PresentedModule.zero(ring)
        t = N.twists
        r = N.rank

        def boundary(i: int) -> list[FreeElement]:
            """Images of F_i ⊗ G0 generators in F_{i-1} ⊗ G0."""
            d = F.maps[i - 1]
            rows = d.matrix  # rows index F_{i-1}, columns F_i
            size = d.target.rank * r
            out = []
            for a in range(d.source.rank):
                for b in range(r):
                    terms = {}
                    for c in range(d.target.rank):
                        for e, coeff in rows[c][a].term_dict().items():
                            terms[(c * r + b, e)] = coeff
                    out.append(FreeElement(ring, size, terms))
            return out

        twists = [sa + tb for sa in F.modules[p].twists for tb in t]
        relations = _block_relations(ring, F.modules[p].rank, N)
        outgoing = boundary(p) if p >= 1 else None
        target_relations = _block_relations(ring, F.modules[p - 1].rank, N) if p >= 1 else []
        incoming = boundary(p + 1) if p < F.length else []
        return _homology(ring, twists, relations, outgoing, target_relations, incoming)

    return M.cached(("tor", p, N), compute)


# ── Graded dimensions ──────────────────────────────────────────


@dataclass(frozen=True)
class GradedDims:
    """dim M_d for d in window; degrees missing from dims are zero."""

    dims: tuple[tuple[int, int], ...] = ()
    window: tuple[int, int] = (0, 0)

    @classmethod
    def from_dict(cls, dims: dict[int, int], window: tuple[int, int]) -> "GradedDims":
        return cls(tuple(sorted((d, n) for d, n in dims.items() if n)), tuple(window))

    def as_dict(self) -> dict[int, int]:
        return dict(self.dims)

    def __getitem__(self, d: int) -> int:
        lo, hi = self.window
        if not lo <= d <= hi:
            raise KeyError(f"degree {d} outside window [{lo}, {hi}]")
        return self.as_dict().get(d, 0)

    def degrees(self) -> range:
        return range(self.window[0], self.window[1] + 1)

    def is_zero(self) -> bool:
        return not self.dims

    def restrict(self, window: tuple[int, int]) -> "GradedDims":
        lo, hi = window
        return GradedDims.from_dict({d: n for d, n in self.dims if lo <= d <= hi}, window)

    def combine(self, other: "GradedDims", op: Callable[[int, int], int]) -> "GradedDims":
        lo = max(self.window[0], other.window[0])
        hi = min(self.window[1], other.window[1])
        a, b = self.as_dict(), other.as_dict()
        return GradedDims.from_dict({d: op(a.get(d, 0), b.get(d, 0)) for d in range(lo, hi + 1)}, (lo, hi))

    def __sub__(self, other: "GradedDims") -> "GradedDims":
        return self.combine(other, lambda x, y: x - y)

    def __add__(self, other: "GradedDims") -> "GradedDims":
        return self.combine(other, lambda x, y: x + y)

    def to_json(self) -> dict:
        return {"window": list(self.window), "dims": [[d, n] for d, n in self.dims]}


def degree_basis(M: PresentedModule, d: int) -> list[tuple[int, Exponents]]:
    """Standard monomials x^e at generator pos spanning M_d."""
    require_positive_grading(M.ring, "graded pieces")
    G = M.relations_gb()
    out = []
    for pos, tw in enumerate(M.twists):
        for e in monomials_of_degree(M.ring.weights, d - tw):
            if G.is_standard(pos, e):
                out.append((pos, e))
    return out


def graded_dims(M: PresentedModule, window: tuple[int, int]) -> GradedDims:
    lo, hi = window
    if lo > hi:
        raise ValueError(f"empty window [{lo}, {hi}]")
    return GradedDims.from_dict({d: len(degree_basis(M, d)) for d in range(lo, hi + 1)}, (lo, hi))


# ── Hilbert series and polynomials ─────────────────────────────


@dataclass(frozen=True)
class HilbertSeries:
    """
    numerator(q) / Π (1 - q^w) over the variable weights w.

    `numerator` is a Laurent polynomial (exponent -> integer coefficient).
    The reduced form divides out every factor (1 - q) the numerator allows:
    reduced_numerator(q) / (1 - q)^dimension when the grading is standard.
    """

    numerator: tuple[tuple[int, int], ...]
    weights: tuple[int, ...]

    @property
    def denominator_exponent(self) -> int:
        return len(self.weights)

    def _reduce(self) -> tuple[dict[int, int], int]:
        num = {k: c for k, c in self.numerator if c}
        order = 0
        while num and sum(num.values()) == 0:
            num = _divide_one_minus_q(num)
            order += 1
        return num, order

    @property
    def reduced_numerator(self) -> dict[int, int]:
        return self._reduce()[0]

    @property
    def dimension(self):
        """Pole order at q = 1; NEG_INF for the zero series."""
        num, order = self._reduce()
        if not num:
            return NEG_INF
        return self.denominator_exponent - order

    def coefficient(self, d: int) -> int:
        total = 0
        for k, c in self.numerator:
            total += c * len(monomials_of_degree(self.weights, d - k))
        return total

    def expand(self, window: tuple[int, int]) -> GradedDims:
        lo, hi = window
        return GradedDims.from_dict({d: self.coefficient(d) for d in range(lo, hi + 1)}, window)

    def as_expr(self):
        q = sympy.Symbol("q")
        num = sum((c * q**k for k, c in self.numerator), sympy.Integer(0))
        den = sympy.Mul(*[(1 - q**w) for w in self.weights])
        return num / den

    def reduced_expr(self):
        q = sympy.Symbol("q")
        num, order = self._reduce()
        expr = sum((c * q**k for k, c in sorted(num.items())), sympy.Integer(0))
        if self.weights and all(w == 1 for w in self.weights):
            return expr / (1 - q) ** (self.denominator_exponent - order)
        return self.as_expr()

    def format(self) -> str:
        return str(self.reduced_expr())

    def to_json(self) -> dict:
        num, order = self._reduce()
        return {
            "numerator": [[k, c] for k, c in self.numerator],
            "weights": list(self.weights),
            "reduced_numerator": [[k, c] for k, c in sorted(num.items())],
            "dimension": repr(self.dimension) if self.dimension is NEG_INF else self.dimension,
        }


def _divide_one_minus_q(num: dict[int, int]) -> dict[int, int]:
    """Exact division of a Laurent polynomial by (1 - q)."""
    lo, hi = min(num), max(num)
    quotient = {}
    carry = 0
    # (1 - q) * Σ b_k q^k = Σ (b_k - b_{k-1}) q^k, so b_k = a_k + b_{k-1}
    for k in range(lo, hi):
        carry += num.get(k, 0)
        if carry:
            quotient[k] = carry
    return quotient


def hilbert_series(M: PresentedModule) -> HilbertSeries:
    """From the Betti table: Σ_i (-1)^i Σ_j b_ij q^j over Π (1 - q^w)."""
    require_positive_grading(M.ring, "Hilbert series")
    num: dict[int, int] = {}
    for (i, j), b in betti_table(M).entries:
        num[j] = num.get(j, 0) + (-1) ** i * b
    return HilbertSeries(tuple(sorted((k, c) for k, c in num.items() if c)), M.ring.weights)


def krull_dimension(M: PresentedModule):
    """Dimension of the support (pole order of the Hilbert series); NEG_INF for 0."""
    if is_zero(M):
        return NEG_INF
    return hilbert_series(M).dimension


def binomial(x: int, k: int) -> int:
    """binom(x, k) for any integer x, as the polynomial x(x-1)...(x-k+1)/k!."""
    if k < 0:
        return 0
    num = 1
    for i in range(k):
        num *= x - i
    return num // factorial(k)


@dataclass(frozen=True)
class NumericalPolynomial:
    """Θ(t) = Σ a_i binom(t, i); coefficients stored without trailing zeros."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        coeffs = list(int(c) for c in self.coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def from_function(cls, f: Callable[[int], int], degree: int) -> "NumericalPolynomial":
        """Coefficients are the forward differences of f at 0."""
        if degree < 0:
            return cls(())
        values = [f(t) for t in range(degree + 1)]
        coeffs = []
        for _ in range(degree + 1):
            coeffs.append(values[0])
            values = [b - a for a, b in zip(values, values[1:])]
        return cls(tuple(coeffs))

    @classmethod
    def binomial_shift(cls, n: int, shift: int) -> "NumericalPolynomial":
        """binom(t + shift, n) as a polynomial in t."""
        return cls.from_function(lambda t: binomial(t + shift, n), n)

    def __call__(self, t: int) -> int:
        return sum(a * binomial(t, i) for i, a in enumerate(self.coeffs))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "NumericalPolynomial") -> "NumericalPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return NumericalPolynomial(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "NumericalPolynomial":
        return NumericalPolynomial(tuple(-a for a in self.coeffs))

    def __sub__(self, other: "NumericalPolynomial") -> "NumericalPolynomial":
        return self + (-other)

    def rescale(self, e: int) -> "NumericalPolynomial":
        """t -> Θ(e t)."""
        if self.is_zero():
            return self
        return NumericalPolynomial.from_function(lambda t: self(e * t), self.degree)

    def as_expr(self):
        t = sympy.Symbol("t")
        expr = sum(
            (a * sympy.binomial(t, i) for i, a in enumerate(self.coeffs)), sympy.Integer(0)
        )
        return sympy.expand(sympy.expand_func(expr))

    def format(self) -> str:
        return str(self.as_expr())

    def to_json(self) -> list[int]:
        return list(self.coeffs)


def hilbert_polynomial(M: PresentedModule, step: int = 1) -> NumericalPolynomial:
    """
    Φ with Φ(l) = dim M_l for l >> 0, from the reduced Hilbert series
    h(q)/(1-q)^d: Φ(t) = Σ_k h_k binom(t - k + d - 1, d - 1).

    With step = e the result is t -> Φ(e t), the Hilbert polynomial with
    respect to O(e).
    """
    require_standard_grading(M.ring, "Hilbert polynomials")
    if step < 1:
        raise ValueError("step must be positive")
    series = hilbert_series(M)
    num, order = series._reduce()
    d = series.denominator_exponent - order
    if not num or d <= 0:
        return NumericalPolynomial(())

    def phi(t: int) -> int:
        return sum(c * binomial(t - k + d - 1, d - 1) for k, c in num.items())

    poly = NumericalPolynomial.from_function(phi, d - 1)
    return poly.rescale(step) if step != 1 else poly
