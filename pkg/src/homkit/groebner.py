"""
Gröbner bases for ideals and submodules of free modules.

Buchberger's algorithm with normal pair selection, the chain criterion and,
for ideals, the coprime-leads criterion. Every S-pair reduction can carry a
tracker (its representation in terms of the input generators), which is how
syzygies are produced: reductions to zero are relations among the inputs.
"""

import heapq
import logging
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Callable, Iterable, Optional, Sequence

from sympy.polys.monomials import (
    monomial_div,
    monomial_divides,
    monomial_lcm,
    monomial_mul,
)

from errors import NotAnIdealError, RankMismatchError, RingMismatchError, SaturationLimitError
from fields import CoefficientField
from polynomials import Exponents, MonomialOrder, MultiPoly, PolyRing

logger = logging.getLogger(__name__)

Term = tuple[int, Exponents]
TermKey = Callable[[int, Exponents], tuple]


# ── Free-module elements ──────────────────────────────────────


class FreeElement:
    """A vector in R^rank, stored sparsely as (position, exponents) -> coefficient."""

    __slots__ = ("ring", "rank", "_terms", "_hash")

    def __init__(self, ring: PolyRing, rank: int, terms: Optional[dict] = None):
        self.ring = ring
        self.rank = rank
        self._terms = {k: c for k, c in (terms or {}).items() if c != 0}
        self._hash = None

    @classmethod
    def from_components(cls, ring: PolyRing, components: Sequence[MultiPoly]) -> "FreeElement":
        terms = {}
        for pos, f in enumerate(components):
            if f.ring != ring:
                raise RingMismatchError(ring, f.ring)
            for e, c in f.term_dict().items():
                terms[(pos, e)] = c
        return cls(ring, len(components), terms)

    @classmethod
    def unit(cls, ring: PolyRing, rank: int, i: int) -> "FreeElement":
        return cls(ring, rank, {(i, ring.zero_exponents): ring.field.one()})

    @classmethod
    def zero(cls, ring: PolyRing, rank: int) -> "FreeElement":
        return cls(ring, rank, {})

    # ── Inspection ──────────────────────────────────────────────

    def term_dict(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def component(self, i: int) -> MultiPoly:
        return MultiPoly(self.ring, {e: c for (p, e), c in self._terms.items() if p == i})

    @property
    def components(self) -> list[MultiPoly]:
        buckets: list[dict] = [{} for _ in range(self.rank)]
        for (p, e), c in self._terms.items():
            buckets[p][e] = c
        return [MultiPoly(self.ring, b) for b in buckets]

    def support(self) -> set[int]:
        return {p for p, _ in self._terms}

    def leading_term(self, key: TermKey) -> Optional[tuple[int, Exponents, object]]:
        if not self._terms:
            return None
        pos, exps = max(self._terms, key=lambda t: key(t[0], t[1]))
        return pos, exps, self._terms[(pos, exps)]

    def degrees(self, twists: Sequence[int]) -> set[int]:
        """Graded degrees of the terms, generator i sitting in degree twists[i]."""
        return {twists[p] + self.ring.weighted_degree(e) for p, e in self._terms}

    def degree(self, twists: Sequence[int]):
        degs = self.degrees(twists)
        return max(degs) if degs else None

    def is_homogeneous(self, twists: Sequence[int]) -> bool:
        return len(self.degrees(twists)) <= 1

    def constant_positions(self) -> list[int]:
        """Positions whose component is a nonzero constant."""
        zero = self.ring.zero_exponents
        by_pos: dict[int, bool] = {}
        for p, e in self._terms:
            by_pos[p] = by_pos.get(p, True) and e == zero
        return sorted(p for p, only_constant in by_pos.items() if only_constant)

    # ── Arithmetic ──────────────────────────────────────────────

    def _check(self, other: "FreeElement"):
        if other.ring != self.ring:
            raise RingMismatchError(self.ring, other.ring)
        if other.rank != self.rank:
            raise RankMismatchError(self.rank, other.rank)

    def __add__(self, other: "FreeElement") -> "FreeElement":
        self._check(other)
        K = self.ring.field
        out = dict(self._terms)
        for t, c in other._terms.items():
            out[t] = K.add(out[t], c) if t in out else c
        return FreeElement(self.ring, self.rank, out)

    def __neg__(self) -> "FreeElement":
        K = self.ring.field
        return FreeElement(self.ring, self.rank, {t: K.neg(c) for t, c in self._terms.items()})

    def __sub__(self, other: "FreeElement") -> "FreeElement":
        return self + (-other)

    def scale(self, c) -> "FreeElement":
        K = self.ring.field
        c = K(c)
        return FreeElement(self.ring, self.rank, {t: K.mul(a, c) for t, a in self._terms.items()})

    def mul_poly(self, f: MultiPoly) -> "FreeElement":
        if f.ring != self.ring:
            raise RingMismatchError(self.ring, f.ring)
        return FreeElement(self.ring, self.rank, _poly_times(f.term_dict(), self._terms, self.ring.field))

    def mul_term(self, exps: Exponents, c=1) -> "FreeElement":
        K = self.ring.field
        c = K(c)
        return FreeElement(
            self.ring,
            self.rank,
            {(p, monomial_mul(e, exps)): K.mul(a, c) for (p, e), a in self._terms.items()},
        )

    def dot(self, columns: Sequence["FreeElement"]) -> "FreeElement":
        """Σ self_i * columns[i], i.e. apply the matrix with these columns."""
        if len(columns) != self.rank:
            raise RankMismatchError(self.rank, len(columns))
        if not columns:
            raise ValueError("cannot apply an empty matrix")
        K = self.ring.field
        out: dict = {}
        for (p, e), c in self._terms.items():
            _axpy(out, K.neg(c), e, columns[p]._terms, K)
        return FreeElement(self.ring, columns[0].rank, out)

    # ── Reshaping ───────────────────────────────────────────────

    def project(self, positions: Sequence[int]) -> "FreeElement":
        """Keep the listed positions, renumbered 0..len-1."""
        index = {p: i for i, p in enumerate(positions)}
        return FreeElement(
            self.ring,
            len(positions),
            {(index[p], e): c for (p, e), c in self._terms.items() if p in index},
        )

    def shift(self, rank: int, offset: int) -> "FreeElement":
        """Embed into R^rank with position p moved to p + offset."""
        return FreeElement(
            self.ring, rank, {(p + offset, e): c for (p, e), c in self._terms.items()}
        )

    def change_ring(self, ring: PolyRing, embed: Callable[[Exponents], Exponents]) -> "FreeElement":
        return FreeElement(ring, self.rank, {(p, embed(e)): c for (p, e), c in self._terms.items()})

    # ── Comparison & display ────────────────────────────────────

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreeElement):
            return NotImplemented
        return self.ring == other.ring and self.rank == other.rank and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rank, frozenset(self._terms.items())))
        return self._hash

    def format(self) -> str:
        comps = [f.format() for f in self.components]
        return comps[0] if self.rank == 1 else "[" + ", ".join(comps) + "]"

    def __repr__(self) -> str:
        return self.format()


def _axpy(target: dict, f, shift: Exponents, source: dict, K: CoefficientField) -> None:
    """target -= f * x^shift * source, in place."""
    zero = K.zero()
    for (p, e), c in source.items():
        t = (p, monomial_mul(e, shift))
        v = K.sub(target.get(t, zero), K.mul(f, c))
        if v == 0:
            target.pop(t, None)
        else:
            target[t] = v


def _poly_times(poly: dict, vec: dict, K: CoefficientField) -> dict:
    out: dict = {}
    zero = K.zero()
    for e1, c1 in poly.items():
        for (p, e2), c2 in vec.items():
            t = (p, monomial_mul(e1, e2))
            v = K.add(out.get(t, zero), K.mul(c1, c2))
            if v == 0:
                out.pop(t, None)
            else:
                out[t] = v
    return out


# ── Submodules ─────────────────────────────────────────────────


@dataclass(frozen=True)
class Submodule:
    """Submodule of R^rank spanned by `generators`; rank 1 is an ideal."""

    ring: PolyRing
    rank: int
    generators: tuple[FreeElement, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            if g.ring != self.ring:
                raise RingMismatchError(self.ring, g.ring)
            if g.rank != self.rank:
                raise RankMismatchError(self.rank, g.rank)

    @classmethod
    def ideal(cls, ring: PolyRing, polys: Iterable[MultiPoly]) -> "Submodule":
        return cls(ring, 1, tuple(FreeElement.from_components(ring, [f]) for f in polys))

    @classmethod
    def free(cls, ring: PolyRing, rank: int) -> "Submodule":
        return cls(ring, rank, tuple(FreeElement.unit(ring, rank, i) for i in range(rank)))

    @classmethod
    def zero(cls, ring: PolyRing, rank: int) -> "Submodule":
        return cls(ring, rank, ())

    @property
    def is_ideal(self) -> bool:
        return self.rank == 1

    @property
    def polynomials(self) -> list[MultiPoly]:
        self.require_ideal()
        return [g.component(0) for g in self.generators]

    def require_ideal(self) -> "Submodule":
        if self.rank != 1:
            raise NotAnIdealError(f"expected an ideal, got a submodule of rank {self.rank}")
        return self

    def nonzero(self) -> "Submodule":
        return Submodule(self.ring, self.rank, tuple(g for g in self.generators if not g.is_zero()))

    def __add__(self, other: "Submodule") -> "Submodule":
        if other.ring != self.ring:
            raise RingMismatchError(self.ring, other.ring)
        if other.rank != self.rank:
            raise RankMismatchError(self.rank, other.rank)
        return Submodule(self.ring, self.rank, self.generators + other.generators)

    def format(self) -> str:
        return "(" + ", ".join(g.format() for g in self.generators) + ")"

    def __repr__(self) -> str:
        return self.format()


# ── Buchberger ─────────────────────────────────────────────────


def module_order(ring: PolyRing, order: Optional[MonomialOrder] = None) -> MonomialOrder:
    """The order used on R^r: `order` if it is a module order, else term-over-position."""
    order = order or ring.order
    if order.is_module_order:
        return order
    return MonomialOrder.term_over_position(order)


class _Reducer:
    """A growing list of divisors with their leading terms (and optional trackers)."""

    def __init__(self, key: TermKey, K: CoefficientField):
        self.term_key = lambda t: key(t[0], t[1])
        self.K = K
        self.elements: list[dict] = []
        self.leads: list[tuple[int, Exponents, object]] = []
        self.trackers: list[Optional[dict]] = []

    def add(self, terms: dict, tracker: Optional[dict] = None) -> int:
        pos, exps = max(terms, key=self.term_key)
        self.elements.append(terms)
        self.leads.append((pos, exps, terms[(pos, exps)]))
        self.trackers.append(tracker)
        return len(self.elements) - 1

    def divisor(self, pos: int, exps: Exponents) -> Optional[int]:
        for k, (lp, le, _) in enumerate(self.leads):
            if lp == pos and monomial_divides(le, exps):
                return k
        return None

    def reduce(self, terms: dict, tracker: Optional[dict] = None, full: bool = False) -> dict:
        """
        Divide `terms` (consumed) by the divisors.

        Top reduction stops at the first irreducible leading term; full
        reduction continues through the tail. `tracker` is updated in place
        so that it keeps representing the current remainder.
        """
        K = self.K
        remainder: dict = {}
        while terms:
            lead = max(terms, key=self.term_key)
            k = self.divisor(*lead)
            if k is None:
                if not full:
                    remainder.update(terms)
                    break
                remainder[lead] = terms.pop(lead)
                continue
            _, le, lc = self.leads[k]
            f = K.div(terms[lead], lc)
            shift = monomial_div(lead[1], le)
            _axpy(terms, f, shift, self.elements[k], K)
            if tracker is not None:
                _axpy(tracker, f, shift, self.trackers[k], K)
        return remainder


def _buchberger(
    gens: Sequence[dict],
    ring: PolyRing,
    key: TermKey,
    track: bool,
    ideal: bool,
) -> tuple[_Reducer, list[dict]]:
    """
    Run Buchberger on term dicts.

    Returns the reducer holding every basis element ever added, and, when
    `track` is set, relations among the inputs (as term dicts of rank
    len(gens)) that generate all of them.
    """
    K = ring.field
    zero_exps = ring.zero_exponents
    red = _Reducer(key, K)
    syz: list[dict] = []
    heap: list[tuple[int, int, int]] = []
    pending: set[tuple[int, int]] = set()
    pairs_done = 0

    def add(terms: dict, tracker: Optional[dict]):
        k = red.add(terms, tracker)
        pos, exps, _ = red.leads[k]
        for i in range(k):
            ip, ie, _ = red.leads[i]
            if ip == pos:
                heapq.heappush(heap, (sum(monomial_lcm(ie, exps)), i, k))
                pending.add((i, k))

    for i, g in enumerate(gens):
        tracker = {(i, zero_exps): K.one()} if track else None
        if not g:
            if track:
                syz.append(tracker)
            continue
        add(dict(g), tracker)

    while heap:
        _, i, j = heapq.heappop(heap)
        pending.discard((i, j))
        _, li, ci = red.leads[i]
        _, lj, cj = red.leads[j]
        lcm = monomial_lcm(li, lj)

        if ideal and lcm == monomial_mul(li, lj):
            if track:
                koszul = _poly_times(
                    {e: c for (_, e), c in red.elements[j].items()}, red.trackers[i], K
                )
                other = _poly_times(
                    {e: c for (_, e), c in red.elements[i].items()}, red.trackers[j], K
                )
                _axpy(koszul, K.one(), zero_exps, other, K)
                if koszul:
                    syz.append(koszul)
            continue

        if _chain_skip(red, pending, i, j, lcm):
            continue

        s: dict = {}
        _axpy(s, K.neg(K.inv(ci)), monomial_div(lcm, li), red.elements[i], K)
        _axpy(s, K.inv(cj), monomial_div(lcm, lj), red.elements[j], K)
        tracker = None
        if track:
            tracker = {}
            _axpy(tracker, K.neg(K.inv(ci)), monomial_div(lcm, li), red.trackers[i], K)
            _axpy(tracker, K.inv(cj), monomial_div(lcm, lj), red.trackers[j], K)
        remainder = red.reduce(s, tracker)
        pairs_done += 1
        if remainder:
            add(remainder, tracker)
        elif track and tracker:
            syz.append(tracker)

    logger.debug(
        "buchberger: %d inputs, %d basis elements, %d pairs reduced, %d relations",
        len(gens), len(red.elements), pairs_done, len(syz),
    )
    return red, syz


def _chain_skip(red: _Reducer, pending: set, i: int, j: int, lcm: Exponents) -> bool:
    pos = red.leads[i][0]
    for k, (kp, ke, _) in enumerate(red.leads):
        if k in (i, j) or kp != pos or not monomial_divides(ke, lcm):
            continue
        if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
            return True
    return False


def _reduced_basis(red: _Reducer, key: TermKey, K: CoefficientField) -> list[dict]:
    """Minimalize, interreduce, make monic and sort ascending by leading term."""
    keep = []
    for k, (p, e, _) in enumerate(red.leads):
        redundant = any(
            j != k and lp == p and monomial_divides(le, e) and (le != e or j < k)
            for j, (lp, le, _) in enumerate(red.leads)
        )
        if not redundant:
            keep.append(k)

    minimal = _Reducer(key, K)
    for k in keep:
        minimal.add(red.elements[k])

    reduced = []
    for k in range(len(minimal.elements)):
        terms = dict(minimal.elements[k])
        lp, le, lc = minimal.leads[k]
        head = terms.pop((lp, le))
        tail = minimal.reduce(terms, full=True)
        inv = K.inv(lc)
        out = {t: K.mul(c, inv) for t, c in tail.items()}
        out[(lp, le)] = K.mul(head, inv)
        reduced.append(out)
    reduced.sort(key=lambda terms: key(*max(terms, key=lambda t: key(t[0], t[1]))))
    return reduced


# ── Gröbner bases ──────────────────────────────────────────────


@dataclass
class GroebnerBasis:
    """Reduced Gröbner basis of `submodule` for the module order `order`."""

    submodule: Submodule
    basis: list[FreeElement]
    order: MonomialOrder
    _reducer: Optional[_Reducer] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        key = self.order.module_key_fn()
        self._reducer = _Reducer(key, self.submodule.ring.field)
        for g in self.basis:
            self._reducer.add(g.term_dict())

    @property
    def ring(self) -> PolyRing:
        return self.submodule.ring

    @property
    def rank(self) -> int:
        return self.submodule.rank

    def leading_terms(self) -> list[tuple[int, Exponents]]:
        return [(p, e) for p, e, _ in self._reducer.leads]

    def normal_form(self, v: FreeElement) -> FreeElement:
        if v.ring != self.ring:
            raise RingMismatchError(self.ring, v.ring)
        if v.rank != self.rank:
            raise RankMismatchError(self.rank, v.rank)
        remainder = self._reducer.reduce(v.term_dict(), full=True)
        return FreeElement(self.ring, self.rank, remainder)

    def contains(self, v: FreeElement) -> bool:
        return self.normal_form(v).is_zero()

    def is_standard(self, pos: int, exps: Exponents) -> bool:
        """True when no leading term divides x^exps e_pos."""
        return self._reducer.divisor(pos, exps) is None

    def is_unit(self) -> bool:
        """True when the basis contains every unit vector (the submodule is all of R^r)."""
        zero = self.ring.zero_exponents
        return all(not self.is_standard(p, zero) for p in range(self.rank))


def groebner_basis(N: Submodule, order: Optional[MonomialOrder] = None) -> GroebnerBasis:
    """Reduced Gröbner basis; deterministic for fixed generators and order."""
    order = module_order(N.ring, order)
    key = order.module_key_fn()
    K = N.ring.field
    red, _ = _buchberger(
        [g.term_dict() for g in N.generators], N.ring, key, track=False, ideal=N.rank == 1
    )
    basis = [FreeElement(N.ring, N.rank, t) for t in _reduced_basis(red, key, K)]
    return GroebnerBasis(N, basis, order)


def normal_form(v: FreeElement, G: GroebnerBasis) -> FreeElement:
    return G.normal_form(v)


def syzygies(N: Submodule, order: Optional[MonomialOrder] = None) -> Submodule:
    """
    Generators of the kernel of R^m -> R^rank, e_i -> generators[i].

    The relations come from the S-pair reductions to zero (plus the Koszul
    relations of pairs skipped for coprime leads), pulled back to the
    original generators.
    """
    m = len(N.generators)
    if m == 0:
        return Submodule.zero(N.ring, 0)
    key = module_order(N.ring, order).module_key_fn()
    _, syz = _buchberger(
        [g.term_dict() for g in N.generators], N.ring, key, track=True, ideal=N.rank == 1
    )
    seen = set()
    out = []
    for terms in syz:
        s = FreeElement(N.ring, m, terms)
        if not s.is_zero() and s not in seen:
            seen.add(s)
            out.append(s)
    return Submodule(N.ring, m, tuple(out))


def submodule_contains(U: Submodule, V: Submodule) -> bool:
    """V ⊆ U."""
    G = groebner_basis(U)
    return all(G.contains(v) for v in V.generators)


def submodule_equal(U: Submodule, V: Submodule) -> bool:
    return submodule_contains(U, V) and submodule_contains(V, U)


def submodule_intersection(U: Submodule, V: Submodule) -> Submodule:
    """U ∩ V inside the same free module, read off the syzygies of [U | V]."""
    if U.ring != V.ring:
        raise RingMismatchError(U.ring, V.ring)
    if U.rank != V.rank:
        raise RankMismatchError(U.rank, V.rank)
    U, V = U.nonzero(), V.nonzero()
    if not U.generators or not V.generators:
        return Submodule.zero(U.ring, U.rank)
    a = len(U.generators)
    stacked = Submodule(U.ring, U.rank, U.generators + V.generators)
    out = []
    for s in syzygies(stacked).generators:
        v = s.project(range(a)).dot(list(U.generators))
        if not v.is_zero():
            out.append(v)
    return Submodule(U.ring, U.rank, tuple(_dedupe(out)))


def ideal_intersection(I: Submodule, J: Submodule) -> Submodule:
    """
    I ∩ J by elimination: the t-free part of t*I + (1 - t)*J in k[t, x]
    under an order eliminating t.
    """
    I.require_ideal()
    J.require_ideal()
    if I.ring != J.ring:
        raise RingMismatchError(I.ring, J.ring)
    ring = I.ring
    base = ring.order.ring_order
    if base.kind.value not in ("grevlex", "lex"):
        base = MonomialOrder.grevlex()
    big = ring.prepend(("@t",), (1,)).with_order(MonomialOrder.elimination((0,), base))
    lift = lambda e: (0,) + e  # noqa: E731
    t = big.gen("@t")
    one_minus_t = big.one() - t
    gens = [
        t * MultiPoly(big, {lift(e): c for e, c in f.term_dict().items()})
        for f in I.polynomials
    ] + [
        one_minus_t * MultiPoly(big, {lift(e): c for e, c in f.term_dict().items()})
        for f in J.polynomials
    ]
    G = groebner_basis(Submodule.ideal(big, gens))
    out = []
    for g in G.basis:
        f = g.component(0)
        if all(e[0] == 0 for e in f.term_dict()):
            out.append(MultiPoly(ring, {e[1:]: c for e, c in f.term_dict().items()}))
    logger.debug("ideal_intersection: %d generators", len(out))
    return Submodule.ideal(ring, out)


def colon(N: Submodule, I: Submodule) -> Submodule:
    """
    (N : I) = {v in R^r : f v in N for every f in I}.

    One syzygy computation: columns f_j e_a (stacked over j) followed by
    the generators of N placed in each block j; the first r coordinates of
    a syzygy form an element of the colon.
    """
    I.require_ideal()
    if N.ring != I.ring:
        raise RingMismatchError(N.ring, I.ring)
    ring, r = N.ring, N.rank
    fs = [f for f in I.polynomials if not f.is_zero()]
    if not fs:
        return Submodule.free(ring, r)
    ns = [g for g in N.generators if not g.is_zero()]
    if not ns:
        # (0 : I) in a free module over a domain
        return Submodule.zero(ring, r)
    q = len(fs)
    big_rank = r * q
    columns = []
    for a in range(r):
        terms = {}
        for j, f in enumerate(fs):
            for e, c in f.term_dict().items():
                terms[(j * r + a, e)] = c
        columns.append(FreeElement(ring, big_rank, terms))
    for j in range(q):
        for g in ns:
            columns.append(g.shift(big_rank, j * r))
    out = []
    for s in syzygies(Submodule(ring, big_rank, tuple(columns))).generators:
        v = s.project(range(r))
        if not v.is_zero():
            out.append(v)
    return Submodule(ring, r, tuple(_dedupe(out)))


def saturation(N: Submodule, I: Submodule, max_steps: int = 64) -> Submodule:
    """
    (N : I^∞) as the stable value of N ⊆ (N : I) ⊆ (N : I^2) ⊆ ...

    The returned submodule is reduced (its Gröbner basis) and satisfies
    (result : I) = result.
    """
    current = N
    for step in range(max_steps):
        nxt = colon(current, I)
        if submodule_contains(current, nxt):
            logger.debug("saturation stabilised after %d colon steps", step)
            return _as_reduced(current)
        current = nxt
    raise SaturationLimitError("saturation", max_steps)


def ideal_power(I: Submodule, l: int) -> Submodule:
    """Generators of I^l: all degree-l products of the generators of I."""
    I.require_ideal()
    if l < 0:
        raise ValueError("ideal powers need l >= 0")
    polys = [f for f in I.polynomials if not f.is_zero()]
    if l == 0:
        return Submodule.ideal(I.ring, [I.ring.one()])
    products = []
    seen = set()
    for combo in combinations_with_replacement(range(len(polys)), l):
        p = I.ring.one()
        for i in combo:
            p = p * polys[i]
        if p not in seen:
            seen.add(p)
            products.append(p)
    return Submodule.ideal(I.ring, products)


def _as_reduced(N: Submodule) -> Submodule:
    return Submodule(N.ring, N.rank, tuple(groebner_basis(N).basis))


def _dedupe(elements: Iterable[FreeElement]) -> list[FreeElement]:
    seen = set()
    out = []
    for v in elements:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out
