"""
Families of graded modules over the affine line.

A family lives over k[t, x_0..x_n] where the parameter t has weight 0, so
its presentation is homogeneous in the x-degree only. Fibers are obtained
by substituting t = c and re-presenting over k[x_0..x_n].
"""

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from errors import GenericFiberError, GradingError, PreconditionError
from fields import Scalar
from groebner import (
    FreeElement,
    Submodule,
    colon,
    groebner_basis,
    saturation,
)
from homology import NumericalPolynomial, PresentedModule, binomial, hilbert_polynomial
from local_cohomology import DEFAULT_POWER_CAP, CancellationToken
from polynomials import MonomialOrder, MultiPoly, PolyRing
from projective import sheaf_cohomology_dim

logger = logging.getLogger(__name__)

GENERIC_TRIALS = 3
GENERIC_BOUND = 10**4


@dataclass(frozen=True)
class FamilyModule:
    """A module over k[t][x_0..x_n]; `parameter` must be the weight-0 variable."""

    base: PresentedModule
    parameter: str = "t"

    def __post_init__(self):
        ring = self.base.ring
        i = ring.index(self.parameter)
        if ring.weights[i] != 0:
            raise GradingError(f"family parameter {self.parameter} must have weight 0")
        if any(w != 1 for j, w in enumerate(ring.weights) if j != i):
            raise GradingError("fiber variables of a family must have weight 1")

    @classmethod
    def family_ring(cls, fiber_ring: PolyRing, parameter: str = "t") -> PolyRing:
        """k[t, x...] from k[x...], t in front with weight 0."""
        return fiber_ring.prepend((parameter,), (0,))

    @classmethod
    def from_ideal(cls, ring: PolyRing, polys: Iterable[MultiPoly], parameter: str = "t") -> "FamilyModule":
        """The family k[t][x]/(polys)."""
        return cls(PresentedModule.quotient(Submodule.ideal(ring, polys)), parameter)

    @property
    def ring(self) -> PolyRing:
        return self.base.ring

    @property
    def parameter_index(self) -> int:
        return self.ring.index(self.parameter)

    @property
    def fiber_ring(self) -> PolyRing:
        return self.ring.without((self.parameter,))

    def _specialize_element(self, v: FreeElement, c: Scalar, fiber: PolyRing) -> FreeElement:
        K = self.ring.field
        i = self.parameter_index
        out: dict = {}
        for (pos, e), a in v.term_dict().items():
            coeff = K.mul(a, K.power(c, e[i])) if e[i] else a
            if coeff == 0:
                continue
            key = (pos, e[:i] + e[i + 1 :])
            out[key] = K.add(out[key], coeff) if key in out else coeff
        return FreeElement(fiber, v.rank, out)

    def fiber(self, c) -> PresentedModule:
        """The fiber over t = c, presented over k[x]."""
        c = self.ring.field(c)
        fiber = self.fiber_ring
        relations = [self._specialize_element(v, c, fiber) for v in self.base.relations]
        return PresentedModule.cokernel(fiber, self.base.twists, relations)

    def format(self) -> str:
        return f"family over {self.parameter}: {self.base.format()}"


# ── Flatness ───────────────────────────────────────────────────


@dataclass
class FlatnessReport:
    flat: bool
    witness: Optional[FreeElement] = None
    torsion_polynomial: Optional[MultiPoly] = None
    at: Optional[Scalar] = None

    def to_json(self, K) -> dict:
        out = {
            "flat": self.flat,
            "witness": self.witness.format() if self.witness is not None else None,
            "torsion_polynomial": (
                self.torsion_polynomial.format() if self.torsion_polynomial is not None else None
            ),
        }
        if self.at is not None:
            out["at"] = K.to_json(self.at)
        return out


def _parameter_coefficient(F: FamilyModule, g: FreeElement, key) -> MultiPoly:
    """The coefficient in k[t] of the leading x-term of g."""
    i = F.parameter_index
    pos, exps, _ = g.leading_term(key)
    xpart = exps[:i] + exps[i + 1 :]
    terms = {}
    for (p, e), c in g.term_dict().items():
        if p == pos and e[:i] + e[i + 1 :] == xpart:
            only_t = tuple(a if j == i else 0 for j, a in enumerate(e))
            terms[only_t] = c
    return MultiPoly(F.ring, terms)


def _torsion_witness(R: Submodule, T: Submodule) -> Optional[FreeElement]:
    G = groebner_basis(R)
    for v in T.generators:
        r = G.normal_form(v)
        if not r.is_zero():
            return r
    return None


def flat_over_line(F: FamilyModule, at=None) -> FlatnessReport:
    """
    Flatness over k[t], i.e. absence of k[t]-torsion.

    With an order comparing x-monomials first, every Gröbner basis element
    has a leading coefficient h_i(t); after inverting h = Π h_i the module is
    free over k[t]_h, so the torsion is (R : h^∞)/R. With `at=c` only
    (t - c)-torsion is tested, i.e. Tor_1 against the fiber at c.
    """
    ring = F.ring
    R = F.base.relation_submodule()
    if at is not None:
        c = ring.field(at)
        t_minus_c = ring.gen(F.parameter) - ring.constant(c)
        witness = _torsion_witness(R, colon(R, Submodule.ideal(ring, [t_minus_c])))
        return FlatnessReport(witness is None, witness, None if witness is None else t_minus_c, c)

    if not R.nonzero().generators:
        return FlatnessReport(True)
    xblock = [j for j in range(ring.ngens) if j != F.parameter_index]
    order = MonomialOrder.elimination(xblock, MonomialOrder.grevlex())
    G = groebner_basis(R, order)
    key = order.module_key_fn()
    h = ring.one()
    for g in G.basis:
        h = h * _parameter_coefficient(F, g, key)
    h = h.monic()
    logger.debug("flat_over_line: lead coefficient product %s", h.format())
    if h.is_constant():
        return FlatnessReport(True)
    witness = _torsion_witness(R, saturation(R, Submodule.ideal(ring, [h])))
    return FlatnessReport(witness is None, witness, None if witness is None else h)


# ── Fiber profiles ─────────────────────────────────────────────


def _map(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _generic_points(F: FamilyModule, seed: int) -> list:
    rng = random.Random(seed)
    K = F.ring.field
    return [K.random_element(rng, GENERIC_BOUND) for _ in range(GENERIC_TRIALS)]


def _require_distinct(K, samples: Sequence) -> list:
    values = [K(c) for c in samples]
    if len(set(values)) != len(values):
        raise PreconditionError("sample points must be distinct")
    return values


@dataclass
class FiberProfile:
    samples: list[tuple[Scalar, NumericalPolynomial]]
    generic: NumericalPolynomial
    generic_points: list[Scalar] = field(default_factory=list)

    @property
    def strata(self) -> dict[NumericalPolynomial, list[Scalar]]:
        out: dict = {}
        for c, phi in self.samples:
            out.setdefault(phi, []).append(c)
        return out

    @property
    def distinct_polynomials(self) -> set[NumericalPolynomial]:
        return {phi for _, phi in self.samples}

    @property
    def constant(self) -> bool:
        return all(phi == self.generic for _, phi in self.samples)

    def euler(self) -> list[tuple[Scalar, int]]:
        """χ of every sampled fiber, Φ_c(0)."""
        return [(c, phi(0)) for c, phi in self.samples]

    def to_json(self, K) -> dict:
        return {
            "samples": [[K.to_json(c), phi.to_json(), phi(0)] for c, phi in self.samples],
            "strata": [
                {"polynomial": phi.to_json(), "points": [K.to_json(c) for c in points]}
                for phi, points in self.strata.items()
            ],
            "generic": self.generic.to_json(),
            "constant": self.constant,
        }


def fiber_hilbert_profile(
    F: FamilyModule,
    samples: Sequence,
    seed: int = 0,
    workers: int = 1,
) -> FiberProfile:
    """
    Hilbert polynomial of each sampled fiber, plus the generic one from
    three random parameter values (which must agree).
    """
    K = F.ring.field
    points = _require_distinct(K, samples)
    phi = lambda c: hilbert_polynomial(F.fiber(c))  # noqa: E731
    values = _map(phi, points, workers)
    generic_points = _generic_points(F, seed)
    generic = _map(phi, generic_points, workers)
    if len(set(generic)) != 1:
        raise GenericFiberError(
            "random fibers disagree on the Hilbert polynomial: "
            + ", ".join(p.format() for p in generic)
        )
    logger.debug("fiber profile: %d samples, %d strata", len(points), len(set(values)))
    return FiberProfile(list(zip(points, values)), generic[0], generic_points)


@dataclass
class FiberCohomology:
    p: int
    l: int
    values: list[tuple[Scalar, int]]
    generic: int

    @property
    def semicontinuous(self) -> bool:
        """Every special value is at least the generic one."""
        return all(v >= self.generic for _, v in self.values)

    def to_json(self, K) -> dict:
        return {
            "p": self.p,
            "l": self.l,
            "values": [[K.to_json(c), v] for c, v in self.values],
            "generic": self.generic,
            "semicontinuous": self.semicontinuous,
        }


def fiber_cohomology(
    F: FamilyModule,
    p: int,
    l: int,
    samples: Sequence,
    seed: int = 0,
    power_cap: int = DEFAULT_POWER_CAP,
    workers: int = 1,
    token: Optional[CancellationToken] = None,
) -> FiberCohomology:
    """h^p(F_c(l)) on the sampled fibers and at a generic point."""
    K = F.ring.field
    points = _require_distinct(K, samples)
    h = lambda c: sheaf_cohomology_dim(F.fiber(c), p, l, power_cap, token)  # noqa: E731
    values = _map(h, points, workers)
    generic = _map(h, _generic_points(F, seed), workers)
    if len(set(generic)) != 1:
        raise GenericFiberError(f"random fibers disagree on h^{p}: {generic}")
    return FiberCohomology(p, l, list(zip(points, values)), generic[0])


def hypersurface_hilbert_polynomial(n: int, d: int) -> NumericalPolynomial:
    """Φ(t) = binom(n + t, n) - binom(n - d + t, n) for a degree-d hypersurface in P^n."""
    if n < 1 or d < 1:
        raise PreconditionError(f"need n >= 1 and d >= 1, got n = {n}, d = {d}")
    return NumericalPolynomial.from_function(
        lambda t: binomial(n + t, n) - binomial(n - d + t, n), n - 1
    )

