"""
Local cohomology, depth and the graded local-duality identity.

H^p_I(M) is computed as the limit of Ext^p(A/I^l, M): the windowed graded
dimensions are accepted once three consecutive powers agree on the window
widened by one degree on each side.
"""

import logging
import random
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from errors import (
    CertificationError,
    ComputationCancelled,
    DepthUndefinedError,
    SaturationLimitError,
    StabilizationError,
    ZeroModuleError,
)
from groebner import (
    FreeElement,
    Submodule,
    colon,
    groebner_basis,
    ideal_intersection,
    ideal_power,
    saturation,
    submodule_contains,
)
from homology import (
    GradedDims,
    PresentedModule,
    ext_module,
    graded_dims,
    is_zero,
    krull_dimension,
    monomials_of_degree,
    subquotient,
    require_positive_grading,
    require_standard_grading,
)
from polynomials import MultiPoly, PolyRing

logger = logging.getLogger(__name__)

DEFAULT_POWER_CAP = 12


class CancellationToken:
    """Cooperative cancellation for long Ext-limit computations."""

    def __init__(self):
        self._event = threading.Event()

    def cancel(self):
        self._event.set()

    @property
    def cancelled(self) -> bool:
        return self._event.is_set()

    def check(self):
        if self._event.is_set():
            raise ComputationCancelled("computation cancelled")


def irrelevant_ideal(ring: PolyRing) -> Submodule:
    """The ideal of the variables of positive weight."""
    return Submodule.ideal(ring, [ring.gen(v) for v, w in zip(ring.variables, ring.weights) if w > 0])


@lru_cache(maxsize=256)
def power_quotient(I: Submodule, l: int) -> PresentedModule:
    """A/I^l, shared so that its resolution and Ext caches are reused."""
    return PresentedModule.quotient(ideal_power(I, l))


# ── H^0 ────────────────────────────────────────────────────────


def h0_local(I: Submodule, M: PresentedModule) -> PresentedModule:
    """
    H^0_I(M) = (R : I^∞) / R for M = F / R.

    The zero ideal gives all of M, the unit ideal gives 0.
    """
    I.require_ideal()
    R = M.relation_submodule()
    S = saturation(R, I)
    gens = []
    for g in S.generators:
        r = M.reduce(g)
        if not r.is_zero():
            gens.append(r)
    return subquotient(M.ring, M.twists, gens, M.relations)


# ── Ext-limit ──────────────────────────────────────────────────


@dataclass
class LocalCohomologyResult:
    p: int
    ideal: Submodule
    dims: GradedDims
    stabilized_at: int
    ext: Optional[PresentedModule] = field(default=None, repr=False, compare=False)
    history: list[GradedDims] = field(default_factory=list, repr=False, compare=False)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "ideal": self.ideal.format(),
            "dims": self.dims.to_json(),
            "stabilized_at_power": self.stabilized_at,
        }


def local_cohomology_dims(
    p: int,
    I: Submodule,
    M: PresentedModule,
    window: tuple[int, int],
    power_cap: int = DEFAULT_POWER_CAP,
    token: Optional[CancellationToken] = None,
) -> LocalCohomologyResult:
    """
    Graded dims of H^p_I(M) on the window.

    Ext^p(A/I^l, M) is computed for l = 1, 2, ... until three consecutive
    powers give the same dims on [lo - 1, hi + 1]; the middle power is
    reported as l*. Raises StabilizationError past the power cap.
    """
    if p < 0:
        raise ValueError("cohomological index must be >= 0")
    I.require_ideal()
    lo, hi = window
    if lo > hi:
        raise ValueError(f"empty window [{lo}, {hi}]")
    wide = (lo - 1, hi + 1)
    history: list[tuple[GradedDims, PresentedModule]] = []
    for l in range(1, power_cap + 1):
        if token is not None:
            token.check()
        E = ext_module(p, power_quotient(I, l), M)
        dims = graded_dims(E, wide)
        history.append((dims, E))
        logger.debug("H^%d ext-limit: l=%d dims=%s", p, l, dims.dims)
        if len(history) >= 3 and history[-1][0] == history[-2][0] == history[-3][0]:
            stable, module = history[-2]
            return LocalCohomologyResult(
                p, I, stable.restrict(window), l - 1, module, [d for d, _ in history]
            )
    raise StabilizationError(p, power_cap, window)


# ── Depth ──────────────────────────────────────────────────────


@dataclass
class DepthCertificate:
    """depth_I(M) with a regular sequence in I and the Ext evidence."""

    depth: int
    regular_sequence: list[MultiPoly]
    ext_witness: tuple[int, tuple[int, ...]]
    complete: bool = True

    def to_json(self) -> dict:
        p, twists = self.ext_witness
        return {
            "depth": self.depth,
            "regular_sequence": [f.format() for f in self.regular_sequence],
            "ext_witness": {"p": p, "generator_degrees": list(twists)},
            "complete": self.complete,
        }


def _extended_relations(R: Submodule, polys: list[MultiPoly]) -> Submodule:
    """R + (polys)·F inside F = A^rank."""
    gens = list(R.generators)
    for f in polys:
        if f.is_zero():
            continue
        for a in range(R.rank):
            gens.append(FreeElement.unit(R.ring, R.rank, a).mul_poly(f))
    return Submodule(R.ring, R.rank, tuple(gens))


def _random_element_of_degree(I: Submodule, d: int, rng: random.Random) -> Optional[MultiPoly]:
    """A random combination of the x^a f_i of degree d."""
    ring = I.ring
    K = ring.field
    out = ring.zero()
    for f in I.polynomials:
        if f.is_zero() or f.degree() > d:
            continue
        for e in monomials_of_degree(ring.weights, d - f.degree()):
            out = out + f.mul_term(e, K.random_element(rng))
    return None if out.is_zero() else out


def is_nonzerodivisor(a: MultiPoly, relations: Submodule) -> bool:
    """a is a nonzerodivisor on F/R iff (R : a) = R."""
    return submodule_contains(relations, colon(relations, Submodule.ideal(a.ring, [a])))


def depth(
    I: Submodule,
    M: PresentedModule,
    seed: int = 0,
    tries: int = 3,
    token: Optional[CancellationToken] = None,
) -> DepthCertificate:
    """
    depth_I(M) = min{p : Ext^p(A/I, M) != 0}, certified by an M-regular
    sequence of general homogeneous elements of I (linear forms first, then
    the generator degrees).
    """
    I.require_ideal()
    require_positive_grading(M.ring, "depth")
    if is_zero(M) or groebner_basis(_extended_relations(M.relation_submodule(), I.polynomials)).is_unit():
        raise DepthUndefinedError("depth is undefined: I*M = M")

    A_over_I = power_quotient(I, 1)
    value = None
    witness = None
    for p in range(M.ring.ngens + 1):
        if token is not None:
            token.check()
        E = ext_module(p, A_over_I, M)
        if not is_zero(E):
            value, witness = p, (p, E.twists)
            break
    if value is None:
        raise CertificationError("Ext^p(A/I, M) vanished for every p <= number of variables")

    rng = random.Random(seed)
    gen_degrees = sorted({f.degree() for f in I.polynomials if not f.is_zero()})
    degrees = ([1] if 1 not in gen_degrees else []) + gen_degrees
    degrees += [gen_degrees[-1] + 1] if gen_degrees else []
    relations = M.relation_submodule()
    sequence: list[MultiPoly] = []
    while len(sequence) < value:
        if token is not None:
            token.check()
        found = None
        for d in degrees:
            for _ in range(tries):
                a = _random_element_of_degree(I, d, rng)
                if a is not None and is_nonzerodivisor(a, relations):
                    found = a
                    break
            if found is not None:
                break
        if found is None:
            logger.debug("regular sequence search stopped at length %d", len(sequence))
            return DepthCertificate(value, sequence, witness, complete=False)
        sequence.append(found)
        relations = _extended_relations(relations, [found])
    return DepthCertificate(value, sequence, witness, complete=True)


@dataclass
class CMReport:
    is_cm: bool
    depth: int
    dim: int
    certificate: Optional[DepthCertificate] = None

    def to_json(self) -> dict:
        return {"is_cm": self.is_cm, "depth": self.depth, "dim": self.dim}


def cm_test(M: PresentedModule, seed: int = 0, token: Optional[CancellationToken] = None) -> CMReport:
    """Cohen–Macaulay at the irrelevant ideal: depth = Krull dimension."""
    if is_zero(M):
        raise ZeroModuleError("the Cohen-Macaulay test needs a nonzero module")
    cert = depth(irrelevant_ideal(M.ring), M, seed=seed, token=token)
    dim = krull_dimension(M)
    return CMReport(cert.depth == dim, cert.depth, dim, cert)


# ── Mayer–Vietoris ─────────────────────────────────────────────


@dataclass
class MayerVietorisReport:
    """Alternating sums along H_{I+J} -> H_I ⊕ H_J -> H_{I∩J} -> H_{I+J}[1]."""

    p_max: int
    sums: GradedDims
    groups: dict[str, list[GradedDims]]
    complete: bool

    @property
    def ok(self) -> bool:
        return self.sums.is_zero()

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "complete": self.complete,
            "p_max": self.p_max,
            "sums": self.sums.to_json(),
            "groups": {k: [g.to_json() for g in v] for k, v in sorted(self.groups.items())},
        }


def mayer_vietoris_check(
    I: Submodule,
    J: Submodule,
    M: PresentedModule,
    p_max: Optional[int] = None,
    window: tuple[int, int] = (-6, 6),
    power_cap: int = DEFAULT_POWER_CAP,
    token: Optional[CancellationToken] = None,
) -> MayerVietorisReport:
    """
    Degreewise Σ_p (-1)^p (h_{I+J} - h_I - h_J + h_{I∩J}) for p <= p_max.

    The sums vanish when p_max reaches the number of variables (the
    sequence is then complete); `complete` records whether it does.
    """
    p_max = M.ring.ngens if p_max is None else p_max
    ideals = {
        "sum": I + J,
        "I": I,
        "J": J,
        "intersection": ideal_intersection(I, J),
    }
    groups: dict[str, list[GradedDims]] = {name: [] for name in ideals}
    for p in range(p_max + 1):
        for name, ideal in ideals.items():
            groups[name].append(local_cohomology_dims(p, ideal, M, window, power_cap, token).dims)
    total = GradedDims.from_dict({}, window)
    for p in range(p_max + 1):
        term = groups["sum"][p] - groups["I"][p] - groups["J"][p] + groups["intersection"][p]
        total = total + term if p % 2 == 0 else total - term
    return MayerVietorisReport(p_max, total, groups, p_max >= M.ring.ngens)


# ── Local duality ──────────────────────────────────────────────


def local_duality_sides(
    M: PresentedModule,
    p: int,
    window: tuple[int, int],
    power_cap: int = DEFAULT_POWER_CAP,
    token: Optional[CancellationToken] = None,
) -> tuple[GradedDims, GradedDims]:
    """
    (dim H^p_m(M)_j, dim Ext^{N-p}(M, A(-N))_{-j}) for j in the window,
    N the number of variables. The left side is an Ext-limit, the right
    side a single finite Ext.
    """
    require_standard_grading(M.ring, "local duality")
    n = M.ring.ngens
    lo, hi = window
    lhs = local_cohomology_dims(p, irrelevant_ideal(M.ring), M, window, power_cap, token).dims
    if n - p < 0:
        return lhs, GradedDims.from_dict({}, window)
    E = ext_module(n - p, M, PresentedModule.free(M.ring, (n,)))
    mirrored = graded_dims(E, (-hi, -lo)).as_dict()
    rhs = GradedDims.from_dict({j: mirrored.get(-j, 0) for j in range(lo, hi + 1)}, window)
    return lhs, rhs


def local_duality_defect(
    M: PresentedModule,
    p: int,
    window: tuple[int, int],
    power_cap: int = DEFAULT_POWER_CAP,
    token: Optional[CancellationToken] = None,
) -> GradedDims:
    lhs, rhs = local_duality_sides(M, p, window, power_cap, token)
    return lhs - rhs


def generators_killed_by(E: PresentedModule, I: Submodule, l: int) -> bool:
    """Every generator of E is annihilated by I^l."""
    power = ideal_power(I, l).polynomials
    return all(
        E.reduce(E.generator(a).mul_poly(f)).is_zero() for a in range(E.rank) for f in power
    )


def annihilating_power(
    E: PresentedModule,
    I: Submodule,
    cap: int = DEFAULT_POWER_CAP,
    token: Optional[CancellationToken] = None,
) -> int:
    """Least l with I^l E = 0; 0 for the zero module."""
    if is_zero(E):
        return 0
    for l in range(1, cap + 1):
        if token is not None:
            token.check()
        if generators_killed_by(E, I, l):
            return l
    raise SaturationLimitError(f"annihilator power of {I.format()}", cap)
