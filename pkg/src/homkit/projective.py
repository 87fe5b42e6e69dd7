"""
Coherent sheaves on P^n through graded modules over k[x_0..x_n].

For M~ on P^n and p >= 1, H^p(M~(l)) = H^{p+1}_m(M)_l; in degree zero,
h^0(M~(l)) = dim M_l - dim H^0_m(M)_l + dim H^1_m(M)_l.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from errors import CertificationError, PreconditionError, StabilizationError, ZeroSheafError
from groebner import FreeElement, ideal_power, saturation
from homology import (
    PresentedModule,
    betti_table,
    degree_basis,
    ext_module,
    graded_dims,
    is_zero,
    krull_dimension,
    minimal_presentation,
    require_standard_grading,
)
from linalg import rank
from local_cohomology import DEFAULT_POWER_CAP, CancellationToken, irrelevant_ideal, local_cohomology_dims
from polynomials import NEG_INF

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DualityData:
    """Serre duality on P^n: the dualizing sheaf is O(-n-1)."""

    n: int

    @property
    def canonical_twist(self) -> int:
        return -(self.n + 1)

    def dualizing_module(self, ring) -> PresentedModule:
        """A(canonical_twist), i.e. one generator in degree n + 1."""
        return PresentedModule.free(ring, (-self.canonical_twist,))


def ambient_dimension(M: PresentedModule) -> int:
    return M.ring.ngens - 1


# ── Cohomology tables ──────────────────────────────────────────


@dataclass
class SheafCohomologyTable:
    """h^p(M~(l)) for 0 <= p <= n and l in the window."""

    module: PresentedModule = field(repr=False)
    n: int
    window: tuple[int, int]
    entries: dict[tuple[int, int], int]

    def __getitem__(self, key: tuple[int, int]) -> int:
        p, l = key
        if p < 0 or p > self.n:
            return 0
        return self.entries[(p, l)]

    def euler_characteristic(self, l: int) -> int:
        return sum((-1) ** p * self[p, l] for p in range(self.n + 1))

    def to_json(self) -> dict:
        lo, hi = self.window
        return {
            "n": self.n,
            "window": [lo, hi],
            "rows": [[p] + [self[p, l] for l in range(lo, hi + 1)] for p in range(self.n + 1)],
            "euler": [self.euler_characteristic(l) for l in range(lo, hi + 1)],
        }


def sheaf_cohomology_table(
    M: PresentedModule,
    window: tuple[int, int],
    power_cap: int = DEFAULT_POWER_CAP,
    token: Optional[CancellationToken] = None,
) -> SheafCohomologyTable:
    """All h^p(M~(l)) on the window, one Ext-limit pass per local cohomology index."""
    require_standard_grading(M.ring, "sheaf cohomology")
    n = ambient_dimension(M)
    m = irrelevant_ideal(M.ring)
    lo, hi = window
    lc = {q: local_cohomology_dims(q, m, M, window, power_cap, token).dims for q in range(n + 2)}
    dims = graded_dims(M, window)
    entries = {}
    for l in range(lo, hi + 1):
        entries[(0, l)] = dims[l] - lc[0][l] + lc[1][l]
        for p in range(1, n + 1):
            entries[(p, l)] = lc[p + 1][l]
    return SheafCohomologyTable(M, n, (lo, hi), entries)


def sheaf_cohomology_dim(
    M: PresentedModule,
    p: int,
    l: int,
    power_cap: int = DEFAULT_POWER_CAP,
    token: Optional[CancellationToken] = None,
) -> int:
    require_standard_grading(M.ring, "sheaf cohomology")
    n = ambient_dimension(M)
    if not 0 <= p <= n:
        raise PreconditionError(f"p = {p} is outside [0, {n}]")
    m = irrelevant_ideal(M.ring)
    if p >= 1:
        return local_cohomology_dims(p + 1, m, M, (l, l), power_cap, token).dims[l]
    h0 = local_cohomology_dims(0, m, M, (l, l), power_cap, token).dims[l]
    h1 = local_cohomology_dims(1, m, M, (l, l), power_cap, token).dims[l]
    return graded_dims(M, (l, l))[l] - h0 + h1


def euler_characteristic(
    M: PresentedModule,
    l: int,
    power_cap: int = DEFAULT_POWER_CAP,
    token: Optional[CancellationToken] = None,
) -> int:
    """χ(M~(l)) = Σ (-1)^p h^p(M~(l))."""
    return sheaf_cohomology_table(M, (l, l), power_cap, token).euler_characteristic(l)


def serre_duality_defect(
    M: PresentedModule,
    p: int,
    l: int,
    power_cap: int = DEFAULT_POWER_CAP,
    token: Optional[CancellationToken] = None,
) -> int:
    """h^p(M~(l)) - dim Ext^{n-p}(M, A(-n-1))_{-l}, for 1 <= p <= n."""
    n = ambient_dimension(M)
    if not 1 <= p <= n:
        raise PreconditionError(f"Serre duality is checked for 1 <= p <= {n}, got p = {p}")
    lhs = sheaf_cohomology_dim(M, p, l, power_cap, token)
    omega = DualityData(n).dualizing_module(M.ring)
    rhs = graded_dims(ext_module(n - p, M, omega), (-l, -l))[-l]
    return lhs - rhs


# ── Regularity ─────────────────────────────────────────────────


def is_m_regular(
    M: PresentedModule,
    m: int,
    power_cap: int = DEFAULT_POWER_CAP,
    token: Optional[CancellationToken] = None,
) -> bool:
    """H^p(M~(m - p)) = 0 for every p >= 1."""
    require_standard_grading(M.ring, "regularity")
    return all(
        sheaf_cohomology_dim(M, p, m - p, power_cap, token) == 0
        for p in range(1, ambient_dimension(M) + 1)
    )


def regularity(
    M: PresentedModule,
    power_cap: int = DEFAULT_POWER_CAP,
    token: Optional[CancellationToken] = None,
):
    """
    Castelnuovo–Mumford regularity of M~.

    The candidate max_{q >= 2} (q - indeg Ext^{N-q}(M, A(-N))) comes from
    local duality (N = number of variables); it is certified with
    is_m_regular at m and m - 1 and checked against the Betti bound.
    Sheaves with zero-dimensional support give NEG_INF.
    """
    require_standard_grading(M.ring, "regularity")
    if is_zero(M) or krull_dimension(M) <= 0:
        raise ZeroSheafError("regularity is undefined for the zero sheaf")
    N = M.ring.ngens
    omega = PresentedModule.free(M.ring, (N,))
    candidates = []
    for q in range(2, N + 1):
        if token is not None:
            token.check()
        E = ext_module(N - q, M, omega)
        if not is_zero(E):
            candidates.append(q - min(E.twists))
    if not candidates:
        return NEG_INF
    r = max(candidates)
    logger.debug("regularity candidate %d from local duality", r)
    if not is_m_regular(M, r, power_cap, token) or is_m_regular(M, r - 1, power_cap, token):
        raise CertificationError(f"regularity candidate {r} failed certification at m and m - 1")
    bound = betti_table(M).regularity()
    if r > bound:
        raise CertificationError(f"regularity {r} exceeds the Betti bound {bound}")
    return r


@lru_cache(maxsize=64)
def _maximal_power_module(ring, k: int) -> PresentedModule:
    return PresentedModule.ideal_module(ideal_power(irrelevant_ideal(ring), k))


def torsion_free_part(M: PresentedModule) -> PresentedModule:
    """M / H^0_m(M)."""
    sat = saturation(M.relation_submodule(), irrelevant_ideal(M.ring))
    return minimal_presentation(PresentedModule.cokernel(M.ring, M.twists, sat.generators))


def saturated_module(
    M: PresentedModule,
    window: tuple[int, int],
    power_cap: int = DEFAULT_POWER_CAP,
    token: Optional[CancellationToken] = None,
) -> PresentedModule:
    """
    A module agreeing with Γ_*(M~) = ⊕_d H^0(M~(d)) on the window:
    Hom(m^k, M / H^0_m(M)), with k raised until three consecutive values
    agree on the window.
    """
    require_standard_grading(M.ring, "saturation")
    base = torsion_free_part(M)
    history = []
    for k in range(1, power_cap + 1):
        if token is not None:
            token.check()
        S = ext_module(0, _maximal_power_module(M.ring, k), base)
        dims = graded_dims(S, window)
        history.append((dims, S))
        if len(history) >= 3 and history[-1][0] == history[-2][0] == history[-3][0]:
            return history[-2][1]
    raise StabilizationError(0, power_cap, window)


def multiplication_rank(S: PresentedModule, l: int) -> tuple[int, int]:
    """(rank of A_1 ⊗ S_l -> S_{l+1}, dim S_{l+1})."""
    ring = S.ring
    K = ring.field
    source = degree_basis(S, l)
    target = degree_basis(S, l + 1)
    if not target:
        return 0, 0
    index = {t: i for i, t in enumerate(target)}
    rows = []
    for pos, e in source:
        for i in range(ring.ngens):
            shifted = tuple(a + (1 if j == i else 0) for j, a in enumerate(e))
            v = S.reduce(FreeElement(ring, S.rank, {(pos, shifted): K.one()}))
            row = [K.zero()] * len(target)
            for t, c in v.term_dict().items():
                row[index[t]] = c
            rows.append(row)
    return rank(rows, K), len(target)


@dataclass
class RegularityRow:
    l: int
    regular: bool
    multiplication_surjective: bool
    globally_generated: bool

    @property
    def ok(self) -> bool:
        return self.regular and self.multiplication_surjective and self.globally_generated


@dataclass
class RegularityPropertiesReport:
    m: int
    horizon: int
    rows: list[RegularityRow]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "horizon": self.horizon,
            "ok": self.ok,
            "rows": [
                {
                    "l": r.l,
                    "regular": r.regular,
                    "multiplication_surjective": r.multiplication_surjective,
                    "globally_generated": r.globally_generated,
                }
                for r in self.rows
            ],
        }


def regularity_properties_check(
    M: PresentedModule,
    m: int,
    horizon: int = 4,
    power_cap: int = DEFAULT_POWER_CAP,
    token: Optional[CancellationToken] = None,
) -> RegularityPropertiesReport:
    """
    For an m-regular M~ and l in [m, m + horizon]: (i) M~ is l-regular,
    (ii) H^0(O(1)) ⊗ H^0(M~(l)) -> H^0(M~(l+1)) is onto, (iii) the degree
    >= l part of Γ_*(M~) is generated in degree l.
    """
    require_standard_grading(M.ring, "regularity")
    if not is_m_regular(M, m, power_cap, token):
        raise PreconditionError(f"the sheaf is not {m}-regular")
    # above the Betti regularity of M / H^0 the module already equals Γ_*
    top = betti_table(torsion_free_part(M)).regularity()
    top = m if top is NEG_INF else top
    hi = max(m + horizon, top) + 1
    S = saturated_module(M, (m, hi), power_cap, token)

    def onto(j: int) -> bool:
        r, target = multiplication_rank(S, j)
        return r == target

    rows = []
    for l in range(m, m + horizon + 1):
        rows.append(
            RegularityRow(
                l,
                is_m_regular(M, l, power_cap, token),
                onto(l),
                all(onto(j) for j in range(l, hi)),
            )
        )
    return RegularityPropertiesReport(m, horizon, rows)
