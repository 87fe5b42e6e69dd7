"""
Script commands for homkit.

Executes parsed scripts: declarations build values in an environment,
commands dispatch to the engine and produce one Report each.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from config import Config
from errors import CommandError, EngineError, PreconditionError
from families import (
    FamilyModule,
    fiber_cohomology,
    fiber_hilbert_profile,
    flat_over_line,
    hypersurface_hilbert_polynomial,
)
from fields import CoefficientField, QQ
from grassmann import ChartMatrix, PlueckerVector, chart_transition, pluecker, pluecker_relations_residual
from groebner import (
    FreeElement,
    Submodule,
    colon,
    groebner_basis,
    ideal_intersection,
    ideal_power,
    saturation,
    syzygies,
)
from homology import (
    PresentedModule,
    betti_table,
    graded_dims,
    hilbert_polynomial,
    hilbert_series,
    is_zero,
    krull_dimension,
    minimal_free_resolution,
    minimal_presentation,
    projective_dimension,
    ext_module,
    tor_module,
)
from local_cohomology import (
    annihilating_power,
    cm_test,
    depth,
    h0_local,
    irrelevant_ideal,
    local_cohomology_dims,
    local_duality_sides,
    mayer_vietoris_check,
)
from polynomials import MonomialOrder, PolyRing, monomial_compare, poly_op, substitute
from projective import (
    euler_characteristic,
    is_m_regular,
    regularity,
    regularity_properties_check,
    saturated_module,
    serre_duality_defect,
    sheaf_cohomology_dim,
    sheaf_cohomology_table,
)
from reports import Report
from script import (
    COMMAND_SIGNATURES,
    MAXIDEAL,
    Command,
    CokerSpec,
    FamilyDecl,
    IdealDecl,
    MatrixDecl,
    ModuleDecl,
    NameArg,
    ParBlock,
    PolyDecl,
    PVectorDecl,
    RingDecl,
    Script,
    UseDecl,
    evaluate,
    format_arg,
)

logger = logging.getLogger(__name__)


# Command registry: usage -> description
COMMAND_HELP = {
    "gb I": "Reduced Gröbner basis of an ideal",
    "syz I": "Syzygies of the generators of an ideal",
    "nf f I": "Normal form of a polynomial modulo an ideal",
    "intersect I J": "Intersection of two ideals",
    "colon I J": "Ideal quotient (I : J)",
    "saturate I J": "Saturation (I : J^∞)",
    "power I l": "Generators of I^l",
    "polyop op f g": "add, sub, mul or scale (g constant)",
    "subst f x c": "Substitute the value c for the variable x",
    "compare f g": "Compare leading monomials in the ring order (-1, 0, 1)",
    "present M": "Minimal presentation",
    "resolve M n?": "Minimal free resolution, optionally truncated",
    "betti M": "Betti table",
    "pd M": "Projective dimension",
    "hilbert_series M": "Hilbert series",
    "hilbert_poly M e?": "Hilbert polynomial (with respect to O(e))",
    "krull M": "Krull dimension",
    "dims M [lo,hi]?": "Graded dimensions on a window",
    "ext p M N": "Ext^p(M, N)",
    "tor p M N": "Tor_p(M, N)",
    "h0loc I M": "H^0_I(M), the I-power torsion",
    "localcoh p I M [lo,hi]?": "Graded dimensions of H^p_I(M)",
    "depth I M": "depth_I(M) with a regular sequence certificate",
    "cm_test M": "Cohen-Macaulay test at the irrelevant ideal",
    "mv_check I J M p [lo,hi]?": "Mayer-Vietoris alternating sums",
    "local_duality M p [lo,hi]?": "Graded local duality sides and defect",
    "sheafcoh M p l": "h^p(M~(l)) on projective space",
    "sheafcoh_table M [lo,hi]?": "All h^p(M~(l)) on a window",
    "euler M l": "Euler characteristic of M~(l)",
    "serre_defect M p l": "Serre duality defect",
    "is_regular M m": "Whether M~ is m-regular",
    "regularity M": "Castelnuovo-Mumford regularity",
    "reg_props M m h": "Regularity properties on [m, m+h]",
    "saturated_dims M [lo,hi]?": "dim H^0(M~(d)) from the saturated module",
    "flat_test F c?": "Flatness over the parameter line (at t = c)",
    "fiber_profile F (c,...)": "Fiber Hilbert polynomials and strata",
    "fiber_coh F p l (c,...)": "Fiber cohomology and semicontinuity",
    "hypersurface_phi n d": "Hilbert polynomial of a degree-d hypersurface in P^n",
    "pluecker A": "Plücker coordinates of a chart matrix",
    "pluecker_check v": "Residuals of the Plücker relations",
    "chart A J": "Chart transition A_J^{-1} A",
}

# Exceptions a command may raise on bad input as opposed to bugs.
RECOVERABLE = (EngineError, ValueError, ZeroDivisionError)


def _ideal_json(I: Submodule) -> list[str]:
    return [f.format() for f in I.polynomials]


def _module_json(M: PresentedModule) -> dict:
    M = minimal_presentation(M)
    return {
        "generator_degrees": list(M.twists),
        "relations": [r.format() for r in M.relations],
        "zero": is_zero(M),
    }


def _coker(ring: PolyRing, spec: CokerSpec) -> PresentedModule:
    rows = [[evaluate(e, ring) for e in row] for row in spec.matrix]
    if spec.sources is not None:
        return PresentedModule.from_matrix(ring, spec.targets, spec.sources, rows)
    ncols = len(rows[0]) if rows else 0
    columns = [FreeElement.from_components(ring, [row[j] for row in rows]) for j in range(ncols)]
    return PresentedModule.cokernel(ring, spec.targets, columns)


@dataclass
class Environment:
    """Declared values and the active ring."""

    values: dict = field(default_factory=dict)
    rings: dict[str, PolyRing] = field(default_factory=dict)
    active: Optional[str] = None

    @property
    def ring(self) -> Optional[PolyRing]:
        return self.rings.get(self.active) if self.active else None

    @property
    def coefficients(self) -> CoefficientField:
        return self.ring.field if self.ring else QQ


class ScriptRunner:
    """
    Executes a Script.

    Statements run in order; `par` blocks run their commands on a thread
    pool (engine values are immutable) and report in source order.
    """

    def __init__(self, config: Config):
        self.config = config
        self.env = Environment()

    @property
    def token(self):
        return self.config.cancel_token

    # ── Declarations ────────────────────────────────────────────

    def declare(self, stmt):
        env = self.env
        if isinstance(stmt, RingDecl):
            K = CoefficientField.rationals() if stmt.characteristic == 0 else CoefficientField.prime(stmt.characteristic)
            order = MonomialOrder.lex() if stmt.order == "lex" else MonomialOrder.grevlex()
            env.rings[stmt.name] = PolyRing(K, stmt.variables, order, stmt.weights or ())
            env.active = stmt.name
        elif isinstance(stmt, UseDecl):
            env.active = stmt.name
        elif isinstance(stmt, IdealDecl):
            env.values[stmt.name] = Submodule.ideal(env.ring, [evaluate(e, env.ring) for e in stmt.polys])
        elif isinstance(stmt, PolyDecl):
            env.values[stmt.name] = evaluate(stmt.expr, env.ring)
        elif isinstance(stmt, ModuleDecl):
            env.values[stmt.name] = self._module(stmt)
        elif isinstance(stmt, FamilyDecl):
            ring = FamilyModule.family_ring(env.ring)
            if stmt.coker is not None:
                env.values[stmt.name] = FamilyModule(_coker(ring, stmt.coker))
            else:
                env.values[stmt.name] = FamilyModule.from_ideal(ring, [evaluate(e, ring) for e in stmt.polys])
        elif isinstance(stmt, MatrixDecl):
            env.values[stmt.name] = ChartMatrix(env.coefficients, stmt.rows)
        elif isinstance(stmt, PVectorDecl):
            env.values[stmt.name] = PlueckerVector(env.coefficients, stmt.d, stmt.n, stmt.coords)

    def _ideal(self, name: str) -> Submodule:
        if name == MAXIDEAL:
            return irrelevant_ideal(self.env.ring)
        return self.env.values[name]

    def _module(self, stmt: ModuleDecl) -> PresentedModule:
        ring = self.env.ring
        if stmt.kind == "coker":
            return _coker(ring, stmt.coker)
        if stmt.kind == "free":
            return PresentedModule.free(ring, stmt.twists)
        I = self._ideal(stmt.ideal)
        return PresentedModule.quotient(I) if stmt.kind == "quotient" else PresentedModule.ideal_module(I)

    # ── Arguments ───────────────────────────────────────────────

    def resolve_args(self, cmd: Command) -> list:
        kinds = COMMAND_SIGNATURES[cmd.name]
        out = []
        for kind, a in zip(kinds, cmd.args):
            kind = kind.rstrip("?")
            if kind == "ideal":
                out.append(self._ideal(a.name))
            elif kind in ("module", "poly", "family", "pvector"):
                out.append(self.env.values[a.name])
            elif kind == "matrix":
                if isinstance(a, NameArg):
                    out.append(self.env.values[a.name])
                else:
                    out.append(ChartMatrix(self.env.coefficients, tuple(tuple(x.value for x in r.items) for r in a.items)))
            elif kind == "int":
                out.append(int(a.value))
            elif kind == "scalar":
                out.append(a.value)
            elif kind == "window":
                out.append((int(a.items[0].value), int(a.items[1].value)))
            elif kind == "ints":
                out.append(tuple(int(x.value) for x in a.items))
            elif kind == "scalars":
                out.append([x.value for x in a.items])
            elif kind == "word":
                out.append(a.name)
        # an omitted trailing window falls back to the configured one
        if len(cmd.args) < len(kinds) and kinds[-1] == "window?":
            out.append(self.config.window)
        return out

    # ── Execution ───────────────────────────────────────────────

    def execute(self, cmd: Command) -> Report:
        echo = f"{cmd.name} {' '.join(format_arg(a) for a in cmd.args)}".strip()
        report = Report(echo, cmd.line, cmd.column, engine=self._engine(cmd))
        handler = getattr(self, f"_cmd_{cmd.name}")
        start = time.perf_counter()
        try:
            result, text = handler(*self.resolve_args(cmd))
            report.result = result
            report.text = text
        except RECOVERABLE as e:
            wrapped = CommandError(echo, cmd.line, cmd.column, e)
            logger.debug("command failed: %s", wrapped)
            report.error = str(wrapped)
            report.error_type = type(e).__name__
        report.elapsed = time.perf_counter() - start
        return report

    def _engine(self, cmd: Command) -> dict:
        meta = self.config.engine_metadata()
        ring = self.env.rings.get(cmd.ring) if cmd.ring else None
        if ring is not None:
            meta["ring"] = str(ring)
            meta["order"] = str(ring.order)
        return meta

    def run(self, script: Script) -> list[Report]:
        reports: list[Report] = []
        for stmt in script.statements:
            if isinstance(stmt, Command):
                batch = [self.execute(stmt)]
            elif isinstance(stmt, ParBlock):
                with ThreadPoolExecutor(max_workers=max(1, self.config.workers)) as pool:
                    batch = list(pool.map(self.execute, stmt.commands))
            else:
                try:
                    self.declare(stmt)
                except RECOVERABLE as e:
                    echo = stmt.format()
                    wrapped = CommandError(echo, stmt.line, stmt.column, e)
                    reports.append(
                        Report(echo, stmt.line, stmt.column, error=str(wrapped), error_type=type(e).__name__)
                    )
                    # later statements may depend on the failed declaration
                    return reports
                continue
            reports.extend(batch)
            if not self.config.continue_on_error and any(not r.ok for r in batch):
                break
        return reports

    # ── Gröbner engine ──────────────────────────────────────────

    def _cmd_gb(self, I):
        basis = [g.component(0).format() for g in groebner_basis(I).basis]
        return {"basis": basis}, ""

    def _cmd_syz(self, I):
        return {"syzygies": [s.format() for s in syzygies(I).generators]}, ""

    def _cmd_nf(self, f, I):
        r = groebner_basis(I).normal_form(FreeElement.from_components(f.ring, [f]))
        return {"normal_form": r.component(0).format(), "member": r.is_zero()}, ""

    def _cmd_intersect(self, I, J):
        return {"generators": _ideal_json(ideal_intersection(I, J))}, ""

    def _cmd_colon(self, I, J):
        return {"generators": [v.component(0).format() for v in colon(I, J).generators]}, ""

    def _cmd_saturate(self, I, J):
        return {"generators": [v.component(0).format() for v in saturation(I, J).generators]}, ""

    def _cmd_power(self, I, l):
        return {"generators": _ideal_json(ideal_power(I, l))}, ""

    def _cmd_polyop(self, op, f, g):
        if op == "scale":
            if not g.is_constant():
                raise PreconditionError("scale needs a constant second operand")
            g = g.coefficient(g.ring.zero_exponents)
        return {"result": poly_op(op, f, g).format()}, ""

    def _cmd_subst(self, f, var, value):
        return {"result": substitute(f, {var: value}).format()}, ""

    def _cmd_compare(self, f, g):
        if f.is_zero() or g.is_zero():
            raise PreconditionError("the zero polynomial has no leading monomial")
        return {"result": monomial_compare(f.ring.order, f.leading_monomial, g.leading_monomial)}, ""

    # ── Graded homology ─────────────────────────────────────────

    def _cmd_present(self, M):
        return _module_json(M), ""

    def _cmd_resolve(self, M, length=None):
        res = minimal_free_resolution(M, length)
        result = {
            "length": res.length,
            "ranks": [F.rank for F in res.modules],
            "twists": [list(F.twists) for F in res.modules],
            "minimal": res.is_minimal(),
        }
        return result, ""

    def _cmd_betti(self, M):
        table = betti_table(M)
        return {"betti": table.to_json(), "regularity": table.regularity(), "length": table.length}, table.format()

    def _cmd_pd(self, M):
        return {"pd": projective_dimension(M)}, ""

    def _cmd_hilbert_series(self, M):
        series = hilbert_series(M)
        return dict(series.to_json(), series=series.format()), series.format()

    def _cmd_hilbert_poly(self, M, step=1):
        phi = hilbert_polynomial(M, step)
        return {"binomial_coeffs": phi.to_json(), "polynomial": phi.format()}, ""

    def _cmd_krull(self, M):
        return {"dim": krull_dimension(M)}, ""

    def _cmd_dims(self, M, window):
        return graded_dims(M, window).to_json(), ""

    def _cmd_ext(self, p, M, N):
        return _module_json(ext_module(p, M, N)), ""

    def _cmd_tor(self, p, M, N):
        return _module_json(tor_module(p, M, N)), ""

    # ── Local cohomology ────────────────────────────────────────

    def _cmd_h0loc(self, I, M):
        H = h0_local(I, M)
        result = _module_json(H)
        result["killed_by_power"] = annihilating_power(H, I, self.config.power_cap, self.token)
        return result, ""

    def _cmd_localcoh(self, p, I, M, window):
        return local_cohomology_dims(p, I, M, window, self.config.power_cap, self.token).to_json(), ""

    def _cmd_depth(self, I, M):
        return depth(I, M, seed=self.config.seed, token=self.token).to_json(), ""

    def _cmd_cm_test(self, M):
        return cm_test(M, seed=self.config.seed, token=self.token).to_json(), ""

    def _cmd_mv_check(self, I, J, M, p_max, window):
        return mayer_vietoris_check(I, J, M, p_max, window, self.config.power_cap, self.token).to_json(), ""

    def _cmd_local_duality(self, M, p, window):
        lhs, rhs = local_duality_sides(M, p, window, self.config.power_cap, self.token)
        defect = lhs - rhs
        return {"lhs": lhs.to_json(), "rhs": rhs.to_json(), "defect": defect.to_json(), "ok": defect.is_zero()}, ""

    # ── Projective geometry ─────────────────────────────────────

    def _cmd_sheafcoh(self, M, p, l):
        return {"h": sheaf_cohomology_dim(M, p, l, self.config.power_cap, self.token)}, ""

    def _cmd_sheafcoh_table(self, M, window):
        return sheaf_cohomology_table(M, window, self.config.power_cap, self.token).to_json(), ""

    def _cmd_euler(self, M, l):
        chi = euler_characteristic(M, l, self.config.power_cap, self.token)
        return {"chi": chi, "hilbert_polynomial": hilbert_polynomial(M)(l)}, ""

    def _cmd_serre_defect(self, M, p, l):
        return {"defect": serre_duality_defect(M, p, l, self.config.power_cap, self.token)}, ""

    def _cmd_is_regular(self, M, m):
        return {"regular": is_m_regular(M, m, self.config.power_cap, self.token)}, ""

    def _cmd_regularity(self, M):
        return {"regularity": regularity(M, self.config.power_cap, self.token)}, ""

    def _cmd_reg_props(self, M, m, horizon):
        return regularity_properties_check(M, m, horizon, self.config.power_cap, self.token).to_json(), ""

    def _cmd_saturated_dims(self, M, window):
        return graded_dims(saturated_module(M, window, self.config.power_cap, self.token), window).to_json(), ""

    # ── Families and Grassmannians ──────────────────────────────

    def _cmd_flat_test(self, F, at=None):
        return flat_over_line(F, at).to_json(F.ring.field), ""

    def _cmd_fiber_profile(self, F, samples):
        return fiber_hilbert_profile(F, samples, seed=self.config.seed, workers=self.config.workers).to_json(F.ring.field), ""

    def _cmd_fiber_coh(self, F, p, l, samples):
        report = fiber_cohomology(F, p, l, samples, seed=self.config.seed, power_cap=self.config.power_cap,
            workers=self.config.workers, token=self.token,
        )
        return report.to_json(F.ring.field), ""

    def _cmd_hypersurface_phi(self, n, d):
        phi = hypersurface_hilbert_polynomial(n, d)
        return {"binomial_coeffs": phi.to_json(), "polynomial": phi.format()}, ""

    def _cmd_pluecker(self, A):
        return pluecker(A).to_json(), ""

    def _cmd_pluecker_check(self, v):
        K = v.field
        residuals = pluecker_relations_residual(v)
        return {"residuals": [K.to_json(r) for r in residuals], "on_grassmannian": all(r == 0 for r in residuals)}, ""

    def _cmd_chart(self, A, J):
        B = chart_transition(A, J)
        K = A.field
        return {
            "matrix": [[K.to_json(a) for a in row] for row in B.rows],
            "pluecker_agrees": pluecker(A).same_point(pluecker(B)),
        }, B.format()


def run(script: Script, config: Config) -> list[Report]:
    """Execute a parsed script; one Report per command."""
    return ScriptRunner(config).run(script)
