"""
Monomials, monomial orders, polynomial rings and sparse multivariate polynomials.

Monomials are exponent tuples. A MultiPoly is an immutable map from exponent
tuples to nonzero field elements; the sorted term list is derived from the
ring's monomial order on demand.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Optional, Union

from sympy.polys.monomials import monomial_div, monomial_divides, monomial_mul
from sympy.polys.orderings import ProductOrder, grevlex, lex

from errors import ArityError, RingMismatchError, UnknownVariableError
from fields import CoefficientField, Scalar

Exponents = tuple[int, ...]


class _NegativeInfinity:
    """Degree of the zero polynomial / dimension of the zero module."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("-inf")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        return self

    def __repr__(self):
        return "-inf"


NEG_INF = _NegativeInfinity()


# ── Monomial orders ────────────────────────────────────────────


class OrderKind(str, Enum):
    GREVLEX = "grevlex"
    LEX = "lex"
    POSITION_OVER_TERM = "pot"
    TERM_OVER_POSITION = "top"
    ELIMINATION = "elim"


_SYMPY_ORDERS = {OrderKind.GREVLEX: grevlex, OrderKind.LEX: lex}


@lru_cache(maxsize=None)
def _product_order(block: tuple[int, ...], base: OrderKind) -> ProductOrder:
    inner = _SYMPY_ORDERS[base]
    blockset = frozenset(block)
    return ProductOrder(
        (inner, lambda m: tuple(m[i] for i in block)),
        (inner, lambda m: tuple(v for i, v in enumerate(m) if i not in blockset)),
    )


@dataclass(frozen=True)
class MonomialOrder:
    """
    A term order on monomials, or a module order extending one.

    GREVLEX / LEX order monomials; POSITION_OVER_TERM / TERM_OVER_POSITION
    extend `base` to free-module terms (pos, monomial), with smaller positions
    ranking higher. ELIMINATION is the product order comparing the exponents
    of `block` first, then the remaining exponents, both with `base`.
    """

    kind: OrderKind = OrderKind.GREVLEX
    base: Optional["MonomialOrder"] = None
    block: tuple[int, ...] = ()

    @classmethod
    def grevlex(cls) -> "MonomialOrder":
        return cls(OrderKind.GREVLEX)

    @classmethod
    def lex(cls) -> "MonomialOrder":
        return cls(OrderKind.LEX)

    @classmethod
    def term_over_position(cls, base: Optional["MonomialOrder"] = None) -> "MonomialOrder":
        return cls(OrderKind.TERM_OVER_POSITION, base or cls.grevlex())

    @classmethod
    def position_over_term(cls, base: Optional["MonomialOrder"] = None) -> "MonomialOrder":
        return cls(OrderKind.POSITION_OVER_TERM, base or cls.grevlex())

    @classmethod
    def elimination(cls, block: Iterable[int], base: Optional["MonomialOrder"] = None) -> "MonomialOrder":
        base = base or cls.grevlex()
        if base.kind not in _SYMPY_ORDERS:
            raise ValueError("elimination orders need a grevlex or lex base")
        return cls(OrderKind.ELIMINATION, base, tuple(sorted(block)))

    @property
    def is_module_order(self) -> bool:
        return self.kind in (OrderKind.POSITION_OVER_TERM, OrderKind.TERM_OVER_POSITION)

    @property
    def ring_order(self) -> "MonomialOrder":
        """The underlying order on monomials."""
        return self.base.ring_order if self.is_module_order else self

    def key(self, exps: Exponents):
        """Sort key: larger key means larger monomial."""
        if self.kind in _SYMPY_ORDERS:
            return _SYMPY_ORDERS[self.kind](exps)
        if self.kind is OrderKind.ELIMINATION:
            return _product_order(self.block, self.base.kind)(exps)
        return self.base.key(exps)

    def module_key_fn(self) -> Callable[[int, Exponents], tuple]:
        """Key for free-module terms (pos, exps); ring orders act term-over-position."""
        if self.kind is OrderKind.POSITION_OVER_TERM:
            ring_key = self.base.key
            return lambda pos, exps: (-pos, ring_key(exps))
        ring_key = self.ring_order.key
        return lambda pos, exps: (ring_key(exps), -pos)

    def compare(self, a: Exponents, b: Exponents) -> int:
        if len(a) != len(b):
            raise ArityError(len(a), len(b))
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def __str__(self) -> str:
        if self.kind is OrderKind.ELIMINATION:
            return f"elim{list(self.block)}({self.base})"
        if self.is_module_order:
            return f"{self.kind.value}({self.base})"
        return self.kind.value


GREVLEX = MonomialOrder.grevlex()


def monomial_compare(order: MonomialOrder, a: Exponents, b: Exponents) -> int:
    """-1, 0 or 1 as a is smaller than, equal to or larger than b."""
    return order.compare(tuple(a), tuple(b))


# ── Rings ──────────────────────────────────────────────────────


@dataclass(frozen=True)
class PolyRing:
    """k[vars] with a monomial order and a non-negative weight per variable."""

    field: CoefficientField
    variables: tuple[str, ...]
    order: MonomialOrder = field(default_factory=MonomialOrder.grevlex)
    weights: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if not self.variables:
            raise ValueError("a polynomial ring needs at least one variable")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")
        weights = tuple(self.weights) or (1,) * len(self.variables)
        if len(weights) != len(self.variables):
            raise ValueError(
                f"{len(weights)} weights given for {len(self.variables)} variables"
            )
        if any(w < 0 for w in weights):
            raise ValueError("variable weights must be non-negative")
        object.__setattr__(self, "weights", weights)

    @property
    def ngens(self) -> int:
        return len(self.variables)

    @property
    def zero_exponents(self) -> Exponents:
        return (0,) * self.ngens

    @property
    def positively_graded(self) -> bool:
        return all(w > 0 for w in self.weights)

    @property
    def standard_graded(self) -> bool:
        return all(w == 1 for w in self.weights)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnknownVariableError(name, self.variables) from None

    def weighted_degree(self, exps: Exponents) -> int:
        return sum(w * e for w, e in zip(self.weights, exps))

    # ── Element constructors ────────────────────────────────────

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return self.constant(1)

    def constant(self, c) -> "MultiPoly":
        return MultiPoly(self, {self.zero_exponents: self.field(c)})

    def term(self, exps: Exponents, c=1) -> "MultiPoly":
        return MultiPoly(self, {tuple(exps): self.field(c)})

    def gen(self, name: str) -> "MultiPoly":
        i = self.index(name)
        exps = tuple(1 if j == i else 0 for j in range(self.ngens))
        return self.term(exps)

    def gens(self) -> list["MultiPoly"]:
        return [self.gen(v) for v in self.variables]

    def from_dict(self, terms: Mapping[Exponents, object]) -> "MultiPoly":
        return MultiPoly(self, {tuple(e): self.field(c) for e, c in terms.items()})

    # ── Derived rings ───────────────────────────────────────────

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return replace(self, order=order)

    def without(self, names: Iterable[str]) -> "PolyRing":
        """The ring on the remaining variables (same field, order kind, weights)."""
        drop = {self.index(n) for n in names}
        keep = [i for i in range(self.ngens) if i not in drop]
        order = self.order if self.order.kind in _SYMPY_ORDERS else GREVLEX
        return PolyRing(
            self.field,
            tuple(self.variables[i] for i in keep),
            order,
            tuple(self.weights[i] for i in keep),
        )

    def prepend(self, names: Iterable[str], weights: Iterable[int]) -> "PolyRing":
        """Ring with extra leading variables (auxiliary or family parameters)."""
        names = tuple(names)
        return PolyRing(
            self.field,
            names + self.variables,
            self.order,
            tuple(weights) + self.weights,
        )

    def __str__(self) -> str:
        text = f"{self.field.name}[{','.join(self.variables)}]"
        if not self.standard_graded:
            text += f" weights ({','.join(map(str, self.weights))})"
        return text


# ── Polynomials ────────────────────────────────────────────────


class MultiPoly:
    """Sparse polynomial: exponent tuple -> nonzero coefficient."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Optional[dict] = None):
        self.ring = ring
        self._terms = {e: c for e, c in (terms or {}).items() if c != 0}
        self._hash = None

    # ── Inspection ──────────────────────────────────────────────

    @property
    def terms(self) -> list[tuple[Exponents, Scalar]]:
        """Terms strictly descending in the ring order."""
        key = self.ring.order.ring_order.key
        return sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=True)

    def term_dict(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def coefficient(self, exps: Exponents) -> Scalar:
        return self._terms.get(tuple(exps), self.ring.field.zero())

    def leading_term(self) -> Optional[tuple[Exponents, Scalar]]:
        if not self._terms:
            return None
        key = self.ring.order.ring_order.key
        exps = max(self._terms, key=key)
        return exps, self._terms[exps]

    @property
    def leading_monomial(self) -> Optional[Exponents]:
        lt = self.leading_term()
        return lt[0] if lt else None

    @property
    def leading_coefficient(self) -> Scalar:
        lt = self.leading_term()
        return lt[1] if lt else self.ring.field.zero()

    def degree(self):
        """Weighted degree; NEG_INF for the zero polynomial."""
        if not self._terms:
            return NEG_INF
        return max(self.ring.weighted_degree(e) for e in self._terms)

    def is_homogeneous(self) -> bool:
        return len({self.ring.weighted_degree(e) for e in self._terms}) <= 1

    def variables_used(self) -> set[str]:
        return {
            self.ring.variables[i]
            for e in self._terms
            for i, a in enumerate(e)
            if a
        }

    # ── Arithmetic ──────────────────────────────────────────────

    def _check(self, other: "MultiPoly"):
        if other.ring != self.ring:
            raise RingMismatchError(self.ring, other.ring)

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return self.ring.constant(other)

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        K = self.ring.field
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = K.add(out[e], c) if e in out else c
        return MultiPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        K = self.ring.field
        return MultiPoly(self.ring, {e: K.neg(c) for e, c in self._terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        K = self.ring.field
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = monomial_mul(e1, e2)
                c = K.mul(c1, c2)
                out[e] = K.add(out[e], c) if e in out else c
        return MultiPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "MultiPoly":
        K = self.ring.field
        c = K(c)
        return MultiPoly(self.ring, {e: K.mul(a, c) for e, a in self._terms.items()})

    def mul_term(self, exps: Exponents, c) -> "MultiPoly":
        K = self.ring.field
        return MultiPoly(
            self.ring,
            {monomial_mul(e, exps): K.mul(a, c) for e, a in self._terms.items()},
        )

    def monic(self) -> "MultiPoly":
        if not self._terms:
            return self
        return self.scale(self.ring.field.inv(self.leading_coefficient))

    def divides_term(self, exps: Exponents) -> bool:
        lm = self.leading_monomial
        return lm is not None and monomial_divides(lm, exps)

    def exact_quotient_monomial(self, exps: Exponents) -> Optional[Exponents]:
        return monomial_div(exps, self.leading_monomial)

    # ── Substitution ────────────────────────────────────────────

    def substitute(
        self,
        assignments: Mapping[str, object],
        target: Optional[PolyRing] = None,
    ) -> "MultiPoly":
        """
        Evaluate the assigned variables.

        Args:
            assignments: variable name -> field element.
            target: ring for the result; defaults to this ring (assigned
                variables then simply no longer occur). Every unassigned
                variable that occurs must exist in the target ring.
        """
        ring = self.ring
        K = ring.field
        values = {ring.index(name): K(v) for name, v in assignments.items()}
        target = target or ring
        if target.field != K:
            raise RingMismatchError(ring, target)
        slot = {}
        for i, name in enumerate(ring.variables):
            if i not in values and name in target.variables:
                slot[i] = target.index(name)
        out: dict = {}
        for e, c in self._terms.items():
            new = [0] * target.ngens
            for i, a in enumerate(e):
                if not a:
                    continue
                if i in values:
                    c = K.mul(c, K.power(values[i], a))
                elif i in slot:
                    new[slot[i]] += a
                else:
                    raise UnknownVariableError(ring.variables[i], target.variables)
            if c == 0:
                continue
            key = tuple(new)
            out[key] = K.add(out[key], c) if key in out else c
        return MultiPoly(target, out)

    # ── Comparison & display ────────────────────────────────────

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, int) or hasattr(other, "denominator"):
            return self._terms == self.ring.constant(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def format(self) -> str:
        """Script-syntax rendering, e.g. 'x^2*y - 3/2*z + 1'."""
        if not self._terms:
            return "0"
        K = self.ring.field
        names = self.ring.variables
        pieces = []
        for exps, c in self.terms:
            if K.is_prime_field:
                negative = False
                mag = c
            else:
                negative = c < 0
                mag = -c if negative else c
            mono = "*".join(
                names[i] if a == 1 else f"{names[i]}^{a}"
                for i, a in enumerate(exps)
                if a
            )
            if not mono:
                body = K.format(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{K.format(mag)}*{mono}"
            if not pieces:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return self.format()


def poly_op(op: str, f: MultiPoly, g: Union[MultiPoly, Scalar]) -> MultiPoly:
    """Dispatch for add / sub / mul / scale; operands must share a ring."""
    if isinstance(g, MultiPoly) and g.ring != f.ring:
        raise RingMismatchError(f.ring, g.ring)
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "scale":
        return f.scale(g)
    raise ValueError(f"unknown polynomial operation '{op}'")


def substitute(f: MultiPoly, assignments: Mapping[str, object], target: Optional[PolyRing] = None) -> MultiPoly:
    return f.substitute(assignments, target)
