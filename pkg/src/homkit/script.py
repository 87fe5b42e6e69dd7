"""
The homkit script language.

A script is a list of ';'-terminated statements: declarations (ring, use,
ideal, poly, module, family, matrix, pvector), commands in either
`cmd a b` or `cmd(a, b)` form, and `par { ... }` blocks of independent
commands. Parsing also resolves names, so unknown or duplicate names and
ring mismatches are reported with their source position.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from errors import ScriptError
from polynomials import MultiPoly, PolyRing

SYMBOLS = set("=;,()[]{}+-*/^")
KEYWORDS = {"ring", "use", "ideal", "poly", "module", "family", "matrix", "pvector", "par"}
NOISE_WORDS = {"in", "at"}
MAXIDEAL = "maxideal"
FAMILY_PARAMETER = "t"

# Argument kinds per command; a trailing '?' marks an optional argument.
COMMAND_SIGNATURES: dict[str, tuple[str, ...]] = {
    "gb": ("ideal",),
    "syz": ("ideal",),
    "nf": ("poly", "ideal"),
    "intersect": ("ideal", "ideal"),
    "colon": ("ideal", "ideal"),
    "saturate": ("ideal", "ideal"),
    "power": ("ideal", "int"),
    "polyop": ("word", "poly", "poly"),
    "subst": ("poly", "word", "scalar"),
    "compare": ("poly", "poly"),
    "present": ("module",),
    "resolve": ("module", "int?"),
    "betti": ("module",),
    "pd": ("module",),
    "hilbert_series": ("module",),
    "hilbert_poly": ("module", "int?"),
    "krull": ("module",),
    "dims": ("module", "window?"),
    "ext": ("int", "module", "module"),
    "tor": ("int", "module", "module"),
    "h0loc": ("ideal", "module"),
    "localcoh": ("int", "ideal", "module", "window?"),
    "depth": ("ideal", "module"),
    "cm_test": ("module",),
    "mv_check": ("ideal", "ideal", "module", "int", "window?"),
    "local_duality": ("module", "int", "window?"),
    "sheafcoh": ("module", "int", "int"),
    "sheafcoh_table": ("module", "window?"),
    "euler": ("module", "int"),
    "serre_defect": ("module", "int", "int"),
    "is_regular": ("module", "int"),
    "regularity": ("module",),
    "reg_props": ("module", "int", "int"),
    "saturated_dims": ("module", "window?"),
    "flat_test": ("family", "scalar?"),
    "fiber_profile": ("family", "scalars"),
    "fiber_coh": ("family", "int", "int", "scalars"),
    "hypersurface_phi": ("int", "int"),
    "pluecker": ("matrix",),
    "pluecker_check": ("pvector",),
    "chart": ("matrix", "ints"),
}

RING_BOUND_KINDS = {"ideal", "module", "poly"}


# ── Tokens ─────────────────────────────────────────────────────


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, NUMBER, SYMBOL, EOF
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch.isspace():
            col, i = col + 1, i + 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("NAME", text[i:j], line, start_col))
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("NUMBER", text[i:j], line, start_col))
        elif ch in SYMBOLS:
            j = i + 1
            tokens.append(Token("SYMBOL", ch, line, start_col))
        else:
            raise ScriptError(f"unexpected character {ch!r}", line, start_col)
        col += j - i
        i = j
    tokens.append(Token("EOF", "", line, col))
    return tokens


# ── Polynomial expressions ─────────────────────────────────────


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # + - *
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


Expr = Union[Num, Var, Neg, BinOp, Pow]

_PRECEDENCE = {"+": 1, "-": 1, "*": 2}
_NEG_PRECEDENCE = 3
_ATOM_PRECEDENCE = 5


def format_scalar(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _precedence(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PRECEDENCE[e.op]
    if isinstance(e, Neg):
        return _NEG_PRECEDENCE
    if isinstance(e, Pow):
        return 4
    if isinstance(e, Num) and e.value.denominator != 1:
        # '3/2' must not be split by a surrounding '^'
        return 2
    return _ATOM_PRECEDENCE


def format_expr(e: Expr) -> str:
    """Pretty-print with the minimal parentheses that reparse to the same tree."""
    if isinstance(e, Num):
        return format_scalar(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        inner = format_expr(e.operand)
        if _precedence(e.operand) < _NEG_PRECEDENCE:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(e, Pow):
        base = format_expr(e.base)
        if _precedence(e.base) <= 4:
            base = f"({base})"
        return f"{base}^{e.exponent}"
    prec = _PRECEDENCE[e.op]
    left = format_expr(e.left)
    if _precedence(e.left) < prec:
        left = f"({left})"
    right = format_expr(e.right)
    if _precedence(e.right) <= prec:
        right = f"({right})"
    sep = "*" if e.op == "*" else f" {e.op} "
    return f"{left}{sep}{right}"


def evaluate(e: Expr, ring: PolyRing) -> MultiPoly:
    if isinstance(e, Num):
        return ring.constant(e.value)
    if isinstance(e, Var):
        return ring.gen(e.name)
    if isinstance(e, Neg):
        return -evaluate(e.operand, ring)
    if isinstance(e, Pow):
        return evaluate(e.base, ring) ** e.exponent
    left, right = evaluate(e.left, ring), evaluate(e.right, ring)
    if e.op == "+":
        return left + right
    if e.op == "-":
        return left - right
    return left * right


# ── Statements ─────────────────────────────────────────────────


def _pos():
    return field(default=0, compare=False)


def _exprs(items) -> str:
    return ", ".join(format_expr(e) for e in items)


def _ints(items) -> str:
    return "[" + ", ".join(str(i) for i in items) + "]"


def _matrix(rows) -> str:
    return "[" + ", ".join("[" + _exprs(r) + "]" for r in rows) + "]"


@dataclass(frozen=True)
class RingDecl:
    name: str
    characteristic: int
    variables: tuple[str, ...]
    weights: Optional[tuple[int, ...]] = None
    order: Optional[str] = None
    line: int = _pos()
    column: int = _pos()

    def format(self) -> str:
        field_name = "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"
        text = f"ring {self.name} = {field_name}[{', '.join(self.variables)}]"
        if self.weights is not None:
            text += f" weights ({', '.join(map(str, self.weights))})"
        if self.order is not None:
            text += f" order {self.order}"
        return text + ";"


@dataclass(frozen=True)
class UseDecl:
    name: str
    line: int = _pos()
    column: int = _pos()

    def format(self) -> str:
        return f"use {self.name};"


@dataclass(frozen=True)
class IdealDecl:
    name: str
    polys: tuple[Expr, ...]
    line: int = _pos()
    column: int = _pos()

    def format(self) -> str:
        return f"ideal {self.name} = ({_exprs(self.polys)});"


@dataclass(frozen=True)
class PolyDecl:
    name: str
    expr: Expr
    line: int = _pos()
    column: int = _pos()

    def format(self) -> str:
        return f"poly {self.name} = {format_expr(self.expr)};"


@dataclass(frozen=True)
class CokerSpec:
    targets: tuple[int, ...]
    sources: Optional[tuple[int, ...]]
    matrix: tuple[tuple[Expr, ...], ...]

    def format(self) -> str:
        parts = [f"targets={_ints(self.targets)}"]
        if self.sources is not None:
            parts.append(f"sources={_ints(self.sources)}")
        parts.append(f"matrix={_matrix(self.matrix)}")
        return f"coker({', '.join(parts)})"


@dataclass(frozen=True)
class ModuleDecl:
    """kind: coker, quotient, ideal or free."""

    name: str
    kind: str
    ideal: Optional[str] = None
    twists: tuple[int, ...] = ()
    coker: Optional[CokerSpec] = None
    line: int = _pos()
    column: int = _pos()

    def format(self) -> str:
        if self.kind == "coker":
            body = self.coker.format()
        elif self.kind == "free":
            body = f"free({_ints(self.twists)})"
        else:
            body = f"{self.kind}({self.ideal})"
        return f"module {self.name} = {body};"


@dataclass(frozen=True)
class FamilyDecl:
    name: str
    polys: tuple[Expr, ...] = ()
    coker: Optional[CokerSpec] = None
    line: int = _pos()
    column: int = _pos()

    def format(self) -> str:
        body = self.coker.format() if self.coker else f"({_exprs(self.polys)})"
        return f"family {self.name} = {body};"


@dataclass(frozen=True)
class MatrixDecl:
    name: str
    rows: tuple[tuple[Fraction, ...], ...]
    line: int = _pos()
    column: int = _pos()

    def format(self) -> str:
        rows = ", ".join("[" + ", ".join(format_scalar(a) for a in r) + "]" for r in self.rows)
        return f"matrix {self.name} = [{rows}];"


@dataclass(frozen=True)
class PVectorDecl:
    name: str
    d: int
    n: int
    coords: tuple[Fraction, ...]
    line: int = _pos()
    column: int = _pos()

    def format(self) -> str:
        coords = ", ".join(format_scalar(a) for a in self.coords)
        return f"pvector {self.name} = gr({self.d}, {self.n}) [{coords}];"


@dataclass(frozen=True)
class NameArg:
    name: str


@dataclass(frozen=True)
class NumArg:
    value: Fraction


@dataclass(frozen=True)
class ListArg:
    items: tuple
    bracket: str = "["


Arg = Union[NameArg, NumArg, ListArg]


def format_arg(a: Arg) -> str:
    if isinstance(a, NameArg):
        return a.name
    if isinstance(a, NumArg):
        return format_scalar(a.value)
    close = "]" if a.bracket == "[" else ")"
    return a.bracket + ", ".join(format_arg(x) for x in a.items) + close


@dataclass(frozen=True)
class Command:
    name: str
    args: tuple[Arg, ...]
    ring: Optional[str] = field(default=None, compare=False)
    line: int = _pos()
    column: int = _pos()

    def format(self) -> str:
        return f"{self.name}({', '.join(format_arg(a) for a in self.args)});"


@dataclass(frozen=True)
class ParBlock:
    commands: tuple[Command, ...]
    line: int = _pos()
    column: int = _pos()

    def format(self) -> str:
        body = "".join(f"  {c.format()}\n" for c in self.commands)
        return "par {\n" + body + "}"


Statement = Union[RingDecl, UseDecl, IdealDecl, PolyDecl, ModuleDecl, FamilyDecl, MatrixDecl, PVectorDecl, Command, ParBlock]


@dataclass(frozen=True)
class Binding:
    kind: str
    ring: Optional[str]


@dataclass(frozen=True)
class Script:
    statements: tuple[Statement, ...]
    bindings: dict = field(default_factory=dict, compare=False, hash=False)

    def format(self) -> str:
        return "".join(s.format() + "\n" for s in self.statements)

    def commands(self) -> list[Command]:
        out = []
        for s in self.statements:
            if isinstance(s, Command):
                out.append(s)
            elif isinstance(s, ParBlock):
                out.extend(s.commands)
        return out


# ── Parser ─────────────────────────────────────────────────────


@dataclass
class _RingInfo:
    variables: tuple[str, ...]


class Parser:
    """Recursive descent over the token list, resolving names as it goes."""

    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.bindings: dict[str, Binding] = {}
        self.rings: dict[str, _RingInfo] = {}
        self.active_ring: Optional[str] = None

    # ── Token helpers ───────────────────────────────────────────

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind in ("SYMBOL", "NAME") and self.tok.text == text

    def error(self, message: str, token: Optional[Token] = None, expected=None) -> ScriptError:
        token = token or self.tok
        return ScriptError(message, token.line, token.column, expected)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"unexpected {found!r}", expected=[text])
        return self.advance()

    def expect_name(self, what: str = "name") -> Token:
        if self.tok.kind != "NAME":
            found = self.tok.text or "end of input"
            raise self.error(f"unexpected {found!r}", expected=[what])
        return self.advance()

    def expect_int(self) -> int:
        negative = False
        if self.at("-"):
            self.advance()
            negative = True
        if self.tok.kind != "NUMBER":
            raise self.error(f"unexpected {self.tok.text or 'end of input'!r}", expected=["integer"])
        value = int(self.advance().text)
        return -value if negative else value

    def scalar(self) -> Fraction:
        """'-'? NUMBER ('/' NUMBER)?"""
        start = self.tok
        negative = False
        if self.at("-"):
            self.advance()
            negative = True
        if self.tok.kind != "NUMBER":
            raise self.error(f"unexpected {self.tok.text or 'end of input'!r}", expected=["number"])
        num = int(self.advance().text)
        den = 1
        if self.at("/"):
            self.advance()
            if self.tok.kind != "NUMBER":
                raise self.error("expected a denominator", expected=["integer"])
            den = int(self.advance().text)
            if den == 0:
                raise self.error("zero denominator", start)
        value = Fraction(num, den)
        return -value if negative else value

    def int_list(self) -> tuple[int, ...]:
        self.expect("[")
        items = []
        if not self.at("]"):
            items.append(self.expect_int())
            while self.at(","):
                self.advance()
                items.append(self.expect_int())
        self.expect("]")
        return tuple(items)

    # ── Names ───────────────────────────────────────────────────

    def declare(self, token: Token, kind: str, ring: Optional[str]):
        name = token.text
        if name in KEYWORDS or name in NOISE_WORDS or name == MAXIDEAL:
            raise self.error(f"{name!r} is reserved", token)
        if name in self.bindings:
            raise self.error(f"duplicate name {name}", token)
        self.bindings[name] = Binding(kind, ring)

    def require_ring(self, token: Token) -> str:
        if self.active_ring is None:
            raise self.error("no active ring (declare one with 'ring')", token)
        return self.active_ring

    # ── Expressions ─────────────────────────────────────────────

    def expr(self, variables: tuple[str, ...]) -> Expr:
        left = self.term(variables)
        while self.at("+") or self.at("-"):
            op = self.advance().text
            left = BinOp(op, left, self.term(variables))
        return left

    def term(self, variables) -> Expr:
        left = self.unary(variables)
        while self.at("*"):
            self.advance()
            left = BinOp("*", left, self.unary(variables))
        return left

    def unary(self, variables) -> Expr:
        if self.at("-"):
            self.advance()
            return Neg(self.unary(variables))
        return self.power(variables)

    def power(self, variables) -> Expr:
        base = self.atom(variables)
        if self.at("^"):
            self.advance()
            if self.tok.kind != "NUMBER":
                raise self.error("exponents must be non-negative integers", expected=["integer"])
            return Pow(base, int(self.advance().text))
        return base

    def atom(self, variables) -> Expr:
        t = self.tok
        if t.kind == "NUMBER":
            return Num(self.scalar())
        if t.kind == "NAME":
            if t.text not in variables:
                raise self.error(f"unknown variable {t.text}", t)
            self.advance()
            return Var(t.text)
        if self.at("("):
            self.advance()
            e = self.expr(variables)
            self.expect(")")
            return e
        found = t.text or "end of input"
        raise self.error(f"unexpected {found!r}", expected=["number", "variable", "("])

    def expr_list(self, variables, close: str) -> tuple[Expr, ...]:
        items = []
        if not self.at(close):
            items.append(self.expr(variables))
            while self.at(","):
                self.advance()
                items.append(self.expr(variables))
        return tuple(items)

    def matrix_rows(self, variables) -> tuple[tuple[Expr, ...], ...]:
        self.expect("[")
        rows = []
        while self.at("["):
            self.advance()
            rows.append(self.expr_list(variables, "]"))
            self.expect("]")
            if self.at(","):
                self.advance()
        self.expect("]")
        return tuple(rows)

    # ── Statements ──────────────────────────────────────────────

    def parse(self) -> Script:
        statements = []
        while self.tok.kind != "EOF":
            statements.append(self.statement())
        return Script(tuple(statements), dict(self.bindings))

    def statement(self) -> Statement:
        t = self.tok
        if t.kind != "NAME":
            raise self.error(f"unexpected {t.text!r}", expected=["declaration", "command"])
        handler = {
            "ring": self.ring_decl,
            "use": self.use_decl,
            "ideal": self.ideal_decl,
            "poly": self.poly_decl,
            "module": self.module_decl,
            "family": self.family_decl,
            "matrix": self.matrix_decl,
            "pvector": self.pvector_decl,
            "par": self.par_block,
        }.get(t.text)
        if handler:
            return handler()
        return self.command()

    def ring_decl(self) -> RingDecl:
        start = self.advance()
        name = self.expect_name()
        self.expect("=")
        field_tok = self.expect_name("QQ or GF(p)")
        if field_tok.text == "QQ":
            characteristic = 0
        elif field_tok.text == "GF":
            self.expect("(")
            characteristic = self.expect_int()
            self.expect(")")
        else:
            raise self.error(f"unknown field {field_tok.text}", field_tok, ["QQ", "GF"])
        self.expect("[")
        variables = [self.expect_name("variable").text]
        while self.at(","):
            self.advance()
            variables.append(self.expect_name("variable").text)
        self.expect("]")
        if len(set(variables)) != len(variables):
            raise self.error("duplicate variable names", field_tok)
        weights = order = None
        if self.at("weights"):
            self.advance()
            self.expect("(")
            weights = [self.expect_int()]
            while self.at(","):
                self.advance()
                weights.append(self.expect_int())
            self.expect(")")
            if len(weights) != len(variables):
                raise self.error(f"{len(weights)} weights for {len(variables)} variables", field_tok)
            weights = tuple(weights)
        if self.at("order"):
            self.advance()
            order_tok = self.expect_name("grevlex or lex")
            if order_tok.text not in ("grevlex", "lex"):
                raise self.error(f"unknown order {order_tok.text}", order_tok, ["grevlex", "lex"])
            order = order_tok.text
        self.expect(";")
        self.declare(name, "ring", None)
        self.rings[name.text] = _RingInfo(tuple(variables))
        self.active_ring = name.text
        return RingDecl(name.text, characteristic, tuple(variables), weights, order, start.line, start.column)

    def use_decl(self) -> UseDecl:
        start = self.advance()
        name = self.expect_name("ring name")
        if name.text not in self.rings:
            raise self.error(f"unknown ring {name.text}", name)
        self.expect(";")
        self.active_ring = name.text
        return UseDecl(name.text, start.line, start.column)

    def _variables(self, start: Token) -> tuple[str, ...]:
        return self.rings[self.require_ring(start)].variables

    def ideal_decl(self) -> IdealDecl:
        start = self.advance()
        name = self.expect_name()
        variables = self._variables(start)
        self.expect("=")
        self.expect("(")
        polys = self.expr_list(variables, ")")
        self.expect(")")
        self.expect(";")
        self.declare(name, "ideal", self.active_ring)
        return IdealDecl(name.text, polys, start.line, start.column)

    def poly_decl(self) -> PolyDecl:
        start = self.advance()
        name = self.expect_name()
        variables = self._variables(start)
        self.expect("=")
        e = self.expr(variables)
        self.expect(";")
        self.declare(name, "poly", self.active_ring)
        return PolyDecl(name.text, e, start.line, start.column)

    def coker_spec(self, variables) -> CokerSpec:
        self.expect("coker")
        self.expect("(")
        targets = sources = matrix = None
        while not self.at(")"):
            key = self.expect_name("targets, sources or matrix")
            self.expect("=")
            if key.text == "targets":
                targets = self.int_list()
            elif key.text == "sources":
                sources = self.int_list()
            elif key.text == "matrix":
                matrix = self.matrix_rows(variables)
            else:
                raise self.error(f"unknown coker field {key.text}", key, ["targets", "sources", "matrix"])
            if self.at(","):
                self.advance()
        close = self.expect(")")
        if targets is None or matrix is None:
            raise self.error("coker needs targets and matrix", close)
        if matrix and any(len(row) != len(matrix[0]) for row in matrix):
            raise self.error("matrix rows have different lengths", close)
        if matrix and len(matrix) != len(targets):
            raise self.error(f"matrix has {len(matrix)} rows for {len(targets)} targets", close)
        if sources is not None and matrix and len(sources) != len(matrix[0]):
            raise self.error(f"{len(sources)} sources for {len(matrix[0])} columns", close)
        return CokerSpec(targets, sources, matrix)

    def _ideal_name(self) -> str:
        t = self.expect_name("ideal name")
        if t.text == MAXIDEAL:
            self.require_ring(t)
            return t.text
        self._lookup(t, "ideal")
        return t.text

    def module_decl(self) -> ModuleDecl:
        start = self.advance()
        name = self.expect_name()
        variables = self._variables(start)
        self.expect("=")
        kind_tok = self.tok
        kind = kind_tok.text
        if kind == "coker":
            decl = ModuleDecl(name.text, "coker", coker=self.coker_spec(variables))
        elif kind in ("quotient", "ideal"):
            self.advance()
            self.expect("(")
            ideal = self._ideal_name()
            self.expect(")")
            decl = ModuleDecl(name.text, kind, ideal=ideal)
        elif kind == "free":
            self.advance()
            self.expect("(")
            twists = self.int_list()
            self.expect(")")
            decl = ModuleDecl(name.text, "free", twists=twists)
        else:
            raise self.error(f"unexpected {kind!r}", kind_tok, ["coker", "quotient", "ideal", "free"])
        self.expect(";")
        self.declare(name, "module", self.active_ring)
        return ModuleDecl(decl.name, decl.kind, decl.ideal, decl.twists, decl.coker, start.line, start.column)

    def family_decl(self) -> FamilyDecl:
        start = self.advance()
        name = self.expect_name()
        variables = self._variables(start)
        if FAMILY_PARAMETER in variables:
            raise self.error(f"the ring already has a variable named {FAMILY_PARAMETER}", start)
        variables = (FAMILY_PARAMETER,) + variables
        self.expect("=")
        if self.at("coker"):
            decl = FamilyDecl(name.text, coker=self.coker_spec(variables), line=start.line, column=start.column)
        else:
            self.expect("(")
            polys = self.expr_list(variables, ")")
            self.expect(")")
            decl = FamilyDecl(name.text, polys, line=start.line, column=start.column)
        self.expect(";")
        self.declare(name, "family", self.active_ring)
        return decl

    def scalar_matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        self.expect("[")
        rows = []
        while self.at("["):
            self.advance()
            row = [self.scalar()]
            while self.at(","):
                self.advance()
                row.append(self.scalar())
            self.expect("]")
            rows.append(tuple(row))
            if self.at(","):
                self.advance()
        close = self.expect("]")
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise self.error("matrix rows must be nonempty and of equal length", close)
        return tuple(rows)

    def matrix_decl(self) -> MatrixDecl:
        start = self.advance()
        name = self.expect_name()
        self.expect("=")
        rows = self.scalar_matrix()
        self.expect(";")
        self.declare(name, "matrix", None)
        return MatrixDecl(name.text, rows, start.line, start.column)

    def pvector_decl(self) -> PVectorDecl:
        start = self.advance()
        name = self.expect_name()
        self.expect("=")
        self.expect("gr")
        self.expect("(")
        d = self.expect_int()
        self.expect(",")
        n = self.expect_int()
        self.expect(")")
        self.expect("[")
        coords = [self.scalar()]
        while self.at(","):
            self.advance()
            coords.append(self.scalar())
        self.expect("]")
        self.expect(";")
        self.declare(name, "pvector", None)
        return PVectorDecl(name.text, d, n, tuple(coords), start.line, start.column)

    def par_block(self) -> ParBlock:
        start = self.advance()
        self.expect("{")
        commands = []
        while not self.at("}"):
            if self.tok.kind == "EOF":
                raise self.error("unterminated par block", expected=["}"])
            if self.tok.kind == "NAME" and self.tok.text in KEYWORDS:
                raise self.error("par blocks may only contain commands", self.tok)
            commands.append(self.command())
        self.expect("}")
        if self.at(";"):
            self.advance()
        return ParBlock(tuple(commands), start.line, start.column)

    # ── Commands ────────────────────────────────────────────────

    def arg(self) -> Arg:
        while self.tok.kind == "NAME" and self.tok.text in NOISE_WORDS:
            self.advance()
        t = self.tok
        if t.kind == "NAME":
            self.advance()
            return NameArg(t.text)
        if t.kind == "NUMBER" or self.at("-"):
            return NumArg(self.scalar())
        if self.at("[") or self.at("("):
            bracket = self.advance().text
            close = "]" if bracket == "[" else ")"
            items = []
            if not self.at(close):
                items.append(self.arg())
                while self.at(","):
                    self.advance()
                    items.append(self.arg())
            self.expect(close)
            return ListArg(tuple(items), bracket)
        found = t.text or "end of input"
        raise self.error(f"unexpected {found!r}", expected=["name", "number", "[", "("])

    def command(self) -> Command:
        name = self.expect_name("command")
        if name.text not in COMMAND_SIGNATURES:
            raise self.error(f"unknown command {name.text}", name, sorted(COMMAND_SIGNATURES))
        args: list[Arg] = []
        starts: list[Token] = []

        def take():
            starts.append(self.tok)
            args.append(self.arg())

        if self.at("("):
            self.advance()
            if not self.at(")"):
                take()
                while self.at(","):
                    self.advance()
                    take()
            self.expect(")")
        else:
            while not self.at(";") and self.tok.kind != "EOF":
                take()
        self.expect(";")
        ring = self.check_signature(name, args, starts)
        return Command(name.text, tuple(args), ring, name.line, name.column)

    def _lookup(self, token: Token, kind: str) -> Binding:
        binding = self.bindings.get(token.text)
        if binding is None:
            raise self.error(f"unknown name {token.text}", token)
        if binding.kind != kind:
            raise self.error(f"{token.text} is a {binding.kind}, expected a {kind}", token)
        return binding

    def check_signature(self, name: Token, args: list[Arg], starts: list[Token]) -> Optional[str]:
        """Validate argument kinds; returns the common ring of ring-bound arguments."""
        kinds = COMMAND_SIGNATURES[name.text]
        required = sum(1 for k in kinds if not k.endswith("?"))
        if not required <= len(args) <= len(kinds):
            raise self.error(
                f"{name.text} takes {required}" + (f" to {len(kinds)}" if len(kinds) != required else "")
                + f" arguments, got {len(args)}",
                name,
            )
        rings = []
        for kind, a, where in zip(kinds, args, starts):
            kind = kind.rstrip("?")
            if kind in ("module", "ideal", "poly", "family", "pvector"):
                if not isinstance(a, NameArg):
                    raise self.error(f"{name.text} expects a {kind} name", name)
                if kind == "ideal" and a.name == MAXIDEAL:
                    rings.append(self.require_ring(name))
                    continue
                binding = self._lookup(Token("NAME", a.name, where.line, where.column), kind)
                if kind in RING_BOUND_KINDS:
                    rings.append(binding.ring)
            elif kind == "matrix":
                if isinstance(a, NameArg):
                    self._lookup(Token("NAME", a.name, where.line, where.column), "matrix")
                elif not (
                    isinstance(a, ListArg)
                    and a.items
                    and all(isinstance(r, ListArg) and all(isinstance(x, NumArg) for x in r.items) for r in a.items)
                ):
                    raise self.error(f"{name.text} expects a matrix", name)
            elif kind == "int":
                if not (isinstance(a, NumArg) and a.value.denominator == 1):
                    raise self.error(f"{name.text} expects an integer", name)
            elif kind == "scalar":
                if not isinstance(a, NumArg):
                    raise self.error(f"{name.text} expects a number", name)
            elif kind == "window":
                if not (
                    isinstance(a, ListArg)
                    and len(a.items) == 2
                    and all(isinstance(x, NumArg) and x.value.denominator == 1 for x in a.items)
                    and a.items[0].value <= a.items[1].value
                ):
                    raise self.error(f"{name.text} expects a window [lo, hi] with lo <= hi", name)
            elif kind == "ints":
                if not (isinstance(a, ListArg) and all(isinstance(x, NumArg) and x.value.denominator == 1 for x in a.items)):
                    raise self.error(f"{name.text} expects a list of integers", name)
            elif kind == "scalars":
                if not (isinstance(a, ListArg) and all(isinstance(x, NumArg) for x in a.items)):
                    raise self.error(f"{name.text} expects a list of numbers", name)
            elif kind == "word":
                if not isinstance(a, NameArg):
                    raise self.error(f"{name.text} expects a word", name)
        distinct = sorted(set(rings))
        if len(distinct) > 1:
            raise self.error(f"ring mismatch: {' vs '.join(distinct)}", name)
        return distinct[0] if distinct else None


def parse_script(text: str) -> Script:
    """Parse and name-check a script; raises ScriptError with a source position."""
    return Parser(text).parse()
