"""The declarative input language: rings, modules, ideals, semidualizing
bindings, settings, and check invocations.

One-pass recursive-descent parser (the grammar is LL(1) given one token of
lookahead; polynomial expressions use explicit precedence).  Forward
references are rejected at parse time, so a parsed script always binds in
declaration order.  ``pretty_print`` emits a canonical form whose re-parse is
equal to the original script.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError
from .fields import field_from_key
from .rings import GradedRing, Poly, PolyRing

KEYWORDS = {
    "ring", "module", "ideal", "semidualizing", "check", "set",
    "coker", "gens", "ideal_quotient", "canonical", "free", "syzygy",
    "transpose", "lambda", "twist", "QQ", "GF",
}

SETTING_KEYS = {"bound", "seed", "retries", "window"}


@dataclass(frozen=True)
class Token:
    kind: str  # NAME INT SYM EOF
    text: str
    line: int
    col: int


def tokenize(text: str):
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("NAME", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("INT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in "=;,[](){}/^*+-":
            tokens.append(Token("SYM", ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("EOF", "", line, col))
    return tokens


# -- statements ---------------------------------------------------------------

@dataclass(frozen=True)
class RingDecl:
    name: str
    field_key: str
    variables: tuple
    relations: tuple  # Poly over the ambient ring


@dataclass(frozen=True)
class ModuleDecl:
    name: str
    expr: tuple  # ("coker", ring, rows, gens) | ("ideal_quotient", ring, polys)
    #              | ("canonical", ring) | ("free", ring, twists)
    #              | ("syzygy"|"transpose"|"lambda", module) | ("twist", module, int)


@dataclass(frozen=True)
class IdealDecl:
    name: str
    ring: str
    gens: tuple  # Poly


@dataclass(frozen=True)
class SemidualDecl:
    name: str
    expr: tuple  # ("canonical", ring) | ("name", module_or_ring_name)


@dataclass(frozen=True)
class SetStmt:
    key: str
    value: object  # int or (lo, hi)


@dataclass(frozen=True)
class CheckStmt:
    check_id: str
    args: tuple  # names and ints


@dataclass
class SessionScript:
    statements: list = field(default_factory=list)

    def __eq__(self, other):
        return isinstance(other, SessionScript) and self.statements == other.statements


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        # binding environment for forward-reference checks and poly parsing
        self.rings: dict[str, PolyRing] = {}
        self.kinds: dict[str, str] = {}

    # -- token plumbing ------------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.col)

    def expect(self, kind, text=None) -> Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            got = tok.text or tok.kind
            self.fail(f"expected {want!r}, found {got!r}")
        return self.next()

    def expect_name(self) -> Token:
        tok = self.peek()
        if tok.kind != "NAME":
            self.fail(f"expected a name, found {tok.text or tok.kind!r}")
        return self.next()

    def accept(self, kind, text=None) -> bool:
        tok = self.peek()
        if tok.kind == kind and (text is None or tok.text == text):
            self.next()
            return True
        return False

    # -- toplevel --------------------------------------------------------------

    def parse(self) -> SessionScript:
        script = SessionScript()
        while self.peek().kind != "EOF":
            script.statements.append(self.statement())
        return script

    def statement(self):
        tok = self.peek()
        if tok.kind != "NAME":
            self.fail("expected a statement keyword (ring, module, ideal, "
                      "semidualizing, set, check)")
        handler = {
            "ring": self.ring_decl,
            "module": self.module_decl,
            "ideal": self.ideal_decl,
            "semidualizing": self.semidual_decl,
            "set": self.set_stmt,
            "check": self.check_stmt,
        }.get(tok.text)
        if handler is None:
            self.fail(f"unknown statement keyword {tok.text!r}")
        return handler()

    def bind(self, tok: Token, kind: str):
        if tok.text in KEYWORDS:
            self.fail(f"{tok.text!r} is a reserved word", tok)
        if tok.text in self.kinds:
            self.fail(f"name {tok.text!r} is already bound", tok)
        self.kinds[tok.text] = kind

    def lookup(self, tok: Token, kinds) -> str:
        kind = self.kinds.get(tok.text)
        if kind is None:
            self.fail(f"unknown identifier {tok.text!r} (forward references "
                      "are rejected)", tok)
        if kind not in kinds:
            self.fail(f"{tok.text!r} is a {kind}, expected one of {sorted(kinds)}", tok)
        return tok.text

    # -- declarations ----------------------------------------------------------

    def ring_decl(self) -> RingDecl:
        self.expect("NAME", "ring")
        name = self.expect_name()
        self.expect("SYM", "=")
        ftok = self.expect_name()
        if ftok.text == "QQ":
            field_key = "QQ"
        elif ftok.text == "GF":
            self.expect("SYM", "(")
            p = self.expect("INT")
            self.expect("SYM", ")")
            field_key = f"GF({p.text})"
        else:
            self.fail("expected field QQ or GF(p)", ftok)
        try:
            fld = field_from_key(field_key)
        except Exception as e:
            self.fail(str(e), ftok)
        self.expect("SYM", "[")
        variables = [self.expect_name().text]
        while self.accept("SYM", ","):
            variables.append(self.expect_name().text)
        self.expect("SYM", "]")
        poly_ring = PolyRing(fld, variables)
        relations = []
        if self.accept("SYM", "/"):
            self.expect("SYM", "(")
            relations.append(self.poly(poly_ring))
            while self.accept("SYM", ","):
                relations.append(self.poly(poly_ring))
            self.expect("SYM", ")")
        self.expect("SYM", ";")
        self.bind(name, "ring")
        self.rings[name.text] = poly_ring
        return RingDecl(name.text, field_key, tuple(variables), tuple(relations))

    def _ring_of(self, name: str) -> PolyRing:
        return self.rings[name]

    def module_expr(self):
        tok = self.expect_name()
        if tok.text == "coker":
            ring = self.lookup(self.expect_name(), {"ring"})
            rows = self.matrix(self._ring_of(ring))
            self.expect("NAME", "gens")
            gens = self.int_list()
            return ("coker", ring, rows, gens)
        if tok.text == "ideal_quotient":
            ring = self.lookup(self.expect_name(), {"ring"})
            self.expect("SYM", "(")
            polys = [self.poly(self._ring_of(ring))]
            while self.accept("SYM", ","):
                polys.append(self.poly(self._ring_of(ring)))
            self.expect("SYM", ")")
            return ("ideal_quotient", ring, tuple(polys))
        if tok.text == "canonical":
            ring = self.lookup(self.expect_name(), {"ring"})
            return ("canonical", ring)
        if tok.text == "free":
            ring = self.lookup(self.expect_name(), {"ring"})
            return ("free", ring, self.int_list())
        if tok.text in ("syzygy", "transpose", "lambda"):
            mod = self.lookup(self.expect_name(), {"module", "semidualizing"})
            return (tok.text, mod)
        if tok.text == "twist":
            mod = self.lookup(self.expect_name(), {"module", "semidualizing"})
            return ("twist", mod, self.signed_int())
        self.fail(f"unknown module expression {tok.text!r}", tok)

    def module_decl(self) -> ModuleDecl:
        self.expect("NAME", "module")
        name = self.expect_name()
        self.expect("SYM", "=")
        expr = self.module_expr()
        self.expect("SYM", ";")
        self.bind(name, "module")
        return ModuleDecl(name.text, expr)

    def ideal_decl(self) -> IdealDecl:
        self.expect("NAME", "ideal")
        name = self.expect_name()
        self.expect("SYM", "=")
        ring = self.lookup(self.expect_name(), {"ring"})
        self.expect("SYM", "(")
        gens = [self.poly(self._ring_of(ring))]
        while self.accept("SYM", ","):
            gens.append(self.poly(self._ring_of(ring)))
        self.expect("SYM", ")")
        self.expect("SYM", ";")
        self.bind(name, "ideal")
        return IdealDecl(name.text, ring, tuple(gens))

    def semidual_decl(self) -> SemidualDecl:
        self.expect("NAME", "semidualizing")
        name = self.expect_name()
        self.expect("SYM", "=")
        tok = self.peek()
        if tok.kind == "NAME" and tok.text == "canonical":
            self.next()
            ring = self.lookup(self.expect_name(), {"ring"})
            expr = ("canonical", ring)
        elif tok.kind == "NAME" and tok.text == "free":
            self.next()
            ring = self.lookup(self.expect_name(), {"ring"})
            expr = ("free", ring, self.int_list())
        else:
            target = self.lookup(self.expect_name(), {"module", "ring"})
            expr = ("name", target)
        self.expect("SYM", ";")
        self.bind(name, "semidualizing")
        return SemidualDecl(name.text, expr)

    def set_stmt(self) -> SetStmt:
        self.expect("NAME", "set")
        key = self.expect_name()
        if key.text not in SETTING_KEYS:
            self.fail(f"unknown setting {key.text!r} (expected one of "
                      f"{sorted(SETTING_KEYS)})", key)
        self.expect("SYM", "=")
        if key.text == "window":
            self.expect("SYM", "[")
            lo = self.signed_int()
            hi = self.signed_int()
            self.expect("SYM", "]")
            value = (lo, hi)
        else:
            value = self.signed_int()
        self.expect("SYM", ";")
        return SetStmt(key.text, value)

    def check_stmt(self) -> CheckStmt:
        self.expect("NAME", "check")
        cid = self.expect_name()
        args = []
        while self.peek().kind in ("NAME", "INT") or \
                (self.peek().kind == "SYM" and self.peek().text == "-"):
            tok = self.peek()
            if tok.kind == "NAME":
                args.append(self.lookup(self.next(),
                                        {"ring", "module", "ideal", "semidualizing"}))
            else:
                args.append(self.signed_int())
        self.expect("SYM", ";")
        return CheckStmt(cid.text, tuple(args))

    # -- small pieces -----------------------------------------------------------

    def signed_int(self) -> int:
        neg = self.accept("SYM", "-")
        tok = self.expect("INT")
        return -int(tok.text) if neg else int(tok.text)

    def int_list(self):
        self.expect("SYM", "[")
        out = []
        if not (self.peek().kind == "SYM" and self.peek().text == "]"):
            out.append(self.signed_int())
            while self.accept("SYM", ","):
                out.append(self.signed_int())
        self.expect("SYM", "]")
        return tuple(out)

    def matrix(self, poly_ring: PolyRing):
        self.expect("SYM", "[")
        rows = [self.matrix_row(poly_ring)]
        while self.accept("SYM", ","):
            rows.append(self.matrix_row(poly_ring))
        self.expect("SYM", "]")
        width = {len(r) for r in rows}
        if len(width) > 1:
            self.fail("ragged matrix rows")
        return tuple(rows)

    def matrix_row(self, poly_ring: PolyRing):
        self.expect("SYM", "[")
        row = [self.poly(poly_ring)]
        while self.accept("SYM", ","):
            row.append(self.poly(poly_ring))
        self.expect("SYM", "]")
        return tuple(row)

    # -- polynomial expressions: + - | * | ^ with unary minus --------------------

    def poly(self, poly_ring: PolyRing) -> Poly:
        p = self.poly_term(poly_ring)
        while True:
            if self.accept("SYM", "+"):
                p = p + self.poly_term(poly_ring)
            elif self.accept("SYM", "-"):
                p = p - self.poly_term(poly_ring)
            else:
                return p

    def poly_term(self, poly_ring: PolyRing) -> Poly:
        p = self.poly_factor(poly_ring)
        while self.accept("SYM", "*"):
            p = p * self.poly_factor(poly_ring)
        return p

    def poly_factor(self, poly_ring: PolyRing) -> Poly:
        base = self.poly_base(poly_ring)
        if self.accept("SYM", "^"):
            e = self.expect("INT")
            out = poly_ring.one()
            for _ in range(int(e.text)):
                out = out * base
            return out
        return base

    def poly_base(self, poly_ring: PolyRing) -> Poly:
        tok = self.peek()
        if tok.kind == "SYM" and tok.text == "-":
            self.next()
            return -self.poly_factor(poly_ring)
        if tok.kind == "SYM" and tok.text == "(":
            self.next()
            p = self.poly(poly_ring)
            self.expect("SYM", ")")
            return p
        if tok.kind == "INT":
            self.next()
            num = int(tok.text)
            if self.peek().kind == "SYM" and self.peek().text == "/" and \
                    self.tokens[self.pos + 1].kind == "INT":
                self.next()
                den = int(self.expect("INT").text)
                if den == 0:
                    self.fail("zero denominator", tok)
                return poly_ring.const(Fraction(num, den))
            return poly_ring.const(num)
        if tok.kind == "NAME":
            if tok.text in poly_ring.variables:
                self.next()
                return poly_ring.var(poly_ring.variables.index(tok.text))
            self.fail(f"unknown variable {tok.text!r}", tok)
        self.fail("expected a polynomial")


def parse_session(text) -> SessionScript:
    """Parse a session script; raises ParseError with line:column on the first
    error.  Accepts str or UTF-8 bytes."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return _Parser(text).parse()


# -- pretty printer ------------------------------------------------------------

def _poly_str(p: Poly) -> str:
    return p.canonical_str().replace(" ", "")


def pretty_print(script: SessionScript) -> str:
    """Canonical source form; parse_session(pretty_print(s)) == s."""
    lines = []
    for st in script.statements:
        if isinstance(st, RingDecl):
            head = f"ring {st.name} = {st.field_key}[{','.join(st.variables)}]"
            if st.relations:
                head += "/(" + ", ".join(_poly_str(p) for p in st.relations) + ")"
            lines.append(head + ";")
        elif isinstance(st, ModuleDecl):
            lines.append(f"module {st.name} = {_expr_str(st.expr)};")
        elif isinstance(st, IdealDecl):
            lines.append(f"ideal {st.name} = {st.ring}("
                         + ", ".join(_poly_str(p) for p in st.gens) + ");")
        elif isinstance(st, SemidualDecl):
            lines.append(f"semidualizing {st.name} = {_expr_str(st.expr)};")
        elif isinstance(st, SetStmt):
            if st.key == "window":
                lines.append(f"set window = [{st.value[0]} {st.value[1]}];")
            else:
                lines.append(f"set {st.key} = {st.value};")
        elif isinstance(st, CheckStmt):
            args = " ".join(str(a) for a in st.args)
            lines.append(f"check {st.check_id}{(' ' + args) if args else ''};")
        else:
            raise TypeError(f"unknown statement {st!r}")
    return "\n".join(lines) + "\n"


def _expr_str(expr) -> str:
    op = expr[0]
    if op == "coker":
        rows = ",".join("[" + ", ".join(_poly_str(p) for p in row) + "]"
                        for row in expr[2])
        gens = ",".join(str(t) for t in expr[3])
        return f"coker {expr[1]} [{rows}] gens [{gens}]"
    if op == "ideal_quotient":
        return f"ideal_quotient {expr[1]}(" + ", ".join(_poly_str(p) for p in expr[2]) + ")"
    if op == "canonical":
        return f"canonical {expr[1]}"
    if op == "free":
        return f"free {expr[1]} [{','.join(str(t) for t in expr[2])}]"
    if op in ("syzygy", "transpose", "lambda"):
        return f"{op} {expr[1]}"
    if op == "twist":
        return f"twist {expr[1]} {expr[2]}"
    if op == "name":
        return expr[1]
    raise TypeError(f"unknown expression {expr!r}")
