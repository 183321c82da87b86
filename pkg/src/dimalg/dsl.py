"""Lexer, recursive-descent parser and canonical renderer for ``.dimalg`` files.

Grammar (``#`` starts a comment that runs to the end of the line)::

    document  := decl*
    decl      := model | bracket | element | ideal | reduction | product
    model     := 'model' NAME '{' (('vars' | 'invertible' | 'lines') NAME* ';')* '}'
    bracket   := 'bracket' NAME 'on' NAME 'dim' dimvec '{' entry* '}'
    entry     := '{' NAME ',' NAME '}' '=' expr '@' dimvec ';'
    element   := 'element' NAME 'on' NAME '=' expr '@' dimvec ';'
    ideal     := 'ideal' NAME 'on' NAME '=' '(' names ')' ';'
    reduction := 'reduction' NAME 'of' NAME 'by' NAME 'keep' '(' names ')' ';'
    product   := 'product' NAME '=' KIND '(' names ')' ';'
    dimvec    := '[' [int (',' int)*] ']'
    expr      := term (('+' | '-') term)*
    term      := unary (('*' | '/') unary)*
    unary     := '-' unary | power
    power     := atom ['^' int | '^' '(' int ')']
    atom      := INT | NAME | '(' expr ')'

KIND is one of ``jacobi``, ``poly_poisson``, ``tensor`` (two bracket
arguments) or ``casimir`` (bracket, element, bracket, element).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Union

from .bracket import BracketSpec
from .dims import DimVector
from .errors import DimalgError
from .poly import Poly, VarTable
from .power_ring import CoordIdeal, DimElement, PolyLineModel

KEYWORDS = frozenset(
    {"model", "vars", "invertible", "lines", "bracket", "on", "dim", "element", "ideal", "reduction", "of", "by", "keep", "product"}
)
DECL_KEYWORDS = ("model", "bracket", "element", "ideal", "reduction", "product")
PRODUCT_KINDS = {"jacobi": 2, "poly_poisson": 2, "tensor": 2, "casimir": 4}


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str
    expected: tuple[str, ...] = ()

    def __str__(self):
        text = f"{self.line}:{self.column}: {self.message}"
        if self.expected:
            text += f" (expected {', '.join(self.expected)})"
        return text

    def to_dict(self):
        return {"line": self.line, "column": self.column, "message": self.message, "expected": list(self.expected)}


class ParseError(DimalgError):
    def __init__(self, diagnostics: list[ParseDiagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


# -- declarations -------------------------------------------------------------


@dataclass(frozen=True)
class ModelDecl:
    name: str
    model: PolyLineModel


@dataclass(frozen=True)
class BracketDecl:
    name: str
    model_name: str
    spec: BracketSpec


@dataclass(frozen=True)
class ElementDecl:
    name: str
    model_name: str
    element: DimElement


@dataclass(frozen=True)
class IdealDecl:
    name: str
    model_name: str
    ideal: CoordIdeal


@dataclass(frozen=True)
class ReductionDecl:
    name: str
    bracket: str
    ideal: str
    keep: tuple[str, ...]


@dataclass(frozen=True)
class ProductDecl:
    name: str
    kind: str
    args: tuple[str, ...]


Declaration = Union[ModelDecl, BracketDecl, ElementDecl, IdealDecl, ReductionDecl, ProductDecl]


@dataclass
class Document:
    declarations: list[Declaration] = field(default_factory=list)

    def names(self) -> list[str]:
        return [d.name for d in self.declarations]

    def get(self, name: str, kind: type | None = None) -> Declaration:
        for d in self.declarations:
            if d.name == name:
                if kind is not None and not isinstance(d, kind):
                    raise KeyError(f"{name!r} is a {_kind_name(type(d))}, not a {_kind_name(kind)}")
                return d
        raise KeyError(f"no declaration named {name!r}")

    def of_kind(self, kind: type) -> list:
        return [d for d in self.declarations if isinstance(d, kind)]

    def model_name_of(self, model: PolyLineModel) -> str | None:
        for d in self.of_kind(ModelDecl):
            if d.model == model:
                return d.name
        return None


def _kind_name(kind) -> str:
    return {
        ModelDecl: "model",
        BracketDecl: "bracket",
        ElementDecl: "element",
        IdealDecl: "ideal",
        ReductionDecl: "reduction",
        ProductDecl: "product",
    }.get(kind, "declaration")


# -- lexer ----------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, INT, KW, PUNCT or EOF
    text: str
    line: int
    column: int

    def describe(self) -> str:
        return "end of input" if self.kind == "EOF" else repr(self.text)


_TOKEN_RE = re.compile(r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>[0-9]+)|(?P<punct>[{}()\[\],;=@+\-*/^])")


def tokenize(source: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError([ParseDiagnostic(line, col, f"unexpected character {source[pos]!r}")])
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "name":
            tokens.append(Token("KW" if text in KEYWORDS else "NAME", text, line, col))
        elif kind == "int":
            tokens.append(Token("INT", text, line, col))
        elif kind == "punct":
            tokens.append(Token("PUNCT", text, line, col))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


# -- parser -----------------------------------------------------------------------


class _Fail(Exception):
    def __init__(self, diag: ParseDiagnostic):
        self.diag = diag


class _Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.i = 0
        self.diagnostics: list[ParseDiagnostic] = []
        self.doc = Document()
        self.scope: dict[str, Declaration] = {}

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, message: str, expected=(), tok: Token | None = None):
        tok = tok or self.tok
        raise _Fail(ParseDiagnostic(tok.line, tok.column, message, tuple(expected)))

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("PUNCT", "KW") and t.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"unexpected {self.tok.describe()}", (repr(text),))
        t = self.tok
        self.i += 1
        return t

    def name(self, what: str = "name") -> Token:
        if self.tok.kind != "NAME":
            self.fail(f"unexpected {self.tok.describe()}", (what,))
        t = self.tok
        self.i += 1
        return t

    def integer(self) -> int:
        sign = 1
        if self.at("-"):
            self.i += 1
            sign = -1
        if self.tok.kind != "INT":
            self.fail(f"unexpected {self.tok.describe()}", ("integer",))
        value = int(self.tok.text)
        self.i += 1
        return sign * value

    def name_list(self, close: str) -> list[Token]:
        out = []
        if self.at(close):
            return out
        out.append(self.name())
        while self.at(","):
            self.i += 1
            out.append(self.name())
        return out

    def dimvec(self) -> tuple[DimVector, Token]:
        start = self.expect("[")
        entries = []
        if not self.at("]"):
            entries.append(self.integer())
            while self.at(","):
                self.i += 1
                entries.append(self.integer())
        self.expect("]")
        return DimVector(entries), start

    # declarations
    def run(self) -> Document:
        while self.tok.kind != "EOF":
            try:
                self.declaration()
            except _Fail as f:
                self.diagnostics.append(f.diag)
                self.recover()
        if self.diagnostics:
            raise ParseError(self.diagnostics)
        return self.doc

    def recover(self):
        if self.tok.kind != "EOF":
            self.i += 1
        while self.tok.kind != "EOF" and not (self.tok.kind == "KW" and self.tok.text in DECL_KEYWORDS):
            self.i += 1

    def declaration(self):
        t = self.tok
        if t.kind == "KW" and t.text in DECL_KEYWORDS:
            getattr(self, "decl_" + t.text)()
        else:
            self.fail(f"unexpected {t.describe()}", tuple(repr(k) for k in DECL_KEYWORDS))

    def declare(self, tok: Token, decl: Declaration):
        if tok.text in self.scope:
            self.fail(f"duplicate declaration {tok.text!r}", tok=tok)
        self.scope[tok.text] = decl
        self.doc.declarations.append(decl)

    def resolve(self, tok: Token, kind: type) -> Declaration:
        decl = self.scope.get(tok.text)
        if decl is None:
            self.fail(f"unknown {_kind_name(kind)} {tok.text!r}", tok=tok)
        if not isinstance(decl, kind):
            self.fail(f"{tok.text!r} is a {_kind_name(type(decl))}, not a {_kind_name(kind)}", tok=tok)
        return decl

    def decl_model(self):
        self.expect("model")
        name = self.name("model name")
        self.expect("{")
        sections: dict[str, list[str]] = {"vars": [], "invertible": [], "lines": []}
        seen = set()
        while not self.at("}"):
            t = self.tok
            if not (t.kind == "KW" and t.text in sections):
                self.fail(f"unexpected {t.describe()}", ("'vars'", "'invertible'", "'lines'", "'}'"))
            self.i += 1
            while self.tok.kind == "NAME":
                n = self.tok
                if n.text in seen:
                    self.fail(f"duplicate name {n.text!r} in model", tok=n)
                seen.add(n.text)
                sections[t.text].append(n.text)
                self.i += 1
            self.expect(";")
        self.expect("}")
        model = PolyLineModel(VarTable(sections["vars"], sections["invertible"]), tuple(sections["lines"]))
        self.declare(name, ModelDecl(name.text, model))

    def decl_bracket(self):
        self.expect("bracket")
        name = self.name("bracket name")
        self.expect("on")
        mtok = self.name("model name")
        model = self.resolve(mtok, ModelDecl).model
        self.expect("dim")
        k, ktok = self.dimvec()
        if len(k) != model.m:
            self.fail(f"bracket dimension {k} has {len(k)} entries but the model has {model.m} lines", (f"{model.m} entries",), ktok)
        self.expect("{")
        table = {}
        gens = set(model.generators)
        while not self.at("}"):
            etok = self.expect("{")
            g = self.name("generator")
            self.expect(",")
            h = self.name("generator")
            self.expect("}")
            for gt in (g, h):
                if gt.text not in gens:
                    self.fail(f"{gt.text!r} is not a generator of model {mtok.text!r}", tuple(model.generators), gt)
            self.expect("=")
            expr_tok = self.tok
            value = self.expr(model)
            self.expect("@")
            tag, ttok = self.dimvec()
            wanted = model.generator_dim(g.text) + model.generator_dim(h.text) + k
            if tag != wanted:
                self.fail(f"entry {{{g.text},{h.text}}} must carry tag {wanted}, got {tag}", (str(wanted),), ttok)
            element = self.to_element(model, value, tag, expr_tok)
            key = (g.text, h.text)
            if key in table or (h.text, g.text) in table:
                self.fail(f"entry {{{g.text},{h.text}}} given twice", tok=etok)
            if g.text == h.text and not element.is_zero():
                self.fail(f"{{{g.text},{g.text}}} must be 0", tok=etok)
            table[key] = element
            self.expect(";")
        self.expect("}")
        self.declare(name, BracketDecl(name.text, mtok.text, BracketSpec(model, k, table)))

    def decl_element(self):
        self.expect("element")
        name = self.name("element name")
        self.expect("on")
        mtok = self.name("model name")
        model = self.resolve(mtok, ModelDecl).model
        self.expect("=")
        expr_tok = self.tok
        value = self.expr(model)
        self.expect("@")
        tag, _ = self.dimvec()
        element = self.to_element(model, value, tag, expr_tok)
        self.expect(";")
        self.declare(name, ElementDecl(name.text, mtok.text, element))

    def decl_ideal(self):
        self.expect("ideal")
        name = self.name("ideal name")
        self.expect("on")
        mtok = self.name("model name")
        model = self.resolve(mtok, ModelDecl).model
        self.expect("=")
        self.expect("(")
        names = self.name_list(")")
        self.expect(")")
        for n in names:
            if n.text not in model.vars.ordinary:
                self.fail(f"{n.text!r} is not an ordinary variable of {mtok.text!r}", tuple(model.vars.ordinary), n)
        self.expect(";")
        self.declare(name, IdealDecl(name.text, mtok.text, CoordIdeal(frozenset(n.text for n in names))))

    def decl_reduction(self):
        self.expect("reduction")
        name = self.name("reduction name")
        self.expect("of")
        btok = self.name("bracket name")
        bdecl = self.resolve(btok, BracketDecl)
        self.expect("by")
        itok = self.name("ideal name")
        idecl = self.resolve(itok, IdealDecl)
        if idecl.model_name != bdecl.model_name:
            self.fail(f"ideal {itok.text!r} lives on {idecl.model_name!r}, bracket on {bdecl.model_name!r}", tok=itok)
        self.expect("keep")
        self.expect("(")
        keep = self.name_list(")")
        self.expect(")")
        model = bdecl.spec.model
        for n in keep:
            if n.text not in model.vars:
                self.fail(f"{n.text!r} is not a variable of {bdecl.model_name!r}", tuple(model.vars.names), n)
        self.expect(";")
        self.declare(name, ReductionDecl(name.text, btok.text, itok.text, tuple(n.text for n in keep)))

    def decl_product(self):
        self.expect("product")
        name = self.name("product name")
        self.expect("=")
        ktok = self.name("product kind")
        if ktok.text not in PRODUCT_KINDS:
            self.fail(f"unknown product kind {ktok.text!r}", tuple(PRODUCT_KINDS), ktok)
        self.expect("(")
        args = self.name_list(")")
        self.expect(")")
        arity = PRODUCT_KINDS[ktok.text]
        if len(args) != arity:
            self.fail(f"{ktok.text} takes {arity} arguments, got {len(args)}", tok=ktok)
        kinds = [BracketDecl, ElementDecl, BracketDecl, ElementDecl] if ktok.text == "casimir" else [BracketDecl, BracketDecl]
        for a, kind in zip(args, kinds):
            self.resolve(a, kind)
        self.expect(";")
        self.declare(name, ProductDecl(name.text, ktok.text, tuple(a.text for a in args)))

    # expressions evaluate to Laurent polynomials over chart vars and units
    def to_element(self, model: PolyLineModel, value: Poly, tag: DimVector, tok: Token) -> DimElement:
        if len(tag) != model.m:
            self.fail(f"dimension tag {tag} has {len(tag)} entries but the model has {model.m} lines", (f"{model.m} entries",), tok)
        try:
            return DimElement.from_ext(model, value, tag)
        except DimalgError as err:
            self.fail(str(err), tok=tok)

    def expr(self, model: PolyLineModel) -> Poly:
        value = self.term(model)
        while self.at("+") or self.at("-"):
            op = self.tok.text
            self.i += 1
            rhs = self.term(model)
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self, model: PolyLineModel) -> Poly:
        value = self.unary(model)
        while self.at("*") or self.at("/"):
            op = self.tok
            self.i += 1
            rhs = self.unary(model)
            if op.text == "*":
                value = value * rhs
            else:
                ok, inv = rhs.is_unit()
                if not ok:
                    self.fail("can only divide by a unit (a rational times invertible symbols)", tok=op)
                value = value * inv
        return value

    def unary(self, model: PolyLineModel) -> Poly:
        if self.at("-"):
            self.i += 1
            return -self.unary(model)
        return self.power(model)

    def power(self, model: PolyLineModel) -> Poly:
        base_tok = self.tok
        base = self.atom(model)
        if not self.at("^"):
            return base
        self.i += 1
        if self.at("("):
            self.i += 1
            n = self.integer()
            self.expect(")")
        else:
            n = self.integer()
        if n < 0 and not base.is_unit()[0]:
            self.fail("negative power of a non-invertible expression", tok=base_tok)
        return base ** n

    def atom(self, model: PolyLineModel) -> Poly:
        ext = model.ext_vars
        t = self.tok
        if t.kind == "INT":
            self.i += 1
            return Poly.const(ext, int(t.text))
        if t.kind == "NAME":
            if t.text not in ext:
                self.fail(f"unknown symbol {t.text!r}", tuple(ext.names), t)
            self.i += 1
            return Poly.var(ext, t.text)
        if self.at("("):
            self.i += 1
            value = self.expr(model)
            self.expect(")")
            return value
        self.fail(f"unexpected {t.describe()}", ("number", "symbol", "'('"))


def parse(source: str) -> Document:
    """Parse a document; raises :class:`ParseError` carrying positioned diagnostics."""
    return _Parser(source).run()


def parse_element(source: str, model: PolyLineModel) -> DimElement:
    """Parse a bare expression (optionally tagged with ``@ [..]``) on ``model``.

    Without a tag the slice is read off the unit powers; a zero
    expression then lands in slice 0.
    """
    p = _Parser(source)
    try:
        expr_tok = p.tok
        value = p.expr(model)
        tag = None
        if p.at("@"):
            p.i += 1
            tag, _ = p.dimvec()
        if p.tok.kind != "EOF":
            p.fail(f"unexpected {p.tok.describe()}", ("end of input",))
        if tag is None:
            tag = model.zero_dim() if value.is_zero() else None
        if tag is not None:
            return p.to_element(model, value, tag, expr_tok)
        try:
            return DimElement.from_ext(model, value)
        except DimalgError as err:
            p.fail(str(err), tok=expr_tok)
    except _Fail as f:
        raise ParseError([f.diag]) from None


# -- rendering -----------------------------------------------------------------------


def render_decl(d: Declaration) -> str:
    if isinstance(d, ModelDecl):
        lines = [f"model {d.name} {{"]
        for key, names in (("vars", d.model.vars.ordinary), ("invertible", d.model.vars.invertible), ("lines", d.model.lines)):
            if names:
                lines.append(f"  {key} {' '.join(names)};")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(d, BracketDecl):
        lines = [f"bracket {d.name} on {d.model_name} dim {d.spec.dim} {{"]
        for (g, h), v in d.spec.table.items():
            lines.append(f"  {{{g},{h}}} = {v.render()};")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(d, ElementDecl):
        return f"element {d.name} on {d.model_name} = {d.element.render()};"
    if isinstance(d, IdealDecl):
        names = sorted(d.ideal.vanishing_vars)
        return f"ideal {d.name} on {d.model_name} = ({', '.join(names)});"
    if isinstance(d, ReductionDecl):
        return f"reduction {d.name} of {d.bracket} by {d.ideal} keep ({', '.join(d.keep)});"
    if isinstance(d, ProductDecl):
        return f"product {d.name} = {d.kind}({', '.join(d.args)});"
    raise TypeError(f"not a declaration: {d!r}")


def render(doc: Document) -> str:
    if not doc.declarations:
        return ""
    return "\n\n".join(render_decl(d) for d in doc.declarations) + "\n"


def spec_document(spec: BracketSpec, name: str = "B", model_name: str = "M") -> Document:
    """A standalone document declaring ``spec`` and its model."""
    return Document([ModelDecl(model_name, spec.model), BracketDecl(name, model_name, spec)])


def iter_errors(doc: Document) -> Iterator[str]:
    """Names referenced but not declared (never yields for parsed documents)."""
    seen = set()
    for d in doc.declarations:
        refs = []
        if isinstance(d, (BracketDecl, ElementDecl, IdealDecl)):
            refs = [d.model_name]
        elif isinstance(d, ReductionDecl):
            refs = [d.bracket, d.ideal]
        elif isinstance(d, ProductDecl):
            refs = list(d.args)
        for r in refs:
            if r not in seen:
                yield r
        seen.add(d.name)
