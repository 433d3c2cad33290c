"""A small line-oriented modelling language for polynomial models.

Grammar (one declaration per line, ``#`` starts a comment)::

    declaration:
        'var' NAME+                       e.g.  var x0 x1 x2
        'symplectic' 'std'
        'symplectic' 'explicit' 'support' '{' INT (',' INT)* '}'
                     'matrix' '[' row (',' row)* ']'
                     where row = '[' rational (',' rational)* ']'
        'fn'          NAME '=' expr
        'form'        NAME '=' expr       (grade >= 1)
        'vector'      NAME '=' expr       (grade 1)
        'multivector' NAME '=' expr
        'section'     NAME '=' '(' expr ',' expr ')'

    expr    : sum
    sum     : wedge (('+' | '-') wedge)*
    wedge   : product ('^^' product)*
    product : unary ('*' unary)*
    unary   : '-' unary | power
    power   : atom ('^' INT)?             (scalar base, integer exponent)
    atom    : INT ('/' INT)?              exact rational literal
            | NAME                        declared coordinate x<i> or bound name
            | 'dx' '[' INT ']'            coordinate 1-form
            | 'e'  '[' INT ']'            coordinate vector field
            | 'd'  '[' expr ']'           exterior derivative
            | '(' expr ')'                grouping
            | '(' expr ',' expr ')'       generalized section

Every coordinate index that appears (in x<i>, dx[i], e[i], or the explicit
support) must be declared on a ``var`` line; binding names are unique and
may not collide with keywords or with the coordinate pattern ``x<digits>``.
Binding a tensor kind to an identically zero value of grade >= 1 is
rejected: the canonical printer could not preserve its grade.

``parse_document`` evaluates eagerly into exact values; ``render_document``
prints the canonical form, and parse . render is the identity on canonical
documents.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from algebroid.courant import GeneralizedSection
from algebroid.errors import DslError, GradeError
from algebroid.exterior import KForm, KVector, de_rham, render_alternating, wedge
from algebroid.poly import Poly, render_fraction, render_poly
from algebroid.symplectic import ConstantSymplectic

KEYWORDS = {
    "var",
    "symplectic",
    "std",
    "explicit",
    "support",
    "matrix",
    "fn",
    "form",
    "vector",
    "multivector",
    "section",
    "d",
    "dx",
    "e",
}

_COORD_RE = re.compile(r"^x(\d+)$")

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<wedge>\^\^)|(?P<sym>[+\-*/^=\[\](){},]))"
)


@dataclass
class _Token:
    kind: str  # "int" | "name" | "sym" | "end"
    text: str
    line: int
    column: int


def _lex_line(text, line_no):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos] == "#":
            break
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            stripped = text[pos:].lstrip()
            if not stripped or stripped[0] == "#":
                break
            column = len(text) - len(stripped) + 1
            raise DslError(f"unexpected character {stripped[0]!r}", line_no, column)
        pos = match.end()
        column = match.start(match.lastgroup) + 1
        if match.lastgroup == "int":
            tokens.append(_Token("int", match.group("int"), line_no, column))
        elif match.lastgroup == "name":
            tokens.append(_Token("name", match.group("name"), line_no, column))
        elif match.lastgroup == "wedge":
            tokens.append(_Token("sym", "^^", line_no, column))
        else:
            tokens.append(_Token("sym", match.group("sym"), line_no, column))
    tokens.append(_Token("end", "", line_no, len(text) + 1))
    return tokens


@dataclass
class Binding:
    kind: str  # "fn" | "form" | "vector" | "multivector" | "section"
    name: str
    value: object


class ModelDocument:
    """The result of parsing: declared coordinates, an optional symplectic
    structure, and ordered named bindings."""

    def __init__(self):
        self.var_indices = ()
        self.symplectic = None
        self.bindings = []
        self._by_name = {}

    def bind(self, binding: Binding):
        self.bindings.append(binding)
        self._by_name[binding.name] = binding

    def lookup(self, name: str):
        return self._by_name.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name


class _LineParser:
    """Recursive-descent parser over one line's tokens."""

    def __init__(self, tokens, document):
        self.tokens = tokens
        self.pos = 0
        self.document = document

    # -- token plumbing --------------------------------------------------

    @property
    def current(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        token = self.tokens[self.pos]
        if token.kind != "end":
            self.pos += 1
        return token

    def expect_sym(self, text) -> _Token:
        token = self.current
        if token.kind != "sym" or token.text != text:
            raise DslError(
                f"expected {text!r}, found {token.text!r}" if token.kind != "end"
                else f"expected {text!r} before end of line",
                token.line,
                token.column,
            )
        return self.advance()

    def at_sym(self, text) -> bool:
        return self.current.kind == "sym" and self.current.text == text

    def expect_int(self) -> int:
        token = self.current
        if token.kind != "int":
            raise DslError(
                f"expected an integer, found {token.text!r}"
                if token.kind != "end"
                else "expected an integer before end of line",
                token.line,
                token.column,
            )
        self.advance()
        return int(token.text)

    def expect_end(self):
        token = self.current
        if token.kind != "end":
            raise DslError(f"unexpected {token.text!r}", token.line, token.column)

    def error(self, message, token=None) -> DslError:
        token = token or self.current
        return DslError(message, token.line, token.column)

    # -- coordinates -------------------------------------------------------

    def coordinate_index(self, token) -> int:
        match = _COORD_RE.match(token.text)
        if not match:
            raise self.error(f"expected a coordinate like x0, found {token.text!r}", token)
        return int(match.group(1))

    def check_declared(self, index, token):
        if index not in self.document.var_indices:
            raise self.error(f"coordinate x{index} is not declared", token)

    # -- expressions -------------------------------------------------------

    def parse_expr(self):
        return self.parse_sum()

    def parse_sum(self):
        value = self.parse_wedge()
        while self.current.kind == "sym" and self.current.text in "+-":
            op = self.advance()
            right = self.parse_wedge()
            value = self.combine_additive(value, right, op)
        return value

    def parse_wedge(self):
        value = self.parse_product()
        while self.at_sym("^^"):
            op = self.advance()
            right = self.parse_product()
            value = self.combine_wedge(value, right, op)
        return value

    def parse_product(self):
        value = self.parse_unary()
        while self.at_sym("*"):
            op = self.advance()
            right = self.parse_unary()
            value = self.combine_product(value, right, op)
        return value

    def parse_unary(self):
        if self.at_sym("-"):
            self.advance()
            value = self.parse_unary()
            return -value
        return self.parse_power()

    def parse_power(self):
        value = self.parse_atom()
        if self.at_sym("^"):
            op = self.advance()
            exponent = self.expect_int()
            if not isinstance(value, Poly):
                raise self.error("only scalars can be raised to a power", op)
            return value**exponent
        return value

    def parse_atom(self):
        token = self.current
        if token.kind == "int":
            self.advance()
            numerator = int(token.text)
            if self.at_sym("/"):
                self.advance()
                denominator = self.expect_int()
                if denominator == 0:
                    raise self.error("zero denominator", token)
                return Poly.constant(Fraction(numerator, denominator))
            return Poly.constant(numerator)
        if token.kind == "name":
            if token.text == "dx" or token.text == "e":
                self.advance()
                self.expect_sym("[")
                index_token = self.current
                index = self.expect_int()
                self.expect_sym("]")
                self.check_declared(index, index_token)
                cls = KForm if token.text == "dx" else KVector
                return cls.coordinate(index)
            if token.text == "d":
                self.advance()
                self.expect_sym("[")
                inner = self.parse_expr()
                self.expect_sym("]")
                if isinstance(inner, Poly):
                    return de_rham(inner)
                if type(inner) is KForm:
                    return de_rham(inner)
                raise self.error("d[...] applies to scalars and forms", token)
            match = _COORD_RE.match(token.text)
            if match:
                self.advance()
                index = int(match.group(1))
                self.check_declared(index, token)
                return Poly.variable(index)
            if token.text in KEYWORDS:
                raise self.error(f"unexpected keyword {token.text!r}", token)
            self.advance()
            binding = self.document.lookup(token.text)
            if binding is None:
                raise self.error(f"unbound name {token.text!r}", token)
            return binding.value
        if token.kind == "sym" and token.text == "(":
            self.advance()
            first = self.parse_expr()
            if self.at_sym(","):
                self.advance()
                second = self.parse_expr()
                self.expect_sym(")")
                return self.make_section(first, second, token)
            self.expect_sym(")")
            return first
        raise self.error(
            f"unexpected {token.text!r}" if token.kind != "end" else "unexpected end of line",
            token,
        )

    # -- typed combination --------------------------------------------------

    def combine_additive(self, left, right, op):
        try:
            if op.text == "+":
                return left + right
            return left - right
        except (GradeError, TypeError):
            raise self.error(
                f"cannot apply {op.text!r} to {_kind_name(left)} and {_kind_name(right)}",
                op,
            ) from None

    def combine_product(self, left, right, op):
        if isinstance(left, Poly) or isinstance(right, Poly):
            try:
                return left * right
            except (GradeError, TypeError):
                pass
        raise self.error(
            f"cannot multiply {_kind_name(left)} and {_kind_name(right)}; "
            "use ^^ for exterior products",
            op,
        )

    def combine_wedge(self, left, right, op):
        if isinstance(left, GeneralizedSection) or isinstance(right, GeneralizedSection):
            raise self.error("sections have no exterior product", op)
        try:
            return wedge(left, right)
        except (GradeError, TypeError):
            raise self.error(
                f"cannot wedge {_kind_name(left)} with {_kind_name(right)}", op
            ) from None

    def make_section(self, first, second, token):
        if isinstance(first, Poly) and first.is_zero():
            first = KVector.zero(1)
        if isinstance(second, Poly) and second.is_zero():
            second = KForm.zero(1)
        if type(first) is not KVector or first.grade != 1:
            raise self.error("a section's first component must be a vector field", token)
        if type(second) is not KForm or second.grade != 1:
            raise self.error("a section's second component must be a 1-form", token)
        return GeneralizedSection(first, second)


def _kind_name(value) -> str:
    if isinstance(value, Poly):
        return "a scalar"
    if type(value) is KForm:
        return f"a grade-{value.grade} form"
    if type(value) is KVector:
        return f"a grade-{value.grade} multivector"
    if isinstance(value, GeneralizedSection):
        return "a section"
    return type(value).__name__


def _parse_rational(parser: _LineParser) -> Fraction:
    negative = False
    while parser.at_sym("-"):
        parser.advance()
        negative = not negative
    numerator = parser.expect_int()
    denominator = 1
    if parser.at_sym("/"):
        parser.advance()
        denominator = parser.expect_int()
        if denominator == 0:
            raise parser.error("zero denominator")
    value = Fraction(numerator, denominator)
    return -value if negative else value


def _parse_symplectic(parser: _LineParser, document: ModelDocument):
    if document.symplectic is not None:
        raise parser.error("a document declares at most one symplectic structure")
    token = parser.current
    if token.kind != "name" or token.text not in ("std", "explicit"):
        raise parser.error("expected 'std' or 'explicit'")
    parser.advance()
    if token.text == "std":
        parser.expect_end()
        document.symplectic = ConstantSymplectic.standard()
        return
    word = parser.current
    if word.kind != "name" or word.text != "support":
        raise parser.error("expected 'support'")
    parser.advance()
    parser.expect_sym("{")
    indices = []
    if not parser.at_sym("}"):
        while True:
            index_token = parser.current
            index = parser.expect_int()
            parser.check_declared(index, index_token)
            indices.append(index)
            if parser.at_sym(","):
                parser.advance()
                continue
            break
    parser.expect_sym("}")
    word = parser.current
    if word.kind != "name" or word.text != "matrix":
        raise parser.error("expected 'matrix'")
    parser.advance()
    parser.expect_sym("[")
    rows = []
    if not parser.at_sym("]"):
        while True:
            parser.expect_sym("[")
            row = []
            if not parser.at_sym("]"):
                while True:
                    row.append(_parse_rational(parser))
                    if parser.at_sym(","):
                        parser.advance()
                        continue
                    break
            parser.expect_sym("]")
            rows.append(row)
            if parser.at_sym(","):
                parser.advance()
                continue
            break
    parser.expect_sym("]")
    parser.expect_end()
    order = sorted(range(len(indices)), key=lambda k: indices[k])
    if len(rows) != len(indices) or any(len(row) != len(indices) for row in rows):
        raise parser.error("matrix shape must match the support")
    permuted = [[rows[a][b] for b in order] for a in order]
    try:
        document.symplectic = ConstantSymplectic.explicit(
            sorted(indices), permuted
        )
    except ValueError as exc:
        raise parser.error(str(exc)) from None


_BINDING_KINDS = ("fn", "form", "vector", "multivector", "section")


def _parse_binding(parser: _LineParser, document: ModelDocument, kind: str):
    name_token = parser.current
    if name_token.kind != "name":
        raise parser.error("expected a name")
    name = name_token.text
    if name in KEYWORDS or _COORD_RE.match(name):
        raise parser.error(f"{name!r} cannot be used as a binding name", name_token)
    if name in document:
        raise parser.error(f"{name!r} is already bound", name_token)
    parser.advance()
    parser.expect_sym("=")
    value = parser.parse_expr()
    parser.expect_end()

    if kind == "fn":
        if type(value) in (KForm, KVector) and value.grade == 0:
            value = value.as_poly()
        if not isinstance(value, Poly):
            raise parser.error(
                f"fn {name} must be a scalar, got {_kind_name(value)}", name_token
            )
    elif kind == "form":
        if type(value) is not KForm or value.grade < 1:
            raise parser.error(
                f"form {name} must have grade >= 1, got {_kind_name(value)}", name_token
            )
        if value.is_zero():
            raise parser.error(
                f"form {name} is identically zero; a zero binding cannot keep its grade",
                name_token,
            )
    elif kind == "vector":
        if type(value) is not KVector or value.grade != 1:
            raise parser.error(
                f"vector {name} must be a grade-1 multivector, got {_kind_name(value)}",
                name_token,
            )
        if value.is_zero():
            raise parser.error(
                f"vector {name} is identically zero; a zero binding cannot keep its grade",
                name_token,
            )
    elif kind == "multivector":
        if isinstance(value, Poly):
            value = KVector.from_poly(value)
        if type(value) is not KVector:
            raise parser.error(
                f"multivector {name} must be a multivector, got {_kind_name(value)}",
                name_token,
            )
        if value.is_zero() and value.grade > 0:
            raise parser.error(
                f"multivector {name} is identically zero; a zero binding cannot keep "
                "its grade",
                name_token,
            )
    elif kind == "section":
        if not isinstance(value, GeneralizedSection):
            raise parser.error(
                f"section {name} must be a (vector, form) pair, got {_kind_name(value)}",
                name_token,
            )
    document.bind(Binding(kind, name, value))


def parse_document(text: str) -> ModelDocument:
    """Parse and evaluate a model document."""
    document = ModelDocument()
    for line_no, line in enumerate(text.splitlines(), start=1):
        tokens = _lex_line(line, line_no)
        if tokens[0].kind == "end":
            continue
        parser = _LineParser(tokens, document)
        head = parser.current
        if head.kind != "name":
            raise parser.error("expected a declaration keyword")
        if head.text == "var":
            parser.advance()
            indices = set(document.var_indices)
            saw = False
            while parser.current.kind == "name":
                token = parser.advance()
                indices.add(parser.coordinate_index(token))
                saw = True
            parser.expect_end()
            if not saw:
                raise parser.error("var expects at least one coordinate")
            document.var_indices = tuple(sorted(indices))
        elif head.text == "symplectic":
            parser.advance()
            _parse_symplectic(parser, document)
        elif head.text in _BINDING_KINDS:
            parser.advance()
            _parse_binding(parser, document, head.text)
        else:
            raise parser.error(f"unknown declaration {head.text!r}")
    return document


# -- canonical rendering -----------------------------------------------------


def render_value(value) -> str:
    if isinstance(value, Poly):
        return render_poly(value)
    if type(value) in (KForm, KVector):
        return render_alternating(value)
    if isinstance(value, GeneralizedSection):
        return f"({render_alternating(value.vector)}, {render_alternating(value.form)})"
    raise TypeError(f"cannot render {value!r}")


def render_document(document: ModelDocument) -> str:
    """The canonical text of a document; a fixed point of parse . render."""
    lines = []
    if document.var_indices:
        lines.append("var " + " ".join(f"x{i}" for i in document.var_indices))
    w = document.symplectic
    if w is not None:
        if w.kind == "standard":
            lines.append("symplectic std")
        else:
            support = ", ".join(str(i) for i in w.block)
            rows = ", ".join(
                "[" + ", ".join(render_fraction(v) for v in row) + "]"
                for row in w.matrix
            )
            lines.append(
                f"symplectic explicit support {{{support}}} matrix [{rows}]"
            )
    for binding in document.bindings:
        lines.append(f"{binding.kind} {binding.name} = {render_value(binding.value)}")
    return "\n".join(lines) + "\n"
