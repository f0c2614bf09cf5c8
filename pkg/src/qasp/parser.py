"""Reader and printer for the ``.qasp`` text format.

A file is a sequence of sections introduced by directive lines::

    %@exists
    a(1) | a(2).
    %@forall
    b(1) | b(2) :- a(1).
    b(2) :- a(2).
    %@constraint
    :- b(1), not b(2).

Blocks appear in program order; exactly one ``%@constraint`` section closes
the file (its body may be empty).  Rule syntax follows ASP-Core: ``:-``,
``|``, ``not``, choice heads ``l { a(X) : b(X) } u``, ``#count``/``#sum``
aggregates, intervals ``lo..hi`` in facts and integer arithmetic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import NotNormalError, ParseError, SafetyError, SourceSpan, StratificationError
from .model import (
    Aggregate,
    AggregateElement,
    Atom,
    BinOp,
    Choice,
    ChoiceElement,
    Comparison,
    Disjunction,
    Interval,
    Literal,
    Program,
    QuantifiedProgram,
    Quantifier,
    Rule,
    Variable,
    check_stratified,
)
from .qdimacs import Qbf, parse_qdimacs  # noqa: F401  (re-exported parser entry point)
from .safety import unsafe_variables

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<directive>%@[^\n]*)
  | (?P<comment>%[^\n]*)
  | (?P<if>:-)
  | (?P<dots>\.\.)
  | (?P<int>\d+)
  | (?P<anon>_(?![A-Za-z0-9_]))
  | (?P<ident>_*[a-z][A-Za-z0-9_]*)
  | (?P<var>[A-Z][A-Za-z0-9_]*)
  | (?P<agg>\#[a-z]+)
  | (?P<op><=|>=|!=|==|<|>|=)
  | (?P<punct>[-+*/(){},;:.|])
    """,
    re.VERBOSE,
)

_FLIP = {"<": ">", ">": "<", "<=": ">=", ">=": "<=", "=": "=", "!=": "!="}
_TERM_START = ("int", "var", "anon", "ident")


@dataclass
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str, file: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", SourceSpan(file, line, pos - line_start + 1))
        kind = m.lastgroup
        value = m.group()
        if kind == "directive":
            if text[line_start:pos].strip():
                raise ParseError("directive must start a line", SourceSpan(file, line, pos - line_start + 1))
            tokens.append(_Token(kind, value[2:].strip(), line, pos - line_start + 1))
        elif kind == "punct" or kind == "op":
            tokens.append(_Token(value if kind == "punct" else "op", value, line, pos - line_start + 1))
        elif kind not in ("ws", "comment"):
            tokens.append(_Token(kind, value, line, pos - line_start + 1))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + value.rindex("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, file: str):
        self.file = file
        self.tokens = _tokenize(text, file)
        self.pos = 0
        self.anon = 0

    # token helpers -------------------------------------------------------
    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> _Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def span(self, tok: _Token | None = None) -> SourceSpan:
        tok = tok or self.tok
        return SourceSpan(self.file, tok.line, tok.column)

    def error(self, message: str, tok: _Token | None = None) -> ParseError:
        return ParseError(message, self.span(tok))

    def advance(self) -> _Token:
        tok = self.tok
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        if self.tok.kind != kind:
            found = self.tok.text or self.tok.kind
            raise self.error(f"expected {kind!r}, found {found!r}")
        return self.advance()

    def accept(self, kind: str) -> bool:
        if self.tok.kind == kind:
            self.pos += 1
            return True
        return False

    # terms ----------------------------------------------------------------
    def term(self):
        left = self.product()
        while self.tok.kind in ("+", "-"):
            op = self.advance().kind
            left = BinOp(op, left, self.product())
        return left

    def product(self):
        left = self.unary()
        while self.tok.kind in ("*", "/"):
            op = self.advance().kind
            left = BinOp(op, left, self.unary())
        return left

    def unary(self):
        if self.tok.kind == "-":
            self.advance()
            inner = self.unary()
            if isinstance(inner, int):
                return -inner
            return BinOp("-", 0, inner)
        return self.primary()

    def primary(self):
        tok = self.tok
        if tok.kind == "int":
            self.advance()
            return int(tok.text)
        if tok.kind == "var":
            self.advance()
            return Variable(tok.text)
        if tok.kind == "anon":
            self.advance()
            self.anon += 1
            return Variable(f"_{self.anon}")
        if tok.kind == "ident":
            self.advance()
            if self.tok.kind == "(":
                raise self.error("function terms are not supported")
            return tok.text
        if tok.kind == "(":
            self.advance()
            inner = self.term()
            self.expect(")")
            return inner
        raise self.error(f"expected a term, found {tok.text or tok.kind!r}")

    def argument(self):
        value = self.term()
        if self.accept("dots"):
            return Interval(value, self.term())
        return value

    # atoms and literals ---------------------------------------------------
    def atom(self) -> Atom:
        tok = self.tok
        if tok.kind != "ident":
            raise self.error(f"expected an atom, found {tok.text or tok.kind!r}")
        if tok.text == "not":
            raise self.error("'not' is a reserved word")
        self.advance()
        args = []
        if self.accept("("):
            args.append(self.argument())
            while self.accept(","):
                args.append(self.argument())
            self.expect(")")
        return Atom(tok.text, tuple(args))

    def _atom_is_next(self) -> bool:
        """An identifier starts an atom unless a comparison or arithmetic follows it."""
        if self.tok.kind != "ident":
            return False
        offset = 1
        if self.peek().kind == "(":
            depth = 0
            while True:
                t = self.peek(offset)
                if t.kind == "(":
                    depth += 1
                elif t.kind == ")":
                    depth -= 1
                    if depth == 0:
                        offset += 1
                        break
                elif t.kind == "eof":
                    break
                offset += 1
        follower = self.peek(offset).kind
        return follower not in ("op", "+", "-", "*", "/")

    def condition_literal(self):
        if self.tok.kind == "ident" and self.tok.text == "not":
            self.advance()
            return Literal(self.atom(), True)
        if self._atom_is_next():
            return Literal(self.atom())
        left = self.term()
        op = self.comparison_op()
        return Comparison(left, op, self.term())

    def comparison_op(self) -> str:
        tok = self.tok
        if tok.kind != "op":
            raise self.error(f"expected a comparison operator, found {tok.text or tok.kind!r}")
        self.advance()
        return "=" if tok.text == "==" else tok.text

    def aggregate_body(self):
        name = self.advance().text[1:]
        if name not in ("count", "sum"):
            raise self.error(f"unsupported aggregate #{name}", self.peek(-1))
        self.expect("{")
        elements = []
        if self.tok.kind != "}":
            elements.append(self.aggregate_element())
            while self.accept(";"):
                elements.append(self.aggregate_element())
        self.expect("}")
        return name, tuple(elements)

    def aggregate_element(self) -> AggregateElement:
        terms = [self.term()]
        while self.accept(","):
            terms.append(self.term())
        condition = []
        if self.accept(":"):
            condition.append(self.condition_literal())
            while self.accept(","):
                condition.append(self.condition_literal())
        return AggregateElement(tuple(terms), tuple(condition))

    def body_literal(self):
        tok = self.tok
        if tok.kind == "agg":
            name, elements = self.aggregate_body()
            op = self.comparison_op()
            return Aggregate(name, elements, op, self.term())
        if tok.kind == "ident" and tok.text == "not":
            self.advance()
            return Literal(self.atom(), True)
        if self._atom_is_next():
            return Literal(self.atom())
        left = self.term()
        op = self.comparison_op()
        if self.tok.kind == "agg":
            name, elements = self.aggregate_body()
            return Aggregate(name, elements, _FLIP[op], left)
        return Comparison(left, op, self.term())

    # rules ----------------------------------------------------------------
    def choice(self, lower) -> Choice:
        self.expect("{")
        elements = []
        if self.tok.kind != "}":
            elements.append(self.choice_element())
            while self.accept(";"):
                elements.append(self.choice_element())
        self.expect("}")
        upper = None
        if self.tok.kind in _TERM_START or self.tok.kind in ("(", "-"):
            upper = self.term()
        return Choice(tuple(elements), lower, upper)

    def choice_element(self) -> ChoiceElement:
        atom = self.atom()
        condition = []
        if self.accept(":"):
            condition.append(self.condition_literal())
            while self.accept(","):
                condition.append(self.condition_literal())
        return ChoiceElement(atom, tuple(condition))

    def head(self):
        tok = self.tok
        if tok.kind == "{":
            return self.choice(None)
        if tok.kind == "ident" and self.peek().kind == "{":
            self.advance()
            return self.choice(tok.text)
        if tok.kind == "ident":
            atoms = [self.atom()]
            while self.accept("|"):
                atoms.append(self.atom())
            return Disjunction(tuple(atoms))
        if tok.kind in _TERM_START or tok.kind in ("(", "-"):
            lower = self.term()
            if self.tok.kind != "{":
                raise self.error("expected '{' after choice lower bound")
            return self.choice(lower)
        raise self.error(f"expected a rule, found {tok.text or tok.kind!r}")

    def rule(self) -> Rule:
        start = self.tok
        self.anon = 0
        if self.tok.kind == "if":
            head = Disjunction(())
        else:
            head = self.head()
        body = []
        if self.accept("if"):
            body.append(self.body_literal())
            while self.accept(","):
                body.append(self.body_literal())
        elif isinstance(head, Disjunction) and not head.atoms:
            raise self.error("expected ':-'")
        self.expect(".")
        rule = Rule(head, tuple(body))
        unsafe = unsafe_variables(rule)
        if unsafe:
            raise SafetyError(str(unsafe[0]) if not unsafe[0].anonymous else "_", str(rule), self.span(start))
        return rule


def parse_program(text: str, file: str = "<string>") -> Program:
    """Parse plain ASP rules (no section directives)."""
    parser = _Parser(text, file)
    rules = []
    while parser.tok.kind != "eof":
        if parser.tok.kind == "directive":
            raise parser.error("section directives are only allowed in .qasp files")
        rules.append(parser.rule())
    return Program(tuple(rules))


_SECTION = {"exists": Quantifier.EXISTS, "forall": Quantifier.FORALL, "constraint": None}


def parse_aspq(text: str, file: str = "<string>") -> QuantifiedProgram:
    """Parse a ``.qasp`` document into a QuantifiedProgram."""
    parser = _Parser(text, file)
    sections: list[tuple[Quantifier | None, list[Rule], _Token]] = []
    while parser.tok.kind != "eof":
        tok = parser.tok
        if tok.kind == "directive":
            if tok.text not in _SECTION:
                raise parser.error(f"unknown directive %@{tok.text}")
            if sections and sections[-1][0] is None:
                raise parser.error("%@constraint must be the last section")
            parser.advance()
            sections.append((_SECTION[tok.text], [], tok))
            continue
        if not sections:
            raise parser.error("rule outside of any section; start with %@exists or %@forall")
        sections[-1][1].append(parser.rule())

    end = SourceSpan(file, parser.tok.line, parser.tok.column)
    blocks = [(q, Program(tuple(rules))) for q, rules, _ in sections if q is not None]
    constraint_sections = [s for s in sections if s[0] is None]
    if not blocks:
        span = parser.span(constraint_sections[0][2]) if constraint_sections else end
        raise ParseError("empty prefix: at least one %@exists or %@forall section is required", span)
    if not constraint_sections:
        raise ParseError("missing %@constraint section", end)
    _, constraint_rules, ctok = constraint_sections[0]
    constraint = Program(tuple(constraint_rules))
    try:
        stratified = check_stratified(constraint)
    except NotNormalError as exc:
        raise ParseError(f"constraint section must be normal: {exc.message}", parser.span(ctok)) from None
    if not stratified:
        raise StratificationError("constraint section not stratified", parser.span(ctok))
    return QuantifiedProgram(tuple(blocks), constraint)


def dumps_program(program: Program) -> str:
    return "".join(f"{rule}\n" for rule in program.expanded_rules())


def dumps_aspq(qp: QuantifiedProgram) -> str:
    """Render ``qp`` in the ``.qasp`` format accepted by :func:`parse_aspq`."""
    parts = []
    for quantifier, program in qp.blocks:
        parts.append(f"%@{quantifier.value}\n")
        parts.append(dumps_program(program))
    parts.append("%@constraint\n")
    parts.append(dumps_program(qp.constraint))
    return "".join(parts)
