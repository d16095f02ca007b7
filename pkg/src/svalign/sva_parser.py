"""Parser and renderers for a structured subset of SystemVerilog assertions.

An assertion is decomposed into a clock trigger, an optional disable
condition, and either an implication (antecedent / operator / optional
delay / consequent) or a single invariant body expression. The same
structure can be rendered back to SVA source text or to a one-sentence
natural-language summary.

Supported subset: a single clocking event, `disable iff`, the `|->` and
`|=>` implication operators, `##N` / `##[m:n]` delays, boolean expressions
over identifiers and integer literals, and the system calls $isunknown,
$rose, $fell, $stable, and $past. Anything else raises
UnsupportedConstruct with the offending token and byte offset.
"""

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple, Union


class SvaParseError(Exception):
    """Base class for parse failures; carries a byte offset into the input."""

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (byte offset {offset})")
        self.message = message
        self.offset = offset


class SvaSyntaxError(SvaParseError):
    """Input is malformed within the supported subset."""


class UnsupportedConstruct(SvaParseError):
    """Input uses an SVA feature outside the supported subset."""

    def __init__(self, token: str, offset: int) -> None:
        super().__init__(f"unsupported construct {token!r}", offset)
        self.token = token


class Edge(Enum):
    RISING = "posedge"
    FALLING = "negedge"


@dataclass(frozen=True)
class ClockEvent:
    edge: Edge
    signal: str

    def __post_init__(self) -> None:
        if not self.signal:
            raise ValueError("clock signal must be a non-empty identifier")


class Implication(Enum):
    OVERLAPPING = "|->"
    NON_OVERLAPPING = "|=>"


@dataclass(frozen=True)
class DelayRange:
    """Cycle delay after an implication operator; max=None means unbounded."""

    min: int
    max: Optional[int]

    def __post_init__(self) -> None:
        if self.min < 0:
            raise ValueError("delay min must be non-negative")
        if self.max is not None and self.max < self.min:
            raise ValueError("delay max must be >= min")


@dataclass(frozen=True)
class Identifier:
    name: str


@dataclass(frozen=True)
class IntLiteral:
    value: int


@dataclass(frozen=True)
class UnaryOp:
    op: str  # "!" or "~"
    operand: "BoolExpr"


@dataclass(frozen=True)
class BinaryOp:
    op: str  # && || == != === !== < > <= >=
    lhs: "BoolExpr"
    rhs: "BoolExpr"


@dataclass(frozen=True)
class SysCall:
    name: str  # without the leading "$"
    args: Tuple["BoolExpr", ...]


BoolExpr = Union[Identifier, IntLiteral, UnaryOp, BinaryOp, SysCall]

UNARY_OPS = ("!", "~")
BINARY_OPS = ("&&", "||", "==", "!=", "===", "!==", "<", ">", "<=", ">=")
SYSTEM_CALLS = ("isunknown", "rose", "fell", "stable", "past")


@dataclass(frozen=True)
class SvaComponents:
    """Structured decomposition of one assertion.

    Exactly one of two shapes holds: implication form (antecedent,
    implication, consequent present; body absent) or invariant form
    (body present; the implication fields and temporal absent).
    source_text is excluded from equality so parse/render round trips
    compare structurally.
    """

    trigger: ClockEvent
    disable_iff: Optional[BoolExpr] = None
    antecedent_negated: bool = False
    antecedent: Optional[BoolExpr] = None
    implication: Optional[Implication] = None
    temporal: Optional[DelayRange] = None
    consequent_negated: bool = False
    consequent: Optional[BoolExpr] = None
    body: Optional[BoolExpr] = None
    source_text: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        implication_form = (
            self.antecedent is not None
            and self.implication is not None
            and self.consequent is not None
            and self.body is None
        )
        invariant_form = (
            self.body is not None
            and self.antecedent is None
            and self.implication is None
            and self.consequent is None
            and self.temporal is None
        )
        if implication_form == invariant_form:
            raise ValueError(
                "components must be exactly one of implication form or invariant form"
            )

    @property
    def is_implication(self) -> bool:
        return self.body is None


# ---------------------------------------------------------------------------
# Lexer

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<syscall>\$[a-zA-Z_][a-zA-Z0-9_]*)
      | (?P<ident>[a-zA-Z_][a-zA-Z0-9_]*)
      | (?P<number>[0-9]+)
      | (?P<op>\|->|\|=>|\#\#|===|!==|==|!=|<=|>=|&&|\|\||[!~()\[\]:@;,<>$])
    """,
    re.VERBOSE,
)

# Sequence/property operators and statements outside the supported subset.
_UNSUPPORTED_KEYWORDS = frozenset(
    {
        "throughout",
        "intersect",
        "within",
        "first_match",
        "and",
        "or",
        "until",
        "until_with",
        "s_until",
        "s_until_with",
        "always",
        "s_always",
        "eventually",
        "s_eventually",
        "nexttime",
        "s_nexttime",
        "accept_on",
        "reject_on",
        "sync_accept_on",
        "sync_reject_on",
        "if",
        "else",
        "case",
        "sequence",
        "implies",
    }
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "ident" | "number" | "syscall" | "op" | "eof"
    text: str
    offset: int


def _lex(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            ch = text[pos]
            if ch == "'" or ch in "*+-/=%?{}":
                # sized literals, arithmetic, repetition and conditional
                # operators are out of subset
                raise UnsupportedConstruct(ch, pos)
            raise SvaSyntaxError(f"unexpected character {ch!r}", pos)
        if m.lastgroup != "ws":
            tokens.append(_Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("eof", "", len(text)))
    return tokens


# ---------------------------------------------------------------------------
# Parser

class _Parser:
    def __init__(self, tokens: list) -> None:
        self._tokens = tokens
        self._pos = 0

    def peek(self) -> _Token:
        return self._tokens[self._pos]

    def advance(self) -> _Token:
        tok = self._tokens[self._pos]
        if tok.kind != "eof":
            self._pos += 1
        return tok

    def at_op(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text == text

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.text == word

    def expect_op(self, text: str) -> _Token:
        tok = self.peek()
        if not self.at_op(text):
            raise SvaSyntaxError(f"expected {text!r}, found {tok.text!r}", tok.offset)
        return self.advance()

    def expect_keyword(self, word: str) -> _Token:
        tok = self.peek()
        if not self.at_keyword(word):
            raise SvaSyntaxError(f"expected {word!r}, found {tok.text!r}", tok.offset)
        return self.advance()

    def expect_ident(self) -> _Token:
        tok = self.peek()
        if tok.kind != "ident":
            raise SvaSyntaxError(f"expected identifier, found {tok.text!r}", tok.offset)
        self._check_keyword(tok)
        return self.advance()

    def _check_keyword(self, tok: _Token) -> None:
        if tok.text in _UNSUPPORTED_KEYWORDS:
            raise UnsupportedConstruct(tok.text, tok.offset)

    # -- grammar ------------------------------------------------------------

    def parse_assertion(self, source_text: str) -> SvaComponents:
        wrapped = False
        if self.at_keyword("assert"):
            self.advance()
            self.expect_keyword("property")
            self.expect_op("(")
            wrapped = True
        components = self._parse_property(source_text)
        if wrapped:
            self.expect_op(")")
        if self.at_op(";"):
            self.advance()
        tok = self.peek()
        if tok.kind != "eof":
            if tok.kind == "op" and tok.text == "@":
                # multi-clock assertions are out of subset
                raise UnsupportedConstruct("@", tok.offset)
            if tok.kind == "ident" and tok.text in _UNSUPPORTED_KEYWORDS:
                raise UnsupportedConstruct(tok.text, tok.offset)
            raise SvaSyntaxError(f"unexpected trailing input {tok.text!r}", tok.offset)
        return components

    def _parse_property(self, source_text: str) -> SvaComponents:
        trigger = self._parse_clock()
        disable = None
        if self.at_keyword("disable"):
            disable = self._parse_disable_iff()

        negated = False
        if self.at_keyword("not"):
            self.advance()
            negated = True
        lhs = self._parse_expr()

        if self.at_op("|->") or self.at_op("|=>"):
            op_tok = self.advance()
            implication = (
                Implication.OVERLAPPING
                if op_tok.text == "|->"
                else Implication.NON_OVERLAPPING
            )
            if self.at_keyword("disable"):
                if disable is not None:
                    raise SvaSyntaxError(
                        "duplicate 'disable iff'", self.peek().offset
                    )
                disable = self._parse_disable_iff()
            temporal = None
            if self.at_op("##"):
                temporal = self._parse_delay()
            consequent_negated = False
            if self.at_keyword("not"):
                self.advance()
                consequent_negated = True
            consequent = self._parse_expr()
            return SvaComponents(
                trigger=trigger,
                disable_iff=disable,
                antecedent_negated=negated,
                antecedent=lhs,
                implication=implication,
                temporal=temporal,
                consequent_negated=consequent_negated,
                consequent=consequent,
                source_text=source_text,
            )

        # Invariant form: a leading `not` folds into the body expression,
        # since the structure has no body-negated slot.
        body = UnaryOp("!", lhs) if negated else lhs
        return SvaComponents(trigger=trigger, disable_iff=disable, body=body,
                             source_text=source_text)

    def _parse_clock(self) -> ClockEvent:
        self.expect_op("@")
        self.expect_op("(")
        tok = self.peek()
        if self.at_keyword("posedge"):
            edge = Edge.RISING
        elif self.at_keyword("negedge"):
            edge = Edge.FALLING
        else:
            raise SvaSyntaxError(
                f"expected 'posedge' or 'negedge', found {tok.text!r}", tok.offset
            )
        self.advance()
        signal = self.expect_ident().text
        self.expect_op(")")
        return ClockEvent(edge=edge, signal=signal)

    def _parse_disable_iff(self) -> BoolExpr:
        self.expect_keyword("disable")
        self.expect_keyword("iff")
        self.expect_op("(")
        expr = self._parse_expr()
        self.expect_op(")")
        return expr

    def _parse_delay(self) -> DelayRange:
        self.expect_op("##")
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            n = int(tok.text)
            return DelayRange(n, n)
        if self.at_op("["):
            self.advance()
            lo_tok = self.peek()
            if lo_tok.kind != "number":
                # [* [-> [= repetition ranges are out of subset
                raise UnsupportedConstruct(lo_tok.text, lo_tok.offset)
            self.advance()
            self.expect_op(":")
            hi_tok = self.peek()
            if hi_tok.kind == "number":
                self.advance()
                hi: Optional[int] = int(hi_tok.text)
            elif self.at_op("$"):
                self.advance()
                hi = None
            else:
                raise SvaSyntaxError(
                    f"expected cycle count or '$', found {hi_tok.text!r}",
                    hi_tok.offset,
                )
            self.expect_op("]")
            lo = int(lo_tok.text)
            if hi is not None and hi < lo:
                raise SvaSyntaxError("delay range max below min", lo_tok.offset)
            return DelayRange(lo, hi)
        raise SvaSyntaxError(
            f"expected delay after '##', found {tok.text!r}", tok.offset
        )

    # Precedence climbing: || < && < equality < relational < unary < primary.

    def _parse_expr(self) -> BoolExpr:
        return self._parse_or()

    def _parse_or(self) -> BoolExpr:
        expr = self._parse_and()
        while self.at_op("||"):
            self.advance()
            expr = BinaryOp("||", expr, self._parse_and())
        return expr

    def _parse_and(self) -> BoolExpr:
        expr = self._parse_equality()
        while self.at_op("&&"):
            self.advance()
            expr = BinaryOp("&&", expr, self._parse_equality())
        return expr

    def _parse_equality(self) -> BoolExpr:
        expr = self._parse_relational()
        while any(self.at_op(op) for op in ("===", "!==", "==", "!=")):
            op = self.advance().text
            expr = BinaryOp(op, expr, self._parse_relational())
        return expr

    def _parse_relational(self) -> BoolExpr:
        expr = self._parse_unary()
        while any(self.at_op(op) for op in ("<=", ">=", "<", ">")):
            op = self.advance().text
            expr = BinaryOp(op, expr, self._parse_unary())
        return expr

    def _parse_unary(self) -> BoolExpr:
        if self.at_op("!") or self.at_op("~"):
            op = self.advance().text
            return UnaryOp(op, self._parse_unary())
        return self._parse_primary()

    def _parse_primary(self) -> BoolExpr:
        tok = self.peek()
        if self.at_op("("):
            self.advance()
            expr = self._parse_expr()
            self.expect_op(")")
            return self._check_postfix(expr)
        if tok.kind == "number":
            self.advance()
            return self._check_postfix(IntLiteral(int(tok.text)))
        if tok.kind == "syscall":
            return self._check_postfix(self._parse_syscall())
        if tok.kind == "ident":
            self._check_keyword(tok)
            self.advance()
            return self._check_postfix(Identifier(tok.text))
        raise SvaSyntaxError(f"expected expression, found {tok.text!r}", tok.offset)

    def _check_postfix(self, expr: BoolExpr) -> BoolExpr:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "[":
            # bit selects and repetition are out of subset
            raise UnsupportedConstruct("[", tok.offset)
        return expr

    def _parse_syscall(self) -> BoolExpr:
        tok = self.advance()
        name = tok.text[1:]
        if name not in SYSTEM_CALLS:
            raise UnsupportedConstruct(tok.text, tok.offset)
        self.expect_op("(")
        args = [self._parse_expr()]
        while self.at_op(","):
            self.advance()
            args.append(self._parse_expr())
        self.expect_op(")")
        if name == "past":
            if len(args) not in (1, 2):
                raise SvaSyntaxError("$past takes one or two arguments", tok.offset)
        elif len(args) != 1:
            raise SvaSyntaxError(f"${name} takes exactly one argument", tok.offset)
        return SysCall(name, tuple(args))


def parse_sva(text: str) -> SvaComponents:
    """Parse one assertion (optionally wrapped in `assert property (...);`).

    Raises UnsupportedConstruct for SVA features outside the supported
    subset and SvaSyntaxError for malformed input; both carry the byte
    offset of the offending token.
    """
    if not text or not text.strip():
        raise SvaSyntaxError("empty assertion", 0)
    return _Parser(_lex(text)).parse_assertion(text)


# ---------------------------------------------------------------------------
# Rendering back to SVA source

def render_expr(expr: BoolExpr) -> str:
    """Render an expression to canonical source text.

    Binary operands that are themselves binary operations are always
    parenthesized, so parsing the output reproduces the input tree exactly.
    """
    if isinstance(expr, Identifier):
        return expr.name
    if isinstance(expr, IntLiteral):
        return str(expr.value)
    if isinstance(expr, UnaryOp):
        inner = render_expr(expr.operand)
        if isinstance(expr.operand, BinaryOp):
            inner = f"({inner})"
        return f"{expr.op}{inner}"
    if isinstance(expr, BinaryOp):
        return f"{_side(expr.lhs)} {expr.op} {_side(expr.rhs)}"
    if isinstance(expr, SysCall):
        args = ", ".join(render_expr(a) for a in expr.args)
        return f"${expr.name}({args})"
    raise TypeError(f"not a BoolExpr node: {expr!r}")


def _side(expr: BoolExpr) -> str:
    text = render_expr(expr)
    return f"({text})" if isinstance(expr, BinaryOp) else text


def _render_delay(delay: DelayRange) -> str:
    if delay.max is None:
        return f"##[{delay.min}:$]"
    if delay.max == delay.min:
        return f"##{delay.min}"
    return f"##[{delay.min}:{delay.max}]"


def render_sva(components: SvaComponents) -> str:
    """Reconstruct canonical SVA source from components.

    parse_sva(render_sva(c)) == c for every valid components value.
    """
    parts = [f"@({components.trigger.edge.value} {components.trigger.signal})"]
    if components.disable_iff is not None:
        parts.append(f"disable iff ({render_expr(components.disable_iff)})")
    if components.is_implication:
        if components.antecedent_negated:
            parts.append("not")
        parts.append(render_expr(components.antecedent))
        parts.append(components.implication.value)
        if components.temporal is not None:
            parts.append(_render_delay(components.temporal))
        if components.consequent_negated:
            parts.append("not")
        parts.append(render_expr(components.consequent))
    else:
        parts.append(render_expr(components.body))
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Natural-language summary

_COMPARISON_PHRASES = {
    "==": "is",
    "!=": "is not",
    "===": "is identical to",
    "!==": "is not identical to",
    "<": "is less than",
    ">": "is greater than",
    "<=": "is at most",
    ">=": "is at least",
}


def _condition_phrase(expr: BoolExpr) -> str:
    """Phrase an expression as a condition. Bare signals read as 'x is 1'."""
    if isinstance(expr, Identifier):
        return f"{expr.name} is 1"
    if isinstance(expr, IntLiteral):
        return f"the constant {expr.value} is nonzero"
    if isinstance(expr, UnaryOp):
        if expr.op == "!":
            if isinstance(expr.operand, Identifier):
                return f"{expr.operand.name} is 0"
            if _is_isunknown(expr.operand):
                return f"{render_expr(expr.operand.args[0])} is never unknown"
            return f"it is not the case that {_condition_phrase(expr.operand)}"
        return f"the bitwise complement of {render_expr(expr.operand)} is nonzero"
    if isinstance(expr, BinaryOp):
        if expr.op == "&&":
            return f"{_condition_phrase(expr.lhs)} and {_condition_phrase(expr.rhs)}"
        if expr.op == "||":
            return f"{_condition_phrase(expr.lhs)} or {_condition_phrase(expr.rhs)}"
        return f"{render_expr(expr.lhs)} {_COMPARISON_PHRASES[expr.op]} {render_expr(expr.rhs)}"
    if isinstance(expr, SysCall):
        arg = render_expr(expr.args[0])
        if expr.name == "isunknown":
            return f"{arg} is unknown"
        if expr.name == "rose":
            return f"{arg} rises"
        if expr.name == "fell":
            return f"{arg} falls"
        if expr.name == "stable":
            return f"{arg} is stable"
        return f"the past value of {arg} is 1"
    raise TypeError(f"not a BoolExpr node: {expr!r}")


def _is_isunknown(expr: BoolExpr) -> bool:
    return isinstance(expr, SysCall) and expr.name == "isunknown"


def _timing_phrase(components: SvaComponents) -> str:
    delay = components.temporal
    if delay is not None:
        if delay.max is None:
            return f"within {delay.min} or more cycles"
        if delay.max == delay.min:
            return f"within {delay.min} cycles"
        return f"within {delay.min}-{delay.max} cycles"
    if components.implication is Implication.OVERLAPPING:
        return "in the same cycle"
    return "in the following cycle"


def render_summary(components: SvaComponents) -> str:
    """Render components as a single natural-language sentence."""
    edge = "positive" if components.trigger.edge is Edge.RISING else "negative"
    sentence = f"On the {edge} edge of {components.trigger.signal}"
    if components.disable_iff is not None:
        sentence += f" except when {_condition_phrase(components.disable_iff)}"
    if components.is_implication:
        antecedent = _condition_phrase(components.antecedent)
        if components.antecedent_negated:
            antecedent = f"it is not the case that {antecedent}"
        consequent = _condition_phrase(components.consequent)
        if components.consequent_negated:
            consequent = f"it is never the case that {consequent}"
        sentence += (
            f", if {antecedent} then {_timing_phrase(components)} {consequent}"
        )
    else:
        body = components.body
        if isinstance(body, UnaryOp) and body.op == "!" and _is_isunknown(body.operand):
            clause = f"{render_expr(body.operand.args[0])} is never unknown"
        else:
            clause = _condition_phrase(body)
        sentence += f", {clause}"
    return sentence
