"""Textual architecture description language: parse and serialize.

Grammar (line comments `//`, statements end with `;`):

    document   := (component | connector)*
    component  := 'component' IDENT '{' (port | part | connector)* '}'
    port       := 'port' IDENT ';'
    part       := 'part' IDENT ':' IDENT mult? ';'
    mult       := '[' (NUMBER | NUMBER '..' NUMBER | NUMBER '..' '*' | '*') ']'
    connector  := 'connector' IDENT ':' path arrow path ';'
    path       := IDENT ('.' IDENT)*
    arrow      := '->' | '<-' | '<->'

Arrows map to RIGHT, LEFT, BIDIR. Connectors at document root take the empty
context and wire top-level components. serialize_architecture emits the
canonical form: components in name order, ports before parts before
connectors, each group sorted, so equal models serialize byte-identically.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AdlParseError
from .model import (
    ArchitectureModel,
    Component,
    Connector,
    Direction,
    EndpointPath,
    Multiplicity,
    Part,
    Port,
    ROOT_CONTEXT,
    validate_model,
)

HEADER = "// architecture description"

_ARROWS = {"->": Direction.RIGHT, "<-": Direction.LEFT, "<->": Direction.BIDIR}
_ARROW_TEXT = {v: k for k, v in _ARROWS.items()}


def _is_ident_start(ch: str) -> bool:
    return ("a" <= ch <= "z") or ("A" <= ch <= "Z") or ch == "_"


def _is_ident_char(ch: str) -> bool:
    return _is_ident_start(ch) or ("0" <= ch <= "9")


@dataclass(frozen=True)
class _Token:
    kind: str  # ident | number | punct | eof
    text: str
    line: int
    column: int


def _lex(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line = 1
    col = 1
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
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_col = col
        if _is_ident_start(ch):
            j = i
            while j < n and _is_ident_char(text[j]):
                j += 1
            tokens.append(_Token("ident", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("number", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        for punct in ("<->", "->", "<-", ".."):
            if text.startswith(punct, i):
                tokens.append(_Token("punct", punct, line, start_col))
                i += len(punct)
                col += len(punct)
                break
        else:
            if ch in "{}[]:;.*":
                tokens.append(_Token("punct", ch, line, start_col))
                i += 1
                col += 1
            else:
                raise AdlParseError(f"unexpected character {ch!r}", line, start_col)
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]) -> None:
        self.tokens = tokens
        self.pos = 0
        self.components: list[Component] = []
        self.connectors: list[Connector] = []
        # declaration positions by ref path, for semantic diagnostics
        self.positions: dict[str, tuple[int, int]] = {}

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def error(self, message: str, tok: _Token | None = None) -> AdlParseError:
        tok = tok or self.peek()
        return AdlParseError(message, tok.line, tok.column)

    def expect_punct(self, text: str) -> _Token:
        tok = self.peek()
        if tok.kind != "punct" or tok.text != text:
            raise self.error(f"expected '{text}', found {tok.text!r}" if tok.text else f"expected '{text}'")
        return self.advance()

    def expect_ident(self, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != "ident":
            raise self.error(f"expected {what}, found {tok.text!r}" if tok.text else f"expected {what}")
        return self.advance()

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.text == word

    def parse_document(self) -> None:
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                return
            if self.at_keyword("component"):
                self.parse_component()
            elif self.at_keyword("connector"):
                self.parse_connector(ROOT_CONTEXT)
            else:
                raise self.error("expected 'component' or 'connector' declaration")

    def parse_component(self) -> None:
        self.advance()
        name_tok = self.expect_ident("component name")
        self.positions.setdefault(name_tok.text, (name_tok.line, name_tok.column))
        self.expect_punct("{")
        ports: list[Port] = []
        parts: list[Part] = []
        while True:
            tok = self.peek()
            if tok.kind == "punct" and tok.text == "}":
                self.advance()
                break
            if self.at_keyword("port"):
                self.advance()
                port_tok = self.expect_ident("port name")
                self.expect_punct(";")
                ports.append(Port(port_tok.text))
                self.positions.setdefault(
                    f"{name_tok.text}#{port_tok.text}", (port_tok.line, port_tok.column)
                )
            elif self.at_keyword("part"):
                self.advance()
                role_tok = self.expect_ident("part role")
                self.expect_punct(":")
                type_tok = self.expect_ident("part type")
                mult = self.parse_multiplicity()
                self.expect_punct(";")
                parts.append(Part(role_tok.text, type_tok.text, mult))
                self.positions.setdefault(
                    f"{name_tok.text}.{role_tok.text}", (role_tok.line, role_tok.column)
                )
            elif self.at_keyword("connector"):
                self.parse_connector(name_tok.text)
            else:
                raise self.error("expected 'port', 'part', 'connector', or '}'")
        self.components.append(Component(name_tok.text, tuple(ports), tuple(parts)))

    def parse_multiplicity(self) -> Multiplicity:
        tok = self.peek()
        if tok.kind != "punct" or tok.text != "[":
            return Multiplicity(1, 1)
        self.advance()
        tok = self.peek()
        if tok.kind == "punct" and tok.text == "*":
            self.advance()
            self.expect_punct("]")
            return Multiplicity(0, None)
        if tok.kind != "number":
            raise self.error("expected a number or '*' in multiplicity")
        lower = int(self.advance().text)
        tok = self.peek()
        if tok.kind == "punct" and tok.text == "..":
            self.advance()
            tok = self.peek()
            if tok.kind == "punct" and tok.text == "*":
                self.advance()
                self.expect_punct("]")
                return Multiplicity(lower, None)
            if tok.kind != "number":
                raise self.error("expected a number or '*' after '..'")
            upper = int(self.advance().text)
            self.expect_punct("]")
            return Multiplicity(lower, upper)
        self.expect_punct("]")
        return Multiplicity(lower, lower)

    def parse_connector(self, context: str) -> None:
        self.advance()
        id_tok = self.expect_ident("connector id")
        self.expect_punct(":")
        left = self.parse_path()
        arrow_tok = self.peek()
        if arrow_tok.kind != "punct" or arrow_tok.text not in _ARROWS:
            raise self.error("expected '->', '<-', or '<->'")
        self.advance()
        right = self.parse_path()
        self.expect_punct(";")
        self.connectors.append(
            Connector(id_tok.text, context, left, right, _ARROWS[arrow_tok.text])
        )
        self.positions.setdefault(f"{context}/{id_tok.text}", (id_tok.line, id_tok.column))

    def parse_path(self) -> EndpointPath:
        first = self.expect_ident("endpoint path")
        segments = [first.text]
        while True:
            tok = self.peek()
            if tok.kind == "punct" and tok.text == ".":
                self.advance()
                segments.append(self.expect_ident("path segment").text)
            else:
                break
        return EndpointPath(tuple(segments))


def parse_architecture(text: str) -> ArchitectureModel:
    """Parse and validate an architecture description.

    Raises AdlParseError on syntax errors (with line/column) and on
    well-formedness violations (duplicate names, unresolved references),
    pointing at the offending declaration where known.
    """
    parser = _Parser(_lex(text))
    parser.parse_document()
    model = ArchitectureModel(tuple(parser.components), tuple(parser.connectors))
    problems = validate_model(model)
    if problems:
        first = problems[0]
        pos = (0, 0)
        if first.element is not None:
            pos = parser.positions.get(first.element.path, (0, 0))
        raise AdlParseError(first.message, *pos)
    return model


def _multiplicity_suffix(mult: Multiplicity) -> str:
    lower, upper = mult.lower, mult.upper
    if (lower, upper) == (1, 1):
        return ""
    if (lower, upper) == (0, None):
        return " [*]"
    if upper is None:
        return f" [{lower}..*]"
    if lower == upper:
        return f" [{lower}]"
    return f" [{lower}..{upper}]"


def _connector_line(conn: Connector) -> str:
    arrow = _ARROW_TEXT[conn.direction]
    return f"connector {conn.id}: {conn.left} {arrow} {conn.right};"


def serialize_architecture(model: ArchitectureModel) -> str:
    """Canonical text for a model; parse(serialize(m)) == m."""
    lines = [HEADER]
    for comp in model.components:
        lines.append("")
        lines.append(f"component {comp.name} {{")
        for port in comp.ports:
            lines.append(f"    port {port.name};")
        for part in comp.parts:
            suffix = _multiplicity_suffix(part.multiplicity)
            lines.append(f"    part {part.role}: {part.type_component}{suffix};")
        for conn in model.connectors:
            if conn.context == comp.name:
                lines.append("    " + _connector_line(conn))
        lines.append("}")
    root = [c for c in model.connectors if c.context == ROOT_CONTEXT]
    if root:
        lines.append("")
        for conn in root:
            lines.append(_connector_line(conn))
    return "\n".join(lines) + "\n"
