"""Annotation extraction: the source side of conformance checking.

Two front-ends produce the same AnnotationInstance shape:

* the pragma front-end reads language-agnostic comment pragmas,
  `//@arch Component("Car") @on type Car`, one per line;
* the attribute front-end reads Java-style annotations immediately
  preceding a declaration, classifying the declaration heuristically.

Extraction never raises on bad input; problems become findings
(MALFORMED_PRAGMA, MALFORMED_ANNOTATION, UNCLASSIFIABLE_TARGET) and the
offending annotation is dropped.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, replace
from functools import cached_property
from pathlib import PurePosixPath
from typing import Iterable, Mapping

from .findings import Finding, SourceLocation, finding, sort_findings
from .model import ElementRef

__all__ = [
    "AnnotationKind",
    "TargetKind",
    "AnnotationInstance",
    "CodeModel",
    "extract_pragmas",
    "extract_attributes",
    "resolve_context",
    "validate_targets",
    "syntactic_refs",
    "dump_code_model",
    "ALLOWED_TARGETS",
    "VALUE_REQUIRED",
    "CONNECTION_KINDS",
]


class AnnotationKind(enum.Enum):
    COMPONENT = "Component"
    PART = "Part"
    PORT = "Port"
    ADD_PART = "AddPart"
    REMOVE_PART = "RemovePart"
    CONNECTS = "Connects"
    DISCONNECTS = "Disconnects"
    CONNECTOR = "Connector"


class TargetKind(enum.Enum):
    TYPE = "type"
    FIELD = "field"
    METHOD = "method"
    CONSTRUCTOR = "constructor"
    LOCAL = "local"


ANNOTATION_NAMES: Mapping[str, AnnotationKind] = {k.value: k for k in AnnotationKind}

ALLOWED_TARGETS: Mapping[AnnotationKind, frozenset[TargetKind]] = {
    AnnotationKind.COMPONENT: frozenset({TargetKind.TYPE}),
    AnnotationKind.PART: frozenset({TargetKind.FIELD}),
    AnnotationKind.PORT: frozenset({TargetKind.METHOD, TargetKind.CONSTRUCTOR, TargetKind.TYPE}),
    AnnotationKind.ADD_PART: frozenset({TargetKind.METHOD, TargetKind.CONSTRUCTOR}),
    AnnotationKind.REMOVE_PART: frozenset({TargetKind.METHOD, TargetKind.CONSTRUCTOR}),
    AnnotationKind.CONNECTS: frozenset({TargetKind.METHOD, TargetKind.CONSTRUCTOR}),
    AnnotationKind.DISCONNECTS: frozenset({TargetKind.METHOD, TargetKind.CONSTRUCTOR}),
    AnnotationKind.CONNECTOR: frozenset({TargetKind.TYPE, TargetKind.FIELD, TargetKind.LOCAL}),
}

VALUE_REQUIRED = frozenset(
    {
        AnnotationKind.COMPONENT,
        AnnotationKind.PART,
        AnnotationKind.PORT,
        AnnotationKind.ADD_PART,
        AnnotationKind.REMOVE_PART,
    }
)

CONNECTION_KINDS = frozenset(
    {AnnotationKind.CONNECTS, AnnotationKind.DISCONNECTS, AnnotationKind.CONNECTOR}
)

_ALLOWED_ATTRS: Mapping[AnnotationKind, frozenset[str]] = {
    AnnotationKind.COMPONENT: frozenset(),
    AnnotationKind.PART: frozenset(),
    AnnotationKind.PORT: frozenset(),
    AnnotationKind.ADD_PART: frozenset({"componentname"}),
    AnnotationKind.REMOVE_PART: frozenset({"componentname"}),
    AnnotationKind.CONNECTS: frozenset({"left", "right", "leftcomponent", "rightcomponent", "type"}),
    AnnotationKind.DISCONNECTS: frozenset(
        {"left", "right", "leftcomponent", "rightcomponent", "type"}
    ),
    AnnotationKind.CONNECTOR: frozenset(
        {"left", "right", "leftcomponent", "rightcomponent", "type"}
    ),
}

_DIRECTIONS = frozenset({"LEFT", "RIGHT", "BIDIR"})


@dataclass(frozen=True)
class AnnotationInstance:
    kind: AnnotationKind
    values: tuple[str, ...]
    attrs: Mapping[str, str]
    target: TargetKind
    target_name: str
    enclosing_components: tuple[str, ...]
    location: SourceLocation
    package: str

    def sort_key(self) -> tuple[str, int, int]:
        return self.location.sort_key()


def validate_targets(instance: AnnotationInstance) -> list[Finding]:
    """One TARGET_RULE_VIOLATION iff the (kind, target) pair is not permitted."""
    if instance.target in ALLOWED_TARGETS[instance.kind]:
        return []
    allowed = ", ".join(sorted(t.value for t in ALLOWED_TARGETS[instance.kind]))
    return [
        finding(
            "TARGET_RULE_VIOLATION",
            f"@{instance.kind.value} does not apply to {instance.target.value} targets "
            f"(allowed: {allowed})",
            locations=[instance.location],
        )
    ]


# ---------------------------------------------------------------------------
# shared token machinery for pragma lines and annotation argument lists


@dataclass(frozen=True)
class _Tok:
    kind: str  # ident | string | char | number | punct | eof
    value: str
    line: int
    column: int


class _ArgProblem(Exception):
    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message


def _unescape(body: str) -> str:
    out: list[str] = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\" and i + 1 < len(body):
            out.append(body[i + 1])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _is_ident_start(ch: str) -> bool:
    return ("a" <= ch <= "z") or ("A" <= ch <= "Z") or ch in "_$"


def _is_ident_char(ch: str) -> bool:
    return _is_ident_start(ch) or ("0" <= ch <= "9")


def _tokenize_line(text: str, line: int, col_offset: int) -> list[_Tok]:
    """Tokens of a pragma tail; raises _ArgProblem on an unlexable character."""
    tokens: list[_Tok] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        col = col_offset + i
        if ch in " \t\r":
            i += 1
            continue
        if ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                j += 2 if text[j] == "\\" else 1
            if j >= n:
                raise _ArgProblem("unterminated string")
            tokens.append(_Tok("string", _unescape(text[i + 1 : j]), line, col))
            i = j + 1
            continue
        if _is_ident_start(ch):
            j = i
            while j < n and _is_ident_char(text[j]):
                j += 1
            tokens.append(_Tok("ident", text[i:j], line, col))
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "."):
                j += 1
            tokens.append(_Tok("number", text[i:j], line, col))
            i = j
            continue
        if ch in "(){}@=,.":
            tokens.append(_Tok("punct", ch, line, col))
            i += 1
            continue
        raise _ArgProblem(f"unexpected character {ch!r}")
    tokens.append(_Tok("eof", "", line, col_offset + n))
    return tokens


class _Cursor:
    def __init__(self, tokens: list[_Tok]) -> None:
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Tok:
        return self.tokens[self.pos]

    def advance(self) -> _Tok:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at_punct(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.value == value

    def expect_punct(self, value: str) -> None:
        if not self.at_punct(value):
            raise _ArgProblem(f"expected '{value}'")
        self.advance()

    def expect_ident(self, what: str) -> str:
        tok = self.peek()
        if tok.kind != "ident":
            raise _ArgProblem(f"expected {what}")
        self.advance()
        return tok.value


def _parse_string_array(cursor: _Cursor) -> tuple[str, ...]:
    cursor.expect_punct("{")
    items: list[str] = []
    if cursor.at_punct("}"):
        cursor.advance()
        return ()
    while True:
        tok = cursor.peek()
        if tok.kind != "string":
            raise _ArgProblem("array elements must be quoted strings")
        items.append(cursor.advance().value)
        if cursor.at_punct(","):
            cursor.advance()
            continue
        cursor.expect_punct("}")
        return tuple(items)


def _parse_token_path(cursor: _Cursor) -> str:
    parts = [cursor.expect_ident("a value")]
    while cursor.at_punct("."):
        cursor.advance()
        parts.append(cursor.expect_ident("a path segment"))
    return ".".join(parts)


def _normalize_direction(raw: str) -> str:
    tail = raw.split(".")[-1]
    if tail not in _DIRECTIONS:
        raise _ArgProblem(f"direction must be LEFT, RIGHT, or BIDIR, not '{raw}'")
    return tail


def _parse_args(cursor: _Cursor, kind: AnnotationKind) -> tuple[tuple[str, ...], dict[str, str]]:
    """Argument list between parentheses: positional value, then named attrs."""
    cursor.expect_punct("(")
    values: tuple[str, ...] | None = None
    attrs: dict[str, str] = {}
    if cursor.at_punct(")"):
        cursor.advance()
        return ((), attrs)
    while True:
        tok = cursor.peek()
        if tok.kind == "string" or (tok.kind == "punct" and tok.value == "{"):
            if values is not None or attrs:
                raise _ArgProblem("positional value must be the first argument")
            if tok.kind == "string":
                values = (cursor.advance().value,)
            else:
                values = _parse_string_array(cursor)
        elif tok.kind == "ident":
            key = cursor.advance().value
            cursor.expect_punct("=")
            if key == "value":
                if values is not None:
                    raise _ArgProblem("duplicate value argument")
                if cursor.peek().kind == "string":
                    values = (cursor.advance().value,)
                else:
                    values = _parse_string_array(cursor)
            elif key == "type":
                if key not in _ALLOWED_ATTRS[kind]:
                    raise _ArgProblem(f"@{kind.value} does not take attribute '{key}'")
                if cursor.peek().kind == "string":
                    attrs[key] = _normalize_direction(cursor.advance().value)
                else:
                    attrs[key] = _normalize_direction(_parse_token_path(cursor))
            else:
                if key not in _ALLOWED_ATTRS[kind]:
                    raise _ArgProblem(f"@{kind.value} does not take attribute '{key}'")
                if key in attrs:
                    raise _ArgProblem(f"duplicate attribute '{key}'")
                if cursor.peek().kind != "string":
                    raise _ArgProblem(f"attribute '{key}' must be a quoted string")
                attrs[key] = cursor.advance().value
        else:
            raise _ArgProblem("expected a value or attribute")
        if cursor.at_punct(","):
            cursor.advance()
            continue
        cursor.expect_punct(")")
        return (values or (), attrs)


def _finish_instance(
    kind: AnnotationKind,
    values: tuple[str, ...],
    attrs: dict[str, str],
    target: TargetKind,
    target_name: str,
    enclosing: tuple[str, ...],
    location: SourceLocation,
    package: str,
) -> AnnotationInstance:
    """Construction-time invariants; raises _ArgProblem when violated."""
    if kind in VALUE_REQUIRED and not values:
        raise _ArgProblem(f"@{kind.value} requires at least one value")
    if kind in CONNECTION_KINDS:
        missing = [k for k in ("left", "right") if k not in attrs]
        if missing:
            raise _ArgProblem(f"@{kind.value} requires attributes: {', '.join(missing)}")
    return AnnotationInstance(
        kind, values, dict(attrs), target, target_name, enclosing, location, package
    )


# ---------------------------------------------------------------------------
# pragma front-end

_TARGET_WORDS: Mapping[str, TargetKind] = {t.value: t for t in TargetKind}


def _default_package(path: str) -> str:
    parent = PurePosixPath(path.replace("\\", "/")).parent.as_posix()
    return "" if parent == "." else parent


def _parse_pragma_tail(
    tail: str, location: SourceLocation, package: str
) -> AnnotationInstance:
    """Parse everything after the sigil; raises _ArgProblem on any deviation."""
    tokens = _tokenize_line(tail, location.line, location.column)
    cursor = _Cursor(tokens)
    name = cursor.expect_ident("an annotation name")
    kind = ANNOTATION_NAMES.get(name)
    if kind is None:
        raise _ArgProblem(f"unknown annotation '{name}'")
    values, attrs = _parse_args(cursor, kind)
    cursor.expect_punct("@")
    if cursor.expect_ident("'on'") != "on":
        raise _ArgProblem("expected '@on'")
    target_word = cursor.expect_ident("a target kind")
    target = _TARGET_WORDS.get(target_word)
    if target is None:
        raise _ArgProblem(f"unknown target kind '{target_word}'")
    target_name = ""
    if cursor.peek().kind == "ident":
        target_name = cursor.advance().value
    enclosing: tuple[str, ...] = ()
    if cursor.at_punct("@"):
        cursor.advance()
        if cursor.expect_ident("'in'") != "in":
            raise _ArgProblem("expected '@in'")
        names = [cursor.expect_ident("a component name")]
        while cursor.at_punct(","):
            cursor.advance()
            names.append(cursor.expect_ident("a component name"))
        enclosing = tuple(names)
    if cursor.peek().kind != "eof":
        raise _ArgProblem(f"unexpected trailing input '{cursor.peek().value}'")
    return _finish_instance(kind, values, attrs, target, target_name, enclosing, location, package)


def extract_pragmas(
    file_text: str, path: str, sigil: str = "@arch"
) -> tuple[list[AnnotationInstance], list[Finding]]:
    """One instance per well-formed pragma line; malformed lines become findings.

    A pragma line is optional whitespace and comment punctuation, the sigil,
    then `Name(args) @on kind [name] [@in Component,...]`. Lines not starting
    with the sigil are ignored. Context resolution is a separate pass
    (resolve_context); only explicit `@in` fills enclosing_components here.
    """
    package = _default_package(path)
    instances: list[AnnotationInstance] = []
    findings: list[Finding] = []
    for lineno, line in enumerate(file_text.splitlines(), start=1):
        stripped = line.lstrip(" \t/#;*'\"!<%->")
        if not stripped.startswith(sigil):
            continue
        rest = stripped[len(sigil) :]
        if rest and _is_ident_char(rest[0]):
            continue  # longer word sharing the sigil prefix, not a pragma
        column = line.index(sigil) + 1
        location = SourceLocation(path, lineno, column)
        try:
            instances.append(_parse_pragma_tail(rest, location, package))
        except _ArgProblem as problem:
            findings.append(
                finding("MALFORMED_PRAGMA", problem.message, locations=[location])
            )
    return instances, findings


def resolve_context(instances: Iterable[AnnotationInstance]) -> list[AnnotationInstance]:
    """Fill empty enclosing_components from the nearest preceding TYPE-targeted
    COMPONENT instance in file order; explicit contexts are left untouched."""
    ordered = sorted(instances, key=lambda i: i.sort_key())
    current: tuple[str, ...] = ()
    out: list[AnnotationInstance] = []
    for inst in ordered:
        if inst.kind is AnnotationKind.COMPONENT:
            if inst.target is TargetKind.TYPE:
                current = inst.values
            out.append(inst)
            continue
        if not inst.enclosing_components and current:
            inst = replace(inst, enclosing_components=current)
        out.append(inst)
    return out


# ---------------------------------------------------------------------------
# attribute front-end (Java-style sources)

_MODIFIERS = frozenset(
    {
        "public",
        "private",
        "protected",
        "static",
        "final",
        "abstract",
        "default",
        "native",
        "synchronized",
        "transient",
        "volatile",
        "strictfp",
        "sealed",
    }
)

_TYPE_KEYWORDS = frozenset({"class", "interface", "enum", "record"})


def _java_tokens(text: str) -> list[_Tok]:
    tokens: list[_Tok] = []
    line = 1
    col = 1
    i = 0
    n = len(text)

    def bump(count: int) -> None:
        nonlocal line, col, i
        for _ in range(count):
            if text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            bump(1)
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                bump(1)
            continue
        if text.startswith("/*", i):
            end = text.find("*/", i + 2)
            end = n if end == -1 else end + 2
            bump(end - i)
            continue
        start_line, start_col = line, col
        if ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                j += 2 if text[j] == "\\" else 1
            j = min(j + 1, n)
            tokens.append(_Tok("string", _unescape(text[i + 1 : j - 1]), start_line, start_col))
            bump(j - i)
            continue
        if ch == "'":
            j = i + 1
            while j < n and text[j] != "'":
                j += 2 if text[j] == "\\" else 1
            j = min(j + 1, n)
            tokens.append(_Tok("char", text[i:j], start_line, start_col))
            bump(j - i)
            continue
        if _is_ident_start(ch):
            j = i
            while j < n and _is_ident_char(text[j]):
                j += 1
            tokens.append(_Tok("ident", text[i:j], start_line, start_col))
            bump(j - i)
            continue
        if ch.isdigit():
            j = i
            while j < n and (text[j].isalnum() or text[j] in "._"):
                j += 1
            tokens.append(_Tok("number", text[i:j], start_line, start_col))
            bump(j - i)
            continue
        tokens.append(_Tok("punct", ch, start_line, start_col))
        bump(1)
    tokens.append(_Tok("eof", "", line, col))
    return tokens


@dataclass
class _PendingAnnotation:
    kind: AnnotationKind
    values: tuple[str, ...]
    attrs: dict[str, str]
    location: SourceLocation


def _detect_package(tokens: list[_Tok], path: str) -> str:
    if tokens and tokens[0].kind == "ident" and tokens[0].value == "package":
        parts: list[str] = []
        for tok in tokens[1:]:
            if tok.kind == "ident":
                parts.append(tok.value)
            elif tok.kind == "punct" and tok.value == ".":
                continue
            else:
                break
        if parts:
            return "/".join(parts)
    return _default_package(path)


def _classify_member(
    tokens: list[_Tok], start: int, type_stack: list[tuple[str, int]], depth: int
) -> tuple[TargetKind, str] | None:
    """Decide what declaration begins at tokens[start].

    First decisive token wins: `(` makes it a method (constructor when the
    name matches the innermost type); `=` or `;` makes it a field, or a local
    variable when we are below the innermost type's body depth.
    """
    last_ident: str | None = None
    j = start
    while j < len(tokens):
        tok = tokens[j]
        if tok.kind == "ident":
            last_ident = tok.value
        elif tok.kind == "punct":
            if tok.value == "(":
                if last_ident is None:
                    return None
                inner = type_stack[-1][0] if type_stack else None
                if last_ident == inner:
                    return (TargetKind.CONSTRUCTOR, last_ident)
                return (TargetKind.METHOD, last_ident)
            if tok.value in ("=", ";"):
                if last_ident is None:
                    return None
                inside_body = bool(type_stack) and depth > type_stack[-1][1]
                return (TargetKind.LOCAL if inside_body else TargetKind.FIELD, last_ident)
            if tok.value in ("{", "}", "@"):
                return None
        elif tok.kind == "eof":
            return None
        j += 1
    return None


def extract_attributes(
    file_text: str, path: str
) -> tuple[list[AnnotationInstance], list[Finding]]:
    """Extract Java-style annotations with heuristic target classification.

    Annotations accumulate across modifiers until a declaration starts; the
    declaration fixes target kind and name for the whole group. Brace depth
    tracks enclosing types, and @Component bodies define the enclosing
    component context for everything inside them. Annotation names outside
    the recognized eight are ignored.
    """
    tokens = _java_tokens(file_text)
    package = _detect_package(tokens, path)
    instances: list[AnnotationInstance] = []
    findings: list[Finding] = []

    depth = 0
    type_stack: list[tuple[str, int]] = []  # (type name, body depth)
    comp_stack: list[tuple[tuple[str, ...], int]] = []  # (component values, body depth)
    pending: list[_PendingAnnotation] = []
    pending_type: str | None = None
    pending_comp_values: tuple[str, ...] | None = None

    def drop_pending(reason: str) -> None:
        nonlocal pending
        if pending:
            names = ", ".join(f"@{p.kind.value}" for p in pending)
            findings.append(
                finding(
                    "UNCLASSIFIABLE_TARGET",
                    f"cannot classify the declaration for {names}: {reason}",
                    locations=[pending[0].location],
                )
            )
            pending = []

    def context_values() -> tuple[str, ...]:
        return comp_stack[-1][0] if comp_stack else ()

    def emit(target: TargetKind, target_name: str) -> None:
        nonlocal pending
        group_component = tuple(
            v for p in pending if p.kind is AnnotationKind.COMPONENT for v in p.values
        )
        for p in pending:
            if p.kind is AnnotationKind.COMPONENT:
                enclosing: tuple[str, ...] = ()
            elif target is TargetKind.TYPE and group_component:
                enclosing = group_component
            else:
                enclosing = context_values()
            try:
                instances.append(
                    _finish_instance(
                        p.kind, p.values, p.attrs, target, target_name, enclosing, p.location, package
                    )
                )
            except _ArgProblem as problem:
                findings.append(
                    finding("MALFORMED_ANNOTATION", problem.message, locations=[p.location])
                )
        pending = []

    def begin_type(name: str) -> None:
        nonlocal pending_type, pending_comp_values
        component_values = tuple(
            v for p in pending if p.kind is AnnotationKind.COMPONENT for v in p.values
        )
        emit(TargetKind.TYPE, name)
        pending_type = name
        pending_comp_values = component_values or None

    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok.kind == "punct" and tok.value == "{":
            depth += 1
            if pending_type is not None:
                type_stack.append((pending_type, depth))
                if pending_comp_values is not None:
                    comp_stack.append((pending_comp_values, depth))
                pending_type = None
                pending_comp_values = None
            else:
                drop_pending("a block starts without a declaration")
            i += 1
            continue
        if tok.kind == "punct" and tok.value == "}":
            drop_pending("the enclosing block ends")
            while type_stack and type_stack[-1][1] == depth:
                type_stack.pop()
            while comp_stack and comp_stack[-1][1] == depth:
                comp_stack.pop()
            depth = max(0, depth - 1)
            i += 1
            continue
        if tok.kind == "punct" and tok.value == ";":
            # `class X;` style: a pending type without a body never opens a scope
            pending_type = None
            pending_comp_values = None
            i += 1
            continue
        if tok.kind == "punct" and tok.value == "@":
            nxt = tokens[i + 1] if i + 1 < len(tokens) else None
            if nxt is not None and nxt.kind == "ident" and nxt.value == "interface":
                name_tok = tokens[i + 2] if i + 2 < len(tokens) else None
                if name_tok is not None and name_tok.kind == "ident":
                    begin_type(name_tok.value)
                    i += 3
                    continue
                drop_pending("'@interface' without a name")
                i += 2
                continue
            if nxt is not None and nxt.kind == "ident":
                location = SourceLocation(path, tok.line, tok.column)
                j = i + 2
                arg_tokens: list[_Tok] | None = None
                if j < len(tokens) and tokens[j].kind == "punct" and tokens[j].value == "(":
                    nesting = 0
                    k = j
                    collected: list[_Tok] = []
                    while k < len(tokens):
                        t = tokens[k]
                        collected.append(t)
                        if t.kind == "punct" and t.value == "(":
                            nesting += 1
                        elif t.kind == "punct" and t.value == ")":
                            nesting -= 1
                            if nesting == 0:
                                break
                        k += 1
                    arg_tokens = collected
                    j = k + 1
                kind = ANNOTATION_NAMES.get(nxt.value)
                if kind is not None:
                    try:
                        if arg_tokens is None:
                            values, attrs = (), {}
                        else:
                            cursor = _Cursor(arg_tokens + [_Tok("eof", "", tok.line, tok.column)])
                            values, attrs = _parse_args(cursor, kind)
                            if cursor.peek().kind != "eof":
                                raise _ArgProblem("unexpected trailing input in arguments")
                        pending.append(_PendingAnnotation(kind, values, attrs, location))
                    except _ArgProblem as problem:
                        findings.append(
                            finding("MALFORMED_ANNOTATION", problem.message, locations=[location])
                        )
                i = j
                continue
            i += 1
            continue
        if tok.kind == "ident":
            word = tok.value
            if word in _TYPE_KEYWORDS:
                name_tok = tokens[i + 1] if i + 1 < len(tokens) else None
                if name_tok is not None and name_tok.kind == "ident":
                    begin_type(name_tok.value)
                    i += 2
                    continue
                drop_pending(f"'{word}' without a name")
                i += 1
                continue
            if word in _MODIFIERS:
                i += 1
                continue
            if pending:
                classified = _classify_member(tokens, i, type_stack, depth)
                if classified is None:
                    drop_pending("no declaration found")
                else:
                    emit(*classified)
            i += 1
            continue
        if pending:
            drop_pending("no declaration found")
        i += 1
    drop_pending("end of file")
    return instances, findings


# ---------------------------------------------------------------------------
# the lightweight architectural model


@dataclass(frozen=True)
class CodeModel:
    """All extracted instances plus extraction findings, canonically sorted."""

    instances: tuple[AnnotationInstance, ...] = ()
    findings: tuple[Finding, ...] = ()
    config_fingerprint: str = ""

    @classmethod
    def build(
        cls,
        instances: Iterable[AnnotationInstance],
        findings: Iterable[Finding] = (),
        config_fingerprint: str = "",
    ) -> CodeModel:
        ordered = tuple(sorted(instances, key=lambda x: x.sort_key()))
        return cls(ordered, tuple(sort_findings(findings)), config_fingerprint)

    @cached_property
    def by_kind(self) -> Mapping[AnnotationKind, tuple[AnnotationInstance, ...]]:
        out: dict[AnnotationKind, list[AnnotationInstance]] = {k: [] for k in AnnotationKind}
        for inst in self.instances:
            out[inst.kind].append(inst)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def by_element(self) -> Mapping[ElementRef, tuple[AnnotationInstance, ...]]:
        out: dict[ElementRef, list[AnnotationInstance]] = {}
        for inst in self.instances:
            for ref in syntactic_refs(inst):
                out.setdefault(ref, []).append(inst)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def packages_by_component(self) -> Mapping[str, frozenset[str]]:
        out: dict[str, set[str]] = {}
        for inst in self.by_kind[AnnotationKind.COMPONENT]:
            for name in inst.values:
                out.setdefault(name, set()).add(inst.package)
        return {k: frozenset(v) for k, v in out.items()}


def _side_components(instance: AnnotationInstance, side: str) -> tuple[str, ...]:
    explicit = instance.attrs.get(f"{side}component")
    if explicit is not None:
        return (explicit,)
    if instance.enclosing_components:
        return (instance.enclosing_components[0],)
    return ("",)  # root context


def syntactic_refs(instance: AnnotationInstance) -> frozenset[ElementRef]:
    """Architecture elements this instance textually references.

    Endpoint paths are interpreted without the architecture: a one-segment
    path could be a part or a port of the side's context, so both refs are
    indexed; lookup with an architecture model refines this.
    """
    refs: set[ElementRef] = set()
    for name in instance.enclosing_components:
        refs.add(ElementRef.component(name))
    kind = instance.kind
    if kind is AnnotationKind.COMPONENT:
        for value in instance.values:
            refs.add(ElementRef.component(value))
    elif kind is AnnotationKind.PART:
        for ctx in instance.enclosing_components:
            for value in instance.values:
                refs.add(ElementRef.part(ctx, value))
    elif kind is AnnotationKind.PORT:
        for ctx in instance.enclosing_components:
            for value in instance.values:
                refs.add(ElementRef.port(ctx, value))
    elif kind in (AnnotationKind.ADD_PART, AnnotationKind.REMOVE_PART):
        explicit = instance.attrs.get("componentname")
        owners = (explicit,) if explicit else instance.enclosing_components
        if explicit:
            refs.add(ElementRef.component(explicit))
        for owner in owners:
            for value in instance.values:
                refs.add(ElementRef.part(owner, value))
    else:
        for side in ("left", "right"):
            path = instance.attrs.get(side)
            if not path:
                continue
            explicit = instance.attrs.get(f"{side}component")
            if explicit:
                refs.add(ElementRef.component(explicit))
            (context,) = _side_components(instance, side)
            segments = path.split(".")
            first = segments[0]
            if context == "":
                if len(segments) > 1:
                    refs.add(ElementRef.component(first))
            elif len(segments) == 1:
                refs.add(ElementRef.part(context, first))
                refs.add(ElementRef.port(context, first))
            else:
                refs.add(ElementRef.part(context, first))
    return frozenset(refs)


def instance_payload(inst: AnnotationInstance) -> dict:
    return {
        "kind": inst.kind.name,
        "values": list(inst.values),
        "attrs": dict(sorted(inst.attrs.items())),
        "target": inst.target.value,
        "target_name": inst.target_name,
        "enclosing_components": list(inst.enclosing_components),
        "location": {
            "file": inst.location.file,
            "line": inst.location.line,
            "column": inst.location.column,
        },
        "package": inst.package,
    }


def finding_payload(f: Finding) -> dict:
    return {
        "check_id": f.check_id,
        "severity": f.severity.value,
        "message": f.message,
        "element": f.element.path if f.element is not None else None,
        "element_kind": f.element.kind.value if f.element is not None else None,
        "locations": [
            {"file": loc.file, "line": loc.line, "column": loc.column} for loc in f.locations
        ],
    }


def dump_code_model(code: CodeModel) -> str:
    """Canonical JSON dump of a CodeModel; byte-identical for equal models."""
    payload = {
        "version": "1",
        "instances": [instance_payload(i) for i in code.instances],
        "findings": [finding_payload(f) for f in code.findings],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
