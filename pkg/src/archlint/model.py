"""Component-and-connector architecture model.

Components own ports and role-named, typed parts; connectors wire two
endpoint paths inside a context component. All values are immutable and
normalized on construction (members sorted), so two models built from the
same declarations in any order compare equal.

A connector declared with the empty context ("" here, rendered "/id") lives
at document root: its endpoint paths start at a top-level component name.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

from .errors import EndpointError
from .findings import Finding, finding, sort_findings

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

# Context name of connectors declared at document root.
ROOT_CONTEXT = ""


def is_identifier(text: str) -> bool:
    return bool(IDENT_RE.match(text))


class Direction(enum.Enum):
    LEFT = "LEFT"
    RIGHT = "RIGHT"
    BIDIR = "BIDIR"


def flip(direction: Direction) -> Direction:
    if direction is Direction.LEFT:
        return Direction.RIGHT
    if direction is Direction.RIGHT:
        return Direction.LEFT
    return direction


@dataclass(frozen=True)
class Multiplicity:
    lower: int = 1
    upper: int | None = 1  # None = unbounded

    UNBOUNDED = None

    def is_valid(self) -> bool:
        if self.lower < 0:
            return False
        if self.upper is None:
            return True
        return self.upper >= 1 and self.lower <= self.upper


MULT_ONE = Multiplicity(1, 1)
MULT_ANY = Multiplicity(0, None)


@dataclass(frozen=True)
class Port:
    name: str


@dataclass(frozen=True)
class Part:
    role: str
    type_component: str
    multiplicity: Multiplicity = MULT_ONE


@dataclass(frozen=True)
class Component:
    name: str
    ports: tuple[Port, ...] = ()
    parts: tuple[Part, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "ports", tuple(sorted(self.ports, key=lambda p: p.name)))
        object.__setattr__(self, "parts", tuple(sorted(self.parts, key=lambda p: p.role)))

    @cached_property
    def _port_map(self) -> Mapping[str, Port]:
        return {p.name: p for p in self.ports}

    @cached_property
    def _part_map(self) -> Mapping[str, Part]:
        return {p.role: p for p in self.parts}

    def port(self, name: str) -> Port | None:
        return self._port_map.get(name)

    def part(self, role: str) -> Part | None:
        return self._part_map.get(role)


@dataclass(frozen=True)
class EndpointPath:
    segments: tuple[str, ...]

    def __str__(self) -> str:
        return ".".join(self.segments)

    @classmethod
    def parse(cls, text: str) -> EndpointPath:
        segments = text.split(".")
        if not text or any(not is_identifier(s) for s in segments):
            raise ValueError(f"invalid endpoint path '{text}'")
        return cls(tuple(segments))


@dataclass(frozen=True)
class Connector:
    id: str
    context: str
    left: EndpointPath
    right: EndpointPath
    direction: Direction


class RefKind(enum.Enum):
    COMPONENT = "component"
    PART = "part"
    PORT = "port"
    CONNECTOR = "connector"


@dataclass(frozen=True)
class ElementRef:
    """Uniform address of an architecture element.

    Path shapes: component `Car`, part `Car.rear`, port `Engine#p`,
    connector `Car/c1` (root connectors render as `/c1`).
    """

    kind: RefKind
    path: str

    def __str__(self) -> str:
        return self.path

    def sort_key(self) -> tuple[str, str]:
        return (self.path, self.kind.value)

    @classmethod
    def component(cls, name: str) -> ElementRef:
        return cls(RefKind.COMPONENT, name)

    @classmethod
    def part(cls, owner: str, role: str) -> ElementRef:
        return cls(RefKind.PART, f"{owner}.{role}")

    @classmethod
    def port(cls, owner: str, name: str) -> ElementRef:
        return cls(RefKind.PORT, f"{owner}#{name}")

    @classmethod
    def connector(cls, context: str, cid: str) -> ElementRef:
        return cls(RefKind.CONNECTOR, f"{context}/{cid}")

    def split(self) -> tuple[str, str]:
        """Owner/member pair for PART, PORT, CONNECTOR refs."""
        if self.kind is RefKind.PART:
            owner, _, member = self.path.rpartition(".")
        elif self.kind is RefKind.PORT:
            owner, _, member = self.path.partition("#")
        elif self.kind is RefKind.CONNECTOR:
            owner, _, member = self.path.partition("/")
        else:
            return (self.path, "")
        return (owner, member)


def parse_ref(text: str) -> ElementRef:
    """Parse the textual ref shapes accepted on the command line and in plans."""
    if "/" in text:
        context, _, cid = text.partition("/")
        if (context and not is_identifier(context)) or not is_identifier(cid):
            raise ValueError(f"invalid connector reference '{text}'")
        return ElementRef.connector(context, cid)
    if "#" in text:
        owner, _, port = text.partition("#")
        if not is_identifier(owner) or not is_identifier(port):
            raise ValueError(f"invalid port reference '{text}'")
        return ElementRef.port(owner, port)
    if "." in text:
        owner, _, role = text.partition(".")
        if not is_identifier(owner) or not is_identifier(role):
            raise ValueError(f"invalid part reference '{text}'")
        return ElementRef.part(owner, role)
    if not is_identifier(text):
        raise ValueError(f"invalid component reference '{text}'")
    return ElementRef.component(text)


@dataclass(frozen=True)
class ArchitectureModel:
    components: tuple[Component, ...] = ()
    connectors: tuple[Connector, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "components", tuple(sorted(self.components, key=lambda c: c.name))
        )
        object.__setattr__(
            self, "connectors", tuple(sorted(self.connectors, key=lambda c: (c.context, c.id)))
        )

    @cached_property
    def _component_map(self) -> Mapping[str, Component]:
        out: dict[str, Component] = {}
        for comp in self.components:
            out.setdefault(comp.name, comp)
        return out

    @cached_property
    def _part_type_uses(self) -> frozenset[str]:
        return frozenset(p.type_component for c in self.components for p in c.parts)

    def component(self, name: str) -> Component | None:
        return self._component_map.get(name)

    def connector_by_id(self, cid: str) -> Connector | None:
        for conn in self.connectors:
            if conn.id == cid:
                return conn
        return None

    def is_top_level(self, name: str) -> bool:
        """A component is top-level when no part anywhere is typed by it."""
        return name in self._component_map and name not in self._part_type_uses

    def top_level_components(self) -> tuple[Component, ...]:
        return tuple(c for c in self.components if c.name not in self._part_type_uses)


def resolve_endpoint(
    model: ArchitectureModel, context: str, path: EndpointPath | str
) -> ElementRef:
    """Walk a dotted endpoint path from a context component to a part or port.

    Each non-final segment must be a part role (descending into its type);
    the final segment is a part role or a port name. Part roles shadow port
    names. In the root context the first segment selects a top-level
    component instead.
    """
    ep = EndpointPath.parse(path) if isinstance(path, str) else path
    segments = ep.segments
    if context == ROOT_CONTEXT:
        first = segments[0]
        comp = model.component(first)
        if comp is None or not model.is_top_level(first):
            raise EndpointError(context, str(ep), f"'{first}' is not a top-level component")
        if len(segments) == 1:
            raise EndpointError(context, str(ep), "path ends at a component, not a part or port")
        segments = segments[1:]
    else:
        comp = model.component(context)
        if comp is None:
            raise EndpointError(context, str(ep), f"unknown context component '{context}'")

    for index, segment in enumerate(segments):
        final = index == len(segments) - 1
        part = comp.part(segment)
        if part is not None:
            if final:
                return ElementRef.part(comp.name, segment)
            nxt = model.component(part.type_component)
            if nxt is None:
                raise EndpointError(
                    context, str(ep), f"part '{segment}' has undeclared type '{part.type_component}'"
                )
            comp = nxt
            continue
        if final and comp.port(segment) is not None:
            return ElementRef.port(comp.name, segment)
        what = "port or part" if final else "part"
        raise EndpointError(context, str(ep), f"no {what} '{segment}' in component '{comp.name}'")


def normalize_connector(
    left: ElementRef, right: ElementRef, direction: Direction
) -> tuple[ElementRef, ElementRef, Direction]:
    """Canonical endpoint order: lexicographic by path; swapping flips LEFT/RIGHT."""
    if right.path < left.path:
        return (right, left, flip(direction))
    if right.path == left.path and direction is Direction.RIGHT:
        return (left, right, Direction.LEFT)
    return (left, right, direction)


def canonical_triple(
    model: ArchitectureModel, connector: Connector
) -> tuple[str, str, Direction]:
    """Resolve and normalize a declared connector; raises EndpointError."""
    left = resolve_endpoint(model, connector.context, connector.left)
    right = resolve_endpoint(model, connector.context, connector.right)
    nl, nr, nd = normalize_connector(left, right, connector.direction)
    return (nl.path, nr.path, nd)


def list_elements(model: ArchitectureModel) -> set[ElementRef]:
    refs: set[ElementRef] = set()
    for comp in model.components:
        refs.add(ElementRef.component(comp.name))
        for port in comp.ports:
            refs.add(ElementRef.port(comp.name, port.name))
        for part in comp.parts:
            refs.add(ElementRef.part(comp.name, part.role))
    for conn in model.connectors:
        refs.add(ElementRef.connector(conn.context, conn.id))
    return refs


def validate_model(model: ArchitectureModel) -> list[Finding]:
    """Well-formedness gate: empty result means every invariant holds."""
    findings: list[Finding] = []
    seen_components: set[str] = set()
    for comp in model.components:
        cref = ElementRef.component(comp.name)
        if comp.name in seen_components:
            findings.append(
                finding("DUPLICATE_COMPONENT", f"component '{comp.name}' declared more than once", cref)
            )
        seen_components.add(comp.name)

        seen_ports: set[str] = set()
        for port in comp.ports:
            if port.name in seen_ports:
                findings.append(
                    finding(
                        "DUPLICATE_PORT",
                        f"port '{port.name}' declared more than once in '{comp.name}'",
                        ElementRef.port(comp.name, port.name),
                    )
                )
            seen_ports.add(port.name)

        seen_roles: set[str] = set()
        for part in comp.parts:
            pref = ElementRef.part(comp.name, part.role)
            if part.role in seen_roles:
                findings.append(
                    finding(
                        "DUPLICATE_PART_ROLE",
                        f"part role '{part.role}' declared more than once in '{comp.name}'",
                        pref,
                    )
                )
            seen_roles.add(part.role)
            if not part.multiplicity.is_valid():
                findings.append(
                    finding(
                        "BAD_MULTIPLICITY",
                        f"part '{comp.name}.{part.role}' has invalid multiplicity "
                        f"{part.multiplicity.lower}..{part.multiplicity.upper}",
                        pref,
                    )
                )
            if model.component(part.type_component) is None:
                findings.append(
                    finding(
                        "UNRESOLVED_PART_TYPE",
                        f"part '{comp.name}.{part.role}' has undeclared type '{part.type_component}'",
                        pref,
                    )
                )

    seen_ids: set[str] = set()
    seen_triples: set[tuple[str, str, str, Direction]] = set()
    for conn in model.connectors:
        kref = ElementRef.connector(conn.context, conn.id)
        if conn.id in seen_ids:
            findings.append(
                finding("DUPLICATE_CONNECTOR_ID", f"connector id '{conn.id}' declared more than once", kref)
            )
        seen_ids.add(conn.id)

        if conn.context != ROOT_CONTEXT and model.component(conn.context) is None:
            findings.append(
                finding(
                    "UNKNOWN_CONTEXT",
                    f"connector '{conn.id}' declared in unknown component '{conn.context}'",
                    kref,
                )
            )
            continue

        sides: list[ElementRef] = []
        for ep in (conn.left, conn.right):
            try:
                sides.append(resolve_endpoint(model, conn.context, ep))
            except EndpointError as err:
                findings.append(finding("UNRESOLVED_ENDPOINT", f"connector '{conn.id}': {err}", kref))
        if len(sides) != 2:
            continue
        left, right = sides
        if left.path == right.path:
            findings.append(
                finding(
                    "SELF_CONNECTOR",
                    f"connector '{conn.id}' joins '{left.path}' to itself",
                    kref,
                )
            )
            continue
        nl, nr, nd = normalize_connector(left, right, conn.direction)
        # Same wiring in different contexts is reuse, not duplication.
        triple = (conn.context, nl.path, nr.path, nd)
        if triple in seen_triples:
            findings.append(
                finding(
                    "DUPLICATE_CONNECTOR",
                    f"connector '{conn.id}' duplicates an existing connector in the "
                    f"same context ({nl.path} / {nr.path} {nd.value})",
                    kref,
                )
            )
        seen_triples.add(triple)

    return sort_findings(findings)
