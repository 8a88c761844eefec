"""Architectural refactoring: operations, plans, lookup, impact reports.

Operations are pure model transformations; the source code is never touched.
Every operation either returns a new model that validates, or raises
PreconditionError and leaves the input untouched, so plans are atomic by
construction. The ImpactReport tells the developer which annotations (by
location) reference each architecture element a step created, deleted, or
re-homed; rewriting the code stays a manual task.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Mapping, Union

from .annotations import (
    AnnotationInstance,
    AnnotationKind,
    CodeModel,
    CONNECTION_KINDS,
    syntactic_refs,
)
from .conformance import (
    connection_instances,
    matches_connector,
    resolve_connection,
    side_context,
)
from .errors import (
    EndpointError,
    PlanError,
    PlanParseError,
    PreconditionError,
    UnknownConnectorError,
)
from .model import (
    ArchitectureModel,
    Component,
    Connector,
    Direction,
    ElementRef,
    EndpointPath,
    Part,
    Port,
    RefKind,
    ROOT_CONTEXT,
    canonical_triple,
    is_identifier,
    normalize_connector,
    parse_ref,
    resolve_endpoint,
    validate_model,
)


@dataclass(frozen=True)
class AddPort:
    component: str
    port: str


@dataclass(frozen=True)
class RemovePort:
    component: str
    port: str


@dataclass(frozen=True)
class AddConnector:
    id: str
    context: str
    left: EndpointPath
    right: EndpointPath
    direction: Direction


@dataclass(frozen=True)
class RemoveConnector:
    id: str


@dataclass(frozen=True)
class SplitComponent:
    target: str
    name_a: str
    name_b: str
    partition: Mapping[str, str]  # part role / port name -> name_a | name_b


@dataclass(frozen=True)
class RenameElement:
    ref: ElementRef
    new_name: str


@dataclass(frozen=True)
class MovePart:
    role: str
    from_component: str
    to_component: str


RefactoringOp = Union[
    AddPort, RemovePort, AddConnector, RemoveConnector, SplitComponent, RenameElement, MovePart
]

_OP_NAMES: dict[type, str] = {
    AddPort: "add-port",
    RemovePort: "remove-port",
    AddConnector: "add-connector",
    RemoveConnector: "remove-connector",
    SplitComponent: "split-component",
    RenameElement: "rename-element",
    MovePart: "move-part",
}


def op_name(op: RefactoringOp) -> str:
    return _OP_NAMES[type(op)]


def op_text(op: RefactoringOp) -> str:
    """The plan-file spelling of an operation."""
    if isinstance(op, AddPort):
        return f"add-port({op.component}, {op.port})"
    if isinstance(op, RemovePort):
        return f"remove-port({op.component}, {op.port})"
    if isinstance(op, AddConnector):
        context = op.context if op.context else "/"
        return (
            f"add-connector({op.id}, {context}, {op.left}, {op.right}, {op.direction.value})"
        )
    if isinstance(op, RemoveConnector):
        return f"remove-connector({op.id})"
    if isinstance(op, SplitComponent):
        pairs = ", ".join(f"{k}={v}" for k, v in sorted(op.partition.items()))
        head = f"split-component({op.target}, {op.name_a}, {op.name_b}"
        return f"{head}, {pairs})" if pairs else f"{head})"
    if isinstance(op, RenameElement):
        return f"rename-element({op.ref.path}, {op.new_name})"
    return f"move-part({op.role}, {op.from_component}, {op.to_component})"


def _fail(op: RefactoringOp, reason: str, ref: ElementRef | None = None) -> PreconditionError:
    return PreconditionError(op_name(op), reason, ref)


def _require_component(model: ArchitectureModel, name: str, op: RefactoringOp) -> Component:
    comp = model.component(name)
    if comp is None:
        raise _fail(op, f"unknown component '{name}'", ElementRef.component(name))
    return comp


def _swap_component(model: ArchitectureModel, comp: Component) -> tuple[Component, ...]:
    return tuple(comp if c.name == comp.name else c for c in model.components)


def _apply_add_port(model: ArchitectureModel, op: AddPort):
    comp = _require_component(model, op.component, op)
    ref = ElementRef.port(op.component, op.port)
    if not is_identifier(op.port):
        raise _fail(op, f"invalid port name '{op.port}'")
    if comp.port(op.port) is not None:
        raise _fail(op, f"port '{op.port}' already exists in '{op.component}'", ref)
    new_comp = replace(comp, ports=comp.ports + (Port(op.port),))
    return (replace(model, components=_swap_component(model, new_comp)), {ref})


def _apply_remove_port(model: ArchitectureModel, op: RemovePort):
    comp = _require_component(model, op.component, op)
    ref = ElementRef.port(op.component, op.port)
    if comp.port(op.port) is None:
        raise _fail(op, f"no port '{op.port}' in '{op.component}'", ref)
    for conn in model.connectors:
        for endpoint in (conn.left, conn.right):
            try:
                resolved = resolve_endpoint(model, conn.context, endpoint)
            except EndpointError:
                continue
            if resolved == ref:
                raise _fail(
                    op,
                    f"connector '{conn.id}' is attached to port '{ref.path}'",
                    ElementRef.connector(conn.context, conn.id),
                )
    new_comp = replace(comp, ports=tuple(p for p in comp.ports if p.name != op.port))
    return (replace(model, components=_swap_component(model, new_comp)), {ref})


def _apply_add_connector(model: ArchitectureModel, op: AddConnector):
    if not is_identifier(op.id):
        raise _fail(op, f"invalid connector id '{op.id}'")
    if model.connector_by_id(op.id) is not None:
        raise _fail(op, f"connector id '{op.id}' already exists")
    if op.context != ROOT_CONTEXT:
        _require_component(model, op.context, op)
    sides = []
    for endpoint in (op.left, op.right):
        try:
            sides.append(resolve_endpoint(model, op.context, endpoint))
        except EndpointError as err:
            raise _fail(op, str(err)) from err
    if sides[0].path == sides[1].path:
        raise _fail(op, f"both endpoints resolve to '{sides[0].path}'")
    nl, nr, nd = normalize_connector(sides[0], sides[1], op.direction)
    for conn in model.connectors:
        if conn.context != op.context:
            continue
        try:
            if canonical_triple(model, conn) == (nl.path, nr.path, nd):
                raise _fail(op, f"connector '{conn.id}' already declares this connection")
        except EndpointError:
            continue
    new_conn = Connector(op.id, op.context, op.left, op.right, op.direction)
    ref = ElementRef.connector(op.context, op.id)
    return (replace(model, connectors=model.connectors + (new_conn,)), {ref})


def _apply_remove_connector(model: ArchitectureModel, op: RemoveConnector):
    conn = model.connector_by_id(op.id)
    if conn is None:
        raise _fail(op, f"no connector with id '{op.id}'")
    ref = ElementRef.connector(conn.context, conn.id)
    remaining = tuple(c for c in model.connectors if c.id != op.id)
    return (replace(model, connectors=remaining), {ref})


def _rewrite_paths(model: ArchitectureModel, rewrite) -> tuple[Connector, ...]:
    """Rewrite every connector endpoint segment via rewrite(owner, segment, kind).

    owner is the component the segment resolves in ("" for a root path's
    first, component-naming segment); kind is component|part|port. Segments
    that stop resolving are kept verbatim for validation to report.
    """
    out: list[Connector] = []
    for conn in model.connectors:
        new_paths = []
        for path in (conn.left, conn.right):
            segments = list(path.segments)
            rewritten: list[str] = []
            if conn.context == ROOT_CONTEXT:
                rewritten.append(rewrite("", segments[0], "component"))
                current = model.component(segments[0])
                rest = segments[1:]
            else:
                current = model.component(conn.context)
                rest = segments
            for index, segment in enumerate(rest):
                if current is None:
                    rewritten.extend(rest[index:])
                    break
                part = current.part(segment)
                if part is not None:
                    rewritten.append(rewrite(current.name, segment, "part"))
                    current = model.component(part.type_component)
                else:
                    rewritten.append(rewrite(current.name, segment, "port"))
                    current = None
            new_paths.append(EndpointPath(tuple(rewritten)))
        out.append(replace(conn, left=new_paths[0], right=new_paths[1]))
    return tuple(out)


def _apply_rename(model: ArchitectureModel, op: RenameElement):
    if not is_identifier(op.new_name):
        raise _fail(op, f"invalid name '{op.new_name}'")
    kind = op.ref.kind
    if kind is RefKind.COMPONENT:
        return _rename_component(model, op)
    if kind is RefKind.PART:
        return _rename_part(model, op)
    if kind is RefKind.PORT:
        return _rename_port(model, op)
    return _rename_connector(model, op)


def _rename_component(model: ArchitectureModel, op: RenameElement):
    old = op.ref.path
    new = op.new_name
    comp = _require_component(model, old, op)
    if model.component(new) is not None:
        raise _fail(op, f"component '{new}' already exists", ElementRef.component(new))

    def rewrite(owner: str, segment: str, kind: str) -> str:
        if kind == "component" and segment == old:
            return new
        return segment

    connectors = _rewrite_paths(model, rewrite)
    connectors = tuple(
        replace(c, context=new) if c.context == old else c for c in connectors
    )
    components = []
    for c in model.components:
        parts = tuple(
            replace(p, type_component=new) if p.type_component == old else p for p in c.parts
        )
        name = new if c.name == old else c.name
        components.append(replace(c, name=name, parts=parts))

    touched = {ElementRef.component(old), ElementRef.component(new)}
    for port in comp.ports:
        touched.add(ElementRef.port(old, port.name))
        touched.add(ElementRef.port(new, port.name))
    for part in comp.parts:
        touched.add(ElementRef.part(old, part.role))
        touched.add(ElementRef.part(new, part.role))
    for conn in model.connectors:
        if conn.context == old:
            touched.add(ElementRef.connector(old, conn.id))
            touched.add(ElementRef.connector(new, conn.id))
    return (ArchitectureModel(tuple(components), connectors), touched)


def _rename_part(model: ArchitectureModel, op: RenameElement):
    owner_name, role = op.ref.split()
    comp = _require_component(model, owner_name, op)
    part = comp.part(role)
    if part is None:
        raise _fail(op, f"no part '{role}' in '{owner_name}'", op.ref)
    if comp.part(op.new_name) is not None:
        raise _fail(op, f"part '{op.new_name}' already exists in '{owner_name}'")

    def rewrite(owner: str, segment: str, kind: str) -> str:
        if kind == "part" and owner == owner_name and segment == role:
            return op.new_name
        return segment

    connectors = _rewrite_paths(model, rewrite)
    new_comp = replace(
        comp,
        parts=tuple(replace(p, role=op.new_name) if p.role == role else p for p in comp.parts),
    )
    new_model = ArchitectureModel(_swap_component(model, new_comp), connectors)
    return (new_model, {op.ref, ElementRef.part(owner_name, op.new_name)})


def _rename_port(model: ArchitectureModel, op: RenameElement):
    owner_name, port_name = op.ref.split()
    comp = _require_component(model, owner_name, op)
    if comp.port(port_name) is None:
        raise _fail(op, f"no port '{port_name}' in '{owner_name}'", op.ref)
    if comp.port(op.new_name) is not None:
        raise _fail(op, f"port '{op.new_name}' already exists in '{owner_name}'")

    def rewrite(owner: str, segment: str, kind: str) -> str:
        if kind == "port" and owner == owner_name and segment == port_name:
            return op.new_name
        return segment

    connectors = _rewrite_paths(model, rewrite)
    new_comp = replace(
        comp,
        ports=tuple(Port(op.new_name) if p.name == port_name else p for p in comp.ports),
    )
    new_model = ArchitectureModel(_swap_component(model, new_comp), connectors)
    return (new_model, {op.ref, ElementRef.port(owner_name, op.new_name)})


def _rename_connector(model: ArchitectureModel, op: RenameElement):
    context, cid = op.ref.split()
    conn = next(
        (c for c in model.connectors if c.context == context and c.id == cid), None
    )
    if conn is None:
        raise _fail(op, f"no connector '{op.ref.path}'", op.ref)
    if model.connector_by_id(op.new_name) is not None:
        raise _fail(op, f"connector id '{op.new_name}' already exists")
    connectors = tuple(
        replace(c, id=op.new_name) if c is conn else c for c in model.connectors
    )
    new_model = replace(model, connectors=connectors)
    return (new_model, {op.ref, ElementRef.connector(context, op.new_name)})


def _apply_move_part(model: ArchitectureModel, op: MovePart):
    source = _require_component(model, op.from_component, op)
    target = _require_component(model, op.to_component, op)
    part = source.part(op.role)
    old_ref = ElementRef.part(op.from_component, op.role)
    if part is None:
        raise _fail(op, f"no part '{op.role}' in '{op.from_component}'", old_ref)
    if target.part(op.role) is not None:
        raise _fail(op, f"part '{op.role}' already exists in '{op.to_component}'")
    new_source = replace(source, parts=tuple(p for p in source.parts if p.role != op.role))
    new_target = replace(target, parts=target.parts + (part,))
    components = tuple(
        new_source if c.name == op.from_component else new_target if c.name == op.to_component else c
        for c in model.components
    )
    new_ref = ElementRef.part(op.to_component, op.role)
    return (replace(model, components=components), {old_ref, new_ref})


def _apply_split(model: ArchitectureModel, op: SplitComponent):
    target = _require_component(model, op.target, op)
    if op.name_a == op.name_b:
        raise _fail(op, "the two new component names must differ")
    for name in (op.name_a, op.name_b):
        if not is_identifier(name):
            raise _fail(op, f"invalid component name '{name}'")
        if model.component(name) is not None:
            raise _fail(op, f"component '{name}' already exists", ElementRef.component(name))

    members = {p.role for p in target.parts} | {p.name for p in target.ports}
    side_of = dict(op.partition)
    if set(side_of) != members:
        missing = sorted(members - set(side_of))
        extra = sorted(set(side_of) - members)
        detail = []
        if missing:
            detail.append(f"unassigned: {', '.join(missing)}")
        if extra:
            detail.append(f"not members: {', '.join(extra)}")
        raise _fail(op, "partition must cover exactly the target's parts and ports"
                    + (f" ({'; '.join(detail)})" if detail else ""))
    bad = sorted(v for v in set(side_of.values()) if v not in (op.name_a, op.name_b))
    if bad:
        raise _fail(op, f"partition sides must be '{op.name_a}' or '{op.name_b}', not {', '.join(bad)}")

    touched: set[ElementRef] = {
        ElementRef.component(op.target),
        ElementRef.component(op.name_a),
        ElementRef.component(op.name_b),
    }
    for port in target.ports:
        touched.add(ElementRef.port(op.target, port.name))
        touched.add(ElementRef.port(side_of[port.name], port.name))
    for part in target.parts:
        touched.add(ElementRef.part(op.target, part.role))
        touched.add(ElementRef.part(side_of[part.role], part.role))

    new_a = Component(
        op.name_a,
        ports=tuple(p for p in target.ports if side_of[p.name] == op.name_a),
        parts=tuple(p for p in target.parts if side_of[p.role] == op.name_a),
    )
    new_b = Component(
        op.name_b,
        ports=tuple(p for p in target.ports if side_of[p.name] == op.name_b),
        parts=tuple(p for p in target.parts if side_of[p.role] == op.name_b),
    )

    # Replace every target-typed part anywhere with one part per half.
    holders: list[tuple[str, str]] = []  # (owner component, original role)
    components: list[Component] = []
    for comp in [c for c in model.components if c.name != op.target] + [new_a, new_b]:
        if not any(p.type_component == op.target for p in comp.parts):
            components.append(comp)
            continue
        kept = [p for p in comp.parts if p.type_component != op.target]
        names_in_use = {p.role for p in kept}
        new_parts = list(kept)
        for part in comp.parts:
            if part.type_component != op.target:
                continue
            holders.append((comp.name, part.role))
            touched.add(ElementRef.part(comp.name, part.role))
            for side in (op.name_a, op.name_b):
                role = f"{part.role}_{side}"
                if role in names_in_use:
                    raise _fail(
                        op,
                        f"replacement part role '{role}' collides in component '{comp.name}'",
                        ElementRef.part(comp.name, role),
                    )
                names_in_use.add(role)
                new_parts.append(Part(role, side, part.multiplicity))
                touched.add(ElementRef.part(comp.name, role))
        components.append(replace(comp, parts=tuple(new_parts)))

    target_was_top = model.is_top_level(op.target)

    def rewrite_path(context: str, path: EndpointPath, conn_id: str) -> EndpointPath:
        segments = list(path.segments)
        out: list[str] = []
        if context == ROOT_CONTEXT:
            first = segments[0]
            if first == op.target:
                follow = segments[1] if len(segments) > 1 else None
                if follow is None or follow not in side_of:
                    return path
                out.append(side_of[follow])
                current: Component | None = target
                rest = segments[1:]
            else:
                out.append(first)
                current = model.component(first)
                rest = segments[1:]
        else:
            current = model.component(context)
            rest = segments
        for index, segment in enumerate(rest):
            final = index == len(rest) - 1
            if current is None:
                out.extend(rest[index:])
                break
            part = current.part(segment)
            if part is not None and part.type_component == op.target:
                if final:
                    raise _fail(
                        op,
                        f"connector '{conn_id}' endpoint ends at part "
                        f"'{current.name}.{segment}' of the split component",
                        ElementRef.part(current.name, segment),
                    )
                follow = rest[index + 1]
                if follow not in side_of:
                    out.extend(rest[index:])
                    break
                out.append(f"{segment}_{side_of[follow]}")
                current = target
                continue
            out.append(segment)
            current = model.component(part.type_component) if part is not None else None
        return EndpointPath(tuple(out))

    connectors: list[Connector] = []
    for conn in model.connectors:
        old_ref = ElementRef.connector(conn.context, conn.id)
        if conn.context == op.target:
            side_left = side_of.get(conn.left.segments[0])
            side_right = side_of.get(conn.right.segments[0])
            if side_left is None or side_right is None:
                # dangling endpoint in the input model; keep for validation
                connectors.append(conn)
                continue
            touched.add(old_ref)
            if side_left == side_right:
                connectors.append(replace(conn, context=side_left))
                touched.add(ElementRef.connector(side_left, conn.id))
            elif target_was_top:
                left = EndpointPath((side_left,) + conn.left.segments)
                right = EndpointPath((side_right,) + conn.right.segments)
                connectors.append(Connector(conn.id, ROOT_CONTEXT, left, right, conn.direction))
                touched.add(ElementRef.connector(ROOT_CONTEXT, conn.id))
            else:
                for owner, role in holders:
                    cid = conn.id if len(holders) == 1 else f"{conn.id}_{role}"
                    left = EndpointPath((f"{role}_{side_left}",) + conn.left.segments)
                    right = EndpointPath((f"{role}_{side_right}",) + conn.right.segments)
                    connectors.append(Connector(cid, owner, left, right, conn.direction))
                    touched.add(ElementRef.connector(owner, cid))
        else:
            left = rewrite_path(conn.context, conn.left, conn.id)
            right = rewrite_path(conn.context, conn.right, conn.id)
            if left != conn.left or right != conn.right:
                touched.add(old_ref)
            connectors.append(replace(conn, left=left, right=right))

    new_model = ArchitectureModel(tuple(components), tuple(connectors))
    return (new_model, touched)


_HANDLERS = {
    AddPort: _apply_add_port,
    RemovePort: _apply_remove_port,
    AddConnector: _apply_add_connector,
    RemoveConnector: _apply_remove_connector,
    RenameElement: _apply_rename,
    MovePart: _apply_move_part,
    SplitComponent: _apply_split,
}


def apply_op(
    model: ArchitectureModel, op: RefactoringOp
) -> tuple[ArchitectureModel, frozenset[ElementRef]]:
    """Apply one operation; atomic (the input model is never mutated).

    The result always validates: an operation that would leave dangling
    references (e.g. MovePart breaking an endpoint path) fails instead.
    """
    new_model, touched = _HANDLERS[type(op)](model, op)
    problems = validate_model(new_model)
    if problems:
        raise _fail(op, f"resulting model is not well-formed: {problems[0].message}",
                    problems[0].element)
    return (new_model, frozenset(touched))


@dataclass(frozen=True)
class RefactoringPlan:
    name: str
    ops: tuple[RefactoringOp, ...]


@dataclass(frozen=True)
class ImpactEntry:
    step: int
    op: RefactoringOp
    touched: tuple[ElementRef, ...]
    instances: Mapping[ElementRef, tuple[AnnotationInstance, ...]]


@dataclass(frozen=True)
class ImpactReport:
    plan_name: str
    entries: tuple[ImpactEntry, ...]


def apply_plan(
    model: ArchitectureModel, plan: RefactoringPlan, code: CodeModel
) -> tuple[ArchitectureModel, ImpactReport]:
    """Apply ops in order; the first failure raises PlanError (nothing kept).

    Each impact entry runs the annotation lookup against the pre-step model,
    the architecture in which the touched names still have their old meaning.
    """
    current = model
    entries: list[ImpactEntry] = []
    for step, op in enumerate(plan.ops, start=1):
        try:
            new_model, touched = apply_op(current, op)
        except PreconditionError as err:
            raise PlanError(step, err) from err
        refs = tuple(sorted(touched, key=lambda r: r.sort_key()))
        impact = {ref: tuple(lookup(code, ref, current)) for ref in refs}
        entries.append(ImpactEntry(step, op, refs, impact))
        current = new_model
    return (current, ImpactReport(plan.name, tuple(entries)))


# ---------------------------------------------------------------------------
# annotation lookup


def endpoint_traversal(
    arch: ArchitectureModel, context: str, path: str
) -> set[ElementRef]:
    """Every element a resolving endpoint path touches, traversed parts included."""
    refs: set[ElementRef] = set()
    ep = EndpointPath.parse(path)
    segments = ep.segments
    if context == ROOT_CONTEXT:
        comp = arch.component(segments[0])
        if comp is None or not arch.is_top_level(segments[0]) or len(segments) == 1:
            raise EndpointError(context, path, "not resolvable from the document root")
        refs.add(ElementRef.component(segments[0]))
        segments = segments[1:]
    else:
        comp = arch.component(context)
        if comp is None:
            raise EndpointError(context, path, f"unknown context component '{context}'")
    for index, segment in enumerate(segments):
        final = index == len(segments) - 1
        part = comp.part(segment)
        if part is not None:
            refs.add(ElementRef.part(comp.name, segment))
            if final:
                return refs
            nxt = arch.component(part.type_component)
            if nxt is None:
                raise EndpointError(context, path, f"undeclared type '{part.type_component}'")
            comp = nxt
            continue
        if final and comp.port(segment) is not None:
            refs.add(ElementRef.port(comp.name, segment))
            return refs
        raise EndpointError(context, path, f"no segment '{segment}' in '{comp.name}'")
    return refs


def instance_refs(
    instance: AnnotationInstance, arch: ArchitectureModel | None = None
) -> frozenset[ElementRef]:
    """Elements an instance references; exact when the architecture is given.

    With a model, connection endpoints are fully walked (every traversed part
    counts) and the instance also references each declared connector whose
    canonical triple it matches. Without one, the syntactic approximation of
    the CodeModel index is used.
    """
    if arch is None or instance.kind not in CONNECTION_KINDS:
        return syntactic_refs(instance)
    refs: set[ElementRef] = set()
    for name in instance.enclosing_components:
        refs.add(ElementRef.component(name))
    for side in ("left", "right"):
        raw = instance.attrs.get(side)
        if not raw:
            continue
        explicit = instance.attrs.get(f"{side}component")
        if explicit:
            refs.add(ElementRef.component(explicit))
        context = side_context(instance, side)
        try:
            refs.update(endpoint_traversal(arch, context, raw))
        except (EndpointError, ValueError):
            refs.update(syntactic_refs(instance))
    triple, _ = resolve_connection(arch, instance)
    if triple is not None:
        for conn in arch.connectors:
            try:
                declared = canonical_triple(arch, conn)
            except EndpointError:
                continue
            if matches_connector(triple, declared):
                refs.add(ElementRef.connector(conn.context, conn.id))
    return frozenset(refs)


def lookup(
    code: CodeModel, ref: ElementRef, arch: ArchitectureModel | None = None
) -> list[AnnotationInstance]:
    """All instances referencing ref, in location order.

    Pass the architecture to resolve connection endpoints properly; without
    it the match is purely syntactic.
    """
    return [inst for inst in code.instances if ref in instance_refs(inst, arch)]


@dataclass(frozen=True)
class ConnectorUsages:
    connects: tuple[AnnotationInstance, ...]
    disconnects: tuple[AnnotationInstance, ...]
    stores: tuple[AnnotationInstance, ...]


def connector_usages(
    code: CodeModel, ref: ElementRef, arch: ArchitectureModel
) -> ConnectorUsages:
    """Who connects, disconnects, and stores a declared connector."""
    if ref.kind is not RefKind.CONNECTOR:
        raise UnknownConnectorError(f"'{ref.path}' is not a connector reference")
    context, cid = ref.split()
    conn = next(
        (c for c in arch.connectors if c.context == context and c.id == cid), None
    )
    if conn is None:
        raise UnknownConnectorError(f"the architecture declares no connector '{ref.path}'")
    declared = canonical_triple(arch, conn)
    groups: dict[AnnotationKind, list[AnnotationInstance]] = {
        AnnotationKind.CONNECTS: [],
        AnnotationKind.DISCONNECTS: [],
        AnnotationKind.CONNECTOR: [],
    }
    for inst in connection_instances(code):
        triple, _ = resolve_connection(arch, inst)
        if triple is not None and matches_connector(triple, declared):
            groups[inst.kind].append(inst)
    return ConnectorUsages(
        tuple(groups[AnnotationKind.CONNECTS]),
        tuple(groups[AnnotationKind.DISCONNECTS]),
        tuple(groups[AnnotationKind.CONNECTOR]),
    )


# ---------------------------------------------------------------------------
# plan files

_OP_LINE_RE = re.compile(r"^([a-z][a-z-]*)\s*\((.*)\)\s*$")
_DIRECTIONS = {d.value: d for d in Direction}


def _plan_ident(arg: str, what: str, lineno: int) -> str:
    if not is_identifier(arg):
        raise PlanParseError(f"invalid {what} '{arg}'", lineno)
    return arg


def _plan_path(arg: str, lineno: int) -> EndpointPath:
    try:
        return EndpointPath.parse(arg)
    except ValueError as err:
        raise PlanParseError(str(err), lineno) from err


def _parse_op(name: str, args: list[str], lineno: int) -> RefactoringOp:
    def arity(n: int) -> None:
        if len(args) != n:
            raise PlanParseError(f"{name} takes {n} arguments, got {len(args)}", lineno)

    if name == "add-port":
        arity(2)
        return AddPort(_plan_ident(args[0], "component", lineno), _plan_ident(args[1], "port", lineno))
    if name == "remove-port":
        arity(2)
        return RemovePort(_plan_ident(args[0], "component", lineno), _plan_ident(args[1], "port", lineno))
    if name == "add-connector":
        arity(5)
        cid = _plan_ident(args[0], "connector id", lineno)
        context = ROOT_CONTEXT if args[1] == "/" else _plan_ident(args[1], "context", lineno)
        left = _plan_path(args[2], lineno)
        right = _plan_path(args[3], lineno)
        direction = _DIRECTIONS.get(args[4])
        if direction is None:
            raise PlanParseError(f"direction must be LEFT, RIGHT, or BIDIR, not '{args[4]}'", lineno)
        return AddConnector(cid, context, left, right, direction)
    if name == "remove-connector":
        arity(1)
        return RemoveConnector(_plan_ident(args[0], "connector id", lineno))
    if name == "rename-element":
        arity(2)
        try:
            ref = parse_ref(args[0])
        except ValueError as err:
            raise PlanParseError(str(err), lineno) from err
        return RenameElement(ref, _plan_ident(args[1], "name", lineno))
    if name == "move-part":
        arity(3)
        return MovePart(
            _plan_ident(args[0], "part role", lineno),
            _plan_ident(args[1], "component", lineno),
            _plan_ident(args[2], "component", lineno),
        )
    if name == "split-component":
        if len(args) < 3:
            raise PlanParseError("split-component takes target, two names, then role=Side pairs", lineno)
        target = _plan_ident(args[0], "component", lineno)
        name_a = _plan_ident(args[1], "component name", lineno)
        name_b = _plan_ident(args[2], "component name", lineno)
        partition: dict[str, str] = {}
        for pair in args[3:]:
            key, sep, value = pair.partition("=")
            if not sep:
                raise PlanParseError(f"expected role=Side, got '{pair}'", lineno)
            partition[_plan_ident(key.strip(), "member", lineno)] = _plan_ident(
                value.strip(), "side", lineno
            )
        return SplitComponent(target, name_a, name_b, partition)
    raise PlanParseError(f"unknown operation '{name}'", lineno)


def parse_plan(text: str, name: str = "plan") -> RefactoringPlan:
    """Line-oriented plan: one `op-name(arg, ...)` per line, `//` comments."""
    ops: list[RefactoringOp] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0].strip()
        if not line:
            continue
        match = _OP_LINE_RE.match(line)
        if match is None:
            raise PlanParseError("expected 'op-name(arguments)'", lineno)
        op_word, arg_text = match.group(1), match.group(2)
        args = [a.strip() for a in arg_text.split(",")] if arg_text.strip() else []
        ops.append(_parse_op(op_word, args, lineno))
    if not ops:
        raise PlanParseError("plan contains no operations")
    return RefactoringPlan(name, tuple(ops))
