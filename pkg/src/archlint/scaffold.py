"""Generate pragma skeletons for an architecture model.

One file per component plus one for document-root connectors. The output is
meant as a starting point for annotating an unannotated codebase: scanned
as-is against the same architecture it produces no errors, only the expected
lifecycle warnings for connectors nothing disconnects yet.
"""

from __future__ import annotations

from pathlib import Path

from .model import ArchitectureModel, Component, Connector, ROOT_CONTEXT

ROOT_FILE = "toplevel.connectors.txt"


def _connects_pragma(connector: Connector, target: str) -> str:
    return (
        f'//@arch Connects(left="{connector.left}", right="{connector.right}", '
        f"type={connector.direction.value}) @on method {target}"
    )


def _component_file(component: Component, connectors: list[Connector]) -> str:
    lines = [f"// annotation skeleton for component {component.name}"]
    lines.append(f'//@arch Component("{component.name}") @on type {component.name}')
    for port in component.ports:
        lines.append(f'//@arch Port("{port.name}") @on method {port.name}')
    for part in component.parts:
        lines.append(f'//@arch Part("{part.role}") @on field {part.role}')
    for connector in connectors:
        lines.append(_connects_pragma(connector, f"wire_{connector.id}"))
    return "\n".join(lines) + "\n"


def scaffold_architecture(model: ArchitectureModel) -> dict[str, str]:
    """File name -> pragma skeleton text, one file per component.

    Connectors are emitted in their context component's file; document-root
    connectors go to their own file so the scan resolves their endpoints from
    the root.
    """
    by_context: dict[str, list[Connector]] = {}
    for connector in model.connectors:
        by_context.setdefault(connector.context, []).append(connector)
    files: dict[str, str] = {}
    for component in model.components:
        files[f"{component.name}.txt"] = _component_file(
            component, by_context.get(component.name, [])
        )
    root = by_context.get(ROOT_CONTEXT)
    if root:
        lines = ["// annotation skeleton for document-root connectors"]
        for connector in root:
            lines.append(_connects_pragma(connector, f"wire_{connector.id}"))
        files[ROOT_FILE] = "\n".join(lines) + "\n"
    return files


def write_scaffold(model: ArchitectureModel, out_dir: Path | str) -> list[Path]:
    """Write the skeleton files under out_dir; returns the paths written."""
    base = Path(out_dir)
    base.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for name, text in sorted(scaffold_architecture(model).items()):
        target = base / name
        target.write_text(text, encoding="utf-8")
        written.append(target)
    return written
