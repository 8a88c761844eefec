"""Source-tree scanning: front-end dispatch, exclusion, deterministic merge.

The scan result is a pure function of (relative paths, file bytes, config):
files are processed independently (optionally on a thread pool) and merged
by sorting, so traversal order and worker count never change the output.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping
import fnmatch
import hashlib

from .annotations import (
    AnnotationInstance,
    CodeModel,
    extract_attributes,
    extract_pragmas,
    resolve_context,
    validate_targets,
)
from .errors import ConfigError
from .findings import Finding, SourceLocation, finding

_CONFIG_KEYS = frozenset(
    {
        "sigil",
        "attribute_extensions",
        "pragma_extensions",
        "exclude",
        "workers",
        "scatter_threshold",
        "smells",
    }
)


def load_config_file(path: Path) -> dict[str, str]:
    """key = value lines; `#` comments; unknown keys are errors."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise ConfigError(f"cannot read config file {path}: {err}") from err
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown config key '{key}'")
        out[key] = value.strip()
    return out


def _split_list(value: str) -> tuple[str, ...]:
    return tuple(item.strip() for item in value.split(",") if item.strip())


@dataclass(frozen=True)
class ScanConfig:
    """Which files each front-end reads.

    attribute_extensions claims files for the Java-style front-end;
    pragma_extensions claims the rest ("*" means every other file).
    """

    sigil: str = "@arch"
    attribute_extensions: tuple[str, ...] = (".java",)
    pragma_extensions: tuple[str, ...] = ("*",)
    exclude: tuple[str, ...] = ()
    workers: int = 1

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, str]) -> ScanConfig:
        cfg = cls()
        if "sigil" in mapping:
            value = mapping["sigil"]
            if not value or any(ch.isspace() for ch in value):
                raise ConfigError(f"invalid sigil {value!r}")
            cfg = _with(cfg, sigil=value)
        if "attribute_extensions" in mapping:
            cfg = _with(cfg, attribute_extensions=_normalize_exts(mapping["attribute_extensions"]))
        if "pragma_extensions" in mapping:
            cfg = _with(cfg, pragma_extensions=_normalize_exts(mapping["pragma_extensions"]))
        if "exclude" in mapping:
            cfg = _with(cfg, exclude=_split_list(mapping["exclude"]))
        if "workers" in mapping:
            try:
                workers = int(mapping["workers"])
            except ValueError as err:
                raise ConfigError(f"workers must be an integer: {mapping['workers']!r}") from err
            if workers < 1:
                raise ConfigError("workers must be >= 1")
            cfg = _with(cfg, workers=workers)
        return cfg

    def semantic_fingerprint(self) -> str:
        """Hash of everything that can change scan output (workers cannot)."""
        payload = "\x1f".join(
            (
                self.sigil,
                ",".join(self.attribute_extensions),
                ",".join(self.pragma_extensions),
                ",".join(self.exclude),
            )
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _with(cfg: ScanConfig, **changes) -> ScanConfig:
    return replace(cfg, **changes)


def _normalize_exts(value: str) -> tuple[str, ...]:
    out = []
    for item in _split_list(value):
        if item == "*":
            out.append("*")
        else:
            out.append(item if item.startswith(".") else f".{item}")
    return tuple(out)


def _front_end(config: ScanConfig, suffix: str) -> str | None:
    suffix = suffix.lower()
    if suffix in config.attribute_extensions or "*" in config.attribute_extensions:
        return "attribute"
    if suffix in config.pragma_extensions or "*" in config.pragma_extensions:
        return "pragma"
    return None


def _excluded(relpath: str, patterns: tuple[str, ...]) -> bool:
    return any(fnmatch.fnmatch(relpath, pat) for pat in patterns)


def _collect_files(roots: Iterable[Path], config: ScanConfig) -> list[tuple[str, Path]]:
    """Sorted (relative posix path, absolute path) pairs across all roots."""
    out: list[tuple[str, Path]] = []
    seen: set[str] = set()
    for root in roots:
        root = Path(root)
        if not root.is_dir():
            raise FileNotFoundError(f"source root is not a directory: {root}")
        for path in root.rglob("*"):
            if not path.is_file():
                continue
            rel = path.relative_to(root).as_posix()
            if _excluded(rel, config.exclude):
                continue
            if rel in seen:
                continue
            seen.add(rel)
            out.append((rel, path))
    out.sort(key=lambda pair: pair[0])
    return out


def _scan_file(
    rel: str, path: Path, config: ScanConfig
) -> tuple[list[AnnotationInstance], list[Finding]]:
    front_end = _front_end(config, path.suffix)
    if front_end is None:
        return ([], [])
    try:
        text = path.read_text(encoding="utf-8", errors="replace")
    except OSError as err:
        return (
            [],
            [finding("IO_ERROR", f"cannot read file: {err}", locations=[SourceLocation(rel, 0, 0)])],
        )
    if front_end == "attribute":
        instances, findings = extract_attributes(text, rel)
    else:
        instances, findings = extract_pragmas(text, rel, config.sigil)
        instances = resolve_context(instances)
    for inst in instances:
        findings.extend(validate_targets(inst))
    return (instances, findings)


def scan_tree(roots: Iterable[Path | str], config: ScanConfig | None = None) -> CodeModel:
    """Scan source roots into a CodeModel; unreadable files become IO_ERROR findings."""
    config = config or ScanConfig()
    files = _collect_files([Path(r) for r in roots], config)
    results: list[tuple[list[AnnotationInstance], list[Finding]]]
    if config.workers > 1 and len(files) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(lambda pair: _scan_file(pair[0], pair[1], config), files))
    else:
        results = [_scan_file(rel, path, config) for rel, path in files]
    instances: list[AnnotationInstance] = []
    findings: list[Finding] = []
    for file_instances, file_findings in results:
        instances.extend(file_instances)
        findings.extend(file_findings)
    return CodeModel.build(instances, findings, config.semantic_fingerprint())
