"""Recursive discovery of analysable source files."""

from __future__ import annotations

import logging
import os
import re
from functools import lru_cache
from pathlib import Path
from typing import Iterable

from opcost.parsers.base import EXTENSIONS, SourceKind

log = logging.getLogger(__name__)


@lru_cache(maxsize=256)
def glob_to_regex(pattern: str) -> re.Pattern[str]:
    """Compile a ``/``-separated glob: ``*`` and ``?`` stop at ``/``, ``**`` does not."""
    i, n = 0, len(pattern)
    out = []
    while i < n:
        if pattern.startswith("**/", i):
            out.append("(?:.*/)?")
            i += 3
        elif pattern.startswith("/**", i) and i + 3 == n:
            out.append("(?:/.*)?")
            i += 3
        elif pattern.startswith("**", i):
            out.append(".*")
            i += 2
        elif pattern[i] == "*":
            out.append("[^/]*")
            i += 1
        elif pattern[i] == "?":
            out.append("[^/]")
            i += 1
        else:
            out.append(re.escape(pattern[i]))
            i += 1
    return re.compile("".join(out) + r"\Z")


def glob_match(pattern: str, rel_path: str) -> bool:
    """Match a relative posix path; patterns without ``/`` match the basename."""
    if "/" not in pattern:
        return bool(glob_to_regex(pattern).match(rel_path.rsplit("/", 1)[-1]))
    return bool(glob_to_regex(pattern.lstrip("/")).match(rel_path))


def source_kind(path: str | os.PathLike) -> SourceKind | None:
    return EXTENSIONS.get(Path(path).suffix.lower())


def discover(
    root: str | os.PathLike,
    include_globs: Iterable[str] = (),
    exclude_globs: Iterable[str] = (),
    warnings: list[str] | None = None,
) -> list[tuple[Path, SourceKind]]:
    """Known-extension files under ``root`` in lexicographic relative-path order.

    Unreadable directories are skipped with a warning, appended to
    ``warnings`` when given.
    """
    root = Path(root)
    if not root.exists():
        raise FileNotFoundError(f"{root}: no such file or directory")
    includes, excludes = list(include_globs), list(exclude_globs)

    def wanted(rel: str) -> bool:
        if includes and not any(glob_match(p, rel) for p in includes):
            return False
        return not any(glob_match(p, rel) for p in excludes)

    if root.is_file():
        kind = source_kind(root)
        return [(root, kind)] if kind is not None and wanted(root.name) else []

    def on_error(err: OSError) -> None:
        msg = f"cannot read directory {err.filename}: {err.strerror}"
        log.warning(msg)
        if warnings is not None:
            warnings.append(msg)

    found: list[tuple[str, Path, SourceKind]] = []
    for dirpath, dirnames, filenames in os.walk(root, onerror=on_error):
        dirnames.sort()
        for name in filenames:
            kind = source_kind(name)
            if kind is None:
                continue
            full = Path(dirpath) / name
            rel = full.relative_to(root).as_posix()
            if wanted(rel):
                found.append((rel, full, kind))
    found.sort(key=lambda item: item[0])
    return [(full, kind) for _, full, kind in found]
