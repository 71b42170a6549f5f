"""Source parsers producing per-function instruction-class counts."""

from __future__ import annotations

import os
from pathlib import Path

from opcost.parsers.base import (
    EXTENSIONS,
    CountVector,
    ParsedFile,
    ParsedFunction,
    SourceKind,
    sum_counts,
)
from opcost.parsers.discover import discover, glob_match, source_kind
from opcost.parsers.llvm import classify_llvm_line, classify_llvm_opcode, parse_llvm_ir
from opcost.parsers.ptx import classify_ptx_opcode, parse_ptx
from opcost.parsers.python_src import classify_python_node, parse_python

_PARSERS = {
    SourceKind.LLVM_IR: parse_llvm_ir,
    SourceKind.PTX: parse_ptx,
    SourceKind.PYTHON: parse_python,
}


def parse_source(text: str | bytes, kind: SourceKind, path: str = "<string>") -> ParsedFile:
    return _PARSERS[kind](text, path)


def parse_path(path: str | os.PathLike, kind: SourceKind | None = None, display: str | None = None) -> ParsedFile:
    """Read and parse one file; ``display`` overrides the path recorded in the result."""
    kind = kind or source_kind(path)
    if kind is None:
        raise ValueError(f"{path}: unsupported file extension (expected .ll, .ptx or .py)")
    data = Path(path).read_bytes()
    return parse_source(data, kind, display or str(path))


__all__ = [
    "EXTENSIONS",
    "CountVector",
    "ParsedFile",
    "ParsedFunction",
    "SourceKind",
    "classify_llvm_line",
    "classify_llvm_opcode",
    "classify_ptx_opcode",
    "classify_python_node",
    "discover",
    "glob_match",
    "parse_llvm_ir",
    "parse_path",
    "parse_ptx",
    "parse_python",
    "parse_source",
    "source_kind",
    "sum_counts",
]
