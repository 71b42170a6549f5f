"""Statement-level opcode counting for PTX assembly.

PTX statements end with ``;`` and may share a line; kernel bodies are the
brace blocks following ``.entry`` / ``.func`` headers (nested scoping blocks
are allowed).  Directives and labels carry no instructions.  Loads and
stores record their state-space qualifier as a tier hint.
"""

from __future__ import annotations

import re
from collections import Counter

from opcost.cost_model import InstructionClass as IC
from opcost.parsers.base import CountVector, ParsedFile, ParsedFunction, SourceKind, decode_text

_ROOTS: dict[str, IC] = {
    "add": IC.ARITH_ADD,
    "addc": IC.ARITH_ADD,
    "sub": IC.ARITH_SUB,
    "subc": IC.ARITH_SUB,
    "neg": IC.ARITH_SUB,
    "mul": IC.ARITH_MUL,
    "mul24": IC.ARITH_MUL,
    "div": IC.ARITH_DIV,
    "rem": IC.ARITH_DIV,
    "rcp": IC.ARITH_DIV,
    "mad": IC.SIMD_FMA,
    "mad24": IC.SIMD_FMA,
    "madc": IC.SIMD_FMA,
    "fma": IC.SIMD_FMA,
    "and": IC.LOGIC_AND,
    "or": IC.LOGIC_OR,
    "xor": IC.LOGIC_XOR,
    "not": IC.LOGIC_XOR,
    "shl": IC.LOGIC_SHIFT,
    "shr": IC.LOGIC_SHIFT,
    "setp": IC.CMP,
    "set": IC.CMP,
    "min": IC.CMP,
    "max": IC.CMP,
    "ld": IC.MEM_LOAD,
    "ldu": IC.MEM_LOAD,
    "tex": IC.MEM_LOAD,
    "st": IC.MEM_STORE,
    "atom": IC.MEM_STORE,
    "red": IC.MEM_STORE,
    "mov": IC.MEM_MOVE,
    "bra": IC.BRANCH_JUMP,
    "brx": IC.BRANCH_JUMP,
    "call": IC.CONTROL_CALL,
}

SPACES = ("global", "shared", "const", "local", "param")
_VECTOR_MODS = {"v2", "v4", "v8"}

_COMMENTS = re.compile(r"//[^\n]*|/\*.*?\*/", re.S)
_LEADING_LABEL = re.compile(r"^\s*[$%\w.]+\s*:(?!:)\s*")
_FUNC_NAME = re.compile(r"\.(?:entry|func)\s+(?:\([^)]*\)\s*)?([$%\w.]+)")


def classify_ptx_opcode(opcode: str, predicated: bool = False) -> tuple[IC, str | None]:
    """Class and state-space hint for a dotted PTX opcode such as ``ld.global.f32``.

    A predicated ``bra`` is a conditional branch.
    """
    root, *mods = opcode.split(".")
    cls = _ROOTS.get(root, IC.OTHER)
    if cls is IC.BRANCH_JUMP and predicated:
        cls = IC.BRANCH_COND
    space = None
    if cls in (IC.MEM_LOAD, IC.MEM_STORE) and root not in ("tex",):
        space = next((m for m in mods if m in SPACES), None)
        if _VECTOR_MODS.intersection(mods):
            cls = IC.VEC_LOAD if cls is IC.MEM_LOAD else IC.VEC_STORE
    return cls, space


def _blank_comments(text: str) -> str:
    # Keep newlines so line numbers survive comment removal.
    return _COMMENTS.sub(lambda m: re.sub(r"[^\n]", " ", m.group(0)), text)


def parse_ptx(text: str | bytes, path: str = "<string>") -> ParsedFile:
    text = _blank_comments(decode_text(text, path))
    functions: list[ParsedFunction] = []

    buf: list[str] = []
    buf_line = 1
    line = 1
    depth = 0
    current: str | None = None
    start = 0
    counts: Counter[IC] = Counter()
    spaces: Counter[tuple[IC, str]] = Counter()

    def flush() -> str:
        nonlocal buf
        stmt = "".join(buf)
        buf = []
        return stmt

    operand_braces = 0
    for ch in text:
        if ch == "\n":
            line += 1
        # Braces inside a statement group vector operands: {%f1, %f2}.
        if ch == "{" and depth > 0 and _strip_labels("".join(buf)):
            operand_braces += 1
            buf.append(ch)
            continue
        if ch == "}" and operand_braces:
            operand_braces -= 1
            buf.append(ch)
            continue
        if ch not in "{};":
            if not buf and ch.isspace():
                continue
            if not buf:
                buf_line = line
            buf.append(ch)
            continue

        stmt = flush()
        if ch == "{":
            if depth == 0:
                m = _FUNC_NAME.search(stmt)
                if m:
                    current = m.group(1)
                    start = buf_line if stmt.strip() else line
                    counts, spaces = Counter(), Counter()
                else:
                    current = None
            elif current is not None:
                _count(stmt, counts, spaces)
            depth += 1
        elif ch == "}":
            if current is not None:
                _count(stmt, counts, spaces)
            depth = max(depth - 1, 0)
            if depth == 0 and current is not None:
                functions.append(ParsedFunction(current, CountVector(counts, spaces), (start, line)))
                current = None
        elif depth > 0 and current is not None:
            _count(stmt, counts, spaces)
    return ParsedFile(path, SourceKind.PTX, tuple(functions))


def _strip_labels(stmt: str) -> str:
    stmt = stmt.strip()
    while True:
        stripped = _LEADING_LABEL.sub("", stmt, count=1).strip()
        if stripped == stmt:
            return stmt
        stmt = stripped


def _count(stmt: str, counts: Counter, spaces: Counter) -> None:
    stmt = _strip_labels(stmt)
    if not stmt or stmt.startswith("."):
        return
    predicated = False
    if stmt.startswith("@"):
        predicated = True
        _, _, stmt = stmt.partition(" ")
        stmt = stmt.strip()
    opcode = stmt.split(None, 1)[0] if stmt else ""
    if not opcode:
        return
    cls, space = classify_ptx_opcode(opcode, predicated)
    counts[cls] += 1
    if space is not None:
        spaces[(cls, space)] += 1
