"""Line-level opcode counting for textual LLVM IR.

Only ``define`` bodies are examined.  Each instruction line is reduced to its
opcode (after an optional ``%x =`` result and ``tail``-style prefixes) and
classified; vector-typed arithmetic and memory operations are promoted to
their SIMD / vector counterparts.
"""

from __future__ import annotations

import re
from collections import Counter

from opcost.cost_model import InstructionClass as IC
from opcost.parsers.base import CountVector, ParsedFile, ParsedFunction, SourceKind, decode_text

_OPCODES: dict[str, IC] = {
    "add": IC.ARITH_ADD,
    "fadd": IC.ARITH_ADD,
    "sub": IC.ARITH_SUB,
    "fsub": IC.ARITH_SUB,
    "fneg": IC.ARITH_SUB,
    "mul": IC.ARITH_MUL,
    "fmul": IC.ARITH_MUL,
    "sdiv": IC.ARITH_DIV,
    "udiv": IC.ARITH_DIV,
    "fdiv": IC.ARITH_DIV,
    "srem": IC.ARITH_DIV,
    "urem": IC.ARITH_DIV,
    "frem": IC.ARITH_DIV,
    "and": IC.LOGIC_AND,
    "or": IC.LOGIC_OR,
    "xor": IC.LOGIC_XOR,
    "shl": IC.LOGIC_SHIFT,
    "lshr": IC.LOGIC_SHIFT,
    "ashr": IC.LOGIC_SHIFT,
    "load": IC.MEM_LOAD,
    "store": IC.MEM_STORE,
    "getelementptr": IC.MEM_MOVE,
    "br": IC.BRANCH_COND,
    "switch": IC.BRANCH_COND,
    "indirectbr": IC.BRANCH_JUMP,
    "call": IC.CONTROL_CALL,
    "invoke": IC.CONTROL_CALL,
    "callbr": IC.CONTROL_CALL,
    "icmp": IC.CMP,
    "fcmp": IC.CMP,
}


def classify_llvm_opcode(opcode: str) -> IC:
    """Scalar class of an LLVM opcode; anything unrecognised is ``other``.

    ``ret``, ``phi``, ``select``, ``alloca`` and the cast family deliberately
    land in ``other``.
    """
    return _OPCODES.get(opcode, IC.OTHER)


_FLAGS = {
    "nsw", "nuw", "exact", "fast", "nnan", "ninf", "nsz", "arcp", "contract",
    "afn", "reassoc", "disjoint", "volatile", "atomic",
}
_CALL_PREFIXES = {"tail", "musttail", "notail"}
_SKIP_PREFIXES = ("!", "#", "attributes", "declare", "source_filename", "target ")
_VECTOR = re.compile(r"<\s*(\d+)\s*x\s*([\w]+)")
_TYPE_BITS = {"half": 16, "bfloat": 16, "float": 32, "double": 64, "fp128": 128, "x86_fp80": 80, "ptr": 64}
_RESULT = re.compile(r"^%[-\w.$\"]+\s*=\s*")
_LABEL = re.compile(r'^(?:[-\w.$]+|"[^"]*"):(\s|$)')
_DEFINE_NAME = re.compile(r'@("(?:[^"\\]|\\.)*"|[-\w.$]+)\s*\(')
_CALLEE = re.compile(r'@("(?:[^"\\]|\\.)*"|[-\w.$]+)')


def _vector_bits(type_token: str) -> int | None:
    m = _VECTOR.match(type_token)
    if not m:
        return None
    lanes, elem = int(m.group(1)), m.group(2)
    if elem.startswith("i") and elem[1:].isdigit():
        bits = int(elem[1:])
    else:
        bits = _TYPE_BITS.get(elem, 32)
    return lanes * bits


def _operand_type(rest: str) -> str:
    """First operand type after skipping instruction flags."""
    words = rest.split()
    for i, w in enumerate(words):
        if w in _FLAGS:
            continue
        return " ".join(words[i:])
    return ""


def classify_llvm_line(instruction: str) -> IC | None:
    """Class of one instruction line (already stripped of comments).

    Returns None for lines that carry no countable instruction, such as
    debug-info intrinsic calls.
    """
    body = _RESULT.sub("", instruction, count=1).strip()
    if not body:
        return None
    opcode, _, rest = body.partition(" ")
    while opcode in _CALL_PREFIXES:
        opcode, _, rest = rest.strip().partition(" ")
    cls = classify_llvm_opcode(opcode)

    if cls in (IC.CONTROL_CALL,):
        m = _CALLEE.search(rest)
        callee = m.group(1).strip('"') if m else ""
        if callee.startswith("llvm.dbg.") or callee.startswith("llvm.lifetime."):
            return None
        if callee.startswith(("llvm.fma.", "llvm.fmuladd.")):
            return IC.SIMD_FMA
        return cls

    if cls in (IC.ARITH_ADD, IC.ARITH_SUB, IC.ARITH_MUL, IC.MEM_LOAD, IC.MEM_STORE):
        bits = _vector_bits(_operand_type(rest))
        if bits is None:
            return cls
        if cls is IC.MEM_LOAD:
            return IC.VEC_LOAD
        if cls is IC.MEM_STORE:
            return IC.VEC_STORE
        if cls is IC.ARITH_MUL:
            return IC.SIMD_MUL_WIDE if bits >= 256 else IC.SIMD_MUL
        if opcode == "add":
            return IC.SIMD_ADD_INT
        return IC.SIMD_ADD
    return cls


def _strip_comment(line: str) -> str:
    # ';' starts a comment unless it sits inside a quoted string.
    in_str = False
    for i, ch in enumerate(line):
        if ch == '"':
            in_str = not in_str
        elif ch == ";" and not in_str:
            return line[:i]
    return line


def parse_llvm_ir(text: str | bytes, path: str = "<string>") -> ParsedFile:
    text = decode_text(text, path)
    functions: list[ParsedFunction] = []
    name = None
    start = 0
    counts: Counter[IC] = Counter()
    in_header = False
    bracket_depth = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if name is None:
            if line.startswith("define"):
                m = _DEFINE_NAME.search(line)
                name = m.group(1).strip('"') if m else f"<anonymous@{lineno}>"
                start = lineno
                counts = Counter()
                in_header = not line.endswith("{")
            continue
        if in_header:
            in_header = not line.endswith("{")
            continue
        if line == "}":
            functions.append(ParsedFunction(name, CountVector(counts), (start, lineno)))
            name = None
            continue
        if bracket_depth:
            # Continuation of a multi-line switch / indirectbr target list.
            bracket_depth += line.count("[") - line.count("]")
            continue
        if line.startswith(_SKIP_PREFIXES) or _LABEL.match(line):
            continue
        if line.startswith(("to label", "unwind", "cleanup", "catch ", "filter ")):
            continue
        cls = classify_llvm_line(line)
        if cls is not None:
            counts[cls] += 1
        bracket_depth = max(line.count("[") - line.count("]"), 0)

    if name is not None:
        # Unterminated body: keep what was counted so far.
        last = max(start, len(text.splitlines()))
        functions.append(ParsedFunction(name, CountVector(counts), (start, last)))
    return ParsedFile(path, SourceKind.LLVM_IR, tuple(functions))
