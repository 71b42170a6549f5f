"""Count vectors and parse results shared by the LLVM IR, PTX and Python parsers."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Mapping

from opcost.cost_model import InstructionClass
from opcost.errors import InvalidArgumentError, ParseError


class SourceKind(Enum):
    LLVM_IR = "LLVM_IR"
    PTX = "PTX"
    PYTHON = "PYTHON"


EXTENSIONS: dict[str, SourceKind] = {
    ".ll": SourceKind.LLVM_IR,
    ".ptx": SourceKind.PTX,
    ".py": SourceKind.PYTHON,
}


class CountVector:
    """Per-class instruction counts, plus memory-space hints for loads/stores.

    ``spaces`` maps ``(class, space)`` to how many of that class's
    instructions carried the space qualifier (PTX ``global``, ``shared`` ...).
    Hinted instructions are a subset of ``counts[class]``.
    """

    __slots__ = ("_counts", "_spaces")

    def __init__(
        self,
        counts: Mapping[InstructionClass, int] | None = None,
        spaces: Mapping[tuple[InstructionClass, str], int] | None = None,
    ):
        self._counts: Counter[InstructionClass] = Counter()
        self._spaces: Counter[tuple[InstructionClass, str]] = Counter()
        for cls, n in (counts or {}).items():
            self._add(cls, n)
        for (cls, space), n in (spaces or {}).items():
            if n < 0:
                raise InvalidArgumentError(f"negative space-hint count for {cls.value}/{space}")
            if n:
                self._spaces[(cls, space)] += int(n)
        for cls in {c for c, _ in self._spaces}:
            hinted = sum(n for (c, _), n in self._spaces.items() if c is cls)
            if hinted > self._counts[cls]:
                raise InvalidArgumentError(f"{hinted} space hints exceed {self._counts[cls]} {cls.value} instructions")

    def _add(self, cls: InstructionClass, n: int) -> None:
        if not isinstance(cls, InstructionClass):
            raise InvalidArgumentError(f"not an instruction class: {cls!r}")
        if isinstance(n, bool) or int(n) != n or n < 0:
            raise InvalidArgumentError(f"count for {cls.value} must be a non-negative integer, got {n!r}")
        if n:
            self._counts[cls] += int(n)

    @classmethod
    def of(cls, *classes: InstructionClass) -> "CountVector":
        return cls(Counter(classes))

    @classmethod
    def from_dict(cls, data: Mapping[str, int], spaces: Mapping[str, int] | None = None) -> "CountVector":
        """Build from ``{"arith_add": 2}`` and optional ``{"mem_load/global": 1}``."""
        counts = {InstructionClass.parse(k): v for k, v in data.items()}
        hints = {}
        for key, v in (spaces or {}).items():
            name, _, space = key.partition("/")
            hints[(InstructionClass.parse(name), space)] = v
        return cls(counts, hints)

    def __getitem__(self, cls: InstructionClass) -> int:
        return self._counts.get(cls, 0)

    def __iter__(self) -> Iterator[InstructionClass]:
        return (k for k in InstructionClass if self._counts.get(k))

    def items(self) -> Iterator[tuple[InstructionClass, int]]:
        return ((k, self._counts[k]) for k in self)

    @property
    def spaces(self) -> Mapping[tuple[InstructionClass, str], int]:
        return dict(self._spaces)

    def total(self) -> int:
        return sum(self._counts.values())

    def __add__(self, other: "CountVector") -> "CountVector":
        out = CountVector()
        out._counts = self._counts + other._counts
        out._spaces = self._spaces + other._spaces
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CountVector):
            return NotImplemented
        return +self._counts == +other._counts and +self._spaces == +other._spaces

    def __repr__(self) -> str:
        body = ", ".join(f"{k.value}: {n}" for k, n in self.items())
        return f"CountVector({{{body}}})"

    def to_dict(self) -> dict[str, int]:
        return {k.value: n for k, n in self.items()}

    def spaces_to_dict(self) -> dict[str, int]:
        return {f"{k.value}/{s}": n for (k, s), n in sorted(self._spaces.items(), key=lambda kv: (kv[0][0].value, kv[0][1]))}


def sum_counts(vectors: Iterable[CountVector]) -> CountVector:
    total = CountVector()
    for v in vectors:
        total = total + v
    return total


@dataclass(frozen=True)
class ParsedFunction:
    name: str
    counts: CountVector
    line_span: tuple[int, int]

    def __post_init__(self) -> None:
        start, end = self.line_span
        if start < 1 or start > end:
            raise InvalidArgumentError(f"bad line span {self.line_span} for {self.name}")


@dataclass(frozen=True)
class ParsedFile:
    path: str
    kind: SourceKind
    functions: tuple[ParsedFunction, ...] = ()
    toplevel_counts: CountVector = field(default_factory=CountVector)

    @property
    def file_counts(self) -> CountVector:
        return self.toplevel_counts + sum_counts(f.counts for f in self.functions)


def decode_text(text: str | bytes, path: str | None = None) -> str:
    if isinstance(text, bytes):
        try:
            return text.decode("utf-8")
        except UnicodeDecodeError as exc:
            line = text[: exc.start].count(b"\n") + 1
            raise ParseError(f"text is not valid UTF-8 ({exc.reason})", path, line) from None
    return text
