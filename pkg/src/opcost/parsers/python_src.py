"""Virtual instruction counts for Python source, from its syntax tree.

Counts are static: every construct is counted once, whatever its runtime trip
count.  Function bodies are attributed to their (qualified) function; nested
functions get their own entry.  Decorators, default values and class bodies
are attributed to the enclosing scope.  Annotations are not counted.
"""

from __future__ import annotations

import ast
from collections import Counter

from opcost.cost_model import InstructionClass as IC
from opcost.errors import ParseError
from opcost.parsers.base import CountVector, ParsedFile, ParsedFunction, SourceKind, decode_text

_NODE_CLASSES: dict[str, tuple[IC, ...]] = {
    "Add": (IC.ARITH_ADD,),
    "Sub": (IC.ARITH_SUB,),
    "USub": (IC.ARITH_SUB,),
    "Mult": (IC.ARITH_MUL,),
    "MatMult": (IC.ARITH_MUL,),
    "Pow": (IC.ARITH_MUL,),
    "Div": (IC.ARITH_DIV,),
    "FloorDiv": (IC.ARITH_DIV,),
    "Mod": (IC.ARITH_DIV,),
    "And": (IC.LOGIC_AND,),
    "BitAnd": (IC.LOGIC_AND,),
    "Or": (IC.LOGIC_OR,),
    "BitOr": (IC.LOGIC_OR,),
    "BitXor": (IC.LOGIC_XOR,),
    "Not": (IC.LOGIC_XOR,),
    "Invert": (IC.LOGIC_XOR,),
    "LShift": (IC.LOGIC_SHIFT,),
    "RShift": (IC.LOGIC_SHIFT,),
    "Compare": (IC.CMP,),
    "SubscriptLoad": (IC.MEM_LOAD,),
    "AttributeLoad": (IC.MEM_LOAD,),
    "Store": (IC.MEM_STORE,),
    "If": (IC.BRANCH_COND,),
    "IfExp": (IC.BRANCH_COND,),
    "While": (IC.BRANCH_COND,),
    "Assert": (IC.BRANCH_COND,),
    "ComprehensionIf": (IC.BRANCH_COND,),
    "For": (IC.BRANCH_COND, IC.MEM_LOAD),
    "AsyncFor": (IC.BRANCH_COND, IC.MEM_LOAD),
    "Comprehension": (IC.BRANCH_COND, IC.MEM_LOAD),
    "Call": (IC.CONTROL_CALL,),
    "Break": (IC.BRANCH_JUMP,),
    "Continue": (IC.BRANCH_JUMP,),
    "Return": (IC.OTHER,),
    "Pass": (IC.OTHER,),
}


def classify_python_node(node_kind: str) -> list[IC]:
    """Instruction classes one occurrence of ``node_kind`` contributes.

    ``node_kind`` is an ``ast`` node or operator name (``"Add"``, ``"For"``)
    or one of the context-qualified tags ``SubscriptLoad``,
    ``AttributeLoad``, ``Store``, ``Comprehension`` and ``ComprehensionIf``.
    Unlisted kinds count as ``other``.
    """
    return list(_NODE_CLASSES.get(node_kind, (IC.OTHER,)))


# Statements with no specific mapping still execute; they count as ``other``.
_OTHER_STATEMENTS = (
    ast.Raise, ast.Delete, ast.Import, ast.ImportFrom, ast.Global, ast.Nonlocal,
    ast.Try, ast.With, ast.AsyncWith,
) + ((ast.Match,) if hasattr(ast, "Match") else ()) + ((ast.TryStar,) if hasattr(ast, "TryStar") else ())
_OTHER_EXPRESSIONS = (ast.Yield, ast.YieldFrom, ast.Await)


class _Counter(ast.NodeVisitor):
    def __init__(self) -> None:
        self.toplevel: Counter[IC] = Counter()
        self.functions: list[tuple[str, Counter[IC], tuple[int, int]]] = []
        self._stack: list[Counter[IC]] = [self.toplevel]
        self._names: list[str] = []

    def _tally(self, kind: str, times: int = 1) -> None:
        for cls in classify_python_node(kind):
            self._stack[-1][cls] += times

    def _store_targets(self, target: ast.expr) -> None:
        if isinstance(target, (ast.Tuple, ast.List)):
            for elt in target.elts:
                self._store_targets(elt)
            return
        if isinstance(target, ast.Starred):
            self._store_targets(target.value)
            return
        self._tally("Store")
        self._visit_target_parts(target)

    def _visit_target_parts(self, target: ast.expr) -> None:
        # The container and index expressions of a store target are evaluated.
        if isinstance(target, ast.Subscript):
            self.visit(target.value)
            self.visit(target.slice)
        elif isinstance(target, ast.Attribute):
            self.visit(target.value)

    # scopes

    def _function(self, node: ast.FunctionDef | ast.AsyncFunctionDef) -> None:
        for dec in node.decorator_list:
            self.visit(dec)
        for default in node.args.defaults + [d for d in node.args.kw_defaults if d is not None]:
            self.visit(default)
        qualname = ".".join(self._names + [node.name])
        counts: Counter[IC] = Counter()
        self.functions.append((qualname, counts, (node.lineno, node.end_lineno or node.lineno)))
        self._stack.append(counts)
        self._names.append(node.name)
        for stmt in node.body:
            self.visit(stmt)
        self._names.pop()
        self._stack.pop()

    visit_FunctionDef = _function
    visit_AsyncFunctionDef = _function

    def visit_ClassDef(self, node: ast.ClassDef) -> None:
        for expr in node.decorator_list + node.bases + [k.value for k in node.keywords]:
            self.visit(expr)
        self._names.append(node.name)
        for stmt in node.body:
            self.visit(stmt)
        self._names.pop()

    def visit_Lambda(self, node: ast.Lambda) -> None:
        for default in node.args.defaults + [d for d in node.args.kw_defaults if d is not None]:
            self.visit(default)
        self.visit(node.body)

    # statements

    def visit_Assign(self, node: ast.Assign) -> None:
        self.visit(node.value)
        for target in node.targets:
            self._store_targets(target)

    def visit_AnnAssign(self, node: ast.AnnAssign) -> None:
        if node.value is not None:
            self.visit(node.value)
            self._store_targets(node.target)

    def visit_AugAssign(self, node: ast.AugAssign) -> None:
        self.visit(node.value)
        self._tally(type(node.op).__name__)
        self._store_targets(node.target)

    def _loop(self, node: ast.For | ast.AsyncFor) -> None:
        self._tally(type(node).__name__)
        self.visit(node.iter)
        for stmt in node.body + node.orelse:
            self.visit(stmt)

    visit_For = _loop
    visit_AsyncFor = _loop

    def visit_arg(self, node: ast.arg) -> None:
        pass

    def generic_visit(self, node: ast.AST) -> None:
        if isinstance(node, _OTHER_STATEMENTS + _OTHER_EXPRESSIONS):
            self._tally("other")
        super().generic_visit(node)

    # expressions

    def visit_NamedExpr(self, node: ast.NamedExpr) -> None:
        self.visit(node.value)
        self._tally("Store")

    def visit_BinOp(self, node: ast.BinOp) -> None:
        self._tally(type(node.op).__name__)
        self.visit(node.left)
        self.visit(node.right)

    def visit_UnaryOp(self, node: ast.UnaryOp) -> None:
        if not isinstance(node.op, ast.UAdd):
            self._tally(type(node.op).__name__)
        self.visit(node.operand)

    def visit_BoolOp(self, node: ast.BoolOp) -> None:
        self._tally(type(node.op).__name__, len(node.values) - 1)
        for value in node.values:
            self.visit(value)

    def visit_Compare(self, node: ast.Compare) -> None:
        self._tally("Compare", len(node.ops))
        self.visit(node.left)
        for comp in node.comparators:
            self.visit(comp)

    def visit_Subscript(self, node: ast.Subscript) -> None:
        if isinstance(node.ctx, ast.Load):
            self._tally("SubscriptLoad")
        self.visit(node.value)
        self.visit(node.slice)

    def visit_Attribute(self, node: ast.Attribute) -> None:
        if isinstance(node.ctx, ast.Load):
            self._tally("AttributeLoad")
        self.visit(node.value)

    def visit_comprehension(self, node: ast.comprehension) -> None:
        self._tally("Comprehension")
        self.visit(node.iter)
        self._tally("ComprehensionIf", len(node.ifs))
        for cond in node.ifs:
            self.visit(cond)

    def visit_Call(self, node: ast.Call) -> None:
        self._tally("Call")
        self.generic_visit(node)

    def _simple(self, node: ast.AST) -> None:
        self._tally(type(node).__name__)
        super().generic_visit(node)

    visit_If = visit_IfExp = visit_While = visit_Assert = _simple
    visit_Return = visit_Pass = visit_Break = visit_Continue = _simple


def parse_python(text: str | bytes, path: str = "<string>") -> ParsedFile:
    text = decode_text(text, path)
    try:
        tree = ast.parse(text, filename=path)
    except SyntaxError as exc:
        raise ParseError(f"invalid Python syntax: {exc.msg}", path, exc.lineno) from None
    except ValueError as exc:
        raise ParseError(f"cannot parse Python source: {exc}", path) from None
    visitor = _Counter()
    visitor.visit(tree)
    functions = tuple(
        ParsedFunction(name, CountVector(counts), span) for name, counts, span in visitor.functions
    )
    return ParsedFile(path, SourceKind.PYTHON, functions, CountVector(visitor.toplevel))
