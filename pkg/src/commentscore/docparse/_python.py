"""Python code-structure extraction via the stdlib ast module."""

from __future__ import annotations

import ast
import textwrap
from typing import Iterator, Optional

from .errors import DocParseError

_FUNC_NODES = (ast.FunctionDef, ast.AsyncFunctionDef)
_SCOPE_NODES = (ast.FunctionDef, ast.AsyncFunctionDef, ast.Lambda, ast.ClassDef)


def _parse_module(code: str) -> ast.Module:
    try:
        return ast.parse(textwrap.dedent(code))
    except SyntaxError as exc:
        raise DocParseError(
            f"invalid Python syntax: {exc.msg}",
            language="python",
            line=exc.lineno or 1,
            col=exc.offset or 1,
        ) from exc


def _single_function(tree: ast.Module) -> ast.FunctionDef | ast.AsyncFunctionDef:
    funcs = [node for node in tree.body if isinstance(node, _FUNC_NODES)]
    if len(funcs) != 1:
        raise DocParseError(
            f"expected exactly one top-level function definition, found {len(funcs)}",
            language="python",
        )
    return funcs[0]


def _own_nodes(func: ast.AST) -> Iterator[ast.AST]:
    """Walk the function's own body, not descending into nested scopes."""
    stack = list(ast.iter_child_nodes(func))
    while stack:
        node = stack.pop()
        yield node
        if not isinstance(node, _SCOPE_NODES):
            stack.extend(ast.iter_child_nodes(node))


def _dotted_name(node: ast.expr) -> Optional[str]:
    if isinstance(node, ast.Name):
        return node.id
    if isinstance(node, ast.Attribute):
        base = _dotted_name(node.value)
        return f"{base}.{node.attr}" if base else None
    return None


def parse_python(code: str) -> tuple[str, list[str], list[str], bool]:
    """Return (function_name, params, exception_names, has_return)."""
    func = _single_function(_parse_module(code))

    args = func.args
    positional = list(args.posonlyargs) + list(args.args)
    params = [a.arg for a in positional]
    if params and params[0] in ("self", "cls"):
        params = params[1:]
    if args.vararg:
        params.append(args.vararg.arg)
    params.extend(a.arg for a in args.kwonlyargs)
    if args.kwarg:
        params.append(args.kwarg.arg)

    exceptions: list[str] = []
    has_return = False
    for node in _own_nodes(func):
        if isinstance(node, ast.Raise) and node.exc is not None:
            target = node.exc.func if isinstance(node.exc, ast.Call) else node.exc
            name = _dotted_name(target)
            if name:
                exceptions.append(name)
        elif isinstance(node, ast.Return) and node.value is not None:
            has_return = True

    return func.name, params, exceptions, has_return


def python_identifiers(code: str) -> list[str]:
    """All identifiers appearing in the function, in walk order."""
    func = _single_function(_parse_module(code))
    names: list[str] = []
    for node in ast.walk(func):
        if isinstance(node, ast.Name):
            names.append(node.id)
        elif isinstance(node, ast.arg):
            names.append(node.arg)
        elif isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef, ast.ClassDef)):
            names.append(node.name)
        elif isinstance(node, ast.Attribute):
            names.append(node.attr)
        elif isinstance(node, ast.keyword) and node.arg:
            names.append(node.arg)
        elif isinstance(node, ast.ExceptHandler) and node.name:
            names.append(node.name)
    return names
