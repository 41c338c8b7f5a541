"""Tree presentations of sum-shuffle expressions.

Concrete syntax::

    E ::= "1" | "s(" E ("," E)* ")" | "sigma(" E ("," E)* ")"

Whitespace between tokens is ignored.  Nodes are addressed by 1-based paths:
the root is ``()``, and ``(i,) + p`` is node ``p`` of the ``i``-th child.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence, Tuple, Union

LEAF, SUM, SHUFFLE = "leaf", "sum", "shuffle"
_RANK = {LEAF: 0, SUM: 1, SHUFFLE: 2}

NodePath = Tuple[int, ...]


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class InvalidPath(LookupError):
    pass


@dataclass(frozen=True)
class Leaf:
    kind = LEAF

    @property
    def children(self) -> tuple:
        return ()

    def __str__(self) -> str:
        return "1"


@dataclass(frozen=True)
class Sum:
    children: Tuple["TreePresentation", ...]
    kind = SUM

    def __post_init__(self):
        _check_children(self)

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Shuffle:
    children: Tuple["TreePresentation", ...]
    kind = SHUFFLE

    def __post_init__(self):
        _check_children(self)

    def __str__(self) -> str:
        return render(self)


TreePresentation = Union[Leaf, Sum, Shuffle]
LEAF_NODE = Leaf()


def _check_children(node) -> None:
    if not isinstance(node.children, tuple):
        object.__setattr__(node, "children", tuple(node.children))
    if not node.children:
        raise ValueError(f"{node.kind} node needs at least one child")


def s(*children: TreePresentation) -> Sum:
    return Sum(tuple(children))


def sigma(*children: TreePresentation) -> Shuffle:
    return Shuffle(tuple(children))


def sigma_power(m: int) -> TreePresentation:
    """``sigma(sigma(...sigma(1)))`` with ``m`` shuffles."""
    tp: TreePresentation = LEAF_NODE
    for _ in range(m):
        tp = Shuffle((tp,))
    return tp


# -- parsing ---------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, token: str) -> None:
        self.skip_ws()
        if not self.text.startswith(token, self.pos):
            raise ParseError(f"expected {token!r}", self.pos)
        self.pos += len(token)

    def expr(self) -> TreePresentation:
        self.skip_ws()
        rest = self.text[self.pos:]
        if rest.startswith("1"):
            self.pos += 1
            return LEAF_NODE
        for keyword, cls in (("sigma", Shuffle), ("s", Sum)):
            if rest.startswith(keyword):
                start = self.pos
                self.pos += len(keyword)
                self.expect("(")
                self.skip_ws()
                if self.text.startswith(")", self.pos):
                    raise ParseError("empty argument list", start)
                args = [self.expr()]
                while True:
                    self.skip_ws()
                    if self.text.startswith(",", self.pos):
                        self.pos += 1
                        args.append(self.expr())
                    elif self.text.startswith(")", self.pos):
                        self.pos += 1
                        return cls(tuple(args))
                    else:
                        raise ParseError("expected ',' or ')'", self.pos)
        if not rest:
            raise ParseError("unexpected end of input", self.pos)
        raise ParseError(f"unexpected character {rest[0]!r}", self.pos)


def parse(text: str) -> TreePresentation:
    parser = _Parser(text)
    tree = parser.expr()
    parser.skip_ws()
    if parser.pos != len(text):
        raise ParseError("trailing input", parser.pos)
    return tree


def render(tp: TreePresentation) -> str:
    if tp.kind == LEAF:
        return "1"
    head = "s" if tp.kind == SUM else "sigma"
    return head + "(" + ",".join(render(c) for c in tp.children) + ")"


# -- navigation ------------------------------------------------------------


class NodeInfo(NamedTuple):
    kind: str
    arity: int


def subtree(tp: TreePresentation, path: Sequence[int]) -> TreePresentation:
    node = tp
    for depth, i in enumerate(path):
        if not 1 <= i <= len(node.children):
            raise InvalidPath(f"no node at path {tuple(path)!r} (step {depth})")
        node = node.children[i - 1]
    return node


def query_node(tp: TreePresentation, path: Sequence[int]) -> NodeInfo:
    node = subtree(tp, path)
    return NodeInfo(node.kind, len(node.children))


def iter_nodes(tp: TreePresentation, prefix: NodePath = ()) -> Iterator[Tuple[NodePath, TreePresentation]]:
    """Pre-order walk yielding ``(path, subtree)`` pairs."""
    yield prefix, tp
    for i, child in enumerate(tp.children, start=1):
        yield from iter_nodes(child, prefix + (i,))


def node_paths(tp: TreePresentation) -> list[NodePath]:
    return [path for path, _ in iter_nodes(tp)]


def leaf_paths(tp: TreePresentation) -> list[NodePath]:
    return [path for path, node in iter_nodes(tp) if node.kind == LEAF]


def node_count(tp: TreePresentation) -> int:
    return 1 + sum(node_count(c) for c in tp.children)


def has_shuffle(tp: TreePresentation) -> bool:
    return tp.kind == SHUFFLE or any(has_shuffle(c) for c in tp.children)


# -- structural order ------------------------------------------------------


def structural_key(tp: TreePresentation) -> tuple:
    """Sort key realizing the structural order.

    Leaf < Sum < Shuffle, then arity, then children left to right.
    """
    return (_RANK[tp.kind], len(tp.children), tuple(structural_key(c) for c in tp.children))


def compare_structural(a: TreePresentation, b: TreePresentation) -> int:
    """Three-way comparison: -1, 0 or 1."""
    ka, kb = structural_key(a), structural_key(b)
    return (ka > kb) - (ka < kb)
