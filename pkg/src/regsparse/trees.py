"""Labelled binary trees: the data model every decision procedure runs on.

A tree is either the empty tree, represented by ``None``, or a `Node` with a
label and two child trees. Nodes are immutable and cache their size and a
structural hash, so equality tests prune cheaply and all values are safe to
share between threads.

The module also provides the subtree relation, occurrence counting,
exhaustive enumeration (the brute-force oracle used against the counting
module), the first-child/next-sibling encoding of unranked trees, and the
tree literal text format::

    tree := "()" | label | label "(" tree "," tree ")"

A bare label is shorthand for a leaf. Printing emits no whitespace and
``parse_tree(format_tree(t)) == t`` holds for every tree.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator, Optional

from .errors import CapExceeded, FormatError

MAX_ENUMERATION_SIZE = 12

_LITERAL_SPECIALS = set("(),")


class Alphabet:
    """An ordered set of distinct symbols. Symbol order fixes tie-breaking."""

    __slots__ = ("symbols", "index")

    def __init__(self, symbols):
        symbols = tuple(symbols)
        if not symbols:
            raise ValueError("alphabet needs at least one symbol")
        seen = set()
        for sym in symbols:
            if not isinstance(sym, str) or not sym:
                raise ValueError(f"bad alphabet symbol {sym!r}")
            if any(ch.isspace() or ch in _LITERAL_SPECIALS for ch in sym) or not sym.isprintable():
                raise ValueError(f"bad alphabet symbol {sym!r}")
            if sym in seen:
                raise ValueError(f"duplicate alphabet symbol {sym!r}")
            seen.add(sym)
        self.symbols = symbols
        self.index = {sym: i for i, sym in enumerate(symbols)}

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, sym):
        return sym in self.index

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self):
        return hash(self.symbols)

    def __repr__(self):
        return f"Alphabet({','.join(self.symbols)})"


class Node:
    """One node of a labelled binary tree; ``left``/``right`` may be None."""

    __slots__ = ("label", "left", "right", "size", "_hash")

    def __init__(self, label: str, left: Optional["Node"] = None, right: Optional["Node"] = None):
        self.label = label
        self.left = left
        self.right = right
        self.size = 1 + (left.size if left is not None else 0) + (right.size if right is not None else 0)
        self._hash = hash(
            (label, left._hash if left is not None else 0, right._hash if right is not None else 0)
        )

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Node):
            return NotImplemented
        if self.size != other.size or self._hash != other._hash:
            return False
        # Iterative structural walk; trees can be deep, so no recursion.
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a is b:
                continue
            if a is None or b is None:
                return False
            if a.label != b.label or a.size != b.size or a._hash != b._hash:
                return False
            stack.append((a.left, b.left))
            stack.append((a.right, b.right))
        return True

    def __repr__(self):
        return f"<tree {format_tree(self)}>"


Tree = Optional[Node]


class UnrankedNode:
    """An unranked ordered tree: a label plus a sequence of child trees."""

    __slots__ = ("label", "children")

    def __init__(self, label: str, children=()):
        self.label = label
        self.children = tuple(children)

    def __eq__(self, other):
        if not isinstance(other, UnrankedNode):
            return NotImplemented
        return self.label == other.label and self.children == other.children

    def __hash__(self):
        return hash((self.label, self.children))

    def node_count(self) -> int:
        total = 0
        stack = [self]
        while stack:
            t = stack.pop()
            total += 1
            stack.extend(t.children)
        return total

    def __repr__(self):
        return f"UnrankedNode({self.label!r}, {list(self.children)!r})"


def size(t: Tree) -> int:
    """Number of nodes of ``t``; 0 for the empty tree."""
    return 0 if t is None else t.size


def conc(alphabet: Alphabet, label: str, left: Tree, right: Tree) -> Node:
    """Root labelled ``label`` with the given subtrees attached."""
    if label not in alphabet:
        raise ValueError(f"unknown symbol {label!r}")
    return Node(label, left, right)


def nodes(t: Tree) -> dict:
    """Map from node position (a string over {l,r}) to its label."""
    out = {}
    if t is None:
        return out
    stack = [("", t)]
    while stack:
        pos, n = stack.pop()
        out[pos] = n.label
        if n.left is not None:
            stack.append((pos + "l", n.left))
        if n.right is not None:
            stack.append((pos + "r", n.right))
    return out


def subtree_at(t: Tree, position: str) -> Tree:
    """Induced subtree at ``position``; None when the position is absent."""
    cur = t
    for d in position:
        if cur is None:
            return None
        if d == "l":
            cur = cur.left
        elif d == "r":
            cur = cur.right
        else:
            raise ValueError(f"bad direction {d!r}")
    return cur


def iter_subtrees(t: Tree) -> Iterator[Node]:
    """All induced subtrees of ``t`` (one per node)."""
    if t is None:
        return
    stack = [t]
    while stack:
        n = stack.pop()
        yield n
        if n.left is not None:
            stack.append(n.left)
        if n.right is not None:
            stack.append(n.right)


def is_subtree(s: Tree, t: Tree) -> bool:
    """True iff ``s`` occurs as the full induced subtree at some node of ``t``.

    The empty tree is a subtree of everything: the defining condition is
    vacuously satisfiable at any absent position.
    """
    if s is None:
        return True
    for n in iter_subtrees(t):
        if n.size == s.size and n == s:
            return True
    return False


def count_occurrences(s: Tree, t: Tree) -> int:
    """Number of positions of ``t`` whose induced subtree equals ``s``."""
    if s is None:
        raise ValueError("occurrence counting needs a non-empty pattern")
    hits = 0
    for n in iter_subtrees(t):
        if n.size == s.size and n == s:
            hits += 1
    return hits


@lru_cache(maxsize=None)
def _shapes(n: int):
    # Unlabelled shapes as nested (left, right) tuples, None for empty.
    # Order: left-subtree size ascending, then left shape, then right shape.
    if n == 0:
        return (None,)
    out = []
    for k in range(n):
        for ls in _shapes(k):
            for rs in _shapes(n - 1 - k):
                out.append((ls, rs))
    return tuple(out)


def _shape_size(shape) -> int:
    if shape is None:
        return 0
    total = 0
    stack = [shape]
    while stack:
        s = stack.pop()
        if s is None:
            continue
        total += 1
        stack.append(s[0])
        stack.append(s[1])
    return total


def _label_shape(shape, labels) -> Tree:
    # labels assigned in preorder; recursion depth is bounded by the
    # enumeration cap so plain recursion is fine here.
    it = iter(labels)

    def build(sh):
        if sh is None:
            return None
        lab = next(it)
        left = build(sh[0])
        right = build(sh[1])
        return Node(lab, left, right)

    return build(shape)


def enumerate_trees(alphabet: Alphabet, n: int, max_size: int = MAX_ENUMERATION_SIZE) -> Iterator[Tree]:
    """Yield every tree with ``n`` nodes exactly once.

    Deterministic order: shapes first (left-subtree size ascending, then
    recursively), then labels in alphabet order over preorder positions.
    The total count is C_n * |alphabet|**n.
    """
    if n > max_size:
        raise CapExceeded(f"enumeration size {n} exceeds cap {max_size}")
    for shape in _shapes(n):
        for labels in itertools.product(alphabet.symbols, repeat=n):
            yield _label_shape(shape, labels)


def canonical_key(t: Tree, alphabet: Alphabet):
    """Total order key consistent with enumerate_trees: (size, shape, labels)."""
    shape_seq = []
    label_seq = []
    if t is not None:
        stack = [t]
        while stack:
            n = stack.pop()
            shape_seq.append(size(n.left))
            label_seq.append(alphabet.index[n.label])
            if n.right is not None:
                stack.append(n.right)
            if n.left is not None:
                stack.append(n.left)
    return (size(t), tuple(shape_seq), tuple(label_seq))


def compare_trees(a: Tree, b: Tree, alphabet: Alphabet) -> int:
    """-1/0/1 in the canonical order, without materialising full keys."""
    if a is b:
        return 0
    sa, sb = size(a), size(b)
    if sa != sb:
        return -1 if sa < sb else 1
    # Same size; compare shapes via preorder left-subtree sizes.
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x is y or x is None:
            continue
        lx, ly = size(x.left), size(y.left)
        if lx != ly:
            return -1 if lx < ly else 1
        if x.right is not None:
            stack.append((x.right, y.right))
        if x.left is not None:
            stack.append((x.left, y.left))
    # Same shape; compare preorder labels in alphabet order.
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x is y or x is None:
            continue
        ix, iy = alphabet.index[x.label], alphabet.index[y.label]
        if ix != iy:
            return -1 if ix < iy else 1
        if x.right is not None:
            stack.append((x.right, y.right))
        if x.left is not None:
            stack.append((x.left, y.left))
    return 0


def encode_unranked(u: UnrankedNode) -> Node:
    """First-child/next-sibling encoding. The image has an empty right child at the root."""

    def encode_forest(forest):
        # Encode a sibling list; the next sibling hangs off the right child.
        result = None
        for t in reversed(forest):
            result = Node(t.label, encode_forest(t.children), result)
        return result

    return encode_forest([u])


def decode_unranked(b: Tree) -> UnrankedNode:
    """Inverse of encode_unranked; rejects trees outside the encoding image."""
    if b is None:
        raise ValueError("the empty tree encodes no unranked tree")
    if b.right is not None:
        raise ValueError("not an unranked-tree encoding: root has a right child")

    def decode_forest(n):
        out = []
        while n is not None:
            out.append(UnrankedNode(n.label, decode_forest(n.left)))
            n = n.right
        return out

    return decode_forest(b)[0]


def format_tree(t: Tree) -> str:
    """Canonical literal: '()' for empty, bare label for leaves, no whitespace."""
    parts = []
    stack = [t]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
            continue
        if item is None:
            parts.append("()")
        elif item.left is None and item.right is None:
            parts.append(item.label)
        else:
            parts.append(item.label + "(")
            stack.append(")")
            stack.append(item.right)
            stack.append(",")
            stack.append(item.left)
    return "".join(parts)


def _tokenize_literal(text: str):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _LITERAL_SPECIALS:
            tokens.append(ch)
            i += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace() and text[j] not in _LITERAL_SPECIALS:
            j += 1
        tokens.append(text[i:j])
        i = j
    return tokens


def parse_tree(text: str, alphabet: Optional[Alphabet] = None) -> Tree:
    """Parse a tree literal; labels are validated when an alphabet is given."""
    tokens = _tokenize_literal(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        if pos >= len(tokens):
            raise FormatError("unexpected end of tree literal")
        tok = tokens[pos]
        if expected is not None and tok != expected:
            raise FormatError(f"expected {expected!r}, found {tok!r}")
        pos += 1
        return tok

    def parse_node() -> Tree:
        tok = peek()
        if tok is None:
            raise FormatError("unexpected end of tree literal")
        if tok == "(":
            take("(")
            take(")")
            return None
        if tok in (")", ","):
            raise FormatError(f"unexpected {tok!r} in tree literal")
        label = take()
        if alphabet is not None and label not in alphabet:
            raise FormatError(f"label {label!r} not in alphabet")
        if peek() == "(":
            take("(")
            left = parse_node()
            take(",")
            right = parse_node()
            take(")")
            return Node(label, left, right)
        return Node(label, None, None)

    result = parse_node()
    if pos != len(tokens):
        raise FormatError(f"trailing input after tree literal: {tokens[pos]!r}")
    return result
