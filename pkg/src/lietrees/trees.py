"""Planar binary rooted trees with labelled leaves, and their string codes.

A tree is either a leaf label (a positive ``int``) or a pair ``(left, right)``
of trees; the pair stands for the bracket ``[left, right]``.  Codes follow
the grammar::

    LEAF := digit+
    TREE := LEAF | '(' TREE ',' TREE ')'
    CODE := TREE | LEAF '@' TREE

The ``LEAF '@'`` prefix is a labelled root, i.e. the element
``e_root (x) tree`` of ``H (x) L'``.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import Iterator, Union

Tree = Union[int, tuple]


def catalan(m: int) -> int:
    return comb(2 * m, m) // (m + 1)


def is_leaf(t: Tree) -> bool:
    return isinstance(t, int)


def leaves(t: Tree) -> list[int]:
    if is_leaf(t):
        return [t]
    return leaves(t[0]) + leaves(t[1])


def degree(t: Tree) -> int:
    return 1 if is_leaf(t) else degree(t[0]) + degree(t[1])


@lru_cache(maxsize=None)
def format_tree(t: Tree) -> str:
    if is_leaf(t):
        return str(t)
    return f"({format_tree(t[0])},{format_tree(t[1])})"


def format_code(t: Tree, root: int | None = None) -> str:
    return format_tree(t) if root is None else f"{root}@{format_tree(t)}"


def parse_tree(s: str) -> Tree:
    t, pos = _parse(s, 0)
    if pos != len(s):
        raise ValueError(f"trailing characters in tree code {s!r}")
    return t


def _parse(s: str, pos: int):
    if pos >= len(s):
        raise ValueError(f"unexpected end of tree code {s!r}")
    if s[pos] == "(":
        left, pos = _parse(s, pos + 1)
        if pos >= len(s) or s[pos] != ",":
            raise ValueError(f"expected ',' at {pos} in {s!r}")
        right, pos = _parse(s, pos + 1)
        if pos >= len(s) or s[pos] != ")":
            raise ValueError(f"expected ')' at {pos} in {s!r}")
        return (left, right), pos + 1
    end = pos
    while end < len(s) and s[end].isdigit():
        end += 1
    if end == pos:
        raise ValueError(f"expected a leaf label at {pos} in {s!r}")
    return int(s[pos:end]), end


def parse_code(code: str) -> tuple[int | None, Tree]:
    """Split a code into ``(root_label or None, tree)``."""
    if "@" in code:
        head, _, body = code.partition("@")
        if not head.isdigit():
            raise ValueError(f"bad root label in {code!r}")
        return int(head), parse_tree(body)
    return None, parse_tree(code)


@lru_cache(maxsize=None)
def labeled_trees(n: int, k: int) -> tuple[Tree, ...]:
    """All planar binary trees with ``k`` leaves labelled from ``1..n``."""
    if k < 1 or n < 1:
        return ()
    if k == 1:
        return tuple(range(1, n + 1))
    out = []
    for i in range(1, k):
        for left in labeled_trees(n, i):
            for right in labeled_trees(n, k - i):
                out.append((left, right))
    return tuple(out)


def enumerate_rooted_trees(n: int, k: int, root_labeled: bool = False) -> list[str]:
    """Sorted codes of all trees with ``k`` leaves, optionally with a labelled root."""
    ts = [format_tree(t) for t in labeled_trees(n, k)]
    if root_labeled:
        ts = [f"{r}@{t}" for r in range(1, n + 1) for t in ts]
    return sorted(ts)


def swap(t: Tree) -> Tree:
    return (t[1], t[0])


def relation_terms(t: Tree) -> Iterator[list[tuple[int, Tree]]]:
    """Antisymmetry and Jacobi relations supported on ``t``.

    One antisymmetry relation per internal vertex and one Jacobi relation per
    internal edge, each a list of ``(coefficient, tree)`` terms summing to
    zero.  At an internal vertex ``(X, (A, B))`` or ``((A, B), X)`` the
    Jacobi relation is ``[[a,b],c] = [a,[b,c]] - [b,[a,c]]`` read through
    that edge.
    """
    if is_leaf(t):
        return
    left, right = t
    yield [(1, t), (1, (right, left))]
    if not is_leaf(left):
        a, b = left
        yield [(1, t), (-1, (a, (b, right))), (1, (b, (a, right)))]
    if not is_leaf(right):
        a, b = right
        yield [(1, t), (1, (a, (b, left))), (-1, (b, (a, left)))]
    for rel in relation_terms(left):
        yield [(c, (x, right)) for c, x in rel]
    for rel in relation_terms(right):
        yield [(c, (left, x)) for c, x in rel]


def reroot(root: int, t: Tree, w: int) -> tuple[int, Tree]:
    """Move the root of ``root @ t`` to the ``w``-th leaf of ``t`` (0-based).

    The cyclic order (towards-root, left, right) at every trivalent vertex
    is preserved, so the underlying unrooted planar tree is unchanged.  The
    old root becomes a leaf.
    """
    if is_leaf(t):
        raise ValueError("cannot reroot a tree without trivalent vertices")
    n_leaves = degree(t)
    if not 0 <= w < n_leaves:
        raise IndexError(f"leaf index {w} out of range for {n_leaves} leaves")
    return reroot_towards(t, w, root)


def reroot_towards(t: Tree, w: int, up: Tree) -> tuple[int, Tree]:
    """Root at leaf ``w`` of ``t``, where ``up`` hangs off the top of ``t``.

    At a vertex with cyclic order (parent, L, R) the new parent is L or R;
    the remaining two neighbours are read in the same cyclic order.
    """
    while not is_leaf(t):
        left, right = t
        nl = degree(left)
        if w < nl:
            up = (right, up)
            t = left
        else:
            up = (up, left)
            t = right
            w -= nl
    return t, up
