"""The graded free Lie ring on a free abelian group of rank ``n``.

Degree-``k`` elements are written in the Lyndon basis: every Lyndon word
``w`` carries its standard bracketing ``P(w)``, whose image in the tensor
algebra is ``w`` plus strictly larger words.  That triangularity lets
:func:`lie_coords` read coordinates off a tensor polynomial by repeatedly
cancelling the smallest surviving word, without any division.

Words are tuples of letters ``1..n`` compared lexicographically.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .trees import Tree, format_tree, is_leaf
from .zlinalg import AbelianStructure, Matrix, kernel_lattice, smith_diagonal

Word = tuple[int, ...]
TensorPoly = dict[Word, int]


class NotALieElement(ValueError):
    """A tensor polynomial that is not in the image of the free Lie ring."""


def mobius(d: int) -> int:
    result, p = 1, 2
    while p * p <= d:
        if d % p == 0:
            d //= p
            if d % p == 0:
                return 0
            result = -result
        p += 1
    return -result if d > 1 else result


def witt_dim(n: int, k: int) -> int:
    """Rank of the degree-``k`` part of the free Lie ring on ``n`` generators."""
    if k < 1:
        raise ValueError("degree must be positive")
    total = sum(mobius(d) * n ** (k // d) for d in range(1, k + 1) if k % d == 0)
    return total // k


@lru_cache(maxsize=None)
def lyndon_words(n: int, k: int) -> tuple[Word, ...]:
    """Lyndon words of length ``k`` over ``1..n`` in lexicographic order (Duval's generator)."""
    out = []
    if n < 1 or k < 1:
        return ()
    w = [0]
    while w:
        w[-1] += 1
        if len(w) == k:
            out.append(tuple(x for x in w))
        m = len(w)
        while len(w) < k:
            w.append(w[len(w) - m])
        while w and w[-1] == n:
            w.pop()
    return tuple(out)


def is_lyndon(w: Word) -> bool:
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


def standard_factorization(w: Word) -> tuple[Word, Word]:
    """``w = u v`` with ``v`` the longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError(f"{w} has no standard factorization")


@lru_cache(maxsize=None)
def bracketing(w: Word) -> Tree:
    """Standard bracketing of a Lyndon word, as a tree."""
    if len(w) == 1:
        return w[0]
    u, v = standard_factorization(w)
    return (bracketing(u), bracketing(v))


def lyndon_code(w: Word) -> str:
    return format_tree(bracketing(w))


def expand_to_tensor(t: Tree) -> TensorPoly:
    """Image of the iterated bracket ``t`` in the tensor algebra (``[x,y] = xy - yx``)."""
    return dict(_expand(t))


@lru_cache(maxsize=200_000)
def _expand(t: Tree) -> tuple[tuple[Word, int], ...]:
    if is_leaf(t):
        return (((t,), 1),)
    a, b = dict(_expand(t[0])), dict(_expand(t[1]))
    out: dict[Word, int] = {}
    for u, x in a.items():
        for v, y in b.items():
            out[u + v] = out.get(u + v, 0) + x * y
            out[v + u] = out.get(v + u, 0) - x * y
    return tuple(sorted((w, c) for w, c in out.items() if c))


@dataclass(frozen=True)
class LieElement:
    degree: int
    coords: tuple[int, ...]


def lie_coords(p: TensorPoly, n: int, k: int) -> LieElement:
    """Lyndon-basis coordinates of a homogeneous Lie polynomial of degree ``k``."""
    index = {w: i for i, w in enumerate(lyndon_words(n, k))}
    coords = [0] * len(index)
    rest = {w: c for w, c in p.items() if c}
    for w in rest:
        if len(w) != k:
            raise ValueError(f"word {w} is not of degree {k}")
    while rest:
        w = min(rest)
        if w not in index:
            raise NotALieElement(f"leading word {w} is not Lyndon")
        c = rest[w]
        coords[index[w]] = c
        for u, x in _expand(bracketing(w)):
            v = rest.get(u, 0) - c * x
            if v:
                rest[u] = v
            else:
                rest.pop(u, None)
    return LieElement(k, tuple(coords))


def tree_coords(t: Tree, n: int, k: int) -> tuple[int, ...]:
    return lie_coords(expand_to_tensor(t), n, k).coords


def beta_matrix(n: int, k: int) -> Matrix:
    """The bracket map ``H (x) L_{k+1} -> L_{k+2}`` in Lyndon coordinates.

    Columns are ordered by (letter ``i``, Lyndon word ``w``), letter-major;
    rows by the Lyndon words of degree ``k+2``.
    """
    columns = []
    for i in range(1, n + 1):
        for w in lyndon_words(n, k + 1):
            c = tree_coords((i, bracketing(w)), n, k + 2)
            columns.append({r: v for r, v in enumerate(c) if v})
    return Matrix(witt_dim(n, k + 2), len(columns), columns)


def d_group(n: int, k: int) -> tuple[AbelianStructure, Matrix]:
    """Kernel of the bracket map: structure and lattice basis (columns)."""
    B = beta_matrix(n, k)
    K = kernel_lattice(B)
    return AbelianStructure(K.cols), K


def beta_is_onto(n: int, k: int) -> bool:
    B = beta_matrix(n, k)
    d = smith_diagonal(B)
    return sum(1 for x in d if x) == B.rows and all(abs(x) == 1 for x in d if x)
