"""Exact integer linear algebra.

Everything here works over the integers with Python's arbitrary precision
``int``.  Homomorphisms act on column vectors and subgroups of a free
abelian group are column lattices.

The two workhorses are :func:`snf`, a dense Smith normal form with both
unimodular transforms, and :func:`cokernel_map`, which first eliminates unit
pivots from a large sparse relation matrix and only then runs the dense
Smith form on what is left.  The relation matrices of tree presentations are
huge but consist mostly of unit entries, so the second route is what makes
the graded computations feasible.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from math import prod
from typing import Iterable, Mapping, Sequence


class Matrix:
    """Rectangular integer matrix, stored by sparse columns.

    Semantics are those of a dense matrix: every ``(i, j)`` within bounds
    has a value, most of which are zero.  Instances are treated as
    immutable; the column dictionaries returned by :meth:`column` must not
    be modified.
    """

    __slots__ = ("rows", "cols", "_cols", "__weakref__")

    def __init__(self, rows: int, cols: int, columns: Iterable[Mapping[int, int]] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError(f"negative shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        if columns is None:
            self._cols = tuple({} for _ in range(cols))
            return
        cs = []
        for c in columns:
            d = {}
            for i, v in c.items():
                if not 0 <= i < rows:
                    raise IndexError(f"row index {i} out of range for {rows} rows")
                if v:
                    d[i] = int(v)
            cs.append(d)
        if len(cs) != cols:
            raise ValueError(f"expected {cols} columns, got {len(cs)}")
        self._cols = tuple(cs)

    @classmethod
    def _trusted(cls, rows, cols, columns):
        m = cls.__new__(cls)
        m.rows = rows
        m.cols = cols
        m._cols = tuple(columns)
        return m

    # construction

    @classmethod
    def from_rows(cls, data: Sequence[Sequence[int]], cols: int | None = None) -> "Matrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        columns = [dict() for _ in range(cols)]
        for i, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged row data")
            for j, v in enumerate(row):
                if v:
                    columns[j][i] = int(v)
        return cls._trusted(rows, cols, columns)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping[int, int]]) -> "Matrix":
        return cls(rows, len(columns), columns)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._trusted(n, n, [{i: 1} for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols)

    @classmethod
    def diagonal(cls, entries: Sequence[int], rows: int | None = None, cols: int | None = None) -> "Matrix":
        rows = len(entries) if rows is None else rows
        cols = len(entries) if cols is None else cols
        columns = [dict() for _ in range(cols)]
        for i, v in enumerate(entries):
            if v:
                columns[i][i] = int(v)
        return cls(rows, cols, columns)

    @classmethod
    def hstack(cls, rows: int, *blocks: "Matrix") -> "Matrix":
        columns = []
        for b in blocks:
            if b.rows != rows:
                raise ValueError(f"hstack: block has {b.rows} rows, expected {rows}")
            columns.extend(b._cols)
        return cls._trusted(rows, len(columns), columns)

    # access

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"({i}, {j}) outside {self.rows}x{self.cols}")
        return self._cols[j].get(i, 0)

    def column(self, j: int) -> Mapping[int, int]:
        return self._cols[j]

    def columns(self) -> tuple[Mapping[int, int], ...]:
        return self._cols

    def dense_column(self, j: int) -> list[int]:
        out = [0] * self.rows
        for i, v in self._cols[j].items():
            out[i] = v
        return out

    def to_rows(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for j, c in enumerate(self._cols):
            for i, v in c.items():
                out[i][j] = v
        return out

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self._cols)

    def is_zero(self) -> bool:
        return not any(self._cols)

    # arithmetic

    def apply(self, vec: Mapping[int, int]) -> dict[int, int]:
        """Sparse matrix-vector product; ``vec`` maps column index to value."""
        out: dict[int, int] = {}
        for j, x in vec.items():
            if not x:
                continue
            for i, v in self._cols[j].items():
                out[i] = out.get(i, 0) + x * v
        return {i: v for i, v in out.items() if v}

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return Matrix._trusted(self.rows, other.cols, [self.apply(c) for c in other._cols])

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        columns = []
        for a, b in zip(self._cols, other._cols):
            d = dict(a)
            for i, v in b.items():
                s = d.get(i, 0) + v
                if s:
                    d[i] = s
                else:
                    d.pop(i, None)
            columns.append(d)
        return Matrix._trusted(self.rows, self.cols, columns)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c: int) -> "Matrix":
        if c == 0:
            return Matrix(self.rows, self.cols)
        return Matrix._trusted(self.rows, self.cols, [{i: c * v for i, v in col.items()} for col in self._cols])

    def transpose(self) -> "Matrix":
        columns = [dict() for _ in range(self.rows)]
        for j, c in enumerate(self._cols):
            for i, v in c.items():
                columns[i][j] = v
        return Matrix._trusted(self.cols, self.rows, columns)

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def select_columns(self, idx: Iterable[int]) -> "Matrix":
        cs = [self._cols[j] for j in idx]
        return Matrix._trusted(self.rows, len(cs), cs)

    def select_rows(self, idx: Sequence[int]) -> "Matrix":
        pos = {r: k for k, r in enumerate(idx)}
        cs = [{pos[i]: v for i, v in c.items() if i in pos} for c in self._cols]
        return Matrix._trusted(len(idx), self.cols, cs)

    # comparison

    def _entries(self):
        return frozenset((i, j, v) for j, c in enumerate(self._cols) for i, v in c.items())

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._cols == other._cols

    def __hash__(self):
        return hash((self.rows, self.cols, self._entries()))

    def __repr__(self):
        if self.rows * self.cols <= 64:
            return f"Matrix.from_rows({self.to_rows()!r}, cols={self.cols})"
        return f"<Matrix {self.rows}x{self.cols} nnz={self.nnz}>"

    # plain-text exchange

    def to_zmat(self) -> str:
        entries = sorted((i, j, v) for j, c in enumerate(self._cols) for i, v in c.items())
        lines = [f"ZMAT 1 {self.rows} {self.cols} {len(entries)}"]
        lines.extend(f"{i} {j} {v}" for i, j, v in entries)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_zmat(cls, text: str) -> "Matrix":
        m, rest = read_zmat(text.splitlines())
        if any(line.strip() for line in rest):
            raise ValueError("trailing data after ZMAT block")
        return m


def read_zmat(lines: Sequence[str]) -> tuple[Matrix, Sequence[str]]:
    """Parse one ZMAT block from ``lines``; return it and the unread lines."""
    if not lines:
        raise ValueError("missing ZMAT header")
    head = lines[0].split()
    if len(head) != 5 or head[0] != "ZMAT" or head[1] != "1":
        raise ValueError(f"bad ZMAT header: {lines[0]!r}")
    rows, cols, nnz = map(int, head[2:])
    if len(lines) < 1 + nnz:
        raise ValueError("truncated ZMAT block")
    columns = [dict() for _ in range(cols)]
    for line in lines[1:1 + nnz]:
        i, j, v = map(int, line.split())
        if not (0 <= i < rows and 0 <= j < cols):
            raise ValueError(f"ZMAT entry ({i}, {j}) out of range")
        if i in columns[j]:
            raise ValueError(f"duplicate ZMAT entry ({i}, {j})")
        columns[j][i] = v
    return Matrix(rows, cols, columns), lines[1 + nnz:]


@dataclass(frozen=True)
class SmithForm:
    """``U @ M @ V == S`` with ``U``, ``V`` unimodular and ``S`` diagonal."""

    U: Matrix
    S: Matrix
    V: Matrix

    @property
    def diagonal(self) -> list[int]:
        return [self.S[i, i] for i in range(min(self.S.rows, self.S.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


@dataclass(frozen=True)
class AbelianStructure:
    """Invariant-factor type ``Z^free_rank + Z/t1 + Z/t2 + ...`` with ``t1 | t2 | ...``."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(t) for t in self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")
        if any(t <= 1 for t in self.torsion):
            raise ValueError(f"torsion coefficients must exceed 1: {self.torsion}")

    @classmethod
    def from_diagonal(cls, diag: Iterable[int], size: int | None = None) -> "AbelianStructure":
        """Group ``Z^size / diag(d)``; ``size`` defaults to the diagonal length."""
        diag = [abs(d) for d in diag]
        size = len(diag) if size is None else size
        free = size - sum(1 for d in diag if d)
        torsion = sorted(d for d in diag if d > 1)
        if not all(b % a == 0 for a, b in zip(torsion, torsion[1:])):
            torsion = [d for d in _smith_diagonal_of_diagonal(torsion) if d > 1]
        return cls(free, tuple(torsion))

    @property
    def torsion_order(self) -> int:
        return prod(self.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def direct_sum(self, other: "AbelianStructure") -> "AbelianStructure":
        return AbelianStructure.from_diagonal(
            list(self.torsion) + list(other.torsion) + [0] * (self.free_rank + other.free_rank))

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


def _smith_diagonal_of_diagonal(ds: list[int]) -> list[int]:
    S = snf(Matrix.diagonal(ds)).diagonal
    return sorted(S)


# -- dense Smith normal form ------------------------------------------------

def _ident(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _smith(A, m, n, track=True):
    """In-place Smith reduction of the dense ``m x n`` list-of-rows ``A``.

    Returns ``(U, Uinv, V)`` (or Nones when ``track`` is false) with
    ``U @ A_original @ V == A`` afterwards.
    """
    U = _ident(m) if track else None
    Ui = _ident(m) if track else None
    V = _ident(n) if track else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if track:
            U[i], U[j] = U[j], U[i]
            for row in Ui:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if track:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        a, b = A[dst], A[src]
        for k in range(n):
            if b[k]:
                a[k] += c * b[k]
        if track:
            a, b = U[dst], U[src]
            for k in range(m):
                if b[k]:
                    a[k] += c * b[k]
            for row in Ui:
                if row[dst]:
                    row[src] -= c * row[dst]

    def add_col(dst, src, c):
        for row in A:
            if row[src]:
                row[dst] += c * row[src]
        if track:
            for row in V:
                if row[src]:
                    row[dst] += c * row[src]

    def negate_row(i):
        A[i] = [-x for x in A[i]]
        if track:
            U[i] = [-x for x in U[i]]
            for row in Ui:
                row[i] = -row[i]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(t, i)
        if j != t:
            swap_cols(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                x = A[i][t]
                if x:
                    add_row(i, t, -(x // p))
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                x = A[t][j]
                if x:
                    add_col(j, t, -(x // p))
                    if A[t][j]:
                        dirty = True
            if dirty:
                # a remainder is smaller than the pivot; move it in
                best = None
                for i in range(t + 1, m):
                    x = A[i][t]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, t)
                for j in range(t + 1, n):
                    x = A[t][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), t, j)
                _, i, j = best
                if i != t:
                    swap_rows(t, i)
                if j != t:
                    swap_cols(t, j)
                continue
            bad = None
            for i in range(t + 1, m):
                row = A[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            negate_row(t)
        t += 1
    return U, Ui, V


def snf(M: Matrix) -> SmithForm:
    """Smith normal form ``U @ M @ V == S`` of an arbitrary integer matrix."""
    A = M.to_rows()
    U, _, V = _smith(A, M.rows, M.cols)
    return SmithForm(Matrix.from_rows(U, M.rows), Matrix.from_rows(A, M.cols), Matrix.from_rows(V, M.cols))


def smith_diagonal(M: Matrix) -> list[int]:
    """Nonzero-and-zero diagonal of the Smith form, without transforms."""
    A = M.to_rows()
    _smith(A, M.rows, M.cols, track=False)
    return [A[i][i] for i in range(min(M.rows, M.cols))]


# -- Hermite normal form ----------------------------------------------------

def _hnf_rows(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Row Hermite form of the row lattice; zero rows dropped."""
    A = [r[:] for r in rows if any(r)]
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, len(A)) if A[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[piv] = A[piv], A[r]
            p = A[r][c]
            done = True
            for i in range(r + 1, len(A)):
                x = A[i][c]
                if x:
                    q = x // p
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    if A[i][c]:
                        done = False
            if done:
                break
        if r < len(A) and A[r][c]:
            if A[r][c] < 0:
                A[r] = [-a for a in A[r]]
            p = A[r][c]
            for i in range(r):
                q = A[i][c] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
            r += 1
            A = A[:r] + [row for row in A[r:] if any(row)]
    return A[:r]


def hnf(M: Matrix) -> Matrix:
    """Canonical basis of the column lattice of ``M`` (column Hermite form).

    Two matrices span the same lattice iff their ``hnf`` results are equal.
    """
    rows = _hnf_rows(M.transpose().to_rows(), M.rows)
    return Matrix.from_rows(rows, M.rows).transpose() if rows else Matrix(M.rows, 0)


# -- kernels, cokernels, membership -----------------------------------------

def kernel_lattice(M: Matrix) -> Matrix:
    """Lattice basis (as columns, in Hermite form) of ``{x : M x = 0}``."""
    A = M.to_rows()
    _, _, V = _smith(A, M.rows, M.cols)
    r = sum(1 for i in range(min(M.rows, M.cols)) if A[i][i])
    basis = [[V[i][j] for i in range(M.cols)] for j in range(r, M.cols)]
    if not basis:
        return Matrix(M.cols, 0)
    return Matrix.from_rows(_hnf_rows(basis, M.cols), M.cols).transpose()


class LatticeSolver:
    """Repeated solving of ``M x = v`` over the integers for a fixed ``M``."""

    def __init__(self, M: Matrix):
        self.M = M
        A = M.to_rows()
        U, _, V = _smith(A, M.rows, M.cols)
        self._U = U
        self._V = V
        self._d = [A[i][i] for i in range(min(M.rows, M.cols))]
        self.rank = sum(1 for d in self._d if d)

    def solve(self, v: Sequence[int]) -> list[int] | None:
        if len(v) != self.M.rows:
            raise ValueError(f"vector length {len(v)} != {self.M.rows} rows")
        w = [sum(u * x for u, x in zip(row, v) if x) for row in self._U]
        y = [0] * self.M.cols
        for i, wi in enumerate(w):
            d = self._d[i] if i < len(self._d) else 0
            if d == 0:
                if wi:
                    return None
            else:
                if wi % d:
                    return None
                y[i] = wi // d
        return [sum(V_row[j] * y[j] for j in range(self.rank) if y[j]) for V_row in self._V]

    def contains(self, v: Sequence[int]) -> bool:
        return self.solve(v) is not None


def lattice_member(M: Matrix, v: Sequence[int]) -> list[int] | None:
    """Integer ``x`` with ``M x == v``, or ``None`` when ``v`` is outside the column lattice."""
    return LatticeSolver(M).solve(v)


@dataclass(frozen=True, eq=False)
class CokernelMap:
    """Explicit isomorphism ``Z^rows / colspan(M) -> Z/d1 + ... + Z/dr``.

    ``moduli`` lists the invariant factors greater than one, then a zero for
    each free summand.  ``proj`` sends a free-cover vector to reduced
    coordinates and ``sect`` picks free-cover representatives for the
    reduced unit vectors, so ``proj @ sect`` is the identity modulo
    ``moduli``.
    """

    moduli: tuple[int, ...]
    proj: Matrix
    sect: Matrix

    @property
    def size(self) -> int:
        return len(self.moduli)

    @cached_property
    def structure(self) -> AbelianStructure:
        return AbelianStructure(sum(1 for d in self.moduli if d == 0),
                                tuple(d for d in self.moduli if d))

    def reduce(self, vec: Mapping[int, int]) -> tuple[int, ...]:
        """Reduced coordinates of the class of the sparse vector ``vec``."""
        y = self.proj.apply(vec)
        return tuple((y.get(i, 0) % d) if d else y.get(i, 0) for i, d in enumerate(self.moduli))

    def is_zero(self, vec: Mapping[int, int]) -> bool:
        return not any(self.reduce(vec))

    @property
    def relation_matrix(self) -> Matrix:
        """``diag(moduli)``: the relations of the reduced coordinates."""
        return Matrix.diagonal(self.moduli)


def _eliminate_units(rows: int, columns: Sequence[Mapping[int, int]]):
    """Sparse elimination of unit pivots by column operations.

    Returns ``(order, subs, remaining)``: eliminated rows in order, the
    substitution expressing each eliminated row through rows still alive at
    that moment, and the surviving nonzero columns.
    """
    cols: dict[int, dict[int, int]] = {}
    row_index: dict[int, set[int]] = defaultdict(set)
    heap = []
    for c, col in enumerate(columns):
        if col:
            cols[c] = dict(col)
            for r in col:
                row_index[r].add(c)
            heapq.heappush(heap, (len(col), c))

    order: list[int] = []
    subs: dict[int, dict[int, int]] = {}
    while heap:
        while heap:
            ln, c = heapq.heappop(heap)
            col = cols.get(c)
            if col is None:
                continue
            if len(col) != ln:
                heapq.heappush(heap, (len(col), c))
                continue
            units = [r for r, v in col.items() if v == 1 or v == -1]
            if not units:
                continue
            g = min(units, key=lambda r: (len(row_index[r]), r))
            a = col[g]
            for c2 in sorted(row_index[g]):
                if c2 == c:
                    continue
                col2 = cols[c2]
                f = col2[g] * a
                for h, v in col.items():
                    nv = col2.get(h, 0) - f * v
                    if nv:
                        if h not in col2:
                            row_index[h].add(c2)
                        col2[h] = nv
                    elif h in col2:
                        del col2[h]
                        row_index[h].discard(c2)
                if col2:
                    heapq.heappush(heap, (len(col2), c2))
                else:
                    del cols[c2]
            for h in col:
                row_index[h].discard(c)
            del cols[c]
            subs[g] = {h: -a * v for h, v in col.items() if h != g}
            order.append(g)
        # fill-in may have created new unit entries in skipped columns
        for c, col in cols.items():
            if any(v == 1 or v == -1 for v in col.values()):
                heapq.heappush(heap, (len(col), c))
    return order, subs, [cols[c] for c in sorted(cols)]


def cokernel_map(M: Matrix) -> CokernelMap:
    """Reduce ``Z^rows / colspan(M)`` to invariant-factor coordinates."""
    order, subs, remaining = _eliminate_units(M.rows, M.columns())
    survivors = [r for r in range(M.rows) if r not in subs]
    pos = {r: k for k, r in enumerate(survivors)}
    s, c = len(survivors), len(remaining)
    A = [[0] * c for _ in range(s)]
    for j, col in enumerate(remaining):
        for r, v in col.items():
            A[pos[r]][j] = v
    U, Ui, _ = _smith(A, s, c)
    diag = [A[i][i] if i < c else 0 for i in range(s)]
    kept = [i for i in range(s) if diag[i] != 1]
    moduli = tuple(diag[i] for i in kept)

    def reduce_col(col):
        out = {}
        for k, d in enumerate(moduli):
            v = col.get(k, 0)
            if d:
                v %= d
            if v:
                out[k] = v
        return out

    projcols: list[dict[int, int] | None] = [None] * M.rows
    for r in survivors:
        p = pos[r]
        projcols[r] = reduce_col({k: U[i][p] for k, i in enumerate(kept) if U[i][p]})
    for g in reversed(order):
        acc: dict[int, int] = {}
        for h, coef in subs[g].items():
            for k, v in projcols[h].items():
                acc[k] = acc.get(k, 0) + coef * v
        projcols[g] = reduce_col(acc)
    proj = Matrix._trusted(len(moduli), M.rows, projcols)
    sect = Matrix._trusted(M.rows, len(moduli), [
        {survivors[p]: Ui[p][i] for p in range(s) if Ui[p][i]} for i in kept])
    return CokernelMap(moduli, proj, sect)


def cokernel_structure(M: Matrix) -> AbelianStructure:
    """Isomorphism type of ``Z^rows / colspan(M)``."""
    return cokernel_map(M).structure
