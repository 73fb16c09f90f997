import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lietrees.zlinalg import (
    AbelianStructure,
    LatticeSolver,
    Matrix,
    cokernel_map,
    cokernel_structure,
    hnf,
    kernel_lattice,
    lattice_member,
    read_zmat,
    snf,
)

import oracle


def det(rows):
    """Integer determinant by cofactor-free Bareiss elimination."""
    M = [list(r) for r in rows]
    n = len(M)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[-1][-1] if n else 1


matrices = st.integers(1, 7).flatmap(
    lambda m: st.integers(1, 7).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m)))


def test_snf_identity():
    assert snf(Matrix.identity(3)).S == Matrix.identity(3)


def test_snf_diag_2_3():
    assert snf(Matrix.diagonal([2, 3])).S == Matrix.diagonal([1, 6])


def test_snf_zero():
    assert snf(Matrix.zeros(2, 4)).S == Matrix.zeros(2, 4)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_invariants(rows):
    M = Matrix.from_rows(rows)
    sf = snf(M)
    assert sf.U @ M @ sf.V == sf.S
    assert abs(det(sf.U.to_rows())) == 1
    assert abs(det(sf.V.to_rows())) == 1
    S = sf.S.to_rows()
    assert all(S[i][j] == 0 for i in range(M.rows) for j in range(M.cols) if i != j)
    d = sf.diagonal
    assert all(x >= 0 for x in d)
    nz = [x for x in d if x]
    assert d[:len(nz)] == nz
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert nz == oracle.smith_diagonal(rows)


def test_kernel_examples():
    K = kernel_lattice(Matrix.from_rows([[1, 1]]))
    assert K.shape == (2, 1)
    assert K.dense_column(0) in ([1, -1], [-1, 1])
    assert kernel_lattice(Matrix.identity(2)).cols == 0
    assert kernel_lattice(Matrix.zeros(1, 3)).cols == 3


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_kernel_is_saturated(rows):
    M = Matrix.from_rows(rows)
    K = kernel_lattice(M)
    assert (M @ K).is_zero()
    assert K.cols == M.cols - snf(M).rank
    # saturated: the cokernel of K in Z^cols is free
    if K.cols:
        assert cokernel_structure(K).torsion == ()
    ref = oracle.integer_kernel(rows, M.cols)
    for v in ref:
        assert LatticeSolver(K).contains(v)


def test_cokernel_examples():
    assert cokernel_structure(Matrix.from_rows([[2]])) == AbelianStructure(0, (2,))
    assert cokernel_structure(Matrix.diagonal([2, 3])) == AbelianStructure(0, (6,))
    assert cokernel_structure(Matrix.zeros(2, 1)) == AbelianStructure(2, ())


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_cokernel_map_consistency(rows):
    M = Matrix.from_rows(rows)
    cm = cokernel_map(M)
    free, tors = oracle.cokernel(rows, M.rows)
    assert cm.structure == AbelianStructure(free, tuple(tors))
    # every relation vanishes, and proj o sect is the identity modulo moduli
    for col in M.columns():
        assert cm.is_zero(col)
    ps = cm.proj @ cm.sect
    for i, d in enumerate(cm.moduli):
        for j in range(cm.size):
            want = int(i == j)
            assert (ps[i, j] - want) % d == 0 if d else ps[i, j] == want


def test_lattice_member_examples():
    assert lattice_member(Matrix.from_rows([[2]]), [4]) == [2]
    assert lattice_member(Matrix.from_rows([[2]]), [3]) is None
    assert lattice_member(Matrix.diagonal([2, 3]), [2, 3]) == [1, 1]


@settings(max_examples=60, deadline=None)
@given(matrices, st.data())
def test_lattice_member_roundtrip(rows, data):
    M = Matrix.from_rows(rows)
    x = data.draw(st.lists(st.integers(-5, 5), min_size=M.cols, max_size=M.cols))
    v = M.apply(dict(enumerate(x)))
    dense = [v.get(i, 0) for i in range(M.rows)]
    y = lattice_member(M, dense)
    assert y is not None
    assert M.apply(dict(enumerate(y))) == v


def test_hnf_is_canonical():
    A = Matrix.from_rows([[2, 4], [0, 6]])
    B = Matrix.from_rows([[2, 6], [0, 6]])  # same lattice, different basis
    assert hnf(A) == hnf(B)


def test_zmat_roundtrip():
    rng = random.Random(7)
    for _ in range(20):
        m, n = rng.randint(0, 6), rng.randint(0, 6)
        M = Matrix.from_rows([[rng.choice([0, 0, 1, -3, 12]) for _ in range(n)] for _ in range(m)], cols=n)
        text = M.to_zmat()
        assert Matrix.from_zmat(text) == M
        assert text.splitlines()[0] == f"ZMAT 1 {m} {n} {M.nnz}"
        N, rest = read_zmat(text.splitlines() + ["tail"])
        assert N == M and list(rest) == ["tail"]


def test_zmat_rejects_bad_header():
    with pytest.raises(ValueError):
        Matrix.from_zmat("ZMAT 2 1 1 0\n")


def test_abelian_structure_text():
    assert str(AbelianStructure(2, (2,))) == "Z^2 + Z/2"
    assert str(AbelianStructure()) == "0"
    with pytest.raises(ValueError):
        AbelianStructure(0, (4, 2))
