import pytest

from lietrees.presented import (
    DimensionMismatch,
    IllDefinedHom,
    Presentation,
    PresentedHom,
    check_exact,
    check_induced_hom,
    group_structure,
    hom_cokernel,
    hom_kernel,
    reduction_from_text,
    reduction_to_text,
    tensor_with_free,
    zero_presentation,
)
from lietrees.zlinalg import AbelianStructure, Matrix

Z = Presentation.free(["g"])
Z2 = Presentation.build(["g"], [{"g": 2}])


def hom(src, tgt, entries):
    return PresentedHom(src, tgt, Matrix.from_rows(entries, cols=len(src)))


def test_group_structure_examples():
    assert group_structure(Z2) == AbelianStructure(0, (2,))
    assert group_structure(Presentation.free(["a", "b"])) == AbelianStructure(2)
    P = Presentation.build(["a", "b"], [{"a": 1, "b": 1}, {"a": 1, "b": -1}])
    assert group_structure(P) == AbelianStructure(0, (2,))


def test_build_sorts_and_deduplicates():
    P = Presentation.build(["b", "a", "b"], [{"a": 2}, {"a": 2}, {"b": 0}])
    assert P.generators == ("a", "b")
    assert P.relations.cols == 1


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        Presentation(("a",), Matrix.zeros(2, 0))
    with pytest.raises(DimensionMismatch):
        PresentedHom(Z, Z, Matrix.zeros(2, 1))


def test_induced_hom_examples():
    assert check_induced_hom(PresentedHom.identity(Z2))
    assert check_induced_hom(hom(Z, Z2, [[1]]))
    assert not check_induced_hom(hom(Z2, Z, [[1]]))


def test_kernel_examples():
    assert hom_kernel(hom(Z, Z, [[2]]))[0].structure.is_trivial
    assert hom_kernel(hom(Z, Z, [[0]]))[0].structure == AbelianStructure(1)
    K, emb = hom_kernel(hom(Z, Z2, [[1]]))
    assert K.structure == AbelianStructure(1)
    assert emb.to_rows() in ([[2]], [[-2]])


def test_kernel_refuses_ill_defined():
    with pytest.raises(IllDefinedHom) as exc:
        hom_kernel(hom(Z2, Z, [[1]]))
    assert exc.value.witness["relation"] == {"g": 2}


def test_cokernel_examples():
    assert hom_cokernel(hom(Z, Z, [[1]])).is_trivial
    assert hom_cokernel(hom(Z, Z, [[3]])) == AbelianStructure(0, (3,))
    assert hom_cokernel(hom(Z, Z2, [[0]])) == AbelianStructure(0, (2,))


def test_exactness_examples():
    zero = zero_presentation()
    assert check_exact(PresentedHom.zero(zero, Z), PresentedHom.identity(Z))
    assert check_exact(hom(Z, Z, [[2]]), hom(Z, Z2, [[1]]))
    assert not check_exact(hom(Z, Z, [[4]]), hom(Z, Z2, [[1]]))


def test_exactness_zero_then_injective():
    zero = zero_presentation()
    assert check_exact(PresentedHom.zero(zero, Z), hom(Z, Z, [[2]]))
    assert not check_exact(PresentedHom.zero(zero, Z), hom(Z, Z, [[0]]))


def test_tensor_with_free_examples():
    assert tensor_with_free(Z, 2).structure == AbelianStructure(2)
    assert tensor_with_free(Z2, 1).structure == AbelianStructure(0, (2,))
    assert tensor_with_free(Z2, 2).structure == AbelianStructure(0, (2, 2))
    assert tensor_with_free(Z2, 2).generators == ("1@g", "2@g")


def test_composition():
    f = hom(Z, Z, [[2]])
    g = hom(Z, Z2, [[1]])
    assert (g @ f).lift.to_rows() == [[2]]
    with pytest.raises(DimensionMismatch):
        f @ g


def test_zpres_roundtrip():
    P = Presentation.build(["(1,2)", "(2,1)", "1@(1,1)"], [{"(1,2)": 1, "(2,1)": 1}, {"1@(1,1)": 2}])
    text = P.to_zpres()
    assert text.startswith("ZPRES 1\n3\n")
    Q = Presentation.from_zpres(text)
    assert Q == P and Q.digest == P.digest


def test_reduction_roundtrip():
    P = Presentation.build(["a", "b", "c"], [{"a": 2, "b": 4}, {"b": 6, "c": 3}])
    cm = P.reduced
    back = reduction_from_text(reduction_to_text(cm))
    assert back.moduli == cm.moduli
    assert back.proj == cm.proj and back.sect == cm.sect
