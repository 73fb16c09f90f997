"""The graded free quasi-Lie ring ``L'(H)`` and its comparison with ``L(H)``.

``L'_k`` is presented on all planar binary trees with ``k`` labelled leaves,
modulo antisymmetry ``[x,y] + [y,x] = 0`` at every vertex and the Jacobi
identity at every internal edge.  Unlike a Lie ring, ``[x,x]`` need not
vanish; only ``2[x,x] = 0`` holds.

Lyndon bracketings are themselves tree codes, so the free Lie ring ``L_k``
is presented here on those same codes, and the section ``L -> L'`` used by
the connecting map is the identity on codes.
"""

from __future__ import annotations

from functools import lru_cache

from . import freelie
from .checks import Check, check
from .presented import (
    IllDefinedHom,
    Matrix,
    Presentation,
    PresentedHom,
    check_induced_hom,
    corestrict,
    exactness_witness,
    hom_cokernel,
    hom_kernel,
    inclusion,
    induced_hom_witness,
    tensor_hom_with_free,
    tensor_with_free,
    zero_presentation,
)
from .trees import Tree, format_tree, labeled_trees, parse_code, relation_terms


def _terms_to_combo(terms: list[tuple[int, Tree]]) -> dict[str, int]:
    out: dict[str, int] = {}
    for c, t in terms:
        code = format_tree(t)
        out[code] = out.get(code, 0) + c
    return {k: v for k, v in out.items() if v}


def quasi_relations(n: int, k: int):
    """Every AS and Jacobi relation of degree ``k``, one per vertex/edge per tree."""
    for t in labeled_trees(n, k):
        for rel in relation_terms(t):
            yield _terms_to_combo(rel)


@lru_cache(maxsize=None)
def lprime_presentation(n: int, k: int) -> Presentation:
    codes = [format_tree(t) for t in labeled_trees(n, k)]
    return Presentation.build(codes, quasi_relations(n, k), name=f"Lq-n{n}-k{k}")


@lru_cache(maxsize=None)
def lie_presentation(n: int, k: int) -> Presentation:
    """``L_k`` as a free group on Lyndon bracketing codes."""
    return Presentation.free((freelie.lyndon_code(w) for w in freelie.lyndon_words(n, k)),
                             name=f"L-n{n}-k{k}")


@lru_cache(maxsize=None)
def tensor_lprime(n: int, k: int) -> Presentation:
    """``H (x) L'_k``, generators ``i@tree``."""
    return tensor_with_free(lprime_presentation(n, k), n)


@lru_cache(maxsize=None)
def tensor_lie(n: int, k: int) -> Presentation:
    return tensor_with_free(lie_presentation(n, k), n)


def _lie_image(n: int, k: int):
    codes = [freelie.lyndon_code(w) for w in freelie.lyndon_words(n, k)]

    def image(code: str) -> dict[str, int]:
        _, t = parse_code(code)
        coords = freelie.tree_coords(t, n, k)
        return {codes[i]: c for i, c in enumerate(coords) if c}

    return image


@lru_cache(maxsize=None)
def gamma_hom(n: int, k: int) -> PresentedHom:
    """The comparison map ``L'_k -> L_k``."""
    return PresentedHom.build(lprime_presentation(n, k), lie_presentation(n, k), _lie_image(n, k))


@lru_cache(maxsize=None)
def tensor_gamma(n: int, k: int) -> PresentedHom:
    """``1 (x) gamma_k : H (x) L'_k -> H (x) L_k``."""
    return tensor_hom_with_free(gamma_hom(n, k), n, tensor_lprime(n, k), tensor_lie(n, k))


@lru_cache(maxsize=None)
def kernel_gamma(n: int, k: int) -> tuple[Presentation, Matrix]:
    """``K_k``, generated by the brackets containing a square ``[a,a]``."""
    return hom_kernel(gamma_hom(n, k))


def lie_mod2_presentation(n: int, l: int) -> Presentation:
    """``L_l / 2 L_l`` on Lyndon bracketing codes."""
    codes = [freelie.lyndon_code(w) for w in freelie.lyndon_words(n, l)]
    return Presentation.build(codes, ({c: 2} for c in codes))


@lru_cache(maxsize=None)
def square_hom(n: int, l: int) -> PresentedHom:
    """``L_l / 2L_l -> L'_{2l}``, a Lyndon bracketing ``a`` going to ``[a, a]``."""
    def image(code):
        t = parse_code(code)[1]
        return {format_tree((t, t)): 1}

    return PresentedHom.build(lie_mod2_presentation(n, l), lprime_presentation(n, 2 * l), image)


@lru_cache(maxsize=None)
def squaring_lprime(n: int, l: int) -> PresentedHom:
    """``L'_l -> L'_{2l}``, extended linearly from ``T -> (T, T)`` on trees.

    Additive because cross terms ``[a,b] + [b,a]`` vanish and ``2[a,a] = 0``.
    """
    def image(code):
        t = parse_code(code)[1]
        return {format_tree((t, t)): 1}

    return PresentedHom.build(lprime_presentation(n, l), lprime_presentation(n, 2 * l), image)


@lru_cache(maxsize=None)
def betaprime_hom(n: int, k: int) -> PresentedHom:
    """``H (x) L'_{k+1} -> L'_{k+2}``, grafting ``i@T`` to ``(i, T)``."""
    def image(code):
        i, t = parse_code(code)
        return {format_tree((i, t)): 1}

    return PresentedHom.build(tensor_lprime(n, k + 1), lprime_presentation(n, k + 2), image)


@lru_cache(maxsize=None)
def beta_hom(n: int, k: int) -> PresentedHom:
    """The Lie bracket ``H (x) L_{k+1} -> L_{k+2}`` on free presentations."""
    lie = _lie_image(n, k + 2)

    def image(code):
        i, t = parse_code(code)
        return lie(format_tree((i, t)))

    return PresentedHom.build(tensor_lie(n, k + 1), lie_presentation(n, k + 2), image)


@lru_cache(maxsize=None)
def dprime_group(n: int, k: int) -> tuple[Presentation, Matrix]:
    """``D'_k = ker beta'_k`` with its embedding into ``H (x) L'_{k+1}``."""
    return hom_kernel(betaprime_hom(n, k))


@lru_cache(maxsize=None)
def d_presentation(n: int, k: int) -> tuple[Presentation, Matrix]:
    """``D_k = ker beta_k`` with its embedding into ``H (x) L_{k+1}``."""
    return hom_kernel(beta_hom(n, k))


def lie_section(n: int, k: int) -> PresentedHom:
    """``H (x) L_k -> H (x) L'_k`` sending a Lyndon bracketing to the same tree."""
    return PresentedHom.build(tensor_lie(n, k), tensor_lprime(n, k), lambda c: {c: 1})


def dprime_to_d(n: int, k: int) -> PresentedHom:
    """Restriction of ``1 (x) gamma_{k+1}`` to ``D'_k -> D_k``."""
    Dq, embq = dprime_group(n, k)
    D, embd = d_presentation(n, k)
    f = tensor_gamma(n, k + 1) @ inclusion(Dq, tensor_lprime(n, k + 1), embq)
    return corestrict(f, D, embd)


def connecting_hom(n: int, k: int) -> PresentedHom:
    """``D_k -> K_{k+2}``: lift through ``1 (x) gamma``, then bracket."""
    D, embd = d_presentation(n, k)
    K, embk = kernel_gamma(n, k + 2)
    f = betaprime_hom(n, k) @ lie_section(n, k + 1) @ inclusion(D, tensor_lie(n, k + 1), embd)
    return corestrict(f, K, embk)


def tensor_k_to_dprime(n: int, k: int) -> PresentedHom:
    """``H (x) K_{k+1} -> D'_k``, ``h (x) kappa -> h (x) kappa``."""
    K, embk = kernel_gamma(n, k + 1)
    Dq, embq = dprime_group(n, k)
    f = tensor_hom_with_free(inclusion(K, lprime_presentation(n, k + 1), embk), n,
                             target=tensor_lprime(n, k + 1))
    return corestrict(f, Dq, embq)


def _joint(name: str, f: PresentedHom, g: PresentedHom) -> Check:
    w = exactness_witness(f, g)
    return check(name, w is None, witness=w)


def snake_verify(n: int, k: int) -> list[Check]:
    """Exactness of the two short exact sequences comparing ``D'_k`` and ``D_k``.

    Even ``k``: ``0 -> D'_k -> D_k -> K_{k+2} -> 0``.
    Odd ``k``: ``0 -> H (x) K_{k+1} -> D'_k -> D_k -> 0``.
    """
    zero = zero_presentation()
    try:
        if k % 2 == 0:
            first, second = dprime_to_d(n, k), connecting_hom(n, k)
            label = "0 -> D'_k -> D_k -> K_{k+2} -> 0"
        else:
            first, second = tensor_k_to_dprime(n, k), dprime_to_d(n, k)
            label = "0 -> H(x)K_{k+1} -> D'_k -> D_k -> 0"
    except IllDefinedHom as e:
        return [check("maps-well-defined", False, str(e), e.witness)]
    out = [check("maps-well-defined", check_induced_hom(first) and check_induced_hom(second), label)]
    out.append(_joint("left-injective", PresentedHom.zero(zero, first.source), first))
    out.append(_joint("middle-exact", first, second))
    out.append(_joint("right-surjective", second, PresentedHom.zero(second.target, zero)))
    return out


def lemma_quasi_checks(n: int, k: int) -> list[Check]:
    """``gamma_k`` is onto; iso for odd ``k``; for ``k = 2l`` its kernel is the image of squaring."""
    g = gamma_hom(n, k)
    w = induced_hom_witness(g)
    out = [check("gamma-well-defined", w is None, witness=w)]
    out.append(check("gamma-onto", hom_cokernel(g).is_trivial))
    K, _ = kernel_gamma(n, k)
    ks = K.structure
    if k % 2:
        out.append(check("kernel-trivial", ks.is_trivial, f"K_{k} = {ks}", {"K": ks.to_dict()}))
        return out
    l = k // 2
    out.append(check("kernel-2-torsion", ks.free_rank == 0 and all(t == 2 for t in ks.torsion),
                     f"K_{k} = {ks}", {"K": ks.to_dict()}))
    sq = square_hom(n, l)
    w = induced_hom_witness(sq)
    out.append(check("square-well-defined", w is None, witness=w))
    sql = squaring_lprime(n, l)
    w = induced_hom_witness(sql)
    out.append(check("square-additive-on-L'", w is None, witness=w))
    Kl, embl = kernel_gamma(n, l)
    killed = all(sql.target.is_zero(sql.target.combo(c))
                 for c in (sql.lift @ embl).columns())
    out.append(check("square-kills-K_l", killed))
    w = exactness_witness(sq, g)
    out.append(check("image-square-equals-K", w is None, witness=w))
    return out


def square_injectivity(n: int, l: int) -> tuple[bool, dict]:
    """Evidence for injectivity of ``L_l/2L_l -> L'_{2l}``: verdict and witness."""
    K, emb = hom_kernel(square_hom(n, l))
    if K.structure.is_trivial:
        return True, {}
    src = square_hom(n, l).source
    red = K.reduced
    for i, d in enumerate(red.moduli):
        col = (emb @ red.sect).column(i)
        combo = {c: v % 2 for c, v in src.combo(col).items() if v % 2}
        if combo:
            return False, {"kernel": K.structure.to_dict(), "element": combo}
    return False, {"kernel": K.structure.to_dict()}


def structures(n: int, k: int) -> dict[str, object]:
    return {
        "L": freelie.witt_dim(n, k),
        "Lq": lprime_presentation(n, k).structure,
        "K": kernel_gamma(n, k)[0].structure,
    }
