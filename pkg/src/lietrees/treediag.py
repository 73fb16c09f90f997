"""Tree diagrams ``A^t_k(H)`` and the maps ``eta'``, ``rho``, ``eta`` and ``tau``.

``A^t_k`` is presented on rooted generators ``i@T`` (``T`` with ``k+1``
leaves, so ``k`` trivalent vertices and ``k+2`` univalent ones).  Its
relations are those of ``H (x) L'_{k+1}`` plus one rerooting relation
``reroot(i@T, w) - i@T`` per leaf, which identifies all rootings of the
same unrooted planar tree.  With this choice ``rho`` is the identity on
codes and ``eta'`` is a sum over rerootings.
"""

from __future__ import annotations

from functools import lru_cache

from .checks import Check, check
from .presented import (
    Matrix,
    Presentation,
    PresentedHom,
    exactness_witness,
    hom_kernel,
    homs_equal,
    induced_hom_witness,
)
from .quasilie import (
    betaprime_hom,
    d_presentation,
    dprime_group,
    lprime_presentation,
    tensor_gamma,
    tensor_lprime,
)
from .trees import Tree, degree, format_code, labeled_trees, parse_code, relation_terms
from .trees import reroot as _reroot
from .trees import reroot_towards


def reroot_code(code: str, w: int) -> str:
    """Code of ``code`` rerooted at its ``w``-th leaf (0-based, left to right)."""
    root, t = parse_code(code)
    if root is None:
        raise ValueError(f"{code!r} has no labelled root")
    r, tree = _reroot(root, t, w)
    return format_code(tree, r)


def rerootings(root: int, t: Tree) -> list[tuple[int, Tree]]:
    """All ``k+2`` rootings of ``root@t``, starting with ``root@t`` itself."""
    return [(root, t)] + [_reroot(root, t, w) for w in range(degree(t))]


def _tensor_relations(n: int, k: int):
    for t in labeled_trees(n, k + 1):
        for rel in relation_terms(t):
            for i in range(1, n + 1):
                out: dict[str, int] = {}
                for c, x in rel:
                    code = format_code(x, i)
                    out[code] = out.get(code, 0) + c
                yield out


def _reroot_relations(n: int, k: int):
    for t in labeled_trees(n, k + 1):
        for i in range(1, n + 1):
            base = format_code(t, i)
            for r, x in rerootings(i, t)[1:]:
                code = format_code(x, r)
                if code != base:
                    yield {base: -1, code: 1}


@lru_cache(maxsize=None)
def at_presentation(n: int, k: int) -> Presentation:
    """``A^t_k(H)``: labelled unitrivalent trees with ``k`` trivalent vertices."""
    codes = [format_code(t, i) for t in labeled_trees(n, k + 1) for i in range(1, n + 1)]
    rels = list(_tensor_relations(n, k)) + list(_reroot_relations(n, k))
    return Presentation.build(codes, rels, name=f"At-n{n}-k{k}")


def _eta_image(code: str) -> dict[str, int]:
    root, t = parse_code(code)
    out: dict[str, int] = {}
    for r, x in rerootings(root, t):
        c = format_code(x, r)
        out[c] = out.get(c, 0) + 1
    return out


@lru_cache(maxsize=None)
def etaprime_hom(n: int, k: int) -> PresentedHom:
    """``A^t_k -> H (x) L'_{k+1}``: sum of the rootings at all ``k+2`` univalent vertices."""
    return PresentedHom.build(at_presentation(n, k), tensor_lprime(n, k + 1), _eta_image)


@lru_cache(maxsize=None)
def rho_hom(n: int, k: int) -> PresentedHom:
    """``H (x) L'_{k+1} -> A^t_k``: forget which univalent vertex is the root."""
    return PresentedHom.build(tensor_lprime(n, k + 1), at_presentation(n, k), lambda c: {c: 1})


@lru_cache(maxsize=None)
def eta_hom(n: int, k: int) -> PresentedHom:
    """``A^t_k -> H (x) L_{k+1}``, the composite ``(1 (x) gamma) o eta'``."""
    return tensor_gamma(n, k + 1) @ etaprime_hom(n, k)


@lru_cache(maxsize=None)
def kernel_etaprime(n: int, k: int) -> tuple[Presentation, Matrix]:
    return hom_kernel(etaprime_hom(n, k))


def ker_etaprime(n: int, k: int):
    return kernel_etaprime(n, k)[0].structure


def _tau_image(code: str) -> dict[str, int]:
    _, t = parse_code(code)
    a, b = t
    out: dict[str, int] = {}
    for w in range(degree(a)):
        r, x = reroot_towards(a, w, b)
        c = format_code(x, r)
        out[c] = out.get(c, 0) + 1
    return out


@lru_cache(maxsize=None)
def tensor_mod_eta(n: int, k: int) -> Presentation:
    """``H (x) L'_{k+1} / eta'(A^t_k)``."""
    P = tensor_lprime(n, k + 1)
    eta = etaprime_hom(n, k)
    rels = [P.combo(c) for c in P.relations.columns()]
    rels += [P.combo(c) for c in eta.lift.columns()]
    return Presentation.build(P.generators, rels, name=f"HLqModEta-n{n}-k{k}")


@lru_cache(maxsize=None)
def tau_hom(n: int, k: int) -> PresentedHom:
    """``L'_{k+2} -> H (x) L'_{k+1} / eta'(A^t_k)``.

    A tree ``(A, B)`` goes to the sum, over leaves ``w`` of ``A`` only, of the
    tree obtained by joining ``A`` to ``B`` directly and rooting at ``w``.
    """
    return PresentedHom.build(lprime_presentation(n, k + 2), tensor_mod_eta(n, k), _tau_image)


def tau_check(n: int, k: int) -> list[Check]:
    tau = tau_hom(n, k)
    w = induced_hom_witness(tau)
    out = [check("tau-well-defined", w is None, "relations of L'_{k+2} land in im eta'", w)]
    Q = tau.target
    bp = betaprime_hom(n, k)
    composite = PresentedHom(bp.source, Q, tau.lift @ bp.lift)
    projection = PresentedHom.build(bp.source, Q, lambda c: {c: 1})
    out.append(check("tau-beta'-is-projection", homs_equal(composite, projection)))
    w = exactness_witness(etaprime_hom(n, k), bp)
    out.append(check("ker-beta'-equals-im-eta'", w is None, witness=w))
    return out


def lemma_root_checks(n: int, k: int) -> list[Check]:
    eta = etaprime_hom(n, k)
    w = induced_hom_witness(eta)
    out = [check("eta'-well-defined", w is None, witness=w)]
    bp = betaprime_hom(n, k)
    target = bp.target
    bad = None
    for j, col in enumerate((bp.lift @ eta.lift).columns()):
        if not target.reduced.is_zero(col):
            bad = {"generator": eta.source.generators[j], "image": target.combo(col)}
            break
    out.append(check("im-eta'-in-D'", bad is None, "beta' o eta' = 0", bad))
    return out


def rho_eta_checks(n: int, k: int) -> list[Check]:
    rho, eta = rho_hom(n, k), etaprime_hom(n, k)
    w = induced_hom_witness(rho)
    out = [check("rho-well-defined", w is None, witness=w)]
    A = eta.source
    scaled = PresentedHom(A, A, Matrix.identity(len(A)).scale(k + 2))
    out.append(check("rho-eta'-is-(k+2)", homs_equal(rho @ eta, scaled), f"multiplication by {k + 2}"))
    return out


def _odd_part(m: int) -> int:
    while m and m % 2 == 0:
        m //= 2
    return m


def thm_tree_checks(n: int, k: int) -> list[Check]:
    eta = etaprime_hom(n, k)
    A = eta.source.structure
    ker = ker_etaprime(n, k)
    Dq = dprime_group(n, k)[0].structure
    out = []
    w = exactness_witness(eta, betaprime_hom(n, k))
    out.append(check("eta'-onto-D'", w is None, witness=w))
    out.append(check("kernel-killed-by-k+2",
                     ker.is_finite and all((k + 2) % t == 0 for t in ker.torsion),
                     f"ker eta' = {ker}", {"kernel": ker.to_dict()}))
    if k % 2 == 0:
        out.append(check("kernel-is-torsion", ker.is_finite and ker.torsion_order == A.torsion_order,
                         f"|ker| = {ker.torsion_order}, |tors A^t| = {A.torsion_order}",
                         {"kernel": ker.to_dict(), "At": A.to_dict()}))
    else:
        out.append(check("kernel-is-odd-torsion",
                         ker.is_finite and ker.torsion_order == _odd_part(A.torsion_order),
                         f"|ker| = {ker.torsion_order}, odd part of |tors A^t| = {_odd_part(A.torsion_order)}",
                         {"kernel": ker.to_dict(), "At": A.to_dict()}))
    # a short exact sequence of f.g. abelian groups with middle term
    # isomorphic to the direct sum of the ends splits
    out.append(check("split", A == ker.direct_sum(Dq),
                     f"A^t = {A}, ker + D' = {ker.direct_sum(Dq)}"))
    return out


def cor_rational_checks(n: int, k: int) -> list[Check]:
    a = at_presentation(n, k).structure.free_rank
    dq = dprime_group(n, k)[0].structure.free_rank
    d = d_presentation(n, k)[0].structure.free_rank
    e = eta_hom(n, k)
    K, _ = hom_kernel(e)
    img = a - K.structure.free_rank
    return [
        check("rank-At-equals-rank-D'-equals-rank-D", a == dq == d,
              f"ranks {a}, {dq}, {d}", {"At": a, "Dq": dq, "D": d}),
        check("eta-rationally-onto", img == d, f"rank im eta = {img}", {"image_rank": img, "D": d}),
    ]


def eta_injectivity(n: int, k: int) -> tuple[bool, dict]:
    """Evidence on whether ``eta'_k`` is injective: verdict and a kernel element."""
    K, emb = kernel_etaprime(n, k)
    if K.structure.is_trivial:
        return True, {}
    src = etaprime_hom(n, k).source
    red = K.reduced
    cols = (emb @ red.sect).columns()
    for col, d in zip(cols, red.moduli):
        if not src.is_zero(src.combo(col)):
            return False, {"kernel": K.structure.to_dict(), "order": d, "element": src.combo(col)}
    return False, {"kernel": K.structure.to_dict()}


def unrooted_certificate(code: str) -> str:
    """Canonical form of the unrooted planar tree: minimum code over all rootings."""
    root, t = parse_code(code)
    return min(format_code(x, r) for r, x in rerootings(root, t))

