"""Finitely presented abelian groups and homomorphisms between them.

A :class:`Presentation` is a sorted list of opaque generator codes together
with a relation matrix whose columns are relations.  A :class:`PresentedHom`
is given by a lift to the free covers.  All the group-level questions
(kernels, cokernels, exactness) are answered in the reduced coordinates of
:class:`~lietrees.zlinalg.CokernelMap`, where every presented group becomes
``Z/d1 + ... + Z/dr``; kernels are preimage lattices there.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping

from .zlinalg import (
    AbelianStructure,
    CokernelMap,
    LatticeSolver,
    Matrix,
    cokernel_map,
    hnf,
    kernel_lattice,
    read_zmat,
)


class PresentationError(Exception):
    pass


class DimensionMismatch(PresentationError, ValueError):
    pass


class IllDefinedHom(PresentationError):
    """A lift that does not send source relations into target relations."""

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}


# Optional persistent store for reductions; see ``lietrees.cache``.
_reduction_store = None


def set_reduction_store(store) -> None:
    global _reduction_store
    _reduction_store = store


@dataclass(frozen=True, eq=False)
class Presentation:
    generators: tuple[str, ...]
    relations: Matrix
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if self.relations.rows != len(gens):
            raise DimensionMismatch(
                f"relation matrix has {self.relations.rows} rows for {len(gens)} generators")
        if any(a >= b for a, b in zip(gens, gens[1:])):
            raise ValueError("generator codes must be distinct and sorted")

    @classmethod
    def build(cls, codes: Iterable[str], relations: Iterable[Mapping[str, int]] = (),
              name: str | None = None) -> "Presentation":
        """Presentation from codes and relations keyed by code; sorts and deduplicates."""
        gens = tuple(sorted(set(codes)))
        index = {c: i for i, c in enumerate(gens)}
        seen = set()
        columns = []
        for rel in relations:
            col: dict[int, int] = {}
            for c, v in rel.items():
                if v:
                    i = index[c]
                    col[i] = col.get(i, 0) + v
            col = {i: v for i, v in col.items() if v}
            if not col:
                continue
            key = tuple(sorted(col.items()))
            if key in seen:
                continue
            seen.add(key)
            columns.append(col)
        return cls(gens, Matrix(len(gens), len(columns), columns), name)

    @classmethod
    def free(cls, codes: Iterable[str], name: str | None = None) -> "Presentation":
        return cls.build(codes, (), name)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Presentation):
            return NotImplemented
        return self.generators == other.generators and self.relations == other.relations

    def __hash__(self):
        return hash((self.generators, self.relations.shape, self.relations.nnz))

    def __len__(self):
        return len(self.generators)

    @cached_property
    def index(self) -> dict[str, int]:
        return {c: i for i, c in enumerate(self.generators)}

    def vector(self, combo: Mapping[str, int]) -> dict[int, int]:
        """Sparse free-cover vector of a combination of generator codes."""
        out: dict[int, int] = {}
        for c, v in combo.items():
            if v:
                i = self.index[c]
                out[i] = out.get(i, 0) + v
        return {i: v for i, v in out.items() if v}

    def combo(self, vec: Mapping[int, int]) -> dict[str, int]:
        return {self.generators[i]: v for i, v in sorted(vec.items()) if v}

    @cached_property
    def digest(self) -> str:
        return hashlib.sha256(self.to_zpres().encode()).hexdigest()

    @cached_property
    def reduced(self) -> CokernelMap:
        store = _reduction_store
        if store is not None and self.name:
            cm = store.load_reduction(self)
            if cm is not None:
                return cm
        cm = cokernel_map(self.relations)
        if store is not None and self.name:
            store.save_reduction(self, cm)
        return cm

    @property
    def structure(self) -> AbelianStructure:
        return self.reduced.structure

    def is_zero(self, combo: Mapping[str, int]) -> bool:
        return self.reduced.is_zero(self.vector(combo))

    def to_zpres(self) -> str:
        lines = ["ZPRES 1", str(len(self.generators))]
        lines.extend(self.generators)
        return "\n".join(lines) + "\n" + self.relations.to_zmat()

    @classmethod
    def from_zpres(cls, text: str, name: str | None = None) -> "Presentation":
        lines = text.splitlines()
        if not lines or lines[0].strip() != "ZPRES 1":
            raise ValueError("missing ZPRES header")
        count = int(lines[1])
        gens = tuple(lines[2:2 + count])
        rel, rest = read_zmat(lines[2 + count:])
        if any(line.strip() for line in rest):
            raise ValueError("trailing data after ZPRES block")
        return cls(gens, rel, name)


def group_structure(P: Presentation) -> AbelianStructure:
    return P.structure


def zero_presentation() -> Presentation:
    return Presentation((), Matrix(0, 0))


@dataclass(frozen=True, eq=False)
class PresentedHom:
    """Homomorphism given by images of source generators in the target free cover."""

    source: Presentation
    target: Presentation
    lift: Matrix

    def __post_init__(self):
        if self.lift.shape != (len(self.target), len(self.source)):
            raise DimensionMismatch(
                f"lift is {self.lift.shape}, expected {(len(self.target), len(self.source))}")

    @classmethod
    def build(cls, source: Presentation, target: Presentation,
              image: Callable[[str], Mapping[str, int]]) -> "PresentedHom":
        columns = [target.vector(image(c)) for c in source.generators]
        return cls(source, target, Matrix(len(target), len(source), columns))

    @classmethod
    def zero(cls, source: Presentation, target: Presentation) -> "PresentedHom":
        return cls(source, target, Matrix(len(target), len(source)))

    @classmethod
    def identity(cls, P: Presentation) -> "PresentedHom":
        return cls(P, P, Matrix.identity(len(P)))

    def image_of(self, code: str) -> dict[str, int]:
        return self.target.combo(self.lift.column(self.source.index[code]))

    def __matmul__(self, other: "PresentedHom") -> "PresentedHom":
        """Composition ``self o other``."""
        if other.target != self.source:
            raise DimensionMismatch("composition through different presentations")
        return PresentedHom(other.source, self.target, self.lift @ other.lift)

    @cached_property
    def reduced_matrix(self) -> Matrix:
        """The hom in reduced coordinates: ``proj_target @ lift @ sect_source``."""
        return self.target.reduced.proj @ (self.lift @ self.source.reduced.sect)


def induced_hom_witness(f: PresentedHom) -> dict | None:
    """First source relation whose image is not a target relation, or ``None``."""
    red = f.target.reduced
    for j, col in enumerate(f.source.relations.columns()):
        img = f.lift.apply(col)
        if not red.is_zero(img):
            return {"relation": f.source.combo(col), "image": f.target.combo(img)}
    return None


def check_induced_hom(f: PresentedHom) -> bool:
    return induced_hom_witness(f) is None


def _require_well_defined(f: PresentedHom) -> None:
    w = induced_hom_witness(f)
    if w is not None:
        raise IllDefinedHom("lift does not respect the source relations", w)


def _preimage_basis(f: PresentedHom) -> Matrix:
    """Basis of ``{y : A y = 0 in the target}`` in reduced source coordinates."""
    A = f.reduced_matrix
    s = A.cols
    big = Matrix.hstack(A.rows, A, Matrix.diagonal(f.target.reduced.moduli))
    N = kernel_lattice(big)
    return hnf(N.select_rows(range(s)))


def _codes(n: int, prefix: str) -> list[str]:
    width = max(len(str(n - 1)), 1)
    return [f"{prefix}{i:0{width}d}" for i in range(n)]


def hom_kernel(f: PresentedHom, prefix: str = "k") -> tuple[Presentation, Matrix]:
    """Presentation of ``ker f`` and its generators as source free-cover vectors."""
    _require_well_defined(f)
    basis = _preimage_basis(f)
    moduli = f.source.reduced.moduli
    solver = LatticeSolver(basis)
    columns = []
    for i, d in enumerate(moduli):
        if d:
            v = [0] * basis.rows
            v[i] = d
            x = solver.solve(v)
            assert x is not None, "source relation outside the preimage lattice"
            columns.append({r: c for r, c in enumerate(x) if c})
    pres = Presentation(tuple(_codes(basis.cols, prefix)), Matrix(basis.cols, len(columns), columns))
    return pres, f.source.reduced.sect @ basis


def hom_cokernel(f: PresentedHom) -> AbelianStructure:
    _require_well_defined(f)
    A = f.reduced_matrix
    return cokernel_map(Matrix.hstack(A.rows, A, Matrix.diagonal(f.target.reduced.moduli))).structure


def hom_image_structure(f: PresentedHom) -> AbelianStructure:
    """Isomorphism type of ``f(source)``, via ``source / ker``."""
    K, emb = hom_kernel(f)
    A = f.source.reduced.proj @ emb
    return cokernel_map(Matrix.hstack(A.rows, A, Matrix.diagonal(f.source.reduced.moduli))).structure


def is_injective(f: PresentedHom) -> bool:
    return hom_kernel(f)[0].structure.is_trivial


def is_surjective(f: PresentedHom) -> bool:
    return hom_cokernel(f).is_trivial


def exactness_witness(f: PresentedHom, g: PresentedHom) -> dict | None:
    """Check ``im f == ker g`` as lattices in the middle group.

    Returns ``None`` when exact, otherwise the first middle element that
    lies in one side but not the other.
    """
    if f.target != g.source:
        raise DimensionMismatch("f.target and g.source are different presentations")
    _require_well_defined(f)
    _require_well_defined(g)
    mid = f.target.reduced
    rel = Matrix.diagonal(mid.moduli)
    image = Matrix.hstack(mid.size, f.reduced_matrix, rel)
    kernel = Matrix.hstack(mid.size, _preimage_basis(g), rel)
    for name, lhs, rhs in (("image-not-in-kernel", image, kernel),
                           ("kernel-not-in-image", kernel, image)):
        solver = LatticeSolver(rhs)
        for j in range(lhs.cols):
            if not solver.contains(lhs.dense_column(j)):
                element = mid.sect.apply(lhs.column(j))
                return {"failure": name, "element": f.target.combo(element)}
    return None


def check_exact(f: PresentedHom, g: PresentedHom) -> bool:
    return exactness_witness(f, g) is None


def homs_equal(f: PresentedHom, g: PresentedHom) -> bool:
    """Equality as maps of presented groups: lifts agree modulo target relations."""
    if f.source != g.source or f.target != g.target:
        raise DimensionMismatch("homs between different presentations")
    diff = f.lift - g.lift
    red = f.target.reduced
    return all(red.is_zero(c) for c in diff.columns())


def tensor_with_free(P: Presentation, n: int) -> Presentation:
    """``Z^n (x) P``: generators ``i@code``, relations ``e_i (x) r``."""
    if n < 0:
        raise ValueError("negative rank")
    codes = [f"{i}@{c}" for i in range(1, n + 1) for c in P.generators]
    rels = []
    for i in range(1, n + 1):
        for col in P.relations.columns():
            rels.append({f"{i}@{P.generators[r]}": v for r, v in col.items()})
    name = f"H{n}x{P.name}" if P.name else None
    return Presentation.build(codes, rels, name)


def tensor_hom_with_free(f: PresentedHom, n: int, source: Presentation | None = None,
                         target: Presentation | None = None) -> PresentedHom:
    """``1 (x) f`` on ``Z^n (x) source``.

    Already-built tensor presentations may be passed in to share their
    cached reductions.
    """
    src = tensor_with_free(f.source, n) if source is None else source
    tgt = tensor_with_free(f.target, n) if target is None else target

    def image(code):
        i, _, c = code.partition("@")
        return {f"{i}@{t}": v for t, v in f.image_of(c).items()}

    return PresentedHom.build(src, tgt, image)


def inclusion(sub: Presentation, ambient: Presentation, embedding: Matrix) -> PresentedHom:
    return PresentedHom(sub, ambient, embedding)


def corestrict(f: PresentedHom, sub: Presentation, embedding: Matrix) -> PresentedHom:
    """Factor ``f`` through a subgroup ``sub -> f.target`` given by ``embedding``.

    Raises :class:`IllDefinedHom` when some generator's image is outside
    the subgroup.
    """
    red = f.target.reduced
    E = red.proj @ embedding
    solver = LatticeSolver(Matrix.hstack(red.size, E, Matrix.diagonal(red.moduli)))
    columns = []
    for j in range(f.lift.cols):
        v = red.reduce(f.lift.column(j))
        x = solver.solve(list(v))
        if x is None:
            raise IllDefinedHom("image leaves the subgroup",
                                {"generator": f.source.generators[j],
                                 "image": f.target.combo(f.lift.column(j))})
        columns.append({r: c for r, c in enumerate(x[:E.cols]) if c})
    return PresentedHom(f.source, sub, Matrix(len(sub), len(f.source), columns))


def reduction_to_text(cm: CokernelMap) -> str:
    head = f"ZRED 1 {len(cm.moduli)}\n" + " ".join(map(str, cm.moduli)) + "\n"
    return head + cm.proj.to_zmat() + cm.sect.to_zmat()


def reduction_from_text(text: str) -> CokernelMap:
    lines = text.splitlines()
    head = lines[0].split()
    if head[:2] != ["ZRED", "1"]:
        raise ValueError("missing ZRED header")
    moduli = tuple(int(x) for x in lines[1].split())
    if len(moduli) != int(head[2]):
        raise ValueError("modulus count mismatch")
    proj, rest = read_zmat(lines[2:])
    sect, rest = read_zmat(rest)
    if any(line.strip() for line in rest):
        raise ValueError("trailing data after ZRED block")
    return CokernelMap(moduli, proj, sect)
