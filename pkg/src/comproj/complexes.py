"""Complexes of projective modules with prescribed terms and ranks.

Maps between sums of indecomposable projectives are stored in path
coordinates: the component from a copy of ``P_a`` to a copy of ``P_b`` is a
vector over the basis paths ``b -> a`` (the image of the generator ``e_a``).
This is the block-matrix display used for the worked examples.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .algebra import Algebra, NotProjectiveDimensionError, proj_multiplicities
from .linalg import PrimeField
from .representations import (
    GradedMap,
    Representation,
    Violation,
    cokernel_rep,
    corestrict,
    is_iso,
    kernel_rep,
    projective_power,
)


class StratumPossiblyEmpty(RuntimeError):
    pass


class InfeasibleProfile(ValueError):
    pass


Vector = tuple[int, ...]


def _vec(v: Iterable[int]) -> Vector:
    return tuple(int(x) for x in v)


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return int(sum(int(x) * int(y) for x, y in zip(a, b)))


# --------------------------------------------------------------------------
# finitely supported arrays of dimension vectors


@dataclass(frozen=True)
class DimArray:
    """``i -> d_i`` with zero vectors outside ``[start, start + len - 1]``.

    Leading and trailing zero vectors are trimmed, so equal arrays compare equal.
    """

    n: int
    start: int = 0
    vectors: tuple[Vector, ...] = ()

    def __post_init__(self):
        vecs = [_vec(v) for v in self.vectors]
        for v in vecs:
            if len(v) != self.n:
                raise ValueError(f"vector {v} does not have {self.n} entries")
            if any(x < 0 for x in v):
                raise ValueError(f"vector {v} has a negative entry")
        start = int(self.start)
        while vecs and not any(vecs[0]):
            vecs.pop(0)
            start += 1
        while vecs and not any(vecs[-1]):
            vecs.pop()
        if not vecs:
            start = 0
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "vectors", tuple(vecs))

    @classmethod
    def from_mapping(cls, n: int, values: Mapping[int, Sequence[int]]) -> "DimArray":
        if not values:
            return cls(n)
        lo, hi = min(values), max(values)
        zero = (0,) * n
        return cls(n, lo, tuple(_vec(values.get(i, zero)) for i in range(lo, hi + 1)))

    def __getitem__(self, i: int) -> Vector:
        j = i - self.start
        if 0 <= j < len(self.vectors):
            return self.vectors[j]
        return (0,) * self.n

    @property
    def support(self) -> tuple[int, int] | None:
        if not self.vectors:
            return None
        return self.start, self.start + len(self.vectors) - 1

    def items(self):
        return [(self.start + j, v) for j, v in enumerate(self.vectors)]

    def to_json(self) -> dict:
        return {"start": self.start, "vectors": [list(v) for v in self.vectors]}


RankArray = DimArray


# --------------------------------------------------------------------------
# maps between sums of projectives


class HomProjSpace:
    """``Hom(P^d, P^e)`` in path coordinates."""

    def __init__(self, alg: Algebra, d: Sequence[int], e: Sequence[int]):
        self.algebra = alg
        self.d = _vec(d)
        self.e = _vec(e)
        n = alg.n
        self.blocks: list[tuple[int, int, tuple[int, int, int], int]] = []
        off = 0
        for b in range(n):
            for a in range(n):
                npaths = len(alg.basis[(b, a)])
                shape = (self.e[b], self.d[a], npaths)
                self.blocks.append((b, a, shape, off))
                off += shape[0] * shape[1] * shape[2]
        self.dim = off
        self.source = projective_power(alg, self.d)
        self.target = projective_power(alg, self.e)
        self._lift: list[np.ndarray] | None = None

    @property
    def field(self):
        return self.algebra.field

    def __eq__(self, other) -> bool:
        return isinstance(other, HomProjSpace) and (self.algebra, self.d, self.e) == (other.algebra, other.d, other.e)

    def __hash__(self):
        return hash((id(self.algebra), self.d, self.e))

    @staticmethod
    def _offsets(alg: Algebra, mult: Vector, c: int) -> list[list[int]]:
        """``off[a][i]``: first coordinate of copy ``i`` of ``P_a`` at vertex ``c``."""
        out, off = [], 0
        for a in range(alg.n):
            width = len(alg.basis[(a, c)])
            out.append([off + i * width for i in range(mult[a])])
            off += mult[a] * width
        return out

    def lift_tensors(self) -> list[np.ndarray]:
        """Per vertex ``c`` a tensor ``L[n, row, col]`` with block ``c`` of the
        graded map equal to ``sum_n x_n L[n]``."""
        if self._lift is None:
            alg = self.algebra
            f = self.field
            out = []
            for c in range(alg.n):
                rows = self.target.dim[c]
                cols = self.source.dim[c]
                lt = f.zeros(self.dim * rows * cols).reshape(self.dim, rows, cols)
                roff = self._offsets(alg, self.e, c)
                coff = self._offsets(alg, self.d, c)
                for b, a, (eb, da, npaths), off in self.blocks:
                    if not (eb and da and npaths):
                        continue
                    tensor = alg.structure(b, a, c)  # [t, s, z]
                    if tensor.size == 0:
                        continue
                    for j in range(eb):
                        for i in range(da):
                            for t in range(npaths):
                                n_idx = off + (j * da + i) * npaths + t
                                r0, c0 = roff[b][j], coff[a][i]
                                sub = tensor[t]  # [s, z]
                                lt[n_idx, r0 : r0 + sub.shape[1], c0 : c0 + sub.shape[0]] = sub.T
                out.append(lt)
            self._lift = out
        return self._lift

    def element(self, vector) -> "HomProjElement":
        return HomProjElement(self, self.field.array(vector))

    def zero(self) -> "HomProjElement":
        return HomProjElement(self, self.field.zeros(self.dim))

    def random(self, rng: np.random.Generator) -> "HomProjElement":
        return HomProjElement(self, self.field.random_array(rng, self.dim))

    def from_blocks(self, blocks: Mapping[tuple[int, int], np.ndarray]) -> "HomProjElement":
        f = self.field
        vec = f.zeros(self.dim)
        for b, a, shape, off in self.blocks:
            if (b, a) in blocks:
                arr = f.array(blocks[(b, a)]).reshape(shape)
                vec[off : off + arr.size] = arr.reshape(-1)
        return HomProjElement(self, vec)

    def blocks_to_vector(self, graded_blocks: Sequence[np.ndarray]) -> np.ndarray:
        """Evaluate (possibly batched) vertex blocks at the generators."""
        alg = self.algebra
        lead = graded_blocks[0].shape[:-2] if graded_blocks else ()
        f = self.field
        vec = f.zeros(int(np.prod(lead, dtype=np.int64)) * self.dim).reshape(*lead, self.dim)
        for b, a, (eb, da, npaths), off in self.blocks:
            if not (eb and da and npaths):
                continue
            roff = self._offsets(alg, self.e, a)[b]
            coff = self._offsets(alg, self.d, a)[a]
            for j in range(eb):
                for i in range(da):
                    start = off + (j * da + i) * npaths
                    vec[..., start : start + npaths] = graded_blocks[a][..., roff[j] : roff[j] + npaths, coff[i]]
        return vec

    def from_graded(self, g: GradedMap) -> "HomProjElement":
        if g.source.dim != self.source.dim or g.target.dim != self.target.dim:
            raise ValueError("graded map does not live between the expected projectives")
        return HomProjElement(self, self.blocks_to_vector(list(g.blocks)))

    def to_graded(self, x: "HomProjElement") -> GradedMap:
        f = self.field
        blocks = tuple(f.contract("n,nrc->rc", x.vector, lt) for lt in self.lift_tensors())
        return GradedMap(self.source, self.target, blocks)

    def post_composition_matrix(self, g: "HomProjElement") -> np.ndarray:
        """Matrix of ``x -> g o x`` from this space to ``Hom(P^d, P^{g.e})``."""
        f = self.field
        out_space = HomProjSpace(self.algebra, self.d, g.space.e)
        gg = g.space.to_graded(g)
        batched = [f.contract("rk,nkc->nrc", gb, lt) for gb, lt in zip(gg.blocks, self.lift_tensors())]
        return out_space.blocks_to_vector(batched).T.copy()

    def __repr__(self) -> str:
        return f"HomProjSpace(d={self.d}, e={self.e}, dim={self.dim})"


def hom_proj_basis(alg: Algebra, d: Sequence[int], e: Sequence[int]) -> HomProjSpace:
    return HomProjSpace(alg, d, e)


@dataclass(frozen=True, eq=False)
class HomProjElement:
    space: HomProjSpace
    vector: np.ndarray

    def block(self, b: int, a: int) -> np.ndarray:
        for bb, aa, shape, off in self.space.blocks:
            if (bb, aa) == (b, a):
                return self.vector[off : off + shape[0] * shape[1] * shape[2]].reshape(shape)
        raise KeyError((b, a))

    def graded(self) -> GradedMap:
        return self.space.to_graded(self)

    def __matmul__(self, other: "HomProjElement") -> "HomProjElement":
        """Composition ``self after other``."""
        if other.space.e != self.space.d:
            raise ValueError("elements are not composable")
        space = HomProjSpace(self.space.algebra, other.space.d, self.space.e)
        return space.from_graded(self.graded() @ other.graded())

    def __add__(self, other: "HomProjElement") -> "HomProjElement":
        return HomProjElement(self.space, self.space.field.reduce(self.vector + other.vector))

    def is_zero(self) -> bool:
        return self.space.field.is_zero(self.vector)

    def same_as(self, other: "HomProjElement") -> bool:
        return self.space.d == other.space.d and self.space.e == other.space.e and self.space.field.equal(
            self.vector, other.vector
        )

    def first_nonzero_block(self) -> tuple[int, int] | None:
        for b, a, shape, off in self.space.blocks:
            size = shape[0] * shape[1] * shape[2]
            if size and not self.space.field.is_zero(self.vector[off : off + size]):
                return b, a
        return None

    def to_json(self) -> dict:
        alg = self.space.algebra
        f = self.space.field
        out = {}
        for b, a, shape, _ in self.space.blocks:
            if shape[0] and shape[1] and shape[2]:
                key = f"{alg.vertex_name(b)}<-{alg.vertex_name(a)}"
                out[key] = {
                    "paths": [p.label(alg.quiver) for p in alg.basis[(b, a)]],
                    "coefficients": f.to_json(self.block(b, a)),
                }
        return {"source": list(self.space.d), "target": list(self.space.e), "blocks": out}

    @classmethod
    def from_json(cls, alg: Algebra, doc: dict) -> "HomProjElement":
        space = HomProjSpace(alg, doc["source"], doc["target"])
        q = alg.quiver
        blocks = {}
        for key, val in doc.get("blocks", {}).items():
            bl, al = key.split("<-")
            b, a = q.vertex_index(bl), q.vertex_index(al)
            blocks[(b, a)] = np.array(val["coefficients"], dtype=object)
        return space.from_blocks(blocks)


def copy_map(alg: Algebra, src: Sequence[int], dst: Sequence[int], pairs: Iterable[tuple[int, int, int]]) -> HomProjElement:
    """Identity components sending copy ``i`` of ``P_a`` in ``P^src`` to copy
    ``j`` of ``P_a`` in ``P^dst`` for each ``(a, i, j)``."""
    space = HomProjSpace(alg, src, dst)
    f = alg.field
    vec = f.zeros(space.dim)
    trivial = {a: alg.basis[(a, a)].index(next(p for p in alg.basis[(a, a)] if len(p) == 0)) for a in range(alg.n)}
    offs = {(b, a): (shape, off) for b, a, shape, off in space.blocks}
    for a, i, j in pairs:
        (eb, da, npaths), off = offs[(a, a)]
        vec[off + (j * da + i) * npaths + trivial[a]] = 1
    return HomProjElement(space, vec)


# --------------------------------------------------------------------------
# complexes


@dataclass(frozen=True, eq=False)
class ComplexPoint:
    """Differentials ``d_i: P^{d_i} -> P^{d_{i-1}}`` for ``i`` in ``degrees``."""

    algebra: Algebra
    d: DimArray
    differentials: Mapping[int, HomProjElement] = dc_field(default_factory=dict)

    def __post_init__(self):
        diffs = dict(self.differentials)
        for i in self.degrees:
            space = HomProjSpace(self.algebra, self.d[i], self.d[i - 1])
            if i not in diffs:
                diffs[i] = space.zero()
            elif diffs[i].space.d != space.d or diffs[i].space.e != space.e:
                raise ValueError(f"differential {i} has the wrong source or target")
        extra = set(diffs) - set(self.degrees)
        for i in extra:
            if not diffs[i].is_zero():
                raise ValueError(f"nonzero differential in degree {i} outside the support of d")
            del diffs[i]
        object.__setattr__(self, "differentials", diffs)

    @property
    def degrees(self) -> range:
        sup = self.d.support
        if sup is None:
            return range(0)
        return range(sup[0] + 1, sup[1] + 1)

    def differential(self, i: int) -> HomProjElement:
        if i in self.differentials:
            return self.differentials[i]
        return HomProjSpace(self.algebra, self.d[i], self.d[i - 1]).zero()

    def graded(self, i: int) -> GradedMap:
        return self.differential(i).graded()

    def same_as(self, other: "ComplexPoint") -> bool:
        if self.d != other.d:
            return False
        return all(self.differential(i).same_as(other.differential(i)) for i in self.degrees)

    def to_json(self) -> dict:
        return {
            "dimension_array": self.d.to_json(),
            "differentials": {str(i): self.differentials[i].to_json() for i in self.degrees},
        }

    @classmethod
    def from_json(cls, alg: Algebra, doc: dict) -> "ComplexPoint":
        d = DimArray(alg.n, doc["dimension_array"]["start"], tuple(map(tuple, doc["dimension_array"]["vectors"])))
        diffs = {int(i): HomProjElement.from_json(alg, v) for i, v in doc.get("differentials", {}).items()}
        return cls(alg, d, diffs)


def validate_complex(x: ComplexPoint) -> Violation | None:
    for i in x.degrees:
        if i - 1 not in x.differentials:
            continue
        comp = x.differential(i - 1) @ x.differential(i)
        block = comp.first_nonzero_block()
        if block is not None:
            b, a = block
            alg = x.algebra
            return Violation(
                f"degree {i}",
                f"d_{i - 1} d_{i} is nonzero on the block {alg.vertex_name(b)}<-{alg.vertex_name(a)}",
            )
    return None


def rank_profile(x: ComplexPoint) -> RankArray:
    return RankArray.from_mapping(x.algebra.n, {i: x.graded(i).rank() for i in x.degrees})


# --------------------------------------------------------------------------
# profiles


@dataclass(frozen=True, eq=False)
class StrataProfile:
    """The numbers ``k_i, h_i, m_i`` attached to a pair ``(d, r)``.

    ``h_i`` is the dimension of the homology in complex degree ``i - 1``.
    """

    algebra: Algebra
    d: DimArray
    r: RankArray
    indices: tuple[int, ...]
    k: dict[int, Vector]
    h: dict[int, Vector]
    m: dict[int, Vector | None]
    feasible: bool
    reason: str = ""

    def require_feasible(self) -> None:
        if not self.feasible:
            raise InfeasibleProfile(self.reason)

    def table(self) -> list[dict]:
        return [
            {
                "i": i,
                "homology_degree": i - 1,
                "d": list(self.d[i]),
                "r": list(self.r[i]),
                "k": list(self.k[i]),
                "h": list(self.h[i]),
                "m": None if self.m[i] is None else list(self.m[i]),
            }
            for i in self.indices
        ]

    def to_json(self) -> dict:
        return {"feasible": self.feasible, "reason": self.reason, "rows": self.table()}


def strata_profile(alg: Algebra, d: DimArray, r: RankArray) -> StrataProfile:
    theta = alg.cartan
    sup = d.support
    reasons = []
    if sup is None:
        if r.support is not None:
            reasons.append("nonzero ranks for an empty dimension array")
        return StrataProfile(alg, d, r, (), {}, {}, {}, not reasons, "; ".join(reasons))
    lo, hi = sup
    indices = tuple(range(lo + 1, hi + 2))
    rs = r.support
    if rs is not None and (rs[0] < lo + 1 or rs[1] > hi):
        reasons.append(f"ranks must vanish outside degrees {lo + 1}..{hi}")
    for i, ri in r.items():
        for a in range(alg.n):
            if ri[a] and not (d[i] and d[i - 1]):
                reasons.append(f"r_{i} nonzero but d_{i} or d_{i - 1} is zero")
                break
    k, h, m = {}, {}, {}
    for i in indices:
        ki = tuple(int(x) for x in theta @ np.array(d[i - 1], dtype=np.int64) - np.array(r[i - 1], dtype=np.int64))
        hi_ = tuple(a - b for a, b in zip(ki, r[i]))
        k[i], h[i] = ki, hi_
        if any(x < 0 for x in ki):
            reasons.append(f"k_{i} = {ki} has a negative entry")
        if any(x < 0 for x in hi_):
            reasons.append(f"h_{i} = {hi_} has a negative entry (r_{i} exceeds k_{i})")
        try:
            m[i] = proj_multiplicities(alg, ki) if all(x >= 0 for x in ki) else None
        except NotProjectiveDimensionError:
            m[i] = None
        if m[i] is None:
            reasons.append(f"m_{i} = Theta^-1 k_{i} is not a nonnegative integer vector")
    return StrataProfile(alg, d, r, indices, k, h, m, not reasons, "; ".join(reasons))


# --------------------------------------------------------------------------
# homology and kernels


def homology_rep(x: ComplexPoint, j: int) -> Representation:
    """``ker d_j / im d_{j+1}`` with canonical quotient bases."""
    kern, incl = kernel_rep(x.graded(j))
    into = corestrict(x.graded(j + 1), incl)
    quot, _ = cokernel_rep(into)
    return quot


@dataclass(frozen=True)
class KernelVerdict:
    degree: int
    dim: Vector
    multiplicities: Vector | None
    projective: bool


def check_kernel_projective(x: ComplexPoint) -> list[KernelVerdict]:
    sup = x.d.support
    if sup is None:
        return []
    out = []
    for i in range(sup[0], sup[1] + 1):
        kern, _ = kernel_rep(x.graded(i))
        try:
            m = proj_multiplicities(x.algebra, kern.dim)
        except NotProjectiveDimensionError:
            out.append(KernelVerdict(i, kern.dim, None, False))
            continue
        ok = is_iso(kern, projective_power(x.algebra, m))
        out.append(KernelVerdict(i, kern.dim, m, ok))
    return out


# --------------------------------------------------------------------------
# sampling


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_complex(alg: Algebra, d: DimArray, seed=0) -> ComplexPoint:
    """Each differential uniform among maps killed by the previous one."""
    if not isinstance(alg.field, PrimeField):
        raise TypeError("random_complex needs a prime field")
    rng = _rng(seed)
    f = alg.field
    diffs: dict[int, HomProjElement] = {}
    prev = None
    probe = ComplexPoint(alg, d)
    for i in probe.degrees:
        space = HomProjSpace(alg, d[i], d[i - 1])
        if prev is None:
            diffs[i] = space.random(rng)
        else:
            cons = space.post_composition_matrix(prev)
            kern = f.kernel_basis(cons)
            coeffs = f.random_array(rng, kern.shape[1])
            diffs[i] = space.element(f.matmul(kern, coeffs) if kern.shape[1] else f.zeros(space.dim))
        prev = diffs[i]
    return ComplexPoint(alg, d, diffs)


def random_complex_fixed_rank(alg: Algebra, profile: StrataProfile, seed=0, budget: int = 200) -> ComplexPoint:
    """A point of the stratum, assembled from sampled homology.

    Each ``H_i`` is drawn from ``rep_{h_i}`` until it admits the required
    presentation; the resolutions are then glued.
    """
    from .comhom import build_from_homology, membership_degree
    from .representations import random_rep

    profile.require_feasible()
    rng = _rng(seed)
    homology = {}
    for i in profile.indices:
        for _ in range(budget):
            cand = random_rep(alg, profile.h[i], rng, budget=budget, method="sequential")
            if membership_degree(alg, profile, i, cand):
                homology[i] = cand
                break
        else:
            raise StratumPossiblyEmpty(
                f"stratum possibly empty: no homology in degree {i - 1} with dim {profile.h[i]} "
                f"admits the required presentation after {budget} draws"
            )
    return build_from_homology(alg, profile, homology).complex()
