"""Representations of a bound quiver and the maps between them.

A :class:`Representation` stores one matrix per arrow, shaped
``dim[target] x dim[source]``.  A :class:`GradedMap` stores one matrix per
vertex; it is a module map when it intertwines the arrow matrices.
Sub- and quotient objects use bases read off reduced echelon forms, so every
induced structure is reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .linalg import Field, PrimeField, block_diag

if TYPE_CHECKING:
    from .algebra import Algebra, Path


class ShapeError(ValueError):
    pass


class NotModuleMapError(ValueError):
    pass


class DecompositionInconclusive(RuntimeError):
    pass


class RejectionBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Violation:
    where: str
    message: str

    def __str__(self) -> str:
        return f"{self.where}: {self.message}"


# --------------------------------------------------------------------------
# representations


@dataclass(frozen=True, eq=False)
class Representation:
    algebra: "Algebra"
    dim: tuple[int, ...]
    maps: tuple[np.ndarray, ...]

    def __post_init__(self):
        q = self.algebra.quiver
        dim = tuple(int(x) for x in self.dim)
        object.__setattr__(self, "dim", dim)
        if len(dim) != q.n or any(x < 0 for x in dim):
            raise ShapeError(f"dimension vector {dim} does not fit {q.n} vertices")
        if len(self.maps) != len(q.arrows):
            raise ShapeError(f"expected {len(q.arrows)} arrow maps, got {len(self.maps)}")
        f = self.algebra.field
        maps = []
        for arrow, m in zip(q.arrows, self.maps):
            m = f.array(m)
            if m.size == 0:
                m = f.zeros(dim[arrow.target], dim[arrow.source])
            if m.shape != (dim[arrow.target], dim[arrow.source]):
                raise ShapeError(
                    f"arrow {arrow.name}: matrix shape {m.shape} != {(dim[arrow.target], dim[arrow.source])}"
                )
            maps.append(m)
        object.__setattr__(self, "maps", tuple(maps))

    @classmethod
    def zero_maps(cls, alg: "Algebra", dim: Sequence[int]) -> "Representation":
        maps = tuple(alg.field.zeros(dim[a.target], dim[a.source]) for a in alg.quiver.arrows)
        return cls(alg, tuple(dim), maps)

    @property
    def field(self) -> Field:
        return self.algebra.field

    @property
    def total_dim(self) -> int:
        return sum(self.dim)

    def path_matrix(self, path: "Path") -> np.ndarray:
        f = self.field
        m = f.eye(self.dim[path.source])
        for i in path.arrows:
            m = f.matmul(self.maps[i], m)
        return m

    def arrow_map(self, name: str) -> np.ndarray:
        return self.maps[self.algebra.quiver.arrow_index(name)]

    def same_as(self, other: "Representation") -> bool:
        """Exact equality of dimension vectors and arrow matrices."""
        return self.dim == other.dim and all(
            self.field.equal(a, b) for a, b in zip(self.maps, other.maps)
        )

    def to_json(self) -> dict:
        q = self.algebra.quiver
        return {
            "dim": list(self.dim),
            "maps": {a.name: self.field.to_json(m) for a, m in zip(q.arrows, self.maps)},
        }

    @classmethod
    def from_json(cls, alg: "Algebra", doc: dict) -> "Representation":
        dim = tuple(doc["dim"])
        maps = []
        given = doc.get("maps", {})
        for a in alg.quiver.arrows:
            if a.name in given:
                m = np.array(given[a.name], dtype=object).reshape(dim[a.target], dim[a.source])
                maps.append(alg.field.array(m))
            else:
                maps.append(alg.field.zeros(dim[a.target], dim[a.source]))
        return cls(alg, dim, tuple(maps))

    def __repr__(self) -> str:
        return f"Representation(dim={self.dim})"


def direct_sum(reps: Sequence[Representation]) -> Representation:
    if not reps:
        raise ValueError("direct_sum of an empty list needs an algebra; use zero_maps")
    alg = reps[0].algebra
    dim = tuple(sum(r.dim[a] for r in reps) for a in range(alg.n))
    maps = tuple(block_diag(alg.field, [r.maps[i] for r in reps]) for i in range(len(alg.quiver.arrows)))
    return Representation(alg, dim, maps)


def validate_rep(v: Representation) -> Violation | None:
    """``None`` when every relation vanishes on ``v``, else the first failure."""
    f = v.field
    alg = v.algebra
    for idx, rel in enumerate(alg.relations):
        total = f.zeros(v.dim[rel.target], v.dim[rel.source])
        for c, p in rel.terms:
            total = f.reduce(total + f.coerce(c) * v.path_matrix(p))
        nz = np.argwhere(total != 0)
        if nz.size:
            i, j = (int(x) for x in nz[0])
            return Violation(
                f"relation[{idx}]",
                f"{rel.label(alg.quiver)} has entry ({i},{j}) = {total[i, j]} != 0",
            )
    return None


def projective_power(alg: "Algebra", mult: Sequence[int]) -> Representation:
    """``P^mult = (+)_a P_a^{mult_a}`` in vertex-major summand order."""
    from .algebra import projective_rep

    mult = tuple(int(x) for x in mult)
    cache = alg.__dict__.setdefault("_projective_cache", {})
    if mult not in cache:
        parts = [projective_rep(alg, a) for a in range(alg.n) for _ in range(mult[a])]
        cache[mult] = direct_sum(parts) if parts else Representation.zero_maps(alg, (0,) * alg.n)
    return cache[mult]


# --------------------------------------------------------------------------
# graded maps


@dataclass(frozen=True, eq=False)
class GradedMap:
    source: Representation
    target: Representation
    blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        f = self.source.field
        blocks = []
        for a, b in enumerate(self.blocks):
            b = f.array(b)
            shape = (self.target.dim[a], self.source.dim[a])
            if b.size == 0:
                b = f.zeros(*shape)
            if b.shape != shape:
                raise ShapeError(f"block at vertex {a} has shape {b.shape}, expected {shape}")
            blocks.append(b)
        object.__setattr__(self, "blocks", tuple(blocks))

    @property
    def field(self) -> Field:
        return self.source.field

    @classmethod
    def zero(cls, source: Representation, target: Representation) -> "GradedMap":
        f = source.field
        return cls(source, target, tuple(f.zeros(target.dim[a], source.dim[a]) for a in range(len(source.dim))))

    @classmethod
    def identity(cls, v: Representation) -> "GradedMap":
        return cls(v, v, tuple(v.field.eye(d) for d in v.dim))

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        """Composition ``self after other``."""
        if other.target.dim != self.source.dim:
            raise ShapeError("graded maps are not composable")
        f = self.field
        return GradedMap(other.source, self.target, tuple(f.matmul(a, b) for a, b in zip(self.blocks, other.blocks)))

    def __add__(self, other: "GradedMap") -> "GradedMap":
        f = self.field
        return GradedMap(self.source, self.target, tuple(f.reduce(a + b) for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        f = self.field
        return GradedMap(self.source, self.target, tuple(f.reduce(a - b) for a, b in zip(self.blocks, other.blocks)))

    def scale(self, c) -> "GradedMap":
        f = self.field
        c = f.coerce(c)
        return GradedMap(self.source, self.target, tuple(f.reduce(b * c) for b in self.blocks))

    def module_map_violation(self) -> Violation | None:
        f = self.field
        for arrow, v_a, w_a in zip(self.source.algebra.quiver.arrows, self.source.maps, self.target.maps):
            lhs = f.matmul(w_a, self.blocks[arrow.source])
            rhs = f.matmul(self.blocks[arrow.target], v_a)
            if not f.equal(lhs, rhs):
                return Violation(f"arrow {arrow.name}", "map does not intertwine the arrow action")
        return None

    def is_module_map(self) -> bool:
        return self.module_map_violation() is None

    def rank(self) -> tuple[int, ...]:
        f = self.field
        return tuple(f.rank(b) for b in self.blocks)

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def is_iso(self) -> bool:
        return self.source.dim == self.target.dim and self.is_injective()

    def is_zero(self) -> bool:
        return all(self.field.is_zero(b) for b in self.blocks)

    def same_as(self, other: "GradedMap") -> bool:
        return all(self.field.equal(a, b) for a, b in zip(self.blocks, other.blocks))

    def flat(self) -> np.ndarray:
        f = self.field
        parts = [b.reshape(-1) for b in self.blocks]
        return np.concatenate(parts) if parts else f.zeros(0)

    def to_json(self) -> list:
        return [self.field.to_json(b) for b in self.blocks]


def _require_module_map(f: GradedMap) -> None:
    bad = f.module_map_violation()
    if bad is not None:
        raise NotModuleMapError(str(bad))


# --------------------------------------------------------------------------
# hom spaces


def _hom_system(v: Representation, w: Representation):
    f = v.field
    q = v.algebra.quiver
    offsets = [0]
    for a in range(q.n):
        offsets.append(offsets[-1] + w.dim[a] * v.dim[a])
    rows = []
    for arrow, v_al, w_al in zip(q.arrows, v.maps, w.maps):
        a, b = arrow.source, arrow.target
        block = f.zeros(w.dim[b] * v.dim[a], offsets[-1])
        lhs = f.array(np.kron(w_al, f.eye(v.dim[a])))
        rhs = f.array(np.kron(f.eye(w.dim[b]), v_al.T))
        block[:, offsets[a] : offsets[a + 1]] = lhs
        block[:, offsets[b] : offsets[b + 1]] = f.reduce(block[:, offsets[b] : offsets[b + 1]] - rhs)
        rows.append(block)
    system = np.concatenate(rows, axis=0) if rows else f.zeros(0, offsets[-1])
    return system, offsets


def _unflatten(v: Representation, w: Representation, vec: np.ndarray, offsets) -> GradedMap:
    blocks = tuple(vec[offsets[a] : offsets[a + 1]].reshape(w.dim[a], v.dim[a]) for a in range(len(v.dim)))
    return GradedMap(v, w, blocks)


def hom_basis(v: Representation, w: Representation) -> list[GradedMap]:
    """Basis of ``Hom(v, w)`` from the canonical kernel of the intertwiner system."""
    system, offsets = _hom_system(v, w)
    kern = v.field.kernel_basis(system)
    return [_unflatten(v, w, kern[:, j], offsets) for j in range(kern.shape[1])]


def hom_dim(v: Representation, w: Representation) -> int:
    system, offsets = _hom_system(v, w)
    return offsets[-1] - v.field.rank(system)


def linear_combination(basis: Sequence[GradedMap], coeffs) -> GradedMap:
    f = basis[0].field
    blocks = [f.zeros(*b.shape) for b in basis[0].blocks]
    for c, g in zip(coeffs, basis):
        c = f.coerce(c)
        if c:
            blocks = [f.reduce(x + c * y) for x, y in zip(blocks, g.blocks)]
    return GradedMap(basis[0].source, basis[0].target, tuple(blocks))


# --------------------------------------------------------------------------
# kernels, images, cokernels


def _complement(field: Field, span: np.ndarray, n: int):
    """Projection onto and section of the canonical complement of ``span``."""
    if span.shape[1]:
        reduced, pivots = field._eliminate(span.T)
        reduced = reduced[: len(pivots)]
    else:
        reduced, pivots = field.zeros(0, n), []
    pivset = set(pivots)
    free = [j for j in range(n) if j not in pivset]
    proj = field.zeros(len(free), n)
    sect = field.zeros(n, len(free))
    for t, j in enumerate(free):
        proj[t, j] = 1
        sect[j, t] = 1
    for i, pc in enumerate(pivots):
        proj[:, pc] = -reduced[i, free] if free else proj[:, pc]
    return field.reduce(proj), sect


def _sub_rep(v: Representation, bases: Sequence[np.ndarray]) -> tuple[Representation, GradedMap]:
    f = v.field
    q = v.algebra.quiver
    lefts = [f.one_sided_inverse(b, "left") for b in bases]
    maps = []
    for arrow, m in zip(q.arrows, v.maps):
        maps.append(f.matmul(lefts[arrow.target], f.matmul(m, bases[arrow.source])))
    sub = Representation(v.algebra, tuple(b.shape[1] for b in bases), tuple(maps))
    return sub, GradedMap(sub, v, tuple(bases))


def kernel_rep(f: GradedMap) -> tuple[Representation, GradedMap]:
    """Kernel with its inclusion, in the canonical kernel bases."""
    _require_module_map(f)
    field = f.field
    bases = [field.kernel_basis(b) for b in f.blocks]
    return _sub_rep(f.source, bases)


def image_rep(f: GradedMap) -> tuple[Representation, GradedMap]:
    """Image with its inclusion into the target."""
    _require_module_map(f)
    field = f.field
    bases = [field.column_space(b) for b in f.blocks]
    return _sub_rep(f.target, bases)


def corestrict(f: GradedMap, inclusion: GradedMap) -> GradedMap:
    """The map ``g`` with ``inclusion @ g == f`` (``f`` must land in the image)."""
    field = f.field
    blocks = []
    for a, (fb, ib) in enumerate(zip(f.blocks, inclusion.blocks)):
        g = field.matmul(field.one_sided_inverse(ib, "left"), fb)
        if not field.equal(field.matmul(ib, g), fb):
            raise ValueError(f"map does not factor through the subobject at vertex {a}")
        blocks.append(g)
    return GradedMap(f.source, inclusion.source, tuple(blocks))


def cokernel_rep(f: GradedMap) -> tuple[Representation, GradedMap]:
    """Cokernel of ``f`` with the canonical projection from its target."""
    _require_module_map(f)
    field = f.field
    w = f.target
    q = w.algebra.quiver
    projs, sects = [], []
    for a, b in enumerate(f.blocks):
        p, s = _complement(field, field.column_space(b), w.dim[a])
        projs.append(p)
        sects.append(s)
    maps = [field.matmul(projs[arr.target], field.matmul(m, sects[arr.source])) for arr, m in zip(q.arrows, w.maps)]
    quot = Representation(w.algebra, tuple(p.shape[0] for p in projs), tuple(maps))
    return quot, GradedMap(w, quot, tuple(projs))


def quotient_rep(v: Representation, inclusion: GradedMap) -> tuple[Representation, GradedMap]:
    if inclusion.target.dim != v.dim:
        raise ShapeError("inclusion does not land in v")
    return cokernel_rep(inclusion)


# --------------------------------------------------------------------------
# tops, covers, presentations


def radical_basis(m: Representation) -> list[np.ndarray]:
    f = m.field
    q = m.algebra.quiver
    out = []
    for a in range(q.n):
        cols = [mat for arr, mat in zip(q.arrows, m.maps) if arr.target == a]
        span = np.concatenate(cols, axis=1) if cols else f.zeros(m.dim[a], 0)
        out.append(f.column_space(span))
    return out


def top_dims(m: Representation) -> tuple[int, ...]:
    return tuple(d - r.shape[1] for d, r in zip(m.dim, radical_basis(m)))


@dataclass(frozen=True, eq=False)
class Cover:
    multiplicities: tuple[int, ...]
    projective: Representation
    map: GradedMap


def yoneda_map(alg: "Algebra", mult: Sequence[int], target: Representation, gens: Sequence[np.ndarray]) -> GradedMap:
    """The map ``P^mult -> target`` sending copy ``i`` of ``e_a`` to ``gens[a][:, i]``."""
    f = alg.field
    mult = tuple(int(x) for x in mult)
    proj = projective_power(alg, mult)
    blocks = []
    for c in range(alg.n):
        cols = []
        for a in range(alg.n):
            if not mult[a]:
                continue
            mats = [target.path_matrix(p) for p in alg.basis[(a, c)]]
            for i in range(mult[a]):
                v = gens[a][:, i].reshape(-1, 1)
                cols.extend(f.matmul(pm, v) for pm in mats)
        blocks.append(np.concatenate(cols, axis=1) if cols else f.zeros(target.dim[c], 0))
    return GradedMap(proj, target, tuple(blocks))


def generator_images(g: GradedMap, mult: Sequence[int]) -> list[np.ndarray]:
    """Inverse of :func:`yoneda_map`: the images of the generators of ``P^mult``."""
    alg = g.source.algebra
    out = []
    for a in range(alg.n):
        cols, off = [], 0
        for b in range(alg.n):
            width = len(alg.basis[(b, a)])
            if b == a:
                cols = [off + i * width for i in range(mult[a])]
            off += mult[b] * width
        out.append(g.blocks[a][:, cols] if cols else g.field.zeros(g.target.dim[a], 0))
    return out


def projective_cover(m: Representation) -> Cover:
    """Projective cover ``P^t -> m`` with ``t = dim top(m)``.

    Generators are sent to the canonical complement of the radical.
    """
    f = m.field
    lifts = []
    for a, rad in enumerate(radical_basis(m)):
        _, sect = _complement(f, rad, m.dim[a])
        lifts.append(sect)
    mult = tuple(s.shape[1] for s in lifts)
    g = yoneda_map(m.algebra, mult, m, lifts)
    return Cover(mult, g.source, g)


def projective_multiplicities_of(m: Representation) -> tuple[int, ...] | None:
    """``t`` with ``m`` isomorphic to ``P^t``, or ``None`` if ``m`` is not projective."""
    t = top_dims(m)
    dims = tuple(int(x) for x in m.algebra.cartan @ np.array(t, dtype=np.int64))
    return t if dims == m.dim else None


@dataclass(frozen=True, eq=False)
class PresentationData:
    p0: tuple[int, ...]
    p1: tuple[int, ...]
    cover: GradedMap
    relations: GradedMap

    @property
    def cokernel_target(self) -> Representation:
        return self.cover.target


def minimal_presentation(h: Representation) -> PresentationData:
    """``P^p1 -> P^p0 -> h -> 0`` built from two projective covers."""
    top = projective_cover(h)
    syz, incl = kernel_rep(top.map)
    second = projective_cover(syz)
    return PresentationData(top.multiplicities, second.multiplicities, top.map, incl @ second.map)


# --------------------------------------------------------------------------
# decomposition and isomorphism


def _eigenvalues(field: Field, mat: np.ndarray) -> list:
    n = mat.shape[0]
    if n == 0:
        return []
    if isinstance(field, PrimeField) and field.p <= 257:
        eye = field.eye(n)
        return [lam for lam in range(field.p) if field.rank(field.reduce(mat - lam * eye)) < n]
    import sympy

    x = sympy.Symbol("x")
    if isinstance(field, PrimeField):
        poly = sympy.Matrix(mat.tolist()).charpoly(x)
        poly = sympy.Poly(poly.as_expr(), x, modulus=field.p)
    else:
        poly = sympy.Matrix([[sympy.Rational(str(e)) for e in row] for row in mat]).charpoly(x)
        poly = sympy.Poly(poly.as_expr(), x, domain="QQ")
    roots = []
    for fac, _ in poly.factor_list()[1]:
        if fac.degree() == 1:
            c1, c0 = fac.all_coeffs()
            if isinstance(field, PrimeField):
                roots.append(field.coerce(-int(c0) * pow(int(c1), -1, field.p)))
            else:
                r = sympy.Rational(-c0, c1)
                roots.append(field.coerce(Fraction(int(r.p), int(r.q))))
    return sorted(set(roots), key=lambda r: (str(type(r)), r))


def _graded_eigenvalues(phi: GradedMap) -> list:
    seen = []
    for b in phi.blocks:
        for lam in _eigenvalues(phi.field, b):
            if lam not in seen:
                seen.append(lam)
    return seen


def _power(phi: GradedMap) -> GradedMap:
    f = phi.field
    # one exponent for every vertex, else the result would not intertwine
    exp = max((b.shape[0] for b in phi.blocks), default=0)
    blocks = []
    for b in phi.blocks:
        out = f.eye(b.shape[0])
        base = b
        e = exp
        while e:
            if e & 1:
                out = f.matmul(out, base)
            base = f.matmul(base, base)
            e >>= 1
        blocks.append(out)
    return GradedMap(phi.source, phi.target, tuple(blocks))


def _fitting_split(phi: GradedMap):
    psi = _power(phi)
    k = sum(phi.field.rank(b) for b in psi.blocks)
    n = phi.source.total_dim
    if 0 < k < n:
        return [kernel_rep(psi)[0], image_rep(psi)[0]]
    return None


def _shifted(phi: GradedMap, lam) -> GradedMap:
    return phi - GradedMap.identity(phi.source).scale(lam)


def _nilpotent_span_is_ideal(field: Field, nil: list[GradedMap], end_dim: int) -> bool:
    if not nil:
        return end_dim == 1
    vecs = np.stack([g.flat() for g in nil], axis=1)
    basis_cols = field.column_space(vecs)
    if basis_cols.shape[1] != end_dim - 1:
        return False
    rank = basis_cols.shape[1]
    layer = nil
    total_dim = nil[0].source.total_dim
    for _ in range(total_dim + 1):
        prods = [x @ y for x in layer for y in nil]
        prods = [p for p in prods if not p.is_zero()]
        if not prods:
            return True
        stacked = np.stack([p.flat() for p in prods], axis=1)
        if field.rank(np.concatenate([basis_cols, stacked], axis=1)) != rank:
            return False
        span = field.column_space(stacked)
        layer = [_from_flat(nil[0], span[:, j]) for j in range(span.shape[1])]
    return False


def _from_flat(template: GradedMap, vec: np.ndarray) -> GradedMap:
    blocks, off = [], 0
    for b in template.blocks:
        size = b.size
        blocks.append(vec[off : off + size].reshape(b.shape))
        off += size
    return GradedMap(template.source, template.target, tuple(blocks))


def _split_or_certify(m: Representation, rng: np.random.Generator, trials: int):
    """Return two summands, or ``None`` when ``End(m)`` is certified local with
    residue field the base field."""
    field = m.field
    end = hom_basis(m, m)
    if len(end) == 1:
        return None
    nil = []
    certifiable = True
    for phi in end:
        lams = _graded_eigenvalues(phi)
        for lam in lams:
            parts = _fitting_split(_shifted(phi, lam))
            if parts:
                return parts
        if len(lams) == 1:
            nil.append(_shifted(phi, lams[0]))
        else:
            certifiable = False
    if certifiable and _nilpotent_span_is_ideal(field, [g for g in nil if not g.is_zero()], len(end)):
        return None
    for _ in range(trials):
        phi = linear_combination(end, field.random_array(rng, len(end)))
        parts = _fitting_split(phi)
        if parts:
            return parts
        for lam in _graded_eigenvalues(phi):
            parts = _fitting_split(_shifted(phi, lam))
            if parts:
                return parts
    raise DecompositionInconclusive(
        f"decomposition inconclusive for dim {m.dim} over {field} after {trials} trials"
    )


def decompose(m: Representation, seed: int = 0, trials: int = 32) -> list[Representation]:
    """Krull-Schmidt summands of ``m`` via Fitting splittings.

    Every returned summand has an endomorphism ring certified local with
    residue field the base field.  Raises :class:`DecompositionInconclusive`
    rather than guess.
    """
    rng = np.random.default_rng(seed)
    done = []
    stack = [m]
    while stack:
        x = stack.pop()
        if x.total_dim == 0:
            continue
        parts = _split_or_certify(x, rng, trials)
        if parts is None:
            done.append(x)
        else:
            stack.extend(reversed(parts))
    return done


def is_indecomposable(m: Representation, seed: int = 0, trials: int = 32) -> bool:
    if m.total_dim == 0:
        return False
    return len(decompose(m, seed, trials)) == 1


def _nilpotent(phi: GradedMap) -> bool:
    return _power(phi).is_zero()


def _iso_between_locals(m: Representation, n: Representation) -> GradedMap | None:
    """Deterministic test for modules with local endomorphism rings."""
    if m.dim != n.dim:
        return None
    there = hom_basis(m, n)
    if not there:
        return None
    back = hom_basis(n, m)
    for f in there:
        for g in back:
            if not _nilpotent(g @ f):
                return f
    return None


def find_isomorphism(m: Representation, n: Representation, seed: int = 0, trials: int | None = None) -> GradedMap | None:
    """An explicit isomorphism ``m -> n`` or ``None`` when none exists."""
    if m.dim != n.dim:
        return None
    field = m.field
    if any(field.rank(a) != field.rank(b) for a, b in zip(m.maps, n.maps)):
        return None
    there = hom_basis(m, n)
    end_m = hom_dim(m, m)
    if len(there) != end_m or hom_dim(n, m) != end_m or hom_dim(n, n) != end_m:
        return None
    if m.total_dim == 0:
        return GradedMap.zero(m, n)
    rng = np.random.default_rng(seed)
    order = field.order or 7
    budget = trials if trials is not None else 8 + 4 * min(order, 64)
    for f in there:
        if f.is_iso():
            return f
    for _ in range(budget):
        f = linear_combination(there, field.random_array(rng, len(there)))
        if f.is_iso():
            return f
    # decompose-and-match fallback; summands are local so matching is exact
    left = decompose(m, seed)
    right = decompose(n, seed)
    if len(left) != len(right):
        return None
    maps = []
    unused = list(range(len(right)))
    for x in left:
        hit = None
        for j in unused:
            g = _iso_between_locals(x, right[j])
            if g is not None:
                hit = j
                maps.append(g)
                break
        if hit is None:
            return None
        unused.remove(hit)
    # summands matched pairwise, so m and n are isomorphic; search once more
    for _ in range(budget * 8):
        f = linear_combination(there, field.random_array(rng, len(there)))
        if f.is_iso():
            return f
    raise DecompositionInconclusive("summands match but no explicit isomorphism was sampled")


def is_iso(m: Representation, n: Representation, seed: int = 0) -> bool:
    if m.dim != n.dim:
        return False
    tm, tn = projective_multiplicities_of(m), projective_multiplicities_of(n)
    if tm is not None or tn is not None:
        return tm == tn
    return find_isomorphism(m, n, seed) is not None


# --------------------------------------------------------------------------
# sampling


def _sequential_sample(alg: "Algebra", h: Sequence[int], rng: np.random.Generator):
    f = alg.field
    q = alg.quiver
    maps: list[np.ndarray | None] = [None] * len(q.arrows)
    # relations whose highest arrow is j and which are linear in j
    pending = {}
    for rel in alg.relations:
        top = max(max(p.arrows) for _, p in rel.terms)
        if all(p.arrows.count(top) <= 1 for _, p in rel.terms):
            pending.setdefault(top, []).append(rel)
    for j, arrow in enumerate(q.arrows):
        rows_n, cols_n = h[arrow.target], h[arrow.source]
        eqs, rhs = [], []
        for rel in pending.get(j, []):
            lhs = f.zeros(h[rel.target] * h[rel.source], rows_n * cols_n)
            const = f.zeros(h[rel.target], h[rel.source])
            for c, p in rel.terms:
                c = f.coerce(c)
                if j in p.arrows:
                    k = p.arrows.index(j)
                    before = _partial(alg, maps, h, p.source, p.arrows[:k])
                    after = _partial(alg, maps, h, arrow.target, p.arrows[k + 1 :])
                    lhs = f.reduce(lhs + c * f.array(np.kron(after, before.T)))
                else:
                    const = f.reduce(const + c * _partial(alg, maps, h, p.source, p.arrows))
            eqs.append(lhs)
            rhs.append(f.reduce(-const.reshape(-1)))
        if eqs:
            system = np.concatenate(eqs, axis=0)
            target = np.concatenate(rhs)
            part = f.solve(system, target)
            if part is None:
                return None
            kern = f.kernel_basis(system)
            vec = f.reduce(part + f.matmul(kern, f.random_array(rng, kern.shape[1])))
            maps[j] = vec.reshape(rows_n, cols_n)
        else:
            maps[j] = f.random_array(rng, (rows_n, cols_n))
    return maps


def _partial(alg, maps, h, start, arrows):
    f = alg.field
    m = f.eye(h[start])
    for i in arrows:
        m = f.matmul(maps[i], m)
    return m


def random_rep(
    alg: "Algebra",
    h: Sequence[int],
    seed: int | np.random.Generator = 0,
    budget: int = 10_000,
    method: str = "rejection",
) -> Representation:
    """A random point of ``rep_h`` over a prime field.

    ``method="rejection"`` samples all arrow matrices uniformly and keeps the
    first tuple satisfying the relations, so accepted points are uniform.
    ``method="sequential"`` samples arrows in order and solves each relation
    that is linear in the newest arrow; it is far faster for large ``h`` but
    not uniform.
    """
    f = alg.field
    if not isinstance(f, PrimeField):
        raise TypeError("random_rep needs a prime field")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    h = tuple(int(x) for x in h)
    q = alg.quiver
    for _ in range(budget):
        if method == "rejection":
            maps = [f.random_array(rng, (h[a.target], h[a.source])) for a in q.arrows]
        elif method == "sequential":
            maps = _sequential_sample(alg, h, rng)
            if maps is None:
                continue
        else:
            raise ValueError(f"unknown sampling method {method!r}")
        v = Representation(alg, h, tuple(maps))
        if validate_rep(v) is None:
            return v
    raise RejectionBudgetExceeded(
        f"no point of rep_{h} after {budget} draws (acceptance rate below {1 / budget:.2g})"
    )
