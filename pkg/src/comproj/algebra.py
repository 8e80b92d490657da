"""Bound quiver algebras ``kQ/I``.

Paths are stored in traversal order: ``Path(0, 2, (alpha, beta))`` walks
``alpha`` first, i.e. it is the composite usually written ``beta*alpha``.
Relations are linear combinations of parallel paths of length at least two.

The normal-form basis is computed by linear algebra on the span of all
products ``u * rel * v`` in each (source, target) component, after the
length ``N`` beyond which every path lies in the ideal has been witnessed.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .linalg import Field, Rationals


class AlgebraError(ValueError):
    pass


class NotProjectiveDimensionError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        n = len(self.vertices)
        if len(set(self.vertices)) != n:
            raise AlgebraError("vertex labels must be unique")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise AlgebraError("arrow ids must be unique")
        for a in self.arrows:
            if not (0 <= a.source < n and 0 <= a.target < n):
                raise AlgebraError(f"arrow {a.name!r} has an endpoint outside [0, {n})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[str, int, int]], labels: Sequence[str] | None = None):
        labels = tuple(labels) if labels is not None else tuple(str(i + 1) for i in range(n))
        return cls(labels, tuple(Arrow(name, s, t) for name, s, t in edges))

    @property
    def n(self) -> int:
        return len(self.vertices)

    def arrow_index(self, name: str) -> int:
        for i, a in enumerate(self.arrows):
            if a.name == name:
                return i
        raise KeyError(name)

    def vertex_index(self, label) -> int:
        if isinstance(label, int) and not isinstance(label, bool):
            if 0 <= label < self.n:
                return label
            raise KeyError(label)
        return self.vertices.index(str(label))


@dataclass(frozen=True, order=True)
class Path:
    source: int
    target: int
    arrows: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.arrows)

    def then(self, other: "Path") -> "Path":
        """Concatenate: walk ``self`` first, then ``other``."""
        if self.target != other.source:
            raise ValueError("paths are not composable")
        return Path(self.source, other.target, self.arrows + other.arrows)

    def label(self, quiver: Quiver) -> str:
        if not self.arrows:
            return f"e{quiver.vertices[self.source]}"
        return "*".join(quiver.arrows[i].name for i in reversed(self.arrows))


def trivial_path(a: int) -> Path:
    return Path(a, a, ())


def path_from_names(quiver: Quiver, names: Sequence[str]) -> Path:
    """Path from arrow names written in composition order (``["beta", "alpha"]``)."""
    if not names:
        raise AlgebraError("empty arrow list; use trivial_path for idempotents")
    idx = [quiver.arrow_index(nm) for nm in reversed(list(names))]
    for x, y in zip(idx, idx[1:]):
        if quiver.arrows[x].target != quiver.arrows[y].source:
            raise AlgebraError(f"arrows {' '.join(names)} do not compose")
    return Path(quiver.arrows[idx[0]].source, quiver.arrows[idx[-1]].target, tuple(idx))


@dataclass(frozen=True)
class Relation:
    """A linear combination ``sum coeff * path`` of parallel paths."""

    terms: tuple[tuple[Fraction, Path], ...]

    @property
    def source(self) -> int:
        return self.terms[0][1].source

    @property
    def target(self) -> int:
        return self.terms[0][1].target

    @classmethod
    def monomial(cls, path: Path) -> "Relation":
        return cls(((Fraction(1), path),))

    def label(self, quiver: Quiver) -> str:
        parts = []
        for c, p in self.terms:
            parts.append(p.label(quiver) if c == 1 else f"{c}*{p.label(quiver)}")
        return " + ".join(parts)


def _all_paths(quiver: Quiver, max_len: int) -> list[list[Path]]:
    by_length = [[trivial_path(a) for a in range(quiver.n)]]
    out_arrows = defaultdict(list)
    for i, a in enumerate(quiver.arrows):
        out_arrows[a.source].append(i)
    for _ in range(max_len):
        nxt = []
        for p in by_length[-1]:
            for i in out_arrows[p.target]:
                nxt.append(Path(p.source, quiver.arrows[i].target, p.arrows + (i,)))
        by_length.append(nxt)
    return by_length


def _in_rowspace(field: Field, reduced: np.ndarray, pivots: Sequence[int], v: np.ndarray) -> bool:
    v = v.copy()
    for i, pc in enumerate(pivots):
        if v[pc]:
            v = field.reduce(v - v[pc] * reduced[i])
    return field.is_zero(v)


class Algebra:
    """A finite dimensional bound quiver algebra over an exact field.

    Attributes are fixed at construction; treat instances as immutable.
    """

    def __init__(self, quiver: Quiver, relations: Sequence[Relation], field: Field, length_cap: int = 8):
        if length_cap < 2:
            raise AlgebraError("length-cap must be at least 2")
        self.quiver = quiver
        self.field = field
        self.length_cap = length_cap
        self.relations = tuple(self._normalize(r) for r in relations)
        self.relations = tuple(r for r in self.relations if r.terms)
        self._build()

    # -- construction ------------------------------------------------------
    def _normalize(self, rel: Relation) -> Relation:
        acc: dict[Path, Fraction] = {}
        for c, p in rel.terms:
            if len(p) < 2:
                raise AlgebraError(f"relation term {p.label(self.quiver)} has length < 2")
            acc[p] = acc.get(p, Fraction(0)) + Fraction(c)
        terms = tuple((c, p) for p, c in sorted(acc.items()) if self.field.coerce(c) != 0)
        if terms and len({(p.source, p.target) for _, p in terms}) != 1:
            raise AlgebraError(f"relation {rel.label(self.quiver)} mixes non-parallel paths")
        return Relation(terms)

    def _ideal_rows(self, cap: int, truncate: bool):
        """Generators ``u*rel*v`` grouped by (source, target), as dicts path -> coeff."""
        paths = _all_paths(self.quiver, cap)
        into = defaultdict(list)
        outof = defaultdict(list)
        for layer in paths:
            for p in layer:
                into[p.target].append(p)
                outof[p.source].append(p)
        rows = defaultdict(list)
        for rel in self.relations:
            lens = [len(p) for _, p in rel.terms]
            lo, hi = min(lens), max(lens)
            for u in into[rel.source]:
                for v in outof[rel.target]:
                    extra = len(u) + len(v)
                    if (lo if truncate else hi) + extra > cap:
                        continue
                    row = {}
                    for c, p in rel.terms:
                        q = u.then(p).then(v)
                        if len(q) <= cap:
                            row[q] = self.field.coerce(c)
                    if row:
                        rows[(u.source, v.target)].append(row)
        return paths, rows

    def _component_matrix(self, cols: list[Path], rows: list[dict]):
        index = {p: j for j, p in enumerate(cols)}
        m = self.field.zeros(len(rows), len(cols))
        for i, row in enumerate(rows):
            for p, c in row.items():
                m[i, index[p]] = c
        return m

    def _build(self):
        q = self.quiver
        cap = self.length_cap
        # stage 1: witness N with every path of length N inside the ideal
        paths, rows = self._ideal_rows(cap, truncate=False)
        by_st = defaultdict(list)
        for layer in paths:
            for p in layer:
                by_st[(p.source, p.target)].append(p)
        spans = {}
        for st, cols in by_st.items():
            m = self._component_matrix(cols, rows.get(st, []))
            reduced, piv, _ = self.field.rref(m)
            spans[st] = (cols, reduced, piv)
        witnessed = None
        for length in range(1, cap + 1):
            ok = True
            for p in paths[length]:
                cols, reduced, piv = spans[(p.source, p.target)]
                v = self.field.zeros(len(cols))
                v[cols.index(p)] = 1
                if not _in_rowspace(self.field, reduced, piv, v):
                    ok = False
                    break
            if ok:
                witnessed = length
                break
        if witnessed is None:
            raise AlgebraError(f"ideal not admissible within cap {cap}")
        self.nilpotency = witnessed
        # stage 2: with paths of length >= N known to vanish, truncate safely
        top = witnessed - 1
        short_paths, rows = self._ideal_rows(top, truncate=True) if top >= 0 else ([[]], {})
        self.basis: dict[tuple[int, int], list[Path]] = {}
        self._reduction: dict[tuple[int, int], tuple[dict, np.ndarray, dict]] = {}
        by_st = defaultdict(list)
        for layer in short_paths:
            for p in layer:
                by_st[(p.source, p.target)].append(p)
        for s in range(q.n):
            for t in range(q.n):
                cols = sorted(by_st.get((s, t), []), key=lambda p: (-len(p), p.arrows))
                m = self._component_matrix(cols, rows.get((s, t), []))
                reduced, piv, rank = self.field.rref(m)
                pivset = set(piv)
                free = [j for j in range(len(cols)) if j not in pivset]
                basis = sorted((cols[j] for j in free), key=lambda p: (len(p), p.arrows))
                bidx = {p: i for i, p in enumerate(basis)}
                # pivot path -> its normal form as a vector over ``basis``
                normal = {}
                for i, pc in enumerate(piv):
                    vec = self.field.zeros(len(basis))
                    for j in free:
                        if reduced[i, j]:
                            vec[bidx[cols[j]]] = -reduced[i, j]
                    normal[cols[pc]] = self.field.reduce(vec)
                self.basis[(s, t)] = basis
                self._reduction[(s, t)] = (bidx, normal)
        self._mult = {}
        for s in range(q.n):
            for mid in range(q.n):
                for t in range(q.n):
                    b1, b2, b3 = self.basis[(s, mid)], self.basis[(mid, t)], self.basis[(s, t)]
                    tensor = self.field.zeros(len(b1) * len(b2) * len(b3)).reshape(len(b1), len(b2), len(b3))
                    for i, p in enumerate(b1):
                        for j, r in enumerate(b2):
                            tensor[i, j] = self.reduce_path(p.then(r))
                    self._mult[(s, mid, t)] = tensor
        self.cartan = np.array(
            [[len(self.basis[(a, b)]) for a in range(q.n)] for b in range(q.n)], dtype=np.int64
        )

    # -- queries -----------------------------------------------------------
    @property
    def n(self) -> int:
        return self.quiver.n

    @property
    def dimension(self) -> int:
        return int(self.cartan.sum())

    def all_basis_paths(self) -> list[Path]:
        return [p for key in sorted(self.basis) for p in self.basis[key]]

    def reduce_path(self, path: Path) -> np.ndarray:
        """Coordinates of ``path`` modulo the ideal over ``basis[(s, t)]``."""
        key = (path.source, path.target)
        bidx, normal = self._reduction[key]
        vec = self.field.zeros(len(self.basis[key]))
        if len(path) >= self.nilpotency:
            return vec
        if path in bidx:
            vec[bidx[path]] = 1
            return vec
        return normal[path].copy()

    def structure(self, s: int, mid: int, t: int) -> np.ndarray:
        """Tensor ``T[i, j] = reduce(basis[s,mid][i] then basis[mid,t][j])``."""
        return self._mult[(s, mid, t)]

    def with_field(self, field: Field, length_cap: int | None = None) -> "Algebra":
        return Algebra(self.quiver, self.relations, field, length_cap or self.length_cap)

    def vertex_name(self, a: int) -> str:
        return self.quiver.vertices[a]

    def __repr__(self) -> str:
        rels = "; ".join(r.label(self.quiver) for r in self.relations) or "none"
        return f"Algebra(vertices={self.n}, arrows={len(self.quiver.arrows)}, relations={rels}, field={self.field})"

    def describe(self) -> dict:
        q = self.quiver
        return {
            "vertices": list(q.vertices),
            "arrows": [{"name": a.name, "source": q.vertices[a.source], "target": q.vertices[a.target]} for a in q.arrows],
            "relations": [
                [{"coeff": _coeff_json(c), "path": [q.arrows[i].name for i in reversed(p.arrows)]} for c, p in r.terms]
                for r in self.relations
            ],
            "length_cap": self.length_cap,
        }


def _coeff_json(c: Fraction):
    return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def build_algebra(quiver: Quiver, relations: Sequence[Relation], field: Field, length_cap: int = 8) -> Algebra:
    return Algebra(quiver, relations, field, length_cap)


def cartan(alg: Algebra) -> np.ndarray:
    """Integer matrix whose column ``a`` is the dimension vector of ``P_a``."""
    return alg.cartan.copy()


def proj_multiplicities(alg: Algebra, k: Sequence[int]) -> tuple[int, ...]:
    """The nonnegative integer ``m`` with ``cartan @ m == k``."""
    q = Rationals()
    theta = q.array(alg.cartan)
    if q.rank(theta) != alg.n:
        raise NotProjectiveDimensionError("Cartan matrix is singular")
    sol = q.solve(theta, q.array(list(k)))
    if sol is None:
        raise NotProjectiveDimensionError("not a projective dimension vector")
    out = []
    for x in sol:
        if x.denominator != 1 or x < 0:
            raise NotProjectiveDimensionError(f"not a projective dimension vector: {tuple(k)}")
        out.append(int(x))
    return tuple(out)


def projective_rep(alg: Algebra, a: int):
    """``P_a``: at vertex ``b`` the span of basis paths ``a -> b``."""
    from .representations import Representation

    f = alg.field
    dims = tuple(len(alg.basis[(a, b)]) for b in range(alg.n))
    maps = []
    for arrow in alg.quiver.arrows:
        idx = alg.quiver.arrows.index(arrow)
        step = Path(arrow.source, arrow.target, (idx,))
        src = alg.basis[(a, arrow.source)]
        m = f.zeros(dims[arrow.target], dims[arrow.source])
        for j, p in enumerate(src):
            m[:, j] = alg.reduce_path(p.then(step))
        maps.append(m)
    return Representation(alg, dims, tuple(maps))


def simple_rep(alg: Algebra, a: int):
    from .representations import Representation

    dims = tuple(1 if b == a else 0 for b in range(alg.n))
    return Representation.zero_maps(alg, dims)


def global_dimension(alg: Algebra, cap: int = 8) -> int | None:
    """Maximal projective dimension of the simples, or ``None`` if some
    minimal resolution is still running after ``cap`` steps."""
    from .representations import projective_cover, kernel_rep

    best = 0
    for a in range(alg.n):
        module = simple_rep(alg, a)
        length = 0
        while True:
            cover = projective_cover(module)
            syzygy, _ = kernel_rep(cover.map)
            if syzygy.total_dim == 0:
                break
            length += 1
            if length > cap:
                return None
            module = syzygy
        best = max(best, length)
    return best
