"""Irreducible components of ``rep_{h,r}`` at desk scale.

Indecomposables are enumerated exhaustively over a small prime field.  In
representation-finite type every orbit closure is decided by the hom order
``M <= N  iff  dim Hom(X, M) <= dim Hom(X, N)`` for all indecomposables
``X``, so the components of ``rep_h`` are the orbits with minimal hom vector.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import Algebra, global_dimension
from .comhom import DimensionReport, dimension_report
from .complexes import StrataProfile, _dot
from .linalg import PrimeField
from .representations import (
    Representation,
    decompose,
    find_isomorphism,
    hom_dim,
    minimal_presentation,
    projective_multiplicities_of,
    random_rep,
    validate_rep,
)


class EnumerationBudgetExceeded(RuntimeError):
    pass


class InconsistentOrderError(RuntimeError):
    pass


class NotHereditaryError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Indecomposable:
    id: int
    name: str
    rep: Representation
    end_dim: int
    p0: tuple[int, ...]
    p1: tuple[int, ...]

    @property
    def dim(self) -> tuple[int, ...]:
        return self.rep.dim


@dataclass(frozen=True, eq=False)
class IndecompTable:
    algebra: Algebra
    bound: tuple[int, ...]
    entries: tuple[Indecomposable, ...]
    hom: np.ndarray  # hom[x, y] = dim Hom(X, Y)
    points_enumerated: int

    def names(self) -> list[str]:
        return [e.name for e in self.entries]


@dataclass(frozen=True)
class IsoClass:
    counts: tuple[int, ...]
    dim: tuple[int, ...]
    end_dim: int
    orbit_dim: int
    p0: tuple[int, ...]
    p1: tuple[int, ...]
    name: str

    def presentation_ok(self, m: Sequence[int], d: Sequence[int]) -> bool:
        """Does the class admit ``P^d -> P^m -> (class) -> 0``?"""
        for a in range(len(m)):
            x = m[a] - self.p0[a]
            if x < 0 or self.p1[a] + x > d[a]:
                return False
        return True


def _label(alg: Algebra, rep: Representation, count: int) -> str:
    t = projective_multiplicities_of(rep)
    if t is not None and sum(t) == 1:
        return f"P_{alg.vertex_name(t.index(1))}"
    if rep.total_dim == 1:
        return f"S_{alg.vertex_name(rep.dim.index(1))}"
    return "M_" + "".join(str(x) for x in rep.dim) + ("" if count == 0 else chr(ord("a") + count))


def _sort_key(alg: Algebra, rep: Representation):
    t = projective_multiplicities_of(rep)
    if t is not None and sum(t) == 1:
        return (0, t.index(1), rep.dim)
    if rep.total_dim == 1:
        return (1, rep.dim.index(1), rep.dim)
    return (2, sum(rep.dim), rep.dim)


def _vectors_of_total(bound: Sequence[int], total: int):
    ranges = [range(b + 1) for b in bound]
    for v in itertools.product(*ranges):
        if sum(v) == total:
            yield v


def _points(alg: Algebra, h: Sequence[int]):
    f = alg.field
    shapes = [(h[a.target], h[a.source]) for a in alg.quiver.arrows]
    sizes = [r * c for r, c in shapes]
    total = sum(sizes)
    for coords in itertools.product(range(f.p), repeat=total):
        maps, off = [], 0
        for (r, c), s in zip(shapes, sizes):
            maps.append(np.array(coords[off : off + s], dtype=np.int64).reshape(r, c))
            off += s
        yield Representation(alg, tuple(h), tuple(maps))


def enumerate_indecomposables(
    alg: Algebra, bound: Sequence[int], p: int = 2, budget: int = 1 << 20, seed: int = 0
) -> IndecompTable:
    """All indecomposables with dimension vector at most ``bound`` up to iso.

    Dimension vectors are scanned by total dimension.  The scan stops at the
    first total dimension without an indecomposable, since indecomposables
    of a given length force ones of every smaller length.
    """
    alg2 = alg if isinstance(alg.field, PrimeField) and alg.field.p == p else alg.with_field(PrimeField(p))
    bound = tuple(int(x) for x in bound)
    found: list[tuple[Representation, int]] = []
    seen = 0
    for total in range(1, sum(bound) + 1):
        level = 0
        for h in _vectors_of_total(bound, total):
            coords = sum(h[a.target] * h[a.source] for a in alg2.quiver.arrows)
            seen += p**coords
            if seen > budget:
                raise EnumerationBudgetExceeded(
                    f"enumeration needs more than {budget} points (reached dim vector {h}); use a smaller bound"
                )
            local: list[Representation] = []
            for v in _points(alg2, h):
                if validate_rep(v) is not None:
                    continue
                end = hom_dim(v, v)
                if end > 1 and len(decompose(v, seed)) > 1:
                    continue
                if any(find_isomorphism(v, w, seed) is not None for w in local):
                    continue
                local.append(v)
            found.extend((v, hom_dim(v, v)) for v in local)
            level += len(local)
        if level == 0:
            break
    found.sort(key=lambda ve: _sort_key(alg2, ve[0]))
    entries = []
    used: dict[str, int] = {}
    for idx, (v, end) in enumerate(found):
        base = _label(alg2, v, 0)
        k = used.get(base, 0)
        used[base] = k + 1
        name = base if k == 0 else _label(alg2, v, k)
        pres = minimal_presentation(v)
        entries.append(Indecomposable(idx, name, v, end, pres.p0, pres.p1))
    hom = np.array([[hom_dim(x.rep, y.rep) for y in entries] for x in entries], dtype=np.int64).reshape(
        len(entries), len(entries)
    )
    return IndecompTable(alg2, bound, tuple(entries), hom, seen)


def _class_name(table: IndecompTable, counts: Sequence[int]) -> str:
    parts = []
    for e, c in zip(table.entries, counts):
        if c:
            parts.append(e.name if c == 1 else f"{e.name}^{c}")
    return " + ".join(parts) if parts else "0"


def iso_classes_of(table: IndecompTable, h: Sequence[int]) -> list[IsoClass]:
    """Every multiset of table entries with total dimension vector ``h``."""
    h = tuple(int(x) for x in h)
    ents = table.entries
    n = len(h)
    out: list[IsoClass] = []

    def rec(j: int, remaining: tuple[int, ...], counts: list[int]):
        if not any(remaining):
            full = counts + [0] * (len(ents) - len(counts))
            out.append(_make_class(table, h, full))
            return
        if j == len(ents):
            return
        dim = ents[j].dim
        c = 0
        rem = remaining
        while all(x >= 0 for x in rem):
            rec(j + 1, rem, counts + [c])
            c += 1
            rem = tuple(rem[a] - dim[a] for a in range(n))
            if not any(dim):
                break

    rec(0, h, [])
    return out


def _make_class(table: IndecompTable, h: tuple[int, ...], counts: Sequence[int]) -> IsoClass:
    c = np.array(counts, dtype=np.int64)
    end = int(c @ table.hom @ c) if len(c) else 0
    n = len(h)
    p0 = tuple(int(sum(cnt * e.p0[a] for cnt, e in zip(counts, table.entries))) for a in range(n))
    p1 = tuple(int(sum(cnt * e.p1[a] for cnt, e in zip(counts, table.entries))) for a in range(n))
    return IsoClass(tuple(int(x) for x in counts), h, end, _dot(h, h) - end, p0, p1, _class_name(table, counts))


def hom_vector(table: IndecompTable, cls: IsoClass) -> np.ndarray:
    return table.hom @ np.array(cls.counts, dtype=np.int64)


def maximal_classes(table: IndecompTable, classes: Sequence[IsoClass]) -> list[IsoClass]:
    """Classes whose orbit is not in the closure of another orbit."""
    vecs = [hom_vector(table, c) for c in classes]
    out = []
    for j, c in enumerate(classes):
        dominated = False
        for k, other in enumerate(classes):
            if k == j:
                continue
            if np.all(vecs[k] <= vecs[j]) and np.any(vecs[k] < vecs[j]):
                if other.orbit_dim <= c.orbit_dim:
                    raise InconsistentOrderError(
                        f"{other.name} lies above {c.name} in the hom order but its orbit dimension "
                        f"{other.orbit_dim} is not larger than {c.orbit_dim}"
                    )
                dominated = True
        if not dominated:
            out.append(c)
    return out


@dataclass(frozen=True)
class DegreeComponents:
    i: int
    h: tuple[int, ...]
    maximal: tuple[IsoClass, ...]
    passing: tuple[IsoClass, ...]

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "homology_degree": self.i - 1,
            "h": list(self.h),
            "components_of_rep_h": [{"module": c.name, "orbit_dim": c.orbit_dim} for c in self.maximal],
            "components_of_rep_hr": [{"module": c.name, "orbit_dim": c.orbit_dim} for c in self.passing],
        }


@dataclass(frozen=True)
class ComponentReport:
    degrees: tuple[DegreeComponents, ...]

    @property
    def counts_before_filter(self) -> tuple[int, ...]:
        return tuple(len(d.maximal) for d in self.degrees)

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(d.passing) for d in self.degrees)

    @property
    def total(self) -> int:
        return int(np.prod(self.counts, dtype=np.int64)) if self.degrees else 1

    def component_dims(self) -> list[int]:
        """Dimension of each component of ``rep_{h,r}`` (products over indices)."""
        choices = [[c.orbit_dim for c in d.passing] for d in self.degrees]
        return [sum(t) for t in itertools.product(*choices)]

    def to_json(self) -> dict:
        return {
            "degrees": [d.to_json() for d in self.degrees],
            "counts_before_filter": list(self.counts_before_filter),
            "counts": list(self.counts),
            "total": self.total,
            "comproj_component_count": self.total,
        }


def components_rep_hr(alg: Algebra, profile: StrataProfile, p: int = 2, budget: int = 1 << 20) -> ComponentReport:
    profile.require_feasible()
    if not profile.indices:
        return ComponentReport(())
    bound = tuple(max(profile.h[i][a] for i in profile.indices) for a in range(alg.n))
    table = enumerate_indecomposables(alg, bound, p, budget)
    degrees = []
    for i in profile.indices:
        maximal = maximal_classes(table, iso_classes_of(table, profile.h[i]))
        passing = tuple(c for c in maximal if c.presentation_ok(profile.m[i], profile.d[i]))
        degrees.append(DegreeComponents(i, profile.h[i], tuple(maximal), passing))
    return ComponentReport(tuple(degrees))


@dataclass(frozen=True)
class HereditaryReport:
    component_count: int
    rep_h_dims: tuple[int, ...]
    rep_hr_dim: int
    dimensions: DimensionReport | None

    @property
    def dimension(self) -> int | None:
        return self.dimensions.chain_dims[0] if self.dimensions else None

    def to_json(self) -> dict:
        return {
            "component_count": self.component_count,
            "irreducible": self.component_count == 1,
            "rep_h_dims": list(self.rep_h_dims),
            "rep_hr_dim": self.rep_hr_dim,
            "dimension": self.dimension,
            "dimensions": self.dimensions.to_json() if self.dimensions else None,
        }


def hereditary_report(alg: Algebra, profile: StrataProfile, budget: int = 1 << 20, seed: int = 0) -> HereditaryReport:
    """For a hereditary algebra ``rep_h`` is affine space, so a nonempty open
    ``rep_{h,r}`` is irreducible of dimension ``sum_arrows h_a h_b``."""
    gd = global_dimension(alg)
    if gd is None or gd > 1:
        raise NotHereditaryError(f"global dimension {gd if gd is not None else '> cap'} exceeds 1")
    profile.require_feasible()
    rep_h = tuple(
        sum(profile.h[i][a.source] * profile.h[i][a.target] for a in alg.quiver.arrows) for i in profile.indices
    )
    try:
        count = components_rep_hr(alg, profile, budget=budget).total
    except EnumerationBudgetExceeded:
        count = _sampled_nonempty(alg, profile, seed)
    if count > 1:
        raise InconsistentOrderError(f"hereditary stratum reported {count} components")
    dims = dimension_report(profile, sum(rep_h)) if count else None
    return HereditaryReport(count, rep_h, sum(rep_h), dims)


def _sampled_nonempty(alg: Algebra, profile: StrataProfile, seed: int, trials: int = 64) -> int:
    from .comhom import membership_degree

    field = alg.field if isinstance(alg.field, PrimeField) else PrimeField(101)
    alg2 = alg if field is alg.field else alg.with_field(field)
    rng = np.random.default_rng(seed)
    for i in profile.indices:
        if not any(membership_degree(alg2, profile, i, random_rep(alg2, profile.h[i], rng)) for _ in range(trials)):
            return 0
    return 1
