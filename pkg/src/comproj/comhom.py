"""Complexes paired with an explicit realization of their homology.

A point carries, for every index ``i``, the differential ``d_i``, a
monomorphism ``eta_i: M_i -> P^{d_{i-1}}`` onto ``ker d_{i-1}``, the map
``phi_i: P^{d_i} -> M_i`` with ``d_i = eta_i phi_i``, and an epimorphism
``gamma_i: M_i -> H_i`` with kernel ``im phi_i``.  Here ``M_i = P^{m_i}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .algebra import Algebra
from .complexes import (
    ComplexPoint,
    HomProjElement,
    HomProjSpace,
    StrataProfile,
    _dot,
    copy_map,
    rank_profile,
    strata_profile,
    validate_complex,
)
from .representations import (
    GradedMap,
    Representation,
    Violation,
    cokernel_rep,
    hom_dim,
    kernel_rep,
    minimal_presentation,
    projective_cover,
    projective_power,
    validate_rep,
)


class KernelNotProjectiveError(ValueError):
    pass


class NotInStratumError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ComhomDegree:
    i: int
    partial: HomProjElement
    eta: HomProjElement
    phi: HomProjElement
    gamma: GradedMap
    H: Representation

    def to_json(self) -> dict:
        return {
            "partial": self.partial.to_json(),
            "eta": self.eta.to_json(),
            "phi": self.phi.to_json(),
            "gamma": self.gamma.to_json(),
            "H": self.H.to_json(),
        }


@dataclass(frozen=True, eq=False)
class ComhomPoint:
    algebra: Algebra
    profile: StrataProfile
    parts: Mapping[int, ComhomDegree]

    def complex(self) -> ComplexPoint:
        d = self.profile.d
        probe = ComplexPoint(self.algebra, d)
        return ComplexPoint(self.algebra, d, {i: self.parts[i].partial for i in probe.degrees})

    def to_json(self) -> dict:
        return {str(i): p.to_json() for i, p in sorted(self.parts.items())}


def pi(z: ComhomPoint) -> ComplexPoint:
    return z.complex()


def rho(z: ComhomPoint) -> dict[int, Representation]:
    """Graded module ``i -> H_i`` (``H_i`` sits in complex degree ``i - 1``)."""
    return {i: p.H for i, p in z.parts.items()}


# --------------------------------------------------------------------------
# validation


def validate_comhom_point(z: ComhomPoint) -> Violation | None:
    alg = z.algebra
    prof = z.profile
    bad = validate_complex(z.complex())
    if bad is not None:
        return Violation(bad.where, "dd != 0: " + bad.message)
    for i in prof.indices:
        if i not in z.parts:
            return Violation(f"index {i}", "missing degree data")
        p = z.parts[i]
        where = f"index {i}"
        m = prof.m[i]
        if p.eta.space.d != m or p.phi.space.e != m or p.gamma.source.dim != projective_power(alg, m).dim:
            return Violation(where, f"M_{i} is not P^{m}")
        if p.H.dim != prof.h[i]:
            return Violation(where, f"H has dim {p.H.dim}, expected {prof.h[i]}")
        if validate_rep(p.H) is not None:
            return Violation(where, "H does not satisfy the relations")
        eta, phi = p.eta.graded(), p.phi.graded()
        if not (p.eta @ p.phi).same_as(p.partial):
            return Violation(where, "d != eta phi")
        prev = z.complex().differential(i - 1)
        if not (prev @ p.eta).is_zero():
            return Violation(where, "d_{i-1} eta != 0")
        if p.gamma.module_map_violation() is not None:
            return Violation(where, "gamma is not a module map")
        if not (p.gamma @ phi).is_zero():
            return Violation(where, "gamma phi != 0")
        if not eta.is_injective():
            return Violation(where, "eta not mono")
        if phi.rank() != prof.r[i]:
            return Violation(where, f"rank phi = {phi.rank()} != r = {prof.r[i]}")
        grank = p.gamma.rank()
        if grank != p.H.dim:
            return Violation(where, "gamma not epi")
        kdim = tuple(a - b for a, b in zip(p.gamma.source.dim, grank))
        if kdim != phi.rank():
            return Violation(where, "ker gamma != im phi")
    return None


# --------------------------------------------------------------------------
# membership


def membership_degree(alg: Algebra, profile: StrataProfile, i: int, H: Representation) -> bool:
    """Does ``H`` admit a presentation ``P^{d_i} -> P^{m_i} -> H -> 0``?

    Any presentation is the minimal one plus trivial pieces ``P^x = P^x`` and
    ``P^y -> 0``, so this is a comparison of multiplicities.
    """
    m = profile.m[i]
    if m is None or H.dim != profile.h[i]:
        return False
    pres = minimal_presentation(H)
    d = profile.d[i]
    for a in range(alg.n):
        x = m[a] - pres.p0[a]
        if x < 0 or pres.p1[a] + x > d[a]:
            return False
    return True


def membership_rep_hr(alg: Algebra, profile: StrataProfile, H: Mapping[int, Representation]) -> bool:
    return all(membership_degree(alg, profile, i, H[i]) for i in profile.indices)


# --------------------------------------------------------------------------
# sections


def _to_space(alg: Algebra, g: GradedMap, src, dst) -> HomProjElement:
    return HomProjSpace(alg, src, dst).from_graded(g)


def lift(x: ComplexPoint) -> ComhomPoint:
    """The canonical point over ``x``: kernel bases, covers and cokernels
    are all read off reduced echelon forms."""
    alg = x.algebra
    f = alg.field
    prof = strata_profile(alg, x.d, rank_profile(x))
    prof.require_feasible()
    parts = {}
    for i in prof.indices:
        m = prof.m[i]
        kern, incl = kernel_rep(x.graded(i - 1))
        cover = projective_cover(kern)
        if cover.multiplicities != m:
            raise KernelNotProjectiveError(
                f"ker d_{i - 1} of dim {kern.dim} is not projective (top {cover.multiplicities}, "
                f"expected P^{m}); the algebra may have global dimension above 2"
            )
        eta_g = incl @ cover.map
        if not eta_g.is_injective():
            raise KernelNotProjectiveError(f"ker d_{i - 1} is not projective")
        partial = x.differential(i)
        dg = partial.graded()
        phi_blocks = tuple(
            f.matmul(f.one_sided_inverse(eb, "left"), db) for eb, db in zip(eta_g.blocks, dg.blocks)
        )
        phi_g = GradedMap(dg.source, eta_g.source, phi_blocks)
        if not (eta_g @ phi_g).same_as(dg):
            raise ValueError(f"d_{i} does not land in ker d_{i - 1}; input is not a complex")
        H, gamma = cokernel_rep(phi_g)
        parts[i] = ComhomDegree(
            i,
            partial,
            _to_space(alg, eta_g, m, x.d[i - 1]),
            _to_space(alg, phi_g, x.d[i], m),
            gamma,
            H,
        )
    return ComhomPoint(alg, prof, parts)


def _copies(mult, lo, count, dst_offset):
    """``(a, lo_a + t, dst_a + t)`` for ``t < count_a``."""
    return [(a, lo[a] + t, dst_offset[a] + t) for a in range(len(mult)) for t in range(count[a])]


def build_from_homology(alg: Algebra, profile: StrataProfile, H: Mapping[int, Representation]) -> ComhomPoint:
    """A point whose homology is exactly ``H``.

    In each index ``M = P^{p0} + P^{m-p0}`` and
    ``P^{d} = P^{p1} + P^{m-p0} + P^{rest}``; ``phi`` is the minimal
    presentation plus an identity, ``gamma`` is the cover on the first
    summand, and ``eta`` embeds ``M_{i+1}`` onto ``ker phi_i``.
    """
    profile.require_feasible()
    n = alg.n
    zero = (0,) * n
    parts = {}
    prev_phi: GradedMap | None = None
    for i in profile.indices:
        Hi = H[i]
        if not membership_degree(alg, profile, i, Hi):
            raise NotInStratumError(f"H_{i} of dim {Hi.dim} does not admit the required presentation")
        m, d, dprev = profile.m[i], profile.d[i], profile.d[i - 1]
        pres = minimal_presentation(Hi)
        p0, p1 = pres.p0, pres.p1
        x = tuple(a - b for a, b in zip(m, p0))
        # phi = iota0 . f . proj1 + iota1 . proj2
        fmap = _to_space(alg, pres.relations, p1, p0)
        proj1 = copy_map(alg, d, p1, _copies(d, zero, p1, zero))
        iota0 = copy_map(alg, p0, m, _copies(p0, zero, p0, zero))
        ident = copy_map(alg, d, m, _copies(d, p1, x, p0))
        phi = (iota0 @ (fmap @ proj1)) + ident
        phi_g = phi.graded()
        # gamma = cover . (projection onto P^{p0})
        proj0 = copy_map(alg, m, p0, _copies(m, zero, p0, zero))
        gamma = pres.cover @ proj0.graded()
        # eta: P^{m} -> ker phi_{i-1} inside P^{d_{i-1}}
        if prev_phi is None:
            eta_g = GradedMap.identity(projective_power(alg, dprev))
        else:
            kern, incl = kernel_rep(prev_phi)
            cover = projective_cover(kern)
            if cover.multiplicities != m:
                raise KernelNotProjectiveError(
                    f"ker phi_{i - 1} of dim {kern.dim} is not P^{m}; the algebra may have global dimension above 2"
                )
            eta_g = incl @ cover.map
        eta = _to_space(alg, eta_g, m, dprev)
        partial = eta @ phi
        parts[i] = ComhomDegree(i, partial, eta, phi, gamma, Hi)
        prev_phi = phi_g
    return ComhomPoint(alg, profile, parts)


def structure_group_element(z: ComhomPoint, w: ComhomPoint, i: int) -> GradedMap | None:
    """The automorphism ``u`` of ``M_i`` with ``eta'_i = eta_i u``, if any."""
    f = z.algebra.field
    eta, eta2 = z.parts[i].eta.graded(), w.parts[i].eta.graded()
    blocks = []
    for a, b in zip(eta.blocks, eta2.blocks):
        u = f.matmul(f.one_sided_inverse(a, "left"), b)
        if not f.equal(f.matmul(a, u), b):
            return None
        blocks.append(u)
    u = GradedMap(eta.source, eta.source, tuple(blocks))
    if not u.is_module_map() or not u.is_iso():
        return None
    return u


# --------------------------------------------------------------------------
# dimensions


@dataclass(frozen=True)
class FibreDimReport:
    pi2: int
    pi4: int
    rho2: int
    rho3: int
    rho4: int

    @property
    def pi_total(self) -> int:
        return self.pi2 + self.pi4

    @property
    def rho_total(self) -> int:
        return self.rho2 + self.rho3 + self.rho4

    def to_json(self) -> dict:
        return {
            "pi2": self.pi2,
            "pi4": self.pi4,
            "rho2": self.rho2,
            "rho3": self.rho3,
            "rho4": self.rho4,
            "pi_total": self.pi_total,
            "rho_total": self.rho_total,
        }


def fibre_dims(profile: StrataProfile) -> FibreDimReport:
    profile.require_feasible()
    idx = profile.indices
    pi2 = sum(_dot(profile.h[i], profile.h[i]) for i in idx)
    mk = sum(_dot(profile.m[i], profile.k[i]) for i in idx)
    rho3 = sum(_dot(profile.d[i], profile.r[i]) for i in idx)
    rho4 = sum(_dot(profile.m[i], profile.h[i]) for i in idx)
    return FibreDimReport(pi2, mk, mk, rho3, rho4)


@dataclass(frozen=True)
class DimensionReport:
    rep_hr_dims: tuple[int, ...]
    comhom_dims: tuple[int, ...]
    chain_dims: tuple[int, ...]
    closed_form_dims: tuple[int, ...]
    fibres: FibreDimReport

    @property
    def discrepancy(self) -> bool:
        return self.chain_dims != self.closed_form_dims

    def to_json(self) -> dict:
        return {
            "rep_hr_dims": list(self.rep_hr_dims),
            "comhom_dims": list(self.comhom_dims),
            "comproj_dims_chain": list(self.chain_dims),
            "comproj_dims_closed_form": list(self.closed_form_dims),
            "discrepancy": self.discrepancy,
            "fibres": self.fibres.to_json(),
        }


def dimension_report(profile: StrataProfile, rep_hr_dims: int | Sequence[int]) -> DimensionReport:
    """Per-component dimensions of the stratum.

    ``dim comhom = dim rep_{h,r} + rho2 + rho3 + rho4`` and the stratum sits
    below it with fibre ``pi2 + pi4``.  The closed form
    ``dim rep_{h,r} + sum(d.r - m.k)`` is evaluated alongside for comparison.
    """
    fib = fibre_dims(profile)
    dims = (int(rep_hr_dims),) if isinstance(rep_hr_dims, (int, np.integer)) else tuple(int(x) for x in rep_hr_dims)
    idx = profile.indices
    closed = sum(_dot(profile.d[i], profile.r[i]) - _dot(profile.m[i], profile.k[i]) for i in idx)
    comhom = tuple(x + fib.rho_total for x in dims)
    chain = tuple(c - fib.pi_total for c in comhom)
    return DimensionReport(dims, comhom, chain, tuple(x + closed for x in dims), fib)


@dataclass(frozen=True)
class FibreCheck:
    i: int
    computed: int
    expected: int

    @property
    def ok(self) -> bool:
        return self.computed == self.expected


def fibre_dim_check(x: ComplexPoint) -> list[FibreCheck]:
    """``dim Hom(P^{m_i}, ker d_{i-1})`` against ``m_i . k_i``."""
    alg = x.algebra
    prof = strata_profile(alg, x.d, rank_profile(x))
    prof.require_feasible()
    out = []
    for i in prof.indices:
        kern, _ = kernel_rep(x.graded(i - 1))
        got = hom_dim(projective_power(alg, prof.m[i]), kern)
        out.append(FibreCheck(i, got, _dot(prof.m[i], prof.k[i])))
    return out


def comhom_fibre_check(z: ComhomPoint) -> list[tuple[FibreCheck, FibreCheck]]:
    """Per index: ``dim Hom(P^{d_i}, ker gamma_i)`` against ``d_i . r_i`` and
    ``dim Hom(M_i, H_i)`` against ``m_i . h_i``."""
    alg = z.algebra
    prof = z.profile
    out = []
    for i in prof.indices:
        p = z.parts[i]
        kern, _ = kernel_rep(p.gamma)
        a = FibreCheck(i, hom_dim(projective_power(alg, prof.d[i]), kern), _dot(prof.d[i], prof.r[i]))
        b = FibreCheck(i, hom_dim(p.gamma.source, p.H), _dot(prof.m[i], prof.h[i]))
        out.append((a, b))
    return out
