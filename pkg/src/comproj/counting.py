"""Exhaustive point counts of complex varieties over small prime fields.

All differential tuples are enumerated in vectorized chunks.  For each
tuple the composites are tested for zero and the vertex-wise ranks are
computed by batched elimination mod ``p``.  Counts per rank profile are then
interpolated by a polynomial in ``q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import Algebra
from .complexes import ComplexPoint, DimArray, HomProjSpace
from .linalg import PrimeField, Rationals


class CountBudgetExceeded(RuntimeError):
    pass


def batched_rank_mod_p(mats: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack ``(B, R, C)`` of matrices over ``F_p``."""
    a = np.array(mats, dtype=np.int64) % p
    batch, rows, cols = a.shape
    rank = np.zeros(batch, dtype=np.int64)
    if rows == 0 or cols == 0 or batch == 0:
        return rank
    inv = np.array([0] + [pow(x, -1, p) for x in range(1, p)], dtype=np.int64)
    ar = np.arange(rows)
    for c in range(cols):
        mask = (a[:, :, c] != 0) & (ar[None, :] >= rank[:, None])
        has = mask.any(axis=1)
        idx = np.nonzero(has)[0]
        if idx.size == 0:
            continue
        piv = mask[idx].argmax(axis=1)
        r0 = rank[idx]
        top = a[idx, r0].copy()
        a[idx, r0] = a[idx, piv]
        a[idx, piv] = top
        a[idx, r0] = a[idx, r0] * inv[a[idx, r0, c]][:, None] % p
        factor = a[idx, :, c].copy()
        factor[ar[None, :] <= r0[:, None]] = 0
        a[idx] = (a[idx] - factor[:, :, None] * a[idx, r0][:, None, :]) % p
        rank[idx] += 1
    return rank


def interpolate(xs: Sequence[int], ys: Sequence[int]) -> list[Fraction]:
    """Coefficients (constant first) of the interpolating polynomial."""
    q = Rationals()
    vander = q.array([[Fraction(x) ** j for j in range(len(xs))] for x in xs])
    sol = q.solve(vander, q.array(list(ys)))
    coeffs = [Fraction(c) for c in sol]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


@dataclass(frozen=True)
class StratumFit:
    ranks: tuple[tuple[int, tuple[int, ...]], ...]
    counts: dict[int, int]
    coefficients: tuple[Fraction, ...]
    determined: bool

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1 if self.coefficients else -1

    @property
    def leading(self) -> Fraction:
        return self.coefficients[-1] if self.coefficients else Fraction(0)

    def polynomial(self) -> str:
        terms = []
        for j in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[j]
            if c == 0:
                continue
            mono = "" if j == 0 else ("q" if j == 1 else f"q^{j}")
            coef = str(c) if (mono == "" or abs(c) != 1) else ("-" if c < 0 else "")
            terms.append(f"{coef}{mono}")
        return " + ".join(terms).replace("+ -", "- ") or "0"

    def rank_array(self, n: int) -> DimArray:
        return DimArray.from_mapping(n, dict(self.ranks))

    def to_json(self) -> dict:
        return {
            "ranks": {str(i): list(v) for i, v in self.ranks},
            "counts": {str(p): c for p, c in sorted(self.counts.items())},
            "polynomial": self.polynomial(),
            "coefficients": [str(c) for c in self.coefficients],
            "degree": self.degree,
            "determined": self.determined,
        }


@dataclass(frozen=True)
class CountReport:
    primes: tuple[int, ...]
    coordinates: int
    totals: dict[int, int]
    strata: tuple[StratumFit, ...]

    def stratum(self, ranks: DimArray) -> StratumFit | None:
        for s in self.strata:
            if s.rank_array(ranks.n) == ranks:
                return s
        return None

    def to_json(self) -> dict:
        return {
            "primes": list(self.primes),
            "coordinates": self.coordinates,
            "totals": {str(p): c for p, c in sorted(self.totals.items())},
            "strata": [s.to_json() for s in self.strata],
        }


def _count_prime(alg: Algebra, d: DimArray, p: int, budget: int, chunk: int):
    algp = alg.with_field(PrimeField(p))
    degrees = list(ComplexPoint(algp, d).degrees)
    spaces = [HomProjSpace(algp, d[i], d[i - 1]) for i in degrees]
    total_coords = sum(s.dim for s in spaces)
    if p**total_coords > budget:
        raise CountBudgetExceeded(
            f"{total_coords} coordinates over F_{p} give {p}^{total_coords} tuples, above the budget {budget}"
        )
    lifts = [s.lift_tensors() for s in spaces]
    offs = np.cumsum([0] + [s.dim for s in spaces])
    powers = np.array([p**j for j in range(total_coords)], dtype=np.int64)
    bins: dict[tuple, int] = {}
    total = 0
    n = alg.n
    for lo in range(0, p**total_coords, chunk):
        hi = min(lo + chunk, p**total_coords)
        idx = np.arange(lo, hi, dtype=np.int64)
        coords = (idx[:, None] // powers[None, :]) % p if total_coords else np.zeros((hi - lo, 0), dtype=np.int64)
        blocks = []
        for s, lt, o in zip(spaces, lifts, offs):
            x = coords[:, o : o + s.dim]
            blocks.append([np.einsum("bn,nrc->brc", x, t.astype(np.int64)) % p for t in lt])
        ok = np.ones(hi - lo, dtype=bool)
        for j in range(1, len(blocks)):
            for c in range(n):
                prod = np.matmul(blocks[j - 1][c], blocks[j][c]) % p
                ok &= ~prod.reshape(hi - lo, -1).any(axis=1)
        keep = np.nonzero(ok)[0]
        total += keep.size
        if keep.size == 0:
            continue
        cols = [batched_rank_mod_p(blocks[j][c][keep], p) for j in range(len(blocks)) for c in range(n)]
        table = np.stack(cols, axis=1) if cols else np.zeros((keep.size, 0), dtype=np.int64)
        uniq, counts = np.unique(table, axis=0, return_counts=True)
        for row, cnt in zip(uniq, counts):
            key = tuple(
                (i, tuple(int(v) for v in row[j * n : (j + 1) * n])) for j, i in enumerate(degrees)
            )
            bins[key] = bins.get(key, 0) + int(cnt)
    return total_coords, total, bins


def count_points(
    alg: Algebra, d: DimArray, primes: Sequence[int], budget: int = 10**7, chunk: int = 1 << 15
) -> CountReport:
    """Counts of ``comproj_d(F_p)`` binned by rank profile, with fits.

    A fit is marked ``determined`` only when there are more primes than
    coordinates, which bounds the degree of any count polynomial.
    """
    primes = tuple(sorted(set(int(p) for p in primes)))
    if not primes:
        raise ValueError("at least one prime is needed")
    per_prime = {}
    coords = 0
    for p in primes:
        coords, total, bins = _count_prime(alg, d, p, budget, chunk)
        per_prime[p] = (total, bins)
    keys = sorted({k for _, bins in per_prime.values() for k in bins})
    strata = []
    for k in keys:
        counts = {p: per_prime[p][1].get(k, 0) for p in primes}
        coeffs = interpolate(list(primes), [counts[p] for p in primes])
        ranks = tuple((i, v) for i, v in k if any(v))
        strata.append(StratumFit(ranks, counts, tuple(coeffs), len(primes) >= coords + 1))
    return CountReport(primes, coords, {p: per_prime[p][0] for p in primes}, tuple(strata))
