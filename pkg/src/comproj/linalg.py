"""Exact dense linear algebra over prime fields and the rationals.

Matrices are plain numpy arrays. Over ``F_p`` they carry ``int64`` entries in
``[0, p)``; over ``Q`` they are object arrays of :class:`fractions.Fraction`.
A :class:`Field` instance owns the arithmetic, so every routine takes the
field explicitly (``field.rref(m)``, ``field.kernel_basis(m)``, ...).

No floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

_INT64_LIMIT = 2**63 - 1


class NotInvertibleError(ValueError):
    """Raised when a matrix has no one-sided inverse of the requested kind."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class RREF:
    reduced: np.ndarray
    pivots: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def __iter__(self):
        # allows ``reduced, pivots, rank = field.rref(m)``
        yield self.reduced
        yield list(self.pivots)
        yield self.rank


class Field:
    """Base class for exact fields.  Subclasses fix the scalar domain."""

    dtype: object = object
    kind: str = ""

    # -- scalars -----------------------------------------------------------
    def coerce(self, x):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        return arr

    # -- construction ------------------------------------------------------
    def array(self, data) -> np.ndarray:
        raise NotImplementedError

    def zeros(self, rows: int, cols: int | None = None) -> np.ndarray:
        shape = (rows,) if cols is None else (rows, cols)
        return self.array(np.zeros(shape, dtype=np.int64))

    def eye(self, n: int) -> np.ndarray:
        return self.array(np.eye(n, dtype=np.int64))

    def random_array(self, rng: np.random.Generator, shape) -> np.ndarray:
        raise NotImplementedError

    # -- arithmetic --------------------------------------------------------
    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.reduce(a @ b)

    def contract(self, subscripts: str, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Two-operand ``einsum`` reduced into the field."""
        return self.reduce(np.einsum(subscripts, a, b))

    def is_zero(self, arr: np.ndarray) -> bool:
        return not np.any(arr)

    def equal(self, a: np.ndarray, b: np.ndarray) -> bool:
        return a.shape == b.shape and bool(np.array_equal(a, b))

    # -- elimination -------------------------------------------------------
    def _eliminate(self, m: np.ndarray, ncols: int | None = None):
        a = self.array(m).copy()
        if a.ndim != 2:
            raise ValueError("expected a 2-d matrix")
        rows, cols = a.shape
        limit = cols if ncols is None else ncols
        pivots: list[int] = []
        r = 0
        for c in range(limit):
            if r == rows:
                break
            nz = np.flatnonzero(a[r:, c])
            if nz.size == 0:
                continue
            k = r + int(nz[0])
            if k != r:
                a[[r, k]] = a[[k, r]]
            a[r] = self.reduce(a[r] * self.inv(a[r, c]))
            col = a[:, c].copy()
            col[r] = 0
            others = np.flatnonzero(col)
            if others.size:
                a[others] = self.reduce(a[others] - np.outer(col[others], a[r]))
            pivots.append(c)
            r += 1
        return a, pivots

    def rref(self, m: np.ndarray) -> RREF:
        """Reduced row echelon form with its pivot columns."""
        a, pivots = self._eliminate(m)
        return RREF(a, tuple(pivots))

    def rank(self, m: np.ndarray) -> int:
        m = np.asarray(m)
        if m.size == 0:
            return 0
        return len(self._eliminate(m)[1])

    def kernel_basis(self, m: np.ndarray) -> np.ndarray:
        """Columns form the canonical basis of the null space of ``m``.

        Free variables are taken in increasing column order and each basis
        vector has a 1 in its own free slot, so the result only depends on
        the row space of ``m``.
        """
        m = self.array(m)
        rows, cols = m.shape
        reduced, pivots = self._eliminate(m) if rows else (m, [])
        pivset = set(pivots)
        free = [c for c in range(cols) if c not in pivset]
        k = self.zeros(cols, len(free))
        for j, f in enumerate(free):
            k[f, j] = 1
            for i, pc in enumerate(pivots):
                k[pc, j] = -reduced[i, f]
        return self.reduce(k)

    def column_space(self, m: np.ndarray) -> np.ndarray:
        """Canonical basis (as columns) of the column space of ``m``."""
        m = self.array(m)
        rows, cols = m.shape
        if cols == 0 or rows == 0:
            return self.zeros(rows, 0)
        reduced, pivots = self._eliminate(m.T)
        return reduced[: len(pivots)].T.copy()

    def solve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
        """One solution ``x`` of ``a @ x == b`` or ``None`` when inconsistent."""
        a = self.array(a)
        b = self.array(b)
        vector = b.ndim == 1
        if vector:
            b = b.reshape(-1, 1)
        n = a.shape[1]
        aug = np.concatenate([a, b], axis=1) if a.shape[0] else self.zeros(0, n + b.shape[1])
        reduced, pivots = self._eliminate(aug, ncols=n)
        rank = len(pivots)
        if rank < reduced.shape[0] and not self.is_zero(reduced[rank:, n:]):
            return None
        x = self.zeros(n, b.shape[1])
        for i, pc in enumerate(pivots):
            x[pc] = reduced[i, n:]
        return x[:, 0] if vector else x

    def one_sided_inverse(self, m: np.ndarray, side: str = "left") -> np.ndarray:
        """Left inverse (``x @ m == I``) or right inverse (``m @ x == I``).

        Computed by elimination restricted to the columns of ``m`` so the
        answer is the elimination-canonical one.  The Gram-matrix formula is
        deliberately not used: over ``F_p`` the product ``m.T @ m`` can be
        singular even for full-rank ``m``.
        """
        m = self.array(m)
        if side == "right":
            return self.one_sided_inverse(m.T, "left").T.copy()
        if side != "left":
            raise ValueError(f"side must be 'left' or 'right', got {side!r}")
        rows, cols = m.shape
        if cols == 0:
            return self.zeros(0, rows)
        aug = np.concatenate([m, self.eye(rows)], axis=1)
        reduced, pivots = self._eliminate(aug, ncols=cols)
        if len(pivots) != cols:
            raise NotInvertibleError("not one-sided invertible")
        return reduced[:cols, cols:].copy()

    def inverse(self, m: np.ndarray) -> np.ndarray:
        m = self.array(m)
        if m.shape[0] != m.shape[1]:
            raise NotInvertibleError("not one-sided invertible")
        return self.one_sided_inverse(m, "left")

    def is_invertible(self, m: np.ndarray) -> bool:
        m = np.asarray(m)
        return m.shape[0] == m.shape[1] and self.rank(m) == m.shape[0]

    # -- serialization -----------------------------------------------------
    def to_json(self, arr: np.ndarray):
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError


class PrimeField(Field):
    """The prime field ``F_p`` with ``p < 2**31``; entries are int64 residues."""

    kind = "prime"
    dtype = np.int64

    def __init__(self, p: int):
        p = int(p)
        if not (2 <= p < 2**31) or not _is_prime(p):
            raise ValueError(f"characteristic must be a prime below 2^31, got {p}")
        self.p = p

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("prime", self.p))

    @property
    def order(self) -> int:
        return self.p

    def coerce(self, x) -> int:
        if isinstance(x, Fraction):
            return int(x.numerator * pow(x.denominator, -1, self.p) % self.p)
        if isinstance(x, str):
            return self.coerce(Fraction(x))
        return int(x) % self.p

    def inv(self, x) -> int:
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def reduce(self, arr):
        return np.mod(arr, self.p)

    def array(self, data) -> np.ndarray:
        arr = np.asarray(data)
        if arr.dtype == object:
            flat = [self.coerce(x) for x in arr.ravel()]
            return np.array(flat, dtype=np.int64).reshape(arr.shape)
        return np.mod(arr.astype(np.int64), self.p)

    def _safe(self, inner: int) -> bool:
        return (self.p - 1) ** 2 * max(inner, 1) < _INT64_LIMIT

    def matmul(self, a, b):
        inner = a.shape[-1] if a.ndim else 1
        if self._safe(inner):
            return np.mod(a @ b, self.p)
        res = a.astype(object) @ b.astype(object)
        return np.mod(res, self.p).astype(np.int64)

    def contract(self, subscripts, a, b):
        lhs, _ = subscripts.split("->")
        sa, sb = lhs.split(",")
        sizes = dict(zip(sa, a.shape))
        sizes.update(zip(sb, b.shape))
        out = subscripts.split("->")[1]
        inner = 1
        for ch in set(sa) | set(sb):
            if ch not in out:
                inner *= sizes[ch]
        if self._safe(inner):
            return np.mod(np.einsum(subscripts, a, b), self.p)
        res = np.einsum(subscripts, a.astype(object), b.astype(object))
        return np.mod(res, self.p).astype(np.int64)

    def random_array(self, rng, shape) -> np.ndarray:
        return rng.integers(0, self.p, size=shape, dtype=np.int64)

    def elements(self) -> Iterator[int]:
        return iter(range(self.p))

    def to_json(self, arr):
        return np.asarray(arr).tolist()

    def describe(self) -> dict:
        return {"kind": "prime", "p": self.p}


class Rationals(Field):
    """The field ``Q`` with normalized :class:`Fraction` entries."""

    kind = "rationals"
    dtype = object

    def __repr__(self) -> str:
        return "Rationals()"

    def __eq__(self, other) -> bool:
        return isinstance(other, Rationals)

    def __hash__(self) -> int:
        return hash("rationals")

    order = None

    def coerce(self, x) -> Fraction:
        return Fraction(x)

    def inv(self, x) -> Fraction:
        x = Fraction(x)
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / x

    def array(self, data) -> np.ndarray:
        arr = np.asarray(data, dtype=object)
        flat = [Fraction(x) for x in arr.ravel()]
        out = np.empty(len(flat), dtype=object)
        out[:] = flat
        return out.reshape(arr.shape)

    def random_array(self, rng, shape) -> np.ndarray:
        return self.array(rng.integers(-3, 4, size=shape))

    def to_json(self, arr):
        return [self.to_json(x) for x in arr] if np.ndim(arr) else _frac_str(arr)

    def describe(self) -> dict:
        return {"kind": "rationals"}


def _frac_str(x) -> str | int:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def field_from_spec(spec) -> Field:
    """Build a field from ``{"kind": "prime", "p": 5}``, ``{"kind": "rationals"}``,
    a bare prime, or the strings ``"Q"``/``"rationals"``."""
    if isinstance(spec, Field):
        return spec
    if isinstance(spec, int):
        return PrimeField(spec)
    if isinstance(spec, str):
        if spec.lower() in ("q", "rationals", "qq"):
            return Rationals()
        return PrimeField(int(spec))
    kind = spec.get("kind")
    if kind in ("prime", "prime-field"):
        return PrimeField(spec["p"])
    if kind == "rationals":
        return Rationals()
    raise ValueError(f"unknown field kind {kind!r}")


def block_diag(field: Field, blocks: Sequence[np.ndarray]) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = field.zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out
