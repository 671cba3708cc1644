"""Number walls: a determinant oracle, a continued-fraction profile builder,
and the Toeplitz/Hankel bridge.

Rows are indexed by ``m`` in ``[-1, R)`` and columns by ``n`` in ``[0, C)``;
arrays store row ``m`` at index ``m + 1``.  Entry ``[m, n]`` for ``m >= 0``
is the determinant of the ``(m+1) x (m+1)`` Toeplitz matrix
``(s_{i-j+n})``, with ``s_i = 0`` for ``i < 0``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .contfrac import expand
from .ffield import FieldElement, Polynomial, check_prime
from .laurent import LaurentSeries, PrecisionError, frac, mul
from .parallel import pmap

__all__ = [
    "Wall",
    "WallProfile",
    "DiagonalPattern",
    "SequenceView",
    "toeplitz_det",
    "hankel_det",
    "cofactor_det",
    "det_mod_p",
    "wall_oracle",
    "profile",
    "profile_fast",
    "diagonal_pattern",
    "approx_window_check",
]


class SequenceView:
    """Uniform read access ``s_i`` to a finite list or a Laurent series.

    A series ``t^-1 * sum s_i t^-i`` supplies ``s_i`` as the coefficient of
    ``t^-(i+1)``.  Negative indices read as zero.
    """

    def __init__(self, S, p: int | None = None):
        if isinstance(S, SequenceView):
            self.p, self._series, self._values = S.p, S._series, S._values
            return
        if isinstance(S, LaurentSeries):
            self.p = S.p
            self._series = S
            self._values = None
        else:
            if p is None:
                raise ValueError("a plain sequence needs its modulus p")
            self.p = check_prime(p)
            self._series = None
            self._values = [int(x) % p for x in S]

    @property
    def length(self) -> float:
        if self._series is not None:
            return math.inf if self._series.extendable else max(0, int(-self._series.known_through()))
        return len(self._values)

    def array(self, n: int) -> np.ndarray:
        """``s_0 .. s_(n-1)``; raises when they are not all certified."""
        if n > self.length:
            raise PrecisionError(f"sequence has {self.length} certified terms, {n} needed")
        if self._series is not None:
            vals = self._series.coeffs_between(-1, -n) if n > 0 else []
        else:
            vals = self._values[:n]
        return np.array(vals, dtype=np.int64)

    def __getitem__(self, i: int) -> int:
        if i < 0:
            return 0
        return int(self.array(i + 1)[i])

    def series(self) -> LaurentSeries:
        if self._series is not None:
            return self._series
        return LaurentSeries(self.p, -1, self._values)


def _inverse_table(p: int) -> np.ndarray | None:
    if p >= 1 << 16:
        return None
    tab = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        tab[x] = pow(x, -1, p)
    return tab


def _modinv(x: np.ndarray, p: int, table) -> np.ndarray:
    if table is not None:
        return table[x]
    out = np.ones_like(x)
    base, e = x.copy(), p - 2
    while e:
        if e & 1:
            out = out * base % p
        base = base * base % p
        e >>= 1
    return out


def det_mod_p(mats: np.ndarray, p: int) -> np.ndarray:
    """Determinants mod p of a stack of square matrices by Gaussian elimination."""
    M = np.array(mats, dtype=np.int64) % p
    if M.ndim == 2:
        return det_mod_p(M[None], p)[0]
    B, n, _ = M.shape
    det = np.ones(B, dtype=np.int64)
    table = _inverse_table(p)
    for c in range(n):
        nz = M[:, c:, c] != 0
        has = nz.any(axis=1)
        piv = nz.argmax(axis=1) + c
        det[~has] = 0
        idx = np.nonzero(has & (piv != c))[0]
        if idx.size:
            top = M[idx, c].copy()
            M[idx, c] = M[idx, piv[idx]]
            M[idx, piv[idx]] = top
            det[idx] = (-det[idx]) % p
        pv = M[:, c, c]
        det = det * pv % p
        if c + 1 < n:
            f = M[:, c + 1:, c] * _modinv(pv, p, table)[:, None] % p
            M[:, c + 1:, c:] = (M[:, c + 1:, c:] - f[:, :, None] * M[:, None, c, c:]) % p
    return det


def _toeplitz_stack(s: np.ndarray, ns: np.ndarray, m: int) -> np.ndarray:
    i = np.arange(m + 1)
    idx = ns[:, None, None] + i[None, :, None] - i[None, None, :]
    pad = m + 1 + max(0, -int(ns.min()))
    out = np.zeros(idx.shape, dtype=np.int64)
    ok = idx < len(s)
    padded = np.concatenate([np.zeros(pad, dtype=np.int64), s])
    out[ok] = padded[idx[ok] + pad]
    return out


def toeplitz_det(S, n: int, m: int, p: int | None = None) -> FieldElement:
    """``det (s_{i-j+n})_{0<=i,j<=m}``; ``m = -1`` gives 1."""
    seq = SequenceView(S, p)
    if m < 0:
        return FieldElement(1, seq.p)
    s = seq.array(n + m + 1) if n + m >= 0 else np.zeros(0, dtype=np.int64)
    mat = _toeplitz_stack(s, np.array([n]), m)[0]
    return FieldElement(int(det_mod_p(mat, seq.p)), seq.p)


def hankel_det(S, n: int, m: int, p: int | None = None) -> FieldElement:
    """``det (s_{i+j+n})_{0<=i,j<=m}``."""
    seq = SequenceView(S, p)
    if m < 0:
        return FieldElement(1, seq.p)
    top = n + 2 * m
    s = seq.array(top + 1) if top >= 0 else np.zeros(0, dtype=np.int64)
    padded = np.concatenate([np.zeros(m + 1 + max(0, -n), dtype=np.int64), s])
    i = np.arange(m + 1)
    mat = padded[i[:, None] + i[None, :] + n + m + 1 + max(0, -n)]
    return FieldElement(int(det_mod_p(mat, seq.p)), seq.p)


def cofactor_det(mat: Sequence[Sequence[int]], p: int) -> int:
    """Determinant by Laplace expansion along the first row (small matrices only)."""
    n = len(mat)
    if n == 0:
        return 1 % p
    if n == 1:
        return mat[0][0] % p
    total = 0
    for j in range(n):
        if mat[0][j] % p:
            minor = [row[:j] + row[j + 1:] for row in mat[1:]]
            total += (-1) ** j * mat[0][j] * cofactor_det(minor, p)
    return total % p


@dataclass(frozen=True)
class WallProfile:
    """Zero pattern of a wall block; ``zero[m+1, n]`` is set iff the entry is zero.

    Cells outside the certified region have ``known`` unset.
    """

    zero: np.ndarray
    known: np.ndarray

    @property
    def rows(self) -> int:
        return self.zero.shape[0] - 1

    @property
    def cols(self) -> int:
        return self.zero.shape[1]

    def is_zero(self, m: int, n: int) -> bool:
        if not self.known[m + 1, n]:
            raise PrecisionError(f"cell ({m}, {n}) is not certified")
        return bool(self.zero[m + 1, n])

    def block(self, R: int, C: int) -> "WallProfile":
        return WallProfile(self.zero[:R + 1, :C].copy(), self.known[:R + 1, :C].copy())

    def __eq__(self, other):
        if not isinstance(other, WallProfile):
            return NotImplemented
        return (self.zero.shape == other.zero.shape
                and np.array_equal(self.known, other.known)
                and np.array_equal(self.zero & self.known, other.zero & other.known))

    __hash__ = None

    def first_difference(self, other: "WallProfile") -> tuple[int, int] | None:
        """First ``(m, n)`` in row-major order where the two disagree."""
        a = np.where(self.known, self.zero, 2)
        b = np.where(other.known, other.zero, 2)
        diff = np.argwhere(a != b)
        if not len(diff):
            return None
        r, c = diff[0]
        return int(r) - 1, int(c)

    def to_pbm(self) -> str:
        """Plain PBM: one raster row per wall row from ``m = -1``; 1 marks a zero entry."""
        h, w = self.zero.shape
        lines = ["P1", f"{w} {h}"]
        for row in self.zero:
            lines.append(" ".join("1" if v else "0" for v in row))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Wall:
    """Wall values over F_p; ``values[m+1, n]`` is -1 where the entry is not certified."""

    p: int
    values: np.ndarray

    @property
    def rows(self) -> int:
        return self.values.shape[0] - 1

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    def __getitem__(self, mn: tuple[int, int]) -> FieldElement:
        m, n = mn
        v = int(self.values[m + 1, n])
        if v < 0:
            raise PrecisionError(f"cell ({m}, {n}) is not certified")
        return FieldElement(v, self.p)

    def to_csv(self) -> str:
        lines = ["m,n,value"]
        for r, c in itertools.product(range(self.values.shape[0]), range(self.values.shape[1])):
            v = self.values[r, c]
            if v >= 0:
                lines.append(f"{r - 1},{c},{v}")
        return "\n".join(lines) + "\n"


def wall_oracle(S, R: int, C: int, p: int | None = None, workers: int | None = None) -> Wall:
    """Every cell of rows ``-1..R-1`` and columns ``0..C-1`` from its determinant.

    For a finite sequence of length ``r`` a cell is certified iff
    ``m + n < r``; cells to the left of the main diagonal use ``s_i = 0``
    for ``i < 0``.
    """
    seq = SequenceView(S, p)
    q = seq.p
    avail = seq.length
    need = R + C - 1
    s = seq.array(int(min(avail, need)))
    values = np.full((R + 1, C), -1, dtype=np.int64)
    values[0, :] = 1
    ns = np.arange(C)

    def row(m: int) -> np.ndarray:
        out = np.full(C, -1, dtype=np.int64)
        ok = ns + m < len(s)
        if ok.any():
            cols = ns[ok]
            out[ok] = det_mod_p(_toeplitz_stack(s, cols, m), q)
        return out

    for m, vals in enumerate(pmap(row, range(R), workers)):
        values[m + 1] = vals
    return Wall(q, values)


def profile(wall: Wall) -> WallProfile:
    known = wall.values >= 0
    return WallProfile((wall.values == 0) & known, known)


def _diagonal_rows(theta: LaurentSeries, k: int, m_max: int) -> tuple[list[int], int]:
    """Nonzero rows ``>= 0`` and the last certified row on diagonal ``k``.

    Uses the expansion of ``<t^k theta>``: the entry at row ``m`` is nonzero
    exactly when ``m + 1`` is a partial sum of quotient degrees.
    """
    L = 2 * m_max + 1
    shifted = theta.shift(k)
    if not theta.extendable:
        kt = shifted.known_through()
        L = min(L, int(-kt)) if kt <= -1 else 0
    cf = expand(frac(shifted), precision=max(L, 0))
    rows, total = [], 0
    for d in cf.degrees:
        total += d
        if total - 1 > m_max:
            return rows, m_max
        rows.append(total - 1)
    if cf.exact:
        return rows, m_max
    if cf.next_degree_min is not None:
        last = total + cf.next_degree_min - 2
    else:
        last = total - 1
    return rows, min(last, m_max)


def profile_fast(theta, R: int, C: int, workers: int | None = None) -> WallProfile:
    """Wall profile on rows ``-1..R-1``, columns ``0..C-1`` built diagonal by diagonal."""
    if not isinstance(theta, LaurentSeries):
        theta = SequenceView(theta).series()
    zero = np.zeros((R + 1, C), dtype=bool)
    known = np.zeros((R + 1, C), dtype=bool)
    known[0, :] = True
    ks = list(range(-(R - 1), C))

    def job(k: int):
        return _diagonal_rows(theta, k, min(R - 1, C - 1 - k))

    for k, (rows, last) in zip(ks, pmap(job, ks, workers)):
        m_lo = max(0, -k)
        if last < m_lo:
            continue
        ms = np.arange(m_lo, last + 1)
        known[ms + 1, ms + k] = True
        zero[ms + 1, ms + k] = True
        hit = np.array([m for m in rows if m_lo <= m <= last], dtype=np.int64)
        if hit.size:
            zero[hit + 1, hit + k] = False
    if not theta.extendable:
        m, n = np.indices((R + 1, C))
        known &= (m - 1) + n < SequenceView(theta).length
        known[0, :] = True
    return WallProfile(zero, known)


@dataclass(frozen=True)
class DiagonalPattern:
    """Nonzero rows ``h_0 < h_1 < ...`` of diagonal ``k`` (row -1 not listed).

    ``degrees[i] = h_i - h_(i-1)`` with ``h_(-1) = -1``; ``horizon`` is the
    last certified row.
    """

    k: int
    rows: tuple[int, ...]
    degrees: tuple[int, ...]
    horizon: int


def diagonal_pattern(prof: WallProfile, k: int) -> DiagonalPattern:
    if not 0 <= k < prof.cols:
        raise IndexError(f"diagonal {k} outside the profile")
    rows, horizon = [], -1
    for m in range(0, min(prof.rows, prof.cols - k)):
        if not prof.known[m + 1, m + k]:
            break
        horizon = m
        if not prof.zero[m + 1, m + k]:
            rows.append(m)
    degrees = tuple(b - a for a, b in zip([-1] + rows, rows))
    return DiagonalPattern(k, tuple(rows), degrees, horizon)


def approx_window_check(theta: LaurentSeries, N: Polynomial, k: int, l: int,
                        n_terms: int | None = None) -> bool:
    """Whether ``|N| * |<N t^k theta>| <= p^-l``."""
    if N.is_zero():
        raise ValueError("N must be nonzero")
    shifted = theta.shift(k)
    if n_terms is None:
        if shifted.extendable:
            n_terms = N.degree + l + max(shifted.offset, 0) + 2 * (l + N.degree) + 8
        else:
            n_terms = int(shifted.offset - shifted.known_through() + 1)
    f = frac(mul(shifted, LaurentSeries.from_polynomial(N), n_terms))
    if f.is_zero():
        if f.known_through() > -(N.degree + l):
            raise PrecisionError("window is not covered by the certified coefficients")
        return True
    return N.degree + f.offset <= -l
