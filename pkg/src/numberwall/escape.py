"""Escape of mass along number-wall diagonals.

For diagonal ``k`` the quotient degrees of ``<t^k theta>`` are the gaps
between consecutive nonzero entries, reading down from row -1.  With
cutoff ``n`` the escaped share is ``sum max(d - n, 0) / sum d``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .contfrac import expand
from .ffield import Polynomial, check_prime, is_irreducible
from .laurent import LaurentSeries, PrecisionError, frac, mul, substitute
from .parallel import pmap

__all__ = [
    "EscapeReport",
    "escape_fraction",
    "detect_period",
    "diagonal_degrees",
    "escape_at",
    "escape_many",
    "suffix",
    "complement",
    "phi_direct",
    "phi_predict",
    "escape_predict",
    "density_scan",
    "family_trace",
    "TransportRow",
    "transport_escape_check",
]


@dataclass(frozen=True)
class EscapeReport:
    """Escape share on one diagonal.

    ``preperiod`` and ``period`` are row counts along the diagonal;
    ``quotient_period`` is the number of quotients per period.  ``period``
    is ``None`` when no period was found (or window mode was requested),
    and then ``e`` is taken over every certified degree.
    """

    k: int
    n: int
    e: Fraction
    preperiod: int | None
    period: int | None
    quotient_period: int | None
    degrees: tuple[int, ...]
    horizon: int
    mode: str

    @property
    def periodic(self) -> bool:
        return self.period is not None

    def csv_row(self) -> str:
        pre = "" if self.preperiod is None else self.preperiod
        per = "" if self.period is None else self.period
        return f"{self.k},{self.n},{float(self.e):.12g},{pre},{per}"


def escape_fraction(degrees: Sequence[int], n: int) -> Fraction:
    total = sum(degrees)
    if total == 0:
        raise ValueError("no quotient degrees to measure")
    return Fraction(sum(max(d - n, 0) for d in degrees), total)


def detect_period(degrees: Sequence[int], min_repeats: int = 3) -> tuple[int, int] | None:
    """``(preperiod, period)`` in quotients, or ``None``.

    A candidate period ``q`` must repeat at least ``min_repeats`` times after
    its preperiod.  Among candidates the one with the shortest
    ``preperiod + period`` wins, ties going to the shorter period.
    """
    seq = list(degrees)
    N = len(seq)
    best = None
    for q in range(1, N // min_repeats + 1):
        i = N - q - 1
        while i >= 0 and seq[i] == seq[i + q]:
            i -= 1
        pre = i + 1
        if N - pre < min_repeats * q:
            continue
        key = (pre + q, q)
        if best is None or key < best[0]:
            best = (key, (pre, q))
    return None if best is None else best[1]


def diagonal_degrees(theta: LaurentSeries, k: int, horizon: int) -> list[int]:
    """Certified quotient degrees of ``<t^k theta>`` from ``2 * horizon + 2`` coefficients.

    These cover at least ``horizon`` rows of the diagonal.
    """
    shifted = theta.shift(k)
    L = 2 * horizon + 2
    if not shifted.extendable:
        avail = int(-shifted.known_through())
        if avail < L:
            raise PrecisionError(f"diagonal {k} needs {L} coefficients, {avail} certified")
    return expand(frac(shifted), precision=L).degrees


def escape_at(theta: LaurentSeries, k: int, n: int, horizon: int = 600,
              mode: str = "periodic") -> EscapeReport:
    if mode not in ("periodic", "window"):
        raise ValueError(f"unknown mode {mode!r}")
    degs = diagonal_degrees(theta, k, horizon)
    if not degs:
        raise PrecisionError(f"no certified quotients on diagonal {k} within {horizon} rows")
    if mode == "periodic":
        found = detect_period(degs)
        if found is not None:
            pre, q = found
            block = degs[pre:pre + q]
            return EscapeReport(k, n, escape_fraction(block, n), sum(degs[:pre]), sum(block), q,
                                tuple(block), horizon, mode)
    return EscapeReport(k, n, escape_fraction(degs, n), None, None, None, tuple(degs), horizon,
                        "window" if mode == "window" else "window-fallback")


def escape_many(theta: LaurentSeries, ks: Iterable[int], n: int, horizon: int = 600,
                mode: str = "periodic", workers: int | None = None) -> list[EscapeReport]:
    return pmap(lambda k: escape_at(theta, k, n, horizon, mode), list(ks), workers)


def _level_of(p: int, j: int) -> int:
    k = 0
    while p ** (k + 1) <= j:
        k += 1
    return k


def suffix(p: int, j: int, k: int | None = None) -> int:
    """``j`` with its leading base-p digit (at position ``k``) removed."""
    if k is None:
        k = _level_of(p, j)
    return j % p ** k


def complement(p: int, j: int) -> int:
    """``p^(k+1) - j`` for ``p^k <= j < p^(k+1)``."""
    return p ** (_level_of(p, j) + 1) - j


def phi_direct(p: int, j: int, level: int, n: int = 1) -> int:
    """Escaped mass on diagonal ``j`` of the level-``level`` iterate, counted directly.

    Sums ``max(gap - n, 0)`` over consecutive nonzero rows ``h_i < h_(i+1)``
    with ``h_(i+1) <= p^level - 1 - j``.  Row -1 counts as nonzero, as the
    unit row above the wall does.
    """
    side = p ** level
    if not 1 <= j <= side:
        raise ValueError(f"j={j} outside [1, {side}]")
    grid = _cantor_grid(p, level)
    last = side - 1 - j
    if last < 0:
        return 0
    rows = np.arange(last + 1)
    live = np.flatnonzero(grid[rows, rows + j] != 0)
    live = np.concatenate([[-1], live])
    return int(np.maximum(np.diff(live) - n, 0).sum())


@lru_cache(maxsize=None)
def _cantor_grid(p: int, level: int) -> np.ndarray:
    from .morph2d import cantor_morphism2d, iterate2d

    cells = iterate2d(cantor_morphism2d(p), "A", level).cells
    cells.setflags(write=False)
    return cells


def phi_predict(p: int, j: int, level: int, proof_variant: bool = False) -> int:
    """Recursive estimate of the escaped mass on diagonal ``j`` at ``level``.

    Levels up to 1 are counted directly.  At higher levels the leading
    digit ``j_k`` of ``j`` at position ``k = level - 1`` selects the case.
    Negative values clamp to 0.  ``proof_variant`` subtracts 2 in the
    ``j_k = p - 2`` case.
    """
    check_prime(p)
    if not 1 <= j <= p ** level:
        raise ValueError(f"j={j} outside [1, {p ** level}]")
    memo: dict[tuple[int, int], int] = {}

    def phi(lv: int, x: int) -> int:
        if (lv, x) in memo:
            return memo[(lv, x)]
        if lv <= 1:
            val = phi_direct(p, x, lv)
        else:
            k = lv - 1
            pk = p ** k
            jk, suf = divmod(x, pk)
            if jk >= p:
                val = 0
            elif suf == 0:
                val = (p - jk) * pk if jk % 2 else 0
            elif jk == p - 1:
                val = phi(k, suf)
            elif jk == p - 2:
                val = 2 * (pk - suf) - (2 if proof_variant else 0) + phi(k, pk - suf)
            elif jk % 2 == 0:
                val = (p - jk - 3) * (pk - suf) + (p - jk - 2) * phi(k, suf)
            else:
                val = (p - jk) * (pk - suf) + (p - jk - 1) * phi(k, pk - suf)
            val = max(val, 0)
        memo[(lv, x)] = val
        return val

    return phi(level, j)


def escape_predict(p: int, j: int) -> Fraction:
    """``(j + phi) / p^(k+1)`` for ``p^k <= j < p^(k+1)``.

    The dropped error term is of size ``O(1) / p^(k+1)`` for fixed cutoff.
    """
    if j <= 0:
        raise ValueError("the predictor needs j >= 1")
    k = _level_of(p, j)
    return Fraction(j + phi_predict(p, j, k + 1), p ** (k + 1))


def density_scan(theta: LaurentSeries, K: int, n: int, eps: float, horizon: int = 600,
                 workers: int | None = None) -> float:
    """Share of diagonals ``1 <= k <= K`` whose window-mode escape exceeds ``1 - eps``."""
    reports = escape_many(theta, range(1, K + 1), n, horizon, "window", workers)
    return sum(1 for r in reports if r.e > 1 - eps) / K


def family_trace(p: int, family: str, k_max: int, n: int, leading: int = 1,
                 k_min: int = 1, workers: int | None = None) -> list[tuple[int, Fraction]]:
    """Escape along ``j = 2 p^k`` (``two_pk``) or ``j = leading * p^k`` (``odd_jk_pk``)."""
    from .autoseq import cantor_series

    if family == "two_pk":
        mult = 2
    elif family == "odd_jk_pk":
        if leading % 2 == 0 or not 1 <= leading < p:
            raise ValueError("leading digit must be odd and below p")
        mult = leading
    else:
        raise ValueError(f"unknown family {family!r}")
    theta = cantor_series(p)
    ks = list(range(k_min, k_max + 1))

    def one(k: int) -> Fraction:
        j = mult * p ** k
        level = _level_of(p, j) + 1
        horizon = 4 * 2 * p ** level
        return escape_at(theta, j, n, horizon, "periodic").e

    return list(zip(ks, pmap(one, ks, workers)))


@dataclass(frozen=True)
class TransportRow:
    k: int
    degrees: tuple[int, ...]
    image_degrees: tuple[int, ...]
    scaled: bool
    e: Fraction
    image_e: Fraction


def transport_escape_check(theta: LaurentSeries, P: Polynomial, k_list: Iterable[int], n: int,
                           count: int = 16) -> list[TransportRow]:
    """Compare ``<t^k theta>`` with ``<P^k theta(P)>`` quotient by quotient.

    ``scaled`` records that the image has the same number of quotients with
    every degree multiplied by ``deg P``; escape is compared at cutoffs
    ``n`` and ``n * deg P``.
    """
    if P.degree < 1:
        raise ValueError("P must be nonconstant")
    if P.degree > 1 and not is_irreducible(P):
        raise ValueError(f"{P} is not irreducible")
    dP = P.degree
    rows = []
    for k in k_list:
        base = expand(frac(theta.shift(k)), count)
        degs = base.degrees[:count]
        need = 2 * dP * sum(degs) + 8 + dP * k
        while True:
            image = mul(substitute(theta, P, need + dP * k + 8),
                        LaurentSeries.from_polynomial(P ** k), need + dP * k + 8)
            cf = expand(frac(image), count, precision=need)
            if len(cf.degrees) >= len(degs) or need > 1 << 15:
                break
            need *= 2
        img = cf.degrees[:len(degs)]
        if len(img) < len(degs):
            raise PrecisionError(f"image expansion at k={k} ran out of precision")
        scaled = img == [dP * d for d in degs]
        rows.append(TransportRow(k, tuple(degs), tuple(img), scaled,
                                 escape_fraction(degs, n), escape_fraction(img, n * dP)))
    return rows
