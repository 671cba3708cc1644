"""Continued fractions of Laurent series with certified quotients.

The fractional part known to ``L`` coefficients is the rational function
``R(t)/t^L``; running Euclid on ``(t^L, R)`` yields its quotients.  With
``D_i`` the sum of the first ``i`` quotient degrees, the degree of quotient
``i+1`` is certified when ``D_i + D_(i+1) <= L`` and the whole quotient
when ``2 D_(i+1) <= L``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .ffield import Polynomial, is_irreducible
from .laurent import LaurentSeries, PrecisionError, frac, integer_part, mul, substitute

__all__ = [
    "CFExpansion",
    "Convergent",
    "expand",
    "expand_fractional",
    "convergents",
    "reconstruct",
    "approximation_exponent",
    "is_best_approximation",
    "transport_check",
]

DEFAULT_PRECISION = 512
MAX_PRECISION = 1 << 15


@dataclass(frozen=True)
class CFExpansion:
    """``[a0; A_1, A_2, ...]`` restricted to certified quotients.

    ``pending_degree`` is the degree of the next quotient when only its
    degree is certified.  ``next_degree_min`` bounds the degree of the first
    quotient about which nothing is certified (``None`` once the expansion
    has terminated or was cut at ``max_quotients``).
    """

    a0: Polynomial
    quotients: tuple[Polynomial, ...]
    exact: bool = False
    pending_degree: int | None = None
    next_degree_min: int | None = None
    precision_used: int = 0

    @property
    def certified_count(self) -> int:
        return len(self.quotients)

    @property
    def degrees(self) -> list[int]:
        """Certified quotient degrees, including a pending one."""
        out = [q.degree for q in self.quotients]
        if self.pending_degree is not None:
            out.append(self.pending_degree)
        return out


@dataclass(frozen=True)
class Convergent:
    M: Polynomial
    N: Polynomial
    index: int


def _strip(a: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(a)
    return a[nz[0]:] if len(nz) else a[:0]


def _euclid(x: np.ndarray, p: int, max_quotients: int | None):
    """Certified quotients of the series whose fractional coefficients are ``x``.

    ``x[j]`` multiplies ``t^-(j+1)``.  Returns (quotients high-degree-first,
    pending degree, lower bound for the next degree).
    """
    L = len(x)
    prev = np.zeros(L + 1, dtype=np.int64)
    prev[0] = 1
    cur = _strip(x.astype(np.int64) % p)
    inv = [0] + [pow(i, -1, p) for i in range(1, p)] if p < 1 << 16 else None
    quotients = []
    total = 0
    while True:
        if max_quotients is not None and len(quotients) >= max_quotients:
            return quotients, None, None
        if len(cur) == 0:
            return quotients, None, L + 1 - 2 * total
        d = len(prev) - len(cur)
        if 2 * total + d > L:
            return quotients, None, L + 1 - 2 * total
        if 2 * (total + d) > L:
            return quotients, d, None
        lead_inv = inv[cur[0]] if inv is not None else pow(int(cur[0]), -1, p)
        rem = prev.copy()
        q = np.zeros(d + 1, dtype=np.int64)
        n = len(cur)
        for i in range(d + 1):
            c = rem[i] * lead_inv % p
            if c:
                q[i] = c
                rem[i:i + n] = (rem[i:i + n] - c * cur) % p
        quotients.append(q)
        total += d
        prev, cur = cur, _strip(rem[d + 1:])


def _poly_from_high(q: np.ndarray, p: int) -> Polynomial:
    return Polynomial(q[::-1].tolist(), p)


def expand_fractional(x, p: int, max_quotients: int | None = None) -> CFExpansion:
    """Expansion of ``sum x[j] t^-(j+1)`` known to ``len(x)`` coefficients."""
    qs, pending, nxt = _euclid(np.asarray(x, dtype=np.int64), p, max_quotients)
    return CFExpansion(Polynomial.zero(p), tuple(_poly_from_high(q, p) for q in qs),
                       pending_degree=pending, next_degree_min=nxt, precision_used=len(x))


def _expand_once(theta: LaurentSeries, max_quotients: int | None, L: int) -> CFExpansion:
    p = theta.p
    a0 = integer_part(theta)
    x = theta.coeffs_between(-1, -L) if L > 0 else []
    cf = expand_fractional(x, p, max_quotients)
    cf = CFExpansion(a0, cf.quotients, False, cf.pending_degree, cf.next_degree_min, L)
    if theta.is_exact:
        num, den = theta.rational
        last = convergents(cf)[-1]
        if last.M * den == last.N * num:
            return CFExpansion(a0, cf.quotients, True, None, None, L)
    return cf


def expand(theta: LaurentSeries, max_quotients: int | None = None,
           precision: int | None = None) -> CFExpansion:
    """Continued fraction of ``theta`` with only certified quotients.

    ``precision`` is the number of fractional coefficients to use.  For a
    stored series it defaults to all certified ones.  For an extendable
    series it defaults to ``DEFAULT_PRECISION``, doubled (up to
    ``MAX_PRECISION``) while fewer than ``max_quotients`` are certified.
    """
    if precision is not None:
        return _expand_once(theta, max_quotients, precision)
    if not theta.extendable:
        kt = theta.known_through()
        if kt > 0:
            raise PrecisionError("polynomial part of the series is not certified")
        return _expand_once(theta, max_quotients, int(-kt))
    L = DEFAULT_PRECISION if max_quotients is None else 64
    while True:
        cf = _expand_once(theta, max_quotients, L)
        done = cf.exact or max_quotients is None or cf.certified_count >= max_quotients
        if done or L >= MAX_PRECISION:
            return cf
        L *= 2


def convergents(cf: CFExpansion) -> list[Convergent]:
    """``M_i/N_i`` for ``i = 0..certified_count`` by the three-term recurrence."""
    p = cf.a0.p
    one, zero = Polynomial.constant(1, p), Polynomial.zero(p)
    m_prev, m_cur = one, cf.a0
    n_prev, n_cur = zero, one
    out = [Convergent(m_cur, n_cur, 0)]
    for i, a in enumerate(cf.quotients, start=1):
        m_prev, m_cur = m_cur, a * m_cur + m_prev
        n_prev, n_cur = n_cur, a * n_cur + n_prev
        out.append(Convergent(m_cur, n_cur, i))
    return out


def reconstruct(cf: CFExpansion) -> LaurentSeries:
    """The last convergent as an exact series."""
    last = convergents(cf)[-1]
    return LaurentSeries.from_rational(last.M, last.N)


def _terms_for(theta: LaurentSeries, n_terms: int | None) -> int:
    if n_terms is not None:
        return n_terms
    if theta.extendable:
        return DEFAULT_PRECISION
    return int(theta.offset - theta.known_through() + 1)


def approximation_exponent(theta: LaurentSeries, M: Polynomial, N: Polynomial,
                           n_terms: int | None = None) -> float:
    """Exponent of ``|N theta - M|``, i.e. of ``|N| * |theta - M/N|``.

    ``n_terms`` coefficients of ``theta`` are used (all certified ones for a
    stored series, ``DEFAULT_PRECISION`` for an extendable one).  Returns
    ``-inf`` when the difference vanishes within precision.
    """
    if theta.is_exact:
        num, den = theta.rational
        diff = LaurentSeries.from_rational(N * num - M * den, den)
        return -math.inf if diff.is_zero() else diff.offset
    prod = mul(theta, LaurentSeries.from_polynomial(N), _terms_for(theta, n_terms))
    diff = prod - LaurentSeries.from_polynomial(M)
    return -math.inf if diff.is_zero() else diff.offset


def is_best_approximation(theta: LaurentSeries, conv: Convergent,
                          n_terms: int | None = None) -> bool:
    """No N of degree at most ``deg N_i`` gives a strictly smaller ``|<N theta>|``.

    Exhaustive over all nonzero N of degree at most ``deg N_i``; intended for
    ``p <= 7`` and ``deg N_i <= 4``.
    """
    p = theta.p
    d = conv.N.degree
    n = _terms_for(theta, n_terms)
    target = _frac_exponent(theta, conv.N, n)
    for coeffs in itertools.product(range(p), repeat=d + 1):
        N = Polynomial(coeffs, p)
        if N.is_zero():
            continue
        if _frac_exponent(theta, N, n) < target:
            return False
    return True


def _frac_exponent(theta: LaurentSeries, N: Polynomial, n_terms: int) -> float:
    prod = mul(theta, LaurentSeries.from_polynomial(N), n_terms)
    f = frac(prod)
    return -math.inf if f.is_zero() else f.offset


def transport_check(theta: LaurentSeries, P: Polynomial, count: int) -> bool:
    """The first ``count`` quotients of ``theta(P)`` are ``A_i(P)``.

    The polynomial parts are compared as well.
    """
    if P.degree > 1 and not is_irreducible(P):
        raise ValueError(f"{P} is not irreducible")
    base = expand(theta, count)
    if base.certified_count < count and not base.exact:
        raise PrecisionError(f"only {base.certified_count} of {count} quotients certified")
    want = [a.compose(P) for a in base.quotients[:count]]
    total = sum(a.degree for a in want)
    n_terms = 2 * total + 8 + max(theta.offset, 0) * P.degree
    while True:
        image = substitute(theta, P, n_terms)
        cf = expand(image, count)
        if cf.certified_count >= len(want) or cf.exact or n_terms > MAX_PRECISION:
            break
        n_terms *= 2
    if cf.a0 != base.a0.compose(P):
        return False
    if cf.certified_count < len(want):
        raise PrecisionError("substituted expansion ran out of precision")
    return list(cf.quotients[:len(want)]) == want
