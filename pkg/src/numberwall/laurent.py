"""Laurent series in F_p((1/t)) with explicit certified precision.

A series is stored by its top exponent ``offset`` (the series is
``sum a_e t^e`` over ``e <= offset``) and a window of coefficients for
the exponents ``offset, offset-1, ...``.  ``precision`` counts how many of
them are guaranteed.  A series may instead be backed by a deterministic
source that produces more coefficients on demand, or by an exact rational
function ``num/den``.
"""

from __future__ import annotations

import math
import re
import threading
from typing import Callable, Sequence

from .ffield import Polynomial, check_prime

__all__ = [
    "LaurentSeries",
    "PrecisionError",
    "invert",
    "substitute",
    "frac",
    "norm",
    "mul",
    "agree",
    "integer_part",
    "series_from_sequence",
    "parse_series",
    "format_series",
]

NEG_INF = -math.inf
_STRIP_LIMIT = 1 << 16


class PrecisionError(ArithmeticError):
    """Raised when an operation needs coefficients that are not certified."""


class _Source:
    """Thread-safe lazily extended coefficient buffer.

    ``produce(n)`` must return at least ``n`` coefficients, always the same
    ones for the same positions.
    """

    def __init__(self, produce: Callable[[int], Sequence[int]], p: int, block: int = 64):
        self._produce = produce
        self._p = p
        self._block = block
        self._buf: list[int] = []
        self._lock = threading.Lock()

    def get(self, n: int) -> list[int]:
        buf = self._buf
        if len(buf) >= n:
            return buf
        with self._lock:
            if len(self._buf) < n:
                want = max(n, 2 * len(self._buf), self._block)
                fresh = [int(c) % self._p for c in self._produce(want)]
                if len(fresh) < n:
                    raise PrecisionError(f"source produced {len(fresh)} of {n} coefficients")
                if fresh[: len(self._buf)] != self._buf:
                    raise RuntimeError("coefficient source is not deterministic")
                self._buf = fresh
            return self._buf


class LaurentSeries:
    __slots__ = ("p", "offset", "_coeffs", "_source", "_skip", "rational")

    def __init__(self, p: int, offset: int, coeffs: Sequence[int] = (), *,
                 source: _Source | None = None, skip: int = 0,
                 rational: tuple[Polynomial, Polynomial] | None = None):
        check_prime(p)
        self.p = p
        self.rational = rational
        self._source = source
        self._skip = skip
        if source is None:
            c = [int(x) % p for x in coeffs]
            lead = next((i for i, x in enumerate(c) if x), len(c))
            self.offset = offset - lead
            self._coeffs = c[lead:]
        else:
            self._coeffs = None
            self.offset = offset
            lead = 0
            while lead < _STRIP_LIMIT:
                try:
                    if self._fetch(lead + 1)[lead]:
                        break
                except PrecisionError:
                    break
                lead += 1
            self._skip += lead
            self.offset -= lead

    # construction -----------------------------------------------------

    @classmethod
    def zero(cls, p: int) -> "LaurentSeries":
        zero = Polynomial.zero(p)
        return cls(p, 0, (), rational=(zero, Polynomial.constant(1, p)))

    @classmethod
    def from_source(cls, p: int, offset: int, produce: Callable[[int], Sequence[int]],
                    block: int = 64) -> "LaurentSeries":
        """Extendable series whose coefficient of ``t^(offset-i)`` is ``produce(n)[i]``."""
        return cls(p, offset, source=_Source(produce, p, block))

    @classmethod
    def from_rational(cls, num: Polynomial, den: Polynomial) -> "LaurentSeries":
        """Exact series of ``num/den`` by long division in powers of 1/t."""
        if den.is_zero():
            raise ZeroDivisionError("rational series with zero denominator")
        p = num.p
        if num.is_zero():
            return cls.zero(p)
        g = num.gcd(den)
        if g.degree > 0:
            num, den = num // g, den // g
        offset = num.degree - den.degree
        dc = den.coeffs
        dinv = pow(dc[-1], -1, p)
        d = den.degree
        top = num.degree

        def produce(n: int) -> list[int]:
            # y_j is the coefficient of t^(offset-j); num = den * y
            y: list[int] = []
            for j in range(n):
                acc = num[top - j]
                for l in range(1, min(j, d) + 1):
                    acc -= dc[d - l] * y[j - l]
                y.append(acc * dinv % p)
            return y

        return cls(p, offset, source=_Source(produce, p), rational=(num, den))

    @classmethod
    def from_polynomial(cls, poly: Polynomial) -> "LaurentSeries":
        return cls.from_rational(poly, Polynomial.constant(1, poly.p))

    @classmethod
    def monomial(cls, p: int, e: int, c: int = 1) -> "LaurentSeries":
        one = Polynomial.constant(1, p)
        if e >= 0:
            return cls.from_rational(Polynomial.monomial(e, p, c), one)
        return cls.from_rational(Polynomial.constant(c, p), Polynomial.monomial(-e, p))

    # access -------------------------------------------------------------

    def _fetch(self, n: int) -> list[int]:
        return self._source.get(self._skip + n)[self._skip:]

    @property
    def extendable(self) -> bool:
        return self._source is not None

    @property
    def is_exact(self) -> bool:
        return self.rational is not None

    @property
    def precision(self) -> float:
        """Number of certified coefficients, ``inf`` when extendable."""
        if self._source is not None:
            return math.inf
        return len(self._coeffs)

    def window(self, n: int) -> list[int]:
        """The first ``n`` coefficients, for exponents ``offset`` downwards."""
        if n <= 0:
            return []
        if self._source is not None:
            return list(self._fetch(n)[:n])
        if n > len(self._coeffs):
            raise PrecisionError(f"need {n} coefficients, only {len(self._coeffs)} certified")
        return self._coeffs[:n]

    def coeffs_between(self, top: int, bottom: int) -> list[int]:
        """Coefficients of ``t^top, t^(top-1), ..., t^bottom``."""
        if bottom > top:
            return []
        need = self.offset - bottom + 1
        w = self.window(need) if need > 0 else []
        out = []
        for e in range(top, bottom - 1, -1):
            i = self.offset - e
            out.append(w[i] if 0 <= i < len(w) else 0)
        return out

    def coeff(self, e: int) -> int:
        if e > self.offset:
            return 0
        return self.window(self.offset - e + 1)[-1]

    def known_through(self) -> float:
        """Lowest exponent whose coefficient is certified."""
        if self._source is not None:
            return NEG_INF
        return self.offset - len(self._coeffs) + 1

    def with_precision(self, n: int) -> "LaurentSeries":
        """A stored copy holding the first ``n`` coefficients."""
        return LaurentSeries(self.p, self.offset, self.window(n))

    def is_zero(self) -> bool:
        """True when every certified coefficient vanishes."""
        if self.rational is not None:
            return self.rational[0].is_zero()
        if self._source is not None:
            try:
                return not self._fetch(1)[0]
            except PrecisionError:
                return True
        return not self._coeffs

    # arithmetic -----------------------------------------------------------

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by ``t^k``."""
        rat = None
        if self.rational is not None:
            num, den = self.rational
            rat = (num.shift(k), den) if k >= 0 else (num, den.shift(-k))
        if self._source is not None:
            return LaurentSeries(self.p, self.offset + k, source=self._source,
                                 skip=self._skip, rational=rat)
        return LaurentSeries(self.p, self.offset + k, self._coeffs, rational=rat)

    def _combine_rational(self, other, op):
        if self.rational is None or other.rational is None:
            return None
        (a, b), (c, d) = self.rational, other.rational
        return op(a, b, c, d)

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        _check_modulus(self, other)
        rat = self._combine_rational(other, lambda a, b, c, d: (a * d + c * b, b * d))
        if rat is not None:
            return LaurentSeries.from_rational(*rat)
        low = max(self.known_through(), other.known_through())
        top = max(self.offset, other.offset)
        if low > top:
            return LaurentSeries(self.p, top, ())
        low = int(low)
        x = self.coeffs_between(top, low)
        y = other.coeffs_between(top, low)
        return LaurentSeries(self.p, top, [a + b for a, b in zip(x, y)])

    def __neg__(self) -> "LaurentSeries":
        return self.scale(-1)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def scale(self, c: int) -> "LaurentSeries":
        c %= self.p
        if c == 0:
            return LaurentSeries.zero(self.p)
        if self.rational is not None:
            num, den = self.rational
            return LaurentSeries.from_rational(num.scale(c), den)
        if self._source is not None:
            p, src, skip = self.p, self._source, self._skip
            return LaurentSeries.from_source(
                p, self.offset, lambda n: [x * c for x in src.get(skip + n)[skip:]])
        return LaurentSeries(self.p, self.offset, [x * c for x in self._coeffs])

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        _check_modulus(self, other)
        rat = self._combine_rational(other, lambda a, b, c, d: (a * c, b * d))
        if rat is not None:
            return LaurentSeries.from_rational(*rat)
        n = min(self.precision, other.precision)
        if n == math.inf:
            raise PrecisionError("product of two unbounded series needs an explicit size; use mul()")
        return mul(self, other, int(n))

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return agree(self, other)

    __hash__ = None

    def __repr__(self):
        prec = self.precision
        shown = self.window(min(8, prec) if prec != math.inf else 8)
        return f"LaurentSeries(p={self.p}, offset={self.offset}, coeffs={shown}..., precision={prec})"


def _check_modulus(a: LaurentSeries, b: LaurentSeries):
    if a.p != b.p:
        raise ValueError(f"mixed moduli {a.p} and {b.p}")


def mul(a: LaurentSeries, b: LaurentSeries, n_terms: int) -> LaurentSeries:
    """Product with ``n_terms`` certified coefficients (needs that many from each factor)."""
    _check_modulus(a, b)
    p = a.p
    x, y = a.window(n_terms), b.window(n_terms)
    out = [0] * n_terms
    for i, u in enumerate(x):
        if u:
            for j in range(n_terms - i):
                out[i + j] += u * y[j]
    return LaurentSeries(p, a.offset + b.offset, [c % p for c in out])


def agree(a: LaurentSeries, b: LaurentSeries) -> bool:
    """True when the two series agree on every commonly certified exponent."""
    _check_modulus(a, b)
    if a.rational is not None and b.rational is not None:
        (x, y), (u, v) = a.rational, b.rational
        return x * v == y * u
    low = max(a.known_through(), b.known_through())
    if low == NEG_INF:
        raise PrecisionError("cannot compare two unbounded series without a size")
    top = max(a.offset, b.offset)
    if low > top:
        return True
    return a.coeffs_between(top, int(low)) == b.coeffs_between(top, int(low))


def norm(theta: LaurentSeries) -> float:
    """Exponent h with ``|theta| = p^h``; ``-inf`` when zero within precision."""
    if theta.is_zero():
        return NEG_INF
    return theta.offset


def frac(theta: LaurentSeries) -> LaurentSeries:
    """Drop the terms ``t^0`` and higher."""
    p = theta.p
    if theta.rational is not None:
        num, den = theta.rational
        return LaurentSeries.from_rational(num % den, den)
    if theta.offset < 0:
        return theta
    skip = theta.offset + 1
    if theta._source is not None:
        return LaurentSeries(p, -1, source=theta._source, skip=theta._skip + skip)
    return LaurentSeries(p, -1, theta._coeffs[skip:])


def integer_part(theta: LaurentSeries) -> Polynomial:
    """The polynomial part (terms ``t^0`` and higher)."""
    if theta.rational is not None:
        num, den = theta.rational
        return num // den
    if theta.offset < 0:
        return Polynomial.zero(theta.p)
    if theta.known_through() > 0:
        raise PrecisionError("polynomial part is not certified")
    return Polynomial(list(reversed(theta.coeffs_between(theta.offset, 0))), theta.p)


def invert(theta: LaurentSeries, n_terms: int) -> LaurentSeries:
    """``1/theta`` with ``n_terms`` certified coefficients, via ``a_{-h} b_h = 1``."""
    p = theta.p
    if theta.rational is not None:
        num, den = theta.rational
        if num.is_zero():
            raise ZeroDivisionError("inverse of the zero series")
        return LaurentSeries.from_rational(den, num)
    if theta.is_zero():
        raise ZeroDivisionError("inverse of a series that is zero within precision")
    if n_terms > theta.precision:
        raise PrecisionError(f"inverse needs {n_terms} coefficients, only {theta.precision} certified")
    a = theta.window(n_terms)
    inv0 = pow(a[0], -1, p)
    b = [inv0]
    for j in range(1, n_terms):
        acc = 0
        for l in range(1, j + 1):
            if a[l]:
                acc += a[l] * b[j - l]
        b.append((-acc * inv0) % p)
    return LaurentSeries(p, -theta.offset, b)


def substitute(theta: LaurentSeries, P: Polynomial, n_terms: int) -> LaurentSeries:
    """``theta(P(t)) = sum a_i P^(-i)`` with ``n_terms`` certified coefficients."""
    if P.p != theta.p:
        raise ValueError("mixed moduli")
    d = P.degree
    if d < 1:
        raise ValueError("substitution needs a nonconstant polynomial")
    p = theta.p
    if theta.rational is not None:
        num, den = theta.rational
        return LaurentSeries.from_rational(num.compose(P), den.compose(P))
    if theta.is_zero():
        return LaurentSeries(p, theta.offset * d, ())
    h = theta.offset
    top = h * d
    bottom = top - n_terms + 1
    # terms a_e t^e with e < -I cannot reach exponent >= bottom
    depth = max(0, (-bottom) // d)
    needed = h + depth + 1
    if needed > theta.precision:
        raise PrecisionError(f"substitution needs {needed} input coefficients, "
                             f"only {theta.precision} certified")
    a = theta.window(max(needed, 1))

    def coef(e: int) -> int:
        i = h - e
        return a[i] if 0 <= i < len(a) else 0

    lo = min(bottom, -1)
    width = -lo + 1
    pc = P.coeffs
    lead_inv = pow(pc[-1], -1, p)
    s = [0] * width

    for e in range(-depth, 0):
        x = s[:]
        x[0] = (x[0] + coef(e)) % p
        y = [0] * width
        for idx in range(d, width):
            acc = x[idx - d]
            for l in range(d):
                j = idx - (d - l)
                if 0 <= j and y[j]:
                    acc -= pc[l] * y[j]
            y[idx] = acc * lead_inv % p
        s = y

    poly = Polynomial.zero(p)
    if h >= 0:
        int_coeffs = [coef(e) for e in range(0, h + 1)]
        poly = Polynomial(int_coeffs, p).compose(P)
    top_out = max(top, -1)
    out = []
    for e in range(top_out, bottom - 1, -1):
        out.append((poly[e] if e >= 0 else s[-e]) % p)
    return LaurentSeries(p, top_out, out)


def series_from_sequence(seq: Sequence[int], p: int, exact: bool = False) -> LaurentSeries:
    """``t^(-1) * sum s_i t^(-i)`` from a finite prefix of a sequence."""
    if exact:
        num = Polynomial(list(reversed(list(seq))), p)
        return LaurentSeries.from_rational(num, Polynomial.monomial(len(seq), p))
    return LaurentSeries(p, -1, list(seq))


def parse_series(text: str, p: int) -> LaurentSeries:
    """Parse ``"offset=h; c0,c1,..."`` where ``c0`` multiplies ``t^h``."""
    m = re.match(r"^\s*offset\s*=\s*(-?\d+)\s*;\s*(.*)$", text, re.S)
    if not m:
        raise ValueError(f"bad series text {text!r}")
    body = m.group(2).strip()
    coeffs = [int(x) for x in re.split(r"[,\s]+", body) if x] if body else []
    return LaurentSeries(p, int(m.group(1)), coeffs)


def format_series(theta: LaurentSeries, n_terms: int | None = None) -> str:
    prec = theta.precision
    n = n_terms if n_terms is not None else (prec if prec != math.inf else 32)
    return f"offset={theta.offset}; " + ",".join(str(c) for c in theta.window(int(n)))
