"""Prime fields F_p and dense polynomials over them."""

from __future__ import annotations

import itertools
import re
from functools import lru_cache

__all__ = [
    "FieldElement",
    "Polynomial",
    "is_prime",
    "check_prime",
    "poly_divmod",
    "is_irreducible",
    "parse_polynomial",
]


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or p > 2**31 or not is_prime(p):
        raise ValueError(f"modulus must be a prime not exceeding 2^31, got {p!r}")
    return p


def _same_modulus(a, b):
    if a.p != b.p:
        raise ValueError(f"mixed moduli {a.p} and {b.p}")


class FieldElement:
    """A residue class modulo a prime."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        check_prime(p)
        self.p = p
        self.value = value % p

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            _same_modulus(self, other)
            return other
        if isinstance(other, int):
            return FieldElement(other, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.value + other.value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.value - other.value, self.p)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.value * other.value, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.p)

    def inv(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElement(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        return FieldElement(pow(self.value, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FieldElement({self.value}, {self.p})"


class Polynomial:
    """Dense polynomial over F_p, coefficients stored lowest degree first.

    Coefficients are kept as plain residues for speed; ``coefficients``
    exposes them as :class:`FieldElement` values.
    """

    __slots__ = ("p", "coeffs")

    def __init__(self, coeffs, p: int):
        check_prime(p)
        c = [int(x) % p for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.p = p
        self.coeffs = tuple(c)

    @classmethod
    def _raw(cls, coeffs: tuple, p: int) -> "Polynomial":
        obj = cls.__new__(cls)
        obj.p = p
        obj.coeffs = coeffs
        return obj

    @classmethod
    def zero(cls, p: int) -> "Polynomial":
        return cls((), p)

    @classmethod
    def constant(cls, c: int, p: int) -> "Polynomial":
        return cls((c,), p)

    @classmethod
    def monomial(cls, d: int, p: int, c: int = 1) -> "Polynomial":
        return cls([0] * d + [c], p)

    @property
    def coefficients(self) -> list[FieldElement]:
        return [FieldElement(c, self.p) for c in self.coeffs]

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            _same_modulus(self, other)
            return other
        if isinstance(other, (int, FieldElement)):
            if isinstance(other, FieldElement):
                _same_modulus(self, other)
            return Polynomial((int(other),), self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        p = self.p
        return Polynomial([(x + (b[i] if i < len(b) else 0)) % p for i, x in enumerate(a)], p)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(tuple((-c) % self.p for c in self.coeffs), self.p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, p = self.coeffs, other.coeffs, self.p
        if not a or not b:
            return Polynomial.zero(p)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Polynomial(out, p)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial.constant(1, self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        return poly_divmod(self, self._coerce(other))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.p == other.p and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == Polynomial((other,), self.p).coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.coeffs, self.p))

    def __call__(self, x):
        """Evaluate at a field value, or compose with another polynomial."""
        if isinstance(x, Polynomial):
            return self.compose(x)
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * int(x) + c) % self.p
        return FieldElement(acc, self.p)

    def compose(self, inner: "Polynomial") -> "Polynomial":
        _same_modulus(self, inner)
        acc = Polynomial.zero(self.p)
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def monic(self) -> "Polynomial":
        if not self.coeffs:
            return self
        inv = pow(self.coeffs[-1], -1, self.p)
        return Polynomial([c * inv for c in self.coeffs], self.p)

    def scale(self, c: int) -> "Polynomial":
        return Polynomial([x * c for x in self.coeffs], self.p)

    def shift(self, d: int) -> "Polynomial":
        """Multiply by t^d."""
        if not self.coeffs:
            return self
        return Polynomial._raw((0,) * d + self.coeffs, self.p)

    def gcd(self, other: "Polynomial") -> "Polynomial":
        a, b = self, self._coerce(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for d in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[d]
            if not c:
                continue
            if d == 0:
                terms.append(str(c))
                continue
            mono = "t" if d == 1 else f"t^{d}"
            terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms)

    def __repr__(self):
        return f"Polynomial({str(self)!r}, p={self.p})"


def poly_divmod(a: Polynomial, b: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Quotient and remainder with ``a = q*b + r`` and ``deg r < deg b``."""
    _same_modulus(a, b)
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    p = a.p
    r = list(a.coeffs)
    db = b.degree
    if len(r) <= db:
        return Polynomial.zero(p), a
    inv = pow(b.coeffs[-1], -1, p)
    bc = b.coeffs
    q = [0] * (len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] * inv % p
        if c:
            q[i - db] = c
            off = i - db
            for j in range(db + 1):
                r[off + j] = (r[off + j] - c * bc[j]) % p
    return Polynomial(q, p), Polynomial(r[:db], p)


def _monic_polys(degree: int, p: int):
    for tail in itertools.product(range(p), repeat=degree):
        yield Polynomial(list(tail) + [1], p)


def is_irreducible(f: Polynomial) -> bool:
    """Irreducibility by trial division by every monic polynomial of degree <= deg/2."""
    if f.degree < 1:
        raise ValueError("irreducibility is undefined for constants")
    for d in range(1, f.degree // 2 + 1):
        for g in _monic_polys(d, f.p):
            if (f % g).is_zero():
                return False
    return True


_TERM = re.compile(r"^([+-]?)(\d*)(t(?:\^(\d+))?)?$")


def parse_polynomial(text: str, p: int) -> Polynomial:
    """Parse ``"c0,c1,...,cd"`` or a human form such as ``"t^2+2t+1"``."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    if "t" not in s:
        parts = s.split(",")
        try:
            return Polynomial([int(x) for x in parts], p)
        except ValueError as exc:
            raise ValueError(f"bad coefficient list {text!r}") from exc
    s = s.replace("*", "")
    coeffs: dict[int, int] = {}
    for tok in re.findall(r"[+-]?[^+-]+", s):
        m = _TERM.match(tok)
        if not m or (not m.group(2) and not m.group(3)):
            raise ValueError(f"bad polynomial term {tok!r} in {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        c = int(m.group(2)) if m.group(2) else 1
        if m.group(3):
            d = int(m.group(4)) if m.group(4) else 1
        else:
            d = 0
        coeffs[d] = coeffs.get(d, 0) + sign * c
    top = max(coeffs)
    return Polynomial([coeffs.get(i, 0) for i in range(top + 1)], p)
